// Copyright 2026 The dcgeom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <variant>
#include <vector>

#include "dcgeom/hamiltonian.hpp"
#include "dcgeom/taylor.hpp"

namespace dcgeom {

struct SquareSegment {
  double omega;
  double duration;
};

/// One period of square segments, repeated n_sym times.
struct SquarePulseSequence {
  std::vector<SquareSegment> segments;
  int n_sym = 1;

  double period() const;
  double duration() const { return n_sym * period(); }
};

/// c / (1 + a^2 sin^2(pi t / t_p + phi))
struct Lorentzian {
  double c;
  double a;
  double phi;
};

/// Periodic sum of Lorentzian-like bumps on a constant offset.
struct SmoothPulse {
  double c0 = 0.0;
  std::vector<Lorentzian> terms;
  double period = 1.0;
  int n_sym = 1;

  double duration() const { return n_sym * period; }
};

/// Externally supplied samples, linearly interpolated.
struct WaveformPulse {
  std::vector<double> times;
  std::vector<double> omegas;

  double duration() const { return times.empty() ? 0.0 : times.back(); }
};

using Pulse = std::variant<SquarePulseSequence, SmoothPulse, WaveformPulse>;

struct PulseSample {
  double omega;
  double domega;
};

/// Throws ValidationError on malformed parameters (non-positive durations or
/// period, n_sym < 1, unsorted waveform times).
void validate(const Pulse& p);

double duration(const Pulse& p);

/// Omega(t) and dOmega/dt for 0 <= t <= T; throws ValidationError outside.
/// Square pulses report zero slope (jumps are handled as breakpoints).
PulseSample eval_pulse(const Pulse& p, double t);

/// Taylor series of Omega around t (right-continuous at jumps).
Jet pulse_jet(const Pulse& p, double t);

std::vector<double> breakpoints(const Pulse& p);
bool is_piecewise_constant(const Pulse& p);
double max_abs_amplitude(const Pulse& p);

/// Coefficient `pulse` times `op` as a Hamiltonian term.
ControlTerm pulse_term(Operator op, const Pulse& pulse);

/// Closed form of the e5-e6 frame rotation caused by an abrupt step
/// Omega: omega1 -> omega2 in the two-qubit Ising model:
///   phi = atan(s omega2) - atan(s omega1),  s = sqrt((E1^2+E2^2)/2) / (E1 E2).
double step_rotation_angle(double omega1, double omega2, double e1, double e2);

}  // namespace dcgeom
