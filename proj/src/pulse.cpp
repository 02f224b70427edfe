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

#include "dcgeom/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dcgeom/errors.hpp"

namespace dcgeom {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_range(const Pulse& p, double t) {
  const double T = duration(p);
  if (!(t >= -1e-12 * std::max(1.0, T)) || !(t <= T * (1.0 + 1e-12) + 1e-15))
    throw ValidationError("pulse evaluated at t=" + std::to_string(t) + " outside [0, " + std::to_string(T) + "]");
}

/// Segment index containing t in one period of a square sequence.
const SquareSegment& segment_at(const SquarePulseSequence& s, double t) {
  const double per = s.period();
  double local = std::fmod(std::max(t, 0.0), per);
  // t = T lands on the last segment rather than wrapping to the first.
  if (t >= s.duration() - 1e-12 * per) local = per;
  double acc = 0.0;
  for (const auto& seg : s.segments) {
    acc += seg.duration;
    if (local < acc) return seg;
  }
  return s.segments.back();
}

Jet smooth_jet(const SmoothPulse& p, double t) {
  Jet out(p.c0);
  const double w = std::numbers::pi / p.period;
  for (const auto& term : p.terms) {
    Jet u = Jet::variable(t) * w;
    u[0] += term.phi;
    Jet s, c;
    sincos(u, s, c);
    Jet den = s * s * (term.a * term.a);
    den[0] += 1.0;
    out += reciprocal(den) * term.c;
  }
  return out;
}

double smooth_value(const SmoothPulse& p, double t) {
  double v = p.c0;
  const double w = std::numbers::pi / p.period;
  for (const auto& term : p.terms) {
    const double s = std::sin(w * t + term.phi);
    v += term.c / (1.0 + term.a * term.a * s * s);
  }
  return v;
}

std::size_t waveform_interval(const WaveformPulse& w, double t) {
  auto it = std::upper_bound(w.times.begin(), w.times.end(), t);
  std::size_t i = it == w.times.begin() ? 0 : static_cast<std::size_t>(it - w.times.begin()) - 1;
  return std::min(i, w.times.size() - 2);
}

}  // namespace

double SquarePulseSequence::period() const {
  double p = 0.0;
  for (const auto& s : segments) p += s.duration;
  return p;
}

void validate(const Pulse& p) {
  std::visit(overloaded{
                 [](const SquarePulseSequence& s) {
                   if (s.segments.empty()) throw ValidationError("square pulse has no segments");
                   if (s.n_sym < 1) throw ValidationError("n_sym must be >= 1");
                   for (const auto& seg : s.segments) {
                     if (!(seg.duration > 0.0)) throw ValidationError("square segment durations must be positive");
                     if (!std::isfinite(seg.omega)) throw ValidationError("square segment amplitude is not finite");
                   }
                 },
                 [](const SmoothPulse& s) {
                   if (!(s.period > 0.0)) throw ValidationError("smooth pulse period must be positive");
                   if (s.n_sym < 1) throw ValidationError("n_sym must be >= 1");
                   for (const auto& t : s.terms)
                     if (!std::isfinite(t.c) || !std::isfinite(t.a) || !std::isfinite(t.phi))
                       throw ValidationError("smooth pulse parameter is not finite");
                 },
                 [](const WaveformPulse& w) {
                   if (w.times.size() < 2 || w.times.size() != w.omegas.size())
                     throw ValidationError("waveform needs at least two (t, omega) samples");
                   if (w.times.front() != 0.0) throw ValidationError("waveform must start at t = 0");
                   for (std::size_t i = 1; i < w.times.size(); ++i)
                     if (!(w.times[i] > w.times[i - 1])) throw ValidationError("waveform times must increase strictly");
                 },
             },
             p);
}

double duration(const Pulse& p) {
  return std::visit([](const auto& x) { return x.duration(); }, p);
}

PulseSample eval_pulse(const Pulse& p, double t) {
  check_range(p, t);
  return std::visit(overloaded{
                        [&](const SquarePulseSequence& s) { return PulseSample{segment_at(s, t).omega, 0.0}; },
                        [&](const SmoothPulse& s) {
                          const Jet j = smooth_jet(s, t);
                          return PulseSample{j[0], j[1]};
                        },
                        [&](const WaveformPulse& w) {
                          const std::size_t i = waveform_interval(w, t);
                          const double slope = (w.omegas[i + 1] - w.omegas[i]) / (w.times[i + 1] - w.times[i]);
                          return PulseSample{w.omegas[i] + slope * (t - w.times[i]), slope};
                        },
                    },
                    p);
}

Jet pulse_jet(const Pulse& p, double t) {
  check_range(p, t);
  return std::visit(overloaded{
                        [&](const SquarePulseSequence& s) { return Jet(segment_at(s, t).omega); },
                        [&](const SmoothPulse& s) { return smooth_jet(s, t); },
                        [&](const WaveformPulse& w) {
                          const std::size_t i = waveform_interval(w, t);
                          const double slope = (w.omegas[i + 1] - w.omegas[i]) / (w.times[i + 1] - w.times[i]);
                          Jet j(w.omegas[i] + slope * (t - w.times[i]));
                          j[1] = slope;
                          return j;
                        },
                    },
                    p);
}

std::vector<double> breakpoints(const Pulse& p) {
  return std::visit(overloaded{
                        [](const SquarePulseSequence& s) {
                          std::vector<double> out;
                          double t = 0.0;
                          for (int r = 0; r < s.n_sym; ++r)
                            for (const auto& seg : s.segments) {
                              t += seg.duration;
                              out.push_back(t);
                            }
                          if (!out.empty()) out.pop_back();
                          return out;
                        },
                        [](const SmoothPulse&) { return std::vector<double>{}; },
                        [](const WaveformPulse& w) {
                          return std::vector<double>(w.times.begin() + 1, w.times.end() - 1);
                        },
                    },
                    p);
}

bool is_piecewise_constant(const Pulse& p) { return std::holds_alternative<SquarePulseSequence>(p); }

double max_abs_amplitude(const Pulse& p) {
  return std::visit(overloaded{
                        [](const SquarePulseSequence& s) {
                          double m = 0.0;
                          for (const auto& seg : s.segments) m = std::max(m, std::abs(seg.omega));
                          return m;
                        },
                        [](const SmoothPulse& s) {
                          double m = 0.0;
                          constexpr int kSamples = 4096;
                          for (int i = 0; i <= kSamples; ++i)
                            m = std::max(m, std::abs(smooth_value(s, s.period * i / kSamples)));
                          return m;
                        },
                        [](const WaveformPulse& w) {
                          double m = 0.0;
                          for (double x : w.omegas) m = std::max(m, std::abs(x));
                          return m;
                        },
                    },
                    p);
}

ControlTerm pulse_term(Operator op, const Pulse& pulse) {
  validate(pulse);
  ControlTerm term;
  term.op = std::move(op);
  if (const auto* s = std::get_if<SmoothPulse>(&pulse)) {
    term.value = [s = *s](double t) { return smooth_value(s, t); };
  } else {
    term.value = [pulse](double t) { return eval_pulse(pulse, t).omega; };
  }
  term.jet = [pulse](double t) { return pulse_jet(pulse, t); };
  term.smoothness = std::holds_alternative<WaveformPulse>(pulse) ? 1 : std::numeric_limits<int>::max();
  return term;
}

double step_rotation_angle(double omega1, double omega2, double e1, double e2) {
  if (e1 * e2 == 0.0) throw ValidationError("step rotation angle needs E1 * E2 != 0");
  const double s = std::sqrt(0.5 * (e1 * e1 + e2 * e2)) / (e1 * e2);
  return std::atan(s * omega2) - std::atan(s * omega1);
}

}  // namespace dcgeom
