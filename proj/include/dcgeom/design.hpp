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

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dcgeom/frenet.hpp"
#include "dcgeom/ising.hpp"
#include "dcgeom/propagation.hpp"
#include "dcgeom/pulse.hpp"

namespace dcgeom {

enum class Ansatz { kSmooth, kSquare };

std::string to_string(Ansatz a);
Ansatz ansatz_from_string(const std::string& s);

struct OptimizerSettings {
  int starts = 32;
  /// Simplex iterations per start before the least-squares polish.
  int max_iterations = 600;
  /// Acceptance threshold on the design objective (closure and gate terms).
  double tolerance = 1e-9;
  /// Objective evaluations allowed in the least-squares polish.
  int polish_evaluations = 600;
  std::uint64_t seed = 20260101;
  int threads = 1;
};

struct DesignProblem {
  IsingModel model;
  Ansatz ansatz = Ansatz::kSmooth;
  int n_sym = 3;
  int k = 1;
  /// Lorentzian terms in the smooth ansatz (2, or 3 with the optional term).
  int lorentzians = 2;
  /// Segments per period in the square ansatz.
  int square_segments = 2;
  /// Pauli label of the target gate, up to global phase.
  std::string target_gate = "ZI";
  /// Per-parameter [lower, upper]; empty selects default_bounds().
  std::vector<std::pair<double, double>> bounds;
  OptimizerSettings optimizer;
  /// Grid resolution (step * energy scale) for verification.
  double grid_product = 0.01;
  /// Coarser resolution used inside the search objective.
  double search_grid_product = 0.05;
  std::vector<double> epsilons = log_spaced(1e-4, 1e-1, 12);
  double fit_min = 1e-4;
  double fit_max = 1e-2;

  /// Throws ValidationError for gcd(k, n_sym) != 1, bad bounds, unknown gate.
  void validate() const;
  std::size_t parameter_count() const;
  std::vector<std::string> parameter_names() const;
  std::vector<std::pair<double, double>> default_bounds() const;
  const std::vector<std::pair<double, double>>& effective_bounds() const;
};

/// Smooth: c0, (c_i, a_i, phi_i) per term, t_p. Square: (omega_j, dt_j) per
/// segment. The result repeats the period n_sym times.
Pulse pulse_from_parameters(const DesignProblem& problem, std::span<const double> x);
/// The same with a single period.
Pulse period_from_parameters(const DesignProblem& problem, std::span<const double> x);

/// Frame right after an abrupt step omega1 -> omega2 of the Ising drive, given
/// the frame right before it. e5/e6 turn by step_rotation_angle; e2..e5 also
/// change sign when the drive changes sign (kappa_1 stays nonnegative).
FrenetFrame frame_after_step(const FrenetFrame& before, double omega1, double omega2, double e1, double e2);

struct ClosureDiagnostics {
  /// sqrt(frame_term^2 + displacement_term^2).
  double residual = 0.0;
  /// Angle (radians) between the period map and its nearest n-fold rotation.
  double frame_term = 0.0;
  /// |fixed-subspace part of G(t_p)| / T.
  double displacement_term = 0.0;
  /// Phase-minimized distance of R(t_p)^n from the target gate.
  double gate_term = 0.0;
  /// Rotation angles of the period map, one per plane, in [0, pi].
  std::vector<double> angles;
  std::vector<double> snapped;
  /// True when the map came from the adjoint action (a frame was degenerate).
  bool adjoint_fallback = false;
  double period = 0.0;
  Eigen::VectorXd period_displacement;
  Eigen::MatrixXd period_map;
};

/// Closure bookkeeping for one period repeated n_sym times. Soundness:
///   |G(T)| <= 2 n_sym T residual.
ClosureDiagnostics symmetric_closure_residual(const DesignProblem& problem, std::span<const double> x);

/// Least-squares vector minimized by design(): frame angles, fixed-subspace
/// displacement, gate mismatch entries, and a bound penalty.
Eigen::VectorXd design_residuals(const DesignProblem& problem, std::span<const double> x);

struct GateClassification {
  std::string label;
  double distance = 0.0;
  /// e^{i phase} target is the closest phase-rotated target.
  double phase = 0.0;
  std::vector<std::pair<std::string, double>> distances;
};

inline const std::vector<std::string> kDefaultGateTargets{"II", "ZI", "IZ", "ZZ"};

GateClassification extract_gate(const Operator& r_final,
                                std::span<const std::string> targets = kDefaultGateTargets);

struct VerificationReport {
  double closure = 0.0;           // |G(T)|
  double closure_fine = 0.0;      // |G(T)| on a 2x finer grid
  double duration = 0.0;
  double gate_distance = 0.0;     // to the target, phase minimized
  std::string gate_label;
  ScalingFit sweep;
};

VerificationReport verify_pulse(const IsingModel& model, const Pulse& pulse, std::span<const double> epsilons,
                                double fit_min, double fit_max, double grid_product, const std::string& target_gate,
                                int threads = 1);

struct DesignResult {
  bool converged = false;
  std::vector<double> parameters;
  std::vector<std::string> parameter_names;
  Pulse pulse;
  double objective = 0.0;
  ClosureDiagnostics closure;
  Operator gate;
  GateClassification classification;
  VerificationReport verification;
  int start_index = -1;
  int starts_run = 0;
  std::vector<double> start_objectives;
};

/// Multi-start simplex search with a least-squares polish. The lowest-index
/// converged start wins; otherwise the best objective is returned with
/// converged = false. Deterministic for a fixed seed, independent of threads.
DesignResult design(const DesignProblem& problem);

}  // namespace dcgeom
