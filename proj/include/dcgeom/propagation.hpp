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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dcgeom/hamiltonian.hpp"
#include "dcgeom/operators.hpp"
#include "dcgeom/parallel.hpp"

namespace dcgeom {

/// Uniform sampling t_k = k * t_end / steps, k = 0..steps (hbar = 1).
class TimeGrid {
 public:
  TimeGrid(double t_end, int steps);

  /// Finest uniform grid over [0, t_end] with step * scale <= product.
  static TimeGrid with_max_product(double t_end, double scale, double product = 0.02, int min_steps = 2);

  double t_end() const { return t_end_; }
  int steps() const { return steps_; }
  double step() const { return t_end_ / steps_; }
  double time(int k) const { return k == steps_ ? t_end_ : t_end_ * k / steps_; }
  std::size_t size() const { return static_cast<std::size_t>(steps_) + 1; }

 private:
  double t_end_;
  int steps_;
};

/// Noiseless (or noisy) evolution sampled on a grid; unitaries[0] is identity.
struct PropagatorTrajectory {
  TimeGrid grid;
  std::vector<Operator> unitaries;
  std::shared_ptr<const ControlHamiltonian> hamiltonian;

  const Operator& final() const { return unitaries.back(); }
};

/// Error curve G(t_k) in coordinates of an orthonormal operator basis.
struct ErrorCurve {
  OperatorBasis basis;
  TimeGrid grid;
  std::vector<Eigen::VectorXd> points;
  /// dG/dt at each sample, i.e. coordinates of R^dag Q R.
  std::vector<Eigen::VectorXd> tangents;

  std::size_t dimension() const { return basis.dimension(); }
  const Eigen::VectorXd& end() const { return points.back(); }
};

/// Quasi-static perturbation strength * direction with |direction| = 1.
struct NoiseSpec {
  NoiseSpec(Operator direction, double strength);
  Operator direction;
  double strength;
};

/// e^{-i H dt} for Hermitian H; 2x2 block-diagonal inputs use closed-form
/// SU(2) exponentials.
Operator exp_hermitian(const Operator& h, double dt);

/// Time-ordered propagation with a fourth-order Magnus integrator; steps are
/// split at Hamiltonian breakpoints and piecewise-constant pieces are
/// exponentiated exactly.
PropagatorTrajectory propagate(const ControlHamiltonian& h, const TimeGrid& grid);

/// H = H0 + strength * direction.
PropagatorTrajectory noisy_propagate(const ControlHamiltonian& h0, const NoiseSpec& noise, const TimeGrid& grid);

/// Accumulates G(t) = int_0^t R^dag Q R on the trajectory's grid. Throws
/// ValidationError when the basis does not span R^dag Q R (residual > 1e-8).
ErrorCurve error_curve(const PropagatorTrajectory& r, const Operator& noise_dir, const OperatorBasis& basis);

/// Final R(T) and the operator int_0^T R^dag Q R dt without storing samples.
struct EndpointState {
  Operator unitary;
  Operator integral;
};
EndpointState propagate_endpoint(const ControlHamiltonian& h, const Operator& noise_dir, const TimeGrid& grid);

/// Largest |G(t_{k+1}) - G(t_k)| / h deviation from one, and the same using
/// a fourth-order central difference of the sampled points.
struct SpeedReport {
  double chord_deviation;
  double derivative_deviation;
};
SpeedReport speed_deviation(const ErrorCurve& curve);

/// |U - R| in the normalized Hilbert-Schmidt norm.
double infidelity(const Operator& u, const Operator& r);
/// min over phi of |U - e^{i phi} R|.
double phase_minimized_infidelity(const Operator& u, const Operator& r);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> epsilons;       // all requested strengths
  std::vector<double> infidelities;   // raw |U - R| per strength
  std::vector<double> phase_minimized;
  std::vector<bool> used;             // point entered the fit
  std::vector<std::string> warnings;
};

/// Least-squares slope of log(infidelity) against log(epsilon) over the points
/// inside [fit_min, fit_max]; points below 1e-14 are dropped with a warning.
ScalingFit fit_scaling(std::span<const double> epsilons, std::span<const double> infidelities,
                       double fit_min = 0.0, double fit_max = 1e300);

ScalingFit scaling_exponent(const ControlHamiltonian& h0, const Operator& noise_dir, std::span<const double> epsilons,
                            const TimeGrid& grid, double fit_min = 0.0, double fit_max = 1e300, int threads = 1);

/// n points log-spaced over [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace dcgeom
