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

#include "dcgeom/propagation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "dcgeom/errors.hpp"

namespace dcgeom {
namespace {

constexpr Complex kI{0.0, 1.0};
const double kSqrt3 = std::sqrt(3.0);

bool block_diagonal_2x2(const Operator& h) {
  const Eigen::Index n = h.rows();
  if (n % 2 != 0) return false;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i / 2 != j / 2 && h(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

void exp_block(const Operator& h, Eigen::Index o, double dt, Operator& out) {
  const Complex a = h(o, o);
  const Complex d = h(o + 1, o + 1);
  const Complex b = h(o, o + 1);
  const double m = 0.5 * (a.real() + d.real());
  const double z = 0.5 * (a.real() - d.real());
  const double x = b.real();
  const double y = -b.imag();
  const double r = std::sqrt(x * x + y * y + z * z);
  const double th = r * dt;
  const double c = std::cos(th);
  // sin(r dt) / r, with the removable singularity at r = 0
  const double s = th > 1e-8 ? std::sin(th) / r : dt * (1.0 - th * th / 6.0);
  const Complex ph = std::exp(-kI * (m * dt));
  out(o, o) = ph * Complex(c, -s * z);
  out(o + 1, o + 1) = ph * Complex(c, s * z);
  out(o, o + 1) = ph * (-kI * s * Complex(x, -y));
  out(o + 1, o) = ph * (-kI * s * Complex(x, y));
}

void require_hermitian_sample(const Operator& h, double t) {
  if (!is_hermitian(h, 1e-10)) throw NotHermitian("H(t) is not Hermitian at t=" + std::to_string(t));
}

/// H just inside [u, v] at an endpoint that is a breakpoint, via the Taylor
/// expansion about the interval midpoint.
Operator one_sided(const ControlHamiltonian& h, double at, double mid) {
  const auto coeffs = h.jet(mid);
  const double s = at - mid;
  Operator out = Operator::Zero(h.dim(), h.dim());
  double p = 1.0;
  for (const auto& c : coeffs) {
    out += p * c;
    p *= s;
  }
  return out;
}

bool is_breakpoint(const ControlHamiltonian& h, double t) {
  const auto& b = h.breakpoints();
  return std::any_of(b.begin(), b.end(), [t](double x) { return std::abs(x - t) <= 1e-12 * std::max(1.0, std::abs(t)); });
}

/// Sub-intervals of [a, b] split at interior breakpoints.
std::vector<double> split_points(const ControlHamiltonian& h, double a, double b) {
  std::vector<double> pts{a};
  const double eps = 1e-12 * std::max(1.0, std::abs(b));
  for (double x : h.breakpoints())
    if (x > a + eps && x < b - eps) pts.push_back(x);
  pts.push_back(b);
  return pts;
}

Operator advance_piece(const ControlHamiltonian& h, double u, double v, const Operator& r) {
  const double dt = v - u;
  if (h.piecewise_constant()) {
    const Operator hm = h.at(0.5 * (u + v));
    require_hermitian_sample(hm, 0.5 * (u + v));
    return exp_hermitian(hm, dt) * r;
  }
  const double t1 = u + dt * (0.5 - kSqrt3 / 6.0);
  const double t2 = u + dt * (0.5 + kSqrt3 / 6.0);
  const Operator h1 = h.at(t1);
  const Operator h2 = h.at(t2);
  require_hermitian_sample(h1, t1);
  require_hermitian_sample(h2, t2);
  // Fourth-order Magnus: Omega = -i dt (H1+H2)/2 - (sqrt3/12) dt^2 [H2, H1].
  Operator heff = 0.5 * (h1 + h2) - kI * (kSqrt3 / 12.0 * dt) * (h2 * h1 - h1 * h2);
  heff = 0.5 * (heff + heff.adjoint()).eval();
  return exp_hermitian(heff, dt) * r;
}

/// int_u^v R^dag Q R for constant H: exact via the eigenbasis of H.
Operator integral_constant(const Operator& h, const Operator& q, double s, const Operator& ru) {
  Eigen::SelfAdjointEigenSolver<Operator> es(h);
  const Operator& w = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  Operator qp = w.adjoint() * q * w;
  for (Eigen::Index a = 0; a < qp.rows(); ++a) {
    for (Eigen::Index b = 0; b < qp.cols(); ++b) {
      const double om = lam[a] - lam[b];
      const double x = om * s;
      Complex phi;
      if (std::abs(x) < 1e-6) {
        phi = s * Complex(1.0 - x * x / 6.0, x / 2.0 - x * x * x / 24.0);
      } else {
        phi = (std::exp(kI * x) - 1.0) / (kI * om);
      }
      qp(a, b) *= phi;
    }
  }
  return ru.adjoint() * (w * qp * w.adjoint()) * ru;
}

Operator integral_piece(const ControlHamiltonian& h, double u, double v, const Operator& ru, const Operator& rv,
                        const Operator& q) {
  const double s = v - u;
  const double mid = 0.5 * (u + v);
  if (h.piecewise_constant()) return integral_constant(h.at(mid), q, s, ru);
  const bool jets = h.has_jets();
  const Operator hu = (jets && is_breakpoint(h, u)) ? one_sided(h, u, mid) : h.at(u);
  const Operator hv = (jets && is_breakpoint(h, v)) ? one_sided(h, v, mid) : h.at(v);
  const Operator fu = ru.adjoint() * q * ru;
  const Operator fv = rv.adjoint() * q * rv;
  const Operator du = ru.adjoint() * commutator_i(hu, q) * ru;
  const Operator dv = rv.adjoint() * commutator_i(hv, q) * rv;
  // Corrected trapezoid (two-point Hermite quadrature), fourth order.
  return (0.5 * s) * (fu + fv) + (s * s / 12.0) * (du - dv);
}

/// Walks the grid, calling visit(k, R(t_k), int_0^{t_k} R^dag Q R) when q is
/// given, or visit(k, R(t_k), {}) otherwise.
template <typename Visit>
void walk(const ControlHamiltonian& h, const TimeGrid& grid, const Operator* q, Visit&& visit) {
  const Eigen::Index dim = h.dim();
  Operator r = Operator::Identity(dim, dim);
  Operator acc = Operator::Zero(dim, dim);
  visit(0, r, acc);
  for (int k = 0; k < grid.steps(); ++k) {
    const auto pts = split_points(h, grid.time(k), grid.time(k + 1));
    for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
      Operator next = advance_piece(h, pts[p], pts[p + 1], r);
      if (q) acc += integral_piece(h, pts[p], pts[p + 1], r, next, *q);
      r = std::move(next);
    }
    visit(k + 1, r, acc);
  }
}

}  // namespace

TimeGrid::TimeGrid(double t_end, int steps) : t_end_(t_end), steps_(steps) {
  if (steps < 2) throw ValidationError("TimeGrid needs at least 2 steps");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("TimeGrid needs a positive finite duration");
}

TimeGrid TimeGrid::with_max_product(double t_end, double scale, double product, int min_steps) {
  if (!(product > 0.0)) throw ValidationError("step product must be positive");
  const double need = std::ceil(t_end * std::max(scale, 1e-12) / product);
  return TimeGrid(t_end, std::max(min_steps, static_cast<int>(std::min(need, 1e8))));
}

NoiseSpec::NoiseSpec(Operator dir, double eps) : direction(std::move(dir)), strength(eps) {
  if (!is_hermitian(direction)) throw NotHermitian("noise direction is not Hermitian");
  if (std::abs(norm(direction) - 1.0) > 1e-10) throw ValidationError("noise direction must have unit norm");
  if (!(strength >= 0.0)) throw ValidationError("noise strength must be non-negative");
}

Operator exp_hermitian(const Operator& h, double dt) {
  const Eigen::Index n = h.rows();
  if (block_diagonal_2x2(h)) {
    Operator out = Operator::Zero(n, n);
    for (Eigen::Index o = 0; o < n; o += 2) exp_block(h, o, dt, out);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Operator> es(h);
  const Eigen::VectorXcd ph = (-kI * dt * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

PropagatorTrajectory propagate(const ControlHamiltonian& h, const TimeGrid& grid) {
  PropagatorTrajectory out{grid, {}, std::make_shared<const ControlHamiltonian>(h)};
  out.unitaries.reserve(grid.size());
  walk(h, grid, nullptr, [&](int, const Operator& r, const Operator&) { out.unitaries.push_back(r); });
  return out;
}

PropagatorTrajectory noisy_propagate(const ControlHamiltonian& h0, const NoiseSpec& noise, const TimeGrid& grid) {
  if (noise.strength == 0.0) return propagate(h0, grid);
  return propagate(h0.with_constant(noise.direction, noise.strength), grid);
}

ErrorCurve error_curve(const PropagatorTrajectory& r, const Operator& noise_dir, const OperatorBasis& basis) {
  if (!r.hamiltonian) throw ValidationError("trajectory carries no Hamiltonian");
  if (std::abs(norm(noise_dir) - 1.0) > 1e-10) throw ValidationError("noise direction must have unit norm");
  if (basis.operator_dim() != static_cast<std::size_t>(noise_dir.rows()))
    throw DimensionMismatch("basis and noise operator dimensions differ");
  const ControlHamiltonian& h = *r.hamiltonian;
  ErrorCurve out{basis, r.grid, {}, {}};
  out.points.reserve(r.grid.size());
  out.tangents.reserve(r.grid.size());
  walk(h, r.grid, &noise_dir, [&](int k, const Operator& u, const Operator& acc) {
    const Operator hi = u.adjoint() * noise_dir * u;
    if (basis.residual(hi) > 1e-8)
      throw ValidationError("basis does not span the interaction-picture noise at t=" + std::to_string(r.grid.time(k)));
    out.tangents.push_back(basis.coordinates(hi));
    out.points.push_back(basis.coordinates(acc));
  });
  return out;
}

EndpointState propagate_endpoint(const ControlHamiltonian& h, const Operator& noise_dir, const TimeGrid& grid) {
  EndpointState s;
  walk(h, grid, &noise_dir, [&](int k, const Operator& u, const Operator& acc) {
    if (k == grid.steps()) {
      s.unitary = u;
      s.integral = acc;
    }
  });
  return s;
}

SpeedReport speed_deviation(const ErrorCurve& c) {
  const double h = c.grid.step();
  SpeedReport rep{0.0, 0.0};
  const auto n = c.points.size();
  for (std::size_t k = 0; k + 1 < n; ++k)
    rep.chord_deviation = std::max(rep.chord_deviation, std::abs((c.points[k + 1] - c.points[k]).norm() / h - 1.0));
  for (std::size_t k = 2; k + 2 < n; ++k) {
    const Eigen::VectorXd d = (-c.points[k + 2] + 8.0 * c.points[k + 1] - 8.0 * c.points[k - 1] + c.points[k - 2]) / (12.0 * h);
    rep.derivative_deviation = std::max(rep.derivative_deviation, std::abs(d.norm() - 1.0));
  }
  return rep;
}

double infidelity(const Operator& u, const Operator& r) {
  if (u.rows() != r.rows() || u.cols() != r.cols()) throw DimensionMismatch("infidelity: dimension mismatch");
  if (!is_unitary(u, 1e-8) || !is_unitary(r, 1e-8)) throw NotUnitary("infidelity: input is not unitary");
  return norm(u - r);
}

double phase_minimized_infidelity(const Operator& u, const Operator& r) {
  if (u.rows() != r.rows() || u.cols() != r.cols()) throw DimensionMismatch("infidelity: dimension mismatch");
  if (!is_unitary(u, 1e-8) || !is_unitary(r, 1e-8)) throw NotUnitary("infidelity: input is not unitary");
  const Complex tr = (r.adjoint() * u).trace();
  const Complex ph = std::abs(tr) > 0.0 ? tr / std::abs(tr) : Complex(1.0, 0.0);
  return norm(u - ph * r);
}

ScalingFit fit_scaling(std::span<const double> eps, std::span<const double> inf, double fit_min, double fit_max) {
  if (eps.size() != inf.size()) throw DimensionMismatch("fit_scaling: length mismatch");
  ScalingFit fit;
  fit.epsilons.assign(eps.begin(), eps.end());
  fit.infidelities.assign(inf.begin(), inf.end());
  fit.used.assign(eps.size(), false);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] < fit_min || eps[i] > fit_max) continue;
    if (!(inf[i] >= 1e-14)) {
      fit.warnings.push_back("infidelity " + std::to_string(inf[i]) + " at epsilon=" + std::to_string(eps[i]) +
                             " is below 1e-14; point dropped");
      continue;
    }
    const double x = std::log(eps[i]);
    const double y = std::log(inf[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
    fit.used[i] = true;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || std::abs(den) < 1e-300) throw ValidationError("degenerate scaling fit: fewer than two usable points");
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

ScalingFit scaling_exponent(const ControlHamiltonian& h0, const Operator& noise_dir, std::span<const double> eps,
                            const TimeGrid& grid, double fit_min, double fit_max, int threads) {
  if (eps.empty()) throw ValidationError("epsilon list is empty");
  for (double e : eps)
    if (!(e > 0.0)) throw ValidationError("noise strengths must be positive");
  if (std::abs(norm(noise_dir) - 1.0) > 1e-10) throw ValidationError("noise direction must have unit norm");

  const Operator r = propagate_endpoint(h0, noise_dir, grid).unitary;
  struct Sample {
    double raw = 0.0;
    double phase = 0.0;
  };
  const auto samples = parallel_map(
      eps.size(),
      [&](std::size_t i) {
        Operator u = Operator::Identity(h0.dim(), h0.dim());
        walk(h0.with_constant(noise_dir, eps[i]), grid, nullptr, [&](int k, const Operator& x, const Operator&) {
          if (k == grid.steps()) u = x;
        });
        return Sample{infidelity(u, r), phase_minimized_infidelity(u, r)};
      },
      threads);
  std::vector<double> raw;
  std::vector<double> ph;
  for (const auto& s : samples) {
    raw.push_back(s.raw);
    ph.push_back(s.phase);
  }
  ScalingFit fit = fit_scaling(eps, raw, fit_min, fit_max);
  fit.phase_minimized = std::move(ph);
  return fit;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw ValidationError("log_spaced: need 0 < lo <= hi and n >= 1");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))));
  }
  return out;
}

}  // namespace dcgeom
