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

#include "dcgeom/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "dcgeom/errors.hpp"

namespace dcgeom {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using OperatorSeries = std::vector<Operator>;

/// Completes d-1 orthonormal columns to a positively oriented basis.
Eigen::VectorXd oriented_completion(const Eigen::MatrixXd& partial) {
  const Eigen::Index d = partial.rows();
  Eigen::VectorXd best;
  double best_norm = -1.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(d, j);
    for (int pass = 0; pass < 2; ++pass) v -= partial * (partial.transpose() * v);
    const double n = v.norm();
    if (n > best_norm) {
      best_norm = n;
      best = v / n;
    }
  }
  Eigen::MatrixXd full(d, d);
  full << partial, best;
  if (full.determinant() < 0.0) best = -best;
  return best;
}

/// Fills columns [from, d) with any orthonormal completion.
void complete_arbitrarily(Eigen::MatrixXd& m, int from) {
  const Eigen::Index d = m.rows();
  for (Eigen::Index c = from; c < d; ++c) {
    Eigen::VectorXd best;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      Eigen::VectorXd v = Eigen::VectorXd::Unit(d, j);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index k = 0; k < c; ++k) v -= m.col(k).dot(v) * m.col(k);
      if (v.norm() > best_norm) {
        best_norm = v.norm();
        best = v / best_norm;
      }
    }
    m.col(c) = best;
  }
}

Eigen::MatrixXd nearest_orthogonal(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// Index window of `width` samples around k, kept inside [lo, hi].
std::pair<int, int> window(int k, int width, int lo, int hi) {
  int a = k - width / 2;
  a = std::max(lo, std::min(a, hi - width + 1));
  const int b = std::min(hi, a + width - 1);
  return {a, b};
}

int piece_index(const std::vector<double>& breaks, double t) {
  int s = 0;
  for (double b : breaks)
    if (t >= b - 1e-12 * std::max(1.0, std::abs(b))) ++s;
  return s;
}

double hs_inner(const Operator& x, const Operator& y) {
  return (x.conjugate().cwiseProduct(y)).sum().real() / static_cast<double>(x.rows());
}

}  // namespace

std::vector<double> fd_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  if (n <= m) throw ValidationError("fd_weights: not enough nodes for the derivative order");
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

std::vector<Operator> derivative_operators_at(const ControlHamiltonian& h, const Operator& q, int n_max, double t) {
  if (n_max < 1 || n_max > static_cast<int>(Jet::kSize)) throw ValidationError("derivative_operators: n_max out of range");
  if (n_max - 2 > h.smoothness())
    throw PreconditionViolation("pulse coefficients are not differentiable to order " + std::to_string(n_max - 2));
  const auto hs = h.jet(t);
  // Taylor series of (C + d/dt)^{n-1} Q around t; each step consumes one order.
  OperatorSeries m(static_cast<std::size_t>(n_max), Operator::Zero(q.rows(), q.cols()));
  m[0] = q;
  std::vector<Operator> out{q};
  for (int n = 2; n <= n_max; ++n) {
    const auto len = static_cast<std::size_t>(n_max - n + 1);
    OperatorSeries next(len, Operator::Zero(q.rows(), q.cols()));
    for (std::size_t j = 0; j < len; ++j) {
      next[j] = static_cast<double>(j + 1) * m[j + 1];
      for (std::size_t a = 0; a <= j; ++a) {
        if (hs[a].cwiseAbs().maxCoeff() == 0.0) continue;
        next[j] += kI * (hs[a] * m[j - a] - m[j - a] * hs[a]);
      }
    }
    m = std::move(next);
    out.push_back(m[0]);
  }
  return out;
}

std::vector<std::function<Operator(double)>> derivative_operators(const ControlHamiltonian& h, const Operator& q,
                                                                  int n_max) {
  std::vector<std::function<Operator(double)>> out;
  for (int n = 1; n <= n_max; ++n)
    out.emplace_back([h, q, n, n_max](double t) { return derivative_operators_at(h, q, n_max, t)[n - 1]; });
  return out;
}

FrenetFrame frame_from_derivatives(const std::vector<Eigen::VectorXd>& derivs, int d, double time) {
  if (d < 1) throw ValidationError("frame dimension must be positive");
  FrenetFrame f;
  f.time = time;
  f.vectors = Eigen::MatrixXd::Zero(d, d);
  const int usable = std::min<int>(static_cast<int>(derivs.size()), d - 1 > 0 ? d - 1 : 1);
  int rank = 0;
  for (int n = 0; n < usable; ++n) {
    Eigen::VectorXd v = derivs[static_cast<std::size_t>(n)];
    if (v.size() != d) throw DimensionMismatch("derivative vector has the wrong dimension");
    const double scale = std::max(1.0, v.norm());
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < rank; ++j) v -= f.vectors.col(j).dot(v) * f.vectors.col(j);
    const double vn = v.norm();
    if (vn <= kFrameDropTolerance * scale) break;
    f.vectors.col(rank++) = v / vn;
  }
  if (d == 1) {
    f.rank = rank;
    return f;
  }
  if (rank == d - 1) {
    f.vectors.col(d - 1) = oriented_completion(f.vectors.leftCols(d - 1));
    rank = d;
  } else {
    complete_arbitrarily(f.vectors, rank);
  }
  f.rank = rank;
  return f;
}

FrenetFrame frame_at(const ControlHamiltonian& h, const Operator& r, const Operator& q, const OperatorBasis& basis,
                     double t_eval) {
  const int d = static_cast<int>(basis.dimension());
  const int n_max = std::max(1, d - 1);
  const auto ops = derivative_operators_at(h, q, n_max, t_eval);
  std::vector<Eigen::VectorXd> derivs;
  derivs.reserve(ops.size());
  for (const auto& op : ops) derivs.push_back(basis.coordinates(r.adjoint() * op * r));
  return frame_from_derivatives(derivs, d, t_eval);
}

namespace {

FrameSeries finish_series(FrameSeries s) {
  int eff = 0;
  for (const auto& f : s.frames) eff = std::max(eff, f.rank);
  s.effective_dimension = eff;
  s.flagged.assign(s.frames.size(), false);
  for (std::size_t k = 0; k < s.frames.size(); ++k) s.flagged[k] = s.frames[k].rank < eff;
  // Isolated degenerate samples take the re-orthonormalized mean of their
  // neighbours; they stay flagged.
  for (std::size_t k = 1; k + 1 < s.frames.size(); ++k) {
    if (!s.flagged[k] || s.flagged[k - 1] || s.flagged[k + 1]) continue;
    if (s.piece[k - 1] != s.piece[k + 1]) continue;
    s.frames[k].vectors = nearest_orthogonal(0.5 * (s.frames[k - 1].vectors + s.frames[k + 1].vectors));
  }
  return s;
}

}  // namespace

FrameSeries frames_from_operators(const PropagatorTrajectory& traj, const Operator& q, const OperatorBasis& basis) {
  if (!traj.hamiltonian) throw ValidationError("trajectory carries no Hamiltonian");
  const auto& h = *traj.hamiltonian;
  FrameSeries s{traj.grid, {}, {}, {}, 0};
  s.frames.reserve(traj.unitaries.size());
  for (std::size_t k = 0; k < traj.unitaries.size(); ++k) {
    const double t = traj.grid.time(static_cast<int>(k));
    s.frames.push_back(frame_at(h, traj.unitaries[k], q, basis, t));
    s.piece.push_back(piece_index(h.breakpoints(), t));
  }
  return finish_series(std::move(s));
}

FrameSeries frames_from_curve(const ErrorCurve& curve) {
  const int d = static_cast<int>(curve.dimension());
  const int n = static_cast<int>(curve.tangents.size());
  const double h = curve.grid.step();
  FrameSeries s{curve.grid, {}, {}, std::vector<int>(static_cast<std::size_t>(n), 0), 0};
  for (int k = 0; k < n; ++k) {
    std::vector<Eigen::VectorXd> derivs{curve.tangents[static_cast<std::size_t>(k)]};
    for (int m = 1; m <= d - 2; ++m) {
      const int width = std::min(n, m + 7 - (m % 2));
      const auto [a, b] = window(k, width, 0, n - 1);
      std::vector<double> x;
      for (int i = a; i <= b; ++i) x.push_back((i - k) * h);
      const auto w = fd_weights(0.0, x, m);
      Eigen::VectorXd dv = Eigen::VectorXd::Zero(d);
      for (int i = a; i <= b; ++i) dv += w[static_cast<std::size_t>(i - a)] * curve.tangents[static_cast<std::size_t>(i)];
      derivs.push_back(dv);
    }
    s.frames.push_back(frame_from_derivatives(derivs, d, curve.grid.time(k)));
  }
  return finish_series(std::move(s));
}

CurvatureProfile curvatures_numeric(const FrameSeries& fs) {
  const int n = static_cast<int>(fs.frames.size());
  if (n < 3) throw ValidationError("curvatures_numeric needs at least three samples");
  const int d = static_cast<int>(fs.frames.front().vectors.cols());
  const int eff = fs.effective_dimension;
  const double h = fs.grid.step();
  CurvatureProfile out{fs.grid, {}, std::vector<bool>(static_cast<std::size_t>(n), false), eff};
  constexpr int kWidth = 7;
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd kap = Eigen::VectorXd::Constant(std::max(d - 1, 0), kNaN);
    // Restrict the stencil to the smooth piece containing k.
    int lo = k;
    int hi = k;
    while (lo > 0 && fs.piece[static_cast<std::size_t>(lo - 1)] == fs.piece[static_cast<std::size_t>(k)]) --lo;
    while (hi + 1 < n && fs.piece[static_cast<std::size_t>(hi + 1)] == fs.piece[static_cast<std::size_t>(k)]) ++hi;
    const int width = std::min(kWidth, hi - lo + 1);
    bool bad = width < 3;
    std::pair<int, int> win{k, k};
    if (!bad) {
      win = window(k, width, lo, hi);
      for (int i = win.first; i <= win.second; ++i) bad = bad || fs.flagged[static_cast<std::size_t>(i)];
    }
    if (bad) {
      out.flagged[static_cast<std::size_t>(k)] = true;
    } else {
      std::vector<double> x;
      for (int i = win.first; i <= win.second; ++i) x.push_back((i - k) * h);
      const auto w = fd_weights(0.0, x, 1);
      const int top = std::min(eff, d);
      for (int c = 0; c + 1 < top; ++c) {
        Eigen::VectorXd de = Eigen::VectorXd::Zero(d);
        for (int i = win.first; i <= win.second; ++i)
          de += w[static_cast<std::size_t>(i - win.first)] * fs.frames[static_cast<std::size_t>(i)].vectors.col(c);
        kap[c] = de.dot(fs.frames[static_cast<std::size_t>(k)].vectors.col(c + 1));
      }
      // A curve confined to an eff-dimensional subspace has kappa_eff = 0.
      if (eff < d && eff >= 1) kap[eff - 1] = 0.0;
    }
    out.kappas.push_back(std::move(kap));
  }
  return out;
}

double RecursionState::pattern_violation() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t n = i + 1;
    const Operator mix = (n % 4 == 0 || n % 4 == 1) ? Operator(a[i] * q - q * a[i]) : Operator(a[i] * q + q * a[i]);
    worst = std::max(worst, mix.cwiseAbs().maxCoeff());
  }
  return worst;
}

RecursionResult recursion_curvatures(const ControlHamiltonian& h, const Operator& q, int n_max, double t) {
  if (n_max < 2 || n_max > static_cast<int>(Jet::kSize)) throw ValidationError("recursion_curvatures: n_max out of range");
  const Eigen::Index dim = q.rows();
  const Operator id = Operator::Identity(dim, dim);
  if ((q * q - id).cwiseAbs().maxCoeff() > 1e-10) throw PreconditionViolation("recursion requires Q^2 = 1");
  const auto hs = h.jet(t);
  double scale = 1.0;
  for (const auto& c : hs) scale = std::max(scale, c.cwiseAbs().maxCoeff());
  for (const auto& c : hs) {
    if ((c * q + q * c).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw PreconditionViolation(
          "recursion requires {H0, Q} = 0; transform to a frame where the noise anticommutes with the Hamiltonian");
  }

  const std::size_t len = Jet::kSize;
  OperatorSeries a(len, Operator::Zero(dim, dim));
  a[0] = id;
  RecursionResult res;
  res.state.q = q;
  res.state.a.push_back(id);
  for (int n = 1; n < n_max; ++n) {
    OperatorSeries x(len, Operator::Zero(dim, dim));
    if (n % 2 == 1) {
      for (std::size_t j = 0; j < len; ++j)
        for (std::size_t b = 0; b <= j; ++b) x[j] += kI * (hs[b] * a[j - b] + a[j - b] * hs[b]);
    } else {
      for (std::size_t j = 0; j + 1 < len; ++j) x[j] = static_cast<double>(j + 1) * a[j + 1];
    }
    Jet sq;
    for (std::size_t j = 0; j < len; ++j)
      for (std::size_t b = 0; b <= j; ++b) sq[j] += hs_inner(x[b], x[j - b]);
    if (!(sq[0] > 1e-24)) throw NumericalDegeneracy("curvature recursion hit kappa_" + std::to_string(n) + " = 0", t);
    const Jet inv = reciprocal(sqrt(sq));
    res.kappas.push_back(std::sqrt(sq[0]));
    OperatorSeries next(len, Operator::Zero(dim, dim));
    for (std::size_t j = 0; j < len; ++j)
      for (std::size_t b = 0; b <= j; ++b) next[j] += inv[b] * x[j - b];
    a = std::move(next);
    res.state.a.push_back(a[0]);
  }
  return res;
}

double closure_residual(const ErrorCurve& curve) { return curve.points.empty() ? 0.0 : curve.end().norm(); }

BlockCurves block_decompose(const ErrorCurve& curve6, const PropagatorTrajectory& traj) {
  const auto& basis = curve6.basis;
  if (basis.dimension() != 6 || basis.operator_dim() != 4)
    throw PreconditionViolation("block decomposition expects the six-dimensional two-qubit error space");
  for (const auto& u : traj.unitaries) {
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j)
        if (i / 2 != j / 2 && std::abs(u(i, j)) > 1e-12) throw PreconditionViolation("Hamiltonian is not block diagonal");
  }
  if (traj.hamiltonian && traj.hamiltonian->has_jets()) {
    for (const auto& term : traj.hamiltonian->terms())
      for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j)
          if (i / 2 != j / 2 && std::abs(term.op(i, j)) > 0.0) throw PreconditionViolation("Hamiltonian is not block diagonal");
  }

  BlockCurves out{curve6, curve6, {}, {}};
  // Block Paulis in the order their single-qubit counterparts appear in the 6D basis.
  std::vector<std::pair<std::size_t, char>> order;
  for (char p : {'X', 'Y', 'Z'}) {
    const auto single = basis.index_of(PauliString::parse(std::string("I") + p));
    const auto coupled = basis.index_of(PauliString::parse(std::string("Z") + p));
    if (!single || !coupled) throw PreconditionViolation("basis lacks the I/Z x Pauli labels of the Ising error space");
    order.emplace_back(*single, p);
  }
  std::sort(order.begin(), order.end());
  std::vector<PauliString> labels;
  for (std::size_t i = 0; i < 3; ++i) {
    const char p = order[i].second;
    out.single_index[i] = order[i].first;
    out.coupled_index[i] = *basis.index_of(PauliString::parse(std::string("Z") + p));
    labels.push_back(PauliString::parse(std::string(1, p)));
  }
  if (std::abs(curve6.tangents.front()[static_cast<Eigen::Index>(*basis.index_of(PauliString::parse("IZ")))] - 1.0) > 1e-10)
    throw PreconditionViolation("block decomposition expects Z2 noise");

  const OperatorBasis b3 = OperatorBasis::from_pauli_strings(labels);
  auto split = [&](const std::vector<Eigen::VectorXd>& v, double sign) {
    std::vector<Eigen::VectorXd> r;
    r.reserve(v.size());
    for (const auto& x : v) {
      Eigen::Vector3d g;
      for (std::size_t i = 0; i < 3; ++i)
        g[static_cast<Eigen::Index>(i)] = x[static_cast<Eigen::Index>(out.single_index[i])] +
                                          sign * x[static_cast<Eigen::Index>(out.coupled_index[i])];
      r.emplace_back(g);
    }
    return r;
  };
  out.lower = ErrorCurve{b3, curve6.grid, split(curve6.points, 1.0), split(curve6.tangents, 1.0)};
  out.upper = ErrorCurve{b3, curve6.grid, split(curve6.points, -1.0), split(curve6.tangents, -1.0)};
  return out;
}

std::vector<Eigen::VectorXd> reconstruct_from_blocks(const BlockCurves& b, std::size_t dimension) {
  std::vector<Eigen::VectorXd> out;
  for (std::size_t k = 0; k < b.lower.points.size(); ++k) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension));
    for (std::size_t i = 0; i < 3; ++i) {
      const double g1 = b.lower.points[k][static_cast<Eigen::Index>(i)];
      const double g2 = b.upper.points[k][static_cast<Eigen::Index>(i)];
      x[static_cast<Eigen::Index>(b.single_index[i])] = 0.5 * (g1 + g2);
      x[static_cast<Eigen::Index>(b.coupled_index[i])] = 0.5 * (g1 - g2);
    }
    out.push_back(std::move(x));
  }
  return out;
}

PropagatorTrajectory block_trajectory(const PropagatorTrajectory& traj, int block) {
  if (block < 0 || block > 1) throw ValidationError("block index must be 0 or 1");
  if (!traj.hamiltonian || traj.hamiltonian->dim() != 4) throw PreconditionViolation("block_trajectory expects a two-qubit trajectory");
  PropagatorTrajectory out{traj.grid, {},
                           std::make_shared<const ControlHamiltonian>(traj.hamiltonian->restricted(2 * block, 2))};
  for (const auto& u : traj.unitaries) out.unitaries.push_back(u.block(2 * block, 2 * block, 2, 2));
  return out;
}

}  // namespace dcgeom
