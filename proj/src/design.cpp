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

#include "dcgeom/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "dcgeom/errors.hpp"
#include "dcgeom/parallel.hpp"

namespace dcgeom {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> clamp_to(const std::vector<std::pair<double, double>>& b, std::span<const double> x,
                             double* penalty = nullptr) {
  std::vector<double> y(x.begin(), x.end());
  double p = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double c = std::clamp(y[i], b[i].first, b[i].second);
    p += std::abs(y[i] - c);
    y[i] = c;
  }
  if (penalty) *penalty = p;
  return y;
}

/// Allowed rotation angles of an n-fold symmetric period map, folded into [0, pi].
std::vector<double> allowed_angles(int n) {
  std::vector<double> out;
  for (int m = 0; m < n; ++m) {
    double a = std::fmod(2.0 * kPi * m / n, 2.0 * kPi);
    if (a > kPi) a = 2.0 * kPi - a;
    out.push_back(a);
  }
  return out;
}

double snap(double angle, const std::vector<double>& allowed) {
  double best = allowed.front();
  for (double a : allowed)
    if (std::abs(angle - a) < std::abs(angle - best)) best = a;
  return best;
}

Eigen::MatrixXd polar_orthogonal(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// Search grid for one period, sized by the amplitude bound |c0| + sum |c_i|.
TimeGrid period_grid(const DesignProblem& p, std::span<const double> x, double period) {
  double scale = std::max(std::abs(p.model.e1), std::abs(p.model.e2));
  if (p.ansatz == Ansatz::kSmooth) {
    double amp = std::abs(x[0]);
    for (int i = 0; i < p.lorentzians; ++i) amp += std::abs(x[static_cast<std::size_t>(1 + 3 * i)]);
    scale = std::max(scale, amp);
  } else {
    for (int j = 0; j < p.square_segments; ++j) scale = std::max(scale, std::abs(x[static_cast<std::size_t>(2 * j)]));
  }
  return TimeGrid::with_max_product(period, scale, p.search_grid_product);
}

struct PeriodEval {
  ClosureDiagnostics diag;
  Eigen::VectorXd frame_entries;
  Eigen::VectorXd displacement;
  Eigen::VectorXd gate_entries;
};

PeriodEval evaluate_period(const DesignProblem& p, std::span<const double> x) {
  const Pulse period = period_from_parameters(p, x);
  const double tp = duration(period);
  const double total = tp * p.n_sym;
  const ControlHamiltonian h = p.model.hamiltonian(period);
  const Operator q = p.model.noise_operator();
  const OperatorBasis basis = p.model.error_basis();
  const auto d = static_cast<Eigen::Index>(basis.dimension());

  const EndpointState end = propagate_endpoint(h, q, period_grid(p, x, tp));
  const Eigen::VectorXd g = basis.coordinates(end.integral);

  PeriodEval ev;
  auto& diag = ev.diag;
  diag.period = tp;
  diag.period_displacement = g;

  const Operator id = Operator::Identity(q.rows(), q.cols());
  FrenetFrame f0 = frame_at(h, id, q, basis, 0.0);
  FrenetFrame f1 = frame_at(h, end.unitary, q, basis, tp);
  if (const auto* sq = std::get_if<SquarePulseSequence>(&period); sq && f1.complete() && d == 6) {
    try {
      f1 = frame_after_step(f1, sq->segments.back().omega, sq->segments.front().omega, p.model.e1, p.model.e2);
    } catch (const NumericalDegeneracy&) {
      f1.rank = 0;
    }
  }
  Eigen::MatrixXd o;
  if (f0.complete() && f1.complete()) {
    o = polar_orthogonal(f1.vectors * f0.vectors.transpose());
  } else {
    o = basis.adjoint_action(end.unitary);
    diag.adjoint_fallback = true;
  }
  diag.period_map = o;

  // Rotation planes of the period map from its real Schur form.
  Eigen::RealSchur<Eigen::MatrixXd> schur(o);
  const Eigen::MatrixXd& t = schur.matrixT();
  const Eigen::MatrixXd& u = schur.matrixU();
  const auto allowed = allowed_angles(p.n_sym);
  ev.frame_entries = Eigen::VectorXd::Zero(d);
  std::vector<Eigen::Index> fixed;
  for (Eigen::Index i = 0; i < d;) {
    if (i + 1 < d && t(i + 1, i) != 0.0) {
      const double c = 0.5 * (t(i, i) + t(i + 1, i + 1));
      const double s = std::sqrt(std::abs(t(i, i + 1) * t(i + 1, i)));
      const double psi = std::atan2(s, c);
      const double sn = snap(psi, allowed);
      diag.angles.push_back(psi);
      diag.snapped.push_back(sn);
      ev.frame_entries[i] = psi - sn;
      if (sn == 0.0) {
        fixed.push_back(i);
        fixed.push_back(i + 1);
      }
      i += 2;
    } else {
      const double psi = t(i, i) >= 0.0 ? 0.0 : kPi;
      const double sn = snap(psi, allowed);
      ev.frame_entries[i] = (psi - sn) / std::sqrt(2.0);
      if (psi == 0.0) fixed.push_back(i);
      i += 1;
    }
  }
  // Real eigenvalues come in pairs for a proper rotation; report them as planes.
  {
    std::vector<double> real_angles;
    for (Eigen::Index i = 0; i < d;) {
      if (i + 1 < d && t(i + 1, i) != 0.0) {
        i += 2;
      } else {
        real_angles.push_back(t(i, i) >= 0.0 ? 0.0 : kPi);
        i += 1;
      }
    }
    std::sort(real_angles.begin(), real_angles.end());
    for (std::size_t i = 0; i + 1 < real_angles.size(); i += 2) {
      diag.angles.push_back(real_angles[i]);
      diag.snapped.push_back(snap(real_angles[i], allowed));
    }
  }
  diag.frame_term = ev.frame_entries.norm();

  Eigen::MatrixXd uf(d, static_cast<Eigen::Index>(fixed.size()));
  for (std::size_t j = 0; j < fixed.size(); ++j) uf.col(static_cast<Eigen::Index>(j)) = u.col(fixed[j]);
  ev.displacement = uf * (uf.transpose() * g) / total;
  diag.displacement_term = ev.displacement.norm();
  diag.residual = std::hypot(diag.frame_term, diag.displacement_term);

  Operator rn = id;
  for (int i = 0; i < p.n_sym; ++i) rn = end.unitary * rn;
  const Operator target = PauliString::parse(p.target_gate).matrix();
  const Complex tr = (target.adjoint() * rn).trace();
  const Complex ph = std::abs(tr) > 0.0 ? tr / std::abs(tr) : Complex(1.0, 0.0);
  const Operator diff = (rn * std::conj(ph) - target) / std::sqrt(static_cast<double>(rn.rows()));
  ev.gate_entries.resize(2 * diff.size());
  for (Eigen::Index i = 0; i < diff.size(); ++i) {
    ev.gate_entries[2 * i] = diff(i).real();
    ev.gate_entries[2 * i + 1] = diff(i).imag();
  }
  diag.gate_term = ev.gate_entries.norm();
  return ev;
}

struct LmFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const DesignProblem* problem;
  int n_in;
  int n_out;

  int inputs() const { return n_in; }
  int values() const { return n_out; }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    f = design_residuals(*problem, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    return 0;
  }
};

double objective_of(const Eigen::VectorXd& r) { return r.norm(); }

struct StartOutcome {
  std::vector<double> x;
  double objective = std::numeric_limits<double>::infinity();
  bool converged = false;
};

double nm_objective(const gsl_vector* v, void* params) {
  const auto* p = static_cast<const DesignProblem*>(params);
  std::vector<double> x(v->size);
  for (std::size_t i = 0; i < v->size; ++i) x[i] = gsl_vector_get(v, i);
  try {
    return design_residuals(*p, x).squaredNorm();
  } catch (const std::exception&) {
    return 1e6;
  }
}

bool accept(const DesignProblem& p, const std::vector<double>& x, double objective) {
  if (!(objective < p.optimizer.tolerance)) return false;
  const Pulse full = pulse_from_parameters(p, x);
  const double total = duration(full);
  const ControlHamiltonian h = p.model.hamiltonian(full);
  const OperatorBasis basis = p.model.error_basis();
  const auto e = propagate_endpoint(h, p.model.noise_operator(), p.model.grid_for(full, p.grid_product));
  if (!(basis.coordinates(e.integral).norm() < 1e-6 * total)) return false;
  const Operator target = PauliString::parse(p.target_gate).matrix();
  return phase_minimized_infidelity(e.unitary, target) < 1e-6;
}

StartOutcome run_start(const DesignProblem& p, std::size_t index) {
  const auto& b = p.effective_bounds();
  const std::size_t n = b.size();
  std::seed_seq seq{static_cast<std::uint32_t>(p.optimizer.seed), static_cast<std::uint32_t>(p.optimizer.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::vector<double> x0(n);
  for (std::size_t i = 0; i < n; ++i) x0[i] = std::uniform_real_distribution<double>(b[i].first, b[i].second)(rng);

  gsl_multimin_function fn{&nm_objective, n, const_cast<DesignProblem*>(&p)};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* step = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x, i, x0[i]);
    gsl_vector_set(step, i, 0.1 * (b[i].second - b[i].first));
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, step);
  for (int it = 0; it < p.optimizer.max_iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-10) == GSL_SUCCESS) break;
    if (s->fval < 1e-6) break;
  }
  Eigen::VectorXd xv(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) xv[static_cast<Eigen::Index>(i)] = gsl_vector_get(s->x, i);
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(x);
  gsl_vector_free(step);

  StartOutcome out;
  try {
    LmFunctor f{&p, static_cast<int>(n), static_cast<int>(design_residuals(p, clamp_to(b, x0)).size())};
    Eigen::NumericalDiff<LmFunctor> nd(f);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<LmFunctor>> lm(nd);
    lm.parameters.maxfev = p.optimizer.polish_evaluations;
    lm.parameters.xtol = 1e-14;
    lm.parameters.ftol = 1e-14;
    lm.minimize(xv);
  } catch (const std::exception&) {
  }
  out.x = clamp_to(b, std::span<const double>(xv.data(), n));
  try {
    out.objective = objective_of(design_residuals(p, out.x));
    out.converged = accept(p, out.x, out.objective);
  } catch (const std::exception&) {
    out.objective = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace

std::string to_string(Ansatz a) { return a == Ansatz::kSmooth ? "smooth" : "square"; }

Ansatz ansatz_from_string(const std::string& s) {
  if (s == "smooth") return Ansatz::kSmooth;
  if (s == "square") return Ansatz::kSquare;
  throw ValidationError("unknown ansatz '" + s + "' (expected smooth or square)");
}

std::size_t DesignProblem::parameter_count() const {
  return ansatz == Ansatz::kSmooth ? static_cast<std::size_t>(2 + 3 * lorentzians)
                                   : static_cast<std::size_t>(2 * square_segments);
}

std::vector<std::string> DesignProblem::parameter_names() const {
  std::vector<std::string> n;
  if (ansatz == Ansatz::kSmooth) {
    n.push_back("c0");
    for (int i = 1; i <= lorentzians; ++i) {
      n.push_back("c" + std::to_string(i));
      n.push_back("a" + std::to_string(i));
      n.push_back("phi" + std::to_string(i));
    }
    n.push_back("t_p");
  } else {
    for (int j = 1; j <= square_segments; ++j) {
      n.push_back("omega" + std::to_string(j));
      n.push_back("dt" + std::to_string(j));
    }
  }
  return n;
}

std::vector<std::pair<double, double>> DesignProblem::default_bounds() const {
  std::vector<std::pair<double, double>> b;
  if (ansatz == Ansatz::kSmooth) {
    b.emplace_back(-2.0, 2.0);
    for (int i = 0; i < lorentzians; ++i) {
      b.emplace_back(-3.0, 3.0);
      b.emplace_back(0.0, 4.0);
      b.emplace_back(0.0, kPi);
    }
    b.emplace_back(2.0, 10.0);
  } else {
    for (int j = 0; j < square_segments; ++j) {
      b.emplace_back(-3.0, 3.0);
      b.emplace_back(0.2, 5.0);
    }
  }
  return b;
}

const std::vector<std::pair<double, double>>& DesignProblem::effective_bounds() const {
  if (bounds.empty()) {
    thread_local std::vector<std::pair<double, double>> cache;
    cache = default_bounds();
    return cache;
  }
  return bounds;
}

void DesignProblem::validate() const {
  if (n_sym < 1) throw ValidationError("n_sym must be >= 1");
  if (k < 1 || std::gcd(k, n_sym) != 1) throw ValidationError("k must be positive and coprime to n_sym");
  if (ansatz == Ansatz::kSmooth && (lorentzians < 1 || lorentzians > 3))
    throw ValidationError("smooth ansatz takes 1 to 3 Lorentzian terms");
  if (ansatz == Ansatz::kSquare && square_segments < 1) throw ValidationError("square ansatz needs >= 1 segment");
  if (!bounds.empty() && bounds.size() != parameter_count())
    throw ValidationError("expected " + std::to_string(parameter_count()) + " parameter bounds, got " +
                          std::to_string(bounds.size()));
  for (const auto& [lo, hi] : effective_bounds())
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo <= hi)) throw ValidationError("bounds must be finite with lower <= upper");
  if (ansatz == Ansatz::kSmooth && effective_bounds().back().first <= 0.0)
    throw ValidationError("period bounds must be positive");
  if (ansatz == Ansatz::kSquare)
    for (int j = 0; j < square_segments; ++j)
      if (effective_bounds()[static_cast<std::size_t>(2 * j + 1)].first <= 0.0)
        throw ValidationError("segment duration bounds must be positive");
  const auto gate = PauliString::parse(target_gate);
  if (gate.num_qubits() != 2) throw ValidationError("target gate must be a two-qubit Pauli label");
  if (optimizer.starts < 1) throw ValidationError("optimizer.starts must be >= 1");
  if (optimizer.max_iterations < 0) throw ValidationError("optimizer.max_iterations must be >= 0");
  if (!(optimizer.tolerance > 0.0)) throw ValidationError("optimizer.tolerance must be positive");
  if (!(grid_product > 0.0) || grid_product > 0.05) throw ValidationError("grid product must be in (0, 0.05]");
  if (!(search_grid_product > 0.0) || search_grid_product > 0.2)
    throw ValidationError("search grid product must be in (0, 0.2]");
  if (optimizer.polish_evaluations < 0) throw ValidationError("optimizer.polish_evaluations must be >= 0");
  if (epsilons.empty()) throw ValidationError("verification needs at least one epsilon");
  for (double e : epsilons)
    if (!(e > 0.0)) throw ValidationError("epsilons must be positive");
  model.noise_operator();
}

Pulse period_from_parameters(const DesignProblem& p, std::span<const double> x) {
  if (x.size() != p.parameter_count())
    throw ValidationError("expected " + std::to_string(p.parameter_count()) + " parameters, got " + std::to_string(x.size()));
  if (p.ansatz == Ansatz::kSmooth) {
    SmoothPulse s;
    s.c0 = x[0];
    for (int i = 0; i < p.lorentzians; ++i) {
      const auto o = static_cast<std::size_t>(1 + 3 * i);
      s.terms.push_back(Lorentzian{x[o], x[o + 1], x[o + 2]});
    }
    s.period = x.back();
    s.n_sym = 1;
    validate(Pulse(s));
    return s;
  }
  SquarePulseSequence s;
  for (int j = 0; j < p.square_segments; ++j)
    s.segments.push_back(SquareSegment{x[static_cast<std::size_t>(2 * j)], x[static_cast<std::size_t>(2 * j + 1)]});
  s.n_sym = 1;
  validate(Pulse(s));
  return s;
}

Pulse pulse_from_parameters(const DesignProblem& p, std::span<const double> x) {
  Pulse out = period_from_parameters(p, x);
  std::visit(
      [&](auto& v) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(v)>, WaveformPulse>) v.n_sym = p.n_sym;
      },
      out);
  return out;
}

FrenetFrame frame_after_step(const FrenetFrame& before, double omega1, double omega2, double e1, double e2) {
  if (before.vectors.cols() != 6) throw PreconditionViolation("step rotation applies to six-dimensional frames");
  if (omega1 == 0.0 || omega2 == 0.0)
    throw NumericalDegeneracy("frame is undefined where the drive vanishes", before.time);
  const double phi = step_rotation_angle(omega1, omega2, e1, e2);
  FrenetFrame after = before;
  const Eigen::VectorXd e5 = before.vectors.col(4);
  const Eigen::VectorXd e6 = before.vectors.col(5);
  after.vectors.col(4) = std::cos(phi) * e5 + std::sin(phi) * e6;
  after.vectors.col(5) = -std::sin(phi) * e5 + std::cos(phi) * e6;
  if (omega1 * omega2 < 0.0) after.vectors.middleCols(1, 4) *= -1.0;
  return after;
}

ClosureDiagnostics symmetric_closure_residual(const DesignProblem& problem, std::span<const double> x) {
  return evaluate_period(problem, x).diag;
}

Eigen::VectorXd design_residuals(const DesignProblem& problem, std::span<const double> x) {
  double penalty = 0.0;
  const auto y = clamp_to(problem.effective_bounds(), x, &penalty);
  const PeriodEval ev = evaluate_period(problem, y);
  Eigen::VectorXd r(ev.frame_entries.size() + ev.displacement.size() + ev.gate_entries.size() + 1);
  r << ev.frame_entries, ev.displacement, ev.gate_entries, penalty;
  return r;
}

GateClassification extract_gate(const Operator& r_final, std::span<const std::string> targets) {
  if (targets.empty()) throw ValidationError("extract_gate needs at least one target");
  if (!is_unitary(r_final, 1e-8)) throw NotUnitary("extract_gate: input is not unitary");
  GateClassification out;
  out.distance = std::numeric_limits<double>::infinity();
  for (const auto& label : targets) {
    const Operator t = PauliString::parse(label).matrix();
    if (t.rows() != r_final.rows()) throw DimensionMismatch("gate target '" + label + "' has the wrong dimension");
    const double dist = phase_minimized_infidelity(r_final, t);
    out.distances.emplace_back(label, dist);
    if (dist < out.distance) {
      out.distance = dist;
      out.label = label;
      out.phase = std::arg((t.adjoint() * r_final).trace());
    }
  }
  return out;
}

VerificationReport verify_pulse(const IsingModel& model, const Pulse& pulse, std::span<const double> epsilons,
                                double fit_min, double fit_max, double grid_product, const std::string& target_gate,
                                int threads) {
  VerificationReport rep;
  const ControlHamiltonian h = model.hamiltonian(pulse);
  const Operator q = model.noise_operator();
  const OperatorBasis basis = model.error_basis();
  const TimeGrid grid = model.grid_for(pulse, grid_product);
  const TimeGrid fine(grid.t_end(), 2 * grid.steps());
  const auto e = propagate_endpoint(h, q, grid);
  rep.duration = grid.t_end();
  rep.closure = basis.coordinates(e.integral).norm();
  rep.closure_fine = basis.coordinates(propagate_endpoint(h, q, fine).integral).norm();
  const Operator target = PauliString::parse(target_gate).matrix();
  rep.gate_distance = phase_minimized_infidelity(e.unitary, target);
  rep.gate_label = extract_gate(e.unitary).label;
  rep.sweep = scaling_exponent(h, q, epsilons, grid, fit_min, fit_max, threads);
  return rep;
}

DesignResult design(const DesignProblem& problem) {
  problem.validate();
  DesignResult res;
  res.parameter_names = problem.parameter_names();
  const int threads = std::max(1, problem.optimizer.threads);
  const auto starts = static_cast<std::size_t>(problem.optimizer.starts);
  std::vector<StartOutcome> outcomes;
  for (std::size_t first = 0; first < starts && res.start_index < 0;) {
    const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(threads), starts - first);
    auto got = parallel_map(batch, [&](std::size_t i) { return run_start(problem, first + i); }, threads);
    for (std::size_t i = 0; i < got.size(); ++i) {
      outcomes.push_back(std::move(got[i]));
      if (res.start_index < 0 && outcomes.back().converged) res.start_index = static_cast<int>(first + i);
    }
    first += batch;
  }
  res.starts_run = static_cast<int>(outcomes.size());
  for (const auto& o : outcomes) res.start_objectives.push_back(o.objective);
  std::size_t pick = 0;
  if (res.start_index >= 0) {
    pick = static_cast<std::size_t>(res.start_index);
    res.converged = true;
  } else {
    for (std::size_t i = 1; i < outcomes.size(); ++i)
      if (outcomes[i].objective < outcomes[pick].objective) pick = i;
  }
  res.parameters = outcomes[pick].x;
  res.objective = outcomes[pick].objective;
  res.pulse = pulse_from_parameters(problem, res.parameters);
  res.closure = symmetric_closure_residual(problem, res.parameters);
  const ControlHamiltonian h = problem.model.hamiltonian(res.pulse);
  res.gate = propagate(h, problem.model.grid_for(res.pulse, problem.grid_product)).final();
  res.classification = extract_gate(res.gate);
  res.verification = verify_pulse(problem.model, res.pulse, problem.epsilons, problem.fit_min, problem.fit_max,
                                  problem.grid_product, problem.target_gate, threads);
  return res;
}

}  // namespace dcgeom
