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

#include <cmath>
#include <fstream>
#include <limits>

#include "dcgeom/cli.hpp"
#include "dcgeom/errors.hpp"
#include "dcgeom/frenet.hpp"
#include "output.hpp"

namespace dcgeom::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::filesystem::path prepare_dir(const RunConfig& c, const RunOptions& o) {
  const auto dir = resolve_output_dir(c, o);
  std::filesystem::create_directories(dir);
  return dir;
}

int threads_of(const RunConfig& c, const RunOptions& o) { return std::max(1, o.threads.value_or(c.threads)); }

std::uint64_t seed_of(const RunConfig& c, const RunOptions& o) { return o.seed.value_or(c.seed); }

const Pulse& require_pulse(const RunConfig& c, const std::string& command) {
  if (!c.pulse) throw ValidationError(command + " needs a pulse in the config");
  if (c.zero_duration) throw ValidationError(command + " needs a pulse of positive duration");
  return *c.pulse;
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n, const std::string& suffix = "") {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i) + suffix);
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

nlohmann::json basis_labels(const OperatorBasis& b) {
  auto out = nlohmann::json::array();
  for (const auto& l : b.labels()) out.push_back(l ? l->str() : std::string("?"));
  return out;
}

bool ising_analytic(const IsingModel& m) { return m.noise.str() == "IZ"; }

Table curve_table(const ErrorCurve& c) {
  Table t(concat({"t"}, numbered("G_", c.dimension())));
  for (std::size_t k = 0; k < c.points.size(); ++k) {
    std::vector<double> row{c.grid.time(static_cast<int>(k))};
    for (Eigen::Index i = 0; i < c.points[k].size(); ++i) row.push_back(c.points[k][i]);
    t.add_row(std::move(row));
  }
  return t;
}

/// Max relative analytic-vs-numeric gap over unflagged samples where every
/// analytic curvature exceeds 0.05.
struct Comparison {
  double max_gap = 0.0;
  int compared = 0;
};

Table curvature_table(const IsingModel& model, const Pulse& pulse, const CurvatureProfile& cp, Comparison* cmp) {
  const std::size_t d1 = cp.kappas.empty() ? 0 : static_cast<std::size_t>(cp.kappas.front().size());
  const bool analytic = ising_analytic(model);
  auto cols = std::vector<std::string>{"t", "omega", "domega"};
  if (analytic) cols = concat(cols, numbered("kappa", 5, "_analytic"));
  cols = concat(cols, numbered("kappa", d1, "_numeric"));
  cols.push_back("flagged");
  Table t(cols);
  for (std::size_t k = 0; k < cp.kappas.size(); ++k) {
    const double time = cp.grid.time(static_cast<int>(k));
    const auto s = eval_pulse(pulse, time);
    std::vector<double> row{time, s.omega, s.domega};
    std::array<double, 5> a{};
    if (analytic) {
      a = ising_curvatures(model.e1, model.e2, s.omega, s.domega);
      row.insert(row.end(), a.begin(), a.end());
    }
    for (std::size_t i = 0; i < d1; ++i) row.push_back(cp.kappas[k][static_cast<Eigen::Index>(i)]);
    row.push_back(cp.flagged[k] ? 1.0 : 0.0);
    t.add_row(std::move(row));
    if (analytic && cmp && !cp.flagged[k] && d1 == 5) {
      bool ok = true;
      for (double v : a) ok = ok && std::abs(v) > 0.05;
      if (!ok) continue;
      ++cmp->compared;
      for (std::size_t i = 0; i < 5; ++i)
        cmp->max_gap = std::max(cmp->max_gap, std::abs(cp.kappas[k][static_cast<Eigen::Index>(i)] - a[i]) / std::abs(a[i]));
    }
  }
  return t;
}

Table sweep_table(const ScalingFit& fit) {
  Table t({"epsilon", "infidelity", "infidelity_phase_min", "used_in_fit"});
  for (std::size_t i = 0; i < fit.epsilons.size(); ++i)
    t.add_row({fit.epsilons[i], fit.infidelities[i], i < fit.phase_minimized.size() ? fit.phase_minimized[i] : kNaN,
               fit.used[i] ? 1.0 : 0.0});
  return t;
}

Table pulse_table(const Pulse& pulse, const TimeGrid& grid) {
  Table t({"t", "omega", "domega"});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double time = grid.time(static_cast<int>(k));
    const auto s = eval_pulse(pulse, time);
    t.add_row({time, s.omega, s.domega});
  }
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text << '\n';
}

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

int cmd_curvatures(RunConfig c, const RunOptions& o, std::ostream& log) {
  const Pulse& pulse = require_pulse(c, "curvatures");
  const auto dir = prepare_dir(c, o);
  Manifest man("curvatures", c.source_text, seed_of(c, o), threads_of(c, o));
  const ControlHamiltonian h = c.model.hamiltonian(pulse);
  const TimeGrid grid = c.grid.make(c.model, pulse);
  const OperatorBasis basis = c.model.error_basis();
  const auto traj = propagate(h, grid);
  const auto frames = frames_from_operators(traj, c.model.noise_operator(), basis);
  const auto cp = curvatures_numeric(frames);
  Comparison cmp;
  const Table t = curvature_table(c.model, pulse, cp, &cmp);
  man.add_table(dir, "curvatures.csv", t);
  int flagged = 0;
  for (bool f : cp.flagged) flagged += f ? 1 : 0;
  auto& m = man.metrics();
  m["dimension"] = basis.dimension();
  m["effective_dimension"] = cp.effective_dimension;
  m["basis"] = basis_labels(basis);
  m["steps"] = grid.steps();
  m["flagged_samples"] = flagged;
  if (ising_analytic(c.model)) {
    m["analytic_vs_numeric_max_relative_gap"] = cmp.max_gap;
    m["compared_samples"] = cmp.compared;
  }
  man.write(dir);
  log << "curvatures: " << grid.size() << " samples, effective dimension " << cp.effective_dimension;
  if (ising_analytic(c.model)) log << ", max relative gap " << cmp.max_gap;
  log << "\n";
  return kOk;
}

int cmd_trace(RunConfig c, const RunOptions& o, std::ostream& log) {
  if (!c.pulse) throw ValidationError("trace needs a pulse in the config");
  const auto dir = prepare_dir(c, o);
  Manifest man("trace", c.source_text, seed_of(c, o), threads_of(c, o));
  const OperatorBasis basis = c.model.error_basis();
  const auto d = static_cast<int>(basis.dimension());
  for (const auto& p : c.trace.projections)
    for (int a : p)
      if (a < 1 || a > d) throw ValidationError("trace projection index " + std::to_string(a) + " outside 1.." + std::to_string(d));
  const bool blocks = ising_analytic(c.model) && d == 6;
  auto& m = man.metrics();
  m["dimension"] = d;
  m["basis"] = basis_labels(basis);

  if (c.zero_duration) {
    Table curve(concat({"t"}, numbered("G_", basis.dimension())));
    curve.add_row(std::vector<double>(basis.dimension() + 1, 0.0));
    man.add_table(dir, "curve.csv", curve);
    if (blocks) {
      for (const char* name : {"block_lower.csv", "block_upper.csv"}) {
        Table b({"t", "g_1", "g_2", "g_3"});
        b.add_row({0.0, 0.0, 0.0, 0.0});
        man.add_table(dir, name, b);
      }
    }
    for (std::size_t i = 0; i < c.trace.projections.size(); ++i) {
      Table p({"t", "p_1", "p_2", "p_3"});
      p.add_row({0.0, 0.0, 0.0, 0.0});
      man.add_table(dir, "projection_" + std::to_string(i + 1) + ".csv", p);
    }
    m["duration"] = 0.0;
    m["closure_residual"] = 0.0;
    man.write(dir);
    log << "trace: zero-duration pulse, single sample at the origin\n";
    return kOk;
  }

  const Pulse& pulse = *c.pulse;
  const ControlHamiltonian h = c.model.hamiltonian(pulse);
  const TimeGrid grid = c.grid.make(c.model, pulse);
  const Operator q = c.model.noise_operator();
  const auto traj = propagate(h, grid);
  const auto curve = error_curve(traj, q, basis);
  man.add_table(dir, "curve.csv", curve_table(curve));
  const auto speed = speed_deviation(curve);
  m["duration"] = grid.t_end();
  m["steps"] = grid.steps();
  m["closure_residual"] = closure_residual(curve);
  m["closure_relative"] = closure_residual(curve) / grid.t_end();
  m["speed_deviation"] = speed.derivative_deviation;
  m["chord_speed_deviation"] = speed.chord_deviation;

  if (blocks) {
    const auto bc = block_decompose(curve, traj);
    auto axes = nlohmann::json::array();
    for (const auto& l : bc.lower.basis.labels()) axes.push_back(l ? l->str() : "?");
    double worst = 0.0;
    for (const auto* part : {&bc.lower, &bc.upper}) {
      Table t({"t", "g_1", "g_2", "g_3"});
      for (std::size_t k = 0; k < part->points.size(); ++k) {
        const auto& p = part->points[k];
        t.add_row({grid.time(static_cast<int>(k)), p[0], p[1], p[2]});
      }
      man.add_table(dir, part == &bc.lower ? "block_lower.csv" : "block_upper.csv", t);
      worst = std::max(worst, speed_deviation(*part).derivative_deviation);
    }
    m["block_axes"] = axes;
    m["block_speed_deviation"] = worst;
  }

  Eigen::MatrixXd axes_map = Eigen::MatrixXd::Identity(d, d);
  if (c.trace.frenet_axes) {
    const auto f0 = frame_at(h, Operator::Identity(q.rows(), q.cols()), q, basis, 0.0);
    if (!f0.complete()) throw NumericalDegeneracy("Frenet frame at t = 0 is degenerate", 0.0);
    axes_map = f0.vectors;
  }
  for (std::size_t i = 0; i < c.trace.projections.size(); ++i) {
    const auto& ax = c.trace.projections[i];
    Table t({"t", "p_1", "p_2", "p_3"});
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
      std::vector<double> row{grid.time(static_cast<int>(k))};
      for (int a : ax) row.push_back(axes_map.col(a - 1).dot(curve.points[k]));
      t.add_row(std::move(row));
    }
    man.add_table(dir, "projection_" + std::to_string(i + 1) + ".csv", t);
  }
  m["projection_axes"] = c.trace.frenet_axes ? "frenet" : "basis";
  man.write(dir);
  log << "trace: " << grid.size() << " samples, |G(T)| = " << closure_residual(curve) << "\n";
  return kOk;
}

int cmd_design(RunConfig c, const RunOptions& o, std::ostream& log) {
  const auto dir = prepare_dir(c, o);
  Manifest man("design", c.source_text, seed_of(c, o), threads_of(c, o));
  DesignProblem p = c.design;
  p.model = c.model;
  p.optimizer.seed = seed_of(c, o);
  p.optimizer.threads = threads_of(c, o);
  p.validate();
  const DesignResult r = design(p);

  write_text(dir / "pulse.json", pulse_to_json(r.pulse));
  man.add_file("pulse.json", "json");
  const TimeGrid grid = c.model.grid_for(r.pulse, p.grid_product);
  man.add_table(dir, "pulse_samples.csv", pulse_table(r.pulse, grid));
  const ControlHamiltonian h = c.model.hamiltonian(r.pulse);
  const OperatorBasis basis = c.model.error_basis();
  const auto traj = propagate(h, grid);
  const auto curve = error_curve(traj, c.model.noise_operator(), basis);
  man.add_table(dir, "curve.csv", curve_table(curve));
  const auto cp = curvatures_numeric(frames_from_operators(traj, c.model.noise_operator(), basis));
  man.add_table(dir, "curvatures.csv", curvature_table(c.model, r.pulse, cp, nullptr));
  man.add_table(dir, "sweep.csv", sweep_table(r.verification.sweep));

  auto& m = man.metrics();
  m["converged"] = r.converged;
  m["ansatz"] = to_string(p.ansatz);
  m["n_sym"] = p.n_sym;
  m["k"] = p.k;
  auto params = nlohmann::json::object();
  for (std::size_t i = 0; i < r.parameters.size(); ++i) params[r.parameter_names[i]] = r.parameters[i];
  m["parameters"] = params;
  m["objective"] = r.objective;
  m["symmetric_closure_residual"] = r.closure.residual;
  m["frame_term"] = r.closure.frame_term;
  m["displacement_term"] = r.closure.displacement_term;
  m["gate_term"] = r.closure.gate_term;
  m["period_map_angles"] = r.closure.angles;
  m["duration"] = r.verification.duration;
  m["closure_residual"] = r.verification.closure;
  m["closure_relative"] = r.verification.closure / r.verification.duration;
  m["closure_residual_fine_grid"] = r.verification.closure_fine;
  m["gate"] = r.classification.label;
  m["gate_distance"] = r.classification.distance;
  m["gate_phase"] = r.classification.phase;
  m["target_gate"] = p.target_gate;
  m["target_gate_distance"] = r.verification.gate_distance;
  m["scaling_slope"] = finite_or_null(r.verification.sweep.slope);
  m["scaling_warnings"] = r.verification.sweep.warnings;
  m["start_index"] = r.start_index;
  m["starts_run"] = r.starts_run;
  if (!r.converged) {
    man.set_status("convergence_failure", "no start reached the closure and gate tolerances");
    man.write(dir);
    log << "design: no start converged after " << r.starts_run << " starts (best objective " << r.objective << ")\n";
    return kConvergenceFailure;
  }
  man.write(dir);
  log << "design: start " << r.start_index << " converged, |G(T)|/T = " << r.verification.closure / r.verification.duration
      << ", gate " << r.classification.label << ", slope " << r.verification.sweep.slope << "\n";
  return kOk;
}

int cmd_verify(RunConfig c, const RunOptions& o, std::ostream& log) {
  if (o.pulse_file) {
    c.pulse = load_pulse_file(*o.pulse_file);
    c.zero_duration = false;
  }
  const Pulse& pulse = require_pulse(c, "verify");
  if (c.verify.epsilons.empty()) throw ValidationError("verify needs at least one epsilon");
  const auto dir = prepare_dir(c, o);
  Manifest man("verify", c.source_text, seed_of(c, o), threads_of(c, o));
  const ControlHamiltonian h = c.model.hamiltonian(pulse);
  const TimeGrid grid = c.grid.make(c.model, pulse);
  const Operator q = c.model.noise_operator();
  const OperatorBasis basis = c.model.error_basis();
  const auto end = propagate_endpoint(h, q, grid);
  const ScalingFit fit = scaling_exponent(h, q, c.verify.epsilons, grid, c.verify.fit_min, c.verify.fit_max, threads_of(c, o));
  man.add_table(dir, "sweep.csv", sweep_table(fit));
  const auto gate = extract_gate(end.unitary);
  auto& m = man.metrics();
  m["duration"] = grid.t_end();
  m["steps"] = grid.steps();
  m["closure_residual"] = basis.coordinates(end.integral).norm();
  m["closure_relative"] = basis.coordinates(end.integral).norm() / grid.t_end();
  m["scaling_slope"] = fit.slope;
  m["scaling_intercept"] = fit.intercept;
  m["fit_range"] = {c.verify.fit_min, c.verify.fit_max};
  m["scaling_warnings"] = fit.warnings;
  m["gate"] = gate.label;
  m["gate_distance"] = gate.distance;
  man.write(dir);
  log << "verify: slope " << fit.slope << " over " << c.verify.fit_min << ".." << c.verify.fit_max << ", gate " << gate.label
      << "\n";
  return kOk;
}

int run(const std::string& command, const std::filesystem::path& config_path, const RunOptions& options,
        std::ostream& log, std::ostream& err) {
  try {
    RunConfig c = load_config(config_path);
    if (command == "curvatures") return cmd_curvatures(std::move(c), options, log);
    if (command == "trace") return cmd_trace(std::move(c), options, log);
    if (command == "design") return cmd_design(std::move(c), options, log);
    if (command == "verify") return cmd_verify(std::move(c), options, log);
    throw ValidationError("unknown command '" + command + "'");
  } catch (const ConvergenceFailure& e) {
    err << "convergence failure: " << e.what() << "\n";
    return kConvergenceFailure;
  } catch (const NumericalDegeneracy& e) {
    err << "numerical degeneracy: " << e.what() << "\n";
    return kNumericalDegeneracy;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
}

}  // namespace dcgeom::cli
