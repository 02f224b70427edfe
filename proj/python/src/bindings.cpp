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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "dcgeom/cli.hpp"
#include "dcgeom/design.hpp"
#include "dcgeom/errors.hpp"
#include "dcgeom/frenet.hpp"
#include "dcgeom/ising.hpp"

namespace py = pybind11;
using namespace dcgeom;

namespace {

Eigen::MatrixXd stack(const std::vector<Eigen::VectorXd>& rows) {
  if (rows.empty()) return {};
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return out;
}

std::vector<double> times(const TimeGrid& g) {
  std::vector<double> t(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) t[k] = g.time(static_cast<int>(k));
  return t;
}

std::vector<std::string> labels(const OperatorBasis& b) {
  std::vector<std::string> out;
  for (const auto& l : b.labels()) out.push_back(l ? l->str() : "");
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Error-curve geometry and pulse design for dynamically corrected gates";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<PreconditionViolation>(m, "PreconditionViolation", PyExc_ValueError);
  py::register_exception<NumericalDegeneracy>(m, "NumericalDegeneracy", PyExc_ArithmeticError);
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", PyExc_RuntimeError);

  m.def("pauli", [](const std::string& label) { return PauliString::parse(label).matrix(); }, py::arg("label"));
  m.def("inner_product", &inner_product, py::arg("a"), py::arg("b"));

  py::class_<IsingModel>(m, "IsingModel")
      .def(py::init([](double e1, double e2, const std::string& noise) {
             return IsingModel{e1, e2, PauliString::parse(noise)};
           }),
           py::arg("e1") = 0.5, py::arg("e2") = 1.0, py::arg("noise") = "IZ")
      .def_readwrite("e1", &IsingModel::e1)
      .def_readwrite("e2", &IsingModel::e2)
      .def_property_readonly("basis", [](const IsingModel& im) { return labels(im.error_basis()); });

  py::class_<SmoothPulse>(m, "SmoothPulse")
      .def(py::init([](double c0, const std::vector<std::array<double, 3>>& terms, double period, int n_sym) {
             SmoothPulse s{c0, {}, period, n_sym};
             for (const auto& t : terms) s.terms.push_back(Lorentzian{t[0], t[1], t[2]});
             validate(Pulse(s));
             return s;
           }),
           py::arg("c0"), py::arg("terms"), py::arg("period"), py::arg("n_sym") = 1)
      .def_property_readonly("duration", &SmoothPulse::duration);

  py::class_<SquarePulseSequence>(m, "SquarePulse")
      .def(py::init([](const std::vector<std::pair<double, double>>& segments, int n_sym) {
             SquarePulseSequence s;
             for (const auto& [w, dt] : segments) s.segments.push_back(SquareSegment{w, dt});
             s.n_sym = n_sym;
             validate(Pulse(s));
             return s;
           }),
           py::arg("segments"), py::arg("n_sym") = 1)
      .def_property_readonly("duration", &SquarePulseSequence::duration);

  m.def("eval_pulse", [](const Pulse& p, double t) {
    const auto s = eval_pulse(p, t);
    return std::make_pair(s.omega, s.domega);
  });
  m.def("ising_curvatures", &ising_curvatures, py::arg("e1"), py::arg("e2"), py::arg("omega"), py::arg("domega"));
  m.def("step_rotation_angle", &step_rotation_angle, py::arg("omega1"), py::arg("omega2"), py::arg("e1"),
        py::arg("e2"));

  m.def(
      "error_curve",
      [](const IsingModel& model, const Pulse& p, double grid_product) {
        const auto grid = model.grid_for(p, grid_product);
        const auto c = error_curve(propagate(model.hamiltonian(p), grid), model.noise_operator(), model.error_basis());
        return py::make_tuple(times(grid), stack(c.points));
      },
      py::arg("model"), py::arg("pulse"), py::arg("grid_product") = 0.02,
      "Sample times and curve coordinates (one row per sample).");

  m.def(
      "curvatures",
      [](const IsingModel& model, const Pulse& p, double grid_product) {
        const auto grid = model.grid_for(p, grid_product);
        const auto cp = curvatures_numeric(
            frames_from_operators(propagate(model.hamiltonian(p), grid), model.noise_operator(), model.error_basis()));
        return py::make_tuple(times(grid), stack(cp.kappas), cp.flagged);
      },
      py::arg("model"), py::arg("pulse"), py::arg("grid_product") = 0.01);

  m.def(
      "scaling",
      [](const IsingModel& model, const Pulse& p, const std::vector<double>& eps, double fit_min, double fit_max,
         double grid_product) {
        const auto f = scaling_exponent(model.hamiltonian(p), model.noise_operator(), eps, model.grid_for(p, grid_product),
                                        fit_min, fit_max);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["epsilons"] = f.epsilons;
        d["infidelities"] = f.infidelities;
        d["warnings"] = f.warnings;
        return d;
      },
      py::arg("model"), py::arg("pulse"), py::arg("epsilons"), py::arg("fit_min") = 1e-4, py::arg("fit_max") = 1e-2,
      py::arg("grid_product") = 0.01);

  m.def(
      "run",
      [](const std::string& command, const std::filesystem::path& config, const std::filesystem::path& out) {
        cli::RunOptions o;
        o.out = out;
        std::ostringstream log, err;
        const int rc = cli::run(command, config, o, log, err);
        return py::make_tuple(rc, log.str(), err.str());
      },
      py::arg("command"), py::arg("config"), py::arg("out"),
      "Run a CLI command; returns (exit_code, log, errors).");

  m.attr("__version__") = DCGEOM_VERSION;
}
