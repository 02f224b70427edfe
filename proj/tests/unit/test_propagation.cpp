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
#include <numbers>

#include "doctest.h"
#include "dcgeom/errors.hpp"
#include "dcgeom/ising.hpp"
#include "dcgeom/propagation.hpp"

using namespace dcgeom;

namespace {

constexpr double kPi = std::numbers::pi;

Operator P(const char* s) { return PauliString::parse(s).matrix(); }

double max_abs(const Operator& a) { return a.cwiseAbs().maxCoeff(); }

ControlHamiltonian single_qubit_x(double omega) { return ControlHamiltonian({ControlTerm::constant(P("X"), omega)}); }

Pulse test_pulse() { return SmoothPulse{0.4, {{1.1, 1.7, 0.3}, {-0.6, 2.2, 1.2}}, 3.0, 2}; }

}  // namespace

TEST_CASE("time grid validation") {
  CHECK_THROWS_AS(TimeGrid(1.0, 1), ValidationError);
  CHECK_THROWS_AS(TimeGrid(0.0, 10), ValidationError);
  const TimeGrid g(2.0, 8);
  CHECK(g.step() == doctest::Approx(0.25));
  CHECK(g.time(8) == 2.0);
  CHECK(TimeGrid::with_max_product(10.0, 2.0, 0.02).step() * 2.0 <= 0.02 + 1e-15);
}

TEST_CASE("constant X rotation through pi gives minus identity") {
  const double omega = 1.3;
  const auto traj = propagate(single_qubit_x(omega), TimeGrid(kPi / omega, 50));
  CHECK(max_abs(traj.final() + Operator::Identity(2, 2)) < 1e-12);
  CHECK(max_abs(traj.unitaries.front() - Operator::Identity(2, 2)) == 0.0);
}

TEST_CASE("undriven Ising model gives diagonal phases") {
  const IsingModel m{0.5, 1.0};
  const Pulse off = SquarePulseSequence{{{0.0, 3.0}}, 1};
  const auto traj = propagate(m.hamiltonian(off), TimeGrid(3.0, 30));
  for (std::size_t k = 0; k < traj.unitaries.size(); k += 7) {
    const double t = traj.grid.time(static_cast<int>(k));
    Eigen::VectorXcd d(4);
    d << std::exp(Complex(0, -m.e1 * t)), std::exp(Complex(0, m.e1 * t)), std::exp(Complex(0, -m.e2 * t)),
        std::exp(Complex(0, m.e2 * t));
    CHECK(max_abs(traj.unitaries[k] - Operator(d.asDiagonal())) < 1e-13);
  }
}

TEST_CASE("propagator converges at fourth order on a smooth drive") {
  const IsingModel m;
  const auto h = m.hamiltonian(test_pulse());
  const double t = duration(test_pulse());
  const int n = 60;
  const Operator ref = propagate(h, TimeGrid(t, 8 * n)).final();
  const double e1 = (propagate(h, TimeGrid(t, n)).final() - ref).norm();
  const double e2 = (propagate(h, TimeGrid(t, 2 * n)).final() - ref).norm();
  CHECK(std::log2(e1 / e2) >= 3.8);
}

TEST_CASE("property: every propagated sample is unitary") {
  const IsingModel m;
  for (const Pulse& p : {test_pulse(), Pulse(SquarePulseSequence{{{1.5, 0.7}, {-0.4, 1.1}}, 3})}) {
    const auto traj = propagate(m.hamiltonian(p), m.grid_for(p));
    for (const auto& u : traj.unitaries)
      CHECK(max_abs(u.adjoint() * u - Operator::Identity(4, 4)) < 1e-10);
  }
}

TEST_CASE("single-qubit error curve is a circle") {
  const double omega = 0.8;
  const auto h = single_qubit_x(omega);
  const std::vector<Operator> terms{P("X")};
  const auto basis = error_subspace(terms, P("Z"));
  REQUIRE(basis.dimension() == 2);
  const auto traj = propagate(h, TimeGrid(kPi / omega, 400));
  const auto curve = error_curve(traj, P("Z"), basis);
  CHECK(curve.points.front().norm() == 0.0);
  const double radius = 1.0 / (2.0 * omega);
  const Eigen::VectorXd top = curve.points[200];
  CHECK(top.norm() == doctest::Approx(2.0 * radius).epsilon(1e-10));
  const Eigen::VectorXd center = 0.5 * top;
  for (const auto& g : curve.points) CHECK((g - center).norm() == doctest::Approx(radius).epsilon(1e-9));
  CHECK(curve.end().norm() < 1e-10);
}

TEST_CASE("error curve rejects a basis that does not span the noise") {
  const auto traj = propagate(single_qubit_x(1.0), TimeGrid(1.0, 10));
  const std::vector<PauliString> z{PauliString::parse("Z")};
  CHECK_THROWS_AS(error_curve(traj, P("Z"), OperatorBasis::from_pauli_strings(z)), ValidationError);
}

TEST_CASE("Ising error curve has unit speed") {
  const IsingModel m;
  const auto p = test_pulse();
  const auto grid = m.grid_for(p, 0.01);
  const auto curve = error_curve(propagate(m.hamiltonian(p), grid), m.noise_operator(), m.error_basis());
  for (const auto& v : curve.tangents) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(speed_deviation(curve).derivative_deviation < 1e-6);
}

TEST_CASE("chord speed deficit follows the curvature prediction") {
  // A unit-speed curve with curvature k loses k^2 h^2 / 24 per chord.
  const IsingModel m;
  const double omega = 1.0;
  const Pulse p = SquarePulseSequence{{{omega, 6.0}}, 1};
  const auto grid = m.grid_for(p, 0.04);
  const auto curve = error_curve(propagate(m.hamiltonian(p), grid), m.noise_operator(), m.error_basis());
  const double h = grid.step();
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < curve.points.size(); ++k) {
    const double chord = (curve.points[k + 1] - curve.points[k]).norm() / h;
    // Leading deficit from the full curvature vector of G'' with |G''| = 2|Omega|.
    worst = std::max(worst, std::abs(1.0 - chord));
  }
  const double predicted = 4.0 * omega * omega * h * h / 24.0;
  CHECK(worst == doctest::Approx(predicted).epsilon(0.05));
  CHECK(speed_deviation(curve).chord_deviation == doctest::Approx(worst));
}

TEST_CASE("noisy propagation") {
  const IsingModel m;
  const auto h = m.hamiltonian(test_pulse());
  const TimeGrid grid = m.grid_for(test_pulse());
  const auto clean = propagate(h, grid);
  const auto zero = noisy_propagate(h, NoiseSpec(m.noise_operator(), 0.0), grid);
  CHECK(max_abs(zero.final() - clean.final()) == 0.0);

  const ControlHamiltonian idle({ControlTerm::constant(P("IX"), 0.0)});
  const double eps = 0.37;
  const auto u = noisy_propagate(idle, NoiseSpec(P("IZ"), eps), TimeGrid(2.0, 20));
  Eigen::VectorXcd d(4);
  d << std::exp(Complex(0, -2.0 * eps)), std::exp(Complex(0, 2.0 * eps)), std::exp(Complex(0, -2.0 * eps)),
      std::exp(Complex(0, 2.0 * eps));
  CHECK(max_abs(u.final() - Operator(d.asDiagonal())) < 1e-13);
  CHECK_THROWS_AS(NoiseSpec(2.0 * P("IZ"), 0.1), ValidationError);
}

TEST_CASE("infidelity examples") {
  const Operator r = exp_hermitian(P("X") + 0.3 * P("Z"), 0.9);
  CHECK(infidelity(r, r) == 0.0);
  CHECK(infidelity(-r, r) == doctest::Approx(2.0));
  CHECK(phase_minimized_infidelity(Complex(0.0, 1.0) * r, r) < 1e-15);
  CHECK_THROWS_AS(infidelity(2.0 * r, r), NotUnitary);
  CHECK_THROWS_AS(infidelity(r, P("ZZ")), DimensionMismatch);
}

TEST_CASE("property: noisy evolution matches the first-order error curve") {
  const IsingModel m;
  const Pulse p = test_pulse();
  const auto h = m.hamiltonian(p);
  const auto grid = m.grid_for(p, 0.01);
  const auto basis = m.error_basis();
  const auto end = propagate_endpoint(h, m.noise_operator(), grid);
  const Operator havg = basis.reconstruct(basis.coordinates(end.integral) / grid.t_end());
  std::vector<double> gap;
  for (double eps : {1e-3, 1e-4}) {
    const Operator u = noisy_propagate(h, NoiseSpec(m.noise_operator(), eps), grid).final();
    const Operator first = end.unitary * exp_hermitian(havg, eps * grid.t_end());
    gap.push_back(infidelity(u, first));
    CHECK(gap.back() < 0.1 * infidelity(u, end.unitary));
  }
  CHECK(std::log10(gap[0] / gap[1]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("open curve gives linear infidelity scaling") {
  const IsingModel m;
  const Pulse p = SquarePulseSequence{{{1.0, 5.0}}, 1};
  const auto h = m.hamiltonian(p);
  const auto eps = log_spaced(1e-4, 1e-1, 12);
  const auto fit = scaling_exponent(h, m.noise_operator(), eps, m.grid_for(p), 1e-4, 1e-2);
  CHECK(fit.slope >= 0.9);
  CHECK(fit.slope <= 1.1);
  CHECK(fit.epsilons.size() == 12);
  CHECK(fit.phase_minimized.size() == 12);
}

TEST_CASE("scaling fit edge cases") {
  const std::vector<double> one{1e-3};
  const std::vector<double> zero{0.0};
  CHECK_THROWS_AS(fit_scaling(one, zero), ValidationError);
  const std::vector<double> eps{1e-3, 1e-2, 1e-1};
  const std::vector<double> inf{1e-20, 1e-4, 1e-2};
  const auto fit = fit_scaling(eps, inf);
  CHECK_FALSE(fit.used[0]);
  CHECK(fit.warnings.size() == 1);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(log_spaced(1e-4, 1e-1, 4)[1] == doctest::Approx(1e-3));
}
