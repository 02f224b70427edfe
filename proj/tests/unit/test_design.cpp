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
#include <random>

#include "doctest.h"
#include "dcgeom/design.hpp"
#include "dcgeom/errors.hpp"

using namespace dcgeom;

namespace {

constexpr double kPi = std::numbers::pi;

Operator P(const char* s) { return PauliString::parse(s).matrix(); }

double max_abs(const Operator& a) { return a.cwiseAbs().maxCoeff(); }

DesignProblem square_problem() {
  DesignProblem p;
  p.ansatz = Ansatz::kSquare;
  p.square_segments = 2;
  p.optimizer.starts = 16;
  p.optimizer.max_iterations = 300;
  p.epsilons = log_spaced(1e-4, 1e-2, 6);
  return p;
}

std::vector<double> random_point(const DesignProblem& p, std::mt19937_64& rng) {
  std::vector<double> x;
  for (const auto& [lo, hi] : p.effective_bounds()) x.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
  return x;
}

}  // namespace

TEST_CASE("gate extraction examples") {
  const auto z1 = extract_gate(P("ZI"));
  CHECK(z1.label == "ZI");
  CHECK(z1.distance < 1e-15);
  const auto id = extract_gate(Complex(0.0, 1.0) * Operator::Identity(4, 4));
  CHECK(id.label == "II");
  CHECK(id.phase == doctest::Approx(kPi / 2));
  CHECK(id.distances.size() == 4);
  CHECK_THROWS_AS(extract_gate(2.0 * P("ZZ")), NotUnitary);
  const std::vector<std::string> none;
  CHECK_THROWS_AS(extract_gate(P("ZZ"), none), ValidationError);
}

TEST_CASE("property: gate extraction ignores global phase") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> ph(-kPi, kPi);
  for (const char* g : {"II", "ZI", "IZ", "ZZ"}) {
    const Operator near = exp_hermitian(P("XY") + 0.3 * P("ZX"), 1e-3) * P(g);
    const auto c = extract_gate(std::exp(Complex(0.0, ph(rng))) * near);
    CHECK(c.label == g);
    CHECK(c.distance == doctest::Approx(phase_minimized_infidelity(near, P(g))).epsilon(1e-9));
    CHECK(c.distance < 2e-3);
  }
}

TEST_CASE("problem validation") {
  DesignProblem p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.parameter_count() == 8);
  CHECK(p.parameter_names().front() == "c0");
  CHECK(p.parameter_names().back() == "t_p");
  p.k = 3;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.k = 2;
  CHECK_NOTHROW(p.validate());
  p.target_gate = "Z";
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.target_gate = "ZI";
  p.bounds = {{0.0, 1.0}};
  CHECK_THROWS_AS(p.validate(), ValidationError);
  const auto sq = square_problem();
  CHECK(sq.parameter_count() == 4);
  CHECK(sq.parameter_names()[1] == "dt1");
  CHECK_THROWS_AS(period_from_parameters(sq, std::vector<double>{1.0}), ValidationError);
}

TEST_CASE("a single repetition reduces to ordinary closure") {
  DesignProblem p;
  p.n_sym = 1;
  std::mt19937_64 rng(23);
  const auto x = random_point(p, rng);
  const auto d = symmetric_closure_residual(p, x);
  for (double s : d.snapped) CHECK(s == 0.0);
  const double g = d.period_displacement.norm() / d.period;
  CHECK(d.displacement_term == doctest::Approx(g).epsilon(1e-10));
}

TEST_CASE("constant drive is far from symmetric closure") {
  DesignProblem p = square_problem();
  const std::vector<double> x{1.0, 1.5, 1.0, 1.5};
  CHECK(symmetric_closure_residual(p, x).residual > 0.1);
}

TEST_CASE("property: the closure residual bounds the full-pulse displacement") {
  std::mt19937_64 rng(29);
  for (Ansatz a : {Ansatz::kSmooth, Ansatz::kSquare}) {
    DesignProblem p;
    p.ansatz = a;
    for (int trial = 0; trial < 8; ++trial) {
      const auto x = random_point(p, rng);
      const auto d = symmetric_closure_residual(p, x);
      const Pulse full = pulse_from_parameters(p, x);
      const auto end = propagate_endpoint(p.model.hamiltonian(full), p.model.noise_operator(),
                                          p.model.grid_for(full, p.search_grid_product));
      const double g = p.model.error_basis().coordinates(end.integral).norm();
      const double t = duration(full);
      CHECK(g <= 2.0 * p.n_sym * t * d.residual + 1e-8 * t);
      CHECK(d.period_map.determinant() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("frame update across an amplitude step") {
  const IsingModel m;
  for (const auto& [w1, w2] : {std::pair{0.9, -1.4}, std::pair{0.6, 1.7}}) {
    const Pulse p = SquarePulseSequence{{{w1, 1.3}, {w2, 1.1}}, 1};
    const auto h = m.hamiltonian(p);
    const auto traj = propagate(h, TimeGrid(2.4, 24));
    const Operator& r = traj.unitaries[13];
    const auto basis = m.error_basis();
    const auto before = frame_at(h, r, m.noise_operator(), basis, 1.3 - 1e-9);
    const auto after = frame_at(h, r, m.noise_operator(), basis, 1.3 + 1e-9);
    REQUIRE(before.complete());
    REQUIRE(after.complete());
    const auto stepped = frame_after_step(before, w1, w2, m.e1, m.e2);
    CHECK((stepped.vectors - after.vectors).cwiseAbs().maxCoeff() < 1e-6);
  }
  FrenetFrame small;
  small.vectors = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(frame_after_step(small, 1.0, 2.0, 0.5, 1.0), PreconditionViolation);
}

TEST_CASE("square pulses propagate exactly on unaligned grids") {
  const IsingModel m;
  const Pulse p = SquarePulseSequence{{{1.2, 0.77}, {-0.5, 1.31}}, 3};
  const auto h = m.hamiltonian(p);
  const Operator coarse = propagate(h, TimeGrid(duration(p), 7)).final();
  const auto generic = ControlHamiltonian::from_function(4, [&](double t) { return h.at(t); });
  // 2.08 per period; 208 steps per period puts every switch on a grid point.
  const Operator aligned = propagate(generic, TimeGrid(duration(p), 3 * 208)).final();
  CHECK(max_abs(coarse - aligned) < 1e-10);
}

TEST_CASE("small square design converges and is reproducible") {
  const DesignProblem p = square_problem();
  const auto a = design(p);
  REQUIRE(a.converged);
  CHECK(a.objective < p.optimizer.tolerance);
  CHECK(a.classification.label == "ZI");
  CHECK(a.verification.closure < 1e-6 * a.verification.duration);
  CHECK(a.verification.gate_distance < 1e-6);
  CHECK(a.verification.sweep.slope == doctest::Approx(2.0).epsilon(0.05));

  const ControlHamiltonian h = p.model.hamiltonian(a.pulse);
  const auto grid = p.model.grid_for(a.pulse, p.grid_product);
  const Operator u3 = noisy_propagate(h, NoiseSpec(p.model.noise_operator(), 1e-3), grid).final();
  const Operator u4 = noisy_propagate(h, NoiseSpec(p.model.noise_operator(), 1e-4), grid).final();
  const double d3 = infidelity(u3, a.gate);
  const double d4 = infidelity(u4, a.gate);
  CHECK(d3 < 1e-4);
  CHECK(d3 / d4 == doctest::Approx(100.0).epsilon(0.02));

  const auto b = design(p);
  CHECK(b.parameters == a.parameters);
  CHECK(b.start_index == a.start_index);
}

TEST_CASE("unreachable bounds do not converge") {
  DesignProblem p = square_problem();
  p.optimizer.starts = 2;
  p.optimizer.max_iterations = 40;
  p.optimizer.polish_evaluations = 40;
  p.bounds = {{0.1, 0.2}, {0.2, 0.3}, {0.1, 0.2}, {0.2, 0.3}};
  const auto r = design(p);
  CHECK_FALSE(r.converged);
  CHECK(r.starts_run == 2);
  CHECK(r.start_index == -1);
}
