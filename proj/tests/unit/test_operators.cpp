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

#include <random>

#include "doctest.h"
#include "dcgeom/errors.hpp"
#include "dcgeom/ising.hpp"
#include "dcgeom/operators.hpp"

using namespace dcgeom;

namespace {

Operator P(const char* s) { return PauliString::parse(s).matrix(); }

Operator random_hermitian(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> n;
  Operator a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(n(rng), n(rng));
  return 0.5 * (a + a.adjoint());
}

Operator random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
  const Operator h = random_hermitian(rng, dim);
  Eigen::SelfAdjointEigenSolver<Operator> es(h);
  Eigen::VectorXcd ph(dim);
  for (Eigen::Index i = 0; i < dim; ++i) ph[i] = std::exp(Complex(0.0, es.eigenvalues()[i]));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

double max_abs(const Operator& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("pauli strings are hermitian unitary involutions") {
  for (const auto& p : all_pauli_strings(2)) {
    const Operator m = p.matrix();
    CHECK(is_hermitian(m));
    CHECK(is_unitary(m));
    CHECK(max_abs(m * m - Operator::Identity(4, 4)) < 1e-15);
  }
  CHECK(PauliString::parse("ZX").str() == "ZX");
  CHECK_THROWS_AS(PauliString::parse("ZQ"), ValidationError);
  CHECK_THROWS_AS(PauliString::parse(""), ValidationError);
}

TEST_CASE("qubit 1 is the most significant kronecker factor") {
  Operator z1 = P("ZI");
  CHECK(z1(0, 0) == Complex(1.0));
  CHECK(z1(1, 1) == Complex(1.0));
  CHECK(z1(2, 2) == Complex(-1.0));
}

TEST_CASE("distinct non-identity pauli strings are orthogonal") {
  const auto all = all_pauli_strings(2, false);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j)
      CHECK(inner_product(all[i].matrix(), all[j].matrix()) == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("inner product examples") {
  CHECK(inner_product(P("IZ"), P("IZ")) == doctest::Approx(1.0));
  CHECK(inner_product(P("IX"), P("IZ")) == doctest::Approx(0.0));
  CHECK(inner_product(P("ZZ"), P("ZZ")) == doctest::Approx(1.0));
  CHECK_THROWS_AS(inner_product(P("Z"), P("ZZ")), DimensionMismatch);
}

TEST_CASE("commutator examples") {
  CHECK(max_abs(commutator_i(P("IX"), P("IZ")) - 2.0 * P("IY")) < 1e-15);
  CHECK(max_abs(commutator_i(P("IZ"), P("IZ"))) == 0.0);
  CHECK(max_abs(commutator_i(P("ZZ"), P("IX")) + 2.0 * P("ZY")) < 1e-15);
  CHECK_THROWS_AS(commutator_i(P("X"), P("XX")), DimensionMismatch);
}

TEST_CASE("anticommutator examples") {
  CHECK(max_abs(anticommutator(P("IX"), P("IZ"))) == 0.0);
  CHECK(max_abs(anticommutator(P("IZ"), P("IZ")) - 2.0 * Operator::Identity(4, 4)) < 1e-15);
  CHECK(max_abs(anticommutator(P("IX"), P("YI")) - 2.0 * P("YX")) < 1e-15);
  CHECK_THROWS_AS(anticommutator(P("X"), P("XX")), DimensionMismatch);
}

TEST_CASE("pauli_decompose examples") {
  const auto m = pauli_decompose(2.0 * P("IY"));
  REQUIRE(m.size() == 1);
  CHECK(m.at(PauliString::parse("IY")) == doctest::Approx(2.0));

  // Omega = 1, E1 = 0.5, E2 = 1: coefficients (E1+E2)/2 and (E1-E2)/2.
  const IsingModel model{0.5, 1.0};
  const Operator h0 = P("IX") + 0.75 * P("IZ") - 0.25 * P("ZZ");
  const auto c = pauli_decompose(h0);
  REQUIRE(c.size() == 3);
  CHECK(c.at(PauliString::parse("IX")) == doctest::Approx(1.0));
  CHECK(c.at(PauliString::parse("IZ")) == doctest::Approx(0.75));
  CHECK(c.at(PauliString::parse("ZZ")) == doctest::Approx(-0.25));
  const Pulse one = SquarePulseSequence{{{1.0, 1.0}}, 1};
  CHECK(max_abs(model.hamiltonian(one).at(0.5) - h0) < 1e-15);

  CHECK(pauli_decompose(Operator::Zero(4, 4)).empty());
}

TEST_CASE("property: inner product is real, symmetric and unitarily invariant") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index dim = trial % 2 ? 4 : 8;
    const Operator a = random_hermitian(rng, dim);
    const Operator b = random_hermitian(rng, dim);
    const Operator u = random_unitary(rng, dim);
    const Complex raw = (a * b).trace() / static_cast<double>(dim);
    CHECK(std::abs(raw.imag()) < 1e-12);
    CHECK(inner_product(a, b) == doctest::Approx(inner_product(b, a)).epsilon(1e-12));
    CHECK(std::abs(inner_product(u * a * u.adjoint(), u * b * u.adjoint()) - inner_product(a, b)) < 1e-10);
  }
}

TEST_CASE("property: commutator and anticommutator outputs are hermitian") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator a = random_hermitian(rng, 4);
    const Operator b = random_hermitian(rng, 4);
    CHECK(is_hermitian(commutator_i(a, b), 1e-12));
    CHECK(is_hermitian(anticommutator(a, b), 1e-12));
  }
}

TEST_CASE("property: decompose then reconstruct is the identity") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator a = random_hermitian(rng, trial % 2 ? 4 : 8);
    CHECK(max_abs(reconstruct(pauli_decompose(a), qubit_count(a)) - a) < 1e-12);
  }
}

TEST_CASE("error subspace of the Ising model") {
  const IsingModel model;
  const auto basis = model.error_basis();
  REQUIRE(basis.dimension() == 6);
  std::vector<std::string> labels;
  for (const auto& l : basis.labels()) {
    REQUIRE(l.has_value());
    labels.push_back(l->str());
  }
  std::sort(labels.begin(), labels.end());
  CHECK(labels == std::vector<std::string>{"IX", "IY", "IZ", "ZX", "ZY", "ZZ"});
  // First-appearance order starts with the noise direction itself.
  CHECK(basis.labels()[0]->str() == "IZ");
}

TEST_CASE("single-qubit error subspaces") {
  const std::vector<Operator> x{P("X")};
  CHECK(error_subspace(x, P("Z")).dimension() == 2);
  const std::vector<Operator> xy{P("X"), P("Y")};
  CHECK(error_subspace(xy, P("Z")).dimension() == 3);
  CHECK_THROWS_AS(error_subspace(x, Operator::Zero(2, 2)), ValidationError);
  Operator bad = P("X");
  bad(0, 1) = Complex(0.0, 1.0);
  CHECK_THROWS_AS(error_subspace(x, bad), NotHermitian);
}

TEST_CASE("property: error subspace is closed under every term") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<Operator> terms{random_hermitian(rng, 4), random_hermitian(rng, 4)};
    Operator dh = random_hermitian(rng, 4);
    dh -= (dh.trace() / 4.0) * Operator::Identity(4, 4);
    const auto basis = error_subspace(terms, dh);
    CHECK(basis.dimension() <= 15);
    for (const auto& v : terms)
      for (const auto& b : basis.elements()) CHECK(basis.residual(commutator_i(v, b)) < 1e-10);
  }
  const IsingModel model;
  const auto basis = model.error_basis();
  for (const auto& v : model.terms())
    for (const auto& b : basis.elements()) CHECK(basis.residual(commutator_i(v, b)) < 1e-10);
}

TEST_CASE("operator basis coordinates and rotation") {
  const auto basis = IsingModel{}.error_basis();
  Eigen::VectorXd x(6);
  x << 1, -2, 0.5, 0, 3, 1;
  CHECK((basis.coordinates(basis.reconstruct(x)) - x).norm() < 1e-14);
  Eigen::MatrixXd o = Eigen::HouseholderQR<Eigen::MatrixXd>(Eigen::MatrixXd::Random(6, 6)).householderQ();
  const auto rot = basis.rotated(o);
  const Operator v = basis.reconstruct(x);
  CHECK((rot.coordinates(v) - o.transpose() * x).norm() < 1e-12);
  std::vector<Operator> not_orthonormal{P("IZ"), 2.0 * P("IX")};
  CHECK_THROWS_AS(OperatorBasis(not_orthonormal, {std::nullopt, std::nullopt}), ValidationError);
}
