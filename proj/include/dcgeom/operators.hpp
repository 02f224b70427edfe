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

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dcgeom {

using Complex = std::complex<double>;
/// Dense operator on an n-qubit Hilbert space (dim 2^n).
using Operator = Eigen::MatrixXcd;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Tensor product of single-qubit Paulis. Text form is one letter per qubit,
/// qubit 1 first ("ZX" = Z on qubit 1, X on qubit 2); qubit 1 is the most
/// significant factor of the Kronecker product.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> factors) : factors_(std::move(factors)) {}

  /// Throws ValidationError on characters outside IXYZ or an empty string.
  static PauliString parse(std::string_view text);

  std::size_t num_qubits() const { return factors_.size(); }
  const std::vector<Pauli>& factors() const { return factors_; }
  bool is_identity() const;
  std::string str() const;
  Operator matrix() const;

  auto operator<=>(const PauliString&) const = default;

 private:
  std::vector<Pauli> factors_;
};

/// All 4^n Pauli strings on n qubits in lexicographic IXYZ order.
std::vector<PauliString> all_pauli_strings(std::size_t num_qubits, bool include_identity = true);

/// Number of qubits for a 2^n dimensional operator; throws otherwise.
std::size_t qubit_count(const Operator& op);

/// Normalized trace inner product Re tr(VW) / dim.
double inner_product(const Operator& v, const Operator& w);

/// Norm induced by the normalized Hilbert-Schmidt product, sqrt(tr(V^dag V)/dim).
/// Agrees with sqrt(inner_product(V, V)) for Hermitian V.
double norm(const Operator& v);

/// i[A, B].
Operator commutator_i(const Operator& a, const Operator& b);

/// AB + BA.
Operator anticommutator(const Operator& a, const Operator& b);

bool is_hermitian(const Operator& a, double tol = 1e-12);
bool is_unitary(const Operator& u, double tol = 1e-10);

using PauliMap = std::map<PauliString, double>;

/// Real coefficients c_P = inner_product(A, P); entries below 1e-14 are omitted.
PauliMap pauli_decompose(const Operator& a);

Operator reconstruct(const PauliMap& coefficients, std::size_t num_qubits);

/// Ordered orthonormal set of traceless Hermitian operators.
///
/// Elements that are exactly Pauli strings carry their label; elements produced
/// by Gram-Schmidt (or a basis rotation) do not.
class OperatorBasis {
 public:
  OperatorBasis() = default;
  OperatorBasis(std::vector<Operator> elements, std::vector<std::optional<PauliString>> labels);
  static OperatorBasis from_pauli_strings(std::span<const PauliString> strings);

  std::size_t dimension() const { return elements_.size(); }
  std::size_t operator_dim() const { return elements_.empty() ? 0 : elements_.front().rows(); }
  const std::vector<Operator>& elements() const { return elements_; }
  const std::vector<std::optional<PauliString>>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(const PauliString& p) const;

  Eigen::VectorXd coordinates(const Operator& op) const;
  Operator reconstruct(const Eigen::VectorXd& coords) const;
  /// Norm of the component of op outside the span.
  double residual(const Operator& op) const;

  /// Basis with elements b'_i = sum_j O(j, i) b_j for an orthogonal O, so that
  /// coordinates transform as x' = O^T x.
  OperatorBasis rotated(const Eigen::MatrixXd& orthogonal) const;

  /// Matrix of v -> coords(U^dag v U) restricted to the span.
  Eigen::MatrixXd adjoint_action(const Operator& u) const;

 private:
  std::vector<Operator> elements_;
  std::vector<std::optional<PauliString>> labels_;
};

/// Smallest subspace containing delta_h that is closed under i[V, .] for every
/// Hamiltonian term V. Elements are listed in order of first appearance.
OperatorBasis error_subspace(std::span<const Operator> h0_terms, const Operator& delta_h);

}  // namespace dcgeom
