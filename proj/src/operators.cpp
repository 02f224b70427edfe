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

#include "dcgeom/operators.hpp"

#include <cmath>

#include "dcgeom/errors.hpp"

namespace dcgeom {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kDropTolerance = 1e-10;

Eigen::Matrix2cd single_pauli(Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -kI, kI, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw DimensionMismatch(std::string(what) + ": operator dimensions differ (" +
                            std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) + ")");
  }
}

}  // namespace

PauliString PauliString::parse(std::string_view text) {
  if (text.empty()) throw ValidationError("empty Pauli string");
  std::vector<Pauli> f;
  f.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case 'I': f.push_back(Pauli::I); break;
      case 'X': f.push_back(Pauli::X); break;
      case 'Y': f.push_back(Pauli::Y); break;
      case 'Z': f.push_back(Pauli::Z); break;
      default:
        throw ValidationError("invalid Pauli label '" + std::string(1, ch) + "' in \"" +
                              std::string(text) + "\"");
    }
  }
  return PauliString(std::move(f));
}

bool PauliString::is_identity() const {
  for (auto p : factors_)
    if (p != Pauli::I) return false;
  return true;
}

std::string PauliString::str() const {
  static constexpr char kLabels[] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  for (auto p : factors_) s.push_back(kLabels[static_cast<int>(p)]);
  return s;
}

Operator PauliString::matrix() const {
  Operator m = Operator::Identity(1, 1);
  for (auto p : factors_) {
    const Eigen::Matrix2cd f = single_pauli(p);
    Operator next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = m(i, j) * f;
    m = std::move(next);
  }
  return m;
}

std::vector<PauliString> all_pauli_strings(std::size_t num_qubits, bool include_identity) {
  std::vector<PauliString> out;
  const std::size_t total = std::size_t{1} << (2 * num_qubits);
  for (std::size_t code = include_identity ? 0 : 1; code < total; ++code) {
    std::vector<Pauli> f(num_qubits);
    for (std::size_t q = 0; q < num_qubits; ++q) {
      const std::size_t shift = 2 * (num_qubits - 1 - q);
      f[q] = static_cast<Pauli>((code >> shift) & 3u);
    }
    out.emplace_back(std::move(f));
  }
  return out;
}

std::size_t qubit_count(const Operator& op) {
  const auto dim = static_cast<std::size_t>(op.rows());
  if (op.rows() != op.cols() || dim == 0 || (dim & (dim - 1)) != 0)
    throw DimensionMismatch("operator dimension " + std::to_string(dim) + " is not a power of two");
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

double inner_product(const Operator& v, const Operator& w) {
  require_same_dim(v, w, "inner_product");
  // tr(VW) = sum_ij V_ij W_ji
  const Complex tr = (v.transpose().cwiseProduct(w)).sum();
  return tr.real() / static_cast<double>(v.rows());
}

double norm(const Operator& v) {
  return std::sqrt(v.squaredNorm() / static_cast<double>(v.rows()));
}

Operator commutator_i(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "commutator_i");
  return kI * (a * b - b * a);
}

Operator anticommutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

bool is_hermitian(const Operator& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

bool is_unitary(const Operator& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const Operator d = u.adjoint() * u - Operator::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

PauliMap pauli_decompose(const Operator& a) {
  const std::size_t n = qubit_count(a);
  PauliMap out;
  for (const auto& p : all_pauli_strings(n)) {
    const double c = inner_product(a, p.matrix());
    if (std::abs(c) > 1e-14) out.emplace(p, c);
  }
  return out;
}

Operator reconstruct(const PauliMap& coefficients, std::size_t num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  Operator out = Operator::Zero(dim, dim);
  for (const auto& [p, c] : coefficients) {
    if (p.num_qubits() != num_qubits) throw DimensionMismatch("Pauli string length mismatch in reconstruct");
    out += c * p.matrix();
  }
  return out;
}

// ---------------------------------------------------------------------------

OperatorBasis::OperatorBasis(std::vector<Operator> elements, std::vector<std::optional<PauliString>> labels)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
  if (labels_.size() != elements_.size()) throw ValidationError("OperatorBasis: label count mismatch");
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    require_same_dim(elements_[i], elements_.front(), "OperatorBasis");
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = inner_product(elements_[i], elements_[j]);
      if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-10)
        throw ValidationError("OperatorBasis: elements are not orthonormal");
    }
  }
}

OperatorBasis OperatorBasis::from_pauli_strings(std::span<const PauliString> strings) {
  std::vector<Operator> el;
  std::vector<std::optional<PauliString>> lab;
  for (const auto& p : strings) {
    el.push_back(p.matrix());
    lab.emplace_back(p);
  }
  return OperatorBasis(std::move(el), std::move(lab));
}

std::optional<std::size_t> OperatorBasis::index_of(const PauliString& p) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] && *labels_[i] == p) return i;
  return std::nullopt;
}

Eigen::VectorXd OperatorBasis::coordinates(const Operator& op) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(elements_.size()));
  for (std::size_t i = 0; i < elements_.size(); ++i) x[static_cast<Eigen::Index>(i)] = inner_product(elements_[i], op);
  return x;
}

Operator OperatorBasis::reconstruct(const Eigen::VectorXd& coords) const {
  if (static_cast<std::size_t>(coords.size()) != elements_.size())
    throw DimensionMismatch("coordinate vector length does not match basis dimension");
  Operator out = Operator::Zero(static_cast<Eigen::Index>(operator_dim()), static_cast<Eigen::Index>(operator_dim()));
  for (std::size_t i = 0; i < elements_.size(); ++i) out += coords[static_cast<Eigen::Index>(i)] * elements_[i];
  return out;
}

double OperatorBasis::residual(const Operator& op) const {
  return norm(op - reconstruct(coordinates(op)));
}

OperatorBasis OperatorBasis::rotated(const Eigen::MatrixXd& orthogonal) const {
  const auto d = static_cast<Eigen::Index>(elements_.size());
  if (orthogonal.rows() != d || orthogonal.cols() != d) throw DimensionMismatch("rotation size mismatch");
  std::vector<Operator> el;
  for (Eigen::Index i = 0; i < d; ++i) el.push_back(reconstruct(orthogonal.col(i)));
  return OperatorBasis(std::move(el), std::vector<std::optional<PauliString>>(elements_.size()));
}

Eigen::MatrixXd OperatorBasis::adjoint_action(const Operator& u) const {
  const auto d = static_cast<Eigen::Index>(elements_.size());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index j = 0; j < d; ++j) m.col(j) = coordinates(u.adjoint() * elements_[static_cast<std::size_t>(j)] * u);
  return m;
}

// ---------------------------------------------------------------------------

OperatorBasis error_subspace(std::span<const Operator> h0_terms, const Operator& delta_h) {
  for (const auto& v : h0_terms) {
    require_same_dim(v, delta_h, "error_subspace");
    if (!is_hermitian(v)) throw NotHermitian("error_subspace: Hamiltonian term is not Hermitian");
  }
  if (!is_hermitian(delta_h)) throw NotHermitian("error_subspace: noise operator is not Hermitian");
  if (norm(delta_h) < kDropTolerance) throw ValidationError("error_subspace: noise operator is zero");

  const std::size_t n = qubit_count(delta_h);
  const std::size_t cap = (std::size_t{1} << (2 * n)) - 1;

  std::vector<Operator> basis;
  std::vector<std::optional<PauliString>> labels;

  // Orthogonalize a candidate against the current basis (two MGS passes) and
  // append it if anything survives. A survivor that is a single Pauli string
  // is stored as that exact string.
  auto try_add = [&](const Operator& candidate) {
    const double scale = norm(candidate);
    if (scale < kDropTolerance) return;
    Operator r = candidate;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) r -= inner_product(b, r) * b;
    const double rn = norm(r);
    if (rn < kDropTolerance * std::max(1.0, scale)) return;

    const PauliMap parts = pauli_decompose(r);
    std::optional<PauliString> label;
    if (parts.size() == 1) {
      label = parts.begin()->first;
    } else {
      // Dominant single string with negligible remainder also counts.
      double total = 0.0;
      double best = 0.0;
      const PauliString* best_p = nullptr;
      for (const auto& [p, c] : parts) {
        total += c * c;
        if (std::abs(c) > best) {
          best = std::abs(c);
          best_p = &p;
        }
      }
      if (best_p && total - best * best < 1e-20 * total) label = *best_p;
    }
    if (label) {
      basis.push_back(label->matrix());
    } else {
      basis.push_back(r / rn);
    }
    labels.push_back(label);
  };

  try_add(delta_h);
  for (std::size_t next = 0; next < basis.size() && basis.size() < cap; ++next) {
    for (const auto& v : h0_terms) {
      const Operator c = commutator_i(v, basis[next]);
      try_add(c);
      if (basis.size() >= cap) break;
    }
  }
  return OperatorBasis(std::move(basis), std::move(labels));
}

}  // namespace dcgeom
