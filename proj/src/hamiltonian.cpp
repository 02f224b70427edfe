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

#include "dcgeom/hamiltonian.hpp"

#include <algorithm>

#include "dcgeom/errors.hpp"

namespace dcgeom {

ControlTerm ControlTerm::constant(Operator op, double c) {
  return ControlTerm{std::move(op), [c](double) { return c; }, [c](double) { return Jet(c); }};
}

ControlHamiltonian::ControlHamiltonian(std::vector<ControlTerm> terms, std::vector<double> breakpoints,
                                       bool piecewise_constant)
    : terms_(std::move(terms)), breakpoints_(std::move(breakpoints)), piecewise_constant_(piecewise_constant) {
  if (terms_.empty()) throw ValidationError("ControlHamiltonian needs at least one term");
  dim_ = terms_.front().op.rows();
  for (const auto& t : terms_) {
    if (t.op.rows() != dim_ || t.op.cols() != dim_) throw DimensionMismatch("ControlHamiltonian: term dimensions differ");
    if (!is_hermitian(t.op)) throw NotHermitian("ControlHamiltonian: term operator is not Hermitian");
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
}

ControlHamiltonian ControlHamiltonian::from_function(Eigen::Index dim, std::function<Operator(double)> h) {
  ControlHamiltonian out;
  out.dim_ = dim;
  out.generic_ = true;
  out.generic_fn_ = std::move(h);
  return out;
}

Operator ControlHamiltonian::at(double t) const {
  Operator h = generic_ ? generic_fn_(t) : Operator::Zero(dim_, dim_);
  if (h.rows() != dim_ || h.cols() != dim_) throw DimensionMismatch("H(t) has the wrong dimension");
  for (const auto& term : terms_) h += term.value(t) * term.op;
  return h;
}

std::vector<Operator> ControlHamiltonian::jet(double t) const {
  if (generic_) throw PreconditionViolation("Hamiltonian given as a plain function has no derivative information");
  std::vector<Operator> out(Jet::kSize, Operator::Zero(dim_, dim_));
  for (const auto& term : terms_) {
    const Jet j = term.jet(t);
    for (std::size_t k = 0; k < Jet::kSize; ++k)
      if (j[k] != 0.0) out[k] += j[k] * term.op;
  }
  return out;
}

int ControlHamiltonian::smoothness() const {
  int s = std::numeric_limits<int>::max();
  for (const auto& t : terms_) s = std::min(s, t.smoothness);
  return s;
}

ControlHamiltonian ControlHamiltonian::with_constant(const Operator& op, double coefficient) const {
  ControlHamiltonian out = *this;
  if (out.generic_) {
    auto fn = out.generic_fn_;
    Operator add = coefficient * op;
    out.generic_fn_ = [fn, add](double t) -> Operator { return fn(t) + add; };
    return out;
  }
  if (op.rows() != dim_) throw DimensionMismatch("with_constant: dimension mismatch");
  out.terms_.push_back(ControlTerm::constant(op, coefficient));
  return out;
}

ControlHamiltonian ControlHamiltonian::restricted(Eigen::Index offset, Eigen::Index size) const {
  if (generic_) throw PreconditionViolation("cannot restrict a Hamiltonian given as a plain function");
  if (offset < 0 || offset + size > dim_) throw DimensionMismatch("restricted: block out of range");
  std::vector<ControlTerm> terms;
  for (const auto& t : terms_) {
    ControlTerm r = t;
    r.op = t.op.block(offset, offset, size, size);
    if (r.op.cwiseAbs().maxCoeff() > 0.0) terms.push_back(std::move(r));
  }
  if (terms.empty()) terms.push_back(ControlTerm::constant(Operator::Zero(size, size), 0.0));
  return ControlHamiltonian(std::move(terms), breakpoints_, piecewise_constant_);
}

}  // namespace dcgeom
