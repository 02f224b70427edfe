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

#include <functional>
#include <limits>
#include <vector>

#include "dcgeom/operators.hpp"
#include "dcgeom/taylor.hpp"

namespace dcgeom {

/// One term Omega_i(t) V_i of a control Hamiltonian.
struct ControlTerm {
  Operator op;
  std::function<double(double)> value;
  /// Taylor expansion of the coefficient around t (right-continuous at breaks).
  std::function<Jet(double)> jet;
  /// Highest derivative order that is meaningful between breakpoints.
  int smoothness = std::numeric_limits<int>::max();

  static ControlTerm constant(Operator op, double c);
};

/// H0(t) = sum_i Omega_i(t) V_i, optionally plus an opaque H(t) callback that
/// supports value sampling only.
class ControlHamiltonian {
 public:
  ControlHamiltonian() = default;
  explicit ControlHamiltonian(std::vector<ControlTerm> terms, std::vector<double> breakpoints = {},
                              bool piecewise_constant = false);

  /// Wraps a plain H(t) function; such a Hamiltonian cannot produce jets.
  static ControlHamiltonian from_function(Eigen::Index dim, std::function<Operator(double)> h);

  Eigen::Index dim() const { return dim_; }
  const std::vector<ControlTerm>& terms() const { return terms_; }
  /// Times inside the pulse where coefficients jump or kink, sorted.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  bool piecewise_constant() const { return piecewise_constant_; }
  bool has_jets() const { return !generic_; }

  Operator at(double t) const;

  /// Operator-valued Taylor coefficients H_j with H(t + s) = sum_j H_j s^j.
  std::vector<Operator> jet(double t) const;

  /// Lowest smoothness over the time-dependent terms.
  int smoothness() const;

  /// Copy with an extra constant term (e.g. quasi-static noise eps * Q).
  ControlHamiltonian with_constant(const Operator& op, double coefficient) const;

  /// Restriction of every term to the diagonal block [offset, offset + size).
  ControlHamiltonian restricted(Eigen::Index offset, Eigen::Index size) const;

 private:
  std::vector<ControlTerm> terms_;
  std::vector<double> breakpoints_;
  bool piecewise_constant_ = false;
  bool generic_ = false;
  std::function<Operator(double)> generic_fn_;
  Eigen::Index dim_ = 0;
};

}  // namespace dcgeom
