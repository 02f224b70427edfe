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

#include "dcgeom/ising.hpp"

#include <algorithm>
#include <cmath>

#include "dcgeom/errors.hpp"

namespace dcgeom {

std::vector<Operator> IsingModel::terms() const {
  return {PauliString::parse("IX").matrix(), PauliString::parse("IZ").matrix(), PauliString::parse("ZZ").matrix()};
}

ControlHamiltonian IsingModel::hamiltonian(const Pulse& pulse) const {
  const auto ops = terms();
  std::vector<ControlTerm> t;
  t.push_back(pulse_term(ops[0], pulse));
  t.push_back(ControlTerm::constant(ops[1], 0.5 * (e1 + e2)));
  t.push_back(ControlTerm::constant(ops[2], 0.5 * (e1 - e2)));
  return ControlHamiltonian(std::move(t), breakpoints(pulse), is_piecewise_constant(pulse));
}

Operator IsingModel::noise_operator() const {
  if (noise.num_qubits() != 2 || noise.is_identity()) throw ValidationError("Ising noise must be a non-identity 2-qubit Pauli string");
  return noise.matrix();
}

OperatorBasis IsingModel::error_basis() const {
  const auto t = terms();
  return error_subspace(t, noise_operator());
}

double IsingModel::energy_scale(const Pulse& pulse) const {
  return std::max({max_abs_amplitude(pulse), std::abs(e1), std::abs(e2)});
}

TimeGrid IsingModel::grid_for(const Pulse& pulse, double product) const {
  return TimeGrid::with_max_product(duration(pulse), energy_scale(pulse), product);
}

std::array<double, 5> ising_curvatures(double e1, double e2, double omega, double domega) {
  const double s = e1 * e1 + e2 * e2;
  if (s == 0.0) throw ValidationError("ising_curvatures: E1 = E2 = 0 is singular");
  const double p = e1 * e1 * e2 * e2;
  std::array<double, 5> k{};
  k[0] = 2.0 * std::abs(omega);
  k[1] = std::sqrt(2.0 * s);
  k[2] = std::sqrt(2.0) * std::abs(e1 * e1 - e2 * e2) / std::sqrt(s);
  k[3] = 2.0 * std::sqrt(omega * omega + 2.0 * p / s);
  const double den = omega * omega * s + 2.0 * p;
  k[4] = den > 0.0 ? e1 * e2 * std::sqrt(2.0 * s) / den * domega : 0.0;
  return k;
}

}  // namespace dcgeom
