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

#include <array>
#include <vector>

#include "dcgeom/hamiltonian.hpp"
#include "dcgeom/operators.hpp"
#include "dcgeom/propagation.hpp"
#include "dcgeom/pulse.hpp"

namespace dcgeom {

/// Two qubits with an Ising-type splitting, driven on qubit 2:
///   H0 = Omega(t) X2 + (E1+E2)/2 Z2 + (E1-E2)/2 Z1 Z2,
/// i.e. the blocks diag(E1, -E1) and diag(E2, -E2) sharing one drive.
struct IsingModel {
  double e1 = 0.5;
  double e2 = 1.0;
  PauliString noise = PauliString::parse("IZ");

  /// The fixed operators X2, Z2, Z1Z2.
  std::vector<Operator> terms() const;
  ControlHamiltonian hamiltonian(const Pulse& pulse) const;
  /// Unit-norm noise direction Q.
  Operator noise_operator() const;
  OperatorBasis error_basis() const;
  /// Grid with step * max(|Omega|, |E1|, |E2|) <= product.
  TimeGrid grid_for(const Pulse& pulse, double product = 0.02) const;
  double energy_scale(const Pulse& pulse) const;
};

/// kappa_1..kappa_5 of the six-dimensional error curve at one instant.
/// kappa_5 carries the sign of dOmega/dt (for E1 E2 > 0).
std::array<double, 5> ising_curvatures(double e1, double e2, double omega, double domega);

}  // namespace dcgeom
