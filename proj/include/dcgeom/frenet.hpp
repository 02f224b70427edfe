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
#include <functional>
#include <vector>

#include "dcgeom/hamiltonian.hpp"
#include "dcgeom/operators.hpp"
#include "dcgeom/propagation.hpp"

namespace dcgeom {

/// Gram-Schmidt vectors below this (relative) norm are treated as degenerate.
inline constexpr double kFrameDropTolerance = 1e-8;

/// Orthonormal frame e_1..e_d (matrix columns) at one sample.
///
/// The first d-1 vectors come from Gram-Schmidt on successive derivatives; e_d
/// completes a positively oriented frame, which makes the last curvature
/// signed. `rank` counts the vectors obtained from independent derivatives
/// (d when the completion was possible).
struct FrenetFrame {
  Eigen::MatrixXd vectors;
  int rank = 0;
  double time = 0.0;

  bool complete() const { return rank == vectors.cols(); }
};

struct FrameSeries {
  TimeGrid grid;
  std::vector<FrenetFrame> frames;
  /// Samples whose frame was degenerate (rank below the effective dimension)
  /// or whose neighbourhood straddles a Hamiltonian breakpoint.
  std::vector<bool> flagged;
  /// Index of the smooth piece each sample belongs to; finite differences never
  /// mix pieces.
  std::vector<int> piece;
  /// Largest rank seen; below d when the whole curve lives in a subspace.
  int effective_dimension = 0;
};

/// kappa_1..kappa_{d-1} per sample. NaN marks values that are not reported.
struct CurvatureProfile {
  TimeGrid grid;
  std::vector<Eigen::VectorXd> kappas;
  std::vector<bool> flagged;
  int effective_dimension = 0;
};

/// Operators D_n with d^nG/dt^n = R^dag D_n R, i.e. (C + d/dt)^{n-1} Q where
/// C V = i[H0, V]; returned for n = 1..n_max (n_max <= 8) at time t.
std::vector<Operator> derivative_operators_at(const ControlHamiltonian& h, const Operator& q, int n_max, double t);

/// The same expansion as functions of time.
std::vector<std::function<Operator(double)>> derivative_operators(const ControlHamiltonian& h, const Operator& q,
                                                                  int n_max);

/// Gram-Schmidt frame from derivative vectors G', G'', ... (at least d-1 of them).
FrenetFrame frame_from_derivatives(const std::vector<Eigen::VectorXd>& derivatives, int d, double time = 0.0);

/// Frame at a point with propagator r, using the Hamiltonian jets at t_eval.
FrenetFrame frame_at(const ControlHamiltonian& h, const Operator& r, const Operator& q, const OperatorBasis& basis,
                     double t_eval);

/// Frames along a trajectory from the nested-commutator derivatives.
FrameSeries frames_from_operators(const PropagatorTrajectory& traj, const Operator& q, const OperatorBasis& basis);

/// Frames from the sampled curve alone (finite differences of the stored
/// tangents). Suitable for low dimension; loses accuracy as d grows.
FrameSeries frames_from_curve(const ErrorCurve& curve);

/// kappa_n = (d e_n / dt) . e_{n+1} with sixth-order finite differences of the
/// frame vectors along the grid.
CurvatureProfile curvatures_numeric(const FrameSeries& frames);

/// Operators A_n with e_n = R^dag A_n Q R under {H0, Q} = 0.
struct RecursionState {
  std::vector<Operator> a;
  Operator q;

  /// Largest violation of [A_n, Q] = 0 (n mod 4 in {0,1}) and {A_n, Q} = 0
  /// (n mod 4 in {2,3}).
  double pattern_violation() const;
};

struct RecursionResult {
  std::vector<double> kappas;
  RecursionState state;
};

/// kappa_n A_{n+1} = i{H0, A_n} (n odd), dA_n/dt (n even), with A_1 = 1.
/// Throws PreconditionViolation when {H0, Q} != 0 or Q^2 != 1.
RecursionResult recursion_curvatures(const ControlHamiltonian& h, const Operator& q, int n_max, double t);

/// |G(T)|.
double closure_residual(const ErrorCurve& curve);

/// The six-dimensional Ising curve split into its two 2x2-block curves.
struct BlockCurves {
  ErrorCurve lower;  // qubit 1 in |0>, splitting E1
  ErrorCurve upper;  // qubit 1 in |1>, splitting E2
  std::array<std::size_t, 3> single_index{};   // positions of I P in the 6D basis
  std::array<std::size_t, 3> coupled_index{};  // positions of Z P
};

/// Requires a block-diagonal model, Z2 noise, and a basis labelled with
/// {IX, IY, IZ, ZX, ZY, ZZ}.
BlockCurves block_decompose(const ErrorCurve& curve6, const PropagatorTrajectory& traj);

/// Inverse map: 6D coordinates from the two block curves.
std::vector<Eigen::VectorXd> reconstruct_from_blocks(const BlockCurves& blocks, std::size_t dimension = 6);

/// The 2x2 block (0 = lower, 1 = upper) of a block-diagonal trajectory.
PropagatorTrajectory block_trajectory(const PropagatorTrajectory& traj, int block);

/// Finite-difference weights (Fornberg) for the m-th derivative at z from nodes x.
std::vector<double> fd_weights(double z, const std::vector<double>& x, int m);

}  // namespace dcgeom
