// Copyright 2026 The qpg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Learning dynamics on D(A) x D(B).
//
//  * lin-qrep-q : the q-Shahshahani gradient flow of the common utility,
//                 integrated with fixed-step RK4 and re-projected onto the
//                 density manifold after every step.
//  * lin-mmwu   : rho <- rho^1/2 phi(sigma) rho^1/2 / <rho, phi(sigma)>, then
//                 sigma <- sigma^1/2 phi_adjoint(rho') sigma^1/2 / <rho', phi(sigma)>.
//  * exp-mmwu   : matrix-exponential baseline, rho <- exp(log rho + eta phi(sigma)) / Z.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpg/game.hpp"

namespace qpg {

enum class DynamicsKind { LinQrepQ, LinMmwu, ExpMmwu };

std::string_view to_string(DynamicsKind kind) noexcept;
std::optional<DynamicsKind> parse_dynamics_kind(std::string_view name) noexcept;

/// Which player moves first in the alternating discrete updates.
enum class UpdateOrder { RhoFirst, SigmaFirst };

struct DynamicsConfig {
  DynamicsKind kind = DynamicsKind::LinMmwu;
  double q = 1.0;            // metric parameter (lin-qrep-q)
  double step_size = 0.01;   // RK4 step h (lin-qrep-q)
  double eta = 0.1;          // learning rate (exp-mmwu)
  int max_iters = 10000;
  int window = 5;            // moving-average window over utility
  double conv_tol = 1e-7;
  int stall_iters = 10;      // consecutive stalled moving averages before stopping
  std::uint64_t seed = 0;
  UpdateOrder order = UpdateOrder::RhoFirst;
  bool track_distance_to_final = true;

  /// Throws Config on window < 2, max_iters < window, or non-positive rates.
  void validate() const;
  bool operator==(const DynamicsConfig&) const = default;
};

struct Profile {
  DensityMatrix rho;
  DensityMatrix sigma;
};

struct TrajectoryRecord {
  int step = 0;
  double time = 0.0;  // ODE time for lin-qrep-q, iteration count otherwise
  double utility = 0.0;
  double exploitability = 0.0;
  double fixed_point_residual = 0.0;
  double min_eig_rho = 0.0;
  double min_eig_sigma = 0.0;
  std::optional<std::array<double, 3>> bloch_rho;
  std::optional<std::array<double, 3>> bloch_sigma;
  std::optional<double> frobenius_to_final;
};

enum class Termination { MovingAverageStall, ResidualBelowTol, MaxIters, StepError };

std::string_view to_string(Termination t) noexcept;

struct ConvergenceReport {
  bool converged = false;
  int iterations = 0;
  double final_utility = 0.0;
  double final_exploitability = 0.0;
  double final_residual = 0.0;
  Termination termination_reason = Termination::MaxIters;
};

struct RunResult {
  std::vector<TrajectoryRecord> trajectory;
  ConvergenceReport report;
  Profile final_state;
  /// Set when a step failed; trajectory and final_state hold everything up
  /// to the last good iterate.
  std::optional<Error> error;
};

struct Field {
  CMatrix drho;
  CMatrix dsigma;
};

/// lin-QREP_q vector field. For q < 0 both states must have smallest
/// eigenvalue above 1e-8 (SingularState otherwise).
Field qrep_field(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma, double q);

/// Tr(rho^{-q/2} a rho^{-q/2} b). For q > 0 rho must be strictly positive.
double shah_inner(const CMatrix& a, const CMatrix& b, const DensityMatrix& rho, double q);

/// One classical RK4 step of lin-QREP_q followed by projection to densities.
Profile rk4_step(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma, double q, double h);

/// Half-steps of lin-MMWU; each is self-normalizing.
DensityMatrix mmwu_update_rho(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma);
DensityMatrix mmwu_update_sigma(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma);

/// Full alternating lin-MMWU step. Requires a positive definite game.
Profile mmwu_step(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma,
                  UpdateOrder order = UpdateOrder::RhoFirst);

Profile exp_mmwu_step(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma, double eta,
                      UpdateOrder order = UpdateOrder::RhoFirst);

/// One update of the configured dynamic (RK4 step, or alternating step).
Profile step_once(const GameOperator& g, const Profile& p, const DynamicsConfig& config);

/// ||rho^1/2 [phi(sigma) - u I] rho^1/2||_F + ||sigma^1/2 [phi_adjoint(rho) - u I] sigma^1/2||_F
double fixed_point_residual(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma);

/// Bloch coordinates (Tr rho s1, Tr rho s2, Tr rho s3) of a 2x2 density.
/// Throws UnsupportedDimension for other sizes.
std::array<double, 3> bloch_vector(const DensityMatrix& rho);

/// Iterate the configured dynamic from (rho0, sigma0) until the moving
/// average of utility stalls, the fixed-point residual drops below conv_tol,
/// or max_iters is reached. Step errors end the run early (see RunResult).
RunResult run(const GameOperator& g, const DensityMatrix& rho0, const DensityMatrix& sigma0,
              const DynamicsConfig& config);

/// Max relative error between the central finite difference of utility along
/// random traceless tangent pairs and the metric pairing of qrep_field with
/// them. The relative error uses max(|fd|, |analytic|, 1e-6) as denominator.
double metric_gradient_check(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma, double q,
                             int n_directions, std::uint64_t seed);

/// Trajectory CSV: header + one row per record, 12 significant digits.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& trajectory);

}  // namespace qpg
