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

// Two-player quantum common-interest games.
//
// The game operator R lives on A (x) B with A of dimension n and B of
// dimension m. Both players receive u(rho, sigma) = <R, rho (x) sigma>.
// The superoperator and its adjoint are
//   phi(sigma)       = Tr_B[R (I_n (x) sigma)]   (n x n)
//   phi_adjoint(rho) = Tr_A[R (rho (x) I_m)]     (m x m)
// so that <rho, phi(sigma)> = <R, rho (x) sigma> = <phi_adjoint(rho), sigma>
// hold verbatim (no transpose anywhere).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "qpg/hermitian.hpp"

namespace qpg {

using RowCMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Smallest eigenvalue above which a game counts as positive definite.
inline constexpr double kPositiveDefiniteFloor = 1e-10;

class GameOperator {
 public:
  /// Validates dimensions and Hermiticity; computes the spectrum bounds and
  /// the positive-definite flag.
  static GameOperator from(CMatrix r, Eigen::Index n, Eigen::Index m,
                           std::string ensemble = "custom",
                           std::optional<std::uint64_t> seed = std::nullopt);

  Eigen::Index n() const noexcept { return n_; }
  Eigen::Index m() const noexcept { return m_; }
  const CMatrix& r() const noexcept { return r_; }
  bool positive_definite() const noexcept { return min_eig_ > kPositiveDefiniteFloor; }
  double min_eigenvalue() const noexcept { return min_eig_; }
  double lambda_max() const noexcept { return max_eig_; }
  const std::string& ensemble() const noexcept { return ensemble_; }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

  /// R realigned so that phi is a single matrix-vector product:
  ///   phi_rows(i*n + k, j*m + l) = R(i*m + j, k*m + l)   (n^2 x m^2).
  const RowCMatrix& phi_rows() const noexcept { return kernels_->phi_rows; }
  /// Transpose of phi_rows(), for phi_adjoint   (m^2 x n^2).
  const RowCMatrix& adjoint_rows() const noexcept { return kernels_->adjoint_rows; }

 private:
  struct Realigned {
    RowCMatrix phi_rows;
    RowCMatrix adjoint_rows;
  };

  GameOperator() = default;

  Eigen::Index n_ = 0;
  Eigen::Index m_ = 0;
  CMatrix r_;
  double min_eig_ = 0.0;
  double max_eig_ = 0.0;
  std::string ensemble_;
  std::optional<std::uint64_t> seed_;
  std::shared_ptr<const Realigned> kernels_;
};

/// phi(sigma) for any m x m matrix (Hermiticity not required).
CMatrix phi(const GameOperator& g, const CMatrix& sigma);
/// phi_adjoint(rho) for any n x n matrix.
CMatrix phi_adjoint(const GameOperator& g, const CMatrix& rho);

double utility(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma);

struct BestResponse {
  double value;
  DensityMatrix responder;
};

/// Top eigenpair of phi(sigma). Degenerate top eigenvalues resolve to the
/// eigenvector the solver lists last.
BestResponse best_response_A(const GameOperator& g, const DensityMatrix& sigma);
BestResponse best_response_B(const GameOperator& g, const DensityMatrix& rho);

/// 1/2 [lmax(phi(sigma)) - u + lmax(phi_adjoint(rho)) - u]
double exploitability(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma);

struct KKTCertificate {
  double lambda = 0.0;
  double mu = 0.0;
  CMatrix lambda_mat;  // phi(sigma) - lambda I
  CMatrix mu_mat;      // phi_adjoint(rho) - mu I
  double stationarity_residual_A = 0.0;
  double stationarity_residual_B = 0.0;
  double dual_feas_A = 0.0;  // lmax(lambda_mat)
  double dual_feas_B = 0.0;  // lmax(mu_mat)
  double comp_slack_A = 0.0;  // <lambda_mat, rho>
  double comp_slack_B = 0.0;  // <mu_mat, sigma>

  /// Largest of the positive dual-feasibility parts, |comp_slack| and the
  /// stationarity residuals.
  double max_residual() const noexcept;
};

KKTCertificate kkt_certificate(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma);

/// ||phi(sigma) - u I||_F + ||phi_adjoint(rho) - u I||_F
double interior_ne_residual(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma);

/// Diagonal game with R(i*m + j, i*m + j) = a(i, j).
GameOperator embed_classical(const Eigen::MatrixXd& a);

/// Named random ensembles:
///   "wishart"  - G G^dag / lmax + 1e-6 I with G complex Gaussian (nm x nm),
///                rescaled so lmax(R) = 1. Positive definite.
///   "identity" - R = I (every profile is an equilibrium).
GameOperator random_game(Eigen::Index n, Eigen::Index m, std::uint64_t seed,
                         const std::string& ensemble = "wishart");

bool is_known_ensemble(const std::string& ensemble);

/// sum_{a,b} phi(E_ab) (x) E_ba, which reassembles R from the superoperator.
CMatrix choi_matrix(const GameOperator& g);

/// Potential game in coordination-dummy form: player utilities are the
/// potential V(rho, sigma) = <R, rho (x) sigma> plus a dummy term. A proper
/// dummy term ignores the player's own strategy; the signature still receives
/// both so a violation can be expressed and detected.
struct PotentialGameSpec {
  using Dummy = std::function<double(const DensityMatrix& rho, const DensityMatrix& sigma)>;

  GameOperator potential;
  Dummy dummy_A;  // should depend on sigma only
  Dummy dummy_B;  // should depend on rho only

  double potential_value(const DensityMatrix& rho, const DensityMatrix& sigma) const;
  double utility_A(const DensityMatrix& rho, const DensityMatrix& sigma) const;
  double utility_B(const DensityMatrix& rho, const DensityMatrix& sigma) const;
};

/// Max over sampled unilateral deviations of
///   |[u_i(s, s_-i) - u_i(s', s_-i)] - [V(s, s_-i) - V(s', s_-i)]|.
double potential_identity_check(const PotentialGameSpec& spec, int samples, std::uint64_t seed);

}  // namespace qpg
