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

#include "qpg/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qpg/kernels.hpp"
#include "qpg/sampling.hpp"

namespace qpg {

GameOperator GameOperator::from(CMatrix r, Eigen::Index n, Eigen::Index m, std::string ensemble,
                                std::optional<std::uint64_t> seed) {
  if (n <= 0 || m <= 0 || r.rows() != n * m || r.cols() != n * m) {
    std::ostringstream os;
    os << "GameOperator: R is " << r.rows() << "x" << r.cols() << ", expected " << n * m << "x" << n * m;
    throw Error(ErrorKind::InvalidDimensions, os.str());
  }
  if (!is_hermitian(r, tol::kHermitian * std::max(1.0, r.cwiseAbs().maxCoeff()))) {
    throw Error(ErrorKind::InvalidInput, "GameOperator: R is not Hermitian");
  }
  GameOperator g;
  g.n_ = n;
  g.m_ = m;
  g.r_ = std::move(r);
  const EigenSystem es = eigh(g.r_);
  g.min_eig_ = es.values(0);
  g.max_eig_ = es.values(es.values.size() - 1);
  g.ensemble_ = std::move(ensemble);
  g.seed_ = seed;

  auto realigned = std::make_shared<Realigned>();
  realigned->phi_rows.resize(n * n, m * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index l = 0; l < m; ++l)
          realigned->phi_rows(i * n + k, j * m + l) = g.r_(i * m + j, k * m + l);
  realigned->adjoint_rows = realigned->phi_rows.transpose();
  g.kernels_ = std::move(realigned);
  return g;
}

// phi(sigma)(i, k) = sum_{j,l} R(i*m+j, k*m+l) sigma(l, j). Column-major
// storage of sigma lists sigma(l, j) at j*m + l, which is exactly the column
// index of phi_rows, so the contraction is one gemv on the raw buffers.
CMatrix phi(const GameOperator& g, const CMatrix& sigma) {
  if (sigma.rows() != g.m() || sigma.cols() != g.m()) {
    throw Error(ErrorKind::InvalidDimensions, "phi: sigma has the wrong dimension");
  }
  const Eigen::Index n = g.n();
  RowCMatrix out(n, n);
  kernels::active().gemv(g.phi_rows().data(), static_cast<std::size_t>(n * n),
                         static_cast<std::size_t>(sigma.size()), sigma.data(), out.data());
  return out;
}

// phi_adjoint(rho)(j, l) = sum_{i,k} R(i*m+j, k*m+l) rho(k, i); rho(k, i)
// sits at i*n + k in column-major order.
CMatrix phi_adjoint(const GameOperator& g, const CMatrix& rho) {
  if (rho.rows() != g.n() || rho.cols() != g.n()) {
    throw Error(ErrorKind::InvalidDimensions, "phi_adjoint: rho has the wrong dimension");
  }
  const Eigen::Index m = g.m();
  RowCMatrix out(m, m);
  kernels::active().gemv(g.adjoint_rows().data(), static_cast<std::size_t>(m * m),
                         static_cast<std::size_t>(rho.size()), rho.data(), out.data());
  return out;
}

double utility(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != g.n() || sigma.dim() != g.m()) {
    throw Error(ErrorKind::InvalidDimensions, "utility: strategy dimensions do not match the game");
  }
  return hs_inner(rho.matrix(), phi(g, sigma));
}

namespace {

BestResponse top_projector(const CMatrix& h) {
  const EigenSystem es = eigh(h);
  const Eigen::Index top = es.values.size() - 1;
  return {es.values(top), DensityMatrix::pure(es.vectors.col(top))};
}

}  // namespace

BestResponse best_response_A(const GameOperator& g, const DensityMatrix& sigma) {
  return top_projector(phi(g, sigma));
}

BestResponse best_response_B(const GameOperator& g, const DensityMatrix& rho) {
  return top_projector(phi_adjoint(g, rho));
}

double exploitability(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma) {
  const CMatrix fa = phi(g, sigma);
  const CMatrix fb = phi_adjoint(g, rho);
  const double u_a = hs_inner(rho.matrix(), fa);
  const double u_b = hs_inner(fb, sigma.matrix());
  return 0.5 * ((max_eigenvalue(fa) - u_a) + (max_eigenvalue(fb) - u_b));
}

double KKTCertificate::max_residual() const noexcept {
  return std::max({std::max(dual_feas_A, 0.0), std::max(dual_feas_B, 0.0), std::abs(comp_slack_A),
                   std::abs(comp_slack_B), stationarity_residual_A, stationarity_residual_B});
}

KKTCertificate kkt_certificate(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma) {
  const CMatrix fa = phi(g, sigma);
  const CMatrix fb = phi_adjoint(g, rho);
  const double u = hs_inner(rho.matrix(), fa);

  KKTCertificate c;
  c.lambda = u;
  c.mu = u;
  c.lambda_mat = fa - c.lambda * identity(g.n());
  c.mu_mat = fb - c.mu * identity(g.m());
  // Stationarity of the Lagrangian: phi(sigma) - lambda I - Lambda = 0 and
  // its B counterpart, with Lambda and M chosen as above.
  c.stationarity_residual_A = (fa - c.lambda * identity(g.n()) - c.lambda_mat).norm();
  c.stationarity_residual_B = (fb - c.mu * identity(g.m()) - c.mu_mat).norm();
  c.dual_feas_A = max_eigenvalue(c.lambda_mat);
  c.dual_feas_B = max_eigenvalue(c.mu_mat);
  c.comp_slack_A = hs_inner(c.lambda_mat, rho.matrix());
  c.comp_slack_B = hs_inner(c.mu_mat, sigma.matrix());
  return c;
}

double interior_ne_residual(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma) {
  const CMatrix fa = phi(g, sigma);
  const double u = hs_inner(rho.matrix(), fa);
  const CMatrix fb = phi_adjoint(g, rho);
  return (fa - u * identity(g.n())).norm() + (fb - u * identity(g.m())).norm();
}

GameOperator embed_classical(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows(), m = a.cols();
  CMatrix r = CMatrix::Zero(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) r(i * m + j, i * m + j) = a(i, j);
  return GameOperator::from(std::move(r), n, m, "classical");
}

bool is_known_ensemble(const std::string& ensemble) {
  return ensemble == "wishart" || ensemble == "identity";
}

GameOperator random_game(Eigen::Index n, Eigen::Index m, std::uint64_t seed, const std::string& ensemble) {
  if (n < 2 || m < 2) throw Error(ErrorKind::InvalidDimensions, "random_game: n and m must be at least 2");
  const Eigen::Index d = n * m;
  if (ensemble == "identity") return GameOperator::from(identity(d), n, m, ensemble, seed);
  if (ensemble != "wishart") throw Error(ErrorKind::Config, "random_game: unknown ensemble '" + ensemble + "'");

  Rng rng = make_rng(seed, 0);
  const CMatrix gm = complex_gaussian(d, d, rng);
  CMatrix w = gm * gm.adjoint();
  w = 0.5 * (w + w.adjoint()).eval();
  CMatrix r = w / max_eigenvalue(w) + 1e-6 * identity(d);
  r /= max_eigenvalue(r);
  r = 0.5 * (r + r.adjoint()).eval();
  return GameOperator::from(std::move(r), n, m, ensemble, seed);
}

CMatrix choi_matrix(const GameOperator& g) {
  const Eigen::Index m = g.m();
  CMatrix out = CMatrix::Zero(g.n() * m, g.n() * m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      CMatrix e_ab = CMatrix::Zero(m, m);
      e_ab(a, b) = 1.0;
      out += kron(phi(g, e_ab), e_ab.transpose());
    }
  }
  return out;
}

double PotentialGameSpec::potential_value(const DensityMatrix& rho, const DensityMatrix& sigma) const {
  return utility(potential, rho, sigma);
}

double PotentialGameSpec::utility_A(const DensityMatrix& rho, const DensityMatrix& sigma) const {
  return potential_value(rho, sigma) + (dummy_A ? dummy_A(rho, sigma) : 0.0);
}

double PotentialGameSpec::utility_B(const DensityMatrix& rho, const DensityMatrix& sigma) const {
  return potential_value(rho, sigma) + (dummy_B ? dummy_B(rho, sigma) : 0.0);
}

double potential_identity_check(const PotentialGameSpec& spec, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::InvalidInput, "potential_identity_check: samples must be >= 1");
  Rng rng = make_rng(seed, 0);
  const Eigen::Index n = spec.potential.n(), m = spec.potential.m();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const DensityMatrix rho = random_density(n, rng);
    const DensityMatrix rho_dev = random_density(n, rng);
    const DensityMatrix sigma = random_density(m, rng);
    const DensityMatrix sigma_dev = random_density(m, rng);

    const double du_a = spec.utility_A(rho, sigma) - spec.utility_A(rho_dev, sigma);
    const double dv_a = spec.potential_value(rho, sigma) - spec.potential_value(rho_dev, sigma);
    const double du_b = spec.utility_B(rho, sigma) - spec.utility_B(rho, sigma_dev);
    const double dv_b = spec.potential_value(rho, sigma) - spec.potential_value(rho, sigma_dev);
    worst = std::max({worst, std::abs(du_a - dv_a), std::abs(du_b - dv_b)});
  }
  return worst;
}

}  // namespace qpg
