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

#include "qpg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <ostream>
#include <sstream>

#include "qpg/sampling.hpp"

namespace qpg {

std::string_view to_string(DynamicsKind kind) noexcept {
  switch (kind) {
    case DynamicsKind::LinQrepQ: return "lin-qrep-q";
    case DynamicsKind::LinMmwu: return "lin-mmwu";
    case DynamicsKind::ExpMmwu: return "exp-mmwu";
  }
  return "unknown";
}

std::optional<DynamicsKind> parse_dynamics_kind(std::string_view name) noexcept {
  if (name == "lin-qrep-q") return DynamicsKind::LinQrepQ;
  if (name == "lin-mmwu") return DynamicsKind::LinMmwu;
  if (name == "exp-mmwu") return DynamicsKind::ExpMmwu;
  return std::nullopt;
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::MovingAverageStall: return "moving-average-stall";
    case Termination::ResidualBelowTol: return "residual-below-tol";
    case Termination::MaxIters: return "max-iters";
    case Termination::StepError: return "step-error";
  }
  return "unknown";
}

void DynamicsConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::Config, "DynamicsConfig: " + what); };
  if (window < 2) fail("window must be at least 2");
  if (max_iters < window) fail("max_iters must be at least window");
  if (stall_iters < 1) fail("stall_iters must be positive");
  if (!(step_size > 0.0)) fail("step_size must be positive");
  if (!(eta > 0.0)) fail("eta must be positive");
  if (!(conv_tol > 0.0)) fail("conv_tol must be positive");
  if (!std::isfinite(q)) fail("q must be finite");
}

namespace {

constexpr double kNegativeQFloor = 1e-8;
constexpr double kShahFloor = 1e-10;
constexpr double kLogFloor = 1e-300;
constexpr double kDegenerateDenominator = 1e-14;

// Field on raw matrices: the RK4 stages evaluate off the density manifold.
CMatrix qrep_component(const CMatrix& state, const CMatrix& payoff, double q) {
  const Eigen::Index d = state.rows();
  if (q == 0.0) {
    const cplx c = payoff.trace() / static_cast<double>(d);
    return payoff - c.real() * identity(d);
  }
  if (q < 0.0 && min_eigenvalue(state) <= kNegativeQFloor) {
    throw Error(ErrorKind::SingularState, "qrep_field: q < 0 needs strictly positive states");
  }
  const CMatrix half = psd_power(state, 0.5 * q);
  const CMatrix full = q == 1.0 ? CMatrix(0.5 * (state + state.adjoint())) : psd_power(state, q);
  const double c = real_trace(full * payoff) / real_trace(full);
  CMatrix out = half * (payoff - c * identity(d)) * half;
  return 0.5 * (out + out.adjoint());
}

Field field_raw(const GameOperator& g, const CMatrix& rho, const CMatrix& sigma, double q) {
  return {qrep_component(rho, phi(g, sigma), q), qrep_component(sigma, phi_adjoint(g, rho), q)};
}

// rho^1/2 X rho^1/2 / Tr(rho X), re-projected.
DensityMatrix linear_half_step(const DensityMatrix& state, const CMatrix& payoff) {
  const double denom = hs_inner(state.matrix(), payoff);
  if (!(denom > kDegenerateDenominator)) {
    std::ostringstream os;
    os << "lin-mmwu: utility denominator " << denom << " is not positive";
    throw Error(ErrorKind::DegenerateUtility, os.str());
  }
  const CMatrix half = psd_power(state.matrix(), 0.5);
  return project_to_density(half * payoff * half / denom);
}

DensityMatrix exp_half_step(const DensityMatrix& state, const CMatrix& payoff, double eta) {
  const EigenSystem es = eigh(state.matrix());
  RVector logs(es.values.size());
  for (Eigen::Index k = 0; k < logs.size(); ++k) logs(k) = std::log(std::max(es.values(k), kLogFloor));
  const CMatrix generator = es.vectors * logs.asDiagonal() * es.vectors.adjoint() + eta * payoff;
  const EigenSystem gs = eigh(0.5 * (generator + generator.adjoint()));
  const double shift = gs.values.maxCoeff();
  RVector w = (gs.values.array() - shift).exp().matrix();
  w /= w.sum();
  return project_to_density(gs.vectors * w.asDiagonal() * gs.vectors.adjoint());
}

void require_pd(const GameOperator& g) {
  if (!g.positive_definite()) {
    throw Error(ErrorKind::RequiresPdGame, "lin-mmwu needs a positive definite game operator");
  }
}

void require_dims(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != g.n() || sigma.dim() != g.m()) {
    throw Error(ErrorKind::InvalidDimensions, "strategy dimensions do not match the game");
  }
}

}  // namespace

Field qrep_field(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma, double q) {
  require_dims(g, rho, sigma);
  return field_raw(g, rho.matrix(), sigma.matrix(), q);
}

double shah_inner(const CMatrix& a, const CMatrix& b, const DensityMatrix& rho, double q) {
  if (a.rows() != rho.dim() || b.rows() != rho.dim() || a.cols() != a.rows() || b.cols() != b.rows()) {
    throw Error(ErrorKind::InvalidDimensions, "shah_inner: dimension mismatch");
  }
  if (q == 0.0) return hs_inner(a, b);
  if (q > 0.0 && min_eigenvalue(rho.matrix()) <= kShahFloor) {
    throw Error(ErrorKind::SingularState, "shah_inner: rho must be strictly positive for q > 0");
  }
  const CMatrix w = psd_power(rho.matrix(), -0.5 * q);
  return real_trace(w * a * w * b);
}

Profile rk4_step(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma, double q, double h) {
  require_dims(g, rho, sigma);
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidInput, "rk4_step: h must be positive");
  const CMatrix& r0 = rho.matrix();
  const CMatrix& s0 = sigma.matrix();
  const Field k1 = field_raw(g, r0, s0, q);
  const Field k2 = field_raw(g, r0 + 0.5 * h * k1.drho, s0 + 0.5 * h * k1.dsigma, q);
  const Field k3 = field_raw(g, r0 + 0.5 * h * k2.drho, s0 + 0.5 * h * k2.dsigma, q);
  const Field k4 = field_raw(g, r0 + h * k3.drho, s0 + h * k3.dsigma, q);
  const CMatrix r1 = r0 + (h / 6.0) * (k1.drho + 2.0 * k2.drho + 2.0 * k3.drho + k4.drho);
  const CMatrix s1 = s0 + (h / 6.0) * (k1.dsigma + 2.0 * k2.dsigma + 2.0 * k3.dsigma + k4.dsigma);
  return {project_to_density(r1), project_to_density(s1)};
}

DensityMatrix mmwu_update_rho(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_dims(g, rho, sigma);
  require_pd(g);
  return linear_half_step(rho, phi(g, sigma));
}

DensityMatrix mmwu_update_sigma(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_dims(g, rho, sigma);
  require_pd(g);
  // Tr(sigma phi_adjoint(rho)) = <rho, phi(sigma)>, so normalizing by the
  // trace is the printed denominator evaluated at the current rho.
  return linear_half_step(sigma, phi_adjoint(g, rho));
}

Profile mmwu_step(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma, UpdateOrder order) {
  if (order == UpdateOrder::RhoFirst) {
    DensityMatrix next_rho = mmwu_update_rho(g, rho, sigma);
    DensityMatrix next_sigma = mmwu_update_sigma(g, next_rho, sigma);
    return {std::move(next_rho), std::move(next_sigma)};
  }
  DensityMatrix next_sigma = mmwu_update_sigma(g, rho, sigma);
  DensityMatrix next_rho = mmwu_update_rho(g, rho, next_sigma);
  return {std::move(next_rho), std::move(next_sigma)};
}

Profile exp_mmwu_step(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma, double eta,
                      UpdateOrder order) {
  require_dims(g, rho, sigma);
  if (!(eta > 0.0)) throw Error(ErrorKind::InvalidInput, "exp_mmwu_step: eta must be positive");
  if (order == UpdateOrder::RhoFirst) {
    DensityMatrix next_rho = exp_half_step(rho, phi(g, sigma.matrix()), eta);
    DensityMatrix next_sigma = exp_half_step(sigma, phi_adjoint(g, next_rho.matrix()), eta);
    return {std::move(next_rho), std::move(next_sigma)};
  }
  DensityMatrix next_sigma = exp_half_step(sigma, phi_adjoint(g, rho.matrix()), eta);
  DensityMatrix next_rho = exp_half_step(rho, phi(g, next_sigma.matrix()), eta);
  return {std::move(next_rho), std::move(next_sigma)};
}

double fixed_point_residual(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_dims(g, rho, sigma);
  const CMatrix fa = phi(g, sigma);
  const CMatrix fb = phi_adjoint(g, rho);
  const double u = hs_inner(rho.matrix(), fa);
  const CMatrix ra = psd_power(rho.matrix(), 0.5);
  const CMatrix rb = psd_power(sigma.matrix(), 0.5);
  return (ra * (fa - u * identity(g.n())) * ra).norm() + (rb * (fb - u * identity(g.m())) * rb).norm();
}

Profile step_once(const GameOperator& g, const Profile& p, const DynamicsConfig& cfg) {
  switch (cfg.kind) {
    case DynamicsKind::LinQrepQ: return rk4_step(g, p.rho, p.sigma, cfg.q, cfg.step_size);
    case DynamicsKind::LinMmwu: return mmwu_step(g, p.rho, p.sigma, cfg.order);
    case DynamicsKind::ExpMmwu: return exp_mmwu_step(g, p.rho, p.sigma, cfg.eta, cfg.order);
  }
  throw Error(ErrorKind::Config, "unknown dynamics kind");
}

std::array<double, 3> bloch_vector(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw Error(ErrorKind::UnsupportedDimension, "Bloch coordinates need a 2x2 density matrix");
  }
  const CMatrix& m = rho.matrix();
  // s1 = [[0,1],[1,0]], s2 = [[0,-i],[i,0]], s3 = [[1,0],[0,-1]]
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

namespace {

TrajectoryRecord make_record(const GameOperator& g, const Profile& p, int step, double time) {
  TrajectoryRecord rec;
  rec.step = step;
  rec.time = time;
  rec.utility = utility(g, p.rho, p.sigma);
  rec.exploitability = exploitability(g, p.rho, p.sigma);
  rec.fixed_point_residual = fixed_point_residual(g, p.rho, p.sigma);
  rec.min_eig_rho = min_eigenvalue(p.rho.matrix());
  rec.min_eig_sigma = min_eigenvalue(p.sigma.matrix());
  if (p.rho.dim() == 2) rec.bloch_rho = bloch_vector(p.rho);
  if (p.sigma.dim() == 2) rec.bloch_sigma = bloch_vector(p.sigma);
  return rec;
}

// Moving average of the last `window` utilities; a step counts as stalled
// when consecutive averages differ by less than conv_tol.
class StallDetector {
 public:
  StallDetector(int window, int stall_iters, double tol) : window_(window), stall_iters_(stall_iters), tol_(tol) {}

  bool push(double utility) {
    values_.push_back(utility);
    sum_ += utility;
    if (static_cast<int>(values_.size()) > window_) {
      sum_ -= values_.front();
      values_.pop_front();
    }
    if (static_cast<int>(values_.size()) < window_) return false;
    const double avg = sum_ / window_;
    if (previous_) {
      stalled_ = std::abs(avg - *previous_) < tol_ ? stalled_ + 1 : 0;
    }
    previous_ = avg;
    return stalled_ >= stall_iters_;
  }

 private:
  int window_;
  int stall_iters_;
  double tol_;
  std::deque<double> values_;
  double sum_ = 0.0;
  std::optional<double> previous_;
  int stalled_ = 0;
};

}  // namespace

RunResult run(const GameOperator& g, const DensityMatrix& rho0, const DensityMatrix& sigma0,
              const DynamicsConfig& config) {
  config.validate();
  require_dims(g, rho0, sigma0);
  if (config.kind == DynamicsKind::LinQrepQ && config.step_size * g.lambda_max() > 0.5) {
    std::ostringstream os;
    os << "step size " << config.step_size << " too large for lambda_max(R) = " << g.lambda_max()
       << " (need h * lambda_max <= 0.5)";
    throw Error(ErrorKind::Config, os.str());
  }
  if (config.kind == DynamicsKind::LinMmwu) require_pd(g);

  const bool continuous = config.kind == DynamicsKind::LinQrepQ;
  auto time_of = [&](int step) { return continuous ? step * config.step_size : static_cast<double>(step); };

  RunResult result{{}, {}, Profile{rho0, sigma0}, std::nullopt};
  std::vector<Profile> history;
  if (config.track_distance_to_final) history.push_back(result.final_state);

  result.trajectory.push_back(make_record(g, result.final_state, 0, 0.0));
  StallDetector stall(config.window, config.stall_iters, config.conv_tol);
  stall.push(result.trajectory.back().utility);

  ConvergenceReport& report = result.report;
  report.termination_reason = Termination::MaxIters;
  int iter = 0;
  while (iter < config.max_iters) {
    try {
      Profile next = step_once(g, result.final_state, config);
      TrajectoryRecord rec = make_record(g, next, iter + 1, time_of(iter + 1));
      result.final_state = std::move(next);
      result.trajectory.push_back(std::move(rec));
    } catch (const Error& e) {
      result.error = e;
      report.termination_reason = Termination::StepError;
      break;
    }
    ++iter;
    if (config.track_distance_to_final) history.push_back(result.final_state);

    const TrajectoryRecord& last = result.trajectory.back();
    const bool stalled = stall.push(last.utility);
    if (last.fixed_point_residual < config.conv_tol) {
      report.termination_reason = Termination::ResidualBelowTol;
      break;
    }
    if (stalled) {
      report.termination_reason = Termination::MovingAverageStall;
      break;
    }
  }

  const TrajectoryRecord& last = result.trajectory.back();
  report.iterations = iter;
  report.converged = report.termination_reason == Termination::MovingAverageStall ||
                     report.termination_reason == Termination::ResidualBelowTol;
  report.final_utility = last.utility;
  report.final_exploitability = last.exploitability;
  report.final_residual = last.fixed_point_residual;

  if (config.track_distance_to_final) {
    const Profile& fin = result.final_state;
    for (std::size_t k = 0; k < history.size(); ++k) {
      result.trajectory[k].frobenius_to_final =
          profile_distance(history[k].rho, history[k].sigma, fin.rho, fin.sigma);
    }
  }
  return result;
}

double metric_gradient_check(const GameOperator& g, const DensityMatrix& rho, const DensityMatrix& sigma, double q,
                             int n_directions, std::uint64_t seed) {
  require_dims(g, rho, sigma);
  constexpr double kInteriorFloor = 1e-6;
  constexpr double kStep = 1e-5;
  constexpr double kDenominatorFloor = 1e-6;
  if (min_eigenvalue(rho.matrix()) <= kInteriorFloor || min_eigenvalue(sigma.matrix()) <= kInteriorFloor) {
    throw Error(ErrorKind::SingularState, "metric_gradient_check: needs strictly positive states");
  }
  const Field grad = qrep_field(g, rho, sigma, q);
  Rng rng = make_rng(seed, 0x6d6574726963ULL);
  auto bilinear = [&](const CMatrix& r, const CMatrix& s) { return hs_inner(r, phi(g, s)); };

  double worst = 0.0;
  for (int d = 0; d < n_directions; ++d) {
    const CMatrix xi_a = random_traceless_hermitian(g.n(), rng);
    const CMatrix xi_b = random_traceless_hermitian(g.m(), rng);
    const double fd = (bilinear(rho.matrix() + kStep * xi_a, sigma.matrix() + kStep * xi_b) -
                       bilinear(rho.matrix() - kStep * xi_a, sigma.matrix() - kStep * xi_b)) /
                      (2.0 * kStep);
    const double analytic = shah_inner(grad.drho, xi_a, rho, q) + shah_inner(grad.dsigma, xi_b, sigma, q);
    const double denom = std::max({std::abs(fd), std::abs(analytic), kDenominatorFloor});
    worst = std::max(worst, std::abs(fd - analytic) / denom);
  }
  return worst;
}

namespace {

void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  os << buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& trajectory) {
  os << "step,time,utility,exploitability,fixed_point_residual,min_eig_rho,min_eig_sigma,"
        "bloch_rho_x,bloch_rho_y,bloch_rho_z,bloch_sigma_x,bloch_sigma_y,bloch_sigma_z,frobenius_to_final\n";
  for (const TrajectoryRecord& r : trajectory) {
    os << r.step << ',';
    put(os, r.time);
    for (double v : {r.utility, r.exploitability, r.fixed_point_residual, r.min_eig_rho, r.min_eig_sigma}) {
      os << ',';
      put(os, v);
    }
    for (const auto* bloch : {&r.bloch_rho, &r.bloch_sigma}) {
      for (int k = 0; k < 3; ++k) {
        os << ',';
        if (*bloch) put(os, (**bloch)[k]);
      }
    }
    os << ',';
    if (r.frobenius_to_final) put(os, *r.frobenius_to_final);
    os << '\n';
  }
}

}  // namespace qpg
