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

#include "qpg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qpg/sampling.hpp"

namespace qpg {
namespace {

constexpr double kTieTolerance = 1e-14;

// Last-listed eigenvector of the (ascending) solver output.
CVector top_vector(const CMatrix& h) {
  const EigenSystem es = eigh(h);
  return es.vectors.col(es.vectors.cols() - 1);
}

struct Ascent {
  CVector x;
  CVector y;
  double value;
};

template <typename OnValue>
Ascent ascend(const GameOperator& g, CVector y, const SeesawOptions& opt, OnValue&& on_value) {
  CVector x = top_vector(phi(g, y * y.adjoint()));
  double value = product_value(g, x, y);
  on_value(value);
  for (int it = 0; it < opt.max_alternations; ++it) {
    y = top_vector(phi_adjoint(g, x * x.adjoint()));
    on_value(product_value(g, x, y));
    x = top_vector(phi(g, y * y.adjoint()));
    const double next = product_value(g, x, y);
    on_value(next);
    const bool done = next - value < opt.tol;
    value = next;
    if (done) break;
  }
  return {std::move(x), std::move(y), value};
}

}  // namespace

double product_value(const GameOperator& g, const CVector& x, const CVector& y) {
  if (x.size() != g.n() || y.size() != g.m()) {
    throw Error(ErrorKind::InvalidDimensions, "product_value: vector dimensions do not match the game");
  }
  const CVector v = kron(x, y);
  return (v.adjoint() * g.r() * v)(0, 0).real();
}

std::vector<double> seesaw_trace(const GameOperator& g, const CVector& y0, const SeesawOptions& options) {
  std::vector<double> values;
  ascend(g, y0 / y0.norm(), options, [&](double v) { values.push_back(v); });
  return values;
}

OracleResult seesaw(const GameOperator& g, std::uint64_t seed, const SeesawOptions& options) {
  if (options.restarts < 1) throw Error(ErrorKind::InvalidInput, "seesaw: restarts must be >= 1");
  if (!(options.tol > 0.0)) throw Error(ErrorKind::InvalidInput, "seesaw: tol must be positive");

  OracleResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng = make_rng(seed + static_cast<std::uint64_t>(r), 0x736565736177ULL);
    Ascent a = ascend(g, haar_unit_vector(g.m(), rng), options, [](double) {});
    // Strictly better by more than the tie tolerance replaces; ties keep the
    // earlier restart.
    if (a.value > best.value + kTieTolerance) {
      best.value = a.value;
      best.x = std::move(a.x);
      best.y = std::move(a.y);
      best.best_restart_index = r;
    }
  }
  best.restarts_used = options.restarts;
  best.value = product_value(g, best.x, best.y);
  best.upper_bound = g.lambda_max();
  const Certificate cert = certify_top_eigvec(g);
  best.certified_optimal = cert.certified && std::abs(best.value - cert.value) <= 1e-8;
  return best;
}

bool ppt_check(const CMatrix& state, Eigen::Index n, Eigen::Index m, double tol) {
  return min_eigenvalue(partial_transpose_B(state, n, m)) >= -tol;
}

Certificate certify_top_eigvec(const GameOperator& g, double tol) {
  const Eigen::Index n = g.n(), m = g.m();
  Certificate cert{false, g.lambda_max()};
  const bool small = (n == 2 && m == 2) || (n == 2 && m == 3) || (n == 3 && m == 2);
  if (!small) return cert;
  const CVector v = top_vector(g.r());
  cert.certified = ppt_check(v * v.adjoint(), n, m, tol);
  return cert;
}

double accuracy(double dyn_value, double oracle_value) {
  if (!(oracle_value > 1e-12)) {
    throw Error(ErrorKind::InvalidInput, "accuracy: oracle value must be positive");
  }
  if (dyn_value > oracle_value * (1.0 + 1e-6)) {
    std::ostringstream os;
    os.precision(17);
    os << "dynamics value " << dyn_value << " exceeds oracle value " << oracle_value;
    throw Error(ErrorKind::OracleInconsistency, os.str());
  }
  return std::clamp(dyn_value / oracle_value, 0.0, 1.0 + 1e-8);
}

}  // namespace qpg
