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

#include <cmath>

#include "doctest.h"
#include "qpg/oracle.hpp"
#include "qpg/sampling.hpp"

using namespace qpg;

namespace {

CVector unit(CVector v) { return v / v.norm(); }

GameOperator product_game(const CVector& u, const CVector& v, double ridge) {
  const CMatrix w = kron(u, v);
  const Eigen::Index nm = u.size() * v.size();
  return GameOperator::from(w * w.adjoint() + ridge * identity(nm), u.size(), v.size());
}

CVector bell() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace

TEST_CASE("seesaw on the identity game") {
  const OracleResult r = seesaw(GameOperator::from(identity(6), 2, 3), 1);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.x.norm() == doctest::Approx(1.0));
  CHECK(r.y.norm() == doctest::Approx(1.0));
}

TEST_CASE("seesaw recovers a rank-1 product game") {
  Rng rng = make_rng(1);
  for (int t = 0; t < 10; ++t) {
    const CVector u = haar_unit_vector(3, rng), v = haar_unit_vector(2, rng);
    const GameOperator g = product_game(u, v, 0.0);
    const OracleResult r = seesaw(g, t);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.x.dot(u)) >= 1.0 - 1e-8);
    CHECK(std::abs(r.y.dot(v)) >= 1.0 - 1e-8);
  }
}

TEST_CASE("seesaw invariants on random games") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const GameOperator g = random_game(2 + s % 2, 2 + s % 3, s);
    SeesawOptions opt;
    opt.restarts = 10;
    const OracleResult r = seesaw(g, s, opt);
    CHECK(std::abs(r.value - product_value(g, r.x, r.y)) <= 1e-10);
    const CMatrix w = kron(r.x, r.y);
    CHECK(std::abs(r.value - std::real((w.adjoint() * g.r() * w)(0, 0))) <= 1e-10);
    CHECK(r.value <= r.upper_bound + 1e-10);
    CHECK(r.upper_bound == doctest::Approx(g.lambda_max()));
    CHECK(r.restarts_used == 10);
    CHECK(r.best_restart_index >= 0);
    CHECK(r.best_restart_index < 10);
    if (r.certified_optimal) CHECK(std::abs(r.value - r.upper_bound) <= 1e-8);

    // deterministic given the seed
    const OracleResult again = seesaw(g, s, opt);
    CHECK(again.value == r.value);
    CHECK(again.x == r.x);
  }
}

TEST_CASE("seesaw value trace is non-decreasing") {
  Rng rng = make_rng(2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const GameOperator g = random_game(3, 3, s);
    const std::vector<double> trace = seesaw_trace(g, haar_unit_vector(3, rng));
    REQUIRE(trace.size() >= 2);
    for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] >= trace[k - 1] - 1e-12);
  }
}

TEST_CASE("seesaw dominates a random product search") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const GameOperator g = random_game(2, 2, s);
    const OracleResult r = seesaw(g, s);
    Rng rng = make_rng(s, 7);
    double best = 0.0;
    for (int k = 0; k < 20000; ++k)
      best = std::max(best, product_value(g, haar_unit_vector(2, rng), haar_unit_vector(2, rng)));
    CHECK(r.value >= best - 1e-12);
    CHECK(r.value - best <= 5e-2);  // coarse: 2e4 samples on a 4-dim manifold
  }
}

TEST_CASE("ppt_check") {
  Rng rng = make_rng(3);
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix a = random_density(2, rng), b = random_density(3, rng);
    CHECK(ppt_check(kron(a.matrix(), b.matrix()), 2, 3));
  }
  const CVector v = bell();
  CHECK_FALSE(ppt_check(v * v.adjoint(), 2, 2));
  CHECK(ppt_check(identity(6) / 6.0, 2, 3));
  // Werner-type mixture p |bell><bell| + (1-p) I/4 is PPT iff p <= 1/3
  const CMatrix bp = v * v.adjoint();
  CHECK(ppt_check(0.3 * bp + 0.7 * identity(4) / 4.0, 2, 2));
  CHECK_FALSE(ppt_check(0.4 * bp + 0.6 * identity(4) / 4.0, 2, 2));
  CHECK_THROWS_AS(ppt_check(identity(5) / 5.0, 2, 3), Error);
}

TEST_CASE("certify_top_eigvec") {
  Rng rng = make_rng(4);
  const CVector u = haar_unit_vector(2, rng), w = haar_unit_vector(3, rng);
  SUBCASE("product top eigenvector") {
    const Certificate c = certify_top_eigvec(product_game(u, w, 0.1));
    CHECK(c.certified);
    CHECK(c.value == doctest::Approx(1.1).epsilon(1e-12));
    const OracleResult r = seesaw(product_game(u, w, 0.1), 3);
    CHECK(r.certified_optimal);
    CHECK(std::abs(r.value - 1.1) <= 1e-8);
  }
  SUBCASE("Bell top eigenvector") {
    const CVector b = bell();
    const GameOperator g = GameOperator::from(b * b.adjoint() + 0.1 * identity(4), 2, 2);
    const Certificate c = certify_top_eigvec(g);
    CHECK_FALSE(c.certified);
    CHECK(c.value == doctest::Approx(1.1));
    // best product value for a Bell projector is 1/2
    CHECK(seesaw(g, 1).value == doctest::Approx(0.6).epsilon(1e-9));
  }
  SUBCASE("outside the PPT-sufficient dimensions") {
    const CVector a = haar_unit_vector(3, rng), b = haar_unit_vector(3, rng);
    CHECK_FALSE(certify_top_eigvec(product_game(a, b, 0.1)).certified);
    CHECK_FALSE(certify_top_eigvec(product_game(haar_unit_vector(2, rng), haar_unit_vector(4, rng), 0.1)).certified);
  }
  SUBCASE("(3, 2) is covered") {
    CHECK(certify_top_eigvec(product_game(w, u, 0.0)).certified);
  }
}

TEST_CASE("accuracy") {
  CHECK(accuracy(0.5, 0.5) == 1.0);
  CHECK(accuracy(0.972, 1.0) == doctest::Approx(0.972));
  CHECK(accuracy(1.0 + 5e-7, 1.0) == doctest::Approx(1.0 + 1e-8));  // clipped
  CHECK(accuracy(-1e-3, 1.0) == 0.0);
  try {
    accuracy(1.001, 1.0);
    FAIL("expected oracle-inconsistency");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OracleInconsistency);
  }
  CHECK_THROWS_AS(accuracy(0.1, 0.0), Error);
}
