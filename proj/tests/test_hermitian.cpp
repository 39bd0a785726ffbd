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
#include "qpg/hermitian.hpp"
#include "qpg/sampling.hpp"

using namespace qpg;

namespace {

CMatrix naive_kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// (Tr_B M)[i][k] = sum_j M[(i,j),(k,j)]
CMatrix naive_trace_B(const CMatrix& m, Eigen::Index n, Eigen::Index d) {
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index j = 0; j < d; ++j) out(i, k) += m(i * d + j, k * d + j);
  return out;
}

CMatrix naive_trace_A(const CMatrix& m, Eigen::Index n, Eigen::Index d) {
  CMatrix out = CMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index l = 0; l < d; ++l)
      for (Eigen::Index i = 0; i < n; ++i) out(j, l) += m(i * d + j, i * d + l);
  return out;
}

CMatrix integer_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
  std::uniform_int_distribution<int> d(-5, 5);
  CMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx(d(rng), d(rng));
  return m;
}

CMatrix random_psd(Eigen::Index n, Rng& rng) {
  const CMatrix g = complex_gaussian(n, n, rng);
  return g * g.adjoint();
}

CVector bell() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace

TEST_CASE("kron matches the double loop exactly and is associative on integers") {
  Rng rng = make_rng(1);
  for (int t = 0; t < 10; ++t) {
    const CMatrix a = integer_matrix(2, 3, rng), b = integer_matrix(3, 2, rng), c = integer_matrix(2, 2, rng);
    CHECK(kron(a, b) == naive_kron(a, b));
    CHECK(kron(kron(a, b), c) == kron(a, kron(b, c)));
  }
  // index convention: (i, j) -> i*m + j
  CMatrix e0 = CMatrix::Zero(2, 1), f1 = CMatrix::Zero(3, 1);
  e0(1, 0) = 1;
  f1(2, 0) = 1;
  const CMatrix v = kron(e0, f1);
  CHECK(v(1 * 3 + 2, 0) == cplx(1));
  CHECK(v.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("partial traces against explicit index sums") {
  Rng rng = make_rng(2);
  for (auto [n, d] : {std::pair<Eigen::Index, Eigen::Index>{2, 2}, {2, 3}, {3, 2}, {4, 5}}) {
    const CMatrix m = complex_gaussian(n * d, n * d, rng);
    CHECK((partial_trace_B(m, n, d) - naive_trace_B(m, n, d)).norm() <= 1e-12);
    CHECK((partial_trace_A(m, n, d) - naive_trace_A(m, n, d)).norm() <= 1e-12);
  }
}

TEST_CASE("partial trace of a product factorizes, adjoint identity") {
  Rng rng = make_rng(3);
  for (int t = 0; t < 20; ++t) {
    const CMatrix a = random_hermitian(3, rng), b = random_hermitian(2, rng);
    const cplx trb = b.trace(), tra = a.trace();
    CHECK((partial_trace_B(kron(a, b), 3, 2) - a * trb).norm() <= 1e-12);
    CHECK((partial_trace_A(kron(a, b), 3, 2) - b * tra).norm() <= 1e-12);

    const CMatrix m = random_hermitian(6, rng);
    CHECK(std::abs(hs_inner(partial_trace_B(m, 3, 2), a) - hs_inner(m, kron(a, identity(2)))) <= 1e-10);
    CHECK(std::abs(hs_inner(partial_trace_A(m, 3, 2), b) - hs_inner(m, kron(identity(3), b))) <= 1e-10);
  }
}

TEST_CASE("partial transpose: isometry, involution, Bell state") {
  Rng rng = make_rng(4);
  for (int t = 0; t < 10; ++t) {
    const CMatrix m = complex_gaussian(6, 6, rng);
    const CMatrix pt = partial_transpose_B(m, 2, 3);
    CHECK(std::abs(pt.norm() - m.norm()) <= 1e-12);
    CHECK((partial_transpose_B(pt, 2, 3) - m).norm() == 0.0);
    // against the definition on blocks
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index k = 0; k < 2; ++k) CHECK(pt.block(i * 3, k * 3, 3, 3) == m.block(i * 3, k * 3, 3, 3).transpose());
  }
  const CVector v = bell();
  const CMatrix ptb = partial_transpose_B(v * v.adjoint(), 2, 2);
  CHECK(min_eigenvalue(ptb) == doctest::Approx(-0.5).epsilon(1e-12));
  // the partial transpose of a Bell projector is the swap / 2
  CMatrix swap = CMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 0.5;
  CHECK((ptb - swap).norm() <= 1e-15);
}

TEST_CASE("eigh") {
  SUBCASE("diagonal input, ascending order") {
    RVector d(3);
    d << 3.0, -1.0, 2.0;
    const EigenSystem es = eigh(d.cast<cplx>().asDiagonal());
    CHECK(es.values(0) == doctest::Approx(-1.0));
    CHECK(es.values(1) == doctest::Approx(2.0));
    CHECK(es.values(2) == doctest::Approx(3.0));
  }
  SUBCASE("reconstruction and orthonormality on random Hermitian") {
    Rng rng = make_rng(5);
    for (int n : {1, 2, 3, 7, 20}) {
      const CMatrix h = random_hermitian(n, rng);
      const EigenSystem es = eigh(h);
      const CMatrix back = es.vectors * es.values.cast<cplx>().asDiagonal() * es.vectors.adjoint();
      CHECK((back - h).norm() <= 1e-11 * (1.0 + h.norm()));
      CHECK((es.vectors.adjoint() * es.vectors - identity(n)).norm() <= 1e-12 * n);
      for (int k = 1; k < n; ++k) CHECK(es.values(k - 1) <= es.values(k));
    }
  }
  SUBCASE("non-Hermitian input is rejected") {
    CMatrix h = CMatrix::Zero(2, 2);
    h(0, 1) = 1.0;
    CHECK_THROWS_AS(eigh(h), Error);
    try {
      eigh(h);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidInput);
    }
  }
  SUBCASE("Pauli Y") {
    CMatrix y(2, 2);
    y << 0, cplx(0, -1), cplx(0, 1), 0;
    CHECK(min_eigenvalue(y) == doctest::Approx(-1.0));
    CHECK(max_eigenvalue(y) == doctest::Approx(1.0));
  }
}

TEST_CASE("psd_power") {
  Rng rng = make_rng(6);
  SUBCASE("square root squares back") {
    const CMatrix a = random_psd(4, rng);
    const CMatrix s = psd_power(a, 0.5);
    CHECK((s * s - a).norm() <= 1e-10 * a.norm());
    CHECK(is_hermitian(s, 1e-12));
  }
  SUBCASE("exponents add") {
    for (int t = 0; t < 10; ++t) {
      const CMatrix a = random_psd(3, rng) + 0.1 * identity(3);
      for (auto [p, q] : {std::pair{0.5, 0.5}, {-0.5, 1.5}, {0.3, -1.0}, {2.0, 1.0}}) {
        const CMatrix lhs = psd_power(a, p) * psd_power(a, q);
        const CMatrix rhs = psd_power(a, p + q);
        CHECK((lhs - rhs).norm() <= 1e-8 * (1.0 + rhs.norm()));
      }
    }
  }
  SUBCASE("inverse") {
    const CMatrix a = random_psd(3, rng) + identity(3);
    CHECK((psd_power(a, -1.0) - a.inverse()).norm() <= 1e-10);
  }
  SUBCASE("p = 0 gives identity, p = 1 returns the input") {
    const CMatrix a = random_psd(3, rng);
    CHECK((psd_power(a, 0.0) - identity(3)).norm() <= 1e-15);
    CHECK((psd_power(a, 1.0) - a).norm() <= 1e-14 * a.norm());
  }
  SUBCASE("errors") {
    RVector d(2);
    d << 1.0, -1e-3;
    CHECK_THROWS_AS(psd_power(d.cast<cplx>().asDiagonal(), 0.5), Error);
    d << 1.0, 0.0;
    CHECK_THROWS_AS(psd_power(d.cast<cplx>().asDiagonal(), -0.5), Error);
    // small negative drift is clipped
    d << 1.0, -1e-10;
    const CMatrix s = psd_power(d.cast<cplx>().asDiagonal(), 0.5);
    CHECK(std::abs(s(1, 1)) == 0.0);
  }
}

TEST_CASE("hs_inner") {
  Rng rng = make_rng(7);
  for (int t = 0; t < 20; ++t) {
    const CMatrix a = complex_gaussian(4, 4, rng), b = complex_gaussian(4, 4, rng);
    cplx oracle = 0;
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) oracle += std::conj(a(i, j)) * b(i, j);
    CHECK(std::abs(hs_inner_complex(a, b) - oracle) <= 1e-12 * (1 + std::abs(oracle)));
    CHECK(std::abs(hs_inner_complex(a, b) - (a.adjoint() * b).trace()) <= 1e-12 * (1 + std::abs(oracle)));
  }
  for (int t = 0; t < 20; ++t) {
    const CMatrix a = random_psd(3, rng), b = random_psd(3, rng);
    CHECK(hs_inner(a, b) >= 0.0);
    const CMatrix h = random_hermitian(3, rng), k = random_hermitian(3, rng);
    CHECK(hs_inner(h, k) == doctest::Approx(hs_inner(k, h)).epsilon(1e-13));
  }
  CHECK(hs_inner(identity(3), identity(3)) == doctest::Approx(3.0));
}

TEST_CASE("DensityMatrix validation") {
  CHECK(DensityMatrix::maximally_mixed(4).matrix().isApprox(identity(4) / 4.0));
  CHECK_THROWS_AS(DensityMatrix::from(identity(2)), Error);  // trace 2
  RVector d(2);
  d << 1.1, -0.1;
  CHECK_THROWS_AS(DensityMatrix::from(d.cast<cplx>().asDiagonal()), Error);
  CMatrix nh = identity(2) / 2.0;
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix::from(nh), Error);
  CHECK_THROWS_AS(DensityMatrix::pure(CVector::Zero(3)), Error);
  const DensityMatrix p = DensityMatrix::pure(bell());
  CHECK(real_trace(p.matrix()) == doctest::Approx(1.0));
  CHECK(max_eigenvalue(p.matrix()) == doctest::Approx(1.0));
}

TEST_CASE("project_to_density examples") {
  RVector d(2);
  d << 2.0, 2.0;
  CHECK(project_to_density(d.cast<cplx>().asDiagonal()).matrix().isApprox(identity(2) / 2.0, 1e-15));
  d << 1.5, -0.1;
  const CMatrix out = project_to_density(d.cast<cplx>().asDiagonal()).matrix();
  CHECK(std::abs(out(0, 0) - 1.0) <= 1e-15);
  CHECK(std::abs(out(1, 1)) <= 1e-15);
  CHECK_THROWS_AS(project_to_density(CMatrix::Zero(3, 3)), Error);
  d << -1.0, -2.0;
  try {
    project_to_density(d.cast<cplx>().asDiagonal());
    FAIL("expected degenerate-state");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateState);
  }
}

TEST_CASE("project_to_density is idempotent on valid densities") {
  Rng rng = make_rng(8);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix r = random_density(1 + t % 5, rng);
    const DensityMatrix p = project_to_density(r.matrix());
    CHECK((p.matrix() - r.matrix()).norm() <= 1e-10);
    CHECK((project_to_density(p.matrix()).matrix() - p.matrix()).norm() <= 1e-12);
  }
}

TEST_CASE("random_density and traceless sampling") {
  Rng rng = make_rng(9);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix r = random_density(3, rng);
    CHECK(min_eigenvalue(r.matrix()) > 0.0);
    const CMatrix x = random_traceless_hermitian(3, rng);
    CHECK(std::abs(x.trace()) <= 1e-14);
    CHECK(x.norm() == doctest::Approx(1.0));
    CHECK(is_hermitian(x));
    const CVector v = haar_unit_vector(5, rng);
    CHECK(v.norm() == doctest::Approx(1.0));
  }
  // streams are independent and reproducible
  Rng a = make_rng(42, 0), b = make_rng(42, 0), c = make_rng(42, 1);
  CHECK(a() == b());
  Rng a2 = make_rng(42, 0);
  CHECK(a2() != c());
}
