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

// Dense complex-Hermitian kernel.
//
// Tensor layout: for registers A (dim n) and B (dim m), the joint basis index
// of the pair (i, j) is i * m + j. kron(), the partial traces and the partial
// transpose all assume this layout, so that
//   kron(A, B)(i*m + j, k*m + l) == A(i, k) * B(j, l).

#include <complex>

#include <Eigen/Dense>

#include "qpg/errors.hpp"

namespace qpg {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-10;
inline constexpr double kTraceImag = 1e-12;
inline constexpr double kDensityMinEig = -1e-10;
/// Eigenvalues in [-kPsdClip, 0) are clipped silently; below is an error.
inline constexpr double kPsdClip = 1e-8;
/// Symmetrization residual above which eigh() rejects its input.
inline constexpr double kEighInput = 1e-8;
inline constexpr double kRealPart = 1e-12;
inline constexpr double kDegenerateTrace = 1e-14;
}  // namespace tol

/// Trace-one Hermitian PSD matrix. Construction validates the invariants;
/// project_to_density() is the only path that repairs rather than rejects.
class DensityMatrix {
 public:
  /// Throws InvalidInput if `m` is not a density within the tolerances in tol::.
  static DensityMatrix from(CMatrix m);
  static DensityMatrix maximally_mixed(Eigen::Index n);
  /// |v><v| / <v|v>. Throws DegenerateState for the zero vector.
  static DensityMatrix pure(const CVector& v);
  static DensityMatrix diagonal(const RVector& probabilities);

  const CMatrix& matrix() const noexcept { return m_; }
  operator const CMatrix&() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  struct Trusted {};
  DensityMatrix(CMatrix m, Trusted) : m_(std::move(m)) {}
  friend DensityMatrix project_to_density(const CMatrix& m);

  CMatrix m_;
};

struct EigenSystem {
  RVector values;   // ascending
  CMatrix vectors;  // orthonormal columns, vectors.col(k) pairs with values(k)
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Tr_B of an (n*m)x(n*m) operator; result is n x n.
CMatrix partial_trace_B(const CMatrix& m, Eigen::Index n, Eigen::Index dim_b);
/// Tr_A of an (n*m)x(n*m) operator; result is m x m.
CMatrix partial_trace_A(const CMatrix& m, Eigen::Index n, Eigen::Index dim_b);
/// Transposes every m x m block in place of the B register.
CMatrix partial_transpose_B(const CMatrix& m, Eigen::Index n, Eigen::Index dim_b);

/// Hermitian eigendecomposition. Input is symmetrized first; throws
/// InvalidInput when ||(h - h^dag)/2||_F exceeds tol::kEighInput.
EigenSystem eigh(const CMatrix& h);

double min_eigenvalue(const CMatrix& h);
double max_eigenvalue(const CMatrix& h);

/// h^p with eigenvalues clipped at zero first. Throws NotPsd below
/// -tol::kPsdClip and SingularState for p < 0 with a zero eigenvalue.
CMatrix psd_power(const CMatrix& h, double p);

/// Tr(a^dag b) without any realness assumption.
cplx hs_inner_complex(const CMatrix& a, const CMatrix& b);
/// Tr(a^dag b) for Hermitian arguments. Throws InvalidInput if the imaginary
/// part exceeds tol::kRealPart (scaled by max(1, |a| |b|)).
double hs_inner(const CMatrix& a, const CMatrix& b);

/// Real part of a scalar trace, asserting the imaginary part is negligible.
double real_trace(const CMatrix& m);

/// Symmetrize, clip negative eigenvalues to zero, renormalize the trace.
/// Throws DegenerateState if nothing positive survives the clip.
DensityMatrix project_to_density(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double tolerance = tol::kHermitian);

inline CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

/// sqrt(||a1 - a2||_F^2 + ||b1 - b2||_F^2), the distance between two profiles.
double profile_distance(const CMatrix& a1, const CMatrix& b1, const CMatrix& a2, const CMatrix& b2);

}  // namespace qpg
