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

#include "qpg/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qpg/kernels.hpp"

namespace qpg {
namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorKind::InvalidDimensions, os.str());
  }
}

void require_joint(const CMatrix& m, Eigen::Index n, Eigen::Index dim_b, const char* what) {
  require_square(m, what);
  if (n <= 0 || dim_b <= 0 || m.rows() != n * dim_b) {
    std::ostringstream os;
    os << what << ": matrix of dimension " << m.rows() << " is not " << n << "*" << dim_b;
    throw Error(ErrorKind::InvalidDimensions, os.str());
  }
}

CMatrix from_eigen(const EigenSystem& es, const RVector& new_values) {
  return es.vectors * new_values.asDiagonal() * es.vectors.adjoint();
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix DensityMatrix::from(CMatrix m) {
  require_square(m, "DensityMatrix");
  if (m.rows() == 0) throw Error(ErrorKind::InvalidDimensions, "DensityMatrix: empty matrix");
  if (!is_hermitian(m)) throw Error(ErrorKind::InvalidInput, "DensityMatrix: not Hermitian");
  const cplx tr = m.trace();
  if (std::abs(tr.real() - 1.0) > tol::kTrace || std::abs(tr.imag()) > tol::kTraceImag) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr.real() << (tr.imag() < 0 ? "-" : "+") << std::abs(tr.imag())
       << "i is not one";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  const double lo = min_eigenvalue(m);
  if (lo < tol::kDensityMinEig) {
    std::ostringstream os;
    os << "DensityMatrix: smallest eigenvalue " << lo << " is negative";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  return DensityMatrix(std::move(m), Trusted{});
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index n) {
  if (n <= 0) throw Error(ErrorKind::InvalidDimensions, "maximally_mixed: dimension must be positive");
  CMatrix m = CMatrix::Identity(n, n) / static_cast<double>(n);
  return DensityMatrix(std::move(m), Trusted{});
}

DensityMatrix DensityMatrix::pure(const CVector& v) {
  const double norm2 = v.squaredNorm();
  if (!(norm2 > 0.0)) throw Error(ErrorKind::DegenerateState, "pure: zero vector");
  CMatrix m = v * v.adjoint() / norm2;
  return DensityMatrix(std::move(m), Trusted{});
}

DensityMatrix DensityMatrix::diagonal(const RVector& probabilities) {
  CMatrix m = CMatrix::Zero(probabilities.size(), probabilities.size());
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) m(i, i) = probabilities(i);
  return from(std::move(m));
}

// ---------------------------------------------------------------------------
// Tensor operations

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index n = a.rows(), m = b.rows();
  const Eigen::Index na = a.cols(), mb = b.cols();
  CMatrix out(n * m, na * mb);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < na; ++k) {
      out.block(i * m, k * mb, m, mb) = a(i, k) * b;
    }
  }
  return out;
}

CMatrix partial_trace_B(const CMatrix& mat, Eigen::Index n, Eigen::Index dim_b) {
  require_joint(mat, n, dim_b, "partial_trace_B");
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      out(i, k) = mat.block(i * dim_b, k * dim_b, dim_b, dim_b).trace();
    }
  }
  return out;
}

CMatrix partial_trace_A(const CMatrix& mat, Eigen::Index n, Eigen::Index dim_b) {
  require_joint(mat, n, dim_b, "partial_trace_A");
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (Eigen::Index i = 0; i < n; ++i) out += mat.block(i * dim_b, i * dim_b, dim_b, dim_b);
  return out;
}

CMatrix partial_transpose_B(const CMatrix& mat, Eigen::Index n, Eigen::Index dim_b) {
  require_joint(mat, n, dim_b, "partial_transpose_B");
  CMatrix out(mat.rows(), mat.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      out.block(i * dim_b, k * dim_b, dim_b, dim_b) =
          mat.block(i * dim_b, k * dim_b, dim_b, dim_b).transpose();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral functions

EigenSystem eigh(const CMatrix& h) {
  require_square(h, "eigh");
  const double asym = 0.5 * (h - h.adjoint()).norm();
  if (asym > tol::kEighInput) {
    std::ostringstream os;
    os << "eigh: input is not Hermitian (symmetrization residual " << asym << ")";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidInput, "eigh: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const CMatrix& h) { return eigh(h).values(0); }

double max_eigenvalue(const CMatrix& h) {
  const EigenSystem es = eigh(h);
  return es.values(es.values.size() - 1);
}

CMatrix psd_power(const CMatrix& h, double p) {
  const EigenSystem es = eigh(h);
  if (es.values(0) < -tol::kPsdClip) {
    std::ostringstream os;
    os << "psd_power: smallest eigenvalue " << es.values(0) << " below -" << tol::kPsdClip;
    throw Error(ErrorKind::NotPsd, os.str());
  }
  if (p == 1.0) return 0.5 * (h + h.adjoint());
  RVector powered(es.values.size());
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    const double lam = std::max(es.values(k), 0.0);
    if (p == 0.0) {
      powered(k) = 1.0;
    } else if (lam == 0.0) {
      if (p < 0.0) throw Error(ErrorKind::SingularState, "psd_power: negative power of a singular matrix");
      powered(k) = 0.0;
    } else {
      powered(k) = std::pow(lam, p);
    }
  }
  return from_eigen(es, powered);
}

// ---------------------------------------------------------------------------
// Inner products and projections

cplx hs_inner_complex(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::InvalidDimensions, "hs_inner: dimension mismatch");
  }
  // Tr(a^dag b) = sum_ij conj(a_ij) b_ij, independent of storage order.
  return kernels::active().dotc(a.data(), b.data(), static_cast<std::size_t>(a.size()));
}

double hs_inner(const CMatrix& a, const CMatrix& b) {
  const cplx v = hs_inner_complex(a, b);
  const double scale = std::max(1.0, a.norm() * b.norm());
  if (std::abs(v.imag()) > tol::kRealPart * scale) {
    std::ostringstream os;
    os << "hs_inner: imaginary part " << v.imag() << " for Hermitian arguments";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  return v.real();
}

double real_trace(const CMatrix& m) {
  const cplx tr = m.trace();
  const double scale = std::max(1.0, m.norm());
  if (std::abs(tr.imag()) > tol::kRealPart * scale) {
    std::ostringstream os;
    os << "real_trace: imaginary part " << tr.imag();
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  return tr.real();
}

DensityMatrix project_to_density(const CMatrix& m) {
  require_square(m, "project_to_density");
  const EigenSystem es = eigh(m);
  RVector clipped = es.values.cwiseMax(0.0);
  const double total = clipped.sum();
  if (!(total > tol::kDegenerateTrace)) {
    throw Error(ErrorKind::DegenerateState, "project_to_density: no positive spectrum left after clipping");
  }
  clipped /= total;
  CMatrix out = from_eigen(es, clipped);
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out), DensityMatrix::Trusted{});
}

bool is_hermitian(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

double profile_distance(const CMatrix& a1, const CMatrix& b1, const CMatrix& a2, const CMatrix& b2) {
  return std::sqrt((a1 - a2).squaredNorm() + (b1 - b2).squaredNorm());
}

}  // namespace qpg
