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

#include "qpg/sampling.hpp"

#include <cmath>

namespace qpg {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix g(rows, cols);
  // Fill row by row so the draw order does not depend on Eigen's storage.
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = cplx(re, im);
    }
  }
  return g;
}

CVector haar_unit_vector(Eigen::Index dim, Rng& rng) {
  CVector v = complex_gaussian(dim, 1, rng).col(0);
  return v / v.norm();
}

DensityMatrix random_density(Eigen::Index dim, Rng& rng) {
  const CMatrix g = complex_gaussian(dim, dim, rng);
  CMatrix w = g * g.adjoint();
  w = 0.5 * (w + w.adjoint()).eval();
  return project_to_density(w / w.trace().real());
}

CMatrix random_hermitian(Eigen::Index dim, Rng& rng) {
  const CMatrix g = complex_gaussian(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

CMatrix random_traceless_hermitian(Eigen::Index dim, Rng& rng) {
  CMatrix h = random_hermitian(dim, rng);
  const cplx shift = h.trace() / static_cast<double>(dim);
  h -= shift.real() * CMatrix::Identity(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) h(i, i) = cplx(h(i, i).real(), 0.0);
  return h / h.norm();
}

}  // namespace qpg
