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

#include <immintrin.h>

#include "backends.hpp"

namespace qpg::kernels {
namespace {

// A __m256d holds two interleaved complex doubles [re0, im0, re1, im1].
// For a.b we accumulate
//   prod  += a * b          -> [ar*br, ai*bi, ...]
//   cross += a * swap(b)    -> [ar*bi, ai*br, ...]
// and fold at the end: dotu = (prod0 - prod1, cross0 + cross1) and
// dotc = (prod0 + prod1, cross0 - cross1), summed over both lanes.

struct Accum {
  __m256d prod0 = _mm256_setzero_pd();
  __m256d cross0 = _mm256_setzero_pd();
  __m256d prod1 = _mm256_setzero_pd();
  __m256d cross1 = _mm256_setzero_pd();
};

inline void accumulate(const cplx* a, const cplx* b, std::size_t n, Accum& acc, std::size_t& i) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  // four complex per iteration over two independent accumulator pairs
  for (; i + 4 <= n; i += 4) {
    const __m256d va0 = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb0 = _mm256_loadu_pd(pb + 2 * i);
    const __m256d va1 = _mm256_loadu_pd(pa + 2 * i + 4);
    const __m256d vb1 = _mm256_loadu_pd(pb + 2 * i + 4);
    acc.prod0 = _mm256_fmadd_pd(va0, vb0, acc.prod0);
    acc.cross0 = _mm256_fmadd_pd(va0, _mm256_permute_pd(vb0, 0b0101), acc.cross0);
    acc.prod1 = _mm256_fmadd_pd(va1, vb1, acc.prod1);
    acc.cross1 = _mm256_fmadd_pd(va1, _mm256_permute_pd(vb1, 0b0101), acc.cross1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    acc.prod0 = _mm256_fmadd_pd(va, vb, acc.prod0);
    acc.cross0 = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), acc.cross0);
  }
}

inline void fold(const Accum& acc, double prod[4], double cross[4]) {
  _mm256_storeu_pd(prod, _mm256_add_pd(acc.prod0, acc.prod1));
  _mm256_storeu_pd(cross, _mm256_add_pd(acc.cross0, acc.cross1));
}

cplx dotu_avx2(const cplx* a, const cplx* b, std::size_t n) {
  Accum acc;
  std::size_t i = 0;
  accumulate(a, b, n, acc, i);
  alignas(32) double prod[4], cross[4];
  fold(acc, prod, cross);
  double re = (prod[0] - prod[1]) + (prod[2] - prod[3]);
  double im = (cross[0] + cross[1]) + (cross[2] + cross[3]);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

cplx dotc_avx2(const cplx* a, const cplx* b, std::size_t n) {
  Accum acc;
  std::size_t i = 0;
  accumulate(a, b, n, acc, i);
  alignas(32) double prod[4], cross[4];
  fold(acc, prod, cross);
  double re = (prod[0] + prod[1]) + (prod[2] + prod[3]);
  double im = (cross[0] - cross[1]) + (cross[2] - cross[3]);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void gemv_avx2(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dotu_avx2(a + r * cols, x, cols);
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable table{"avx2", &dotu_avx2, &dotc_avx2, &gemv_avx2};
  return table;
}

}  // namespace qpg::kernels
