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

#include <arm_neon.h>

#include "backends.hpp"

namespace qpg::kernels {
namespace {

// One complex double per float64x2_t. Same prod/cross bookkeeping as the
// AVX2 backend, two accumulator pairs for latency hiding.

struct Accum {
  float64x2_t prod0 = vdupq_n_f64(0.0);
  float64x2_t cross0 = vdupq_n_f64(0.0);
  float64x2_t prod1 = vdupq_n_f64(0.0);
  float64x2_t cross1 = vdupq_n_f64(0.0);
};

inline Accum accumulate(const cplx* a, const cplx* b, std::size_t n, std::size_t& i) {
  Accum acc;
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  for (; i + 2 <= n; i += 2) {
    const float64x2_t va0 = vld1q_f64(pa + 2 * i);
    const float64x2_t vb0 = vld1q_f64(pb + 2 * i);
    const float64x2_t va1 = vld1q_f64(pa + 2 * i + 2);
    const float64x2_t vb1 = vld1q_f64(pb + 2 * i + 2);
    acc.prod0 = vfmaq_f64(acc.prod0, va0, vb0);
    acc.cross0 = vfmaq_f64(acc.cross0, va0, vextq_f64(vb0, vb0, 1));
    acc.prod1 = vfmaq_f64(acc.prod1, va1, vb1);
    acc.cross1 = vfmaq_f64(acc.cross1, va1, vextq_f64(vb1, vb1, 1));
  }
  for (; i < n; ++i) {
    const float64x2_t va = vld1q_f64(pa + 2 * i);
    const float64x2_t vb = vld1q_f64(pb + 2 * i);
    acc.prod0 = vfmaq_f64(acc.prod0, va, vb);
    acc.cross0 = vfmaq_f64(acc.cross0, va, vextq_f64(vb, vb, 1));
  }
  return acc;
}

cplx dotu_neon(const cplx* a, const cplx* b, std::size_t n) {
  std::size_t i = 0;
  const Accum acc = accumulate(a, b, n, i);
  const float64x2_t prod = vaddq_f64(acc.prod0, acc.prod1);
  const float64x2_t cross = vaddq_f64(acc.cross0, acc.cross1);
  return {vgetq_lane_f64(prod, 0) - vgetq_lane_f64(prod, 1), vaddvq_f64(cross)};
}

cplx dotc_neon(const cplx* a, const cplx* b, std::size_t n) {
  std::size_t i = 0;
  const Accum acc = accumulate(a, b, n, i);
  const float64x2_t prod = vaddq_f64(acc.prod0, acc.prod1);
  const float64x2_t cross = vaddq_f64(acc.cross0, acc.cross1);
  return {vaddvq_f64(prod), vgetq_lane_f64(cross, 0) - vgetq_lane_f64(cross, 1)};
}

void gemv_neon(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dotu_neon(a + r * cols, x, cols);
}

}  // namespace

const KernelTable& neon_table() noexcept {
  static const KernelTable table{"neon", &dotu_neon, &dotc_neon, &gemv_neon};
  return table;
}

}  // namespace qpg::kernels
