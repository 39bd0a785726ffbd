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

// Complex contraction kernels behind the Hilbert-Schmidt inner product and
// the Choi superoperator. Each backend exposes the same three entry points;
// a table is chosen once per process (CPU detection, overridable with the
// QPG_KERNEL environment variable: scalar | avx2 | neon | auto).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qpg::kernels {

using cplx = std::complex<double>;

/// sum_i a[i] * b[i]
using DotFn = cplx (*)(const cplx* a, const cplx* b, std::size_t n);

/// y[r] = sum_c a[r * cols + c] * x[c]  (a row-major, unconjugated)
using GemvFn = void (*)(const cplx* a, std::size_t rows, std::size_t cols,
                        const cplx* x, cplx* y);

struct KernelTable {
  std::string_view name;
  DotFn dotu;  // unconjugated
  DotFn dotc;  // conj(a) . b
  GemvFn gemv;
};

const KernelTable& scalar_table() noexcept;

/// Backends compiled into this binary whose ISA the running CPU supports.
/// The scalar table is always first.
std::vector<const KernelTable*> available_tables();

/// Process-wide active backend. Resolved on first call and fixed afterwards.
const KernelTable& active() noexcept;

/// Force a backend by name; returns false if it is unknown or unsupported
/// here. Intended for tests and benchmarks.
bool select(std::string_view name) noexcept;

inline cplx dotu(std::span<const cplx> a, std::span<const cplx> b) {
  return active().dotu(a.data(), b.data(), a.size());
}

inline cplx dotc(std::span<const cplx> a, std::span<const cplx> b) {
  return active().dotc(a.data(), b.data(), a.size());
}

}  // namespace qpg::kernels
