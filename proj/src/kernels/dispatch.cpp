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

#include <atomic>
#include <cstdlib>

#include "backends.hpp"

namespace qpg::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(QPG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* find(std::string_view name) noexcept {
  if (name == "scalar") return &scalar_table();
#if defined(QPG_HAVE_AVX2)
  if (name == "avx2" && cpu_has_avx2()) return &avx2_table();
#endif
#if defined(QPG_HAVE_NEON)
  if (name == "neon") return &neon_table();
#endif
  return nullptr;
}

const KernelTable* best() noexcept {
#if defined(QPG_HAVE_AVX2)
  if (cpu_has_avx2()) return &avx2_table();
#endif
#if defined(QPG_HAVE_NEON)
  return &neon_table();
#endif
  return &scalar_table();
}

const KernelTable* resolve() noexcept {
  if (const char* env = std::getenv("QPG_KERNEL")) {
    const std::string_view want(env);
    if (want != "auto" && !want.empty()) {
      if (const KernelTable* t = find(want)) return t;
    }
  }
  return best();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> current{resolve()};
  return current;
}

}  // namespace

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> out{&scalar_table()};
#if defined(QPG_HAVE_AVX2)
  if (cpu_has_avx2()) out.push_back(&avx2_table());
#endif
#if defined(QPG_HAVE_NEON)
  out.push_back(&neon_table());
#endif
  return out;
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

bool select(std::string_view name) noexcept {
  const KernelTable* t = name == "auto" ? best() : find(name);
  if (t == nullptr) return false;
  slot().store(t, std::memory_order_release);
  return true;
}

}  // namespace qpg::kernels
