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

// Seeded random objects. Every generator takes the engine by reference so a
// caller controls the stream; nothing here owns global state.

#include <cstdint>
#include <random>

#include "qpg/hermitian.hpp"

namespace qpg {

using Rng = std::mt19937_64;

/// Engine for a (seed, stream) pair. Distinct streams give unrelated
/// sequences for the same seed (e.g. game draw vs. initial state draw).
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// i.i.d. standard complex Gaussian entries (real and imaginary parts
/// N(0, 1/2), so E|z|^2 = 1).
CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-uniform unit vector.
CVector haar_unit_vector(Eigen::Index dim, Rng& rng);

/// G G^dag / Tr(G G^dag) for a square complex Gaussian G (full rank a.s.).
DensityMatrix random_density(Eigen::Index dim, Rng& rng);

/// Random Hermitian with Gaussian entries.
CMatrix random_hermitian(Eigen::Index dim, Rng& rng);

/// Random Hermitian with zero trace, normalized to unit Frobenius norm.
CMatrix random_traceless_hermitian(Eigen::Index dim, Rng& rng);

}  // namespace qpg
