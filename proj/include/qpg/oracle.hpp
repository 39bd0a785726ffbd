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

// Best Separable State ground truth: max over product states of
// <R, rho (x) sigma>, attained at pure products, i.e. the biquadratic
// maximum of (x (x) y)^dag R (x (x) y) over unit x, y.

#include <cstdint>

#include "qpg/game.hpp"

namespace qpg {

struct OracleResult {
  double value = 0.0;
  CVector x;
  CVector y;
  int restarts_used = 0;
  int best_restart_index = 0;
  bool certified_optimal = false;
  double upper_bound = 0.0;  // lambda_max(R)
};

struct SeesawOptions {
  int restarts = 50;
  double tol = 1e-10;
  int max_alternations = 10000;
};

/// (x (x) y)^dag R (x (x) y).
double product_value(const GameOperator& g, const CVector& x, const CVector& y);

/// Alternating top-eigenvector ascent from Haar-random y's. Restart r draws
/// from seed + r. Ties within 1e-14 go to the lowest restart index. When
/// the game's top eigenvector is certified product, the result is marked
/// certified_optimal.
OracleResult seesaw(const GameOperator& g, std::uint64_t seed, const SeesawOptions& options = {});

/// Value trace of one seesaw restart (one entry per half-step), for
/// inspecting monotonicity.
std::vector<double> seesaw_trace(const GameOperator& g, const CVector& y0, const SeesawOptions& options = {});

/// PSD test of the partial transpose over B.
bool ppt_check(const CMatrix& state, Eigen::Index n, Eigen::Index m, double tol = 1e-10);

struct Certificate {
  bool certified = false;
  double value = 0.0;  // lambda_max(R); exact BSS value iff certified
};

/// If the top eigenvector v of R gives a PPT |v><v| (hence a product vector)
/// and (n, m) is one of (2,2), (2,3), (3,2), the BSS value equals lmax(R).
Certificate certify_top_eigvec(const GameOperator& g, double tol = 1e-8);

/// dyn / oracle clipped to [0, 1 + 1e-8]. Throws OracleInconsistency when
/// dyn > oracle (1 + 1e-6), InvalidInput when oracle <= 1e-12.
double accuracy(double dyn_value, double oracle_value);

}  // namespace qpg
