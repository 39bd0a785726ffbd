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

// JSON encodings. Matrices are row-major lists of [re, im] pairs; vectors
// are lists of [re, im] pairs. Doubles are written in shortest round-trip
// form, so decode(encode(x)) reproduces every value bit for bit.

#include <string>

#include "json.hpp"
#include "qpg/dynamics.hpp"
#include "qpg/oracle.hpp"

namespace qpg {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const CMatrix& m);
/// Throws InvalidInput on ragged or malformed input.
CMatrix matrix_from_json(const Json& j);

Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j);

/// { n, m, r, ensemble, seed }
Json game_to_json(const GameOperator& g);
GameOperator game_from_json(const Json& j);

Json oracle_to_json(const OracleResult& r);
Json report_to_json(const ConvergenceReport& r);
Json dynamics_config_to_json(const DynamicsConfig& c);
/// Missing keys keep the defaults in `base`.
DynamicsConfig dynamics_config_from_json(const Json& j, DynamicsConfig base = {});

/// Dump with 2-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace qpg
