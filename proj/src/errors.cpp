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

#include "qpg/errors.hpp"

namespace qpg {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDimensions: return "invalid-dimensions";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::NotPsd: return "not-psd";
    case ErrorKind::DegenerateState: return "degenerate-state";
    case ErrorKind::SingularState: return "singular-state";
    case ErrorKind::RequiresPdGame: return "requires-pd-game";
    case ErrorKind::DegenerateUtility: return "degenerate-utility";
    case ErrorKind::OracleInconsistency: return "oracle-inconsistency";
    case ErrorKind::UnsupportedDimension: return "unsupported-dimension";
    case ErrorKind::Io: return "io";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace qpg
