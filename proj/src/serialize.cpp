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

#include "qpg/serialize.hpp"

namespace qpg {
namespace {

Json pair(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx unpair(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::InvalidInput, "expected a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(pair(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidInput, "matrix: expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::InvalidInput, "matrix: ragged rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = unpair(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(pair(v(i)));
  return out;
}

CVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidInput, "vector: expected an array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = unpair(j[i]);
  return v;
}

Json game_to_json(const GameOperator& g) {
  Json j;
  j["n"] = g.n();
  j["m"] = g.m();
  j["r"] = matrix_to_json(g.r());
  j["ensemble"] = g.ensemble();
  if (g.seed()) {
    j["seed"] = *g.seed();
  } else {
    j["seed"] = nullptr;
  }
  return j;
}

GameOperator game_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<Eigen::Index>();
    const auto m = j.at("m").get<Eigen::Index>();
    CMatrix r = matrix_from_json(j.at("r"));
    std::string ensemble = j.contains("ensemble") ? j["ensemble"].get<std::string>() : "custom";
    std::optional<std::uint64_t> seed;
    if (j.contains("seed") && !j["seed"].is_null()) seed = j["seed"].get<std::uint64_t>();
    return GameOperator::from(std::move(r), n, m, std::move(ensemble), seed);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("game JSON: ") + e.what());
  }
}

Json oracle_to_json(const OracleResult& r) {
  Json j;
  j["value"] = r.value;
  j["x"] = vector_to_json(r.x);
  j["y"] = vector_to_json(r.y);
  j["restarts_used"] = r.restarts_used;
  j["best_restart_index"] = r.best_restart_index;
  j["certified_optimal"] = r.certified_optimal;
  j["upper_bound"] = r.upper_bound;
  return j;
}

Json report_to_json(const ConvergenceReport& r) {
  Json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["final_utility"] = r.final_utility;
  j["final_exploitability"] = r.final_exploitability;
  j["final_residual"] = r.final_residual;
  j["termination_reason"] = std::string(to_string(r.termination_reason));
  return j;
}

Json dynamics_config_to_json(const DynamicsConfig& c) {
  Json j;
  j["kind"] = std::string(to_string(c.kind));
  j["q"] = c.q;
  j["step_size"] = c.step_size;
  j["eta"] = c.eta;
  j["max_iters"] = c.max_iters;
  j["window"] = c.window;
  j["conv_tol"] = c.conv_tol;
  j["stall_iters"] = c.stall_iters;
  j["seed"] = c.seed;
  j["order"] = c.order == UpdateOrder::RhoFirst ? "rho-first" : "sigma-first";
  j["track_distance_to_final"] = c.track_distance_to_final;
  return j;
}

DynamicsConfig dynamics_config_from_json(const Json& j, DynamicsConfig c) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "dynamics: expected an object");
  try {
    if (j.contains("kind")) {
      const auto name = j["kind"].get<std::string>();
      const auto kind = parse_dynamics_kind(name);
      if (!kind) throw Error(ErrorKind::Config, "dynamics: unknown kind '" + name + "'");
      c.kind = *kind;
    }
    if (j.contains("q")) c.q = j["q"].get<double>();
    if (j.contains("step_size")) c.step_size = j["step_size"].get<double>();
    if (j.contains("eta")) c.eta = j["eta"].get<double>();
    if (j.contains("max_iters")) c.max_iters = j["max_iters"].get<int>();
    if (j.contains("window")) c.window = j["window"].get<int>();
    if (j.contains("conv_tol")) c.conv_tol = j["conv_tol"].get<double>();
    if (j.contains("stall_iters")) c.stall_iters = j["stall_iters"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("order")) {
      const auto order = j["order"].get<std::string>();
      if (order == "rho-first") {
        c.order = UpdateOrder::RhoFirst;
      } else if (order == "sigma-first") {
        c.order = UpdateOrder::SigmaFirst;
      } else {
        throw Error(ErrorKind::Config, "dynamics: unknown order '" + order + "'");
      }
    }
    if (j.contains("track_distance_to_final")) c.track_distance_to_final = j["track_distance_to_final"].get<bool>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Config, std::string("dynamics: ") + e.what());
  }
  return c;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qpg
