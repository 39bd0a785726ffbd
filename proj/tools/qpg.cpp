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

// qpg <command> [--config file.json] [overrides...]

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "qpg/experiment.hpp"
#include "qpg/kernels.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<long> n, m;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> dynamics;
  std::optional<double> q, step_size, eta, conv_tol;
  std::optional<int> max_iters;
  std::optional<std::string> init;
  std::optional<int> oracle_restarts;
  std::optional<std::string> out;
  std::optional<std::string> ensemble;
  std::optional<std::string> game_file;
};

void add_options(CLI::App& sub, Overrides& o) {
  sub.add_option("--config", o.config_path, "JSON experiment config");
  sub.add_option("--n", o.n, "dimension of player A");
  sub.add_option("--m", o.m, "dimension of player B");
  sub.add_option("--runs", o.runs, "number of runs");
  sub.add_option("--seed", o.seed, "base seed (run r uses seed + r)");
  sub.add_option("--dynamics", o.dynamics, "lin-qrep-q | lin-mmwu | exp-mmwu (matrix-exponential baseline)")
      ->check(CLI::IsMember({"lin-qrep-q", "lin-mmwu", "exp-mmwu"}));
  sub.add_option("--q", o.q, "metric parameter q");
  sub.add_option("--step-size", o.step_size, "RK4 step size");
  sub.add_option("--eta", o.eta, "exp-mmwu learning rate");
  sub.add_option("--conv-tol", o.conv_tol, "convergence tolerance");
  sub.add_option("--max-iters", o.max_iters, "iteration cap");
  sub.add_option("--init", o.init, "uniform | random")->check(CLI::IsMember({"uniform", "random"}));
  sub.add_option("--oracle-restarts", o.oracle_restarts, "seesaw restarts");
  sub.add_option("--out", o.out, "output directory");
  sub.add_option("--ensemble", o.ensemble, "random game ensemble (wishart | identity)");
  sub.add_option("--game", o.game_file, "read the game operator from a JSON file");
}

qpg::ExperimentConfig build_config(qpg::Command command, const Overrides& o) {
  qpg::Json j = qpg::Json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw qpg::Error(qpg::ErrorKind::Io, "cannot open config " + o.config_path);
    try {
      j = qpg::Json::parse(in);
    } catch (const qpg::Json::exception& e) {
      throw qpg::Error(qpg::ErrorKind::Config, o.config_path + ": " + e.what());
    }
  }
  j["command"] = std::string(qpg::to_string(command));
  if (o.n) j["n"] = *o.n;
  if (o.m) j["m"] = *o.m;
  if (o.runs) j["runs"] = *o.runs;
  if (o.seed) j["seed"] = *o.seed;
  if (o.init) j["init"] = *o.init;
  if (o.oracle_restarts) j["oracle_restarts"] = *o.oracle_restarts;
  if (o.out) j["output_dir"] = *o.out;
  if (o.ensemble) j["ensemble"] = *o.ensemble;
  if (o.game_file) j["game_file"] = *o.game_file;
  qpg::Json& dyn = j["dynamics"];
  if (dyn.is_null()) dyn = qpg::Json::object();
  if (o.dynamics) dyn["kind"] = *o.dynamics;
  if (o.q) dyn["q"] = *o.q;
  if (o.step_size) dyn["step_size"] = *o.step_size;
  if (o.eta) dyn["eta"] = *o.eta;
  if (o.conv_tol) dyn["conv_tol"] = *o.conv_tol;
  if (o.max_iters) dyn["max_iters"] = *o.max_iters;
  qpg::ExperimentConfig cfg = qpg::config_from_json(j);
  cfg.dynamics.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning dynamics for quantum common-interest games"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qpg 0.1.0");
  bool show_kernel = false;
  app.add_flag("--kernel-info", show_kernel, "print the active SIMD kernel backend to stderr");

  Overrides overrides;
  std::optional<qpg::Command> chosen;
  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "single run: trajectory CSV + report JSON"},
      {"batch", "many games: per-run CSV + summary JSON vs the seesaw oracle"},
      {"exploitability", "exploitability trace per run (long CSV)"},
      {"bloch", "Bloch coordinates per step for 2-level players"},
      {"compare", "distance between two dynamics from the same start"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_options(*sub, overrides);
    sub->callback([&chosen, n = std::string(name)] { chosen = qpg::parse_command(n); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qpg::exit_code::kIoOrConfig;
  }
  if (show_kernel) std::cerr << "qpg: kernel backend " << qpg::kernels::active().name << "\n";

  qpg::ExperimentConfig cfg;
  try {
    cfg = build_config(*chosen, overrides);
  } catch (const qpg::Error& e) {
    std::cerr << "qpg: " << e.what() << "\n";
    return qpg::exit_code::kIoOrConfig;
  }
  return qpg::run_command(cfg);
}
