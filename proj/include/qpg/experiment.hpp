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

// Experiment drivers behind the `qpg` CLI. Each command has a pure
// `collect_*` function returning in-memory results and a `cmd_*` wrapper
// that writes them under output_dir and returns the process exit code.
//
// Seeding: run r of a command uses seed + r for its game; random initial
// states draw from a separate stream of the same per-run seed.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qpg/dynamics.hpp"
#include "qpg/oracle.hpp"
#include "qpg/serialize.hpp"

namespace qpg {

enum class Command { Simulate, Batch, Exploitability, Bloch, Compare };
enum class InitKind { Uniform, Random };

std::string_view to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kIoOrConfig = 1;
inline constexpr int kNotConverged = 2;
inline constexpr int kOracleInconsistency = 3;
}  // namespace exit_code

struct ExperimentConfig {
  Command command = Command::Simulate;
  Eigen::Index n = 2;
  Eigen::Index m = 2;
  int runs = 1;
  std::uint64_t seed = 0;
  DynamicsConfig dynamics;
  InitKind init = InitKind::Uniform;
  int oracle_restarts = 50;
  std::filesystem::path output_dir = "out";
  std::string ensemble = "wishart";
  /// Game read from a JSON file instead of being generated.
  std::optional<std::filesystem::path> game_file;
  /// Reuse the run-0 game for every run (only the initial states vary).
  bool fixed_game = false;
  /// compare: the two dynamics traced against each other.
  std::array<DynamicsKind, 2> compare_kinds{DynamicsKind::LinQrepQ, DynamicsKind::ExpMmwu};

  bool operator==(const ExperimentConfig&) const = default;
};

Json config_to_json(const ExperimentConfig& c);
/// Missing keys keep defaults. Throws Config on unknown enum values.
ExperimentConfig config_from_json(const Json& j);

/// Worker count from QPG_THREADS, else hardware concurrency (at least 1).
int worker_threads();

/// Game for run `run` of the config (file, fixed, or seed + run).
GameOperator game_for_run(const ExperimentConfig& cfg, int run);
Profile initial_profile(const ExperimentConfig& cfg, Eigen::Index n, Eigen::Index m, int run);

// --- simulate --------------------------------------------------------------

RunResult collect_simulate(const ExperimentConfig& cfg);
int cmd_simulate(const ExperimentConfig& cfg);

// --- batch -----------------------------------------------------------------

struct BatchRow {
  int run = 0;
  std::uint64_t seed = 0;
  std::optional<double> accuracy;  // empty when the oracle check failed
  int iterations = 0;
  double final_utility = 0.0;
  double oracle_value = 0.0;
  bool certified = false;
  bool converged = false;
  double final_exploitability = 0.0;
  double min_eig_rho = 0.0;
  double min_eig_sigma = 0.0;
  bool monotone = true;  // utility never dropped by more than 1e-10
  bool oracle_inconsistent = false;
};

struct BatchSummary {
  int runs = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double mean_iterations = 0.0;
  double converged_fraction = 0.0;
  double mean_final_exploitability = 0.0;
  double rank1_fraction = 0.0;  // final min eigenvalue of both states < 1e-2
  int oracle_inconsistencies = 0;
};

struct BatchOutcome {
  std::vector<BatchRow> rows;
  BatchSummary summary;
};

BatchOutcome collect_batch(const ExperimentConfig& cfg);
BatchSummary summarize(const std::vector<BatchRow>& rows);
int cmd_batch(const ExperimentConfig& cfg);

// --- exploitability --------------------------------------------------------

struct ExploitabilityOutcome {
  std::vector<std::vector<double>> traces;  // per run, per step
  double median_final = 0.0;
  int above_threshold = 0;  // final exploitability > 1e-3
};

ExploitabilityOutcome collect_exploitability(const ExperimentConfig& cfg);
int cmd_exploitability(const ExperimentConfig& cfg);

// --- bloch -----------------------------------------------------------------

struct BlochRow {
  int run = 0;
  int step = 0;
  char player = 'A';
  std::array<double, 3> a{};
};

/// Both players that have dimension 2 are traced; throws
/// UnsupportedDimension if neither does.
std::vector<BlochRow> collect_bloch(const ExperimentConfig& cfg);
int cmd_bloch(const ExperimentConfig& cfg);

// --- compare ---------------------------------------------------------------

/// Frobenius distance between the two configured dynamics, per step, on the
/// run-0 game from the uniform start.
std::vector<double> collect_compare(const ExperimentConfig& cfg);
int cmd_compare(const ExperimentConfig& cfg);

/// Dispatch on cfg.command. Maps library errors to exit codes and prints
/// them to standard error.
int run_command(const ExperimentConfig& cfg);

/// "%.12g", the CSV float format.
std::string format_csv_double(double v);

}  // namespace qpg
