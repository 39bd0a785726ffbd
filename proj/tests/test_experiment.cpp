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

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qpg/experiment.hpp"

using namespace qpg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qpg_test_experiment_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig small_batch() {
  ExperimentConfig cfg;
  cfg.command = Command::Batch;
  cfg.runs = 8;
  cfg.seed = 17;
  cfg.oracle_restarts = 10;
  return cfg;
}

}  // namespace

TEST_CASE("config JSON round trip") {
  ExperimentConfig cfg;
  cfg.command = Command::Exploitability;
  cfg.n = 3;
  cfg.m = 4;
  cfg.runs = 12;
  cfg.seed = 123456789012345ULL;
  cfg.dynamics.kind = DynamicsKind::LinQrepQ;
  cfg.dynamics.q = 0.3;
  cfg.dynamics.step_size = 0.1 / 3.0;
  cfg.dynamics.conv_tol = 1.234567890123e-9;
  cfg.dynamics.order = UpdateOrder::SigmaFirst;
  cfg.init = InitKind::Random;
  cfg.oracle_restarts = 7;
  cfg.output_dir = "some/dir";
  cfg.ensemble = "identity";
  cfg.fixed_game = true;
  cfg.compare_kinds = {DynamicsKind::LinMmwu, DynamicsKind::ExpMmwu};
  const Json j = config_to_json(cfg);
  CHECK(config_from_json(j) == cfg);
  CHECK(config_from_json(Json::parse(j.dump())) == cfg);
  // missing keys keep defaults
  CHECK(config_from_json(Json::object()) == ExperimentConfig{});
  Json bad = j;
  bad["dynamics"]["kind"] = "lin-qrep-z";
  CHECK_THROWS_AS(config_from_json(bad), Error);
  bad = j;
  bad["init"] = "sideways";
  CHECK_THROWS_AS(config_from_json(bad), Error);
}

TEST_CASE("game JSON round trip is exact") {
  const GameOperator g = random_game(2, 3, 99);
  const GameOperator back = game_from_json(Json::parse(dump(game_to_json(g))));
  CHECK(back.r() == g.r());
  CHECK(back.n() == 2);
  CHECK(back.m() == 3);
  CHECK(back.ensemble() == "wishart");
  CHECK(back.seed() == g.seed());
}

TEST_CASE("initial profiles") {
  ExperimentConfig cfg;
  cfg.n = 3;
  cfg.m = 2;
  const Profile u = initial_profile(cfg, 3, 2, 0);
  CHECK(u.rho.matrix() == identity(3) / 3.0);
  CHECK(u.sigma.matrix() == identity(2) / 2.0);
  cfg.init = InitKind::Random;
  const Profile a = initial_profile(cfg, 3, 2, 0), b = initial_profile(cfg, 3, 2, 0), c = initial_profile(cfg, 3, 2, 1);
  CHECK(a.rho.matrix() == b.rho.matrix());
  CHECK(a.rho.matrix() != c.rho.matrix());
  CHECK(min_eigenvalue(a.rho.matrix()) > 0.0);
}

TEST_CASE("batch on the identity game") {
  ExperimentConfig cfg = small_batch();
  cfg.runs = 1;
  cfg.ensemble = "identity";
  const BatchOutcome out = collect_batch(cfg);
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0].accuracy.value() == 1.0);
  CHECK(out.rows[0].iterations <= cfg.dynamics.window + cfg.dynamics.stall_iters);
  CHECK(out.summary.mean_accuracy == 1.0);
}

TEST_CASE("batch summary statistics") {
  std::vector<BatchRow> rows(4);
  const double acc[] = {0.9, 1.0, 0.8, 1.0};
  for (int i = 0; i < 4; ++i) {
    rows[i].accuracy = acc[i];
    rows[i].iterations = 10 * (i + 1);
    rows[i].converged = i != 2;
    rows[i].min_eig_rho = i == 0 ? 0.5 : 1e-3;
    rows[i].min_eig_sigma = 1e-3;
  }
  const BatchSummary s = summarize(rows);
  CHECK(s.runs == 4);
  CHECK(s.mean_accuracy == doctest::Approx(0.925));
  // population standard deviation
  CHECK(s.std_accuracy == doctest::Approx(std::sqrt((0.025 * 0.025 + 0.075 * 0.075 * 2 + 0.125 * 0.125) / 4.0)));
  CHECK(s.mean_iterations == doctest::Approx(25.0));
  CHECK(s.converged_fraction == doctest::Approx(0.75));
  CHECK(s.rank1_fraction == doctest::Approx(0.75));
}

TEST_CASE("batch output is byte-identical across repeats and thread counts") {
  ExperimentConfig cfg = small_batch();
  cfg.output_dir = scratch("batch_a");
  ::setenv("QPG_THREADS", "1", 1);
  CHECK(cmd_batch(cfg) == exit_code::kOk);
  const std::string csv1 = slurp(cfg.output_dir / "runs.csv"), json1 = slurp(cfg.output_dir / "summary.json");
  ::setenv("QPG_THREADS", "4", 1);
  cfg.output_dir = scratch("batch_b");
  CHECK(cmd_batch(cfg) == exit_code::kOk);
  ::unsetenv("QPG_THREADS");
  CHECK(slurp(cfg.output_dir / "runs.csv") == csv1);
  // the summary echoes the config, whose output_dir differs
  Json a = Json::parse(json1), b = Json::parse(slurp(cfg.output_dir / "summary.json"));
  a["config"].erase("output_dir");
  b["config"].erase("output_dir");
  CHECK(a == b);
  CHECK(csv1.rfind("run,seed,accuracy,iterations,final_utility,oracle_value,certified", 0) == 0);
  CHECK(std::count(csv1.begin(), csv1.end(), '\n') == cfg.runs + 1);
}

TEST_CASE("simulate writes trajectory, report and game") {
  ExperimentConfig cfg;
  cfg.seed = 5;
  cfg.output_dir = scratch("simulate");
  CHECK(cmd_simulate(cfg) == exit_code::kOk);
  const std::string first = slurp(cfg.output_dir / "trajectory.csv");
  CHECK(cmd_simulate(cfg) == exit_code::kOk);
  CHECK(slurp(cfg.output_dir / "trajectory.csv") == first);
  const Json report = Json::parse(slurp(cfg.output_dir / "report.json"));
  CHECK(report["converged"] == true);
  const GameOperator g = game_from_json(Json::parse(slurp(cfg.output_dir / "game.json")));
  CHECK(g.r() == random_game(2, 2, 5).r());

  SUBCASE("max-iters gives exit 2") {
    cfg.dynamics.max_iters = 5;
    CHECK(cmd_simulate(cfg) == exit_code::kNotConverged);
  }
  SUBCASE("identity game: utility column all ones") {
    cfg.ensemble = "identity";
    const RunResult r = collect_simulate(cfg);
    CHECK(r.report.converged);
    CHECK(r.report.iterations <= cfg.dynamics.window + cfg.dynamics.stall_iters);
    for (const auto& rec : r.trajectory) CHECK(rec.utility == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("game file input") {
    ExperimentConfig from_file = cfg;
    from_file.game_file = cfg.output_dir / "game.json";
    from_file.seed = 999;
    CHECK(collect_simulate(from_file).report.final_utility == collect_simulate(cfg).report.final_utility);
  }
}

TEST_CASE("exit codes") {
  ExperimentConfig cfg;
  cfg.output_dir = scratch("codes");
  cfg.game_file = cfg.output_dir / "missing.json";
  CHECK(run_command(cfg) == exit_code::kIoOrConfig);
  cfg.game_file.reset();
  cfg.n = 1;
  CHECK(run_command(cfg) == exit_code::kIoOrConfig);
  cfg.n = 2;
  cfg.command = Command::Bloch;
  cfg.n = 3;
  cfg.m = 3;
  CHECK(run_command(cfg) == exit_code::kIoOrConfig);
}

TEST_CASE("exploitability traces") {
  ExperimentConfig cfg;
  cfg.runs = 3;
  cfg.ensemble = "identity";
  const ExploitabilityOutcome e = collect_exploitability(cfg);
  REQUIRE(e.traces.size() == 3);
  for (const auto& t : e.traces)
    for (double v : t) CHECK(std::abs(v) <= 1e-8);
  CHECK(e.above_threshold == 0);

  cfg.ensemble = "wishart";
  cfg.output_dir = scratch("exploit");
  CHECK(cmd_exploitability(cfg) == exit_code::kOk);
  const std::string csv = slurp(cfg.output_dir / "exploitability.csv");
  CHECK(csv.rfind("run,step,exploitability\n", 0) == 0);
  const Json footer = Json::parse(slurp(cfg.output_dir / "exploitability_summary.json"));
  CHECK(footer.contains("median_final_exploitability"));
}

TEST_CASE("bloch rows") {
  ExperimentConfig cfg;
  cfg.runs = 4;
  cfg.n = 2;
  cfg.m = 3;
  const std::vector<BlochRow> rows = collect_bloch(cfg);
  REQUIRE(!rows.empty());
  for (const BlochRow& r : rows) {
    CHECK(r.player == 'A');
    CHECK(r.a[0] * r.a[0] + r.a[1] * r.a[1] + r.a[2] * r.a[2] <= 1.0 + 1e-9);
  }
  // uniform start sits at the centre
  CHECK(rows.front().step == 0);
  CHECK(std::hypot(rows.front().a[0], rows.front().a[1], rows.front().a[2]) <= 1e-15);
}

TEST_CASE("compare") {
  ExperimentConfig cfg;
  cfg.dynamics.max_iters = 50;
  cfg.ensemble = "identity";
  for (double d : collect_compare(cfg)) CHECK(d <= 1e-12);

  cfg.ensemble = "wishart";
  cfg.compare_kinds = {DynamicsKind::LinMmwu, DynamicsKind::LinMmwu};
  for (double d : collect_compare(cfg)) CHECK(d == 0.0);

  cfg.compare_kinds = {DynamicsKind::LinQrepQ, DynamicsKind::ExpMmwu};
  int diverged = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    cfg.seed = s;
    const std::vector<double> d = collect_compare(cfg);
    CHECK(d.size() == 51);
    diverged += *std::max_element(d.begin(), d.end()) > 1e-3;
  }
  CHECK(diverged >= 90);
}

TEST_CASE("csv float format") {
  CHECK(format_csv_double(0.1) == "0.1");
  CHECK(format_csv_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_csv_double(1e-20) == "1e-20");
}
