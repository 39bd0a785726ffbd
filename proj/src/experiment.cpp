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

#include "qpg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include "qpg/sampling.hpp"

namespace qpg {

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::Batch: return "batch";
    case Command::Exploitability: return "exploitability";
    case Command::Bloch: return "bloch";
    case Command::Compare: return "compare";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (Command c : {Command::Simulate, Command::Batch, Command::Exploitability, Command::Bloch, Command::Compare}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string format_csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Config

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["command"] = std::string(to_string(c.command));
  j["n"] = c.n;
  j["m"] = c.m;
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  j["dynamics"] = dynamics_config_to_json(c.dynamics);
  j["init"] = c.init == InitKind::Uniform ? "uniform" : "random";
  j["oracle_restarts"] = c.oracle_restarts;
  j["output_dir"] = c.output_dir.generic_string();
  j["ensemble"] = c.ensemble;
  if (c.game_file) {
    j["game_file"] = c.game_file->generic_string();
  } else {
    j["game_file"] = nullptr;
  }
  j["fixed_game"] = c.fixed_game;
  j["compare_kinds"] = Json::array({std::string(to_string(c.compare_kinds[0])), std::string(to_string(c.compare_kinds[1]))});
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "config: expected a JSON object");
  ExperimentConfig c;
  try {
    if (j.contains("command")) {
      const auto name = j["command"].get<std::string>();
      const auto cmd = parse_command(name);
      if (!cmd) throw Error(ErrorKind::Config, "config: unknown command '" + name + "'");
      c.command = *cmd;
    }
    if (j.contains("n")) c.n = j["n"].get<Eigen::Index>();
    if (j.contains("m")) c.m = j["m"].get<Eigen::Index>();
    if (j.contains("runs")) c.runs = j["runs"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("dynamics")) c.dynamics = dynamics_config_from_json(j["dynamics"], c.dynamics);
    if (j.contains("init")) {
      const auto init = j["init"].get<std::string>();
      if (init == "uniform") {
        c.init = InitKind::Uniform;
      } else if (init == "random") {
        c.init = InitKind::Random;
      } else {
        throw Error(ErrorKind::Config, "config: unknown init '" + init + "'");
      }
    }
    if (j.contains("oracle_restarts")) c.oracle_restarts = j["oracle_restarts"].get<int>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("ensemble")) c.ensemble = j["ensemble"].get<std::string>();
    if (j.contains("game_file") && !j["game_file"].is_null()) c.game_file = j["game_file"].get<std::string>();
    if (j.contains("fixed_game")) c.fixed_game = j["fixed_game"].get<bool>();
    if (j.contains("compare_kinds")) {
      const Json& kinds = j["compare_kinds"];
      if (!kinds.is_array() || kinds.size() != 2) throw Error(ErrorKind::Config, "config: compare_kinds needs two entries");
      for (std::size_t k = 0; k < 2; ++k) {
        const auto name = kinds[k].get<std::string>();
        const auto kind = parse_dynamics_kind(name);
        if (!kind) throw Error(ErrorKind::Config, "config: unknown dynamics '" + name + "'");
        c.compare_kinds[k] = *kind;
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config: ") + e.what());
  }
  if (!is_known_ensemble(c.ensemble)) throw Error(ErrorKind::Config, "config: unknown ensemble '" + c.ensemble + "'");
  if (c.runs < 1) throw Error(ErrorKind::Config, "config: runs must be >= 1");
  if (c.oracle_restarts < 1) throw Error(ErrorKind::Config, "config: oracle_restarts must be >= 1");
  return c;
}

// ---------------------------------------------------------------------------
// Shared plumbing

int worker_threads() {
  if (const char* env = std::getenv("QPG_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr double kRank1Threshold = 1e-2;
constexpr double kExploitThreshold = 1e-3;
constexpr double kMonotoneSlack = 1e-10;

// Runs body(i) for i in [0, count) on up to worker_threads() threads. The
// body writes into its own slot, so output order never depends on scheduling.
template <typename Body>
void parallel_for(int count, Body&& body) {
  const int workers = std::min(worker_threads(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw Error(ErrorKind::Io, "write to " + path.string() + " failed");
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Config, path.string() + ": " + e.what());
  }
}

bool utility_monotone(const std::vector<TrajectoryRecord>& t) {
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (t[k].utility < t[k - 1].utility - kMonotoneSlack) return false;
  }
  return true;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

GameOperator game_for_run(const ExperimentConfig& cfg, int run) {
  if (cfg.game_file) {
    GameOperator g = game_from_json(read_json_file(*cfg.game_file));
    if (g.n() != cfg.n || g.m() != cfg.m) {
      throw Error(ErrorKind::Config, "game file dimensions do not match n, m in the config");
    }
    return g;
  }
  const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(cfg.fixed_game ? 0 : run);
  return random_game(cfg.n, cfg.m, seed, cfg.ensemble);
}

Profile initial_profile(const ExperimentConfig& cfg, Eigen::Index n, Eigen::Index m, int run) {
  if (cfg.init == InitKind::Uniform) {
    return {DensityMatrix::maximally_mixed(n), DensityMatrix::maximally_mixed(m)};
  }
  Rng rng = make_rng(cfg.seed + static_cast<std::uint64_t>(run), kInitStream);
  DensityMatrix rho = random_density(n, rng);
  DensityMatrix sigma = random_density(m, rng);
  return {std::move(rho), std::move(sigma)};
}

// ---------------------------------------------------------------------------
// simulate

RunResult collect_simulate(const ExperimentConfig& cfg) {
  const GameOperator g = game_for_run(cfg, 0);
  const Profile p0 = initial_profile(cfg, g.n(), g.m(), 0);
  return run(g, p0.rho, p0.sigma, cfg.dynamics);
}

int cmd_simulate(const ExperimentConfig& cfg) {
  const GameOperator g = game_for_run(cfg, 0);
  const Profile p0 = initial_profile(cfg, g.n(), g.m(), 0);
  RunResult result = run(g, p0.rho, p0.sigma, cfg.dynamics);

  ensure_dir(cfg.output_dir);
  std::ostringstream csv;
  write_trajectory_csv(csv, result.trajectory);
  write_file(cfg.output_dir / "trajectory.csv", csv.str());

  Json report = report_to_json(result.report);
  if (result.error) report["error"] = result.error->what();
  write_file(cfg.output_dir / "report.json", dump(report));
  write_file(cfg.output_dir / "game.json", dump(game_to_json(g)));

  if (result.error) {
    std::cerr << "qpg simulate: " << result.error->what() << "\n";
    return exit_code::kNotConverged;
  }
  return result.report.converged ? exit_code::kOk : exit_code::kNotConverged;
}

// ---------------------------------------------------------------------------
// batch

BatchSummary summarize(const std::vector<BatchRow>& rows) {
  BatchSummary s;
  s.runs = static_cast<int>(rows.size());
  if (rows.empty()) return s;
  std::vector<double> acc;
  double iters = 0.0, exploit = 0.0;
  int converged = 0, rank1 = 0;
  for (const BatchRow& r : rows) {
    if (r.accuracy) acc.push_back(*r.accuracy);
    iters += r.iterations;
    exploit += r.final_exploitability;
    converged += r.converged ? 1 : 0;
    rank1 += (r.min_eig_rho < kRank1Threshold && r.min_eig_sigma < kRank1Threshold) ? 1 : 0;
    s.oracle_inconsistencies += r.oracle_inconsistent ? 1 : 0;
  }
  const double count = static_cast<double>(rows.size());
  if (!acc.empty()) {
    s.mean_accuracy = std::accumulate(acc.begin(), acc.end(), 0.0) / static_cast<double>(acc.size());
    double var = 0.0;
    for (double a : acc) var += (a - s.mean_accuracy) * (a - s.mean_accuracy);
    // population standard deviation over the runs
    s.std_accuracy = std::sqrt(var / static_cast<double>(acc.size()));
  }
  s.mean_iterations = iters / count;
  s.converged_fraction = converged / count;
  s.mean_final_exploitability = exploit / count;
  s.rank1_fraction = rank1 / count;
  return s;
}

BatchOutcome collect_batch(const ExperimentConfig& cfg) {
  BatchOutcome out;
  out.rows.resize(static_cast<std::size_t>(cfg.runs));
  parallel_for(cfg.runs, [&](int r) {
    const GameOperator g = game_for_run(cfg, r);
    const Profile p0 = initial_profile(cfg, g.n(), g.m(), r);
    DynamicsConfig dyn = cfg.dynamics;
    dyn.track_distance_to_final = false;
    const RunResult res = run(g, p0.rho, p0.sigma, dyn);
    if (res.error) throw *res.error;

    BatchRow row;
    row.run = r;
    row.seed = cfg.seed + static_cast<std::uint64_t>(cfg.fixed_game ? 0 : r);
    row.iterations = res.report.iterations;
    row.final_utility = res.report.final_utility;
    row.converged = res.report.converged;
    row.final_exploitability = res.report.final_exploitability;
    row.min_eig_rho = res.trajectory.back().min_eig_rho;
    row.min_eig_sigma = res.trajectory.back().min_eig_sigma;
    row.monotone = utility_monotone(res.trajectory);

    const OracleResult oracle = seesaw(g, row.seed, SeesawOptions{cfg.oracle_restarts});
    row.oracle_value = oracle.value;
    row.certified = oracle.certified_optimal;
    try {
      row.accuracy = accuracy(row.final_utility, oracle.value);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OracleInconsistency) throw;
      row.oracle_inconsistent = true;
    }
    out.rows[static_cast<std::size_t>(r)] = row;
  });
  out.summary = summarize(out.rows);
  return out;
}

namespace {

Json summary_to_json(const BatchSummary& s) {
  Json j;
  j["runs"] = s.runs;
  j["mean_accuracy"] = s.mean_accuracy;
  j["std_accuracy"] = s.std_accuracy;
  j["mean_iterations"] = s.mean_iterations;
  j["converged_fraction"] = s.converged_fraction;
  j["mean_final_exploitability"] = s.mean_final_exploitability;
  j["rank1_fraction"] = s.rank1_fraction;
  j["oracle_inconsistencies"] = s.oracle_inconsistencies;
  return j;
}

}  // namespace

int cmd_batch(const ExperimentConfig& cfg) {
  const BatchOutcome out = collect_batch(cfg);
  ensure_dir(cfg.output_dir);
  std::ostringstream csv;
  csv << "run,seed,accuracy,iterations,final_utility,oracle_value,certified,"
         "converged,final_exploitability,min_eig_rho,min_eig_sigma,oracle_inconsistent\n";
  for (const BatchRow& r : out.rows) {
    csv << r.run << ',' << r.seed << ',' << (r.accuracy ? format_csv_double(*r.accuracy) : "") << ','
        << r.iterations << ',' << format_csv_double(r.final_utility) << ',' << format_csv_double(r.oracle_value)
        << ',' << (r.certified ? 1 : 0) << ',' << (r.converged ? 1 : 0) << ','
        << format_csv_double(r.final_exploitability) << ',' << format_csv_double(r.min_eig_rho) << ','
        << format_csv_double(r.min_eig_sigma) << ',' << (r.oracle_inconsistent ? 1 : 0) << '\n';
  }
  write_file(cfg.output_dir / "runs.csv", csv.str());
  Json summary = summary_to_json(out.summary);
  summary["config"] = config_to_json(cfg);
  write_file(cfg.output_dir / "summary.json", dump(summary));
  if (out.summary.oracle_inconsistencies > 0) {
    std::cerr << "qpg batch: " << out.summary.oracle_inconsistencies << " run(s) exceeded the oracle value\n";
    return exit_code::kOracleInconsistency;
  }
  return exit_code::kOk;
}

// ---------------------------------------------------------------------------
// exploitability

ExploitabilityOutcome collect_exploitability(const ExperimentConfig& cfg) {
  ExploitabilityOutcome out;
  out.traces.resize(static_cast<std::size_t>(cfg.runs));
  parallel_for(cfg.runs, [&](int r) {
    const GameOperator g = game_for_run(cfg, r);
    const Profile p0 = initial_profile(cfg, g.n(), g.m(), r);
    DynamicsConfig dyn = cfg.dynamics;
    dyn.track_distance_to_final = false;
    const RunResult res = run(g, p0.rho, p0.sigma, dyn);
    if (res.error) throw *res.error;
    std::vector<double>& trace = out.traces[static_cast<std::size_t>(r)];
    trace.reserve(res.trajectory.size());
    for (const TrajectoryRecord& rec : res.trajectory) trace.push_back(rec.exploitability);
  });
  std::vector<double> finals;
  for (const auto& t : out.traces) finals.push_back(t.back());
  out.median_final = median(finals);
  out.above_threshold = static_cast<int>(std::count_if(finals.begin(), finals.end(),
                                                       [](double e) { return e > kExploitThreshold; }));
  return out;
}

int cmd_exploitability(const ExperimentConfig& cfg) {
  const ExploitabilityOutcome out = collect_exploitability(cfg);
  ensure_dir(cfg.output_dir);
  std::ostringstream csv;
  csv << "run,step,exploitability\n";
  for (std::size_t r = 0; r < out.traces.size(); ++r) {
    for (std::size_t s = 0; s < out.traces[r].size(); ++s) {
      csv << r << ',' << s << ',' << format_csv_double(out.traces[r][s]) << '\n';
    }
  }
  write_file(cfg.output_dir / "exploitability.csv", csv.str());
  Json footer;
  footer["runs"] = cfg.runs;
  footer["dynamics"] = std::string(to_string(cfg.dynamics.kind));
  footer["median_final_exploitability"] = out.median_final;
  footer["runs_above_1e-3"] = out.above_threshold;
  write_file(cfg.output_dir / "exploitability_summary.json", dump(footer));
  return exit_code::kOk;
}

// ---------------------------------------------------------------------------
// bloch

std::vector<BlochRow> collect_bloch(const ExperimentConfig& cfg) {
  if (cfg.n != 2 && cfg.m != 2) {
    throw Error(ErrorKind::UnsupportedDimension, "bloch: neither player has dimension 2");
  }
  std::vector<std::vector<BlochRow>> per_run(static_cast<std::size_t>(cfg.runs));
  parallel_for(cfg.runs, [&](int r) {
    const GameOperator g = game_for_run(cfg, r);
    const Profile p0 = initial_profile(cfg, g.n(), g.m(), r);
    DynamicsConfig dyn = cfg.dynamics;
    dyn.track_distance_to_final = false;
    const RunResult res = run(g, p0.rho, p0.sigma, dyn);
    if (res.error) throw *res.error;
    auto& rows = per_run[static_cast<std::size_t>(r)];
    for (const TrajectoryRecord& rec : res.trajectory) {
      if (rec.bloch_rho) rows.push_back({r, rec.step, 'A', *rec.bloch_rho});
      if (rec.bloch_sigma) rows.push_back({r, rec.step, 'B', *rec.bloch_sigma});
    }
  });
  std::vector<BlochRow> out;
  for (auto& rows : per_run) out.insert(out.end(), rows.begin(), rows.end());
  return out;
}

int cmd_bloch(const ExperimentConfig& cfg) {
  const std::vector<BlochRow> rows = collect_bloch(cfg);
  ensure_dir(cfg.output_dir);
  std::ostringstream csv;
  csv << "run,step,player,a1,a2,a3\n";
  for (const BlochRow& r : rows) {
    csv << r.run << ',' << r.step << ',' << r.player << ',' << format_csv_double(r.a[0]) << ','
        << format_csv_double(r.a[1]) << ',' << format_csv_double(r.a[2]) << '\n';
  }
  write_file(cfg.output_dir / "bloch.csv", csv.str());
  return exit_code::kOk;
}

// ---------------------------------------------------------------------------
// compare

std::vector<double> collect_compare(const ExperimentConfig& cfg) {
  const GameOperator g = game_for_run(cfg, 0);
  const Profile start{DensityMatrix::maximally_mixed(g.n()), DensityMatrix::maximally_mixed(g.m())};
  DynamicsConfig first = cfg.dynamics;
  DynamicsConfig second = cfg.dynamics;
  first.kind = cfg.compare_kinds[0];
  second.kind = cfg.compare_kinds[1];
  for (const DynamicsConfig* d : {&first, &second}) {
    d->validate();
    if (d->kind == DynamicsKind::LinQrepQ && d->step_size * g.lambda_max() > 0.5) {
      throw Error(ErrorKind::Config, "compare: step size too large for this game");
    }
  }
  Profile a = start, b = start;
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(cfg.dynamics.max_iters) + 1);
  dist.push_back(profile_distance(a.rho, a.sigma, b.rho, b.sigma));
  for (int k = 0; k < cfg.dynamics.max_iters; ++k) {
    a = step_once(g, a, first);
    b = step_once(g, b, second);
    dist.push_back(profile_distance(a.rho, a.sigma, b.rho, b.sigma));
  }
  return dist;
}

int cmd_compare(const ExperimentConfig& cfg) {
  const std::vector<double> dist = collect_compare(cfg);
  ensure_dir(cfg.output_dir);
  std::ostringstream csv;
  csv << "step,frobenius_distance_between_dynamics\n";
  for (std::size_t s = 0; s < dist.size(); ++s) csv << s << ',' << format_csv_double(dist[s]) << '\n';
  write_file(cfg.output_dir / "compare.csv", csv.str());
  return exit_code::kOk;
}

int run_command(const ExperimentConfig& cfg) {
  try {
    switch (cfg.command) {
      case Command::Simulate: return cmd_simulate(cfg);
      case Command::Batch: return cmd_batch(cfg);
      case Command::Exploitability: return cmd_exploitability(cfg);
      case Command::Bloch: return cmd_bloch(cfg);
      case Command::Compare: return cmd_compare(cfg);
    }
  } catch (const Error& e) {
    std::cerr << "qpg " << to_string(cfg.command) << ": " << e.what() << "\n";
    if (e.kind() == ErrorKind::OracleInconsistency) return exit_code::kOracleInconsistency;
    return exit_code::kIoOrConfig;
  } catch (const std::exception& e) {
    std::cerr << "qpg " << to_string(cfg.command) << ": " << e.what() << "\n";
    return exit_code::kIoOrConfig;
  }
  return exit_code::kIoOrConfig;
}

}  // namespace qpg
