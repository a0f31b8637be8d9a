// Copyright 2026 The stereo_hunter Authors
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

// hunter_cli: run the synthetic stereo targeting scenarios and print or
// write their metrics.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "hunter/config.hpp"
#include "hunter/error.hpp"
#include "hunter/experiments.hpp"
#include "hunter/io.hpp"

namespace fs = std::filesystem;
using namespace hunter;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Options {
  std::string config;
  std::string out;
  std::string seeds;
  std::string sweep;
  double inject_delay = -1.0;
  bool dump_clouds = false;
  unsigned workers = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::uint64_t parse_seed(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || s.front() == '-') {
    throw ConfigError("--seeds", "bad seed '" + s + "'");
  }
  return v;
}

/// "0,3,7" or ranges "0-9", mixed.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split(text, ',')) {
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const auto lo = parse_seed(item.substr(0, dash));
      const auto hi = parse_seed(item.substr(dash + 1));
      if (hi < lo) throw ConfigError("--seeds", "empty range '" + item + "'");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(parse_seed(item));
    }
  }
  return seeds;
}

std::vector<std::uint64_t> seeds_or(const Options& o, std::vector<std::uint64_t> fallback) {
  return o.seeds.empty() ? fallback : parse_seeds(o.seeds);
}

std::vector<std::uint64_t> default_seed_list() {
  std::vector<std::uint64_t> s;
  for (std::uint64_t i = 0; i < 10; ++i) s.push_back(i);
  return s;
}

ScenarioConfig load(const Options& o) {
  return o.config.empty() ? ScenarioConfig{} : load_config(o.config);
}

unsigned workers(const Options& o) {
  if (o.workers > 0) return o.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

fs::path out_dir(const Options& o) {
  const fs::path dir = o.out.empty() ? fs::path("hunter_out") : fs::path(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

int cmd_run(const Options& o) {
  ScenarioConfig cfg = load(o);
  if (o.inject_delay >= 0) cfg.detection_delay = o.inject_delay;
  const auto seeds = seeds_or(o, {cfg.seed});
  cfg.validate();
  const fs::path dir = out_dir(o);

  for (const auto seed : seeds) {
    ScenarioConfig c = cfg;
    c.seed = seed;
    const auto run = run_scenario(c, o.dump_clouds);
    const auto metrics = evaluate_run(to_records(run.frames), c.evaluation, c.camera.frame_period());
    const fs::path target = seeds.size() == 1 ? dir : dir / ("seed_" + std::to_string(seed));
    write_run(target, c, run, metrics);
    std::cout << "seed " << seed << " -> " << target.string() << "\n"
              << metrics_text(metrics) << "mean processing   " << mean_processing_ms(run.frames)
              << " ms/frame\n";
  }
  return kExitOk;
}

int cmd_table1(const Options& o) {
  const ScenarioConfig cfg = load(o);
  const auto seeds = seeds_or(o, default_seed_list());
  const auto rows = run_table1(cfg, seeds, workers(o));
  const std::string text = table1_text(rows);
  const fs::path dir = out_dir(o);
  write_file_atomic(dir / "table1.csv", table1_csv(rows));
  write_file_atomic(dir / "metrics.txt", text);
  std::cout << text;
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  const ScenarioConfig cfg = load(o);
  const auto eq = o.sweep.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--sweep", "expected <param>=<v1,v2,...>");
  }
  const std::string param = o.sweep.substr(0, eq);
  std::vector<double> values;
  for (const auto& v : split(o.sweep.substr(eq + 1), ',')) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (v.empty() || used != v.size() || !std::isfinite(x)) {
      throw ConfigError("--sweep", "bad value '" + v + "'");
    }
    values.push_back(x);
  }
  const auto seeds = seeds_or(o, default_seed_list());
  const auto rows = run_sweep(cfg, param, values, seeds, workers(o));
  const fs::path dir = out_dir(o);
  write_file_atomic(dir / "sweep.csv", sweep_csv(rows));

  std::map<double, std::pair<double, double>> sums;  // value -> (mota, rmse)
  for (const auto& r : rows) {
    sums[r.value].first += r.mota;
    sums[r.value].second += r.rmse_total;
  }
  std::string text = param + "  mean MOTA  mean RMSE [m]\n";
  for (const auto& [value, s] : sums) {
    const double n = static_cast<double>(seeds.size());
    char line[128];
    std::snprintf(line, sizeof(line), "%8.3f  %9.5f  %13.4f\n", value, s.first / n, s.second / n);
    text += line;
  }
  write_file_atomic(dir / "metrics.txt", text);
  std::cout << text;
  return kExitOk;
}

int cmd_lagtest(const Options& o) {
  const ScenarioConfig cfg = load(o);
  const double delay = o.inject_delay >= 0 ? o.inject_delay : 0.15;
  const auto seeds = seeds_or(o, {cfg.seed});
  const auto rows = run_lagtest(cfg, delay, seeds, workers(o));
  const fs::path dir = out_dir(o);
  write_file_atomic(dir / "lag.csv", lag_csv(rows));

  std::string text = "seed  injected [s]  detection lag [s]  tracking lag [s]\n";
  for (const auto& r : rows) {
    char line[128];
    std::snprintf(line, sizeof(line), "%4llu  %12.4f  %17.4f  %16.4f\n",
                  static_cast<unsigned long long>(r.seed), r.injected_delay,
                  r.detection_lag.value_or(std::nan("")), r.tracking_lag.value_or(std::nan("")));
    text += line;
  }
  write_file_atomic(dir / "metrics.txt", text);
  std::cout << text;
  return kExitOk;
}

int cmd_report(const Options& o) {
  if (o.out.empty()) throw ConfigError("--out", "report needs the run directory");
  const fs::path dir(o.out);
  const ScenarioConfig cfg = fs::exists(dir / "config.json") ? load_config(dir / "config.json") : load(o);
  const auto metrics = evaluate_run(load_records(dir), cfg.evaluation, cfg.camera.frame_period());
  std::cout << metrics_text(metrics);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stereo UAV detection, tracking and aiming simulator"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Scenario config (JSON); defaults when omitted");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--seeds", o.seeds, "Seed list, e.g. 0,1,2 or 0-9");
    sub->add_option("--workers", o.workers, "Worker threads for multi-run commands");
  };

  auto* run = app.add_subcommand("run", "Run one scenario and write its logs and metrics");
  common(run);
  run->add_option("--inject-delay", o.inject_delay, "Artificial detection delay [s]");
  run->add_flag("--dump-clouds", o.dump_clouds, "Write every raw cloud as clouds/frame_NNNNN.xyz");

  auto* table1 = app.add_subcommand("table1", "Detection RMSE/precision/recall at 2.5, 5.0, 7.5 m");
  common(table1);

  auto* sweep = app.add_subcommand("sweep", "Sweep one tracker/pipeline parameter");
  common(sweep);
  sweep->add_option("--sweep", o.sweep, "<param>=<v1,v2,...>")->required();

  auto* lagtest = app.add_subcommand("lagtest", "Detection/tracking lag with injected delay");
  common(lagtest);
  lagtest->add_option("--inject-delay", o.inject_delay, "Artificial detection delay [s] (0.15)");

  auto* report = app.add_subcommand("report", "Recompute metrics from a run directory");
  common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    if (table1->parsed()) return cmd_table1(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (lagtest->parsed()) return cmd_lagtest(o);
    if (report->parsed()) return cmd_report(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
