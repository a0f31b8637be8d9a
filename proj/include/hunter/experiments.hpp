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

// Run-level evaluation and the experiment drivers behind the CLI: single
// runs, the three-plane detection table, parameter sweeps and the lag test.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hunter/evaluation.hpp"
#include "hunter/sim_world.hpp"

namespace hunter {

/// The per-frame facts the metrics need. Built from FrameLogs or read back
/// from a run directory.
struct RunRecord {
  double t = 0.0;
  Point3d gt_world = Point3d::Zero();
  Point3d gt_camera = Point3d::Zero();
  std::vector<Point3d> detections;  // frame C
  std::optional<std::int64_t> best_id;
  Point3d best_world = Point3d::Zero();
};

std::vector<RunRecord> to_records(const std::vector<FrameLog>& frames);

/// Reads frames.csv and detections.csv from a run directory.
std::vector<RunRecord> load_records(const std::filesystem::path& dir);

struct MetricsReport {
  std::size_t frames = 0;
  // Detection level.
  long tp = 0, fp = 0, fn = 0, gt = 0;
  double precision = 1.0;
  double recall = 1.0;
  bool precision_defined = true;
  std::optional<RmseReport> detection_rmse;  // frame C, matched detections
  // Tracking level, on the best (aiming) track.
  long track_tp = 0, track_fp = 0, track_fn = 0, idsw = 0;
  double mota = 1.0;
  std::optional<RmseReport> tracking_rmse;  // frame W
  std::optional<double> detection_lag;
  std::optional<double> tracking_lag;
};

MetricsReport evaluate_run(const std::vector<RunRecord>& records, const EvaluationParams& params,
                           double frame_period);

/// Pools counts and RMSE samples across runs; lags are averaged.
MetricsReport aggregate(std::span<const MetricsReport> reports);

std::string metrics_csv(const MetricsReport& m);
std::string metrics_text(const MetricsReport& m);

double mean_processing_ms(const std::vector<FrameLog>& frames);

/// Writes frames/detections/tracks/commands/metrics CSVs, metrics.txt and the
/// resolved config.json into `dir` (created if needed). With dump_clouds,
/// clouds go to `dir/clouds/frame_NNNNN.xyz`.
void write_run(const std::filesystem::path& dir, const ScenarioConfig& cfg, const ScenarioRun& run,
               const MetricsReport& metrics);

/// Runs fn(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

struct Table1Row {
  double distance = 0.0;
  MetricsReport metrics;
};

inline constexpr double kTable1Distances[] = {2.5, 5.0, 7.5};

std::vector<Table1Row> run_table1(const ScenarioConfig& base, std::span<const std::uint64_t> seeds,
                                  unsigned workers);
std::string table1_text(const std::vector<Table1Row>& rows);
std::string table1_csv(const std::vector<Table1Row>& rows);

/// Sets a TrackerParams/PipelineParams field by name (`r`, `tracker.r`,
/// `voxel_leaf`, ...). Unknown names throw ConfigError.
void set_parameter(ScenarioConfig& cfg, const std::string& name, double value);

struct SweepRow {
  std::string param;
  double value = 0.0;
  std::uint64_t seed = 0;
  double mota = 0.0;
  double rmse_total = 0.0;
};

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const std::string& param,
                                std::span<const double> values, std::span<const std::uint64_t> seeds,
                                unsigned workers);
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct LagResult {
  double injected_delay = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> detection_lag;
  std::optional<double> tracking_lag;
};

std::vector<LagResult> run_lagtest(const ScenarioConfig& base, double delay,
                                   std::span<const std::uint64_t> seeds, unsigned workers);
std::string lag_csv(const std::vector<LagResult>& rows);

}  // namespace hunter
