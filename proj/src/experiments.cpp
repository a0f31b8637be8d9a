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

#include "hunter/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "hunter/config.hpp"
#include "hunter/error.hpp"
#include "hunter/io.hpp"
#include "hunter/logs.hpp"

namespace hunter {
namespace {

std::string fixed(double v, int decimals = 3) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

double opt(const std::optional<double>& v) { return v.value_or(std::nan("")); }

template <typename Fn>
std::optional<RmseReport> try_rmse(Fn&& fn) {
  try {
    return fn();
  } catch (const InsufficientData&) {
    return std::nullopt;
  }
}

template <typename Fn>
std::optional<double> try_lag(Fn&& fn) {
  try {
    return fn();
  } catch (const InsufficientData&) {
    return std::nullopt;
  } catch (const UndefinedMetric&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<RunRecord> to_records(const std::vector<FrameLog>& frames) {
  std::vector<RunRecord> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    RunRecord r;
    r.t = f.t;
    r.gt_world = f.gt_world.front();
    r.gt_camera = f.gt_camera.front();
    for (const auto& d : f.detections) r.detections.push_back(d.position);
    if (f.best) {
      r.best_id = f.best->id;
      r.best_world = f.best->position();
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RunRecord> load_records(const std::filesystem::path& dir) {
  const CsvTable frames = CsvTable::load(dir / "frames.csv");
  const CsvTable dets = CsvTable::load(dir / "detections.csv");

  std::map<double, std::vector<Point3d>> by_time;
  {
    const auto t = dets.column("t"), x = dets.column("x"), y = dets.column("y"), z = dets.column("z");
    for (std::size_t i = 0; i < dets.rows(); ++i) {
      by_time[dets.number(i, t)].emplace_back(dets.number(i, x), dets.number(i, y), dets.number(i, z));
    }
  }

  auto col3 = [&](const char* a, const char* b, const char* c) {
    return std::array<std::size_t, 3>{frames.column(a), frames.column(b), frames.column(c)};
  };
  const auto t_col = frames.column("t");
  const auto gt = col3("gt_x", "gt_y", "gt_z");
  const auto gtc = col3("gtc_x", "gtc_y", "gtc_z");
  const auto best = col3("best_x", "best_y", "best_z");
  const auto best_id = frames.column("best_id");

  std::vector<RunRecord> out;
  out.reserve(frames.rows());
  for (std::size_t i = 0; i < frames.rows(); ++i) {
    auto vec = [&](const std::array<std::size_t, 3>& c) {
      return Point3d(frames.number(i, c[0]), frames.number(i, c[1]), frames.number(i, c[2]));
    };
    RunRecord r;
    r.t = frames.number(i, t_col);
    r.gt_world = vec(gt);
    r.gt_camera = vec(gtc);
    if (auto it = by_time.find(r.t); it != by_time.end()) r.detections = it->second;
    const auto id = static_cast<std::int64_t>(frames.number(i, best_id));
    if (id >= 0) {
      r.best_id = id;
      r.best_world = vec(best);
    }
    out.push_back(std::move(r));
  }
  return out;
}

MetricsReport evaluate_run(const std::vector<RunRecord>& records, const EvaluationParams& params,
                           double frame_period) {
  MetricsReport m;
  m.frames = records.size();

  std::vector<FrameMatch> det_matches;
  TimedSeries gt_c, matched_det, gt_w, best_w;
  std::vector<IdentityFrame> id_frames;
  det_matches.reserve(records.size());

  for (const auto& r : records) {
    const Point3d gt[] = {r.gt_camera};
    FrameMatch fm = match_frame(gt, r.detections, params.match_radius);
    fm.t = r.t;
    gt_c.push_back({r.t, r.gt_camera});
    for (const auto& pair : fm.pairs) matched_det.push_back({r.t, r.detections[pair.hyp]});
    det_matches.push_back(std::move(fm));

    IdentityFrame idf;
    idf.t = r.t;
    idf.gt = {r.gt_world};
    if (r.best_id) {
      idf.hyps = {r.best_world};
      idf.hyp_ids = {*r.best_id};
      best_w.push_back({r.t, r.best_world});
    }
    gt_w.push_back({r.t, r.gt_world});
    id_frames.push_back(std::move(idf));
  }

  for (const auto& f : det_matches) {
    m.tp += f.tp;
    m.fp += f.fp;
    m.fn += f.fn;
    m.gt += f.gt;
  }
  const auto pr = precision_recall(det_matches);
  m.precision = pr.precision;
  m.recall = pr.recall;
  m.precision_defined = pr.precision_defined;

  const auto track_matches = match_sequence(id_frames, params.match_radius);
  for (const auto& f : track_matches) {
    m.track_tp += f.tp;
    m.track_fp += f.fp;
    m.track_fn += f.fn;
    m.idsw += f.idsw;
  }
  m.mota = mota(track_matches);

  const double half = 0.5 * frame_period;
  m.detection_rmse = try_rmse([&] { return rmse(matched_det, gt_c, half); });
  m.tracking_rmse = try_rmse([&] { return rmse(best_w, gt_w, half); });
  m.detection_lag = try_lag([&] { return axis_median_lag(gt_c, matched_det, params.max_lag, frame_period); });
  m.tracking_lag = try_lag([&] { return axis_median_lag(gt_w, best_w, params.max_lag, frame_period); });
  return m;
}

MetricsReport aggregate(std::span<const MetricsReport> reports) {
  MetricsReport m;
  std::vector<RmseReport> det, trk;
  double det_lag = 0.0, trk_lag = 0.0;
  int n_det_lag = 0, n_trk_lag = 0;
  for (const auto& r : reports) {
    m.frames += r.frames;
    m.tp += r.tp;
    m.fp += r.fp;
    m.fn += r.fn;
    m.gt += r.gt;
    m.track_tp += r.track_tp;
    m.track_fp += r.track_fp;
    m.track_fn += r.track_fn;
    m.idsw += r.idsw;
    if (r.detection_rmse) det.push_back(*r.detection_rmse);
    if (r.tracking_rmse) trk.push_back(*r.tracking_rmse);
    if (r.detection_lag) det_lag += *r.detection_lag, ++n_det_lag;
    if (r.tracking_lag) trk_lag += *r.tracking_lag, ++n_trk_lag;
  }
  if (m.gt == 0) throw UndefinedMetric("aggregate: no ground-truth objects");
  m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  m.precision_defined = m.tp + m.fp > 0;
  m.precision = m.precision_defined ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 1.0;
  m.mota = 1.0 - static_cast<double>(m.track_fn + m.track_fp + m.idsw) / static_cast<double>(m.gt);
  if (!det.empty()) m.detection_rmse = pool_rmse(det);
  if (!trk.empty()) m.tracking_rmse = pool_rmse(trk);
  if (n_det_lag) m.detection_lag = det_lag / n_det_lag;
  if (n_trk_lag) m.tracking_lag = trk_lag / n_trk_lag;
  return m;
}

std::string metrics_csv(const MetricsReport& m) {
  const double nan = std::nan("");
  const RmseReport none{Point3d(nan, nan, nan), nan, 0};
  const RmseReport det = m.detection_rmse.value_or(none);
  const RmseReport trk = m.tracking_rmse.value_or(none);
  std::ostringstream os;
  os << "frames,gt,tp,fp,fn,precision,recall,det_rmse_x,det_rmse_y,det_rmse_z,det_rmse_total,"
        "track_tp,track_fp,track_fn,idsw,mota,track_rmse_x,track_rmse_y,track_rmse_z,"
        "track_rmse_total,detection_lag,tracking_lag\n";
  os << m.frames << ',' << m.gt << ',' << m.tp << ',' << m.fp << ',' << m.fn << ','
     << format_double(m.precision) << ',' << format_double(m.recall);
  for (int i = 0; i < 3; ++i) os << ',' << format_double(det.per_axis(i));
  os << ',' << format_double(det.total) << ',' << m.track_tp << ',' << m.track_fp << ','
     << m.track_fn << ',' << m.idsw << ',' << format_double(m.mota);
  for (int i = 0; i < 3; ++i) os << ',' << format_double(trk.per_axis(i));
  os << ',' << format_double(trk.total) << ',' << format_double(opt(m.detection_lag)) << ','
     << format_double(opt(m.tracking_lag)) << '\n';
  return os.str();
}

std::string metrics_text(const MetricsReport& m) {
  const double nan = std::nan("");
  const RmseReport none{Point3d(nan, nan, nan), nan, 0};
  const RmseReport det = m.detection_rmse.value_or(none);
  const RmseReport trk = m.tracking_rmse.value_or(none);
  std::ostringstream os;
  os << "frames            " << m.frames << "\n"
     << "                   " << pad("X", 8) << pad("Y", 8) << pad("Z", 8) << pad("total", 8) << "\n"
     << "detection RMSE [m] " << pad(fixed(det.per_axis.x()), 8) << pad(fixed(det.per_axis.y()), 8)
     << pad(fixed(det.per_axis.z()), 8) << pad(fixed(det.total), 8) << "\n"
     << "tracking RMSE [m]  " << pad(fixed(trk.per_axis.x()), 8) << pad(fixed(trk.per_axis.y()), 8)
     << pad(fixed(trk.per_axis.z()), 8) << pad(fixed(trk.total), 8) << "\n"
     << "precision          " << fixed(m.precision) << (m.precision_defined ? "" : " (no detections)")
     << "\n"
     << "recall             " << fixed(m.recall) << "\n"
     << "MOTA               " << fixed(m.mota, 4) << "  (FN " << m.track_fn << ", FP " << m.track_fp
     << ", IDSW " << m.idsw << ")\n"
     << "detection lag [s]  " << fixed(opt(m.detection_lag)) << "\n"
     << "tracking lag [s]   " << fixed(opt(m.tracking_lag)) << "\n";
  return os.str();
}

double mean_processing_ms(const std::vector<FrameLog>& frames) {
  if (frames.empty()) return 0.0;
  double total = 0.0;
  for (const auto& f : frames) total += f.processing_seconds;
  return 1e3 * total / static_cast<double>(frames.size());
}

void write_run(const std::filesystem::path& dir, const ScenarioConfig& cfg, const ScenarioRun& run,
               const MetricsReport& metrics) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());

  write_file_atomic(dir / "config.json", dump_config(cfg));
  write_file_atomic(dir / "frames.csv", frames_csv(run.frames));
  write_file_atomic(dir / "detections.csv", detections_csv(run.frames));
  write_file_atomic(dir / "tracks.csv", tracks_csv(run.frames));
  write_file_atomic(dir / "commands.csv", commands_csv(run.frames));
  write_file_atomic(dir / "metrics.csv", metrics_csv(metrics));
  write_file_atomic(dir / "metrics.txt", metrics_text(metrics));

  if (!run.clouds.empty()) {
    const auto cloud_dir = dir / "clouds";
    std::filesystem::create_directories(cloud_dir, ec);
    if (ec) throw IoError("cannot create " + cloud_dir.string());
    for (std::size_t i = 0; i < run.clouds.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%05zu.xyz", i);
      save_xyz(cloud_dir / name, run.clouds[i]);
    }
  }
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<Table1Row> run_table1(const ScenarioConfig& base, std::span<const std::uint64_t> seeds,
                                  unsigned workers) {
  constexpr std::size_t kRows = std::size(kTable1Distances);
  const std::size_t cells = kRows * seeds.size();
  std::vector<MetricsReport> reports(cells);
  parallel_for(cells, workers, [&](std::size_t i) {
    ScenarioConfig cfg = base;
    cfg.trajectory.kind = TrajectoryKind::figure8;
    cfg.trajectory.plane_distance = kTable1Distances[i / seeds.size()];
    cfg.seed = seeds[i % seeds.size()];
    cfg.hunter_control_enabled = false;
    const auto run = run_scenario(cfg);
    reports[i] = evaluate_run(to_records(run.frames), cfg.evaluation, cfg.camera.frame_period());
  });

  std::vector<Table1Row> rows;
  for (std::size_t r = 0; r < kRows; ++r) {
    rows.push_back({kTable1Distances[r],
                    aggregate(std::span(reports).subspan(r * seeds.size(), seeds.size()))});
  }
  return rows;
}

std::string table1_text(const std::vector<Table1Row>& rows) {
  std::ostringstream os;
  os << pad("Distance", 9) << pad("RMSE X", 9) << pad("RMSE Y", 9) << pad("RMSE Z", 9)
     << pad("Precision", 11) << pad("Recall", 9) << "\n";
  os << pad("[m]", 9) << pad("[m]", 9) << pad("[m]", 9) << pad("[m]", 9) << pad("", 11) << pad("", 9)
     << "\n";
  for (const auto& row : rows) {
    const auto& m = row.metrics;
    const Point3d e = m.detection_rmse ? m.detection_rmse->per_axis : Point3d::Constant(std::nan(""));
    os << pad(fixed(row.distance, 1), 9) << pad(fixed(e.x()), 9) << pad(fixed(e.y()), 9)
       << pad(fixed(e.z()), 9) << pad(fixed(m.precision), 11) << pad(fixed(m.recall), 9) << "\n";
  }
  return os.str();
}

std::string table1_csv(const std::vector<Table1Row>& rows) {
  std::string out = "distance,rmse_x,rmse_y,rmse_z,rmse_total,precision,recall,tp,fp,fn\n";
  for (const auto& row : rows) {
    const auto& m = row.metrics;
    const double nan = std::nan("");
    const RmseReport e = m.detection_rmse.value_or(RmseReport{Point3d(nan, nan, nan), nan, 0});
    out += format_double(row.distance) + ',' + format_double(e.per_axis.x()) + ',' +
           format_double(e.per_axis.y()) + ',' + format_double(e.per_axis.z()) + ',' +
           format_double(e.total) + ',' + format_double(m.precision) + ',' +
           format_double(m.recall) + ',' + std::to_string(m.tp) + ',' + std::to_string(m.fp) + ',' +
           std::to_string(m.fn) + '\n';
  }
  return out;
}

void set_parameter(ScenarioConfig& cfg, const std::string& name, double value) {
  const std::string key = name.substr(name.find('.') == std::string::npos ? 0 : name.find('.') + 1);
  const std::string section = name.find('.') == std::string::npos ? "" : name.substr(0, name.find('.'));
  auto count = [&](const char* field) {
    if (!(value >= 0) || std::floor(value) != value) {
      throw ConfigError(std::string(field), "expects a non-negative integer");
    }
    return static_cast<std::size_t>(value);
  };

  if (section.empty() || section == "tracker") {
    if (key == "r") return void(cfg.tracker.r = value);
    if (key == "measurement_variance") return void(cfg.tracker.measurement_variance = value);
    if (key == "q") return void(cfg.tracker.q = value);
    if (key == "p") return void(cfg.tracker.p = value);
    if (key == "eps_max") return void(cfg.tracker.eps_max = value);
    if (key == "max_misses") return void(cfg.tracker.max_misses = static_cast<int>(count("tracker.max_misses")));
  }
  if (section.empty() || section == "pipeline") {
    if (key == "voxel_leaf") return void(cfg.pipeline.voxel_leaf = value);
    if (key == "max_range") return void(cfg.pipeline.max_range = value);
    if (key == "cluster_tolerance") return void(cfg.pipeline.cluster_tolerance = value);
    if (key == "min_cluster_size") return void(cfg.pipeline.min_cluster_size = count("pipeline.min_cluster_size"));
    if (key == "max_cluster_size") return void(cfg.pipeline.max_cluster_size = count("pipeline.max_cluster_size"));
  }
  throw ConfigError("--sweep", "unknown parameter '" + name + "'");
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const std::string& param,
                                std::span<const double> values, std::span<const std::uint64_t> seeds,
                                unsigned workers) {
  // Validate every cell up front so a bad value fails before any work.
  for (double v : values) {
    ScenarioConfig cfg = base;
    set_parameter(cfg, param, v);
    cfg.validate();
  }

  const std::size_t cells = values.size() * seeds.size();
  std::vector<SweepRow> rows(cells);
  parallel_for(cells, workers, [&](std::size_t i) {
    ScenarioConfig cfg = base;
    const double value = values[i / seeds.size()];
    set_parameter(cfg, param, value);
    cfg.seed = seeds[i % seeds.size()];
    const auto run = run_scenario(cfg);
    const auto m = evaluate_run(to_records(run.frames), cfg.evaluation, cfg.camera.frame_period());
    rows[i] = {param, value, cfg.seed, m.mota,
               m.tracking_rmse ? m.tracking_rmse->total : std::nan("")};
  });
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.value, a.seed) < std::tie(b.value, b.seed);
  });
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "param,value,seed,mota,rmse_total\n";
  for (const auto& r : rows) {
    out += r.param + ',' + format_double(r.value) + ',' + std::to_string(r.seed) + ',' +
           format_double(r.mota) + ',' + format_double(r.rmse_total) + '\n';
  }
  return out;
}

std::vector<LagResult> run_lagtest(const ScenarioConfig& base, double delay,
                                   std::span<const std::uint64_t> seeds, unsigned workers) {
  std::vector<LagResult> rows(seeds.size());
  parallel_for(seeds.size(), workers, [&](std::size_t i) {
    ScenarioConfig cfg = base;
    cfg.trajectory.kind = TrajectoryKind::figure8;
    cfg.detection_delay = delay;
    cfg.hunter_control_enabled = false;
    cfg.seed = seeds[i];
    const auto run = run_scenario(cfg);
    const auto m = evaluate_run(to_records(run.frames), cfg.evaluation, cfg.camera.frame_period());
    rows[i] = {delay, cfg.seed, m.detection_lag, m.tracking_lag};
  });
  return rows;
}

std::string lag_csv(const std::vector<LagResult>& rows) {
  std::string out = "injected_delay,seed,detection_lag,tracking_lag\n";
  for (const auto& r : rows) {
    out += format_double(r.injected_delay) + ',' + std::to_string(r.seed) + ',' +
           format_double(opt(r.detection_lag)) + ',' + format_double(opt(r.tracking_lag)) + '\n';
  }
  return out;
}

}  // namespace hunter
