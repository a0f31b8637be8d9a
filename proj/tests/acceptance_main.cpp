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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Every threshold is a named constant below.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hunter/cloud_pipeline.hpp"
#include "hunter/experiments.hpp"
#include "hunter/kalman.hpp"
#include "hunter/logs.hpp"
#include "hunter/stereo_geometry.hpp"
#include "hunter/tracker.hpp"
#include "oracles.hpp"

using namespace hunter;

namespace {

// Criterion 1
constexpr double kMinPrecision = 0.99;
constexpr double kMinRecall = 0.95;
constexpr double kMaxAxisRmse = 0.25;  // m
constexpr double kMaxTable1Seconds = 120.0;
// Criterion 2
constexpr double kMaxTrackingRmseAtR1 = 0.18;  // m
constexpr double kArgminLow = 0.5, kArgminHigh = 2.0;
constexpr double kSweepR[] = {0.5, 1.0, 2.0, 5.0};
// Criterion 3
constexpr double kMinMota = 0.999;
// Criterion 4
constexpr double kInjectedDelay = 0.15;                 // s
constexpr double kLagTolerance = 1.0 / 30.0 + 1e-9;     // one frame period plus float slack
// Criterion 5
constexpr int kRoundTripPoints = 10000;
constexpr double kRoundTripTolerance = 1e-9;  // m
// Criterion 6
constexpr int kClusterClouds = 200;
constexpr std::size_t kMaxCloudPoints = 500;
// Criterion 7
constexpr int kCostMatrices = 500;
constexpr int kMaxAssignmentDim = 6;
constexpr double kAssignmentTolerance = 1e-9;
// Criterion 8
constexpr int kFuzzSequences = 10000;
constexpr double kSymmetryTolerance = 1e-9;
constexpr double kMinEigenvalue = -1e-9;
constexpr double kMaxCaRmse = 1e-3;  // m
constexpr int kCaWarmupFrames = 10;
// Criterion 10
constexpr double kMaxAimError = 0.05;  // m
constexpr double kClosedLoopSeconds = 10.0;

const std::vector<std::uint64_t> kSeeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("ACCEPTANCE %2d %s  %s  [%s]\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_table1(ScenarioConfig{}, kSeeds, workers());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool pass = rows.size() == 3 && seconds <= kMaxTable1Seconds;
  std::string detail;
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    const Point3d axis = m.detection_rmse ? m.detection_rmse->per_axis : Point3d::Constant(INFINITY);
    pass = pass && m.precision >= kMinPrecision && m.recall >= kMinRecall &&
           axis.maxCoeff() <= kMaxAxisRmse;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.1fm: P=%.4f R=%.4f rmse=(%.3f,%.3f,%.3f); ", r.distance, m.precision,
                  m.recall, axis.x(), axis.y(), axis.z());
    detail += buf;
  }
  if (rows.size() == 3) {
    const double x_near = rows[0].metrics.detection_rmse ? rows[0].metrics.detection_rmse->per_axis.x() : INFINITY;
    const double x_far = rows[2].metrics.detection_rmse ? rows[2].metrics.detection_rmse->per_axis.x() : -INFINITY;
    pass = pass && x_far > x_near;
    detail += "X 7.5m > X 2.5m: " + std::string(x_far > x_near ? "yes" : "no");
  }
  detail += fmt("; %.1f s", seconds);
  report(1, pass, "three-plane detection table (precision, recall, RMSE, depth trend, runtime)", detail);
}

std::vector<SweepRow> r_sweep() {
  return run_sweep(ScenarioConfig{}, "r", kSweepR, kSeeds, workers());
}

void criterion2(const std::vector<SweepRow>& rows) {
  std::map<double, std::pair<double, int>> mean;
  for (const auto& r : rows) {
    mean[r.value].first += r.rmse_total;
    mean[r.value].second += 1;
  }
  double best_r = 0, best = INFINITY, at_one = INFINITY;
  std::string detail;
  for (const auto& [r, acc] : mean) {
    const double m = acc.first / acc.second;
    if (m < best) best = m, best_r = r;
    if (r == 1.0) at_one = m;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "r=%.1f: %.4f; ", r, m);
    detail += buf;
  }
  const bool pass = at_one <= kMaxTrackingRmseAtR1 && best_r >= kArgminLow && best_r <= kArgminHigh;
  detail += fmt("argmin r=%.1f", best_r);
  report(2, pass, "best-track RMSE at r=1 and r-sweep minimiser", detail);
}

void criterion3(const std::vector<SweepRow>& rows) {
  double worst = INFINITY;
  for (const auto& r : rows) worst = std::min(worst, r.mota);

  double quiet_worst = INFINITY;
  for (const auto seed : kSeeds) {
    ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.pixel_noise_sigma = 0;
    cfg.pixel_quantization = 0;
    cfg.clutter.false_blob_rate = 0;
    cfg.clutter.dropout_probability = 0;
    const auto m = evaluate_run(to_records(run_scenario(cfg).frames), cfg.evaluation, cfg.camera.frame_period());
    quiet_worst = std::min(quiet_worst, m.mota);
  }
  const bool pass = worst > kMinMota && quiet_worst == 1.0;
  report(3, pass, "MOTA over the r-sweep and in the noiseless clutter-free case",
         fmt("min sweep MOTA %.6f", worst) + fmt(", noiseless MOTA %.6f", quiet_worst));
}

void criterion4() {
  const auto rows = run_lagtest(ScenarioConfig{}, kInjectedDelay, kSeeds, workers());
  bool pass = rows.size() == kSeeds.size();
  double worst = 0;
  for (const auto& r : rows) {
    if (!r.detection_lag || !r.tracking_lag) {
      pass = false;
      continue;
    }
    worst = std::max({worst, std::abs(*r.detection_lag - kInjectedDelay), std::abs(*r.tracking_lag - kInjectedDelay)});
  }
  pass = pass && worst <= kLagTolerance;
  report(4, pass, "detection and tracking lag under 0.15 s injected delay",
         fmt("max |lag - 0.15| = %.4f s", worst));
}

void criterion5() {
  const auto cam = CameraModeld::defaults();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> z(cam.min_depth, cam.max_depth), s(-1, 1);
  double worst = 0;
  for (int i = 0; i < kRoundTripPoints; ++i) {
    const double depth = z(rng);
    const Point3d p(s(rng) * depth, s(rng) * depth, depth);
    worst = std::max(worst, (triangulate(project(p, cam), cam) - p).norm());
  }
  report(5, worst < kRoundTripTolerance, "stereo projection/triangulation round trip",
         fmt("max error %.3g m", worst));
}

void criterion6() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> blobs(0, 12), pts(1, 80);
  std::uniform_real_distribution<double> u(-4, 4), spread(0.02, 0.4);
  const PipelineParams params;
  int mismatches = 0;
  for (int c = 0; c < kClusterClouds; ++c) {
    PointCloud cloud;
    const int nb = blobs(rng);
    for (int b = 0; b < nb; ++b) {
      std::normal_distribution<double> g(0, spread(rng));
      const Point3d centre(u(rng), u(rng), 6 + u(rng));
      const int n = pts(rng);
      for (int i = 0; i < n && cloud.size() < kMaxCloudPoints; ++i) {
        cloud.points.push_back(centre + Point3d(g(rng), g(rng), g(rng)));
      }
    }
    std::set<std::vector<std::size_t>> got;
    for (const auto& cl : euclidean_cluster(cloud, params)) got.insert(cl.indices);
    const auto expected = oracle::clusters(cloud.points, params.cluster_tolerance, params.min_cluster_size,
                                           params.max_cluster_size);
    mismatches += got != expected;
  }
  report(6, mismatches == 0, "Euclidean clustering equals union-find oracle",
         std::to_string(mismatches) + " of " + std::to_string(kClusterClouds) + " clouds differ");
}

void criterion7() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, kMaxAssignmentDim);
  std::uniform_real_distribution<double> cost(0, 10);
  int mismatches = 0;
  for (int k = 0; k < kCostMatrices; ++k) {
    Eigen::MatrixXd c(dim(rng), dim(rng));
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j) c(i, j) = cost(rng);
    const auto a = associate_costs(c, std::numeric_limits<double>::infinity());
    double total = 0;
    for (const auto& [t, d] : a.matches) total += c(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(d));
    mismatches += std::abs(total - oracle::min_assignment_cost(c)) > kAssignmentTolerance;
  }
  report(7, mismatches == 0, "assignment cost equals exhaustive permutation minimum",
         std::to_string(mismatches) + " of " + std::to_string(kCostMatrices) + " matrices differ");
}

void criterion8() {
  using Model = ConstantAccelerationModel<double>;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> dt(1e-3, 0.5), scale(1e-3, 10), u(-20, 20);
  std::uniform_int_distribution<int> coin(0, 1), len(1, 20);
  double worst_asym = 0, worst_eig = INFINITY;
  for (int s = 0; s < kFuzzSequences; ++s) {
    auto st = make_state(Point3d(u(rng), u(rng), u(rng)), scale(rng));
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      st = coin(rng) ? kalman_predict(st, dt(rng), scale(rng))
                     : kalman_update(st, Point3d(u(rng), u(rng), u(rng)), scale(rng));
      worst_asym = std::max(worst_asym, (st.covariance - st.covariance.transpose()).cwiseAbs().maxCoeff());
      const double e = Eigen::SelfAdjointEigenSolver<Model::StateMatrix>(st.covariance, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .minCoeff();
      worst_eig = std::min(worst_eig, e);
    }
  }
  const bool psd = worst_asym <= kSymmetryTolerance && worst_eig >= kMinEigenvalue;

  const TrackerParams params;
  auto truth = [](double t) -> Point3d {
    return Point3d(1.0, -0.5, 5.0) + Point3d(0.8, 0.3, -0.4) * t + 0.5 * Point3d(0.2, -0.1, 0.05) * t * t;
  };
  TrackerSnapshot snap;
  double sq = 0;
  int n = 0;
  bool single = true;
  for (int k = 0; k <= 90; ++k) {
    const double t = k / 30.0;
    snap = step(snap, {Detection{truth(t), t, 50}}, t, params);
    single = single && snap.tracks.size() == 1;
    if (k >= kCaWarmupFrames && !snap.tracks.empty()) {
      sq += (snap.tracks[0].position() - truth(t)).squaredNorm();
      ++n;
    }
  }
  const double ca_rmse = std::sqrt(sq / n);

  TrackerSnapshot d;
  int k = 0;
  for (; k < 30; ++k) d = step(d, {Detection{truth(k / 30.0), k / 30.0, 50}}, k / 30.0, params);
  const auto id = d.tracks.at(0).id;
  for (int m = 0; m < params.max_misses - 1; ++m, ++k) d = step(d, {}, k / 30.0, params);
  const bool survived = d.tracks.size() == 1 && d.tracks[0].id == id;

  const bool pass = psd && single && ca_rmse < kMaxCaRmse && survived;
  report(8, pass, "Kalman covariance PSD, CA tracking accuracy, dropout survival",
         fmt("max asym %.2g", worst_asym) + fmt(", min eig %.2g", worst_eig) + fmt(", CA rmse %.2g m", ca_rmse) +
             ", survived " + std::to_string(params.max_misses - 1) + " misses: " + (survived ? "yes" : "no"));
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion9() {
  namespace fs = std::filesystem;
  std::vector<ScenarioConfig> scenarios(4);
  scenarios[1].hunter_control_enabled = true;
  scenarios[1].seed = 3;
  scenarios[2].clutter.false_blob_rate = 4;
  scenarios[2].clutter.blob_points_max = 40;
  scenarios[2].seed = 99;
  scenarios[3].trajectory.kind = TrajectoryKind::constant_velocity;
  scenarios[3].trajectory.velocity = {0.2, 0.0, 0.3};
  scenarios[3].detection_delay = 0.1;
  scenarios[3].seed = 12345678901234ULL;

  const fs::path root = fs::temp_directory_path() / "hunter_acceptance_determinism";
  int differing = 0;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    for (const char* side : {"a", "b"}) {
      const auto run = run_scenario(scenarios[i]);
      const auto m = evaluate_run(to_records(run.frames), scenarios[i].evaluation,
                                  scenarios[i].camera.frame_period());
      write_run(root / std::to_string(i) / side, scenarios[i], run, m);
    }
    for (const char* f : {"frames.csv", "detections.csv", "tracks.csv", "commands.csv", "metrics.csv"}) {
      differing += read_file(root / std::to_string(i) / "a" / f) != read_file(root / std::to_string(i) / "b" / f);
    }
  }
  fs::remove_all(root);
  report(9, differing == 0, "equal seeds give byte-identical CSV outputs",
         std::to_string(differing) + " differing files over " + std::to_string(scenarios.size()) + " scenarios");
}

void criterion10() {
  const std::vector<Point3d> intruders = {{0, 0, 5}, {1.5, -0.5, 6}, {-2, 1, 4}, {0.5, 2, 8}};
  double worst = 0;
  for (const auto& p : intruders) {
    ScenarioConfig cfg;
    cfg.trajectory.kind = TrajectoryKind::stationary;
    cfg.trajectory.start = p;
    cfg.pixel_noise_sigma = 0;
    cfg.pixel_quantization = 0;
    cfg.clutter.false_blob_rate = 0;
    cfg.clutter.dropout_probability = 0;
    cfg.hunter_control_enabled = true;
    cfg.duration = kClosedLoopSeconds;
    const auto run = run_scenario(cfg);
    const auto& last = run.frames.back();
    worst = std::max(worst, last.aim_error ? last.aim_error->norm() : INFINITY);
  }
  report(10, worst < kMaxAimError, "closed-loop aiming on a stationary intruder",
         fmt("max final |e_x| %.2g m", worst));
}

}  // namespace

int main() {
  criterion1();
  const auto sweep = r_sweep();
  criterion2(sweep);
  criterion3(sweep);
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d of 10 acceptance criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
