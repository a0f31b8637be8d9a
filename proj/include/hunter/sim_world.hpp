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

// Synthetic stereo world: intruder trajectories, a stereo sensor model that
// produces point clouds through projection, pixel noise, quantisation and
// triangulation, clutter injection, and the closed-loop scenario runner.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hunter/aiming.hpp"
#include "hunter/cloud_pipeline.hpp"
#include "hunter/evaluation.hpp"
#include "hunter/tracker.hpp"

namespace hunter {

using Rng = std::mt19937_64;

enum class TrajectoryKind { figure8, constant_velocity, stationary };

std::string to_string(TrajectoryKind kind);
TrajectoryKind trajectory_kind_from_string(const std::string& s);

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::figure8;
  double plane_distance = 5.0;  // m, figure-8 plane depth
  double amplitude_x = 2.0;     // m
  double amplitude_y = 1.0;     // m
  double period = 10.0;         // s
  Point3d start{0.0, 0.0, 5.0};     // stationary / constant_velocity origin
  Point3d velocity{0.0, 0.0, 0.0};  // constant_velocity only

  void validate(const std::string& prefix = "trajectory.") const;
};

struct ClutterSpec {
  double false_blob_rate = 0.5;  // expected spurious blobs per frame
  int blob_points_min = 4;
  int blob_points_max = 19;
  double blob_spread = 0.15;  // m, per-axis standard deviation
  double dropout_probability = 0.02;

  void validate(const std::string& prefix = "clutter.") const;
};

/// Intruder body: uniformly sampled points on a sphere surface.
struct TargetSpec {
  int points = 100;
  double radius = 0.3;  // m

  void validate(const std::string& prefix = "target.") const;
};

struct StereoNoise {
  double pixel_sigma = 0.25;              // px, per coordinate
  double pixel_quantization = 1.0 / 16;   // px grid step
};

struct ScenarioConfig {
  CameraModeld camera = CameraModeld::defaults();
  PipelineParams pipeline;
  TrackerParams tracker;
  AimConfig aim;
  TrajectorySpec trajectory;
  ClutterSpec clutter;
  TargetSpec target;
  EvaluationParams evaluation;
  HunterGains hunter_gains;
  Point3d hunter_start = Point3d::Zero();  // frame W
  double hunter_start_yaw = 0.0;
  double duration = 10.0;  // s
  double pixel_noise_sigma = 0.25;
  double pixel_quantization = 1.0 / 16;
  double detection_delay = 0.0;  // s
  std::uint64_t seed = 0;
  bool hunter_control_enabled = false;

  /// Throws ConfigError with the dotted path of the offending field.
  void validate() const;

  StereoNoise noise() const { return {pixel_noise_sigma, pixel_quantization}; }
  std::size_t frame_count() const;
};

/// Intruder position at time t in frame W (the initial camera frame).
Point3d trajectory_position(double t, const TrajectorySpec& spec);

/// Gerono lemniscate x = Ax sin(2 pi t/T), y = Ay sin(4 pi t/T) at z = plane.
Point3d figure8(double t, const TrajectorySpec& spec);

/// Passes one camera-frame point through the stereo sensor: project, add
/// Gaussian pixel noise, quantise, reject out-of-image or out-of-range
/// correspondences, triangulate.
std::optional<Point3d> sense_point(const Point3d& p_c, const CameraModeld& cam,
                                   const StereoNoise& noise, Rng& rng);

PointCloud render_cloud(std::span<const Point3d> targets_c, const CameraModeld& cam,
                        const StereoNoise& noise, const TargetSpec& target,
                        const ClutterSpec& clutter, Rng& rng, double timestamp = 0.0);

struct FrameLog {
  double t = 0.0;
  std::vector<Point3d> gt_world;
  std::vector<Point3d> gt_camera;
  std::size_t cloud_points = 0;
  std::vector<Detection> detections;  // frame C
  TrackerSnapshot tracker;            // frame W
  std::optional<Track> best;
  HunterState hunter;  // pose the frame was sensed from
  std::optional<Point3d> aim_error;
  std::optional<PoseCommand> command;
  double processing_seconds = 0.0;  // wall clock, not part of any output file
};

struct ScenarioRun {
  std::vector<FrameLog> frames;
  std::vector<PointCloud> clouds;  // only with keep_clouds
};

ScenarioRun run_scenario(const ScenarioConfig& cfg, bool keep_clouds = false);

}  // namespace hunter
