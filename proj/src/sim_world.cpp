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

#include "hunter/sim_world.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "hunter/error.hpp"

namespace hunter {

std::string to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::figure8: return "figure8";
    case TrajectoryKind::constant_velocity: return "constant_velocity";
    case TrajectoryKind::stationary: return "stationary";
  }
  return "unknown";
}

TrajectoryKind trajectory_kind_from_string(const std::string& s) {
  if (s == "figure8") return TrajectoryKind::figure8;
  if (s == "constant_velocity") return TrajectoryKind::constant_velocity;
  if (s == "stationary") return TrajectoryKind::stationary;
  throw ConfigError("trajectory.kind", "unknown kind '" + s + "'");
}

void TrajectorySpec::validate(const std::string& prefix) const {
  if (!(period > 0)) throw ConfigError(prefix + "period", "must be > 0");
  if (!(amplitude_x >= 0)) throw ConfigError(prefix + "amplitude_x", "must be >= 0");
  if (!(amplitude_y >= 0)) throw ConfigError(prefix + "amplitude_y", "must be >= 0");
  if (!std::isfinite(plane_distance)) throw ConfigError(prefix + "plane_distance", "must be finite");
  if (!start.allFinite()) throw ConfigError(prefix + "start", "must be finite");
  if (!velocity.allFinite()) throw ConfigError(prefix + "velocity", "must be finite");
}

void ClutterSpec::validate(const std::string& prefix) const {
  if (!(false_blob_rate >= 0)) throw ConfigError(prefix + "false_blob_rate", "must be >= 0");
  if (blob_points_min < 0) throw ConfigError(prefix + "blob_points_min", "must be >= 0");
  if (blob_points_max < blob_points_min) {
    throw ConfigError(prefix + "blob_points_max", "must be >= blob_points_min");
  }
  if (!(blob_spread >= 0)) throw ConfigError(prefix + "blob_spread", "must be >= 0");
  if (!(dropout_probability >= 0 && dropout_probability <= 1)) {
    throw ConfigError(prefix + "dropout_probability", "must lie in [0, 1]");
  }
}

void TargetSpec::validate(const std::string& prefix) const {
  if (points < 0) throw ConfigError(prefix + "points", "must be >= 0");
  if (!(radius >= 0)) throw ConfigError(prefix + "radius", "must be >= 0");
}

void ScenarioConfig::validate() const {
  camera.validate("camera.");
  pipeline.validate("pipeline.");
  tracker.validate("tracker.");
  aim.validate("aim.");
  trajectory.validate("trajectory.");
  clutter.validate("clutter.");
  target.validate("target.");
  evaluation.validate("evaluation.");
  hunter_gains.validate("hunter.");
  if (!hunter_start.allFinite()) throw ConfigError("hunter.start", "must be finite");
  if (!std::isfinite(hunter_start_yaw)) throw ConfigError("hunter.yaw", "must be finite");
  if (!(duration > 0)) throw ConfigError("duration", "must be > 0");
  if (frame_count() == 0) throw ConfigError("duration", "shorter than one frame period");
  if (!(pixel_noise_sigma >= 0)) throw ConfigError("pixel_noise_sigma", "must be >= 0");
  if (!(pixel_quantization >= 0)) throw ConfigError("pixel_quantization", "must be >= 0");
  if (!(detection_delay >= 0)) throw ConfigError("detection_delay", "must be >= 0");
}

std::size_t ScenarioConfig::frame_count() const {
  return static_cast<std::size_t>(std::floor(duration * camera.frame_rate + 1e-9));
}

Point3d figure8(double t, const TrajectorySpec& spec) {
  const double w = 2.0 * std::numbers::pi / spec.period;
  return {spec.amplitude_x * std::sin(w * t), spec.amplitude_y * std::sin(2.0 * w * t),
          spec.plane_distance};
}

Point3d trajectory_position(double t, const TrajectorySpec& spec) {
  switch (spec.kind) {
    case TrajectoryKind::figure8: return figure8(t, spec);
    case TrajectoryKind::constant_velocity: return spec.start + t * spec.velocity;
    case TrajectoryKind::stationary: return spec.start;
  }
  return spec.start;
}

std::optional<Point3d> sense_point(const Point3d& p_c, const CameraModeld& cam,
                                   const StereoNoise& noise, Rng& rng) {
  if (!(p_c.z() >= cam.min_depth && p_c.z() <= cam.max_depth)) return std::nullopt;
  PixelPaird pp = project(p_c, cam);

  if (noise.pixel_sigma > 0) {
    std::normal_distribution<double> n(0.0, noise.pixel_sigma);
    pp.left_u += n(rng);
    pp.left_v += n(rng);
    pp.right_u += n(rng);
  }
  if (noise.pixel_quantization > 0) {
    const double step = noise.pixel_quantization;
    pp.left_u = std::round(pp.left_u / step) * step;
    pp.left_v = std::round(pp.left_v / step) * step;
    pp.right_u = std::round(pp.right_u / step) * step;
  }
  if (!in_image(pp, cam) || !(pp.disparity() > 0)) return std::nullopt;

  const Point3d p = triangulate(pp, cam);
  if (p.z() < cam.min_depth || p.z() > cam.max_depth) return std::nullopt;
  return p;
}

PointCloud render_cloud(std::span<const Point3d> targets_c, const CameraModeld& cam,
                        const StereoNoise& noise, const TargetSpec& target,
                        const ClutterSpec& clutter, Rng& rng, double timestamp) {
  PointCloud cloud;
  cloud.timestamp = timestamp;
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (const Point3d& centre : targets_c) {
    if (unit(rng) < clutter.dropout_probability) continue;
    for (int i = 0; i < target.points; ++i) {
      Point3d dir(unit_normal(rng), unit_normal(rng), unit_normal(rng));
      const double n = dir.norm();
      dir = n > 0 ? Point3d(dir / n) : Point3d::UnitZ();
      if (auto p = sense_point(centre + target.radius * dir, cam, noise, rng)) {
        cloud.points.push_back(*p);
      }
    }
  }

  std::poisson_distribution<int> blob_count(clutter.false_blob_rate);
  const int blobs = clutter.false_blob_rate > 0 ? blob_count(rng) : 0;
  std::uniform_int_distribution<int> blob_size(clutter.blob_points_min, clutter.blob_points_max);
  for (int b = 0; b < blobs; ++b) {
    const double u = (unit(rng) - 0.5) * cam.image_width;
    const double v = (unit(rng) - 0.5) * cam.image_height;
    const double z = cam.min_depth + unit(rng) * (cam.max_depth - cam.min_depth);
    const Point3d centre(u * z / cam.focal_length, v * z / cam.focal_length, z);
    const int count = blob_size(rng);
    for (int i = 0; i < count; ++i) {
      const Point3d offset(unit_normal(rng), unit_normal(rng), unit_normal(rng));
      if (auto p = sense_point(centre + clutter.blob_spread * offset, cam, noise, rng)) {
        cloud.points.push_back(*p);
      }
    }
  }
  return cloud;
}

ScenarioRun run_scenario(const ScenarioConfig& cfg, bool keep_clouds) {
  cfg.validate();

  ScenarioRun run;
  Rng rng(cfg.seed);
  const double dt = cfg.camera.frame_period();
  const std::size_t frames = cfg.frame_count();
  run.frames.reserve(frames);

  HunterState hunter;
  hunter.position = cfg.hunter_start;
  hunter.yaw = wrap_angle(cfg.hunter_start_yaw);
  TrackerSnapshot snapshot;

  for (std::size_t k = 0; k < frames; ++k) {
    const double t = static_cast<double>(k) / cfg.camera.frame_rate;
    hunter.time = t;
    const RigidTransformd cam_to_world = hunter.camera_to_world();
    const RigidTransformd world_to_cam = cam_to_world.inverse();

    FrameLog log;
    log.t = t;
    log.hunter = hunter;
    const Point3d gt_w = trajectory_position(t, cfg.trajectory);
    log.gt_world.push_back(gt_w);
    log.gt_camera.push_back(world_to_cam * gt_w);

    // A processing delay means the frame reflects where the intruder was.
    const Point3d sensed_c = world_to_cam * trajectory_position(t - cfg.detection_delay, cfg.trajectory);
    PointCloud cloud = render_cloud(std::span<const Point3d>(&sensed_c, 1), cfg.camera, cfg.noise(),
                                    cfg.target, cfg.clutter, rng, t);
    log.cloud_points = cloud.size();

    const auto t0 = std::chrono::steady_clock::now();
    log.detections = detect(cloud, cfg.pipeline);
    std::vector<Detection> detections_w = log.detections;
    for (auto& d : detections_w) d.position = cam_to_world * d.position;
    snapshot = step(snapshot, detections_w, t, cfg.tracker);
    log.best = best_track(snapshot);
    if (log.best) log.aim_error = aim_error(world_to_cam * log.best->position(), cfg.aim);
    log.processing_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log.tracker = snapshot;

    if (cfg.hunter_control_enabled && log.aim_error) {
      log.command = pose_command(hunter, *log.aim_error, cfg.aim, t);
      hunter = hunter_step(hunter, *log.command, dt, cfg.hunter_gains);
    }
    if (keep_clouds) run.clouds.push_back(std::move(cloud));
    run.frames.push_back(std::move(log));
  }
  return run;
}

}  // namespace hunter
