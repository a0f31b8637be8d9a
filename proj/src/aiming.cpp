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

#include "hunter/aiming.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hunter/error.hpp"

namespace hunter {

void AimConfig::validate(const std::string& prefix) const {
  if (!desired_relative_position.allFinite()) {
    throw ConfigError(prefix + "desired_relative_position", "must be finite");
  }
  if (!(desired_relative_position.z() > 0)) {
    throw ConfigError(prefix + "desired_relative_position", "z must be > 0");
  }
}

void HunterGains::validate(const std::string& prefix) const {
  if (!(kp > 0)) throw ConfigError(prefix + "kp", "must be > 0");
  if (!(kd >= 0)) throw ConfigError(prefix + "kd", "must be >= 0");
  if (!(max_accel > 0)) throw ConfigError(prefix + "max_accel", "must be > 0");
  if (!(yaw_gain > 0)) throw ConfigError(prefix + "yaw_gain", "must be > 0");
  if (!(max_yaw_rate > 0)) throw ConfigError(prefix + "max_yaw_rate", "must be > 0");
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

Point3d aim_error(const Point3d& intruder_c, const AimConfig& cfg) {
  return cfg.desired_relative_position - intruder_c;
}

PoseCommand pose_command(const HunterState& hunter, const Point3d& error_c, const AimConfig& cfg,
                         double t) {
  const Point3d intruder_c = cfg.desired_relative_position - error_c;
  const RigidTransformd pose = hunter.camera_to_world();

  PoseCommand cmd;
  cmd.position = hunter.position + pose.rotation() * (-error_c);
  cmd.yaw = wrap_angle(hunter.yaw + std::atan2(intruder_c.x(), intruder_c.z()));
  cmd.timestamp = t;
  return cmd;
}

HunterState hunter_step(const HunterState& hunter, const PoseCommand& cmd, double dt,
                        const HunterGains& gains) {
  if (!(dt > 0)) throw InvalidTimestep("hunter_step: dt must be positive");

  Point3d accel = gains.kp * (cmd.position - hunter.position) - gains.kd * hunter.velocity;
  const double norm = accel.norm();
  if (norm > gains.max_accel) accel *= gains.max_accel / norm;

  HunterState next = hunter;
  next.velocity = hunter.velocity + dt * accel;
  next.position = hunter.position + dt * next.velocity;

  const double yaw_rate = std::clamp(gains.yaw_gain * wrap_angle(cmd.yaw - hunter.yaw),
                                     -gains.max_yaw_rate, gains.max_yaw_rate);
  next.yaw = wrap_angle(hunter.yaw + dt * yaw_rate);
  next.time = hunter.time + dt;
  return next;
}

}  // namespace hunter
