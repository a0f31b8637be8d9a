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

// Aiming: the relative-position error that puts the intruder at the net's
// sweet spot, the pose setpoint that removes it, and a point-mass hunter
// that follows pose setpoints.

#pragma once

#include <string>

#include "hunter/stereo_geometry.hpp"

namespace hunter {

struct AimConfig {
  /// Desired intruder position in frame C: 2 m ahead, 1 m below.
  Point3d desired_relative_position{0.0, 1.0, 2.0};

  void validate(const std::string& prefix = "aim.") const;
};

struct HunterState {
  Point3d position = Point3d::Zero();  // frame W
  double yaw = 0.0;                    // rad, wrapped to (-pi, pi]
  Point3d velocity = Point3d::Zero();  // frame W
  double time = 0.0;

  /// Camera pose: maps frame-C points into frame W.
  RigidTransformd camera_to_world() const { return RigidTransformd::from_yaw(yaw, position); }
};

struct PoseCommand {
  Point3d position = Point3d::Zero();  // frame W
  double yaw = 0.0;
  double timestamp = 0.0;
};

struct HunterGains {
  double kp = 2.0;             // 1/s^2
  double kd = 2.8;             // 1/s
  double max_accel = 5.5;      // m/s^2
  double yaw_gain = 2.0;       // 1/s
  double max_yaw_rate = 1.0;   // rad/s

  void validate(const std::string& prefix = "hunter.") const;
};

double wrap_angle(double a);

/// e_x = x_E^d - x_E, componentwise in frame C.
Point3d aim_error(const Point3d& intruder_c, const AimConfig& cfg);

/// Position setpoint: current position plus the frame-C displacement -e_x
/// rotated into W. Yaw setpoint centres the intruder horizontally.
PoseCommand pose_command(const HunterState& hunter, const Point3d& error_c, const AimConfig& cfg,
                         double t);

/// One semi-implicit Euler step of the PD point mass and the rate-limited
/// first-order yaw loop.
HunterState hunter_step(const HunterState& hunter, const PoseCommand& cmd, double dt,
                        const HunterGains& gains);

}  // namespace hunter
