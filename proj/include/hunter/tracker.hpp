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

// Multi-target tracker: one constant-acceleration Kalman filter per track,
// global nearest-distance association, and a miss-count track lifecycle.
// The tracker is a pure transition function over TrackerSnapshot values.

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hunter/cloud_pipeline.hpp"
#include "hunter/kalman.hpp"

namespace hunter {

struct TrackerParams {
  double r = 1.0;        // measurement noise scale
  double measurement_variance = 1e-3;  // base per-axis detection variance [m^2], R = r * this * I3
  double q = 1.0;        // white-jerk spectral density [m^2/s^5]
  double p = 1.0;        // initial covariance scale
  double eps_max = 1.0;  // association gate [m]
  int max_misses = 10;   // consecutive misses before deletion

  void validate(const std::string& prefix = "tracker.") const;
};

struct Track {
  std::int64_t id = 0;
  GaussianStated state;
  int age = 0;
  int hits = 0;
  int consecutive_misses = 0;
  double last_update = 0.0;

  Point3d position() const { return state.position(); }
};

struct TrackerSnapshot {
  std::vector<Track> tracks;
  std::int64_t next_id = 0;
  double time = -std::numeric_limits<double>::infinity();
};

struct Association {
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (track, detection)
  std::vector<std::size_t> unmatched_tracks;
  std::vector<std::size_t> unmatched_detections;
};

Track predict(const Track& track, double dt, double q);

/// Corrects `track` with `z`; the track must already be predicted to
/// z.timestamp. `variance` is the per-axis measurement variance
/// (r * measurement_variance in step()). Increments hits and clears the miss
/// counter.
Track update(const Track& track, const Detection& z, double variance);

/// New track at the detection with zero velocity/acceleration and the scaled
/// initial covariance.
Track create_track(const Detection& z, const TrackerParams& params, std::int64_t id);

/// Minimum total-cost assignment on `cost` (tracks x detections); assigned
/// pairs costing more than `eps_max` are broken afterwards.
Association associate_costs(const Eigen::MatrixXd& cost, double eps_max);

/// Euclidean distance between track positions and detections, then
/// associate_costs().
Association associate(const std::vector<Track>& tracks, const std::vector<Detection>& detections,
                      double eps_max);

TrackerSnapshot step(const TrackerSnapshot& snapshot, const std::vector<Detection>& detections,
                     double t, const TrackerParams& params);

/// Oldest live track; ties go to the smaller id.
std::optional<Track> best_track(const TrackerSnapshot& snapshot);

}  // namespace hunter
