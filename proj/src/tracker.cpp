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

#include "hunter/tracker.hpp"

#include <algorithm>

#include "hunter/assignment.hpp"
#include "hunter/error.hpp"

namespace hunter {

void TrackerParams::validate(const std::string& prefix) const {
  if (!(r > 0)) throw ConfigError(prefix + "r", "must be > 0");
  if (!(measurement_variance > 0)) {
    throw ConfigError(prefix + "measurement_variance", "must be > 0");
  }
  if (!(q > 0)) throw ConfigError(prefix + "q", "must be > 0");
  if (!(p > 0)) throw ConfigError(prefix + "p", "must be > 0");
  if (!(eps_max > 0)) throw ConfigError(prefix + "eps_max", "must be > 0");
  if (max_misses <= 0) throw ConfigError(prefix + "max_misses", "must be > 0");
}

Track predict(const Track& track, double dt, double q) {
  Track out = track;
  out.state = kalman_predict(track.state, dt, q);
  return out;
}

Track update(const Track& track, const Detection& z, double variance) {
  Track out = track;
  out.state = kalman_update(track.state, z.position, variance);
  ++out.hits;
  out.consecutive_misses = 0;
  out.last_update = z.timestamp;
  return out;
}

Track create_track(const Detection& z, const TrackerParams& params, std::int64_t id) {
  Track t;
  t.id = id;
  t.state = make_state(z.position, params.p);
  t.last_update = z.timestamp;
  return t;
}

Association associate_costs(const Eigen::MatrixXd& cost, double eps_max) {
  Association a;
  const auto n_tracks = static_cast<std::size_t>(cost.rows());
  const auto n_dets = static_cast<std::size_t>(cost.cols());
  std::vector<char> det_taken(n_dets, 0);

  const auto solution = solve_assignment(cost);
  for (std::size_t i = 0; i < n_tracks; ++i) {
    const int j = solution.row_to_col[i];
    if (j >= 0 && cost(static_cast<Eigen::Index>(i), j) <= eps_max) {
      a.matches.emplace_back(i, static_cast<std::size_t>(j));
      det_taken[j] = 1;
    } else {
      a.unmatched_tracks.push_back(i);
    }
  }
  for (std::size_t j = 0; j < n_dets; ++j) {
    if (!det_taken[j]) a.unmatched_detections.push_back(j);
  }
  return a;
}

Association associate(const std::vector<Track>& tracks, const std::vector<Detection>& detections,
                      double eps_max) {
  Eigen::MatrixXd cost(tracks.size(), detections.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const Point3d p = tracks[i].position();
    for (std::size_t j = 0; j < detections.size(); ++j) {
      cost(i, j) = (p - detections[j].position).norm();
    }
  }
  return associate_costs(cost, eps_max);
}

TrackerSnapshot step(const TrackerSnapshot& snapshot, const std::vector<Detection>& detections,
                     double t, const TrackerParams& params) {
  if (!(t > snapshot.time)) throw InvalidTimestep("step: time must increase strictly");

  TrackerSnapshot next;
  next.next_id = snapshot.next_id;
  next.time = t;

  std::vector<Track> predicted;
  predicted.reserve(snapshot.tracks.size());
  for (const auto& track : snapshot.tracks) {
    predicted.push_back(predict(track, t - snapshot.time, params.q));
  }

  const Association assoc = associate(predicted, detections, params.eps_max);

  for (const auto& [ti, di] : assoc.matches) {
    predicted[ti] = update(predicted[ti], detections[di], params.r * params.measurement_variance);
  }
  for (std::size_t ti : assoc.unmatched_tracks) ++predicted[ti].consecutive_misses;

  // Survivors keep their relative (id) order; new tracks are appended.
  for (auto& track : predicted) {
    if (track.consecutive_misses < params.max_misses) next.tracks.push_back(std::move(track));
  }
  for (std::size_t di : assoc.unmatched_detections) {
    next.tracks.push_back(create_track(detections[di], params, next.next_id++));
  }
  for (auto& track : next.tracks) ++track.age;
  return next;
}

std::optional<Track> best_track(const TrackerSnapshot& snapshot) {
  const auto& tracks = snapshot.tracks;
  if (tracks.empty()) return std::nullopt;
  const auto it = std::min_element(tracks.begin(), tracks.end(), [](const Track& a, const Track& b) {
    return a.age != b.age ? a.age > b.age : a.id < b.id;
  });
  return *it;
}

}  // namespace hunter
