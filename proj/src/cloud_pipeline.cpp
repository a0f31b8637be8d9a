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

#include "hunter/cloud_pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "hunter/error.hpp"

namespace hunter {
namespace {

struct CellKey {
  std::int64_t x, y, z;

  bool operator==(const CellKey&) const = default;
  auto operator<=>(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 73856093ULL;
    h ^= static_cast<std::uint64_t>(k.y) * 19349663ULL;
    h ^= static_cast<std::uint64_t>(k.z) * 83492791ULL;
    return static_cast<std::size_t>(h);
  }
};

CellKey cell_of(const Point3d& p, double edge) {
  return {static_cast<std::int64_t>(std::floor(p.x() / edge)),
          static_cast<std::int64_t>(std::floor(p.y() / edge)),
          static_cast<std::int64_t>(std::floor(p.z() / edge))};
}

}  // namespace

void PipelineParams::validate(const std::string& prefix) const {
  if (!(voxel_leaf > 0)) throw ConfigError(prefix + "voxel_leaf", "must be > 0");
  if (!(max_range > 0)) throw ConfigError(prefix + "max_range", "must be > 0");
  if (!(cluster_tolerance > 0)) throw ConfigError(prefix + "cluster_tolerance", "must be > 0");
  if (min_cluster_size == 0) throw ConfigError(prefix + "min_cluster_size", "must be > 0");
  if (max_cluster_size < min_cluster_size) {
    throw ConfigError(prefix + "max_cluster_size", "must be >= min_cluster_size");
  }
  if (!(cluster_tolerance > voxel_leaf)) {
    throw ConfigError(prefix + "cluster_tolerance", "must exceed voxel_leaf");
  }
}

PointCloud range_filter(const PointCloud& cloud, double max_range) {
  PointCloud out;
  out.timestamp = cloud.timestamp;
  out.points.reserve(cloud.points.size());
  std::copy_if(cloud.points.begin(), cloud.points.end(), std::back_inserter(out.points),
               [max_range](const Point3d& p) { return p.z() <= max_range; });
  return out;
}

PointCloud voxel_downsample(const PointCloud& cloud, double leaf) {
  struct Accum {
    CellKey key;
    Point3d sum = Point3d::Zero();
    std::size_t count = 0;
  };
  std::unordered_map<CellKey, std::size_t, CellKeyHash> slot;
  std::vector<Accum> cells;
  slot.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    const CellKey key = cell_of(p, leaf);
    auto [it, inserted] = slot.try_emplace(key, cells.size());
    if (inserted) cells.push_back({key});
    Accum& a = cells[it->second];
    a.sum += p;
    ++a.count;
  }
  std::sort(cells.begin(), cells.end(), [](const Accum& a, const Accum& b) { return a.key < b.key; });

  PointCloud out;
  out.timestamp = cloud.timestamp;
  out.points.reserve(cells.size());
  for (const auto& a : cells) out.points.push_back(a.sum / static_cast<double>(a.count));
  return out;
}

std::vector<Cluster> euclidean_cluster(const PointCloud& cloud, const PipelineParams& params) {
  const auto& pts = cloud.points;
  const double tol = params.cluster_tolerance;
  const double tol2 = tol * tol;

  // Cell edge equals the tolerance, so every neighbour lies in the 3x3x3 block.
  std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> grid;
  grid.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) grid[cell_of(pts[i], tol)].push_back(i);

  std::vector<char> visited(pts.size(), 0);
  std::vector<std::size_t> queue;
  std::vector<Cluster> clusters;

  for (std::size_t seed = 0; seed < pts.size(); ++seed) {
    if (visited[seed]) continue;
    visited[seed] = 1;
    queue.assign(1, seed);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Point3d& p = pts[queue[head]];
      const CellKey c = cell_of(p, tol);
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          for (std::int64_t dz = -1; dz <= 1; ++dz) {
            auto it = grid.find({c.x + dx, c.y + dy, c.z + dz});
            if (it == grid.end()) continue;
            for (std::size_t j : it->second) {
              if (!visited[j] && (pts[j] - p).squaredNorm() <= tol2) {
                visited[j] = 1;
                queue.push_back(j);
              }
            }
          }
        }
      }
    }
    if (queue.size() < params.min_cluster_size || queue.size() > params.max_cluster_size) continue;

    Cluster cl;
    cl.indices = queue;
    std::sort(cl.indices.begin(), cl.indices.end());
    cl.members.reserve(cl.indices.size());
    Point3d sum = Point3d::Zero();
    for (std::size_t i : cl.indices) {
      cl.members.push_back(pts[i]);
      sum += pts[i];
    }
    cl.centroid = sum / static_cast<double>(cl.indices.size());
    clusters.push_back(std::move(cl));
  }

  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    return std::tuple(a.centroid.z(), a.centroid.x(), a.centroid.y(), a.indices.front()) <
           std::tuple(b.centroid.z(), b.centroid.x(), b.centroid.y(), b.indices.front());
  });
  return clusters;
}

std::vector<Detection> detect(const PointCloud& cloud, const PipelineParams& params) {
  const PointCloud gated = range_filter(cloud, params.max_range);
  const PointCloud voxels = voxel_downsample(gated, params.voxel_leaf);
  const auto clusters = euclidean_cluster(voxels, params);

  std::vector<Detection> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) out.push_back({c.centroid, cloud.timestamp, c.indices.size()});
  return out;
}

}  // namespace hunter
