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

// Point cloud to detections: range gate, voxel-grid downsampling, Euclidean
// cluster extraction and centroid selection.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hunter/point_cloud.hpp"

namespace hunter {

struct PipelineParams {
  double voxel_leaf = 0.1;         // m
  double max_range = 10.0;         // m, along camera z
  double cluster_tolerance = 0.5;  // m
  std::size_t min_cluster_size = 20;
  std::size_t max_cluster_size = 200;

  void validate(const std::string& prefix = "pipeline.") const;
};

struct Cluster {
  std::vector<std::size_t> indices;  // into the clustered cloud
  std::vector<Point3d> members;
  Point3d centroid = Point3d::Zero();
};

struct Detection {
  Point3d position = Point3d::Zero();
  double timestamp = 0.0;
  std::size_t support = 0;
};

/// Keeps points with z <= max_range (inclusive), in input order.
PointCloud range_filter(const PointCloud& cloud, double max_range);

/// One centroid per occupied cell of an origin-anchored grid with edge `leaf`
/// (cell index floor(coord / leaf)). Output is ordered by cell index.
PointCloud voxel_downsample(const PointCloud& cloud, double leaf);

/// Connected components under the `cluster_tolerance` neighbour relation,
/// size-filtered to [min_cluster_size, max_cluster_size] and sorted by
/// centroid (z, x, y).
std::vector<Cluster> euclidean_cluster(const PointCloud& cloud, const PipelineParams& params);

/// range_filter -> voxel_downsample -> euclidean_cluster -> centroids.
std::vector<Detection> detect(const PointCloud& cloud, const PipelineParams& params);

}  // namespace hunter
