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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hunter/stereo_geometry.hpp"

namespace hunter {

/// Camera-frame points of one stereo frame.
struct PointCloud {
  std::vector<Point3d> points;
  double timestamp = 0.0;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

// Plain-text dump: header line `x y z`, then one space-separated point per
// line. Values are written in shortest round-trip form.
void write_xyz(std::ostream& os, const PointCloud& cloud);
PointCloud read_xyz(std::istream& is, double timestamp = 0.0);

void save_xyz(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud load_xyz(const std::filesystem::path& path, double timestamp = 0.0);

}  // namespace hunter
