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

#include "hunter/point_cloud.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "hunter/error.hpp"
#include "hunter/io.hpp"

namespace hunter {

void write_xyz(std::ostream& os, const PointCloud& cloud) {
  os << "x y z\n";
  for (const auto& p : cloud.points) {
    os << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z())
       << '\n';
  }
}

PointCloud read_xyz(std::istream& is, double timestamp) {
  PointCloud cloud;
  cloud.timestamp = timestamp;
  std::string line;
  if (!std::getline(is, line)) throw IoError("xyz: empty input");
  {
    std::istringstream header(line);
    std::string a, b, c;
    header >> a >> b >> c;
    if (a != "x" || b != "y" || c != "z") throw IoError("xyz: missing `x y z` header");
  }
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    double x, y, z;
    if (!(row >> x >> y >> z)) {
      throw IoError("xyz: malformed point on line " + std::to_string(line_no));
    }
    cloud.points.emplace_back(x, y, z);
  }
  return cloud;
}

void save_xyz(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ostringstream os;
  write_xyz(os, cloud);
  write_file_atomic(path, os.str());
}

PointCloud load_xyz(const std::filesystem::path& path, double timestamp) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_xyz(in, timestamp);
}

}  // namespace hunter
