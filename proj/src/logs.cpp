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

#include "hunter/logs.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "hunter/error.hpp"

namespace hunter {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

class Row {
 public:
  explicit Row(std::string& out) : out_(out) {}
  ~Row() { out_ += '\n'; }

  Row& operator<<(double v) { return sep().append(format_double(v)); }
  Row& operator<<(long long v) { return sep().append(std::to_string(v)); }
  Row& operator<<(const Point3d& p) { return *this << p.x() << p.y() << p.z(); }

 private:
  Row& sep() {
    if (!first_) out_ += ',';
    first_ = false;
    return *this;
  }
  Row& append(const std::string& s) {
    out_ += s;
    return *this;
  }

  std::string& out_;
  bool first_ = true;
};

}  // namespace

std::string frames_csv(const std::vector<FrameLog>& frames) {
  std::string out =
      "t,gt_x,gt_y,gt_z,gtc_x,gtc_y,gtc_z,det_count,best_id,best_x,best_y,best_z,"
      "err_x,err_y,err_z,hunter_x,hunter_y,hunter_z,hunter_yaw\n";
  const Point3d missing(kNan, kNan, kNan);
  for (const auto& f : frames) {
    Row row(out);
    row << f.t << (f.gt_world.empty() ? missing : f.gt_world.front())
        << (f.gt_camera.empty() ? missing : f.gt_camera.front())
        << static_cast<long long>(f.detections.size())
        << static_cast<long long>(f.best ? f.best->id : -1)
        << (f.best ? f.best->position() : missing) << f.aim_error.value_or(missing)
        << f.hunter.position << f.hunter.yaw;
  }
  return out;
}

std::string detections_csv(const std::vector<FrameLog>& frames) {
  std::string out = "t,x,y,z,support\n";
  for (const auto& f : frames) {
    for (const auto& d : f.detections) {
      Row(out) << f.t << d.position << static_cast<long long>(d.support);
    }
  }
  return out;
}

std::string tracks_csv(const std::vector<FrameLog>& frames) {
  std::string out = "t,track_id,x,y,z,vx,vy,vz,ax,ay,az,age,misses\n";
  for (const auto& f : frames) {
    for (const auto& tr : f.tracker.tracks) {
      Row(out) << f.t << static_cast<long long>(tr.id) << tr.state.position()
               << tr.state.velocity() << tr.state.acceleration()
               << static_cast<long long>(tr.age) << static_cast<long long>(tr.consecutive_misses);
    }
  }
  return out;
}

std::string commands_csv(const std::vector<FrameLog>& frames) {
  std::string out = "t,set_x,set_y,set_z,set_yaw\n";
  for (const auto& f : frames) {
    if (f.command) Row(out) << f.command->timestamp << f.command->position << f.command->yaw;
  }
  return out;
}

CsvTable CsvTable::parse(std::string_view text) {
  CsvTable table;
  auto split = [](std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };

  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = nl + 1;
    if (line.empty()) continue;
    if (header) {
      table.header_ = split(line);
      header = false;
    } else {
      auto cells = split(line);
      if (cells.size() != table.header_.size()) {
        throw IoError("csv: row " + std::to_string(table.rows_.size() + 1) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(table.header_.size()));
      }
      table.rows_.push_back(std::move(cells));
    }
  }
  if (header) throw IoError("csv: missing header");
  return table;
}

CsvTable CsvTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw IoError("csv: missing column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const std::string& s = cell(row, col);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw IoError("csv: not a number '" + s + "' in column " + header_.at(col));
  }
  return v;
}

}  // namespace hunter
