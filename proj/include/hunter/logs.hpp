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

// CSV output for scenario runs and a small CSV reader for `report`.
//
//   frames.csv      t,gt_x,gt_y,gt_z,gtc_x,gtc_y,gtc_z,det_count,best_id,
//                   best_x,best_y,best_z,err_x,err_y,err_z,
//                   hunter_x,hunter_y,hunter_z,hunter_yaw
//   detections.csv  t,x,y,z,support                      (frame C)
//   tracks.csv      t,track_id,x,y,z,vx,vy,vz,ax,ay,az,age,misses (frame W)
//   commands.csv    t,set_x,set_y,set_z,set_yaw
//
// gt_* is frame W, gtc_* frame C. Missing values are written as `nan`
// (best_id as -1).

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hunter/io.hpp"
#include "hunter/sim_world.hpp"

namespace hunter {

std::string frames_csv(const std::vector<FrameLog>& frames);
std::string detections_csv(const std::vector<FrameLog>& frames);
std::string tracks_csv(const std::vector<FrameLog>& frames);
std::string commands_csv(const std::vector<FrameLog>& frames);

class CsvTable {
 public:
  static CsvTable parse(std::string_view text);
  static CsvTable load(const std::filesystem::path& path);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  std::size_t column(std::string_view name) const;

  const std::string& cell(std::size_t row, std::size_t col) const { return rows_.at(row).at(col); }
  double number(std::size_t row, std::size_t col) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace hunter
