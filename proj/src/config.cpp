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

#include "hunter/config.hpp"

#include <cstdint>
#include <exception>
#include <fstream>
#include <type_traits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hunter/error.hpp"

namespace hunter {
namespace {

static_assert(std::is_same_v<std::uint64_t, std::size_t>, "seed is read as size_t");

using json = nlohmann::json;

class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) throw ConfigError(field(key), "unknown key");
    }
  }

  void get(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(field(key), "expected a number");
      out = v->get<double>();
    }
  }

  void get(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(field(key), "expected an integer");
      out = v->get<int>();
    }
  }

  void get(const std::string& key, std::size_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) throw ConfigError(field(key), "expected a non-negative integer");
      out = v->get<std::size_t>();
    }
  }

  void get(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(field(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void get(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(field(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void get(const std::string& key, Point3d& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != 3) throw ConfigError(field(key), "expected [x, y, z]");
      for (int i = 0; i < 3; ++i) {
        if (!(*v)[i].is_number()) throw ConfigError(field(key), "expected [x, y, z]");
        out(i) = (*v)[i].get<double>();
      }
    }
  }

  template <typename Fn>
  void section(const std::string& key, Fn&& fn) {
    if (const json* v = find(key)) {
      Section sub(*v, field(key));
      fn(sub);
    }
  }

 private:
  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

json point(const Point3d& p) { return json::array({p.x(), p.y(), p.z()}); }

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }

  ScenarioConfig cfg;
  {
    Section s(root, "");
    s.get("duration", cfg.duration);
    s.get("seed", cfg.seed);
    s.get("pixel_noise_sigma", cfg.pixel_noise_sigma);
    s.get("pixel_quantization", cfg.pixel_quantization);
    s.get("detection_delay", cfg.detection_delay);
    s.get("hunter_control_enabled", cfg.hunter_control_enabled);

    s.section("camera", [&](Section& c) {
      auto& cam = cfg.camera;
      c.get("focal_length", cam.focal_length);
      c.get("baseline", cam.baseline);
      c.get("image_width", cam.image_width);
      c.get("image_height", cam.image_height);
      c.get("frame_rate", cam.frame_rate);
      c.get("min_depth", cam.min_depth);
      c.get("max_depth", cam.max_depth);
      c.get("horizontal_fov", cam.horizontal_fov);
    });
    s.section("pipeline", [&](Section& c) {
      auto& p = cfg.pipeline;
      c.get("voxel_leaf", p.voxel_leaf);
      c.get("max_range", p.max_range);
      c.get("cluster_tolerance", p.cluster_tolerance);
      c.get("min_cluster_size", p.min_cluster_size);
      c.get("max_cluster_size", p.max_cluster_size);
    });
    s.section("tracker", [&](Section& c) {
      auto& t = cfg.tracker;
      c.get("r", t.r);
      c.get("measurement_variance", t.measurement_variance);
      c.get("q", t.q);
      c.get("p", t.p);
      c.get("eps_max", t.eps_max);
      c.get("max_misses", t.max_misses);
    });
    s.section("aim", [&](Section& c) { c.get("desired_relative_position", cfg.aim.desired_relative_position); });
    s.section("trajectory", [&](Section& c) {
      auto& t = cfg.trajectory;
      std::string kind = to_string(t.kind);
      c.get("kind", kind);
      t.kind = trajectory_kind_from_string(kind);
      c.get("plane_distance", t.plane_distance);
      c.get("amplitude_x", t.amplitude_x);
      c.get("amplitude_y", t.amplitude_y);
      c.get("period", t.period);
      c.get("start", t.start);
      c.get("velocity", t.velocity);
    });
    s.section("clutter", [&](Section& c) {
      auto& k = cfg.clutter;
      c.get("false_blob_rate", k.false_blob_rate);
      c.get("blob_points_min", k.blob_points_min);
      c.get("blob_points_max", k.blob_points_max);
      c.get("blob_spread", k.blob_spread);
      c.get("dropout_probability", k.dropout_probability);
    });
    s.section("target", [&](Section& c) {
      c.get("points", cfg.target.points);
      c.get("radius", cfg.target.radius);
    });
    s.section("evaluation", [&](Section& c) {
      c.get("match_radius", cfg.evaluation.match_radius);
      c.get("max_lag", cfg.evaluation.max_lag);
    });
    s.section("hunter", [&](Section& c) {
      auto& g = cfg.hunter_gains;
      c.get("kp", g.kp);
      c.get("kd", g.kd);
      c.get("max_accel", g.max_accel);
      c.get("yaw_gain", g.yaw_gain);
      c.get("max_yaw_rate", g.max_yaw_rate);
      c.get("start", cfg.hunter_start);
      c.get("yaw", cfg.hunter_start_yaw);
    });
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ScenarioConfig& cfg) {
  json j;
  j["duration"] = cfg.duration;
  j["seed"] = cfg.seed;
  j["pixel_noise_sigma"] = cfg.pixel_noise_sigma;
  j["pixel_quantization"] = cfg.pixel_quantization;
  j["detection_delay"] = cfg.detection_delay;
  j["hunter_control_enabled"] = cfg.hunter_control_enabled;
  const auto& cam = cfg.camera;
  j["camera"] = {{"focal_length", cam.focal_length}, {"baseline", cam.baseline},
                 {"image_width", cam.image_width},   {"image_height", cam.image_height},
                 {"frame_rate", cam.frame_rate},     {"min_depth", cam.min_depth},
                 {"max_depth", cam.max_depth},       {"horizontal_fov", cam.horizontal_fov}};
  const auto& p = cfg.pipeline;
  j["pipeline"] = {{"voxel_leaf", p.voxel_leaf},
                   {"max_range", p.max_range},
                   {"cluster_tolerance", p.cluster_tolerance},
                   {"min_cluster_size", p.min_cluster_size},
                   {"max_cluster_size", p.max_cluster_size}};
  const auto& t = cfg.tracker;
  j["tracker"] = {{"r", t.r}, {"measurement_variance", t.measurement_variance}, {"q", t.q}, {"p", t.p}, {"eps_max", t.eps_max}, {"max_misses", t.max_misses}};
  j["aim"] = {{"desired_relative_position", point(cfg.aim.desired_relative_position)}};
  const auto& tr = cfg.trajectory;
  j["trajectory"] = {{"kind", to_string(tr.kind)},         {"plane_distance", tr.plane_distance},
                     {"amplitude_x", tr.amplitude_x},      {"amplitude_y", tr.amplitude_y},
                     {"period", tr.period},                {"start", point(tr.start)},
                     {"velocity", point(tr.velocity)}};
  const auto& c = cfg.clutter;
  j["clutter"] = {{"false_blob_rate", c.false_blob_rate},
                  {"blob_points_min", c.blob_points_min},
                  {"blob_points_max", c.blob_points_max},
                  {"blob_spread", c.blob_spread},
                  {"dropout_probability", c.dropout_probability}};
  j["target"] = {{"points", cfg.target.points}, {"radius", cfg.target.radius}};
  j["evaluation"] = {{"match_radius", cfg.evaluation.match_radius}, {"max_lag", cfg.evaluation.max_lag}};
  const auto& g = cfg.hunter_gains;
  j["hunter"] = {{"kp", g.kp},
                 {"kd", g.kd},
                 {"max_accel", g.max_accel},
                 {"yaw_gain", g.yaw_gain},
                 {"max_yaw_rate", g.max_yaw_rate},
                 {"start", point(cfg.hunter_start)},
                 {"yaw", cfg.hunter_start_yaw}};
  return j.dump(2) + "\n";
}

}  // namespace hunter
