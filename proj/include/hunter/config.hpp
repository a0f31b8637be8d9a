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

// JSON scenario configuration. Sections mirror ScenarioConfig: camera,
// pipeline, tracker, aim, trajectory, clutter, target, evaluation, hunter,
// plus top-level scalars. Omitted keys keep their defaults; unknown keys are
// rejected. Errors carry the dotted path of the offending field.

#pragma once

#include <filesystem>
#include <string>

#include "hunter/sim_world.hpp"

namespace hunter {

ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Full configuration, every field present; parse_config(dump_config(c)) == c.
std::string dump_config(const ScenarioConfig& cfg);

}  // namespace hunter
