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

#include <stdexcept>
#include <string>

namespace hunter {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero or negative disparity: the pixel pair has no finite reconstruction.
class PointAtInfinity : public Error {
 public:
  using Error::Error;
};

/// Point closer than the camera's minimum depth (or behind it).
class BehindCamera : public Error {
 public:
  using Error::Error;
};

class InvalidPose : public Error {
 public:
  using Error::Error;
};

class InvalidTimestep : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value. `field()` is the dotted path of the offending
/// entry, e.g. `camera.baseline`.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hunter
