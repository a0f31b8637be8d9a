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

// Detection and tracking metrics: per-frame matching against ground truth,
// precision/recall, MOTA, RMSE and cross-correlation lag.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hunter/stereo_geometry.hpp"

namespace hunter {

struct EvaluationParams {
  double match_radius = 0.5;  // m
  double max_lag = 0.5;       // s

  void validate(const std::string& prefix = "evaluation.") const;
};

struct MatchedPair {
  std::size_t gt = 0;
  std::size_t hyp = 0;
  double distance = 0.0;
};

struct FrameMatch {
  double t = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int idsw = 0;
  int gt = 0;
  std::vector<MatchedPair> pairs;
};

/// Greedy nearest-pair matching within `radius`: candidate pairs are taken in
/// increasing distance order, each object at most once. IDSW is left at 0.
FrameMatch match_frame(std::span<const Point3d> gt, std::span<const Point3d> hyps, double radius);

/// One frame of identity-carrying hypotheses.
struct IdentityFrame {
  double t = 0.0;
  std::vector<Point3d> gt;
  std::vector<Point3d> hyps;
  std::vector<std::int64_t> hyp_ids;
};

/// match_frame() per frame plus identity switches: a ground-truth object
/// matched to a different id than at its previous match counts one IDSW.
std::vector<FrameMatch> match_sequence(const std::vector<IdentityFrame>& frames, double radius);

struct PrecisionRecall {
  double precision = 1.0;
  double recall = 1.0;
  /// False when no hypotheses were reported at all (precision set to 1).
  bool precision_defined = true;
};

PrecisionRecall precision_recall(std::span<const FrameMatch> frames);

/// 1 - sum(FN + FP + IDSW) / sum(GT).
double mota(std::span<const FrameMatch> frames);

struct TimedPoint {
  double t = 0.0;
  Point3d p = Point3d::Zero();
};
using TimedSeries = std::vector<TimedPoint>;

struct TimedScalar {
  double t = 0.0;
  double v = 0.0;
};
using ScalarSeries = std::vector<TimedScalar>;

struct RmseReport {
  Point3d per_axis = Point3d::Zero();
  double total = 0.0;
  std::size_t samples = 0;
};

/// Pairs each sample of `a` with the nearest-in-time sample of `b` (within
/// `max_dt`), then per-axis RMS and RMS of the 3D distance. Needs at least 10
/// pairs.
RmseReport rmse(const TimedSeries& a, const TimedSeries& b, double max_dt);

/// Pools per-run RMSE reports, weighting by sample count.
RmseReport pool_rmse(std::span<const RmseReport> reports);

/// Linear interpolation onto t0 + k * period, k = 0..count-1. Input must be
/// sorted by time; values outside its span are clamped to the end samples.
std::vector<double> resample(const ScalarSeries& s, double t0, double period, std::size_t count);

/// Lag (multiple of `period`, within +-max_lag) maximising the Pearson
/// correlation of reference[i] against delayed[i + lag]. Positive means
/// `delayed` trails `reference`. Ties go to the smaller |lag|.
double lag_xcorr(const ScalarSeries& reference, const ScalarSeries& delayed, double max_lag,
                 double period);

/// lag_xcorr on each axis carrying signal; median over those axes.
/// nullopt when no axis has variance.
std::optional<double> axis_median_lag(const TimedSeries& reference, const TimedSeries& delayed,
                                      double max_lag, double period);

}  // namespace hunter
