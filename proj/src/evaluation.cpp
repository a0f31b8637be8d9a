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

#include "hunter/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <tuple>

#include "hunter/error.hpp"

namespace hunter {

void EvaluationParams::validate(const std::string& prefix) const {
  if (!(match_radius > 0)) throw ConfigError(prefix + "match_radius", "must be > 0");
  if (!(max_lag > 0)) throw ConfigError(prefix + "max_lag", "must be > 0");
}

FrameMatch match_frame(std::span<const Point3d> gt, std::span<const Point3d> hyps, double radius) {
  FrameMatch m;
  m.gt = static_cast<int>(gt.size());

  std::vector<MatchedPair> candidates;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    for (std::size_t j = 0; j < hyps.size(); ++j) {
      const double d = (gt[i] - hyps[j]).norm();
      if (d <= radius) candidates.push_back({i, j, d});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const MatchedPair& a, const MatchedPair& b) {
    return std::tie(a.distance, a.gt, a.hyp) < std::tie(b.distance, b.gt, b.hyp);
  });

  std::vector<char> gt_used(gt.size(), 0), hyp_used(hyps.size(), 0);
  for (const auto& c : candidates) {
    if (gt_used[c.gt] || hyp_used[c.hyp]) continue;
    gt_used[c.gt] = hyp_used[c.hyp] = 1;
    m.pairs.push_back(c);
  }
  m.tp = static_cast<int>(m.pairs.size());
  m.fn = m.gt - m.tp;
  m.fp = static_cast<int>(hyps.size()) - m.tp;
  return m;
}

std::vector<FrameMatch> match_sequence(const std::vector<IdentityFrame>& frames, double radius) {
  std::vector<FrameMatch> out;
  out.reserve(frames.size());
  std::map<std::size_t, std::int64_t> last_id;  // gt index -> id at its previous match
  for (const auto& f : frames) {
    FrameMatch m = match_frame(f.gt, f.hyps, radius);
    m.t = f.t;
    for (const auto& pair : m.pairs) {
      const std::int64_t id = f.hyp_ids.at(pair.hyp);
      auto it = last_id.find(pair.gt);
      if (it != last_id.end() && it->second != id) ++m.idsw;
      last_id[pair.gt] = id;
    }
    out.push_back(std::move(m));
  }
  return out;
}

PrecisionRecall precision_recall(std::span<const FrameMatch> frames) {
  long tp = 0, fp = 0, fn = 0, gt = 0;
  for (const auto& f : frames) {
    tp += f.tp;
    fp += f.fp;
    fn += f.fn;
    gt += f.gt;
  }
  if (gt == 0) throw UndefinedMetric("precision_recall: no ground-truth objects");
  PrecisionRecall pr;
  pr.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (tp + fp == 0) {
    pr.precision = 1.0;
    pr.precision_defined = false;
  } else {
    pr.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  return pr;
}

double mota(std::span<const FrameMatch> frames) {
  long errors = 0, gt = 0;
  for (const auto& f : frames) {
    errors += f.fn + f.fp + f.idsw;
    gt += f.gt;
  }
  if (gt == 0) throw UndefinedMetric("mota: no ground-truth objects");
  return 1.0 - static_cast<double>(errors) / static_cast<double>(gt);
}

RmseReport rmse(const TimedSeries& a, const TimedSeries& b, double max_dt) {
  TimedSeries sorted_b = b;
  std::stable_sort(sorted_b.begin(), sorted_b.end(),
                   [](const TimedPoint& x, const TimedPoint& y) { return x.t < y.t; });

  Point3d sq = Point3d::Zero();
  double sq_total = 0.0;
  std::size_t n = 0;
  for (const auto& s : a) {
    auto it = std::lower_bound(sorted_b.begin(), sorted_b.end(), s.t,
                               [](const TimedPoint& x, double t) { return x.t < t; });
    const TimedPoint* nearest = nullptr;
    if (it != sorted_b.end()) nearest = &*it;
    if (it != sorted_b.begin()) {
      const TimedPoint* prev = &*std::prev(it);
      if (!nearest || std::abs(prev->t - s.t) <= std::abs(nearest->t - s.t)) nearest = prev;
    }
    if (!nearest || std::abs(nearest->t - s.t) > max_dt) continue;
    const Point3d d = s.p - nearest->p;
    sq += d.cwiseAbs2();
    sq_total += d.squaredNorm();
    ++n;
  }
  if (n < 10) throw InsufficientData("rmse: fewer than 10 time-aligned samples");

  RmseReport r;
  r.per_axis = (sq / static_cast<double>(n)).cwiseSqrt();
  r.total = std::sqrt(sq_total / static_cast<double>(n));
  r.samples = n;
  return r;
}

RmseReport pool_rmse(std::span<const RmseReport> reports) {
  Point3d sq = Point3d::Zero();
  double sq_total = 0.0;
  std::size_t n = 0;
  for (const auto& r : reports) {
    const double w = static_cast<double>(r.samples);
    sq += w * r.per_axis.cwiseAbs2();
    sq_total += w * r.total * r.total;
    n += r.samples;
  }
  RmseReport out;
  if (n == 0) return out;
  out.per_axis = (sq / static_cast<double>(n)).cwiseSqrt();
  out.total = std::sqrt(sq_total / static_cast<double>(n));
  out.samples = n;
  return out;
}

std::vector<double> resample(const ScalarSeries& s, double t0, double period, std::size_t count) {
  std::vector<double> out(count);
  if (s.empty()) throw InsufficientData("resample: empty series");
  std::size_t j = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t0 + static_cast<double>(k) * period;
    while (j + 1 < s.size() && s[j + 1].t <= t) ++j;
    if (t <= s.front().t) {
      out[k] = s.front().v;
    } else if (j + 1 >= s.size()) {
      out[k] = s.back().v;
    } else {
      const double span = s[j + 1].t - s[j].t;
      const double w = span > 0 ? (t - s[j].t) / span : 0.0;
      out[k] = (1.0 - w) * s[j].v + w * s[j + 1].v;
    }
  }
  return out;
}

namespace {

// Variance below rounding noise of the mean counts as flat.
bool is_flat(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size()) <= 1e-20 * (1.0 + mean * mean);
}

std::optional<double> pearson(const double* a, const double* b, std::size_t n) {
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0) || !(sbb > 0)) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double lag_xcorr(const ScalarSeries& reference, const ScalarSeries& delayed, double max_lag,
                 double period) {
  if (!(period > 0) || !(max_lag >= 0)) throw UndefinedMetric("lag_xcorr: bad period or max_lag");
  if (reference.size() < 2 || delayed.size() < 2) {
    throw InsufficientData("lag_xcorr: need at least two samples per series");
  }
  const double t0 = std::max(reference.front().t, delayed.front().t);
  const double t1 = std::min(reference.back().t, delayed.back().t);
  if (!(t1 - t0 >= 4.0 * max_lag)) throw InsufficientData("lag_xcorr: overlap shorter than 4 max_lag");

  const auto count = static_cast<std::size_t>(std::floor((t1 - t0) / period + 1e-9)) + 1;
  const auto ref = resample(reference, t0, period, count);
  const auto del = resample(delayed, t0, period, count);
  if (is_flat(ref) || is_flat(del)) {
    throw UndefinedMetric("lag_xcorr: flat series");
  }

  const auto max_shift = static_cast<long>(std::floor(max_lag / period + 1e-9));
  long best_shift = 0;
  double best_corr = -2.0;
  // Visit 0, +1, -1, +2, -2, ... so equal correlations keep the smaller |lag|.
  for (long k = 0; k <= 2 * max_shift; ++k) {
    const long shift = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
    const long n = static_cast<long>(count) - std::labs(shift);
    if (n < 2) continue;
    const double* a = ref.data() + (shift < 0 ? -shift : 0);
    const double* b = del.data() + (shift > 0 ? shift : 0);
    const auto c = pearson(a, b, static_cast<std::size_t>(n));
    if (c && *c > best_corr) {
      best_corr = *c;
      best_shift = shift;
    }
  }
  return static_cast<double>(best_shift) * period;
}

std::optional<double> axis_median_lag(const TimedSeries& reference, const TimedSeries& delayed,
                                      double max_lag, double period) {
  std::vector<double> lags;
  for (int axis = 0; axis < 3; ++axis) {
    ScalarSeries r, d;
    r.reserve(reference.size());
    d.reserve(delayed.size());
    for (const auto& s : reference) r.push_back({s.t, s.p(axis)});
    for (const auto& s : delayed) d.push_back({s.t, s.p(axis)});
    try {
      lags.push_back(lag_xcorr(r, d, max_lag, period));
    } catch (const UndefinedMetric&) {
      // axis carries no signal
    }
  }
  if (lags.empty()) return std::nullopt;
  std::sort(lags.begin(), lags.end());
  const std::size_t mid = lags.size() / 2;
  return lags.size() % 2 == 1 ? lags[mid] : 0.5 * (lags[mid - 1] + lags[mid]);
}

}  // namespace hunter
