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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

#include "hunter/assignment.hpp"
#include "hunter/kalman.hpp"
#include "hunter/tracker.hpp"
#include "oracles.hpp"

using namespace hunter;
using Model = ConstantAccelerationModel<double>;

namespace {

Detection det(const Point3d& p, double t = 0.0) { return {p, t, 50}; }

GaussianStated state(double pos, double vel, double acc) {
  GaussianStated s;
  for (int a = 0; a < 3; ++a) {
    s.mean(Model::index(a, 0)) = pos;
    s.mean(Model::index(a, 1)) = vel;
    s.mean(Model::index(a, 2)) = acc;
  }
  s.covariance = Model::initial_covariance(1.0);
  return s;
}

double min_eigenvalue(const Model::StateMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<Model::StateMatrix>(m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

Point3d ca_truth(double t) {
  const Point3d p0(1.0, -0.5, 5.0), v0(0.8, 0.3, -0.4), a0(0.2, -0.1, 0.05);
  return p0 + v0 * t + 0.5 * a0 * t * t;
}

}  // namespace

TEST(KalmanPredict, RestStaysAtRest) {
  const auto s = state(0, 0, 0);
  const auto out = kalman_predict(s, 0.1, 1.0);
  EXPECT_TRUE(out.mean.isZero());
  const auto f = Model::transition(0.1);
  EXPECT_TRUE((out.covariance - f * s.covariance * f.transpose()).isApprox(Model::process_noise(0.1, 1.0)));
}

TEST(KalmanPredict, ConstantAccelerationKinematics) {
  const auto out = kalman_predict(state(0, 1, 2), 0.1, 1.0);
  EXPECT_NEAR(out.position().x(), 0.11, 1e-15);
  EXPECT_NEAR(out.velocity().y(), 1.2, 1e-15);
  EXPECT_NEAR(out.acceleration().z(), 2.0, 1e-15);
}

TEST(KalmanPredict, MeansCompose) {
  auto many = state(0.3, -1.1, 0.7);
  for (int k = 0; k < 30; ++k) many = kalman_predict(many, 1.0 / 30.0, 1.0);
  const auto once = kalman_predict(state(0.3, -1.1, 0.7), 1.0, 1.0);
  EXPECT_LT((many.mean - once.mean).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(KalmanPredict, RejectsNonPositiveStep) {
  EXPECT_THROW(kalman_predict(state(0, 0, 0), 0.0, 1.0), InvalidTimestep);
  EXPECT_THROW(kalman_predict(state(0, 0, 0), -0.1, 1.0), InvalidTimestep);
}

TEST(KalmanPredict, WhiteJerkBlock) {
  const double dt = 0.2, q = 3.0;
  const auto w = Model::axis_process_noise(dt, q);
  EXPECT_NEAR(w(0, 0), q * std::pow(dt, 5) / 20, 1e-15);
  EXPECT_NEAR(w(0, 1), q * std::pow(dt, 4) / 8, 1e-15);
  EXPECT_NEAR(w(0, 2), q * std::pow(dt, 3) / 6, 1e-15);
  EXPECT_NEAR(w(1, 1), q * std::pow(dt, 3) / 3, 1e-15);
  EXPECT_NEAR(w(1, 2), q * dt * dt / 2, 1e-15);
  EXPECT_NEAR(w(2, 2), q * dt, 1e-15);
  EXPECT_TRUE(w.isApprox(w.transpose()));
}

TEST(KalmanUpdate, ZeroInnovationKeepsMean) {
  const auto s = state(2.0, 0.5, -0.1);
  const auto out = kalman_update(s, s.position(), 1.0);
  EXPECT_LT((out.mean - s.mean).norm(), 1e-14);
}

TEST(KalmanUpdate, TinyMeasurementNoiseSnapsToMeasurement) {
  const auto s = state(2.0, 0.5, -0.1);
  const Point3d z(1.0, 4.0, -3.0);
  EXPECT_LT((kalman_update(s, z, 1e-12).position() - z).norm(), 1e-6);
}

TEST(KalmanUpdate, ScalarGain) {
  // Position variance 4, independent of velocity/acceleration, r = 1.
  GaussianStated s;
  s.mean.setZero();
  s.covariance = Model::StateMatrix::Identity();
  for (int a = 0; a < 3; ++a) s.covariance(Model::index(a, 0), Model::index(a, 0)) = 4.0;
  const auto out = kalman_update(s, Point3d(1, 1, 1), 1.0);
  EXPECT_NEAR(out.position().x(), 0.8, 1e-14);
  EXPECT_NEAR(out.covariance(0, 0), (1 - 0.8) * 4.0, 1e-14);
}

TEST(KalmanUpdate, CovarianceStaysSymmetricPsd) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> dt(1e-3, 0.5), scale(1e-3, 10), u(-20, 20);
  std::uniform_int_distribution<int> coin(0, 1), len(1, 30);
  for (int seq = 0; seq < 2000; ++seq) {
    auto s = make_state(Point3d(u(rng), u(rng), u(rng)), scale(rng));
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      if (coin(rng)) {
        s = kalman_predict(s, dt(rng), scale(rng));
      } else {
        const double before = s.position_covariance().trace();
        s = kalman_update(s, Point3d(u(rng), u(rng), u(rng)), scale(rng));
        EXPECT_LE(s.position_covariance().trace(), before * (1 + 1e-12));
      }
      ASSERT_LT((s.covariance - s.covariance.transpose()).cwiseAbs().maxCoeff(), 1e-9);
      ASSERT_GE(min_eigenvalue(s.covariance), -1e-9);
    }
  }
}

TEST(Assignment, BeatsGreedy) {
  Eigen::MatrixXd c(2, 2);
  c << 1, 2, 2, 100;
  const auto a = associate_costs(c, 50.0);
  ASSERT_EQ(a.matches.size(), 2u);
  EXPECT_EQ(a.matches[0], std::make_pair(std::size_t{0}, std::size_t{1}));
  EXPECT_EQ(a.matches[1], std::make_pair(std::size_t{1}, std::size_t{0}));
  EXPECT_DOUBLE_EQ(solve_assignment(c).total_cost, 4.0);
  EXPECT_DOUBLE_EQ(oracle::min_assignment_cost(c), 4.0);
}

TEST(Assignment, MatchesPermutationOracle) {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> cost(0, 10);
  for (int trial = 0; trial < 300; ++trial) {
    Eigen::MatrixXd c(dim(rng), dim(rng));
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j) c(i, j) = cost(rng);
    const auto sol = solve_assignment(c);
    EXPECT_NEAR(sol.total_cost, oracle::min_assignment_cost(c), 1e-9);
    std::set<int> cols;
    int assigned = 0;
    for (int j : sol.row_to_col) {
      if (j < 0) continue;
      ++assigned;
      EXPECT_TRUE(cols.insert(j).second);
    }
    EXPECT_EQ(assigned, std::min(c.rows(), c.cols()));
  }
}

TEST(Associate, NoTracks) {
  const auto a = associate({}, {det({0, 0, 1}), det({1, 0, 1})}, 1.0);
  EXPECT_TRUE(a.matches.empty());
  EXPECT_EQ(a.unmatched_detections.size(), 2u);
}

TEST(Associate, GateBreaksDistantPair) {
  const auto track = create_track(det({0, 0, 5}), TrackerParams{}, 0);
  const auto a = associate({track}, {det({3, 0, 5})}, 1.0);
  EXPECT_TRUE(a.matches.empty());
  EXPECT_EQ(a.unmatched_tracks.size(), 1u);
  EXPECT_EQ(a.unmatched_detections.size(), 1u);
}

TEST(CreateTrack, InitialCovariance) {
  TrackerParams params;
  const auto t = create_track(det({1, 2, 3}), params, 7);
  EXPECT_EQ(t.id, 7);
  EXPECT_EQ(t.position(), Point3d(1, 2, 3));
  EXPECT_TRUE(t.state.velocity().isZero());
  EXPECT_TRUE(t.state.acceleration().isZero());
  for (int a = 0; a < 3; ++a) {
    EXPECT_DOUBLE_EQ(t.state.covariance(Model::index(a, 0), Model::index(a, 0)), 1.0);
    EXPECT_DOUBLE_EQ(t.state.covariance(Model::index(a, 1), Model::index(a, 1)), 900.0);
    EXPECT_DOUBLE_EQ(t.state.covariance(Model::index(a, 2), Model::index(a, 2)), 30.25);
  }
  params.p = 4;
  const auto t4 = create_track(det({1, 2, 3}), params, 8);
  EXPECT_TRUE(t4.state.covariance.isApprox(4.0 * t.state.covariance));
}

TEST(Step, FirstDetectionCreatesTrack) {
  const auto s = step(TrackerSnapshot{}, {det({0.5, 0, 4})}, 0.0, TrackerParams{});
  ASSERT_EQ(s.tracks.size(), 1u);
  EXPECT_EQ(s.tracks[0].position(), Point3d(0.5, 0, 4));
  EXPECT_EQ(s.next_id, 1);
}

TEST(Step, ConsecutiveIds) {
  const auto s = step(TrackerSnapshot{}, {det({0, 0, 4}), det({3, 0, 4})}, 0.0, TrackerParams{});
  ASSERT_EQ(s.tracks.size(), 2u);
  EXPECT_EQ(s.tracks[1].id, s.tracks[0].id + 1);
}

TEST(Step, DeletedAtMaxMisses) {
  TrackerParams params;
  auto s = step(TrackerSnapshot{}, {det({0, 0, 4})}, 0.0, params);
  s.tracks[0].consecutive_misses = params.max_misses - 1;
  EXPECT_TRUE(step(s, {}, 1.0 / 30, params).tracks.empty());
}

TEST(Step, TimeMustIncrease) {
  const auto s = step(TrackerSnapshot{}, {}, 1.0, TrackerParams{});
  EXPECT_THROW(step(s, {}, 1.0, TrackerParams{}), InvalidTimestep);
}

TEST(Step, TracksConstantAccelerationTarget) {
  TrackerParams params;
  TrackerSnapshot s;
  double sq = 0;
  int n = 0;
  for (int k = 0; k <= 90; ++k) {
    const double t = k / 30.0;
    s = step(s, {det(ca_truth(t), t)}, t, params);
    ASSERT_EQ(s.tracks.size(), 1u);
    if (k >= 10) {
      sq += (s.tracks[0].position() - ca_truth(t)).squaredNorm();
      ++n;
    }
  }
  EXPECT_LT(std::sqrt(sq / n), 1e-3);
}

TEST(Step, SurvivesDropoutWithBoundedDrift) {
  TrackerParams params;
  const Point3d v(0.9, -0.2, 0.3);
  auto truth = [&](double t) -> Point3d { return Point3d(0, 0, 5) + v * t; };
  TrackerSnapshot s;
  int k = 0;
  for (; k < 60; ++k) s = step(s, {det(truth(k / 30.0), k / 30.0)}, k / 30.0, params);
  const auto id = s.tracks.at(0).id;
  std::vector<double> errors;
  for (int m = 0; m < params.max_misses - 1; ++m, ++k) {
    s = step(s, {}, k / 30.0, params);
    ASSERT_EQ(s.tracks.size(), 1u);
    errors.push_back((s.tracks[0].position() - truth(k / 30.0)).norm());
  }
  for (std::size_t m = 0; m < errors.size(); ++m) {
    EXPECT_LE(errors[m], (errors.front() + 1e-3) * static_cast<double>(m + 1));
  }
  s = step(s, {det(truth(k / 30.0), k / 30.0)}, k / 30.0, params);
  ASSERT_EQ(s.tracks.size(), 1u);
  EXPECT_EQ(s.tracks[0].id, id);
  EXPECT_EQ(s.tracks[0].consecutive_misses, 0);
}

TEST(Step, Deterministic) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> n(0, 0.05);
  std::vector<std::vector<Detection>> frames;
  for (int k = 0; k < 60; ++k) {
    const double t = k / 30.0;
    frames.push_back({det(ca_truth(t) + Point3d(n(rng), n(rng), n(rng)), t),
                      det(Point3d(-2, 1, 6) + Point3d(n(rng), n(rng), n(rng)), t)});
  }
  auto run = [&] {
    TrackerSnapshot s;
    for (int k = 0; k < 60; ++k) s = step(s, frames[k], k / 30.0, TrackerParams{});
    return s;
  };
  const auto a = run(), b = run();
  ASSERT_EQ(a.tracks.size(), b.tracks.size());
  for (std::size_t i = 0; i < a.tracks.size(); ++i) {
    EXPECT_EQ(a.tracks[i].id, b.tracks[i].id);
    EXPECT_EQ(a.tracks[i].state.mean, b.tracks[i].state.mean);
    EXPECT_EQ(a.tracks[i].state.covariance, b.tracks[i].state.covariance);
  }
}

TEST(BestTrack, OldestThenSmallestId) {
  TrackerSnapshot s;
  EXPECT_FALSE(best_track(s).has_value());
  for (auto [id, age] : {std::pair{0, 5}, {1, 30}, {2, 2}}) {
    Track t;
    t.id = id;
    t.age = age;
    s.tracks.push_back(t);
  }
  EXPECT_EQ(best_track(s)->age, 30);
  s.tracks = {};
  for (auto id : {7, 3}) {
    Track t;
    t.id = id;
    t.age = 10;
    s.tracks.push_back(t);
  }
  EXPECT_EQ(best_track(s)->id, 3);
}
