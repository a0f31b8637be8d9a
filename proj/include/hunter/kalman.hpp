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

// Discrete Kalman filter for a 3D constant-acceleration target measured in
// position only.
//
// State layout is axis-major: [x, vx, ax, y, vy, ay, z, vz, az]. Transition,
// process noise and initial covariance are block diagonal with one 3x3 block
// per axis.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "hunter/error.hpp"

namespace hunter {

template <typename Scalar>
struct ConstantAccelerationModel {
  static constexpr int kStateDim = 9;
  static constexpr int kMeasDim = 3;

  using StateVector = Eigen::Matrix<Scalar, kStateDim, 1>;
  using StateMatrix = Eigen::Matrix<Scalar, kStateDim, kStateDim>;
  using MeasVector = Eigen::Matrix<Scalar, kMeasDim, 1>;
  using MeasMatrix = Eigen::Matrix<Scalar, kMeasDim, kStateDim>;
  using AxisMatrix = Eigen::Matrix<Scalar, 3, 3>;

  static constexpr int index(int axis, int derivative) { return 3 * axis + derivative; }

  template <typename Block>
  static StateMatrix block_diagonal(const Block& b) {
    StateMatrix m = StateMatrix::Zero();
    for (int a = 0; a < 3; ++a) m.template block<3, 3>(3 * a, 3 * a) = b;
    return m;
  }

  static AxisMatrix axis_transition(Scalar dt) {
    AxisMatrix f;
    f << 1, dt, dt * dt / 2,
         0, 1, dt,
         0, 0, 1;
    return f;
  }

  /// Integrated white-jerk noise over one step, scaled by `q`.
  static AxisMatrix axis_process_noise(Scalar dt, Scalar q) {
    const Scalar dt2 = dt * dt, dt3 = dt2 * dt, dt4 = dt3 * dt, dt5 = dt4 * dt;
    AxisMatrix w;
    w << dt5 / 20, dt4 / 8, dt3 / 6,
         dt4 / 8,  dt3 / 3, dt2 / 2,
         dt3 / 6,  dt2 / 2, dt;
    return q * w;
  }

  static StateMatrix transition(Scalar dt) { return block_diagonal(axis_transition(dt)); }
  static StateMatrix process_noise(Scalar dt, Scalar q) {
    return block_diagonal(axis_process_noise(dt, q));
  }

  /// p * diag(1 m^2, (30 m/s)^2, (5.5 m/s^2)^2) per axis.
  static StateMatrix initial_covariance(Scalar p) {
    AxisMatrix d = AxisMatrix::Zero();
    d.diagonal() << Scalar(1.0 * 1.0), Scalar(30.0 * 30.0), Scalar(5.5 * 5.5);
    return block_diagonal(p * d);
  }

  static MeasMatrix measurement() {
    MeasMatrix h = MeasMatrix::Zero();
    for (int a = 0; a < 3; ++a) h(a, index(a, 0)) = 1;
    return h;
  }
};

template <typename Scalar>
struct GaussianState {
  using Model = ConstantAccelerationModel<Scalar>;
  typename Model::StateVector mean = Model::StateVector::Zero();
  typename Model::StateMatrix covariance = Model::StateMatrix::Identity();

  Eigen::Matrix<Scalar, 3, 1> position() const { return {mean(0), mean(3), mean(6)}; }
  Eigen::Matrix<Scalar, 3, 1> velocity() const { return {mean(1), mean(4), mean(7)}; }
  Eigen::Matrix<Scalar, 3, 1> acceleration() const { return {mean(2), mean(5), mean(8)}; }

  Eigen::Matrix<Scalar, 3, 3> position_covariance() const {
    return Model::measurement() * covariance * Model::measurement().transpose();
  }
};

using GaussianStated = GaussianState<double>;

template <typename Scalar>
GaussianState<Scalar> make_state(const Eigen::Matrix<Scalar, 3, 1>& position, Scalar p) {
  using Model = ConstantAccelerationModel<Scalar>;
  GaussianState<Scalar> s;
  s.mean.setZero();
  for (int a = 0; a < 3; ++a) s.mean(Model::index(a, 0)) = position(a);
  s.covariance = Model::initial_covariance(p);
  return s;
}

/// x <- A x, P <- A P A^T + Q.
template <typename Scalar>
GaussianState<Scalar> kalman_predict(const GaussianState<Scalar>& s, Scalar dt, Scalar q) {
  using Model = ConstantAccelerationModel<Scalar>;
  if (!(dt > 0)) throw InvalidTimestep("predict: dt must be positive");
  const auto a = Model::transition(dt);
  GaussianState<Scalar> out;
  out.mean = a * s.mean;
  out.covariance = a * s.covariance * a.transpose() + Model::process_noise(dt, q);
  out.covariance = Scalar(0.5) * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

/// Position measurement update with R = r * I3.
template <typename Scalar>
GaussianState<Scalar> kalman_update(const GaussianState<Scalar>& s,
                                    const Eigen::Matrix<Scalar, 3, 1>& z, Scalar r) {
  using Model = ConstantAccelerationModel<Scalar>;
  const auto h = Model::measurement();
  const Eigen::Matrix<Scalar, 3, 1> innovation = z - h * s.mean;
  const Eigen::Matrix<Scalar, 3, 3> innovation_cov =
      h * s.covariance * h.transpose() + r * Eigen::Matrix<Scalar, 3, 3>::Identity();

  const Eigen::LLT<Eigen::Matrix<Scalar, 3, 3>> llt(innovation_cov);
  if (llt.info() != Eigen::Success) throw NumericalFailure("update: innovation covariance not SPD");
  // K = P H^T S^-1, computed as (S^-1 H P)^T using the symmetry of S and P.
  const Eigen::Matrix<Scalar, Model::kStateDim, 3> gain =
      llt.solve(h * s.covariance).transpose();

  GaussianState<Scalar> out;
  out.mean = s.mean + gain * innovation;
  out.covariance = (Model::StateMatrix::Identity() - gain * h) * s.covariance;
  out.covariance = Scalar(0.5) * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

}  // namespace hunter
