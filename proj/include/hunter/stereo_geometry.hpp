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

// Rectified pinhole stereo rig: projection of camera-frame points into a
// left/right pixel pair, triangulation back from disparity, and rigid
// transforms between the world frame W and the camera/hunter frame C.
//
// Camera frame convention: x right, y down, z forward along the optical axis.
// Pixel coordinates are measured from the principal point.

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <string>

#include "hunter/error.hpp"

namespace hunter {

template <typename Scalar>
using Point3 = Eigen::Matrix<Scalar, 3, 1>;

using Point3d = Point3<double>;

template <typename Scalar>
struct CameraModel {
  Scalar focal_length;    // px
  Scalar baseline;        // m
  int image_width;        // px
  int image_height;       // px
  Scalar frame_rate;      // Hz
  Scalar min_depth;       // m
  Scalar max_depth;       // m
  Scalar horizontal_fov;  // deg

  /// 640x480 @ 30 Hz, 92.8 deg horizontal FOV, 0.5-15 m depth range.
  /// The focal length follows from the FOV; the baseline is a typical value
  /// for this class of compact stereo module.
  static CameraModel defaults() {
    CameraModel cam;
    cam.image_width = 640;
    cam.image_height = 480;
    cam.frame_rate = Scalar(30);
    cam.min_depth = Scalar(0.5);
    cam.max_depth = Scalar(15);
    cam.horizontal_fov = Scalar(92.8);
    cam.focal_length = focal_from_fov(cam.horizontal_fov, cam.image_width);
    cam.baseline = Scalar(0.12);
    return cam;
  }

  static Scalar focal_from_fov(Scalar fov_deg, int width) {
    using std::tan;
    const Scalar half = fov_deg * Scalar(std::numbers::pi) / Scalar(360);
    return Scalar(width) / (Scalar(2) * tan(half));
  }

  Scalar fov_from_focal() const {
    using std::atan;
    return Scalar(2) * atan(Scalar(image_width) / (Scalar(2) * focal_length)) * Scalar(180) /
           Scalar(std::numbers::pi);
  }

  Scalar frame_period() const { return Scalar(1) / frame_rate; }

  /// Throws ConfigError naming the first violated invariant. `prefix` is
  /// prepended to field names (e.g. "camera.").
  void validate(const std::string& prefix = "camera.") const {
    if (!(focal_length > 0)) throw ConfigError(prefix + "focal_length", "must be > 0");
    if (!(baseline > 0)) throw ConfigError(prefix + "baseline", "must be > 0");
    if (image_width <= 0) throw ConfigError(prefix + "image_width", "must be > 0");
    if (image_height <= 0) throw ConfigError(prefix + "image_height", "must be > 0");
    if (!(frame_rate > 0)) throw ConfigError(prefix + "frame_rate", "must be > 0");
    if (!(min_depth > 0)) throw ConfigError(prefix + "min_depth", "must be > 0");
    if (!(max_depth > min_depth)) throw ConfigError(prefix + "max_depth", "must exceed min_depth");
    using std::abs;
    if (!(abs(fov_from_focal() - horizontal_fov) <= Scalar(0.01) * horizontal_fov)) {
      throw ConfigError(prefix + "horizontal_fov",
                        "inconsistent with focal_length and image_width (>1% off)");
    }
  }
};

using CameraModeld = CameraModel<double>;

/// Rectified correspondence: both views share the scanline `left_v`.
template <typename Scalar>
struct PixelPair {
  Scalar left_u;
  Scalar left_v;
  Scalar right_u;

  Scalar disparity() const { return left_u - right_u; }
};

using PixelPaird = PixelPair<double>;

/// Disparity triangulation: [X Y Z] = b / (uL - uR) * [uL vL f].
template <typename Scalar>
Point3<Scalar> triangulate(const PixelPair<Scalar>& pp, const CameraModel<Scalar>& cam) {
  const Scalar d = pp.disparity();
  if (!(d > 0)) throw PointAtInfinity("triangulate: non-positive disparity");
  const Scalar s = cam.baseline / d;
  return Point3<Scalar>(s * pp.left_u, s * pp.left_v, s * cam.focal_length);
}

/// Inverse of triangulate(). Pixel coordinates stay real-valued.
template <typename Scalar>
PixelPair<Scalar> project(const Point3<Scalar>& p, const CameraModel<Scalar>& cam) {
  if (!(p.z() > 0) || p.z() < cam.min_depth) {
    throw BehindCamera("project: depth below camera minimum");
  }
  const Scalar inv_z = Scalar(1) / p.z();
  PixelPair<Scalar> pp;
  pp.left_u = cam.focal_length * p.x() * inv_z;
  pp.left_v = cam.focal_length * p.y() * inv_z;
  pp.right_u = pp.left_u - cam.focal_length * cam.baseline * inv_z;
  return pp;
}

/// True when the pixel pair falls inside both images.
template <typename Scalar>
bool in_image(const PixelPair<Scalar>& pp, const CameraModel<Scalar>& cam) {
  const Scalar hw = Scalar(cam.image_width) / 2;
  const Scalar hh = Scalar(cam.image_height) / 2;
  return pp.left_u >= -hw && pp.left_u < hw && pp.right_u >= -hw && pp.right_u < hw &&
         pp.left_v >= -hh && pp.left_v < hh;
}

/// Rigid transform p' = R p + t. Rotation is checked for orthonormality and
/// positive determinant on construction.
template <typename Scalar>
class RigidTransform {
 public:
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

  RigidTransform() : rotation_(Matrix3::Identity()), translation_(Vector3::Zero()) {}

  RigidTransform(const Matrix3& rotation, const Vector3& translation)
      : rotation_(rotation), translation_(translation) {
    using std::abs;
    const Scalar tol = Scalar(1e-9);
    if (!rotation_.allFinite() || !translation_.allFinite() ||
        !(rotation_.transpose() * rotation_).isApprox(Matrix3::Identity(), tol) ||
        abs(rotation_.determinant() - Scalar(1)) > tol) {
      throw InvalidPose("rotation is not a proper orthonormal matrix");
    }
  }

  static RigidTransform translation(const Vector3& t) { return {Matrix3::Identity(), t}; }

  /// Rotation by `yaw` about the camera y axis (down), then translation.
  /// Positive yaw turns the optical axis toward +x.
  static RigidTransform from_yaw(Scalar yaw, const Vector3& t) {
    return {Eigen::AngleAxis<Scalar>(yaw, Vector3::UnitY()).toRotationMatrix(), t};
  }

  const Matrix3& rotation() const { return rotation_; }
  const Vector3& translation() const { return translation_; }

  Vector3 operator*(const Vector3& p) const { return rotation_ * p + translation_; }

  RigidTransform operator*(const RigidTransform& other) const {
    return RigidTransform(rotation_ * other.rotation_, rotation_ * other.translation_ + translation_,
                          Unchecked{});
  }

  RigidTransform inverse() const {
    const Matrix3 rt = rotation_.transpose();
    return RigidTransform(rt, -(rt * translation_), Unchecked{});
  }

 private:
  struct Unchecked {};
  RigidTransform(const Matrix3& r, const Vector3& t, Unchecked) : rotation_(r), translation_(t) {}

  Matrix3 rotation_;
  Vector3 translation_;
};

using RigidTransformd = RigidTransform<double>;

template <typename Scalar>
Point3<Scalar> transform_point(const Point3<Scalar>& p, const RigidTransform<Scalar>& pose) {
  return pose * p;
}

}  // namespace hunter
