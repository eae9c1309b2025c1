#pragma once

#include <Eigen/Core>
#include <vector>

#include "uwd/image.hpp"
#include "uwd/imaging.hpp"

namespace uwd {

/// Pinhole intrinsics in pixels.
struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  void validate() const;
  Eigen::Matrix3d matrix() const;
  /// K^-1 * (u, v, 1).
  Eigen::Vector3d unproject(double u, double v) const {
    return {(u - cx) / fx, (v - cy) / fy, 1.0};
  }
};

/// Rigid transform mapping points from the target camera frame into the
/// source camera frame: X_s = rotation * X_t + translation.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Pose identity() { return {}; }
  /// Validates orthonormality (1e-6) and the homogeneous bottom row.
  static Pose from_matrix(const Eigen::Matrix4d& m);
  Eigen::Matrix4d matrix() const;

  Pose inverse() const;
  /// (this * other)(X) = this(other(X)).
  Pose operator*(const Pose& other) const;
  Eigen::Vector3d apply(const Eigen::Vector3d& x) const { return rotation * x + translation; }

  void validate() const;
};

struct PointMap {
  int height = 0;
  int width = 0;
  std::vector<Eigen::Vector3d> xyz;
  std::vector<std::uint8_t> valid;

  const Eigen::Vector3d& at(int y, int x) const {
    return xyz[static_cast<std::size_t>(y) * width + x];
  }
};

/// Source-pixel coordinates of every target pixel, K * T * D(p) * K^-1 * p
/// after perspective division. Invalid depths and points with transformed
/// z <= 0 are marked invalid.
CoordField reproject(const DepthMap& depth_t, const Pose& pose_ts, const Intrinsics& K);

struct Warp {
  Image image;
  Mask mask;
};

/// Inverse-warps `src` into the target view.
Warp synthesize_view(const Image& src, const DepthMap& depth_t, const Pose& pose_ts,
                     const Intrinsics& K);

/// Camera-frame points D(p) * K^-1 * (u, v, 1).
PointMap backproject_points(const DepthMap& depth, const Intrinsics& K);

/// Pixel coordinates of a camera-frame point. z must be positive.
Eigen::Vector2d project(const Eigen::Vector3d& point, const Intrinsics& K);

}  // namespace uwd
