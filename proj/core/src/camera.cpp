#include "uwd/camera.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "uwd/error.hpp"

namespace uwd {

void Intrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy)) {
    throw ParameterError("intrinsics: focal lengths must be positive and finite");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy)) {
    throw ParameterError("intrinsics: principal point must be finite");
  }
}

Eigen::Matrix3d Intrinsics::matrix() const {
  Eigen::Matrix3d k;
  k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
  return k;
}

Pose Pose::from_matrix(const Eigen::Matrix4d& m) {
  if (!m.allFinite()) throw ParameterError("pose matrix contains non-finite values");
  const Eigen::RowVector4d bottom = m.row(3);
  if ((bottom - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > 1e-9) {
    throw ParameterError("pose matrix bottom row must be [0 0 0 1]");
  }
  Pose p;
  p.rotation = m.topLeftCorner<3, 3>();
  p.translation = m.topRightCorner<3, 1>();
  p.validate();
  return p;
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

void Pose::validate() const {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw ParameterError("pose contains non-finite values");
  }
  const double ortho = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
                           .cwiseAbs()
                           .maxCoeff();
  if (ortho > 1e-6) throw ParameterError("pose rotation is not orthonormal");
  if (std::abs(rotation.determinant() - 1.0) > 1e-6) {
    throw ParameterError("pose rotation must have determinant +1");
  }
}

Pose Pose::inverse() const {
  Pose inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

Pose Pose::operator*(const Pose& other) const {
  Pose out;
  out.rotation = rotation * other.rotation;
  out.translation = rotation * other.translation + translation;
  return out;
}

Eigen::Vector2d project(const Eigen::Vector3d& point, const Intrinsics& K) {
  return {K.fx * point.x() / point.z() + K.cx, K.fy * point.y() / point.z() + K.cy};
}

CoordField reproject(const DepthMap& depth_t, const Pose& pose_ts, const Intrinsics& K) {
  K.validate();
  CoordField field(depth_t.height(), depth_t.width());
  const Eigen::Matrix3d motion = pose_ts.rotation - Eigen::Matrix3d::Identity();
  for (int y = 0; y < depth_t.height(); ++y) {
    for (int x = 0; x < depth_t.width(); ++x) {
      const auto i = static_cast<std::size_t>(y) * depth_t.width() + x;
      field.u[i] = x;
      field.v[i] = y;
      if (!depth_t.valid(i)) {
        field.valid[i] = 0;
        continue;
      }
      // Written as an offset from the target pixel so that a zero motion
      // reproduces the integer grid exactly.
      const Eigen::Vector3d target = depth_t[i] * K.unproject(x, y);
      const Eigen::Vector3d delta = motion * target + pose_ts.translation;
      const double z_source = target.z() + delta.z();
      if (!(z_source > 0.0)) {
        field.valid[i] = 0;
        continue;
      }
      const double denom = target.z() * z_source;
      field.u[i] = x + K.fx * (delta.x() * target.z() - target.x() * delta.z()) / denom;
      field.v[i] = y + K.fy * (delta.y() * target.z() - target.y() * delta.z()) / denom;
    }
  }
  return field;
}

Warp synthesize_view(const Image& src, const DepthMap& depth_t, const Pose& pose_ts,
                     const Intrinsics& K) {
  if (!depth_t.same_shape(src)) {
    throw ParameterError("synthesize_view: source image and target depth differ in resolution");
  }
  auto sampled = bilinear_sample(src, reproject(depth_t, pose_ts, K));
  return {std::move(sampled.image), std::move(sampled.mask)};
}

PointMap backproject_points(const DepthMap& depth, const Intrinsics& K) {
  K.validate();
  PointMap points;
  points.height = depth.height();
  points.width = depth.width();
  points.xyz.assign(depth.pixel_count(), Eigen::Vector3d::Zero());
  points.valid.assign(depth.pixel_count(), 0);
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      const auto i = static_cast<std::size_t>(y) * depth.width() + x;
      if (!depth.valid(i)) continue;
      points.xyz[i] = depth[i] * K.unproject(x, y);
      points.valid[i] = 1;
    }
  }
  return points;
}

}  // namespace uwd
