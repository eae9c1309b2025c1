#pragma once

#include <cstdint>
#include <random>

#include "uwd/image.hpp"

namespace uwd {

struct RotationSpec {
  double theta = 0.0;  // degrees, positive = counter-clockwise on screen
  double gamma = 0.0;  // sampling range in degrees

  void validate() const;
};

/// An angle split into whole quarter turns plus a residual in (-45, 45].
struct AngleDecomposition {
  int quarter_turns = 0;  // counter-clockwise, in [0, 3]
  double residual = 0.0;  // degrees
};

AngleDecomposition decompose_angle(double theta_deg);

struct CropSize {
  int height = 0;
  int width = 0;
  bool operator==(const CropSize&) const = default;
};

/// Size of the largest axis-aligned, center-anchored crop that stays inside
/// an H x W image rotated by theta. Quarter turns are lossless and only swap
/// H and W; the inscribed-rectangle formula applies to the residual angle.
/// Throws GeometryError when the residual is +-45 degrees or the crop would
/// be empty.
CropSize crop_dims(int height, int width, double theta_deg);

/// Rotates by theta about the image center and crops to crop_dims. Samples
/// falling outside the source extent take `outside_fill`; for any feasible
/// angle there are none.
Image rotate_center_crop(const Image& img, const RotationSpec& spec, double outside_fill = 0.0);

/// Same geometry as the image overload, using nearest-neighbour lookups so
/// that depths are never blended across edges.
DepthMap rotate_center_crop(const DepthMap& depth, const RotationSpec& spec);

/// Draws theta uniformly from [-gamma, gamma].
RotationSpec sample_rotation(double gamma, std::mt19937_64& rng);

}  // namespace uwd
