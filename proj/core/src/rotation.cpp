#include "uwd/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uwd/error.hpp"

namespace uwd {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
// Sampling positions this close to the border are treated as on it.
constexpr double kEdgeSlack = 1e-6;

struct Dims {
  int height;
  int width;
};

Dims turned_dims(int height, int width, int quarter_turns) {
  return quarter_turns % 2 == 0 ? Dims{height, width} : Dims{width, height};
}

// Source (row, col) feeding output (i, j) after `q` counter-clockwise quarter turns.
std::pair<int, int> quarter_turn_source(int i, int j, int height, int width, int q) {
  switch (q) {
    case 1: return {j, width - 1 - i};
    case 2: return {height - 1 - i, width - 1 - j};
    case 3: return {height - 1 - j, i};
    default: return {i, j};
  }
}

Image quarter_turn(const Image& img, int q) {
  if (q == 0) return img;
  const auto d = turned_dims(img.height(), img.width(), q);
  Image out(d.height, d.width, img.channels());
  for (int i = 0; i < d.height; ++i) {
    for (int j = 0; j < d.width; ++j) {
      const auto [y, x] = quarter_turn_source(i, j, img.height(), img.width(), q);
      for (int c = 0; c < img.channels(); ++c) out.at(i, j, c) = img.at(y, x, c);
    }
  }
  return out;
}

DepthMap quarter_turn(const DepthMap& depth, int q) {
  if (q == 0) return depth;
  const auto d = turned_dims(depth.height(), depth.width(), q);
  DepthMap out(d.height, d.width);
  for (int i = 0; i < d.height; ++i) {
    for (int j = 0; j < d.width; ++j) {
      const auto [y, x] = quarter_turn_source(i, j, depth.height(), depth.width(), q);
      out.set(i, j, depth.valid(y, x) ? depth.at(y, x) : 0.0);
    }
  }
  return out;
}

// Maps output pixel (i, j) of an h x w crop to continuous source coordinates
// of a `src_h` x `src_w` image rotated counter-clockwise by `radians`.
struct CropSampler {
  double cos_a, sin_a;
  double src_cx, src_cy;
  double crop_cx, crop_cy;

  CropSampler(int src_h, int src_w, CropSize crop, double radians)
      : cos_a(std::cos(radians)),
        sin_a(std::sin(radians)),
        src_cx((src_w - 1) / 2.0),
        src_cy((src_h - 1) / 2.0),
        crop_cx((crop.width - 1) / 2.0),
        crop_cy((crop.height - 1) / 2.0) {}

  std::pair<double, double> operator()(int i, int j) const {
    const double ox = j - crop_cx, oy = i - crop_cy;
    return {src_cx + ox * cos_a - oy * sin_a, src_cy + ox * sin_a + oy * cos_a};
  }
};

bool snap_inside(double& value, double max_value) {
  if (value < -kEdgeSlack || value > max_value + kEdgeSlack) return false;
  value = std::clamp(value, 0.0, max_value);
  return true;
}

}  // namespace

void RotationSpec::validate() const {
  if (!std::isfinite(theta) || !std::isfinite(gamma) || gamma < 0.0) {
    throw ParameterError("rotation: theta must be finite and gamma non-negative");
  }
  if (std::abs(theta) > gamma) {
    throw ParameterError("rotation: theta " + std::to_string(theta) + " outside [-gamma, gamma]");
  }
}

AngleDecomposition decompose_angle(double theta_deg) {
  if (!std::isfinite(theta_deg)) throw ParameterError("rotation angle must be finite");
  const double wrapped = std::fmod(theta_deg, 360.0);
  const double turns = std::ceil(wrapped / 90.0 - 0.5);
  AngleDecomposition out;
  out.residual = wrapped - 90.0 * turns;
  out.quarter_turns = ((static_cast<int>(turns) % 4) + 4) % 4;
  return out;
}

CropSize crop_dims(int height, int width, double theta_deg) {
  if (height <= 0 || width <= 0) throw ParameterError("crop_dims: dimensions must be positive");
  const auto dec = decompose_angle(theta_deg);
  const auto d = turned_dims(height, width, dec.quarter_turns);
  if (dec.residual == 0.0) return {d.height, d.width};

  const double angle = std::abs(dec.residual);
  if (angle >= 45.0 - 1e-12) {
    throw GeometryError("crop_dims: residual angle of 45 degrees has no inscribed crop");
  }
  const double t = angle * kDegToRad;
  const double c = std::cos(t), s = std::sin(t), c2 = std::cos(2.0 * t);
  const double h = (d.height * c - d.width * s) / c2;
  const double w = (d.width * c - d.height * s) / c2;
  const int hi = static_cast<int>(std::floor(h + 1e-9));
  const int wi = static_cast<int>(std::floor(w + 1e-9));
  if (hi < 1 || wi < 1) {
    throw GeometryError("crop_dims: a " + std::to_string(height) + "x" + std::to_string(width) +
                        " image has no crop at " + std::to_string(theta_deg) + " degrees");
  }
  return {hi, wi};
}

Image rotate_center_crop(const Image& img, const RotationSpec& spec, double outside_fill) {
  const auto dec = decompose_angle(spec.theta);
  const auto crop = crop_dims(img.height(), img.width(), spec.theta);
  Image turned = quarter_turn(img, dec.quarter_turns);
  if (dec.residual == 0.0) return turned;

  const CropSampler sampler(turned.height(), turned.width(), crop, dec.residual * kDegToRad);
  const int ch = turned.channels();
  const double max_u = turned.width() - 1, max_v = turned.height() - 1;
  Image out(crop.height, crop.width, ch);
  for (int i = 0; i < crop.height; ++i) {
    for (int j = 0; j < crop.width; ++j) {
      auto [u, v] = sampler(i, j);
      if (!snap_inside(u, max_u) || !snap_inside(v, max_v)) {
        for (int c = 0; c < ch; ++c) out.at(i, j, c) = outside_fill;
        continue;
      }
      const int x0 = static_cast<int>(std::floor(u)), y0 = static_cast<int>(std::floor(v));
      const int x1 = std::min(x0 + 1, turned.width() - 1);
      const int y1 = std::min(y0 + 1, turned.height() - 1);
      const double fx = u - x0, fy = v - y0;
      for (int c = 0; c < ch; ++c) {
        out.at(i, j, c) = turned.at(y0, x0, c) * (1.0 - fx) * (1.0 - fy) +
                          turned.at(y0, x1, c) * fx * (1.0 - fy) +
                          turned.at(y1, x0, c) * (1.0 - fx) * fy + turned.at(y1, x1, c) * fx * fy;
      }
    }
  }
  return out;
}

DepthMap rotate_center_crop(const DepthMap& depth, const RotationSpec& spec) {
  const auto dec = decompose_angle(spec.theta);
  const auto crop = crop_dims(depth.height(), depth.width(), spec.theta);
  DepthMap turned = quarter_turn(depth, dec.quarter_turns);
  if (dec.residual == 0.0) return turned;

  const CropSampler sampler(turned.height(), turned.width(), crop, dec.residual * kDegToRad);
  const double max_u = turned.width() - 1, max_v = turned.height() - 1;
  DepthMap out(crop.height, crop.width);
  for (int i = 0; i < crop.height; ++i) {
    for (int j = 0; j < crop.width; ++j) {
      auto [u, v] = sampler(i, j);
      if (!snap_inside(u, max_u) || !snap_inside(v, max_v)) continue;
      const int x = static_cast<int>(std::lround(u)), y = static_cast<int>(std::lround(v));
      if (turned.valid(y, x)) out.set(i, j, turned.at(y, x));
    }
  }
  return out;
}

RotationSpec sample_rotation(double gamma, std::mt19937_64& rng) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw ParameterError("rotation range gamma must be non-negative");
  }
  std::uniform_real_distribution<double> dist(-gamma, gamma);
  return {gamma == 0.0 ? 0.0 : dist(rng), gamma};
}

}  // namespace uwd
