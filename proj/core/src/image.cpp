#include "uwd/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uwd/error.hpp"

namespace uwd {
namespace {

void check_dims(int height, int width) {
  if (height <= 0 || width <= 0) {
    throw ParameterError("raster dimensions must be positive, got " + std::to_string(height) +
                         "x" + std::to_string(width));
  }
}

bool usable_depth(double d) { return std::isfinite(d) && d > 0.0; }

}  // namespace

Image::Image(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  check_dims(height, width);
  if (channels != 1 && channels != 3) {
    throw ParameterError("image must have 1 or 3 channels, got " + std::to_string(channels));
  }
  if (!std::isfinite(fill)) throw ParameterError("image fill value must be finite");
  data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

Image::Image(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  check_dims(height, width);
  if (channels != 1 && channels != 3) {
    throw ParameterError("image must have 1 or 3 channels, got " + std::to_string(channels));
  }
  if (data_.size() != static_cast<std::size_t>(height) * width * channels) {
    throw ParameterError("image buffer size does not match its shape");
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); })) {
    throw ParameterError("image contains non-finite values");
  }
}

double Image::mean() const {
  if (data_.empty()) return 0.0;
  return std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
}

Mask::Mask(int height, int width, bool keep) : height_(height), width_(width) {
  check_dims(height, width);
  keep_.assign(static_cast<std::size_t>(height) * width, keep ? 1 : 0);
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(keep_.begin(), keep_.end(), std::uint8_t{1}));
}

double Mask::keep_rate() const {
  return keep_.empty() ? 0.0 : static_cast<double>(count()) / static_cast<double>(keep_.size());
}

Mask operator&(const Mask& a, const Mask& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw ParameterError("mask shapes differ");
  }
  Mask out(a.height(), a.width(), false);
  for (std::size_t i = 0; i < a.pixel_count(); ++i) out.set(i, a[i] && b[i]);
  return out;
}

DepthMap::DepthMap(int height, int width, double fill) : height_(height), width_(width) {
  check_dims(height, width);
  const auto n = static_cast<std::size_t>(height) * width;
  const bool ok = usable_depth(fill);
  depth_.assign(n, ok ? fill : 0.0);
  valid_.assign(n, ok ? 1 : 0);
}

DepthMap::DepthMap(int height, int width, std::span<const double> values)
    : height_(height), width_(width) {
  check_dims(height, width);
  const auto n = static_cast<std::size_t>(height) * width;
  if (values.size() != n) throw ParameterError("depth buffer size does not match its shape");
  depth_.resize(n);
  valid_.resize(n);
  for (std::size_t i = 0; i < n; ++i) set(i, values[i]);
}

void DepthMap::set(int y, int x, double depth) {
  set(static_cast<std::size_t>(y) * width_ + x, depth);
}

void DepthMap::set(std::size_t i, double depth) {
  const bool ok = usable_depth(depth);
  depth_[i] = ok ? depth : 0.0;
  valid_[i] = ok ? 1 : 0;
}

std::size_t DepthMap::valid_count() const {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

Mask DepthMap::validity() const {
  Mask m(height_, width_, false);
  for (std::size_t i = 0; i < valid_.size(); ++i) m.set(i, valid_[i] != 0);
  return m;
}

CoordField::CoordField(int h, int w) : height(h), width(w) {
  check_dims(h, w);
  const auto n = static_cast<std::size_t>(h) * w;
  u.assign(n, 0.0);
  v.assign(n, 0.0);
  valid.assign(n, 1);
}

CoordField CoordField::identity(int h, int w) {
  CoordField f(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto i = static_cast<std::size_t>(y) * w + x;
      f.u[i] = x;
      f.v[i] = y;
    }
  }
  return f;
}

}  // namespace uwd
