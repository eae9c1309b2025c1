#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace uwd {

/// Row-major, channel-interleaved raster with 1 or 3 channels. Values are
/// nominally in [0,1] and must be finite.
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels, double fill = 0.0);
  /// Takes ownership of `data` (size height*width*channels). Throws
  /// ParameterError on a size mismatch or a non-finite value.
  Image(int height, int width, int channels, std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(height_) * width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int y, int x, int c = 0) { return data_[index(y, x, c)]; }
  double at(int y, int x, int c = 0) const { return data_[index(y, x, c)]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const Image& other) const {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }

  /// Mean over every value (all channels).
  double mean() const;

 private:
  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Binary per-pixel map. keep = 1 means the pixel participates.
class Mask {
 public:
  Mask() = default;
  Mask(int height, int width, bool keep = true);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t pixel_count() const { return keep_.size(); }

  bool at(int y, int x) const { return keep_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int y, int x, bool keep) {
    keep_[static_cast<std::size_t>(y) * width_ + x] = keep ? 1 : 0;
  }
  bool operator[](std::size_t i) const { return keep_[i] != 0; }
  void set(std::size_t i, bool keep) { keep_[i] = keep ? 1 : 0; }

  std::size_t count() const;
  double keep_rate() const;

  std::span<const std::uint8_t> data() const { return keep_; }

  bool operator==(const Mask&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> keep_;
};

/// Logical AND of two equally sized masks.
Mask operator&(const Mask& a, const Mask& b);

/// Per-pixel depth with a validity channel. A pixel is valid only when its
/// depth is finite and strictly positive; invalid pixels store 0.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int height, int width, double fill = 0.0);
  /// Builds a map from raw values; NaN, inf and non-positive values become
  /// invalid.
  DepthMap(int height, int width, std::span<const double> values);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t pixel_count() const { return depth_.size(); }

  double at(int y, int x) const { return depth_[static_cast<std::size_t>(y) * width_ + x]; }
  bool valid(int y, int x) const { return valid_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  double operator[](std::size_t i) const { return depth_[i]; }
  bool valid(std::size_t i) const { return valid_[i] != 0; }

  /// Stores `depth`; the pixel becomes invalid if the value is not a usable depth.
  void set(int y, int x, double depth);
  void set(std::size_t i, double depth);
  void invalidate(int y, int x) { set(y, x, 0.0); }

  std::size_t valid_count() const;
  Mask validity() const;

  std::span<const double> values() const { return depth_; }

  bool same_shape(const DepthMap& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool same_shape(const Image& image) const {
    return height_ == image.height() && width_ == image.width();
  }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> depth_;
  std::vector<std::uint8_t> valid_;
};

/// Continuous source-pixel coordinates, one (u, v) per target pixel. `valid`
/// carries geometric validity (e.g. a point behind the source camera).
struct CoordField {
  int height = 0;
  int width = 0;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<std::uint8_t> valid;

  CoordField() = default;
  CoordField(int h, int w);

  /// Integer-grid identity coordinates.
  static CoordField identity(int h, int w);
};

}  // namespace uwd
