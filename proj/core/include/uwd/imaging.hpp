#pragma once

#include <span>
#include <vector>

#include "uwd/image.hpp"

namespace uwd {

struct BlurConfig {
  int k = 2;           // half-window, the kernel is (2k+1) x (2k+1)
  double sigma = 1.5;  // pixels

  void validate() const;
};

/// Mirror index into [0, n) without repeating the edge sample (reflect-101).
int reflect_index(int i, int n);

/// Normalized 1-D Gaussian taps for `cfg` (2k+1 values summing to 1). The 2-D
/// kernel is the outer product of these taps with itself.
std::vector<double> gaussian_taps(const BlurConfig& cfg);

/// Separable Gaussian blur with a normalized kernel and reflection padding.
Image gaussian_blur(const Image& img, const BlurConfig& cfg);

struct Gradients {
  Image gx;
  Image gy;
};

/// Forward differences. The last column of gx and the last row of gy are zero.
Gradients image_gradients(const Image& img);

/// Nearest-rank percentile: the element at index ceil(q/100 * n) - 1 of the
/// ascending sort, clamped to [0, n-1].
double percentile(std::span<const double> values, double q);

/// Conventional median (mean of the two central elements for even counts).
double median(std::span<const double> values);

struct Sampled {
  Image image;
  Mask mask;
};

/// Bilinear interpolation at continuous coordinates. Coordinates outside
/// [0, W-1] x [0, H-1] are clamped to the border and flagged invalid, as are
/// coordinates the field itself marks invalid.
Sampled bilinear_sample(const Image& img, const CoordField& coords);

/// Min-max normalization over valid pixels, as a 1-channel image in [0,1].
/// Invalid pixels and constant maps map to 0.
Image normalize_depth(const DepthMap& depth);

}  // namespace uwd
