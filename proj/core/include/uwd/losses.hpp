#pragma once

#include <span>
#include <vector>

#include "uwd/camera.hpp"
#include "uwd/image.hpp"

namespace uwd {

struct LossConfig {
  double alpha = 0.85;  // SSIM share of the photometric error
  int ssim_window = 3;
  double ssim_c1 = 0.01 * 0.01;
  double ssim_c2 = 0.03 * 0.03;

  void validate() const;
};

/// Per-pixel loss with validity. Reductions only see valid pixels.
struct LossMap {
  int height = 0;
  int width = 0;
  std::vector<double> value;
  std::vector<std::uint8_t> valid;

  LossMap() = default;
  LossMap(int h, int w, double fill = 0.0);

  double at(int y, int x) const { return value[static_cast<std::size_t>(y) * width + x]; }
  std::size_t valid_count() const;
  /// Values at valid pixels, in raster order.
  std::vector<double> valid_values() const;
  /// Mean over valid pixels; 0 when none are valid.
  double mean() const;
};

/// Linear decay of the distillation weight from lambda0 to zero over
/// `decay_steps` optimisation steps.
struct DistillConfig {
  double tau = 0.03;  // metres
  double lambda0 = 1.0;
  long decay_steps = 100000;

  void validate() const;
  double weight_at(long step) const;
};

/// Per-pixel SSIM over a ssim_window box with reflection padding, averaged
/// over channels. Values lie in [-1, 1].
LossMap ssim_map(const Image& a, const Image& b, const LossConfig& cfg);

/// alpha/2 * (1 - SSIM) + (1 - alpha) * |a - b|, channel averaged.
LossMap photometric_error(const Image& a, const Image& b, const LossConfig& cfg);

struct PhotometricGradient {
  double value = 0.0;  // mean photometric error over the selected pixels
  Image grad;          // d value / d a, same shape as a
  std::size_t selected = 0;
};

/// Mean photometric error over the pixels kept by `select` (all pixels when
/// null) and its analytic gradient with respect to `a`.
PhotometricGradient photometric_error_gradient(const Image& a, const Image& b,
                                               const LossConfig& cfg,
                                               const Mask* select = nullptr);

/// Per-pixel minimum photometric error over the warps valid at that pixel.
LossMap min_reprojection_loss(const Image& target, std::span<const Warp> warps,
                              const LossConfig& cfg);

/// Edge-aware smoothness of the mean-normalised depth; mean over valid pixels.
double smoothness_loss(const DepthMap& depth, const Image& img);

struct SmoothnessGradient {
  double value = 0.0;
  std::vector<double> grad;  // d value / d depth, zero at invalid pixels
};

SmoothnessGradient smoothness_loss_gradient(const DepthMap& depth, const Image& img);

struct DistillationResult {
  double loss = 0.0;
  bool supervised = false;  // false when no pixel passed the mask
  std::size_t pixels = 0;
};

/// Mean of lambda * log(|d_t - d_s| + 1) over pixels kept by m_c where both
/// depths are valid.
DistillationResult distillation_loss(const DepthMap& student, const DepthMap& teacher,
                                     const Mask& consistency, double lambda);

/// 1 - Pearson correlation of two equally long samples; in [0, 2]. Throws
/// DegenerateInputError for fewer than two samples or zero variance.
double pearson_loss(std::span<const double> student, std::span<const double> teacher);

/// Same over the jointly valid pixels of two depth maps.
double pearson_loss(const DepthMap& student, const DepthMap& teacher);

/// d pearson_loss / d student.
std::vector<double> pearson_loss_gradient(std::span<const double> student,
                                          std::span<const double> teacher);

}  // namespace uwd
