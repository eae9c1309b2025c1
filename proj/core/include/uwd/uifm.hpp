#pragma once

#include <array>
#include <span>
#include <vector>

#include "uwd/image.hpp"
#include "uwd/imaging.hpp"

namespace uwd {

using Rgb = std::array<double, 3>;

/// Scene-level parameters of the constant-backscatter formation model
/// I_c = J_c * exp(-beta_c * z) + B_c.
struct WaterModel {
  Rgb backscatter{0.0, 0.0, 0.0};   // B_c, in [0, 1)
  Rgb attenuation{0.0, 0.0, 0.0};  // beta_c, 1/m

  void validate() const;
};

struct SharpenConfig {
  BlurConfig lowpass{3, 2.0};
};

struct FrameWithDepth {
  Image image;
  DepthMap depth;
};

/// Per-channel mean of the darkest 0.1% values, clamped to [0, 0.99].
/// Requires a 3-channel image with at least 1000 pixels.
Rgb estimate_backscatter(const Image& img);

/// Floor applied to I - B before taking logarithms.
inline constexpr double kResidualFloor = 1e-4;

/// Per-channel least-squares slope of -ln(max(I_c - B_c, floor)) against
/// depth, pooled over every frame of one scene and clamped to >= 0. Pixels
/// need valid depth, an unclipped intensity and I_c - B_c above 10x the
/// floor. Throws EstimationError with fewer than 100 such pixels per channel
/// or no depth variation.
Rgb estimate_attenuation(std::span<const FrameWithDepth> frames, const Rgb& backscatter);

/// One model for a whole scene: backscatter averaged over the sampled
/// frames, attenuation regressed jointly on the same frames. Every
/// `stride`-th frame is used, starting with the first.
WaterModel estimate_water_model(std::span<const FrameWithDepth> frames, int stride = 20);

/// J_c = (I_c - B_c) * exp(beta_c * z), clamped to [0,1]; pixels without a
/// valid depth pass through unchanged.
Image restore(const Image& img, const DepthMap& depth, const WaterModel& model);

/// Forward simulator: I_c = J_c * exp(-beta_c * z) + B_c, clamped to [0,1].
/// Pixels without a valid depth pass through unchanged.
Image degrade(const Image& clean, const DepthMap& depth, const WaterModel& model);

/// Unsharp masking weighted by the min-max normalised depth:
/// I + (I - lowpass(I)) * d', clamped to [0,1].
Image depth_weighted_sharpen(const Image& img, const DepthMap& depth, const SharpenConfig& cfg);

/// restore followed by depth_weighted_sharpen.
Image enhance(const Image& img, const DepthMap& depth, const WaterModel& model,
              const SharpenConfig& cfg);

}  // namespace uwd
