#pragma once

#include <span>
#include <vector>

#include "uwd/camera.hpp"
#include "uwd/image.hpp"
#include "uwd/imaging.hpp"
#include "uwd/losses.hpp"

namespace uwd {

/// Running threshold of the teacher-guided anomaly mask.
struct TgamState {
  double threshold = 0.0;
  double beta = 0.98;    // EMA momentum
  double epsilon = 5.0;  // percent of pixels to drop
  bool initialized = false;

  void validate() const;
};

struct TgamUpdate {
  TgamState state;
  double threshold = 0.0;
  double frame_threshold = 0.0;  // t(i), before smoothing
};

/// Boundary of the top-epsilon percent of `values`: the smallest value among
/// the ceil(epsilon/100 * n) largest ones, so that exactly that many values
/// are >= the boundary when all values are distinct.
double upper_tail_boundary(std::span<const double> values, double epsilon);

/// Folds one teacher loss map into the EMA threshold. Pure: the input state
/// is not modified; throws ParameterError when the map has no valid pixel.
TgamUpdate tgam_update(const TgamState& state, const LossMap& loss_map);

/// keep = loss < threshold at valid pixels; invalid pixels are dropped.
Mask tgam_mask(const LossMap& loss_map, double threshold);

/// Teacher loss map: min reprojection error between Gaussian-blurred target
/// and blurred warps.
LossMap teacher_loss_map(const Image& target, std::span<const Warp> warps, const BlurConfig& blur,
                         const LossConfig& cfg);

/// keep = min_i pe(target, warp_i) < min_i pe(target, source_i). Warps
/// contribute only where valid; a pixel with no valid warp is dropped.
Mask auto_mask(const Image& target, std::span<const Image> sources, std::span<const Warp> warps,
               const LossConfig& cfg);

struct SourceDepth {
  DepthMap depth;
  Pose pose_ts;  // target -> source
};

/// 3-D consistency of teacher depths: keep pixels whose back-projected point
/// agrees (L1 distance < tau) with the source-frame point at its
/// correspondence, brought back into the target frame. Minimum over sources.
Mask consistency_mask(const DepthMap& depth_t, std::span<const SourceDepth> sources,
                      const Intrinsics& K, double tau = 0.03);

Mask consistency_mask(const DepthMap& depth_t, const DepthMap& depth_s, const Pose& pose_ts,
                      const Intrinsics& K, double tau = 0.03);

/// Bilinear lookup that drops invalid neighbours and renormalises the
/// remaining weights. Returns false when no neighbour is usable or the
/// position lies outside the map.
bool sample_depth(const DepthMap& depth, double u, double v, double& out);

}  // namespace uwd
