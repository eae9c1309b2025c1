#include "uwd/masking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "uwd/error.hpp"

namespace uwd {

void TgamState::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("tgam beta must lie in (0,1)");
  if (!(epsilon > 0.0 && epsilon < 100.0)) throw ParameterError("tgam epsilon must lie in (0,100)");
  if (initialized && !std::isfinite(threshold)) {
    throw ParameterError("tgam threshold must be finite once initialised");
  }
}

double upper_tail_boundary(std::span<const double> values, double epsilon) {
  if (values.empty()) throw ParameterError("upper_tail_boundary: empty list");
  if (!(epsilon >= 0.0 && epsilon <= 100.0)) {
    throw ParameterError("upper_tail_boundary: epsilon must lie in [0,100]");
  }
  const auto n = static_cast<long long>(values.size());
  auto tail = static_cast<long long>(std::ceil(epsilon * static_cast<double>(n) / 100.0 - 1e-9));
  tail = std::clamp(tail, 1LL, n);
  std::vector<double> sorted(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(n - tail);
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(rank), sorted.end());
  return sorted[rank];
}

TgamUpdate tgam_update(const TgamState& state, const LossMap& loss_map) {
  state.validate();
  const std::vector<double> values = loss_map.valid_values();
  if (values.empty()) throw ParameterError("tgam_update: loss map has no valid pixels");

  TgamUpdate out;
  out.frame_threshold = upper_tail_boundary(values, state.epsilon);
  out.state = state;
  out.state.threshold = state.initialized
                            ? state.beta * state.threshold + (1.0 - state.beta) * out.frame_threshold
                            : out.frame_threshold;
  out.state.initialized = true;
  out.threshold = out.state.threshold;
  return out;
}

Mask tgam_mask(const LossMap& loss_map, double threshold) {
  if (!std::isfinite(threshold)) throw ParameterError("tgam_mask: threshold must be finite");
  Mask out(loss_map.height, loss_map.width, false);
  for (std::size_t i = 0; i < loss_map.value.size(); ++i) {
    out.set(i, loss_map.valid[i] && loss_map.value[i] < threshold);
  }
  return out;
}

LossMap teacher_loss_map(const Image& target, std::span<const Warp> warps, const BlurConfig& blur,
                         const LossConfig& cfg) {
  std::vector<Warp> blurred;
  blurred.reserve(warps.size());
  for (const Warp& w : warps) blurred.push_back({gaussian_blur(w.image, blur), w.mask});
  return min_reprojection_loss(gaussian_blur(target, blur), blurred, cfg);
}

Mask auto_mask(const Image& target, std::span<const Image> sources, std::span<const Warp> warps,
               const LossConfig& cfg) {
  if (sources.size() != warps.size()) {
    throw ParameterError("auto_mask: " + std::to_string(sources.size()) + " sources but " +
                         std::to_string(warps.size()) + " warps");
  }
  if (sources.empty()) throw ParameterError("auto_mask: no sources given");

  const LossMap warped = min_reprojection_loss(target, warps, cfg);
  std::vector<double> identity(target.pixel_count(), std::numeric_limits<double>::infinity());
  for (const Image& src : sources) {
    const LossMap pe = photometric_error(target, src, cfg);
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = std::min(identity[i], pe.value[i]);
  }

  Mask out(target.height(), target.width(), false);
  for (std::size_t i = 0; i < identity.size(); ++i) {
    out.set(i, warped.valid[i] && warped.value[i] < identity[i]);
  }
  return out;
}

bool sample_depth(const DepthMap& depth, double u, double v, double& out) {
  const int w = depth.width(), h = depth.height();
  if (!(u >= 0.0 && u <= w - 1 && v >= 0.0 && v <= h - 1)) return false;
  const int x0 = static_cast<int>(std::floor(u)), y0 = static_cast<int>(std::floor(v));
  const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
  const double fx = u - x0, fy = v - y0;
  const int xs[4] = {x0, x1, x0, x1};
  const int ys[4] = {y0, y0, y1, y1};
  const double ws[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
  double sum = 0.0, weight = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (ws[k] <= 0.0 || !depth.valid(ys[k], xs[k])) continue;
    sum += ws[k] * depth.at(ys[k], xs[k]);
    weight += ws[k];
  }
  if (weight <= 0.0) return false;
  out = sum / weight;
  return true;
}

Mask consistency_mask(const DepthMap& depth_t, std::span<const SourceDepth> sources,
                      const Intrinsics& K, double tau) {
  K.validate();
  if (!(tau > 0.0)) throw ParameterError("consistency_mask: tau must be positive");
  const int h = depth_t.height(), w = depth_t.width();
  std::vector<double> best(depth_t.pixel_count(), std::numeric_limits<double>::infinity());

  for (const SourceDepth& src : sources) {
    if (!src.depth.same_shape(depth_t)) {
      throw ParameterError("consistency_mask: source depth resolution differs");
    }
    const CoordField coords = reproject(depth_t, src.pose_ts, K);
    const Pose source_to_target = src.pose_ts.inverse();
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto i = static_cast<std::size_t>(y) * w + x;
        if (!depth_t.valid(i) || !coords.valid[i]) continue;
        double d_s = 0.0;
        if (!sample_depth(src.depth, coords.u[i], coords.v[i], d_s)) continue;
        const Eigen::Vector3d from_source =
            source_to_target.apply(d_s * K.unproject(coords.u[i], coords.v[i]));
        const Eigen::Vector3d from_target = depth_t[i] * K.unproject(x, y);
        best[i] = std::min(best[i], (from_source - from_target).lpNorm<1>());
      }
    }
  }

  Mask out(h, w, false);
  for (std::size_t i = 0; i < best.size(); ++i) out.set(i, best[i] < tau);
  return out;
}

Mask consistency_mask(const DepthMap& depth_t, const DepthMap& depth_s, const Pose& pose_ts,
                      const Intrinsics& K, double tau) {
  const SourceDepth src{depth_s, pose_ts};
  return consistency_mask(depth_t, std::span<const SourceDepth>(&src, 1), K, tau);
}

}  // namespace uwd
