#include "uwd/uifm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uwd/error.hpp"

namespace uwd {
namespace {

void require_rgb_with_depth(const Image& img, const DepthMap& depth, const char* op) {
  if (img.channels() != 3) throw ParameterError(std::string(op) + ": expects a 3-channel image");
  if (!depth.same_shape(img)) throw ParameterError(std::string(op) + ": image and depth differ in size");
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

void WaterModel::validate() const {
  for (int c = 0; c < 3; ++c) {
    if (!(backscatter[c] >= 0.0 && backscatter[c] < 1.0)) {
      throw ParameterError("water model: backscatter must lie in [0,1)");
    }
    if (!std::isfinite(attenuation[c]) || attenuation[c] < 0.0) {
      throw ParameterError("water model: attenuation must be finite and non-negative");
    }
  }
}

Rgb estimate_backscatter(const Image& img) {
  if (img.channels() != 3) throw ParameterError("estimate_backscatter: expects a 3-channel image");
  const std::size_t n = img.pixel_count();
  if (n < 1000) {
    throw ParameterError("estimate_backscatter: needs at least 1000 pixels, got " +
                         std::to_string(n));
  }
  const std::size_t darkest = n / 1000;
  Rgb b{};
  std::vector<double> channel(n);
  const auto data = img.data();
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) channel[i] = data[i * 3 + c];
    std::nth_element(channel.begin(), channel.begin() + static_cast<long>(darkest - 1),
                     channel.end());
    const double sum = std::accumulate(channel.begin(), channel.begin() + static_cast<long>(darkest), 0.0);
    b[c] = std::clamp(sum / static_cast<double>(darkest), 0.0, 0.99);
  }
  return b;
}

Rgb estimate_attenuation(std::span<const FrameWithDepth> frames, const Rgb& backscatter) {
  if (frames.empty()) throw EstimationError("estimate_attenuation: no frames given");
  constexpr std::size_t kMinSamples = 100;
  Rgb beta{};
  for (int c = 0; c < 3; ++c) {
    double sz = 0, sy = 0, szz = 0, szy = 0;
    std::size_t n = 0;
    for (const FrameWithDepth& f : frames) {
      require_rgb_with_depth(f.image, f.depth, "estimate_attenuation");
      for (int y = 0; y < f.image.height(); ++y) {
        for (int x = 0; x < f.image.width(); ++x) {
          if (!f.depth.valid(y, x)) continue;
          const double intensity = f.image.at(y, x, c);
          const double residual = intensity - backscatter[c];
          if (intensity >= 1.0 || residual <= 10.0 * kResidualFloor) continue;
          const double z = f.depth.at(y, x);
          const double target = -std::log(std::max(residual, kResidualFloor));
          sz += z;
          sy += target;
          szz += z * z;
          szy += z * target;
          ++n;
        }
      }
    }
    if (n < kMinSamples) {
      throw EstimationError("estimate_attenuation: channel " + std::to_string(c) + " has only " +
                            std::to_string(n) + " usable pixels (need " +
                            std::to_string(kMinSamples) + ")");
    }
    const double nn = static_cast<double>(n);
    const double var_z = szz - sz * sz / nn;
    if (var_z <= 1e-12 * szz) {
      throw EstimationError("estimate_attenuation: depth does not vary, slope is undefined");
    }
    const double cov = szy - sz * sy / nn;
    beta[c] = std::max(0.0, cov / var_z);
  }
  return beta;
}

WaterModel estimate_water_model(std::span<const FrameWithDepth> frames, int stride) {
  if (stride < 1) throw ParameterError("estimate_water_model: stride must be >= 1");
  if (frames.empty()) throw EstimationError("estimate_water_model: scene has no frames");
  std::vector<FrameWithDepth> sampled;
  for (std::size_t i = 0; i < frames.size(); i += static_cast<std::size_t>(stride)) {
    sampled.push_back(frames[i]);
  }
  WaterModel model;
  for (const FrameWithDepth& f : sampled) {
    const Rgb b = estimate_backscatter(f.image);
    for (int c = 0; c < 3; ++c) model.backscatter[c] += b[c] / static_cast<double>(sampled.size());
  }
  model.attenuation = estimate_attenuation(sampled, model.backscatter);
  return model;
}

Image restore(const Image& img, const DepthMap& depth, const WaterModel& model) {
  require_rgb_with_depth(img, depth, "restore");
  model.validate();
  Image out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!depth.valid(y, x)) continue;
      const double z = depth.at(y, x);
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) =
            clamp01((img.at(y, x, c) - model.backscatter[c]) * std::exp(model.attenuation[c] * z));
      }
    }
  }
  return out;
}

Image degrade(const Image& clean, const DepthMap& depth, const WaterModel& model) {
  require_rgb_with_depth(clean, depth, "degrade");
  model.validate();
  Image out = clean;
  for (int y = 0; y < clean.height(); ++y) {
    for (int x = 0; x < clean.width(); ++x) {
      if (!depth.valid(y, x)) continue;
      const double z = depth.at(y, x);
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) = clamp01(clean.at(y, x, c) * std::exp(-model.attenuation[c] * z) +
                                  model.backscatter[c]);
      }
    }
  }
  return out;
}

Image depth_weighted_sharpen(const Image& img, const DepthMap& depth, const SharpenConfig& cfg) {
  if (!depth.same_shape(img)) {
    throw ParameterError("depth_weighted_sharpen: image and depth differ in size");
  }
  const Image weight = normalize_depth(depth);
  const Image low = gaussian_blur(img, cfg.lowpass);
  Image out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double d = weight.at(y, x);
      if (d == 0.0) continue;
      for (int c = 0; c < img.channels(); ++c) {
        const double v = img.at(y, x, c);
        out.at(y, x, c) = clamp01((v - low.at(y, x, c)) * d + v);
      }
    }
  }
  return out;
}

Image enhance(const Image& img, const DepthMap& depth, const WaterModel& model,
              const SharpenConfig& cfg) {
  return depth_weighted_sharpen(restore(img, depth, model), depth, cfg);
}

}  // namespace uwd
