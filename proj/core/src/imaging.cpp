#include "uwd/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "uwd/error.hpp"

namespace uwd {

void BlurConfig::validate() const {
  if (k < 1) throw ParameterError("blur half-window k must be >= 1, got " + std::to_string(k));
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("blur sigma must be positive, got " + std::to_string(sigma));
  }
}

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i = std::abs(i) % period;
  return i < n ? i : period - i;
}

std::vector<double> gaussian_taps(const BlurConfig& cfg) {
  cfg.validate();
  std::vector<double> taps(2 * cfg.k + 1);
  double sum = 0.0;
  for (int i = -cfg.k; i <= cfg.k; ++i) {
    const double w = std::exp(-(i * i) / (2.0 * cfg.sigma * cfg.sigma));
    taps[i + cfg.k] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

Image gaussian_blur(const Image& img, const BlurConfig& cfg) {
  const auto taps = gaussian_taps(cfg);
  const int h = img.height(), w = img.width(), ch = img.channels();

  Image horizontal(h, w, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -cfg.k; i <= cfg.k; ++i) {
          acc += taps[i + cfg.k] * img.at(y, reflect_index(x + i, w), c);
        }
        horizontal.at(y, x, c) = acc;
      }
    }
  }

  Image out(h, w, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -cfg.k; i <= cfg.k; ++i) {
          acc += taps[i + cfg.k] * horizontal.at(reflect_index(y + i, h), x, c);
        }
        out.at(y, x, c) = acc;
      }
    }
  }
  return out;
}

Gradients image_gradients(const Image& img) {
  const int h = img.height(), w = img.width(), ch = img.channels();
  if (h < 2 || w < 2) {
    throw ParameterError("image_gradients needs at least 2x2 pixels, got " + std::to_string(h) +
                         "x" + std::to_string(w));
  }
  Gradients g{Image(h, w, ch), Image(h, w, ch)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        if (x + 1 < w) g.gx.at(y, x, c) = img.at(y, x + 1, c) - img.at(y, x, c);
        if (y + 1 < h) g.gy.at(y, x, c) = img.at(y + 1, x, c) - img.at(y, x, c);
      }
    }
  }
  return g;
}

double percentile(std::span<const double> values, double q) {
  if (values.empty()) throw ParameterError("percentile of an empty list");
  if (!(q >= 0.0 && q <= 100.0)) {
    throw ParameterError("percentile q must lie in [0,100], got " + std::to_string(q));
  }
  const auto n = static_cast<long long>(values.size());
  // The small slack keeps exact products such as 95*100/100 from rounding up.
  auto rank = static_cast<long long>(std::ceil(q * static_cast<double>(n) / 100.0 - 1e-9)) - 1;
  rank = std::clamp(rank, 0LL, n - 1);
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + rank, sorted.end());
  return sorted[static_cast<std::size_t>(rank)];
}

double median(std::span<const double> values) {
  if (values.empty()) throw ParameterError("median of an empty list");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

Sampled bilinear_sample(const Image& img, const CoordField& coords) {
  const int h = img.height(), w = img.width(), ch = img.channels();
  Sampled out{Image(coords.height, coords.width, ch), Mask(coords.height, coords.width, true)};
  const double max_u = w - 1, max_v = h - 1;

  for (int y = 0; y < coords.height; ++y) {
    for (int x = 0; x < coords.width; ++x) {
      const auto i = static_cast<std::size_t>(y) * coords.width + x;
      double u = coords.u[i], v = coords.v[i];
      bool inside = coords.valid[i] != 0 && std::isfinite(u) && std::isfinite(v) && u >= 0.0 &&
                    u <= max_u && v >= 0.0 && v <= max_v;
      if (!std::isfinite(u)) u = 0.0;
      if (!std::isfinite(v)) v = 0.0;
      u = std::clamp(u, 0.0, max_u);
      v = std::clamp(v, 0.0, max_v);

      const int x0 = static_cast<int>(std::floor(u));
      const int y0 = static_cast<int>(std::floor(v));
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = u - x0, fy = v - y0;
      for (int c = 0; c < ch; ++c) {
        out.image.at(y, x, c) = img.at(y0, x0, c) * (1.0 - fx) * (1.0 - fy) +
                                img.at(y0, x1, c) * fx * (1.0 - fy) +
                                img.at(y1, x0, c) * (1.0 - fx) * fy + img.at(y1, x1, c) * fx * fy;
      }
      out.mask.set(i, inside);
    }
  }
  return out;
}

Image normalize_depth(const DepthMap& depth) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < depth.pixel_count(); ++i) {
    if (!depth.valid(i)) continue;
    lo = std::min(lo, depth[i]);
    hi = std::max(hi, depth[i]);
  }
  if (lo > hi) throw ParameterError("normalize_depth: depth map has no valid pixels");

  Image out(depth.height(), depth.width(), 1, 0.0);
  const double range = hi - lo;
  if (range <= 0.0) return out;
  auto data = out.data();
  for (std::size_t i = 0; i < depth.pixel_count(); ++i) {
    if (depth.valid(i)) data[i] = (depth[i] - lo) / range;
  }
  return out;
}

}  // namespace uwd
