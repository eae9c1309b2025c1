#include "uwd/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "uwd/error.hpp"
#include "uwd/imaging.hpp"

namespace uwd {
namespace {

void require_same_shape(const Image& a, const Image& b, const char* op) {
  if (!a.same_shape(b)) throw ParameterError(std::string(op) + ": image shapes differ");
}

// Window statistics of one channel around one pixel.
struct WindowStats {
  double mu_a, mu_b, var_a, var_b, cov;
};

WindowStats window_stats(const Image& a, const Image& b, int y, int x, int c, int radius) {
  const int h = a.height(), w = a.width();
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int dy = -radius; dy <= radius; ++dy) {
    const int yy = reflect_index(y + dy, h);
    for (int dx = -radius; dx <= radius; ++dx) {
      const int xx = reflect_index(x + dx, w);
      const double va = a.at(yy, xx, c), vb = b.at(yy, xx, c);
      sa += va;
      sb += vb;
      saa += va * va;
      sbb += vb * vb;
      sab += va * vb;
    }
  }
  const double n = (2 * radius + 1) * (2 * radius + 1);
  WindowStats s;
  s.mu_a = sa / n;
  s.mu_b = sb / n;
  s.var_a = saa / n - s.mu_a * s.mu_a;
  s.var_b = sbb / n - s.mu_b * s.mu_b;
  s.cov = sab / n - s.mu_a * s.mu_b;
  return s;
}

struct SsimTerms {
  double num_mean, num_struct, den_mean, den_struct;
  double value() const { return num_mean * num_struct / (den_mean * den_struct); }
};

SsimTerms ssim_terms(const WindowStats& s, const LossConfig& cfg) {
  return {2.0 * s.mu_a * s.mu_b + cfg.ssim_c1, 2.0 * s.cov + cfg.ssim_c2,
          s.mu_a * s.mu_a + s.mu_b * s.mu_b + cfg.ssim_c1, s.var_a + s.var_b + cfg.ssim_c2};
}

double sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

void LossConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("loss alpha must lie in [0,1]");
  if (ssim_window < 3 || ssim_window % 2 == 0) {
    throw ParameterError("ssim window must be odd and >= 3, got " + std::to_string(ssim_window));
  }
  if (!(ssim_c1 > 0.0) || !(ssim_c2 > 0.0)) throw ParameterError("ssim constants must be positive");
}

LossMap::LossMap(int h, int w, double fill) : height(h), width(w) {
  if (h <= 0 || w <= 0) throw ParameterError("loss map dimensions must be positive");
  value.assign(static_cast<std::size_t>(h) * w, fill);
  valid.assign(static_cast<std::size_t>(h) * w, 1);
}

std::size_t LossMap::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

std::vector<double> LossMap::valid_values() const {
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (valid[i]) out.push_back(value[i]);
  }
  return out;
}

double LossMap::mean() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!valid[i]) continue;
    sum += value[i];
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

void DistillConfig::validate() const {
  if (!(tau > 0.0)) throw ParameterError("distillation tau must be positive");
  if (!(lambda0 >= 0.0)) throw ParameterError("distillation lambda0 must be non-negative");
  if (decay_steps <= 0) throw ParameterError("distillation decay_steps must be positive");
}

double DistillConfig::weight_at(long step) const {
  if (step <= 0) return lambda0;
  if (step >= decay_steps) return 0.0;
  return lambda0 * (1.0 - static_cast<double>(step) / static_cast<double>(decay_steps));
}

LossMap ssim_map(const Image& a, const Image& b, const LossConfig& cfg) {
  cfg.validate();
  require_same_shape(a, b, "ssim_map");
  const int radius = cfg.ssim_window / 2;
  LossMap out(a.height(), a.width());
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      double acc = 0.0;
      for (int c = 0; c < a.channels(); ++c) {
        acc += ssim_terms(window_stats(a, b, y, x, c, radius), cfg).value();
      }
      out.value[static_cast<std::size_t>(y) * a.width() + x] = acc / a.channels();
    }
  }
  return out;
}

LossMap photometric_error(const Image& a, const Image& b, const LossConfig& cfg) {
  LossMap ssim = ssim_map(a, b, cfg);
  const int ch = a.channels();
  LossMap out(a.height(), a.width());
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      const auto i = static_cast<std::size_t>(y) * a.width() + x;
      double l1 = 0.0;
      for (int c = 0; c < ch; ++c) l1 += std::abs(a.at(y, x, c) - b.at(y, x, c));
      l1 /= ch;
      out.value[i] = cfg.alpha / 2.0 * (1.0 - ssim.value[i]) + (1.0 - cfg.alpha) * l1;
    }
  }
  return out;
}

PhotometricGradient photometric_error_gradient(const Image& a, const Image& b,
                                               const LossConfig& cfg, const Mask* select) {
  cfg.validate();
  require_same_shape(a, b, "photometric_error_gradient");
  if (select && (select->height() != a.height() || select->width() != a.width())) {
    throw ParameterError("photometric_error_gradient: selection mask shape differs");
  }
  const int h = a.height(), w = a.width(), ch = a.channels();
  const int radius = cfg.ssim_window / 2;
  const double taps = cfg.ssim_window * cfg.ssim_window;

  PhotometricGradient out;
  out.grad = Image(h, w, ch, 0.0);
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    if (!select || (*select)[i]) ++out.selected;
  }
  if (out.selected == 0) return out;
  const double norm = 1.0 / (static_cast<double>(out.selected) * ch);

  double total = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (select && !select->at(y, x)) continue;
      for (int c = 0; c < ch; ++c) {
        const WindowStats s = window_stats(a, b, y, x, c, radius);
        const SsimTerms t = ssim_terms(s, cfg);
        const double ssim = t.value();
        const double diff = a.at(y, x, c) - b.at(y, x, c);
        total += cfg.alpha / 2.0 * (1.0 - ssim) + (1.0 - cfg.alpha) * std::abs(diff);

        out.grad.at(y, x, c) += norm * (1.0 - cfg.alpha) * sign(diff);

        // Partials of SSIM with respect to the window statistics of a.
        const double den = t.den_mean * t.den_struct;
        const double d_mu = 2.0 * s.mu_b * t.num_struct / den - ssim * 2.0 * s.mu_a / t.den_mean;
        const double d_var = -ssim / t.den_struct;
        const double d_cov = 2.0 * t.num_mean / den;
        const double scale = -norm * cfg.alpha / 2.0 / taps;
        for (int dy = -radius; dy <= radius; ++dy) {
          const int yy = reflect_index(y + dy, h);
          for (int dx = -radius; dx <= radius; ++dx) {
            const int xx = reflect_index(x + dx, w);
            const double local = d_mu + d_var * 2.0 * (a.at(yy, xx, c) - s.mu_a) +
                                 d_cov * (b.at(yy, xx, c) - s.mu_b);
            out.grad.at(yy, xx, c) += scale * local;
          }
        }
      }
    }
  }
  out.value = total * norm;
  return out;
}

LossMap min_reprojection_loss(const Image& target, std::span<const Warp> warps,
                              const LossConfig& cfg) {
  if (warps.empty()) throw ParameterError("min_reprojection_loss: no warps given");
  LossMap out(target.height(), target.width(), std::numeric_limits<double>::infinity());
  std::fill(out.valid.begin(), out.valid.end(), std::uint8_t{0});
  for (const Warp& warp : warps) {
    require_same_shape(target, warp.image, "min_reprojection_loss");
    if (warp.mask.height() != target.height() || warp.mask.width() != target.width()) {
      throw ParameterError("min_reprojection_loss: warp mask shape differs");
    }
    const LossMap pe = photometric_error(target, warp.image, cfg);
    for (std::size_t i = 0; i < pe.value.size(); ++i) {
      if (!warp.mask[i]) continue;
      out.value[i] = std::min(out.value[i], pe.value[i]);
      out.valid[i] = 1;
    }
  }
  for (std::size_t i = 0; i < out.value.size(); ++i) {
    if (!out.valid[i]) out.value[i] = 0.0;
  }
  return out;
}

namespace {

struct EdgeWeights {
  std::vector<double> x;  // exp(-|dI/dx|), zero in the last column
  std::vector<double> y;  // exp(-|dI/dy|), zero in the last row
};

EdgeWeights edge_weights(const Image& img) {
  const Gradients g = image_gradients(img);
  const int h = img.height(), w = img.width(), ch = img.channels();
  EdgeWeights e{std::vector<double>(img.pixel_count(), 0.0),
                std::vector<double>(img.pixel_count(), 0.0)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double ax = 0.0, ay = 0.0;
      for (int c = 0; c < ch; ++c) {
        ax += std::abs(g.gx.at(y, x, c));
        ay += std::abs(g.gy.at(y, x, c));
      }
      const auto i = static_cast<std::size_t>(y) * w + x;
      if (x + 1 < w) e.x[i] = std::exp(-ax / ch);
      if (y + 1 < h) e.y[i] = std::exp(-ay / ch);
    }
  }
  return e;
}

}  // namespace

SmoothnessGradient smoothness_loss_gradient(const DepthMap& depth, const Image& img) {
  if (!depth.same_shape(img)) throw ParameterError("smoothness_loss: depth and image shapes differ");
  const std::size_t n_valid = depth.valid_count();
  if (n_valid == 0) throw ParameterError("smoothness_loss: depth map has no valid pixels");

  double mean = 0.0;
  for (std::size_t i = 0; i < depth.pixel_count(); ++i) {
    if (depth.valid(i)) mean += depth[i];
  }
  mean /= static_cast<double>(n_valid);

  const EdgeWeights e = edge_weights(img);
  const int h = depth.height(), w = depth.width();
  std::vector<double> raw_grad(depth.pixel_count(), 0.0);
  double raw = 0.0;  // sum of weighted absolute differences of unnormalised depth
  auto edge = [&](std::size_t p, std::size_t q, double weight) {
    if (!depth.valid(p) || !depth.valid(q)) return;
    const double diff = depth[q] - depth[p];
    raw += std::abs(diff) * weight;
    raw_grad[q] += sign(diff) * weight;
    raw_grad[p] -= sign(diff) * weight;
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto i = static_cast<std::size_t>(y) * w + x;
      if (x + 1 < w) edge(i, i + 1, e.x[i]);
      if (y + 1 < h) edge(i, i + w, e.y[i]);
    }
  }

  const double nv = static_cast<double>(n_valid);
  SmoothnessGradient out;
  out.value = raw / (mean * nv);
  out.grad.assign(depth.pixel_count(), 0.0);
  for (std::size_t i = 0; i < depth.pixel_count(); ++i) {
    if (!depth.valid(i)) continue;
    out.grad[i] = raw_grad[i] / (mean * nv) - raw / (mean * mean * nv * nv);
  }
  return out;
}

double smoothness_loss(const DepthMap& depth, const Image& img) {
  return smoothness_loss_gradient(depth, img).value;
}

DistillationResult distillation_loss(const DepthMap& student, const DepthMap& teacher,
                                     const Mask& consistency, double lambda) {
  if (!student.same_shape(teacher) || consistency.height() != student.height() ||
      consistency.width() != student.width()) {
    throw ParameterError("distillation_loss: shapes differ");
  }
  if (!(lambda >= 0.0)) throw ParameterError("distillation_loss: lambda must be non-negative");
  DistillationResult out;
  double sum = 0.0;
  for (std::size_t i = 0; i < student.pixel_count(); ++i) {
    if (!consistency[i] || !student.valid(i) || !teacher.valid(i)) continue;
    sum += std::log(std::abs(teacher[i] - student[i]) + 1.0);
    ++out.pixels;
  }
  if (out.pixels == 0) return out;
  out.supervised = true;
  out.loss = lambda * sum / static_cast<double>(out.pixels);
  return out;
}

namespace {

struct Moments {
  double mean_x, mean_y, sxx, syy, sxy;
};

Moments centred_moments(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ParameterError("pearson_loss: sample sizes differ");
  if (x.size() < 2) throw DegenerateInputError("pearson_loss: needs at least two samples");
  const double n = static_cast<double>(x.size());
  Moments m{0, 0, 0, 0, 0};
  double sq_x = 0.0, sq_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m.mean_x += x[i];
    m.mean_y += y[i];
    sq_x += x[i] * x[i];
    sq_y += y[i] * y[i];
  }
  m.mean_x /= n;
  m.mean_y /= n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - m.mean_x, dy = y[i] - m.mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  // Rounding alone leaves a residual far below this for constant inputs.
  if (m.sxx <= 1e-20 * sq_x || m.syy <= 1e-20 * sq_y) {
    throw DegenerateInputError("pearson_loss: input has zero variance");
  }
  return m;
}

}  // namespace

double pearson_loss(std::span<const double> student, std::span<const double> teacher) {
  const Moments m = centred_moments(student, teacher);
  return std::clamp(1.0 - m.sxy / std::sqrt(m.sxx * m.syy), 0.0, 2.0);
}

double pearson_loss(const DepthMap& student, const DepthMap& teacher) {
  if (!student.same_shape(teacher)) throw ParameterError("pearson_loss: depth shapes differ");
  std::vector<double> s, t;
  for (std::size_t i = 0; i < student.pixel_count(); ++i) {
    if (!student.valid(i) || !teacher.valid(i)) continue;
    s.push_back(student[i]);
    t.push_back(teacher[i]);
  }
  return pearson_loss(s, t);
}

std::vector<double> pearson_loss_gradient(std::span<const double> student,
                                          std::span<const double> teacher) {
  const Moments m = centred_moments(student, teacher);
  const double root = std::sqrt(m.sxx * m.syy);
  std::vector<double> grad(student.size());
  for (std::size_t i = 0; i < student.size(); ++i) {
    const double dx = student[i] - m.mean_x, dy = teacher[i] - m.mean_y;
    grad[i] = -(dy / root - m.sxy * dx / (m.sxx * root));
  }
  return grad;
}

}  // namespace uwd
