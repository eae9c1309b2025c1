#include "uwd/fit_depth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "uwd/error.hpp"
#include "uwd/imaging.hpp"

namespace uwd {
namespace {

struct Tap {
  std::size_t cell;
  double weight;
};

// Four bilinear taps per output pixel.
std::vector<std::array<Tap, 4>> upsample_taps(int grid_h, int grid_w, int height, int width) {
  std::vector<std::array<Tap, 4>> taps(static_cast<std::size_t>(height) * width);
  auto axis = [](int i, int out_n, int grid_n, int& lo, int& hi, double& f) {
    const double g = std::clamp((i + 0.5) * grid_n / out_n - 0.5, 0.0, grid_n - 1.0);
    lo = static_cast<int>(std::floor(g));
    hi = std::min(lo + 1, grid_n - 1);
    f = g - lo;
  };
  for (int y = 0; y < height; ++y) {
    int y0, y1;
    double fy;
    axis(y, height, grid_h, y0, y1, fy);
    for (int x = 0; x < width; ++x) {
      int x0, x1;
      double fx;
      axis(x, width, grid_w, x0, x1, fx);
      auto cell = [&](int gy, int gx) { return static_cast<std::size_t>(gy) * grid_w + gx; };
      taps[static_cast<std::size_t>(y) * width + x] = {Tap{cell(y0, x0), (1 - fx) * (1 - fy)},
                                                       Tap{cell(y0, x1), fx * (1 - fy)},
                                                       Tap{cell(y1, x0), (1 - fx) * fy},
                                                       Tap{cell(y1, x1), fx * fy}};
    }
  }
  return taps;
}

DepthMap apply_taps(const std::vector<std::array<Tap, 4>>& taps, const DepthMap& grid, int height,
                    int width) {
  DepthMap out(height, width);
  for (std::size_t i = 0; i < taps.size(); ++i) {
    double d = 0.0;
    for (const Tap& t : taps[i]) d += t.weight * grid[t.cell];
    out.set(i, d);
  }
  return out;
}

void check_inputs(const Image& target, const std::vector<FitSource>& sources,
                  const DepthMap& grid) {
  if (sources.empty() || sources.size() > 2) {
    throw ParameterError("fit_depth: expects one or two source frames, got " +
                         std::to_string(sources.size()));
  }
  for (const FitSource& s : sources) {
    if (!s.image.same_shape(target)) throw ParameterError("fit_depth: frame shapes differ");
  }
  if (grid.height() > 32 || grid.width() > 32) {
    throw ParameterError("fit_depth: depth grid is limited to 32x32");
  }
  if (grid.height() > target.height() || grid.width() > target.width()) {
    throw ParameterError("fit_depth: depth grid is finer than the image");
  }
  if (grid.valid_count() != grid.pixel_count()) {
    throw ParameterError("fit_depth: initial grid must be positive everywhere");
  }
}

}  // namespace

DepthMap upsample_grid(const DepthMap& grid, int height, int width) {
  return apply_taps(upsample_taps(grid.height(), grid.width(), height, width), grid, height, width);
}

Objective fit_objective(const Image& target, const std::vector<FitSource>& sources,
                        const Intrinsics& K, const DepthMap& grid, const FitConfig& cfg) {
  check_inputs(target, sources, grid);
  K.validate();
  const int h = target.height(), w = target.width(), ch = target.channels();
  const std::size_t n = target.pixel_count();
  const auto taps = upsample_taps(grid.height(), grid.width(), h, w);
  const DepthMap depth = apply_taps(taps, grid, h, w);

  struct PerSource {
    Warp warp;
    LossMap pe;
    std::vector<double> du, dv;  // d(source coordinate) / d(depth)
  };
  std::vector<PerSource> per;
  for (const FitSource& s : sources) {
    PerSource p;
    p.warp = synthesize_view(s.image, depth, s.pose_ts, K);
    p.pe = photometric_error(target, p.warp.image, cfg.loss);
    p.du.assign(n, 0.0);
    p.dv.assign(n, 0.0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto i = static_cast<std::size_t>(y) * w + x;
        if (!p.warp.mask[i]) continue;
        const Eigen::Vector3d a = s.pose_ts.rotation * K.unproject(x, y);
        const Eigen::Vector3d xs = depth[i] * a + s.pose_ts.translation;
        const double z2 = xs.z() * xs.z();
        p.du[i] = K.fx * (a.x() * xs.z() - xs.x() * a.z()) / z2;
        p.dv[i] = K.fy * (a.y() * xs.z() - xs.y() * a.z()) / z2;
      }
    }
    per.push_back(std::move(p));
  }

  // Per-pixel winner of the minimum over sources.
  std::vector<int> winner(n, -1);
  double photometric = 0.0;
  std::size_t covered = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < per.size(); ++s) {
      if (per[s].warp.mask[i] && per[s].pe.value[i] < best) {
        best = per[s].pe.value[i];
        winner[i] = static_cast<int>(s);
      }
    }
    if (winner[i] >= 0) {
      photometric += best;
      ++covered;
    }
  }
  Objective obj;
  if (covered == 0) {
    obj.value = std::numeric_limits<double>::infinity();
    return obj;
  }
  obj.photometric = photometric / static_cast<double>(covered);

  std::vector<double> depth_grad(n, 0.0);
  for (std::size_t s = 0; s < per.size(); ++s) {
    Mask select(h, w, false);
    for (std::size_t i = 0; i < n; ++i) select.set(i, winner[i] == static_cast<int>(s));
    if (select.count() == 0) continue;
    // pe is symmetric, so the gradient with respect to the warped image is
    // the gradient of pe(warp, target) with respect to its first argument.
    const PhotometricGradient g =
        photometric_error_gradient(per[s].warp.image, target, cfg.loss, &select);
    const double share = static_cast<double>(g.selected) / static_cast<double>(covered);
    const Image& src = sources[s].image;
    const CoordField coords = reproject(depth, sources[s].pose_ts, K);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto i = static_cast<std::size_t>(y) * w + x;
        if (!per[s].warp.mask[i]) continue;
        const double u = coords.u[i], v = coords.v[i];
        const int x0 = static_cast<int>(std::floor(u)), y0 = static_cast<int>(std::floor(v));
        const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
        const double fx = u - x0, fy = v - y0;
        double acc = 0.0;
        for (int c = 0; c < ch; ++c) {
          const double di_du = (1 - fy) * (src.at(y0, x1, c) - src.at(y0, x0, c)) +
                               fy * (src.at(y1, x1, c) - src.at(y1, x0, c));
          const double di_dv = (1 - fx) * (src.at(y1, x0, c) - src.at(y0, x0, c)) +
                               fx * (src.at(y1, x1, c) - src.at(y0, x1, c));
          acc += g.grad.at(y, x, c) * (di_du * per[s].du[i] + di_dv * per[s].dv[i]);
        }
        depth_grad[i] += share * acc;
      }
    }
  }

  obj.grad.assign(grid.pixel_count(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Tap& t : taps[i]) obj.grad[t.cell] += t.weight * depth_grad[i];
  }
  obj.photometric_grad_norm =
      std::sqrt(std::inner_product(obj.grad.begin(), obj.grad.end(), obj.grad.begin(), 0.0));

  const SmoothnessGradient smooth = smoothness_loss_gradient(depth, target);
  obj.smoothness = smooth.value;
  for (std::size_t i = 0; i < n; ++i) {
    for (const Tap& t : taps[i]) {
      obj.grad[t.cell] += cfg.smoothness_weight * t.weight * smooth.grad[i];
    }
  }
  obj.value = obj.photometric + cfg.smoothness_weight * obj.smoothness;
  return obj;
}

FitResult fit_depth(const Image& target, const std::vector<FitSource>& sources,
                    const Intrinsics& K, const DepthMap& initial_grid, const FitConfig& cfg) {
  cfg.loss.validate();
  if (cfg.max_iters < 0) throw ParameterError("fit_depth: iteration count must be non-negative");

  FitResult result;
  result.grid = initial_grid;
  Objective current = fit_objective(target, sources, K, result.grid, cfg);
  if (!std::isfinite(current.value)) {
    throw OptimizationError("fit_depth: objective is not finite at the initial depth");
  }
  result.trace.push_back(current.value);

  auto finish = [&]() -> FitResult {
    result.depth = upsample_grid(result.grid, target.height(), target.width());
    return result;
  };
  if (current.photometric_grad_norm < 1e-12) {
    result.degenerate = true;
    return finish();
  }

  const std::size_t cells = result.grid.pixel_count();
  const double mean_depth = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < cells; ++i) s += result.grid[i];
    return s / static_cast<double>(cells);
  }();
  const double floor = 1e-3 * mean_depth;
  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  // First trial step moves the steepest cell by 5% of the mean depth.
  double step = 0.05 * mean_depth / std::max(max_abs(current.grad), 1e-300);

  for (int it = 0; it < cfg.max_iters; ++it) {
    const double g2 = std::inner_product(current.grad.begin(), current.grad.end(),
                                         current.grad.begin(), 0.0);
    bool accepted = false;
    for (int k = 0; k <= cfg.max_halvings; ++k) {
      DepthMap trial(result.grid.height(), result.grid.width());
      for (std::size_t i = 0; i < cells; ++i) {
        trial.set(i, std::max(floor, result.grid[i] - step * current.grad[i]));
      }
      Objective next = fit_objective(target, sources, K, trial, cfg);
      if (std::isfinite(next.value) && next.value <= current.value - 1e-4 * step * g2 &&
          next.value < current.value) {
        result.grid = std::move(trial);
        current = std::move(next);
        accepted = true;
        step *= 1.5;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.converged = true;
      break;
    }
    result.trace.push_back(current.value);
    ++result.iterations;
  }
  return finish();
}

}  // namespace uwd
