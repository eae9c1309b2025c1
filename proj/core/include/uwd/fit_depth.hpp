#pragma once

#include <vector>

#include "uwd/camera.hpp"
#include "uwd/losses.hpp"

namespace uwd {

struct FitConfig {
  int max_iters = 500;
  double smoothness_weight = 1e-3;
  LossConfig loss;
  int max_halvings = 40;  // backtracking steps before declaring convergence
};

struct FitSource {
  Image image;
  Pose pose_ts;  // target -> source
};

struct FitResult {
  DepthMap grid;           // optimised coarse grid
  DepthMap depth;          // grid bilinearly upsampled to image resolution
  std::vector<double> trace;  // objective after every accepted step, starting with the initial value
  int iterations = 0;
  bool converged = false;   // line search found no further decrease
  bool degenerate = false;  // photometric gradient vanished at the start
};

/// Bilinear upsampling of a coarse grid, cell centres aligned with pixel
/// centres of the output and edges clamped.
DepthMap upsample_grid(const DepthMap& grid, int height, int width);

/// Fits a coarse depth grid to a target frame and 1-2 posed source frames by
/// gradient descent with backtracking line search on the minimum
/// reprojection photometric loss plus weighted edge-aware smoothness.
/// The objective trace is non-increasing. Throws OptimizationError if the
/// objective cannot be evaluated at the initial grid.
FitResult fit_depth(const Image& target, const std::vector<FitSource>& sources,
                    const Intrinsics& K, const DepthMap& initial_grid, const FitConfig& cfg = {});

struct Objective {
  double value = 0.0;
  double photometric = 0.0;
  double smoothness = 0.0;
  std::vector<double> grad;  // per grid cell
  double photometric_grad_norm = 0.0;
};

/// The objective minimised by fit_depth and its gradient with respect to the
/// grid values.
Objective fit_objective(const Image& target, const std::vector<FitSource>& sources,
                        const Intrinsics& K, const DepthMap& grid, const FitConfig& cfg);

}  // namespace uwd
