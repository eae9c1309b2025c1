#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/synthetic.hpp"
#include "uwd/error.hpp"
#include "uwd/evaluation.hpp"
#include "uwd/fit_depth.hpp"

namespace uwd {
namespace {

// Textured plane at 2 m seen from a second camera 10 cm to the side
// (a 2.5 px disparity).
struct PlanePair {
  Intrinsics K{50.0, 50.0, 31.5, 31.5};
  double depth = 2.0;
  Image target = testing::render_plane(64, 64, 3, K, depth, {0, 0, 0});
  std::vector<FitSource> sources{
      {testing::render_plane(64, 64, 3, K, depth, {0.1, 0, 0}), testing::translation(0.1, 0, 0)}};
  DepthMap truth{64, 64, depth};
};

TEST(UpsampleGrid, ConstantAndIdentity) {
  const DepthMap up = upsample_grid(DepthMap(4, 4, 3.0), 17, 23);
  EXPECT_EQ(up.height(), 17);
  for (double v : up.values()) EXPECT_NEAR(v, 3.0, 1e-15);

  std::mt19937_64 rng(1);
  const DepthMap g = testing::random_depth(6, 6, rng, 1, 5);
  const DepthMap same = upsample_grid(g, 6, 6);
  for (std::size_t i = 0; i < g.pixel_count(); ++i) EXPECT_NEAR(same[i], g[i], 1e-15);
}

TEST(UpsampleGrid, CellCentresLandOnPixelCentres) {
  // 2 cells across 8 pixels: centres at pixel 1.5 and 5.5, linear in between,
  // clamped outside.
  DepthMap g(1, 2);
  g.set(0, 0, 1.0);
  g.set(0, 1, 5.0);
  const DepthMap up = upsample_grid(g, 1, 8);
  const double expected[8] = {1, 1, 1.5, 2.5, 3.5, 4.5, 5, 5};
  for (int x = 0; x < 8; ++x) EXPECT_NEAR(up.at(0, x), expected[x], 1e-12) << x;
}

TEST(FitObjective, GradientMatchesFiniteDifferences) {
  const PlanePair s;
  std::mt19937_64 rng(2);
  const DepthMap grid = testing::random_depth(4, 4, rng, 1.6, 2.6);
  const FitConfig cfg;
  const Objective obj = fit_objective(s.target, s.sources, s.K, grid, cfg);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < grid.pixel_count(); ++i) {
    std::vector<double> v(grid.values().begin(), grid.values().end());
    const double h = 1e-6;
    v[i] += h;
    const double up = fit_objective(s.target, s.sources, s.K, DepthMap(4, 4, v), cfg).value;
    v[i] -= 2 * h;
    const double down = fit_objective(s.target, s.sources, s.K, DepthMap(4, 4, v), cfg).value;
    const double fd = (up - down) / (2 * h);
    num += (fd - obj.grad[i]) * (fd - obj.grad[i]);
    den += fd * fd;
  }
  EXPECT_LT(std::sqrt(num / den), 1e-3);
}

TEST(FitDepth, TruthIsNearlyStationary) {
  const PlanePair s;
  const FitResult r = fit_depth(s.target, s.sources, s.K, DepthMap(16, 16, s.depth));
  EXPECT_LT(depth_metrics(r.depth, s.truth).abs_rel, 0.01);
}

TEST(FitDepth, ConvergesFromTwiceTheDepth) {
  const PlanePair s;
  const FitResult r = fit_depth(s.target, s.sources, s.K, DepthMap(16, 16, 2 * s.depth));
  EXPECT_LE(r.iterations, 500);
  EXPECT_FALSE(r.degenerate);
  EXPECT_LT(depth_metrics(r.depth, s.truth).abs_rel, 0.05);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
  EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(r.iterations) + 1);
}

TEST(FitDepth, TexturelessSceneIsDegenerate) {
  const Intrinsics K{50, 50, 15.5, 15.5};
  const std::vector<FitSource> src{{Image(32, 32, 3, 0.4), testing::translation(0.1, 0, 0)}};
  const FitResult r = fit_depth(Image(32, 32, 3, 0.4), src, K, DepthMap(8, 8, 3.0));
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.iterations, 0);
  for (double v : r.depth.values()) EXPECT_EQ(v, 3.0);
}

TEST(FitDepth, ArgumentErrors) {
  const PlanePair s;
  EXPECT_THROW(fit_depth(s.target, {}, s.K, DepthMap(8, 8, 2.0)), ParameterError);
  const std::vector<FitSource> three(3, s.sources[0]);
  EXPECT_THROW(fit_depth(s.target, three, s.K, DepthMap(8, 8, 2.0)), ParameterError);
  EXPECT_THROW(fit_depth(s.target, s.sources, s.K, DepthMap(33, 33, 2.0)), ParameterError);
  DepthMap holes(8, 8, 2.0);
  holes.invalidate(0, 0);
  EXPECT_THROW(fit_depth(s.target, s.sources, s.K, holes), ParameterError);
  const std::vector<FitSource> wrong{{Image(32, 32, 3), Pose::identity()}};
  EXPECT_THROW(fit_depth(s.target, wrong, s.K, DepthMap(8, 8, 2.0)), ParameterError);
}

TEST(FitDepth, EverythingOutOfViewIsAnOptimizationError) {
  const PlanePair s;
  const std::vector<FitSource> behind{{s.sources[0].image, testing::translation(0, 0, -10.0)}};
  EXPECT_THROW(fit_depth(s.target, behind, s.K, DepthMap(8, 8, 2.0)), OptimizationError);
}

}  // namespace
}  // namespace uwd
