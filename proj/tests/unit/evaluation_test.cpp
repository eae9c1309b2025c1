#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support/synthetic.hpp"
#include "uwd/error.hpp"
#include "uwd/evaluation.hpp"

namespace uwd {
namespace {

// Straight from the metric definitions, on plain vectors of jointly valid pairs.
MetricReport brute_force(const std::vector<double>& p, const std::vector<double>& g) {
  MetricReport r;
  const double n = static_cast<double>(p.size());
  double se = 0, sle = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    r.abs_rel += std::fabs(p[i] - g[i]) / g[i] / n;
    r.sq_rel += (p[i] - g[i]) * (p[i] - g[i]) / g[i] / n;
    se += (p[i] - g[i]) * (p[i] - g[i]) / n;
    sle += std::pow(std::log(p[i] / g[i]), 2) / n;
    const double ratio = std::max(p[i] / g[i], g[i] / p[i]);
    r.delta1 += (ratio < 1.25 ? 1.0 : 0.0) / n;
    r.delta2 += (ratio < 1.25 * 1.25 ? 1.0 : 0.0) / n;
    r.delta3 += (ratio < std::pow(1.25, 3) ? 1.0 : 0.0) / n;
  }
  r.rmse = std::sqrt(se);
  r.rmse_log = std::sqrt(sle);
  r.n_valid = p.size();
  return r;
}

void expect_reports_near(const MetricReport& a, const MetricReport& b, double tol) {
  EXPECT_NEAR(a.abs_rel, b.abs_rel, tol);
  EXPECT_NEAR(a.sq_rel, b.sq_rel, tol);
  EXPECT_NEAR(a.rmse, b.rmse, tol);
  EXPECT_NEAR(a.rmse_log, b.rmse_log, tol);
  EXPECT_NEAR(a.delta1, b.delta1, tol);
  EXPECT_NEAR(a.delta2, b.delta2, tol);
  EXPECT_NEAR(a.delta3, b.delta3, tol);
  EXPECT_EQ(a.n_valid, b.n_valid);
}

TEST(DepthMetrics, PerfectPrediction) {
  std::mt19937_64 rng(1);
  const DepthMap gt = testing::random_depth(8, 8, rng, 0.5, 10);
  const MetricReport r = depth_metrics(gt, gt);
  EXPECT_EQ(r.abs_rel, 0.0);
  EXPECT_EQ(r.rmse, 0.0);
  EXPECT_EQ(r.delta1, 1.0);
  EXPECT_EQ(r.n_valid, 64u);
}

TEST(DepthMetrics, MatchesBruteForce) {
  std::mt19937_64 rng(2);
  std::bernoulli_distribution hole(0.1);
  for (int trial = 0; trial < 50; ++trial) {
    DepthMap pred = testing::random_depth(12, 9, rng, 0.5, 12);
    DepthMap gt = testing::random_depth(12, 9, rng, 0.5, 12);
    std::vector<double> p, g;
    for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
      if (hole(rng)) gt.set(i, 0.0);
      if (hole(rng)) pred.set(i, NAN);
      if (gt.valid(i) && pred.valid(i)) {
        p.push_back(pred[i]);
        g.push_back(gt[i]);
      }
    }
    expect_reports_near(depth_metrics(pred, gt), brute_force(p, g), 1e-9);
  }
}

TEST(DepthMetrics, ThresholdIsStrict) {
  const std::vector<double> p{1.25, 1.0}, g{1.0, 1.0};
  const MetricReport r = depth_metrics(DepthMap(1, 2, p), DepthMap(1, 2, g));
  EXPECT_EQ(r.delta1, 0.5);
  EXPECT_EQ(r.delta2, 1.0);
}

TEST(DepthMetrics, Errors) {
  EXPECT_THROW(depth_metrics(DepthMap(2, 2, 1.0), DepthMap(2, 3, 1.0)), ParameterError);
  EXPECT_THROW(depth_metrics(DepthMap(2, 2), DepthMap(2, 2, 1.0)), ParameterError);
}

TEST(MedianScale, MatchesMediansAndCancelsScale) {
  std::mt19937_64 rng(3);
  const DepthMap gt = testing::random_depth(10, 10, rng, 1, 20);
  const DepthMap pred = testing::random_depth(10, 10, rng, 1, 20);
  const MetricReport base = depth_metrics(median_scale(pred, gt), gt);
  for (double c : {0.1, 1.0, 13.0}) {
    std::vector<double> v(pred.values().begin(), pred.values().end());
    for (double& x : v) x *= c;
    expect_reports_near(depth_metrics(median_scale(DepthMap(10, 10, v), gt), gt), base, 1e-9);
  }
  const DepthMap scaled = median_scale(pred, gt);
  std::vector<double> s(scaled.values().begin(), scaled.values().end());
  std::vector<double> g(gt.values().begin(), gt.values().end());
  std::sort(s.begin(), s.end());
  std::sort(g.begin(), g.end());
  EXPECT_NEAR((s[49] + s[50]) / 2, (g[49] + g[50]) / 2, 1e-12);
}

TEST(MedianScale, NoOverlapIsDegenerate) {
  DepthMap a(1, 2), b(1, 2);
  a.set(0, 0, 1.0);
  b.set(0, 1, 1.0);
  EXPECT_THROW(median_scale(a, b), DegenerateInputError);
}

TEST(MeanReport, AveragesImagesAndSumsPixels) {
  MetricReport a, b;
  a.abs_rel = 0.1;
  a.delta1 = 1.0;
  a.n_valid = 10;
  b.abs_rel = 0.3;
  b.delta1 = 0.5;
  b.n_valid = 30;
  const std::vector<MetricReport> all{a, b};
  const MetricReport m = mean_report(all);
  EXPECT_NEAR(m.abs_rel, 0.2, 1e-15);
  EXPECT_NEAR(m.delta1, 0.75, 1e-15);
  EXPECT_EQ(m.n_valid, 40u);
  EXPECT_THROW(mean_report(std::span<const MetricReport>{}), ParameterError);
}

TEST(MetricsTable, FixedWidthThreeDecimals) {
  MetricReport r;
  r.abs_rel = 0.0994;
  r.sq_rel = 0.5;
  r.rmse = 0.9451;
  r.rmse_log = 0.2;
  r.delta1 = 0.91;
  r.delta2 = 0.97;
  r.delta3 = 0.99;
  const std::string row = metrics_table_row(r);
  EXPECT_EQ(row, "    0.099     0.500     0.945     0.200     0.910     0.970     0.990");
  EXPECT_EQ(metrics_table_header().size(), row.size());
}

}  // namespace
}  // namespace uwd
