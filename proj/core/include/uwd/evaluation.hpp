#pragma once

#include <span>
#include <string>

#include "uwd/image.hpp"

namespace uwd {

struct MetricReport {
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  double rmse = 0.0;
  double rmse_log = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  std::size_t n_valid = 0;
};

/// Scales `pred` by median(gt) / median(pred), both medians over jointly
/// valid pixels. Throws DegenerateInputError when no pixel is jointly valid.
DepthMap median_scale(const DepthMap& pred, const DepthMap& gt);

/// Standard depth error and accuracy metrics over jointly valid pixels.
/// The accuracy thresholds use a strict comparison against 1.25^i.
MetricReport depth_metrics(const DepthMap& pred, const DepthMap& gt);

/// Unweighted mean of per-image reports, the usual way a test set is
/// summarised. n_valid is the total pixel count.
MetricReport mean_report(std::span<const MetricReport> reports);

/// Column header and row in the order Abs Rel, Sq Rel, RMSE, RMSE log,
/// d<1.25, d<1.25^2, d<1.25^3, three decimals.
std::string metrics_table_header();
std::string metrics_table_row(const MetricReport& report);

}  // namespace uwd
