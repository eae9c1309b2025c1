#include "uwd/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "uwd/error.hpp"
#include "uwd/imaging.hpp"

namespace uwd {
namespace {

bool jointly_valid(const DepthMap& pred, const DepthMap& gt, std::size_t i) {
  return pred.valid(i) && gt.valid(i);
}

}  // namespace

DepthMap median_scale(const DepthMap& pred, const DepthMap& gt) {
  if (!pred.same_shape(gt)) throw ParameterError("median_scale: prediction and ground truth differ in size");
  std::vector<double> p, g;
  for (std::size_t i = 0; i < pred.pixel_count(); ++i) {
    if (!jointly_valid(pred, gt, i)) continue;
    p.push_back(pred[i]);
    g.push_back(gt[i]);
  }
  if (p.empty()) throw DegenerateInputError("median_scale: no jointly valid pixels");
  const double med_pred = median(p);
  if (!(med_pred > 0.0)) throw DegenerateInputError("median_scale: prediction median is zero");
  const double ratio = median(g) / med_pred;

  DepthMap out(pred.height(), pred.width());
  for (std::size_t i = 0; i < pred.pixel_count(); ++i) {
    if (pred.valid(i)) out.set(i, pred[i] * ratio);
  }
  return out;
}

MetricReport depth_metrics(const DepthMap& pred, const DepthMap& gt) {
  if (!pred.same_shape(gt)) throw ParameterError("depth_metrics: prediction and ground truth differ in size");
  MetricReport r;
  double sq = 0.0, sq_log = 0.0;
  std::size_t d1 = 0, d2 = 0, d3 = 0;
  for (std::size_t i = 0; i < pred.pixel_count(); ++i) {
    if (!jointly_valid(pred, gt, i)) continue;
    const double p = pred[i], g = gt[i];
    const double err = p - g;
    r.abs_rel += std::abs(err) / g;
    r.sq_rel += err * err / g;
    sq += err * err;
    const double log_err = std::log(p) - std::log(g);
    sq_log += log_err * log_err;
    const double ratio = std::max(p / g, g / p);
    d1 += ratio < 1.25;
    d2 += ratio < 1.25 * 1.25;
    d3 += ratio < 1.25 * 1.25 * 1.25;
    ++r.n_valid;
  }
  if (r.n_valid == 0) throw ParameterError("depth_metrics: no jointly valid pixels");
  const double n = static_cast<double>(r.n_valid);
  r.abs_rel /= n;
  r.sq_rel /= n;
  r.rmse = std::sqrt(sq / n);
  r.rmse_log = std::sqrt(sq_log / n);
  r.delta1 = static_cast<double>(d1) / n;
  r.delta2 = static_cast<double>(d2) / n;
  r.delta3 = static_cast<double>(d3) / n;
  return r;
}

MetricReport mean_report(std::span<const MetricReport> reports) {
  if (reports.empty()) throw ParameterError("mean_report: no reports");
  MetricReport out;
  for (const MetricReport& r : reports) {
    out.abs_rel += r.abs_rel;
    out.sq_rel += r.sq_rel;
    out.rmse += r.rmse;
    out.rmse_log += r.rmse_log;
    out.delta1 += r.delta1;
    out.delta2 += r.delta2;
    out.delta3 += r.delta3;
    out.n_valid += r.n_valid;
  }
  const double n = static_cast<double>(reports.size());
  out.abs_rel /= n;
  out.sq_rel /= n;
  out.rmse /= n;
  out.rmse_log /= n;
  out.delta1 /= n;
  out.delta2 /= n;
  out.delta3 /= n;
  return out;
}

std::string metrics_table_header() {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%9s %9s %9s %9s %9s %9s %9s", "abs_rel", "sq_rel", "rmse",
                "rmse_log", "a1", "a2", "a3");
  return buf;
}

std::string metrics_table_row(const MetricReport& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%9.3f %9.3f %9.3f %9.3f %9.3f %9.3f %9.3f", r.abs_rel, r.sq_rel,
                r.rmse, r.rmse_log, r.delta1, r.delta2, r.delta3);
  return buf;
}

}  // namespace uwd
