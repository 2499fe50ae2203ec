#pragma once

#include <optional>

#include "varidepth/types.hpp"

// Depth evaluation: error metrics (MAE, AbsRel, RMSE, RMSE_log) and threshold
// accuracies (delta_1..3), all over jointly-valid pixels.

namespace varidepth {

struct DepthMetrics {
  double mae = 0.0;
  double abs_rel = 0.0;
  double rmse = 0.0;
  double rmse_log = 0.0; // natural logarithm
  double delta1 = 0.0;   // fraction with max(p/g, g/p) < 1.25
  double delta2 = 0.0;   //                              < 1.25^2
  double delta3 = 0.0;   //                              < 1.25^3
  Eigen::Index pixel_count = 0;
};

// `cap`, when set, additionally excludes pixels whose ground truth exceeds it.
DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt,
                           std::optional<double> cap = std::nullopt);

struct MedianScaled {
  DepthMap pred;
  double factor = 1.0; // median(gt) / median(pred)
};

// Rescales a prediction by the ratio of medians over jointly-valid pixels,
// the standard protocol for evaluating scale-ambiguous estimators.
MedianScaled median_scale(const DepthMap& pred, const DepthMap& gt);

} // namespace varidepth
