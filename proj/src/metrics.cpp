#include "varidepth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace varidepth {

DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt, std::optional<double> cap) {
  if (pred.width != gt.width || pred.height != gt.height)
    throw DomainError("depth_metrics: shape mismatch");

  DepthMetrics m;
  double sum_abs = 0.0, sum_rel = 0.0, sum_sq = 0.0, sum_logsq = 0.0;
  Eigen::Index d1 = 0, d2 = 0, d3 = 0;
  const double t1 = 1.25, t2 = 1.25 * 1.25, t3 = 1.25 * 1.25 * 1.25;

  for (Eigen::Index v = 0; v < gt.data.rows(); ++v)
    for (Eigen::Index u = 0; u < gt.data.cols(); ++u) {
      if (!pred.valid(v, u) || !gt.valid(v, u)) continue;
      const double g = gt.data(v, u);
      if (!(g > 0.0)) throw DomainError("depth_metrics: non-positive ground truth at valid pixel");
      if (cap && g > *cap) continue;
      const double p = pred.data(v, u);
      const double diff = p - g;
      sum_abs += std::abs(diff);
      sum_rel += std::abs(diff) / g;
      sum_sq += diff * diff;
      const double dl = std::log(p) - std::log(g);
      sum_logsq += dl * dl;
      const double ratio = std::max(p / g, g / p);
      d1 += ratio < t1;
      d2 += ratio < t2;
      d3 += ratio < t3;
      ++m.pixel_count;
    }

  if (m.pixel_count == 0) throw EmptyDomainError("depth_metrics: empty valid overlap");
  const double n = double(m.pixel_count);
  m.mae = sum_abs / n;
  m.abs_rel = sum_rel / n;
  m.rmse = std::sqrt(sum_sq / n);
  m.rmse_log = std::sqrt(sum_logsq / n);
  m.delta1 = double(d1) / n;
  m.delta2 = double(d2) / n;
  m.delta3 = double(d3) / n;
  return m;
}

namespace {

double median(std::vector<double> xs) {
  const size_t n = xs.size();
  std::nth_element(xs.begin(), xs.begin() + n / 2, xs.end());
  double hi = xs[n / 2];
  if (n % 2 == 1) return hi;
  double lo = *std::max_element(xs.begin(), xs.begin() + n / 2);
  return 0.5 * (lo + hi);
}

} // namespace

MedianScaled median_scale(const DepthMap& pred, const DepthMap& gt) {
  if (pred.width != gt.width || pred.height != gt.height)
    throw DomainError("median_scale: shape mismatch");
  std::vector<double> ps, gs;
  for (Eigen::Index v = 0; v < gt.data.rows(); ++v)
    for (Eigen::Index u = 0; u < gt.data.cols(); ++u)
      if (pred.valid(v, u) && gt.valid(v, u)) {
        ps.push_back(pred.data(v, u));
        gs.push_back(gt.data(v, u));
      }
  if (ps.empty()) throw EmptyDomainError("median_scale: empty valid overlap");

  const double mp = median(std::move(ps));
  if (mp == 0.0) throw DegenerateError("median_scale: predicted median is zero");
  MedianScaled out;
  out.factor = median(std::move(gs)) / mp;
  out.pred = DepthMap(Grid(pred.data * out.factor), Mask(pred.valid));
  return out;
}

} // namespace varidepth
