#include "varidepth/distill.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "varidepth/filters.hpp"

namespace varidepth {

void RansacConfig::check() const {
  if (iterations < 1) throw DomainError("ransac iterations must be >= 1");
  if (!(inlier_threshold > 0.0)) throw DomainError("inlier threshold must be positive");
  if (!(min_inlier_fraction > 0.0) || min_inlier_fraction > 1.0)
    throw DomainError("min inlier fraction must lie in (0,1]");
}

void DistillConfig::check() const {
  if (!(quantile > 0.0) || !(quantile < 1.0)) throw DomainError("quantile must lie in (0,1)");
  if (!(softsign_sharpness > 0.0)) throw DomainError("soft-sign sharpness must be positive");
  if (stat_weight < 0.0 || spat_weight < 0.0) throw DomainError("loss weights must be >= 0");
}

// ---------------------------------------------------------------------------
// Expert preparation and alignment
// ---------------------------------------------------------------------------

DepthMap invert_expert(const RelativeDepthMap& raw, double floor) {
  if (!(floor > 0.0)) throw DomainError("inversion floor must be positive");
  const Grid floored = raw.data.max(floor);
  Grid depth = floored.inverse();
  Mask valid = raw.data > floor;
  return DepthMap(std::move(depth), std::move(valid));
}

namespace {

struct Pairs {
  std::vector<double> x; // expert
  std::vector<double> y; // student / reference
  std::vector<Eigen::Index> flat_index;
};

Pairs joint_pixels(const DepthMap& expert_depth, const DepthMap& student) {
  if (expert_depth.width != student.width || expert_depth.height != student.height)
    throw DomainError("alignment: shape mismatch");
  Pairs p;
  for (Eigen::Index v = 0; v < expert_depth.data.rows(); ++v)
    for (Eigen::Index u = 0; u < expert_depth.data.cols(); ++u)
      if (expert_depth.valid(v, u) && student.valid(v, u)) {
        p.x.push_back(expert_depth.data(v, u));
        p.y.push_back(student.data(v, u));
        p.flat_index.push_back(v * expert_depth.data.cols() + u);
      }
  return p;
}

// Mean-centered closed form: a_s = cov(x,y)/var(x), a_t = mean(y) - a_s mean(x).
AlignmentParams fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateError("degenerate fit: expert values are constant");
  AlignmentParams p;
  p.a_s = sxy / sxx;
  p.a_t = my - p.a_s * mx;
  return p;
}

} // namespace

AlignmentParams align_least_squares(const DepthMap& expert_depth, const DepthMap& student) {
  Pairs p = joint_pixels(expert_depth, student);
  if (p.x.size() < 2) throw DegenerateError("degenerate fit: fewer than two joint pixels");
  return fit_line(p.x, p.y);
}

RansacResult align_ransac(const DepthMap& expert_depth, const DepthMap& reference,
                          const RansacConfig& cfg) {
  cfg.check();
  Pairs p = joint_pixels(expert_depth, reference);
  const size_t n = p.x.size();
  if (n < 2) throw DegenerateError("degenerate fit: fewer than two joint pixels");

  auto count_inliers = [&](const AlignmentParams& line, std::vector<char>* flags) {
    size_t count = 0;
    for (size_t i = 0; i < n; ++i) {
      const bool in = std::abs(line.a_s * p.x[i] + line.a_t - p.y[i]) < cfg.inlier_threshold;
      if (flags) (*flags)[i] = in;
      count += in;
    }
    return count;
  };

  bool any_hypothesis = false;
  size_t best_count = 0;
  AlignmentParams best_line;
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    // Per-iteration RNG stream keyed on (seed, iter); iterations stay
    // independent, so the loop could be parallelized without changing draws.
    std::mt19937_64 rng(cfg.seed * 0x9E3779B97F4A7C15ULL + uint64_t(iter) + 1);
    std::uniform_int_distribution<size_t> pick(0, n - 1);
    const size_t i = pick(rng);
    size_t j = pick(rng);
    if (i == j) j = (j + 1) % n;
    if (p.x[i] == p.x[j]) continue; // vertical hypothesis, no line through it
    any_hypothesis = true;
    AlignmentParams line;
    line.a_s = (p.y[j] - p.y[i]) / (p.x[j] - p.x[i]);
    line.a_t = p.y[i] - line.a_s * p.x[i];
    const size_t count = count_inliers(line, nullptr);
    if (count > best_count) {
      best_count = count;
      best_line = line;
    }
  }
  if (!any_hypothesis) throw DegenerateError("degenerate fit: all sampled pairs share one expert value");
  if (double(best_count) < cfg.min_inlier_fraction * double(n))
    throw DegenerateError("no consensus: best hypothesis below the inlier fraction");

  std::vector<char> flags(n, 0);
  count_inliers(best_line, &flags);
  std::vector<double> xin, yin;
  for (size_t i = 0; i < n; ++i)
    if (flags[i]) {
      xin.push_back(p.x[i]);
      yin.push_back(p.y[i]);
    }

  RansacResult out;
  out.params = xin.size() >= 2 ? fit_line(xin, yin) : best_line;
  out.inliers = Mask::Constant(expert_depth.height, expert_depth.width, false);
  out.inlier_count = 0;
  // Report inliers of the refit line.
  for (Eigen::Index v = 0; v < out.inliers.rows(); ++v)
    for (Eigen::Index u = 0; u < out.inliers.cols(); ++u)
      if (expert_depth.valid(v, u) && reference.valid(v, u)) {
        const double resid =
            out.params.a_s * expert_depth.data(v, u) + out.params.a_t - reference.data(v, u);
        if (std::abs(resid) < cfg.inlier_threshold) {
          out.inliers(v, u) = true;
          ++out.inlier_count;
        }
      }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary maps
// ---------------------------------------------------------------------------

namespace {

Eigen::Matrix3d sobel_kernel_u() {
  Eigen::Matrix3d k;
  k << -1, 0, 1, -2, 0, 2, -1, 0, 1;
  return k;
}

Eigen::Matrix3d sobel_kernel_v() {
  return sobel_kernel_u().transpose();
}

} // namespace

GradientMap sobel(const Grid& x) {
  if (x.rows() < 3 || x.cols() < 3) throw DomainError("sobel: grid smaller than the 3x3 kernel");
  return GradientMap(correlate3(x, sobel_kernel_u()), correlate3(x, sobel_kernel_v()));
}

double turn_on_level(const GradientMap& gmap, double quantile, const Mask& valid) {
  if (!(quantile > 0.0 && quantile < 1.0)) throw DomainError("quantile must lie in (0,1)");
  std::vector<double> mags;
  mags.reserve(size_t(gmap.magnitude.size()));
  for (Eigen::Index v = 0; v < gmap.magnitude.rows(); ++v)
    for (Eigen::Index u = 0; u < gmap.magnitude.cols(); ++u)
      if (valid(v, u)) mags.push_back(gmap.magnitude(v, u));
  if (mags.empty()) throw EmptyDomainError("turn-on level over empty valid set");
  const size_t rank = size_t(std::ceil(quantile * double(mags.size()))); // 1-based
  const size_t idx = rank == 0 ? 0 : rank - 1;
  std::nth_element(mags.begin(), mags.begin() + idx, mags.end());
  return mags[idx];
}

double turn_on_level(const GradientMap& gmap, double quantile) {
  return turn_on_level(gmap, quantile, all_valid_mask(gmap.magnitude.rows(), gmap.magnitude.cols()));
}

double softsign(double x, double sharpness) {
  const double sx = sharpness * x;
  return sx / (1.0 + std::abs(sx));
}

double softsign_derivative(double x, double sharpness) {
  const double d = 1.0 + std::abs(sharpness * x);
  return sharpness / (d * d);
}

BoundaryMap soft_binarize(const Grid& gradient_magnitude, double alpha, double sharpness) {
  if (!(sharpness > 0.0)) throw DomainError("soft-sign sharpness must be positive");
  const Grid sx = sharpness * (gradient_magnitude - alpha);
  return BoundaryMap(Grid(sx / (1.0 + sx.abs())));
}

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

StatLossResult stat_loss(const DepthMap& aligned_expert, const DepthMap& student,
                         const SsimConfig& cfg) {
  if (aligned_expert.width != student.width || aligned_expert.height != student.height)
    throw DomainError("stat_loss: shape mismatch");
  const Mask joint = aligned_expert.valid && student.valid;
  const Eigen::Index n = joint.count();
  if (n == 0) throw EmptyDomainError("stat_loss: no jointly-valid pixels");

  const SsimResult s = ssim_map(aligned_expert.data, student.data, joint, cfg);
  StatLossResult out;
  out.value = 1.0 - s.mean();
  const Grid upstream = Grid::Constant(joint.rows(), joint.cols(), -1.0 / double(n));
  out.grad_student =
      ssim_backward(s, aligned_expert.data, student.data, joint, cfg, SsimArg::B, upstream);
  return out;
}

SpatialLossResult spatial_loss(const BoundaryMap& expert, const BoundaryMap& student,
                               const Mask& valid) {
  if (expert.width != student.width || expert.height != student.height)
    throw DomainError("spatial_loss: shape mismatch");
  const Eigen::Index n = valid.count();
  if (n == 0) throw EmptyDomainError("spatial_loss: no valid pixels");
  const Grid zero = Grid::Zero(valid.rows(), valid.cols());

  SpatialLossResult out;
  const Grid diff = expert.soft - student.soft;
  out.value = valid.select(Grid(diff.abs() / 2.0), zero).sum() / double(n);
  out.hard_value =
      valid.select(Grid((expert.hard - student.hard).abs()), zero).sum() / double(n);
  // d |e - s| / d s = -sign(e - s); flat at exact ties.
  const Grid sgn = (diff > 0.0).cast<double>() - (diff < 0.0).cast<double>();
  out.grad_student_soft = valid.select(Grid(-sgn / (2.0 * double(n))), zero);
  return out;
}

SpatialLossResult spatial_loss(const BoundaryMap& expert, const BoundaryMap& student) {
  return spatial_loss(expert, student, all_valid_mask(expert.height, expert.width));
}

DistLossResult dist_loss(const DepthMap& aligned_expert, const DepthMap& student,
                         const DistillConfig& cfg, const SsimConfig& ssim_cfg) {
  cfg.check();
  if (aligned_expert.width != student.width || aligned_expert.height != student.height)
    throw DomainError("dist_loss: shape mismatch");

  DistLossResult out;
  out.grad_student = Grid::Zero(student.data.rows(), student.data.cols());

  const StatLossResult stat = stat_loss(aligned_expert, student, ssim_cfg);
  out.l_stat = stat.value;
  out.value = cfg.stat_weight * stat.value;
  out.grad_student += cfg.stat_weight * stat.grad_student;

  if (cfg.spat_weight > 0.0) {
    const Mask joint = aligned_expert.valid && student.valid;
    const GradientMap g_expert = sobel(aligned_expert.data);
    const GradientMap g_student = sobel(student.data);
    out.alpha_expert = turn_on_level(g_expert, cfg.quantile, joint);
    out.alpha_student = turn_on_level(g_student, cfg.quantile, joint);

    const BoundaryMap e_expert =
        soft_binarize(g_expert.magnitude, out.alpha_expert, cfg.softsign_sharpness);
    const BoundaryMap e_student =
        soft_binarize(g_student.magnitude, out.alpha_student, cfg.softsign_sharpness);
    const SpatialLossResult spat = spatial_loss(e_expert, e_student, joint);
    out.l_spat = spat.value;
    out.l_spat_hard = spat.hard_value;
    out.value += cfg.spat_weight * spat.value;

    // Chain: soft -> magnitude -> (gu, gv) -> student depth. The turn-on
    // level is held constant.
    Grid d_mag(student.data.rows(), student.data.cols());
    for (Eigen::Index v = 0; v < d_mag.rows(); ++v)
      for (Eigen::Index u = 0; u < d_mag.cols(); ++u) {
        const double x = g_student.magnitude(v, u) - out.alpha_student;
        d_mag(v, u) = cfg.spat_weight * spat.grad_student_soft(v, u) *
                      softsign_derivative(x, cfg.softsign_sharpness);
      }
    const Grid safe_mag = (g_student.magnitude > 0.0)
                              .select(g_student.magnitude,
                                      Grid::Ones(d_mag.rows(), d_mag.cols()));
    const Grid d_gu = d_mag * g_student.gu / safe_mag;
    const Grid d_gv = d_mag * g_student.gv / safe_mag;
    out.grad_student += correlate3_adjoint(d_gu, sobel_kernel_u());
    out.grad_student += correlate3_adjoint(d_gv, sobel_kernel_v());
  }
  return out;
}

} // namespace varidepth
