#pragma once

#include <cstdint>

#include "varidepth/ssim.hpp"
#include "varidepth/types.hpp"

// Structure distillation from a frozen relative-depth expert: scale/shift
// alignment into the student's metric range, a depth-domain SSIM loss, and a
// spatial loss on soft occluding-boundary maps. Expert-side gradients are
// never propagated; the expert is a fixed teacher.

namespace varidepth {

// Scale/shift mapping aligned = a_s * expert + a_t.
struct AlignmentParams {
  double a_s = 1.0;
  double a_t = 0.0;

  Grid apply(const Grid& expert_depth) const { return a_s * expert_depth + a_t; }
};

struct RansacConfig {
  int iterations = 200;
  double inlier_threshold = 0.05; // meters
  double min_inlier_fraction = 0.3;
  uint64_t seed = 0;

  void check() const;
};

struct DistillConfig {
  double quantile = 0.95;          // turn-on level for boundary maps
  double softsign_sharpness = 50.0;
  double stat_weight = 1.0;
  double spat_weight = 0.1;

  void check() const;
};

// ---------------------------------------------------------------------------
// Expert preparation and alignment
// ---------------------------------------------------------------------------

// Inverse-depth-space expert output -> depth-space relative map, elementwise
// 1 / max(raw, floor). Pixels with raw <= floor come out invalid.
DepthMap invert_expert(const RelativeDepthMap& raw, double floor = 1e-6);

// Closed-form least squares for (a_s, a_t) over jointly-valid pixels,
// minimizing sum (a_s * expert + a_t - student)^2. Throws DegenerateError
// when fewer than two joint pixels exist or the expert is constant.
AlignmentParams align_least_squares(const DepthMap& expert_depth, const DepthMap& student);

struct RansacResult {
  AlignmentParams params;
  Mask inliers;
  Eigen::Index inlier_count = 0;
};

// Robust variant: 2-point hypotheses scored by inlier count, final least
// squares refit on the best consensus set. Deterministic under a fixed seed.
RansacResult align_ransac(const DepthMap& expert_depth, const DepthMap& reference,
                          const RansacConfig& cfg);

// ---------------------------------------------------------------------------
// Boundary maps
// ---------------------------------------------------------------------------

// 3x3 Sobel gradients with reflected borders, unnormalized kernels
// [-1 0 1; -2 0 2; -1 0 1] and its transpose.
GradientMap sobel(const Grid& x);

// Nearest-rank-ceiling quantile of gradient magnitudes over valid pixels:
// the ceil(q*n)-th smallest value. Treated as a constant in all gradients.
double turn_on_level(const GradientMap& gmap, double quantile, const Mask& valid);
double turn_on_level(const GradientMap& gmap, double quantile);

// Soft-sign binarization of (magnitude - alpha): s*x / (1 + |s*x|). Smooth
// everywhere with derivative s at level alpha.
BoundaryMap soft_binarize(const Grid& gradient_magnitude, double alpha, double sharpness);

double softsign(double x, double sharpness);
double softsign_derivative(double x, double sharpness);

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

struct StatLossResult {
  double value = 0.0;  // 1 - mean SSIM, in [0,2]
  Grid grad_student;   // d value / d student depth
};

// Depth-domain SSIM loss between the aligned expert (constant) and the
// student. Throws EmptyDomainError if the masks never overlap.
StatLossResult stat_loss(const DepthMap& aligned_expert, const DepthMap& student,
                         const SsimConfig& cfg);

struct SpatialLossResult {
  double value = 0.0;      // differentiable form, mean |soft* - soft| / 2
  double hard_value = 0.0; // mean XOR of the hard maps (diagnostic)
  Grid grad_student_soft;  // d value / d student soft map
};

SpatialLossResult spatial_loss(const BoundaryMap& expert, const BoundaryMap& student,
                               const Mask& valid);
SpatialLossResult spatial_loss(const BoundaryMap& expert, const BoundaryMap& student);

struct DistLossResult {
  double l_stat = 0.0;
  double l_spat = 0.0;      // differentiable form
  double l_spat_hard = 0.0;
  double value = 0.0;       // stat_weight * l_stat + spat_weight * l_spat
  double alpha_expert = 0.0;
  double alpha_student = 0.0;
  Grid grad_student;        // d value / d student depth
};

// Combined distillation loss. Each side's turn-on level comes from its own
// gradient map; both levels are recomputed per call and excluded from the
// gradient.
DistLossResult dist_loss(const DepthMap& aligned_expert, const DepthMap& student,
                         const DistillConfig& cfg, const SsimConfig& ssim_cfg);

} // namespace varidepth
