#pragma once

#include "varidepth/types.hpp"

// Windowed SSIM over masked rasters. Local means, variances, and covariance
// come from a box filter with reflected borders; pixels excluded by the mask
// contribute to no window, and each window normalizes by its own valid count.

namespace varidepth {

struct SsimConfig {
  int window = 3;          // odd, >= 3
  double c1 = 0.01 * 0.01; // stabilizers for data in [0,1]
  double c2 = 0.03 * 0.03;

  void check() const;
  int radius() const { return window / 2; }
};

// Forward pass with cached moments so the backward pass can reuse them.
struct SsimResult {
  Grid map;    // per-pixel SSIM, in [-1,1]; 0 where invalid
  Mask valid;  // pixel valid and its window contains at least one valid pixel
  // cached moments
  Grid count, mu_a, mu_b, e_aa, e_bb, e_ab;

  double mean() const; // over valid pixels; throws EmptyDomainError when none
};

SsimResult ssim_map(const Grid& a, const Grid& b, const Mask& valid, const SsimConfig& cfg);

// Gradient of sum_p upstream(p) * map(p) with respect to `a` or `b`.
// `upstream` must be zero at invalid pixels.
enum class SsimArg { A, B };
Grid ssim_backward(const SsimResult& fwd, const Grid& a, const Grid& b, const Mask& valid,
                   const SsimConfig& cfg, SsimArg wrt, const Grid& upstream);

} // namespace varidepth
