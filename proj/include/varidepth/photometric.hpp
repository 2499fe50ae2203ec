#pragma once

#include <vector>

#include "varidepth/ssim.hpp"
#include "varidepth/types.hpp"

// Photometric reconstruction error between a target view and a predicted
// (warped) view: kappa * (1 - SSIM)/2 + (1 - kappa) * |target - predicted|,
// computed per channel and channel-averaged, or on luma in grayscale mode.

namespace varidepth {

struct PhotometricConfig {
  double kappa = 0.85;
  SsimConfig ssim;
  bool grayscale = false;

  void check() const;
};

struct PeResult {
  Grid per_pixel;  // channel-averaged loss; 0 where invalid
  Mask valid;
  double mean = 0.0; // over valid pixels

  // Cached per-channel pieces for the backward pass.
  std::vector<SsimResult> ssim;   // per evaluated channel
  std::vector<Grid> target_ch, predicted_ch;
};

PeResult pe_forward(const Image& target, const Image& predicted, const Mask& valid,
                    const PhotometricConfig& cfg);

// Gradient of sum_p upstream(p) * per_pixel(p) w.r.t. the predicted image,
// one grid per predicted channel. `upstream` must vanish at invalid pixels.
// The L1 subgradient at zero difference is taken as 0.
std::vector<Grid> pe_backward(const PeResult& fwd, const Image& predicted,
                              const PhotometricConfig& cfg, const Grid& upstream);

// Convenience wrapper: mean loss plus its gradient w.r.t. predicted.
struct PeWithGrad {
  Grid per_pixel;
  Mask valid;
  double mean = 0.0;
  std::vector<Grid> grad_predicted;
};

PeWithGrad pe(const Image& target, const Image& predicted, const Mask& valid,
              const PhotometricConfig& cfg);

} // namespace varidepth
