#pragma once

#include <optional>
#include <vector>

#include "varidepth/distill.hpp"
#include "varidepth/photometric.hpp"
#include "varidepth/types.hpp"

// Variational depth refinement: a per-pixel log-depth field (and optionally a
// 6-DoF pose per temporal neighbor) is optimized by first-order descent on
//
//   total = l_lr + l_temp + dist_weight * l_dist (+ smoothness term)
//
// with the expert map as a frozen teacher. Log-depth keeps the output
// strictly positive and evens out the step size across near and far ranges.

namespace varidepth {

struct LossReport {
  double l_lr = 0.0;
  double l_temp = 0.0;
  double l_stat = 0.0;
  double l_spat = 0.0;
  double l_dist = 0.0;
  double l_smooth = 0.0;
  double l_total = 0.0;
  double grad_norm = 0.0;
};

enum class OptimizerKind { PlainGradient, Momentum, AdaptiveMoments };
enum class LrSchedule { Constant, StepDecay };

struct RefineConfig {
  int iterations = 500;
  double learning_rate = 2e-2;
  OptimizerKind optimizer = OptimizerKind::AdaptiveMoments;
  LrSchedule lr_schedule = LrSchedule::Constant;
  std::vector<int> decay_at;  // step indices; empty + StepDecay = 80% of iterations
  double decay_factor = 0.1;

  double dist_weight = 0.1;
  DistillConfig distill;
  SsimConfig ssim;
  double kappa = 0.85;
  bool grayscale = false;

  std::vector<int> temporal_frames; // offsets to use; empty = all provided
  bool min_reprojection = false;    // per-pixel min over temporal sources
  double smoothness_weight = 0.0;   // edge-aware log-depth regularizer

  double init_depth = 2.0; // meters
  double momentum = 0.9;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  uint64_t seed = 0;

  void check() const;
};

struct TemporalFrameInput {
  int offset = 1; // frame index relative to t
  Image image;
};

struct RefineInputs {
  Image left;
  Image right;
  double baseline = 0.13;
  CameraIntrinsics intrinsics;
  std::vector<TemporalFrameInput> temporal;
  std::optional<RelativeDepthMap> expert; // raw inverse-depth-space output
};

struct RefinerState {
  Grid log_depth;
  std::vector<int> pose_offsets;  // temporal offsets being optimized
  std::vector<Vec6> pose_params;  // one per offset, axis-angle + translation
  int step_count = 0;
  std::vector<LossReport> loss_history;

  // First/second-moment accumulators for momentum and adaptive-moments.
  Grid depth_m1, depth_m2;
  std::vector<Vec6> pose_m1, pose_m2;

  DepthMap depth() const; // exp(log_depth), all pixels valid

  static RefinerState init(const RefineInputs& inputs, const RefineConfig& cfg);
};

struct TotalLossResult {
  LossReport report;
  Grid grad_log_depth;
  std::vector<Vec6> grad_pose;   // aligned with state.pose_offsets
  AlignmentParams alignment;     // expert alignment used this evaluation
  bool has_alignment = false;
};

// Evaluates the full objective and its analytic gradient. The expert
// alignment is recomputed from the current depth unless `fixed_alignment`
// pins it; either way no gradient flows through the alignment solve or the
// boundary turn-on levels.
TotalLossResult total_loss(const RefinerState& state, const RefineInputs& inputs,
                           const RefineConfig& cfg,
                           const AlignmentParams* fixed_alignment = nullptr);

// One optimizer update. Appends a LossReport; throws NumericalError naming
// the offending term if any loss value or gradient turns non-finite.
void step(RefinerState& state, const RefineInputs& inputs, const RefineConfig& cfg);

struct RefineResult {
  DepthMap depth;
  std::vector<int> pose_offsets;
  std::vector<Vec6> pose_params;
  std::vector<LossReport> trace;
};

// Constant-depth initialization followed by cfg.iterations steps.
RefineResult refine(const RefineInputs& inputs, const RefineConfig& cfg);

// ---------------------------------------------------------------------------
// Config documents
// ---------------------------------------------------------------------------

class KeyValueDoc;

KeyValueDoc refine_config_to_doc(const RefineConfig& cfg);
RefineConfig refine_config_from_doc(const KeyValueDoc& doc);

} // namespace varidepth
