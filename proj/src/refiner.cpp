#include "varidepth/refiner.hpp"

#include <cmath>
#include <sstream>

#include "varidepth/geometry.hpp"
#include "varidepth/keyval.hpp"

namespace varidepth {

void RefineConfig::check() const {
  if (iterations < 0) throw ConfigError("iterations must be >= 0");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (dist_weight < 0.0 || smoothness_weight < 0.0) throw ConfigError("weights must be >= 0");
  if (!(init_depth > 0.0)) throw ConfigError("initial depth must be positive");
  distill.check();
  ssim.check();
}

DepthMap RefinerState::depth() const { return DepthMap::all_valid(log_depth.exp()); }

namespace {

void check_inputs(const RefineInputs& in) {
  auto same_shape = [&](const Image& img) {
    return img.width == in.left.width && img.height == in.left.height;
  };
  if (!same_shape(in.right)) throw DomainError("left/right image shapes differ");
  for (const auto& f : in.temporal)
    if (!same_shape(f.image)) throw DomainError("temporal frame shape differs from left image");
  if (in.expert &&
      (in.expert->width != in.left.width || in.expert->height != in.left.height))
    throw DomainError("expert map shape differs from left image");
  if (!(in.baseline > 0.0)) throw DomainError("baseline must be positive");
}

std::vector<const TemporalFrameInput*> used_frames(const RefineInputs& in,
                                                   const RefineConfig& cfg) {
  std::vector<const TemporalFrameInput*> out;
  if (cfg.temporal_frames.empty()) {
    for (const auto& f : in.temporal) out.push_back(&f);
    return out;
  }
  for (int offset : cfg.temporal_frames) {
    const TemporalFrameInput* found = nullptr;
    for (const auto& f : in.temporal)
      if (f.offset == offset) found = &f;
    if (!found) throw ConfigError("no temporal frame provided for requested offset");
    out.push_back(found);
  }
  return out;
}

// d(sum upstream * pe)/d depth from the pe gradient w.r.t. the warped image.
Grid chain_to_depth(const std::vector<Grid>& grad_warped, const WarpResult& wr) {
  Grid out = Grid::Zero(wr.du_ddepth.rows(), wr.du_ddepth.cols());
  for (size_t c = 0; c < grad_warped.size(); ++c)
    out += grad_warped[c] * wr.intensity_jacobian(int(c));
  return out;
}

// Accumulates the pose-parameter gradient for one temporal frame by rerunning
// the per-pixel warp geometry wherever the warp was valid.
Vec6 chain_to_pose(const std::vector<Grid>& grad_warped, const WarpResult& wr,
                   const DepthMap& depth, const PoseTransform& pose,
                   const CameraIntrinsics& K) {
  Vec6 g = Vec6::Zero();
  for (Eigen::Index v = 0; v < depth.data.rows(); ++v)
    for (Eigen::Index u = 0; u < depth.data.cols(); ++u) {
      if (!wr.valid(v, u)) continue;
      double weight_u = 0.0, weight_v = 0.0;
      for (size_t c = 0; c < grad_warped.size(); ++c) {
        weight_u += grad_warped[c](v, u) * wr.dsample_du[c](v, u);
        weight_v += grad_warped[c](v, u) * wr.dsample_dv[c](v, u);
      }
      if (weight_u == 0.0 && weight_v == 0.0) continue;

      const PixelWarp pw =
          warp_pixel(double(u), double(v), depth.data(v, u), pose.transform, K);
      const Vec3& xs = pw.source_point;
      const double inv_z = 1.0 / xs.z();
      // Projection Jacobian rows d(u_s)/dX and d(v_s)/dX.
      const Vec3 du_dx(K.fx * inv_z, 0.0, -K.fx * xs.x() * inv_z * inv_z);
      const Vec3 dv_dx(0.0, K.fy * inv_z, -K.fy * xs.y() * inv_z * inv_z);
      const Eigen::Matrix<double, 3, 6> J = pose.point_jacobian(pw.target_point);
      g += J.transpose() * (weight_u * du_dx + weight_v * dv_dx);
    }
  return g;
}

struct SmoothnessResult {
  double value = 0.0;
  Grid grad_log_depth;
};

// Edge-aware first-order smoothness on the log-depth field: forward
// differences weighted by exp(-|image gradient|) of the target luma.
SmoothnessResult smoothness(const Grid& log_depth, const Image& target) {
  const Eigen::Index h = log_depth.rows(), w = log_depth.cols();
  const Grid lum = target.luma();
  SmoothnessResult r;
  r.grad_log_depth = Grid::Zero(h, w);
  const double norm = 1.0 / double(h * w);
  for (Eigen::Index v = 0; v < h; ++v)
    for (Eigen::Index u = 0; u < w; ++u) {
      if (u + 1 < w) {
        const double d = log_depth(v, u + 1) - log_depth(v, u);
        const double wgt = std::exp(-std::abs(lum(v, u + 1) - lum(v, u)));
        r.value += std::abs(d) * wgt * norm;
        const double s = (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0)) * wgt * norm;
        r.grad_log_depth(v, u + 1) += s;
        r.grad_log_depth(v, u) -= s;
      }
      if (v + 1 < h) {
        const double d = log_depth(v + 1, u) - log_depth(v, u);
        const double wgt = std::exp(-std::abs(lum(v + 1, u) - lum(v, u)));
        r.value += std::abs(d) * wgt * norm;
        const double s = (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0)) * wgt * norm;
        r.grad_log_depth(v + 1, u) += s;
        r.grad_log_depth(v, u) -= s;
      }
    }
  return r;
}

} // namespace

RefinerState RefinerState::init(const RefineInputs& inputs, const RefineConfig& cfg) {
  cfg.check();
  check_inputs(inputs);
  RefinerState s;
  s.log_depth = Grid::Constant(inputs.left.height, inputs.left.width, std::log(cfg.init_depth));
  s.depth_m1 = Grid::Zero(inputs.left.height, inputs.left.width);
  s.depth_m2 = Grid::Zero(inputs.left.height, inputs.left.width);
  for (const auto* f : used_frames(inputs, cfg)) {
    s.pose_offsets.push_back(f->offset);
    s.pose_params.push_back(Vec6::Zero());
    s.pose_m1.push_back(Vec6::Zero());
    s.pose_m2.push_back(Vec6::Zero());
  }
  return s;
}

TotalLossResult total_loss(const RefinerState& state, const RefineInputs& inputs,
                           const RefineConfig& cfg, const AlignmentParams* fixed_alignment) {
  cfg.check();
  check_inputs(inputs);
  if (cfg.dist_weight > 0.0 && !inputs.expert)
    throw ConfigError("distillation weight is positive but no expert map was provided");

  const Eigen::Index h = state.log_depth.rows(), w = state.log_depth.cols();
  if (h != inputs.left.height || w != inputs.left.width)
    throw DomainError("state shape differs from inputs");

  const DepthMap student = state.depth();
  const PhotometricConfig pcfg{cfg.kappa, cfg.ssim, cfg.grayscale};

  TotalLossResult out;
  Grid grad_depth = Grid::Zero(h, w); // w.r.t. metric depth; mapped to log at the end
  out.grad_log_depth = Grid::Zero(h, w);
  out.grad_pose.assign(state.pose_params.size(), Vec6::Zero());

  // Left-right consistency: synthesize the left view by sampling the right
  // image at the stereo reprojection of the left depth.
  {
    const RigidTransform left_to_right =
        RigidTransform::translate({-inputs.baseline, 0.0, 0.0});
    const WarpResult wr = warp(inputs.right, student, left_to_right, inputs.intrinsics);
    const PeResult fwd = pe_forward(inputs.left, wr.warped, wr.valid, pcfg);
    out.report.l_lr = fwd.mean;
    const Grid upstream = Grid::Constant(h, w, 1.0 / double(wr.valid.count()));
    grad_depth += chain_to_depth(pe_backward(fwd, wr.warped, pcfg, upstream), wr);
  }

  // Temporal consistency against each neighbor through its current pose.
  const auto frames = used_frames(inputs, cfg);
  if (frames.size() != state.pose_params.size())
    throw ConfigError("state pose count differs from configured temporal frames");
  if (!frames.empty()) {
    std::vector<WarpResult> warps;
    std::vector<PeResult> pes;
    std::vector<PoseTransform> poses;
    for (size_t i = 0; i < frames.size(); ++i) {
      poses.push_back(pose_param_to_transform(state.pose_params[i]));
      warps.push_back(warp(frames[i]->image, student, poses.back().transform, inputs.intrinsics));
      pes.push_back(pe_forward(inputs.left, warps.back().warped, warps.back().valid, pcfg));
    }

    if (!cfg.min_reprojection) {
      // Sum over forward/backward neighbors.
      for (size_t i = 0; i < frames.size(); ++i) {
        out.report.l_temp += pes[i].mean;
        const Grid upstream = Grid::Constant(h, w, 1.0 / double(warps[i].valid.count()));
        const auto grad_warped = pe_backward(pes[i], warps[i].warped, pcfg, upstream);
        grad_depth += chain_to_depth(grad_warped, warps[i]);
        out.grad_pose[i] += chain_to_pose(grad_warped, warps[i], student, poses[i],
                                          inputs.intrinsics);
      }
    } else {
      // Per-pixel minimum across sources; gradient flows through the argmin.
      Mask any = Mask::Constant(h, w, false);
      for (const auto& p : pes) any = any || p.valid;
      const Eigen::Index n_any = any.count();
      if (n_any == 0) throw EmptyDomainError("temporal warps share no valid pixel");
      GridT<int> argmin = GridT<int>::Constant(h, w, -1);
      Grid best = Grid::Zero(h, w);
      for (Eigen::Index v = 0; v < h; ++v)
        for (Eigen::Index u = 0; u < w; ++u)
          for (size_t i = 0; i < pes.size(); ++i) {
            if (!pes[i].valid(v, u)) continue;
            if (argmin(v, u) < 0 || pes[i].per_pixel(v, u) < best(v, u)) {
              argmin(v, u) = int(i);
              best(v, u) = pes[i].per_pixel(v, u);
            }
          }
      out.report.l_temp = best.sum() / double(n_any);
      for (size_t i = 0; i < pes.size(); ++i) {
        const Grid upstream =
            (argmin == int(i)).cast<double>() / double(n_any);
        const auto grad_warped = pe_backward(pes[i], warps[i].warped, pcfg, upstream);
        grad_depth += chain_to_depth(grad_warped, warps[i]);
        out.grad_pose[i] += chain_to_pose(grad_warped, warps[i], student, poses[i],
                                          inputs.intrinsics);
      }
    }
  }

  // Structure distillation with per-evaluation alignment.
  if (cfg.dist_weight > 0.0) {
    const DepthMap inv_expert = invert_expert(*inputs.expert);
    out.alignment =
        fixed_alignment ? *fixed_alignment : align_least_squares(inv_expert, student);
    out.has_alignment = true;
    const DepthMap aligned(out.alignment.apply(inv_expert.data), Mask(inv_expert.valid));
    const DistLossResult dl = dist_loss(aligned, student, cfg.distill, cfg.ssim);
    out.report.l_stat = dl.l_stat;
    out.report.l_spat = dl.l_spat;
    out.report.l_dist = dl.value;
    grad_depth += cfg.dist_weight * dl.grad_student;
  }

  out.report.l_total =
      out.report.l_lr + out.report.l_temp + cfg.dist_weight * out.report.l_dist;

  // d depth / d log depth = depth.
  out.grad_log_depth = grad_depth * student.data;

  if (cfg.smoothness_weight > 0.0) {
    const SmoothnessResult sm = smoothness(state.log_depth, inputs.left);
    out.report.l_smooth = sm.value;
    out.report.l_total += cfg.smoothness_weight * sm.value;
    out.grad_log_depth += cfg.smoothness_weight * sm.grad_log_depth;
  }

  double sq = out.grad_log_depth.square().sum();
  for (const Vec6& g : out.grad_pose) sq += g.squaredNorm();
  out.report.grad_norm = std::sqrt(sq);
  return out;
}

namespace {

void check_finite(const LossReport& r) {
  auto bad = [](double x) { return !std::isfinite(x); };
  if (bad(r.l_lr)) throw NumericalError("l_lr", "left-right loss is non-finite");
  if (bad(r.l_temp)) throw NumericalError("l_temp", "temporal loss is non-finite");
  if (bad(r.l_stat)) throw NumericalError("l_stat", "statistical loss is non-finite");
  if (bad(r.l_spat)) throw NumericalError("l_spat", "spatial loss is non-finite");
  if (bad(r.l_smooth)) throw NumericalError("l_smooth", "smoothness loss is non-finite");
  if (bad(r.grad_norm)) throw NumericalError("grad_norm", "gradient is non-finite");
}

double scheduled_lr(const RefineConfig& cfg, int step_index) {
  double lr = cfg.learning_rate;
  if (cfg.lr_schedule == LrSchedule::StepDecay) {
    std::vector<int> boundaries = cfg.decay_at;
    if (boundaries.empty()) boundaries.push_back(int(0.8 * cfg.iterations));
    for (int b : boundaries)
      if (step_index >= b) lr *= cfg.decay_factor;
  }
  return lr;
}

} // namespace

void step(RefinerState& state, const RefineInputs& inputs, const RefineConfig& cfg) {
  const TotalLossResult r = total_loss(state, inputs, cfg);
  check_finite(r.report);

  const double lr = scheduled_lr(cfg, state.step_count);
  const int t = state.step_count + 1;

  switch (cfg.optimizer) {
    case OptimizerKind::PlainGradient: {
      state.log_depth -= lr * r.grad_log_depth;
      for (size_t i = 0; i < state.pose_params.size(); ++i)
        state.pose_params[i] -= lr * r.grad_pose[i];
      break;
    }
    case OptimizerKind::Momentum: {
      state.depth_m1 = cfg.momentum * state.depth_m1 + r.grad_log_depth;
      state.log_depth -= lr * state.depth_m1;
      for (size_t i = 0; i < state.pose_params.size(); ++i) {
        state.pose_m1[i] = cfg.momentum * state.pose_m1[i] + r.grad_pose[i];
        state.pose_params[i] -= lr * state.pose_m1[i];
      }
      break;
    }
    case OptimizerKind::AdaptiveMoments: {
      const double c1 = 1.0 - std::pow(cfg.adam_beta1, t);
      const double c2 = 1.0 - std::pow(cfg.adam_beta2, t);
      state.depth_m1 = cfg.adam_beta1 * state.depth_m1 + (1.0 - cfg.adam_beta1) * r.grad_log_depth;
      state.depth_m2 =
          cfg.adam_beta2 * state.depth_m2 + (1.0 - cfg.adam_beta2) * r.grad_log_depth.square();
      state.log_depth -=
          lr * (state.depth_m1 / c1) / ((state.depth_m2 / c2).sqrt() + cfg.adam_eps);
      for (size_t i = 0; i < state.pose_params.size(); ++i) {
        state.pose_m1[i] =
            cfg.adam_beta1 * state.pose_m1[i] + (1.0 - cfg.adam_beta1) * r.grad_pose[i];
        state.pose_m2[i] = cfg.adam_beta2 * state.pose_m2[i] +
                           (1.0 - cfg.adam_beta2) * r.grad_pose[i].cwiseAbs2();
        state.pose_params[i] -= lr * (state.pose_m1[i] / c1).cwiseQuotient(
                                         ((state.pose_m2[i] / c2).cwiseSqrt().array() + cfg.adam_eps)
                                             .matrix());
      }
      break;
    }
  }

  ++state.step_count;
  state.loss_history.push_back(r.report);
}

RefineResult refine(const RefineInputs& inputs, const RefineConfig& cfg) {
  RefinerState state = RefinerState::init(inputs, cfg);
  for (int i = 0; i < cfg.iterations; ++i) step(state, inputs, cfg);

  RefineResult out;
  out.depth = state.depth();
  out.pose_offsets = state.pose_offsets;
  out.pose_params = state.pose_params;
  out.trace = state.loss_history;
  return out;
}

// ---------------------------------------------------------------------------
// Config documents
// ---------------------------------------------------------------------------

namespace {

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(xs[i]);
  }
  return out;
}

std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_numbers(s)) out.push_back(int(v));
  return out;
}

} // namespace

KeyValueDoc refine_config_to_doc(const RefineConfig& cfg) {
  KeyValueDoc doc;
  doc.set("iterations", int64_t(cfg.iterations));
  doc.set("learning_rate", cfg.learning_rate);
  doc.set("optimizer", cfg.optimizer == OptimizerKind::PlainGradient ? "plain-gradient"
                       : cfg.optimizer == OptimizerKind::Momentum    ? "momentum"
                                                                     : "adaptive-moments");
  doc.set("lr_schedule", cfg.lr_schedule == LrSchedule::Constant ? "constant" : "step-decay");
  if (!cfg.decay_at.empty()) doc.set("decay_at", join_ints(cfg.decay_at));
  doc.set("decay_factor", cfg.decay_factor);
  doc.set("dist_weight", cfg.dist_weight);
  doc.set("stat_weight", cfg.distill.stat_weight);
  doc.set("spat_weight", cfg.distill.spat_weight);
  doc.set("quantile", cfg.distill.quantile);
  doc.set("softsign_sharpness", cfg.distill.softsign_sharpness);
  doc.set("ssim_window", int64_t(cfg.ssim.window));
  doc.set("ssim_c1", cfg.ssim.c1);
  doc.set("ssim_c2", cfg.ssim.c2);
  doc.set("kappa", cfg.kappa);
  doc.set("grayscale", cfg.grayscale ? "true" : "false");
  if (!cfg.temporal_frames.empty()) doc.set("temporal_frames", join_ints(cfg.temporal_frames));
  doc.set("min_reprojection", cfg.min_reprojection ? "true" : "false");
  doc.set("smoothness_weight", cfg.smoothness_weight);
  doc.set("init_depth", cfg.init_depth);
  doc.set("seed", int64_t(cfg.seed));
  return doc;
}

RefineConfig refine_config_from_doc(const KeyValueDoc& doc) {
  RefineConfig cfg;
  cfg.iterations = int(doc.get_int_or("iterations", cfg.iterations));
  cfg.learning_rate = doc.get_double_or("learning_rate", cfg.learning_rate);
  const std::string opt = doc.get_or("optimizer", "adaptive-moments");
  if (opt == "plain-gradient")
    cfg.optimizer = OptimizerKind::PlainGradient;
  else if (opt == "momentum")
    cfg.optimizer = OptimizerKind::Momentum;
  else if (opt == "adaptive-moments")
    cfg.optimizer = OptimizerKind::AdaptiveMoments;
  else
    throw ConfigError("unknown optimizer: " + opt);
  const std::string sched = doc.get_or("lr_schedule", "constant");
  if (sched == "constant")
    cfg.lr_schedule = LrSchedule::Constant;
  else if (sched == "step-decay")
    cfg.lr_schedule = LrSchedule::StepDecay;
  else
    throw ConfigError("unknown lr schedule: " + sched);
  if (doc.has("decay_at")) cfg.decay_at = split_ints(doc.get("decay_at"));
  cfg.decay_factor = doc.get_double_or("decay_factor", cfg.decay_factor);
  cfg.dist_weight = doc.get_double_or("dist_weight", cfg.dist_weight);
  cfg.distill.stat_weight = doc.get_double_or("stat_weight", cfg.distill.stat_weight);
  cfg.distill.spat_weight = doc.get_double_or("spat_weight", cfg.distill.spat_weight);
  cfg.distill.quantile = doc.get_double_or("quantile", cfg.distill.quantile);
  cfg.distill.softsign_sharpness =
      doc.get_double_or("softsign_sharpness", cfg.distill.softsign_sharpness);
  cfg.ssim.window = int(doc.get_int_or("ssim_window", cfg.ssim.window));
  cfg.ssim.c1 = doc.get_double_or("ssim_c1", cfg.ssim.c1);
  cfg.ssim.c2 = doc.get_double_or("ssim_c2", cfg.ssim.c2);
  cfg.kappa = doc.get_double_or("kappa", cfg.kappa);
  cfg.grayscale = doc.get_or("grayscale", "false") == "true";
  if (doc.has("temporal_frames")) cfg.temporal_frames = split_ints(doc.get("temporal_frames"));
  cfg.min_reprojection = doc.get_or("min_reprojection", "false") == "true";
  cfg.smoothness_weight = doc.get_double_or("smoothness_weight", cfg.smoothness_weight);
  cfg.init_depth = doc.get_double_or("init_depth", cfg.init_depth);
  cfg.seed = uint64_t(doc.get_int_or("seed", int64_t(cfg.seed)));
  cfg.check();
  return cfg;
}

} // namespace varidepth
