#pragma once

#include <random>

#include "testutil.hpp"
#include "varidepth/geometry.hpp"
#include "varidepth/refiner.hpp"

// Finite-difference verification of the total-loss gradient. The objective is
// piecewise smooth; a pixel qualifies for checking only when every non-smooth
// construct is locally inactive:
//   - its warp samples sit inside a bilinear cell, away from the lattice,
//   - the L1 photometric residual is bounded away from zero,
//   - Sobel magnitudes near it stay clear of the turn-on level and of zero,
//   - the soft boundary maps do not tie.

namespace varidepth::testutil {

class TotalLossKinkFilter {
public:
  TotalLossKinkFilter(const RefinerState& state, const RefineInputs& inputs,
                      const RefineConfig& cfg, const AlignmentParams* alignment)
      : inputs_(inputs), cfg_(cfg) {
    student_ = state.depth();

    transforms_.push_back(RigidTransform::translate({-inputs.baseline, 0, 0}));
    sources_.push_back(&inputs.right);
    for (size_t i = 0; i < state.pose_offsets.size(); ++i) {
      const Image* img = nullptr;
      for (const auto& f : inputs.temporal)
        if (f.offset == state.pose_offsets[i]) img = &f.image;
      if (!img) throw DomainError("gradcheck: missing temporal frame");
      transforms_.push_back(pose_param_to_transform(state.pose_params[i]).transform);
      sources_.push_back(img);
    }
    for (size_t i = 0; i < transforms_.size(); ++i)
      warps_.push_back(warp(*sources_[i], student_, transforms_[i], inputs.intrinsics));

    with_distill_ = cfg.dist_weight > 0.0 && inputs.expert.has_value();
    if (with_distill_) {
      if (!alignment) throw DomainError("gradcheck: distillation requires a pinned alignment");
      const DepthMap inv = invert_expert(*inputs.expert);
      const Grid aligned = alignment->apply(inv.data);
      student_grad_ = sobel(student_.data);
      const GradientMap expert_grad = sobel(aligned);
      const Mask joint = inv.valid && student_.valid;
      alpha_student_ = turn_on_level(student_grad_, cfg.distill.quantile, joint);
      const double alpha_expert = turn_on_level(expert_grad, cfg.distill.quantile, joint);
      expert_soft_ = soft_binarize(expert_grad.magnitude, alpha_expert,
                                   cfg.distill.softsign_sharpness)
                         .soft;
      student_soft_ = soft_binarize(student_grad_.magnitude, alpha_student_,
                                    cfg.distill.softsign_sharpness)
                          .soft;
    }
  }

  bool kink_free(Eigen::Index v, Eigen::Index u) const {
    for (size_t i = 0; i < warps_.size(); ++i) {
      if (!warps_[i].valid(v, u)) return false;
      const PixelWarp pw = warp_pixel(double(u), double(v), student_.data(v, u), transforms_[i],
                                      inputs_.intrinsics);
      const double fu = pw.source_pixel.x() - std::floor(pw.source_pixel.x());
      const double fv = pw.source_pixel.y() - std::floor(pw.source_pixel.y());
      if (std::min({fu, 1.0 - fu, fv, 1.0 - fv}) < 0.03) return false;
      // The L1 term kinks where target equals the warped value.
      for (int c = 0; c < inputs_.left.channels(); ++c)
        if (std::abs(inputs_.left.planes[c](v, u) - warps_[i].warped.planes[c](v, u)) < 1e-3)
          return false;
    }
    if (with_distill_) {
      const Eigen::Index h = student_.data.rows(), w = student_.data.cols();
      for (Eigen::Index dv = -1; dv <= 1; ++dv)
        for (Eigen::Index du = -1; du <= 1; ++du) {
          const Eigen::Index vv = v + dv, uu = u + du;
          if (vv < 0 || vv >= h || uu < 0 || uu >= w) return false;
          const double mag = student_grad_.magnitude(vv, uu);
          if (std::abs(mag - alpha_student_) < 1e-3) return false; // quantile rank flips
          if (mag < 1e-6) return false;                            // magnitude sign kink
          if (std::abs(expert_soft_(vv, uu) - student_soft_(vv, uu)) < 1e-4) return false;
        }
    }
    return true;
  }

private:
  const RefineInputs& inputs_;
  const RefineConfig& cfg_;
  DepthMap student_;
  std::vector<RigidTransform> transforms_;
  std::vector<const Image*> sources_;
  std::vector<WarpResult> warps_;
  GradientMap student_grad_{Grid::Zero(3, 3), Grid::Zero(3, 3)};
  Grid expert_soft_, student_soft_;
  double alpha_student_ = 0.0;
  bool with_distill_ = false;
};

struct GradCheckResult {
  int tested = 0;
  double max_rel_err = 0.0;
};

// Checks the analytic total-loss gradient at up to `target_points` random
// kink-free pixels against central finite differences with step `h_log`.
inline GradCheckResult check_total_loss_gradient(const RefinerState& state,
                                                 const RefineInputs& inputs,
                                                 const RefineConfig& cfg, int target_points,
                                                 uint64_t seed, double h_log = 1e-6) {
  const TotalLossResult base = total_loss(state, inputs, cfg);
  const AlignmentParams align = base.alignment;
  const AlignmentParams* pin = base.has_alignment ? &align : nullptr;
  const TotalLossResult fixed = total_loss(state, inputs, cfg, pin);

  const TotalLossKinkFilter filter(state, inputs, cfg, pin);

  auto loss_at = [&](const Grid& ld) {
    RefinerState s2 = state;
    s2.log_depth = ld;
    return total_loss(s2, inputs, cfg, pin).report.l_total;
  };

  const Eigen::Index h = state.log_depth.rows(), w = state.log_depth.cols();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pv(2, h - 3), pu(2, w - 3);

  GradCheckResult out;
  for (int trial = 0; trial < 50 * target_points && out.tested < target_points; ++trial) {
    const Eigen::Index v = pv(rng), u = pu(rng);
    if (!filter.kink_free(v, u)) continue;
    const double fd = fd_at_pixel(loss_at, state.log_depth, v, u, h_log);
    const double got = fixed.grad_log_depth(v, u);
    if (std::abs(fd) < 1e-8 && std::abs(got) < 1e-8) continue;
    out.max_rel_err = std::max(out.max_rel_err, rel_err(got, fd));
    ++out.tested;
  }
  return out;
}

} // namespace varidepth::testutil
