#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gradcheck.hpp"
#include "testutil.hpp"
#include "varidepth/geometry.hpp"
#include "varidepth/keyval.hpp"
#include "varidepth/refiner.hpp"
#include "varidepth/synthscene.hpp"

using namespace varidepth;

namespace {

RefineInputs stereo_inputs(const SceneSpec& spec, bool with_expert,
                           const ExpertSimConfig& model = {}) {
  const StereoSample s = render(spec, 0);
  RefineInputs in;
  in.left = s.left;
  in.right = s.right;
  in.baseline = spec.baseline;
  in.intrinsics = spec.intrinsics;
  if (with_expert) in.expert = expert_from_gt(s.gt_depth, model);
  return in;
}

// Frontal checkered plane with an exactly integer stereo disparity, so the
// warp at ground-truth depth is sampling at integer coordinates.
SceneSpec integer_disparity_scene() {
  SceneSpec s;
  s.width = 64;
  s.height = 64;
  s.intrinsics = CameraIntrinsics(200.0, 200.0, 32.0, 32.0); // 13 px at z = 2
  Rect wall;
  wall.normal_axis = 2;
  wall.offset = 2.0;
  wall.lo = {-30, -30};
  wall.hi = {30, 30};
  wall.tex.kind = TextureKind::Checker;
  wall.tex.period = 0.15;
  wall.tex.softness = 0.4;
  wall.tex.color = {0.85, 0.5, 0.2};
  wall.tex.color2 = {0.1, 0.35, 0.7};
  s.planes.push_back(wall);
  return s;
}

} // namespace

TEST_CASE("term collapse: no distillation and no temporal frames") {
  RefineConfig cfg;
  cfg.dist_weight = 0.0;
  const RefineInputs in = stereo_inputs(preset("default-boxes").with_resolution(40, 40), false);
  RefinerState state = RefinerState::init(in, cfg);
  const TotalLossResult r = total_loss(state, in, cfg);
  CHECK(r.report.l_total == r.report.l_lr); // bitwise
  CHECK(r.report.l_temp == 0.0);
  CHECK(r.report.l_dist == 0.0);
}

TEST_CASE("loss report satisfies the weighted-total identity") {
  RefineConfig cfg; // dist_weight 0.1
  const RefineInputs in = stereo_inputs(preset("default-boxes").with_resolution(40, 40), true);
  RefinerState state = RefinerState::init(in, cfg);
  state.log_depth = testutil::smooth_grid(40, 40, std::log(1.6), std::log(3.0), 7);

  const TotalLossResult r = total_loss(state, in, cfg);
  CHECK(std::abs(r.report.l_total -
                 (r.report.l_lr + r.report.l_temp + 0.1 * r.report.l_dist)) < 1e-9);
  CHECK(std::abs(r.report.l_dist -
                 (cfg.distill.stat_weight * r.report.l_stat +
                  cfg.distill.spat_weight * r.report.l_spat)) < 1e-15);
  CHECK(r.report.l_lr >= 0.0);
  CHECK(r.report.l_stat >= 0.0);
  CHECK(r.report.l_spat >= 0.0);

  // Weight linearity across several settings.
  for (double w : {0.0, 0.05, 0.5}) {
    RefineConfig cw = cfg;
    cw.dist_weight = w;
    TotalLossResult rw = total_loss(state, in, cw);
    CHECK(std::abs(rw.report.l_total - (rw.report.l_lr + rw.report.l_temp + w * rw.report.l_dist)) <
          1e-9);
  }
}

TEST_CASE("missing expert with positive distillation weight is a config error") {
  RefineConfig cfg;
  const RefineInputs in = stereo_inputs(preset("default-boxes").with_resolution(24, 24), false);
  RefinerState state = RefinerState::init(in, cfg);
  CHECK_THROWS_AS(total_loss(state, in, cfg), ConfigError);
}

TEST_CASE("zero iterations return the constant initialization") {
  RefineConfig cfg;
  cfg.iterations = 0;
  cfg.dist_weight = 0.0;
  const RefineInputs in = stereo_inputs(preset("default-boxes").with_resolution(24, 24), false);
  const RefineResult r = refine(in, cfg);
  CHECK((r.depth.data - cfg.init_depth).abs().maxCoeff() < 1e-12);
  CHECK(r.trace.empty());
}

TEST_CASE("one plain-gradient step applies exactly log_depth - lr * grad") {
  RefineConfig cfg;
  cfg.dist_weight = 0.0;
  cfg.optimizer = OptimizerKind::PlainGradient;
  cfg.learning_rate = 0.05;
  const RefineInputs in = stereo_inputs(preset("default-boxes").with_resolution(32, 32), false);
  RefinerState state = RefinerState::init(in, cfg);
  const Grid before = state.log_depth;
  const TotalLossResult r = total_loss(state, in, cfg);
  step(state, in, cfg);
  CHECK((state.log_depth - (before - cfg.learning_rate * r.grad_log_depth)).abs().maxCoeff() == 0.0);
  CHECK(state.step_count == 1);
  CHECK(state.loss_history.size() == 1);
}

TEST_CASE("ground-truth depth is a near-zero-loss fixed point on clean stereo") {
  const SceneSpec spec = integer_disparity_scene();
  const StereoSample s = render(spec, 0);
  RefineInputs in;
  in.left = s.left;
  in.right = s.right;
  in.baseline = spec.baseline;
  in.intrinsics = spec.intrinsics;

  RefineConfig cfg;
  cfg.dist_weight = 0.0;
  RefinerState state = RefinerState::init(in, cfg);
  state.log_depth = s.gt_depth.data.log();

  const TotalLossResult r = total_loss(state, in, cfg);
  CHECK(r.report.l_lr < 1e-3);

  // Gradient vanishes away from the disparity-truncated left border.
  double interior_sq = 0.0;
  for (int v = 2; v < 62; ++v)
    for (int u = 16; u < 62; ++u) interior_sq += r.grad_log_depth(v, u) * r.grad_log_depth(v, u);
  CHECK(std::sqrt(interior_sq) < 1e-4);
}

TEST_CASE("total loss gradient on log depth matches finite differences") {
  const SceneSpec spec = preset("default-boxes").with_resolution(32, 32);
  const StereoSample s = render(spec, 0);
  RefineInputs in;
  in.left = s.left;
  in.right = s.right;
  in.baseline = spec.baseline;
  in.intrinsics = spec.intrinsics;
  ExpertSimConfig model;
  model.scale = 1.5;
  model.shift = 0.2;
  in.expert = expert_from_gt(s.gt_depth, model);

  RefineConfig cfg;
  cfg.distill.softsign_sharpness = 20.0;
  RefinerState state = RefinerState::init(in, cfg);
  state.log_depth = testutil::smooth_grid(32, 32, std::log(1.7), std::log(2.8), 13);

  const auto r = testutil::check_total_loss_gradient(state, in, cfg, 20, 17);
  CHECK(r.tested >= 20);
  CHECK(r.max_rel_err < 1e-3);
}

TEST_CASE("pose gradient matches finite differences") {
  const SceneSpec spec = preset("trajectory").with_resolution(32, 32);
  const StereoSample t0 = render(spec, 1);
  const StereoSample prev = render(spec, 0);
  const StereoSample next = render(spec, 2);

  RefineInputs in;
  in.left = t0.left;
  in.right = t0.right;
  in.baseline = spec.baseline;
  in.intrinsics = spec.intrinsics;
  in.temporal.push_back({1, next.left});
  in.temporal.push_back({-1, prev.left});

  RefineConfig cfg;
  cfg.dist_weight = 0.0;
  RefinerState state = RefinerState::init(in, cfg);
  state.log_depth = t0.gt_depth.data.max(0.5).log(); // valid everywhere on this scene
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(-0.01, 0.01);
  for (Vec6& p : state.pose_params)
    for (int i = 0; i < 6; ++i) p[i] = d(rng);

  const TotalLossResult r = total_loss(state, in, cfg);
  for (size_t k = 0; k < state.pose_params.size(); ++k)
    for (int i = 0; i < 6; ++i) {
      const double h = 1e-6;
      RefinerState sp = state, sm = state;
      sp.pose_params[k][i] += h;
      sm.pose_params[k][i] -= h;
      const double fd =
          (total_loss(sp, in, cfg).report.l_total - total_loss(sm, in, cfg).report.l_total) /
          (2 * h);
      CHECK(testutil::rel_err(r.grad_pose[k][i], fd) < 2e-3);
    }
}

TEST_CASE("refinement is deterministic") {
  RefineConfig cfg;
  cfg.iterations = 8;
  const RefineInputs in = stereo_inputs(preset("default-boxes").with_resolution(32, 32), true);
  const RefineResult a = refine(in, cfg);
  const RefineResult b = refine(in, cfg);
  CHECK((a.depth.data == b.depth.data).all());
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].l_total == b.trace[i].l_total);
    CHECK(a.trace[i].grad_norm == b.trace[i].grad_norm);
  }
}

TEST_CASE("output depth is strictly positive by construction") {
  RefineConfig cfg;
  cfg.iterations = 30;
  cfg.learning_rate = 0.3; // aggressive on purpose
  const RefineInputs in = stereo_inputs(preset("default-boxes").with_resolution(24, 24), true);
  const RefineResult r = refine(in, cfg);
  CHECK(r.depth.data.minCoeff() > 0.0);
  CHECK(validate(r.depth).ok());
}

TEST_CASE("descent halves the loss on the default scene") {
  RefineConfig cfg;
  cfg.iterations = 500;
  const RefineInputs in = stereo_inputs(preset("default-boxes").with_resolution(64, 64), true);
  const RefineResult r = refine(in, cfg);
  REQUIRE(r.trace.size() == 500);
  CHECK(r.trace.back().l_total < 0.5 * r.trace.front().l_total);
}

TEST_CASE("a non-finite loss aborts with the offending term named") {
  RefineConfig cfg;
  cfg.dist_weight = 0.0;
  cfg.smoothness_weight = 0.1;
  const RefineInputs in = stereo_inputs(preset("default-boxes").with_resolution(16, 16), false);
  RefinerState state = RefinerState::init(in, cfg);
  state.log_depth(3, 3) = std::numeric_limits<double>::infinity();
  try {
    step(state, in, cfg);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.term == "l_smooth");
  }
}

TEST_CASE("temporal frames selected by offset; missing offsets are config errors") {
  const SceneSpec spec = preset("trajectory").with_resolution(24, 24);
  RefineInputs in;
  const StereoSample t0 = render(spec, 1);
  in.left = t0.left;
  in.right = t0.right;
  in.baseline = spec.baseline;
  in.intrinsics = spec.intrinsics;
  in.temporal.push_back({1, render(spec, 2).left});

  RefineConfig cfg;
  cfg.dist_weight = 0.0;
  cfg.temporal_frames = {1, -1};
  CHECK_THROWS_AS(RefinerState::init(in, cfg), ConfigError);

  cfg.temporal_frames = {1};
  RefinerState state = RefinerState::init(in, cfg);
  CHECK(state.pose_offsets == std::vector<int>{1});
  const TotalLossResult r = total_loss(state, in, cfg);
  CHECK(r.report.l_temp > 0.0);
}

TEST_CASE("min reprojection never exceeds the summed temporal loss") {
  const SceneSpec spec = preset("trajectory").with_resolution(24, 24);
  const StereoSample t0 = render(spec, 1);
  RefineInputs in;
  in.left = t0.left;
  in.right = t0.right;
  in.baseline = spec.baseline;
  in.intrinsics = spec.intrinsics;
  in.temporal.push_back({1, render(spec, 2).left});
  in.temporal.push_back({-1, render(spec, 0).left});

  RefineConfig cfg;
  cfg.dist_weight = 0.0;
  RefinerState state = RefinerState::init(in, cfg);
  const double summed = total_loss(state, in, cfg).report.l_temp;
  cfg.min_reprojection = true;
  const double minned = total_loss(state, in, cfg).report.l_temp;
  CHECK(minned <= summed + 1e-12);
  CHECK(minned > 0.0);
}

TEST_CASE("refine config documents round trip") {
  RefineConfig cfg;
  cfg.iterations = 123;
  cfg.learning_rate = 0.007;
  cfg.optimizer = OptimizerKind::Momentum;
  cfg.lr_schedule = LrSchedule::StepDecay;
  cfg.decay_at = {50, 100};
  cfg.temporal_frames = {1, -1};
  cfg.min_reprojection = true;
  cfg.smoothness_weight = 0.01;
  cfg.seed = 42;
  const KeyValueDoc doc = refine_config_to_doc(cfg);
  const RefineConfig back = refine_config_from_doc(KeyValueDoc::parse(doc.serialize()));
  CHECK(back.iterations == cfg.iterations);
  CHECK(back.learning_rate == cfg.learning_rate);
  CHECK(back.optimizer == cfg.optimizer);
  CHECK(back.lr_schedule == cfg.lr_schedule);
  CHECK(back.decay_at == cfg.decay_at);
  CHECK(back.temporal_frames == cfg.temporal_frames);
  CHECK(back.min_reprojection == cfg.min_reprojection);
  CHECK(back.smoothness_weight == cfg.smoothness_weight);
  CHECK(back.seed == cfg.seed);
}
