// Command-line surface: render synthetic stereo scenes, extract depth
// boundaries, align expert maps, run variational refinement, evaluate depth,
// and export point clouds. Every command that writes outputs also writes a
// run manifest with content hashes for reproducibility checks.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "varidepth/distill.hpp"
#include "varidepth/error.hpp"
#include "varidepth/keyval.hpp"
#include "varidepth/manifest.hpp"
#include "varidepth/metrics.hpp"
#include "varidepth/pfm.hpp"
#include "varidepth/png_io.hpp"
#include "varidepth/pointcloud.hpp"
#include "varidepth/refiner.hpp"
#include "varidepth/synthscene.hpp"

namespace vd = varidepth;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> g_raw_args;

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw vd::FormatError("cannot create output directory: " + dir);
}

void write_intrinsics(const std::string& path, const vd::CameraIntrinsics& K) {
  std::ofstream out(path);
  if (!out) throw vd::FormatError("cannot open for writing: " + path);
  out << vd::format_double(K.fx) << " " << vd::format_double(K.fy) << " "
      << vd::format_double(K.cx) << " " << vd::format_double(K.cy) << "\n";
}

vd::CameraIntrinsics read_intrinsics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw vd::FormatError("cannot open: " + path);
  double fx, fy, cx, cy;
  if (!(in >> fx >> fy >> cx >> cy))
    throw vd::FormatError("intrinsics file must hold: fx fy cx cy");
  return {fx, fy, cx, cy};
}

vd::RigidTransform read_pose(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw vd::FormatError("cannot open: " + path);
  vd::RigidTransform T;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (!(in >> T.rotation(r, c))) throw vd::FormatError("pose file needs 12 numbers");
  for (int i = 0; i < 3; ++i)
    if (!(in >> T.translation[i])) throw vd::FormatError("pose file needs 12 numbers");
  const auto check = vd::validate(T);
  if (!check.ok()) throw vd::FormatError("pose file: " + check.str());
  return T;
}

// ---------------------------------------------------------------------------
// render
// ---------------------------------------------------------------------------

struct RenderOptions {
  std::string preset_name;
  std::string scene_file;
  std::string out_dir;
  int frames = 1;
  int first_frame = 0;
  int resolution = 0; // 0 = keep the scene's
  bool depth16 = false;
};

vd::SceneSpec load_scene(const std::string& preset_name, const std::string& scene_file,
                         int resolution) {
  if (preset_name.empty() == scene_file.empty())
    throw vd::ConfigError("provide exactly one of --preset or --scene");
  vd::SceneSpec spec = preset_name.empty()
                           ? vd::scene_from_doc(vd::KeyValueDoc::load(scene_file))
                           : vd::preset(preset_name);
  if (resolution > 0) spec = spec.with_resolution(resolution, resolution);
  return spec;
}

int run_render(const RenderOptions& opt) {
  const vd::SceneSpec spec = load_scene(opt.preset_name, opt.scene_file, opt.resolution);
  ensure_dir(opt.out_dir);

  vd::RunManifest manifest("render", g_raw_args);
  manifest.echo_config(vd::scene_to_doc(spec));
  if (!opt.scene_file.empty()) manifest.add_input("scene", opt.scene_file);

  const std::string scene_path = join_path(opt.out_dir, "scene.kv");
  vd::scene_to_doc(spec).save(scene_path);
  manifest.add_output("scene.kv", scene_path);

  const std::string intr_path = join_path(opt.out_dir, "intrinsics.txt");
  write_intrinsics(intr_path, spec.intrinsics);
  manifest.add_output("intrinsics.txt", intr_path);

  std::ofstream poses(join_path(opt.out_dir, "poses.txt"));
  for (int i = 0; i < opt.frames; ++i) {
    const int frame = opt.first_frame + i;
    const vd::StereoSample s = vd::render(spec, frame);

    char name[64];
    std::snprintf(name, sizeof(name), "left_%03d.png", frame);
    vd::write_png(join_path(opt.out_dir, name), s.left);
    manifest.add_output(name, join_path(opt.out_dir, name));

    std::snprintf(name, sizeof(name), "right_%03d.png", frame);
    vd::write_png(join_path(opt.out_dir, name), s.right);
    manifest.add_output(name, join_path(opt.out_dir, name));

    std::snprintf(name, sizeof(name), "depth_%03d.pfm", frame);
    vd::write_depth_pfm(join_path(opt.out_dir, name), s.gt_depth);
    manifest.add_output(name, join_path(opt.out_dir, name));

    if (opt.depth16) {
      std::snprintf(name, sizeof(name), "depth_%03d.png", frame);
      vd::write_depth_png16(join_path(opt.out_dir, name), s.gt_depth);
      manifest.add_output(name, join_path(opt.out_dir, name));
    }

    poses << frame;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) poses << " " << vd::format_double(s.left_pose.rotation(r, c));
    for (int k = 0; k < 3; ++k) poses << " " << vd::format_double(s.left_pose.translation[k]);
    poses << "\n";

    std::cout << "frame " << frame << ": " << spec.width << "x" << spec.height << ", "
              << s.gt_depth.valid_count() << " valid depth px\n";
  }
  poses.close();
  manifest.add_output("poses.txt", join_path(opt.out_dir, "poses.txt"));
  manifest.save(join_path(opt.out_dir, "manifest.kv"));
  return 0;
}

// ---------------------------------------------------------------------------
// edges
// ---------------------------------------------------------------------------

struct EdgesOptions {
  std::string depth_file;
  std::string out_dir;
  double quantile = 0.95;
  double sharpness = 50.0;
};

int run_edges(const EdgesOptions& opt) {
  const vd::DepthMap depth = vd::read_depth_pfm(opt.depth_file);
  const vd::GradientMap g = vd::sobel(depth.data);
  const double alpha = vd::turn_on_level(g, opt.quantile, depth.valid);
  const vd::BoundaryMap b = vd::soft_binarize(g.magnitude, alpha, opt.sharpness);

  std::cout << "alpha = " << vd::format_double(alpha) << "\n";
  std::cout << "boundary fraction = "
            << vd::format_double(b.hard.sum() / double(b.hard.size())) << "\n";

  if (!opt.out_dir.empty()) {
    ensure_dir(opt.out_dir);
    vd::RunManifest manifest("edges", g_raw_args);
    manifest.add_input("depth", opt.depth_file);

    vd::Image vis(b.width, b.height, 1, 0.0);
    vis.planes[0] = b.hard;
    const std::string png_path = join_path(opt.out_dir, "edges.png");
    vd::write_png(png_path, vis);
    manifest.add_output("edges.png", png_path);

    const std::string mag_path = join_path(opt.out_dir, "gradient_magnitude.pfm");
    vd::write_pfm(mag_path, g.magnitude);
    manifest.add_output("gradient_magnitude.pfm", mag_path);

    vd::KeyValueDoc rec;
    rec.set("alpha", alpha);
    rec.set("quantile", opt.quantile);
    rec.set("sharpness", opt.sharpness);
    const std::string rec_path = join_path(opt.out_dir, "edges.kv");
    rec.save(rec_path);
    manifest.add_output("edges.kv", rec_path);
    manifest.save(join_path(opt.out_dir, "manifest.kv"));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// align
// ---------------------------------------------------------------------------

struct AlignOptions {
  std::string expert_file;
  std::string depth_file;
  std::string out_dir;
  bool use_ransac = false;
  int ransac_iters = 500;
  double threshold = 0.05;
  double min_inliers = 0.3;
  uint64_t seed = 0;
};

int run_align(const AlignOptions& opt) {
  // The expert file holds raw inverse-depth-space values.
  const vd::Grid raw = vd::read_pfm(opt.expert_file);
  const vd::DepthMap inv = vd::invert_expert(vd::RelativeDepthMap(raw));
  const vd::DepthMap depth = vd::read_depth_pfm(opt.depth_file);

  vd::KeyValueDoc rec;
  if (opt.use_ransac) {
    vd::RansacConfig cfg;
    cfg.iterations = opt.ransac_iters;
    cfg.inlier_threshold = opt.threshold;
    cfg.min_inlier_fraction = opt.min_inliers;
    cfg.seed = opt.seed;
    const vd::RansacResult r = vd::align_ransac(inv, depth, cfg);
    rec.set("method", "ransac");
    rec.set("a_s", r.params.a_s);
    rec.set("a_t", r.params.a_t);
    rec.set("inliers", int64_t(r.inlier_count));
    rec.set("inlier_fraction",
            double(r.inlier_count) / double((inv.valid && depth.valid).count()));
  } else {
    const vd::AlignmentParams p = vd::align_least_squares(inv, depth);
    rec.set("method", "least-squares");
    rec.set("a_s", p.a_s);
    rec.set("a_t", p.a_t);
  }
  for (const auto& e : rec.entries()) std::cout << e.first << " = " << e.second << "\n";

  if (!opt.out_dir.empty()) {
    ensure_dir(opt.out_dir);
    vd::RunManifest manifest("align", g_raw_args);
    manifest.add_input("expert", opt.expert_file);
    manifest.add_input("depth", opt.depth_file);
    const std::string rec_path = join_path(opt.out_dir, "align.kv");
    rec.save(rec_path);
    manifest.add_output("align.kv", rec_path);
    manifest.save(join_path(opt.out_dir, "manifest.kv"));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// refine
// ---------------------------------------------------------------------------

struct RefineOptions {
  std::string preset_name;
  std::string scene_file;
  std::string left_file, right_file, intrinsics_file, expert_file;
  std::vector<std::string> temporal; // offset:path
  double baseline = 0.13;
  std::string config_file;
  std::string out_dir;
  int frame = 0;
  int resolution = 0;
  bool use_temporal = false;
  // quick config overrides
  std::optional<int> iters;
  std::optional<double> lr;
  std::optional<double> dist_weight;
  std::optional<uint64_t> seed;
  // expert simulation (preset mode)
  vd::ExpertSimConfig expert_sim;
  bool no_expert = false;
};

int run_refine(const RefineOptions& opt) {
  vd::RefineConfig cfg;
  if (!opt.config_file.empty())
    cfg = vd::refine_config_from_doc(vd::KeyValueDoc::load(opt.config_file));
  if (opt.iters) cfg.iterations = *opt.iters;
  if (opt.lr) cfg.learning_rate = *opt.lr;
  if (opt.dist_weight) cfg.dist_weight = *opt.dist_weight;
  if (opt.seed) cfg.seed = *opt.seed;

  vd::RefineInputs in;
  vd::DepthMap gt; // synthetic runs keep ground truth for the manifest record
  bool have_gt = false;

  const bool scene_mode = !opt.preset_name.empty() || !opt.scene_file.empty();
  if (scene_mode) {
    const vd::SceneSpec spec = load_scene(opt.preset_name, opt.scene_file, opt.resolution);
    const vd::StereoSample s = vd::render(spec, opt.frame);
    in.left = s.left;
    in.right = s.right;
    in.baseline = spec.baseline;
    in.intrinsics = spec.intrinsics;
    gt = s.gt_depth;
    have_gt = true;
    if (opt.use_temporal) {
      if (cfg.temporal_frames.empty()) cfg.temporal_frames = {1, -1};
      for (int k : cfg.temporal_frames) {
        const int idx = opt.frame + k;
        if (idx < 0 || idx >= spec.frame_count())
          throw vd::ConfigError("temporal offset leaves the trajectory");
        in.temporal.push_back({k, vd::render(spec, idx).left});
      }
    }
    if (!opt.no_expert && cfg.dist_weight > 0.0)
      in.expert = vd::expert_from_gt(s.gt_depth, opt.expert_sim);
  } else {
    if (opt.left_file.empty() || opt.right_file.empty() || opt.intrinsics_file.empty())
      throw vd::ConfigError("file mode needs --left, --right, and --intrinsics");
    in.left = vd::read_png(opt.left_file);
    in.right = vd::read_png(opt.right_file);
    in.intrinsics = read_intrinsics(opt.intrinsics_file);
    in.baseline = opt.baseline;
    if (!opt.expert_file.empty())
      in.expert = vd::RelativeDepthMap(vd::read_pfm(opt.expert_file));
    for (const std::string& spec : opt.temporal) {
      const auto colon = spec.find(':');
      if (colon == std::string::npos)
        throw vd::ConfigError("--temporal expects offset:path");
      vd::TemporalFrameInput f;
      f.offset = std::stoi(spec.substr(0, colon));
      f.image = vd::read_png(spec.substr(colon + 1));
      in.temporal.push_back(std::move(f));
    }
  }
  if (cfg.dist_weight > 0.0 && !in.expert)
    throw vd::ConfigError("distillation enabled but no expert available; pass --expert or --no-expert");

  const vd::RefineResult result = vd::refine(in, cfg);

  ensure_dir(opt.out_dir);
  vd::RunManifest manifest("refine", g_raw_args);
  manifest.echo_config(vd::refine_config_to_doc(cfg));
  if (!opt.scene_file.empty()) manifest.add_input("scene", opt.scene_file);
  if (!opt.left_file.empty()) manifest.add_input("left", opt.left_file);
  if (!opt.right_file.empty()) manifest.add_input("right", opt.right_file);
  if (!opt.expert_file.empty()) manifest.add_input("expert", opt.expert_file);

  const std::string depth_path = join_path(opt.out_dir, "depth.pfm");
  vd::write_depth_pfm(depth_path, result.depth);
  manifest.add_output("depth.pfm", depth_path);

  // One structured line per step with every loss-report field.
  const std::string trace_path = join_path(opt.out_dir, "trace.txt");
  {
    std::ofstream trace(trace_path);
    for (size_t i = 0; i < result.trace.size(); ++i) {
      const vd::LossReport& r = result.trace[i];
      trace << "step=" << i << " l_lr=" << vd::format_double(r.l_lr)
            << " l_temp=" << vd::format_double(r.l_temp)
            << " l_stat=" << vd::format_double(r.l_stat)
            << " l_spat=" << vd::format_double(r.l_spat)
            << " l_dist=" << vd::format_double(r.l_dist)
            << " l_smooth=" << vd::format_double(r.l_smooth)
            << " l_total=" << vd::format_double(r.l_total)
            << " grad_norm=" << vd::format_double(r.grad_norm) << "\n";
    }
  }
  manifest.add_output("trace.txt", trace_path);

  if (!result.pose_offsets.empty()) {
    vd::KeyValueDoc poses;
    for (size_t i = 0; i < result.pose_offsets.size(); ++i) {
      std::string vals;
      for (int k = 0; k < 6; ++k) {
        if (k) vals += " ";
        vals += vd::format_double(result.pose_params[i][k]);
      }
      poses.add("pose_" + std::to_string(result.pose_offsets[i]), vals);
    }
    const std::string pose_path = join_path(opt.out_dir, "poses.kv");
    poses.save(pose_path);
    manifest.add_output("poses.kv", pose_path);
  }

  if (have_gt) {
    const std::string gt_path = join_path(opt.out_dir, "gt_depth.pfm");
    vd::write_depth_pfm(gt_path, gt);
    manifest.add_output("gt_depth.pfm", gt_path);
  }
  manifest.save(join_path(opt.out_dir, "manifest.kv"));

  if (!result.trace.empty()) {
    const vd::LossReport& last = result.trace.back();
    std::cout << "steps " << result.trace.size() << ": l_total "
              << vd::format_double(result.trace.front().l_total) << " -> "
              << vd::format_double(last.l_total) << "\n";
  } else {
    std::cout << "0 steps requested; wrote the initialization\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalOptions {
  std::string pred_file;
  std::string gt_file;
  std::string out_dir;
  std::optional<double> cap;
  bool do_median_scale = false;
};

int run_eval(const EvalOptions& opt) {
  vd::DepthMap pred = vd::read_depth_pfm(opt.pred_file);
  const vd::DepthMap gt = vd::read_depth_pfm(opt.gt_file);
  double scale_factor = 1.0;
  if (opt.do_median_scale) {
    vd::MedianScaled ms = vd::median_scale(pred, gt);
    pred = std::move(ms.pred);
    scale_factor = ms.factor;
  }
  const vd::DepthMetrics m = vd::depth_metrics(pred, gt, opt.cap);

  std::printf("pixels   %lld\n", static_cast<long long>(m.pixel_count));
  std::printf("MAE      %.6f\n", m.mae);
  std::printf("AbsRel   %.6f\n", m.abs_rel);
  std::printf("RMSE     %.6f\n", m.rmse);
  std::printf("RMSE_log %.6f\n", m.rmse_log);
  std::printf("delta1   %.2f%%\n", 100.0 * m.delta1);
  std::printf("delta2   %.2f%%\n", 100.0 * m.delta2);
  std::printf("delta3   %.2f%%\n", 100.0 * m.delta3);

  if (!opt.out_dir.empty()) {
    ensure_dir(opt.out_dir);
    vd::RunManifest manifest("eval", g_raw_args);
    manifest.add_input("pred", opt.pred_file);
    manifest.add_input("gt", opt.gt_file);
    vd::KeyValueDoc rec;
    rec.set("pixels", int64_t(m.pixel_count));
    rec.set("mae", m.mae);
    rec.set("abs_rel", m.abs_rel);
    rec.set("rmse", m.rmse);
    rec.set("rmse_log", m.rmse_log);
    rec.set("delta1", m.delta1);
    rec.set("delta2", m.delta2);
    rec.set("delta3", m.delta3);
    if (opt.do_median_scale) rec.set("median_scale_factor", scale_factor);
    if (opt.cap) rec.set("cap", *opt.cap);
    const std::string rec_path = join_path(opt.out_dir, "metrics.kv");
    rec.save(rec_path);
    manifest.add_output("metrics.kv", rec_path);
    manifest.save(join_path(opt.out_dir, "manifest.kv"));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// cloud
// ---------------------------------------------------------------------------

struct CloudOptions {
  std::string depth_file;
  std::string image_file;
  std::string intrinsics_file;
  std::string pose_file;
  std::string out_dir;
  bool binary = false;
};

int run_cloud(const CloudOptions& opt) {
  const vd::DepthMap depth = vd::read_depth_pfm(opt.depth_file);
  const vd::Image image = vd::read_png(opt.image_file);
  const vd::CameraIntrinsics K = read_intrinsics(opt.intrinsics_file);
  const vd::RigidTransform pose =
      opt.pose_file.empty() ? vd::RigidTransform::identity() : read_pose(opt.pose_file);

  const vd::PointCloud cloud = vd::depth_to_cloud(depth, image, K, pose);
  ensure_dir(opt.out_dir);
  const std::string ply_path = join_path(opt.out_dir, "cloud.ply");
  vd::write_ply(ply_path, cloud,
                opt.binary ? vd::PlyFormat::BinaryLittleEndian : vd::PlyFormat::Ascii);
  std::cout << "wrote " << cloud.size() << " points\n";

  vd::RunManifest manifest("cloud", g_raw_args);
  manifest.add_input("depth", opt.depth_file);
  manifest.add_input("image", opt.image_file);
  manifest.add_input("intrinsics", opt.intrinsics_file);
  if (!opt.pose_file.empty()) manifest.add_input("pose", opt.pose_file);
  manifest.add_output("cloud.ply", ply_path);
  manifest.save(join_path(opt.out_dir, "manifest.kv"));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  g_raw_args.assign(argv + 1, argv + argc);

  CLI::App app{"variational stereo depth refinement with expert structure distillation"};
  app.require_subcommand(1);

  RenderOptions render_opt;
  CLI::App* render_cmd = app.add_subcommand("render", "render a synthetic stereo scene");
  render_cmd->add_option("--preset", render_opt.preset_name, "scene preset name");
  render_cmd->add_option("--scene", render_opt.scene_file, "scene key-value file");
  render_cmd->add_option("--frames", render_opt.frames, "number of frames");
  render_cmd->add_option("--first-frame", render_opt.first_frame, "first trajectory index");
  render_cmd->add_option("--res", render_opt.resolution, "square resolution override");
  render_cmd->add_flag("--depth-png16", render_opt.depth16, "also write 16-bit depth pngs");
  render_cmd->add_option("--out", render_opt.out_dir, "output directory")->required();

  EdgesOptions edges_opt;
  CLI::App* edges_cmd = app.add_subcommand("edges", "depth occluding-boundary map");
  edges_cmd->add_option("depth", edges_opt.depth_file, "depth pfm")->required();
  edges_cmd->add_option("--quantile", edges_opt.quantile, "turn-on quantile");
  edges_cmd->add_option("--sharpness", edges_opt.sharpness, "soft-sign sharpness");
  edges_cmd->add_option("--out", edges_opt.out_dir, "output directory");

  AlignOptions align_opt;
  CLI::App* align_cmd = app.add_subcommand("align", "fit expert-to-metric scale and shift");
  align_cmd->add_option("expert", align_opt.expert_file, "raw expert pfm, inverse-depth space")
      ->required();
  align_cmd->add_option("depth", align_opt.depth_file, "metric depth pfm")->required();
  align_cmd->add_flag("--ransac", align_opt.use_ransac, "robust fit instead of least squares");
  align_cmd->add_option("--ransac-iters", align_opt.ransac_iters, "hypothesis count");
  align_cmd->add_option("--threshold", align_opt.threshold, "inlier threshold in meters");
  align_cmd->add_option("--min-inliers", align_opt.min_inliers, "minimum inlier fraction");
  align_cmd->add_option("--seed", align_opt.seed, "rng seed");
  align_cmd->add_option("--out", align_opt.out_dir, "output directory");

  RefineOptions refine_opt;
  CLI::App* refine_cmd = app.add_subcommand("refine", "variational depth refinement");
  refine_cmd->add_option("--preset", refine_opt.preset_name, "scene preset name");
  refine_cmd->add_option("--scene", refine_opt.scene_file, "scene key-value file");
  refine_cmd->add_option("--frame", refine_opt.frame, "trajectory frame index");
  refine_cmd->add_option("--res", refine_opt.resolution, "square resolution override");
  refine_cmd->add_flag("--use-temporal", refine_opt.use_temporal,
                       "render temporal neighbors and optimize poses");
  refine_cmd->add_option("--left", refine_opt.left_file, "left image png");
  refine_cmd->add_option("--right", refine_opt.right_file, "right image png");
  refine_cmd->add_option("--intrinsics", refine_opt.intrinsics_file, "fx fy cx cy file");
  refine_cmd->add_option("--baseline", refine_opt.baseline, "stereo baseline in meters");
  refine_cmd->add_option("--expert", refine_opt.expert_file, "raw expert pfm");
  refine_cmd->add_option("--temporal", refine_opt.temporal,
                         "temporal frame as offset:path, repeatable");
  refine_cmd->add_option("--config", refine_opt.config_file, "refine config key-value file");
  refine_cmd->add_option("--iters", refine_opt.iters, "iteration count override");
  refine_cmd->add_option("--lr", refine_opt.lr, "learning-rate override");
  refine_cmd->add_option("--dist-weight", refine_opt.dist_weight, "distillation weight override");
  refine_cmd->add_option("--seed", refine_opt.seed, "seed override");
  refine_cmd->add_flag("--no-expert", refine_opt.no_expert, "drop the simulated expert");
  refine_cmd->add_option("--expert-scale", refine_opt.expert_sim.scale, "expert sim: depth scale");
  refine_cmd->add_option("--expert-shift", refine_opt.expert_sim.shift, "expert sim: depth shift");
  refine_cmd->add_option("--expert-gamma", refine_opt.expert_sim.gamma, "expert sim: gamma warp");
  refine_cmd->add_option("--expert-blur", refine_opt.expert_sim.blur_radius, "expert sim: blur");
  refine_cmd->add_option("--expert-noise", refine_opt.expert_sim.noise_sigma, "expert sim: noise");
  refine_cmd->add_option("--expert-outliers", refine_opt.expert_sim.outlier_fraction,
                         "expert sim: outlier fraction");
  refine_cmd->add_option("--expert-seed", refine_opt.expert_sim.seed, "expert sim: seed");
  refine_cmd->add_option("--out", refine_opt.out_dir, "output directory")->required();

  EvalOptions eval_opt;
  CLI::App* eval_cmd = app.add_subcommand("eval", "depth error and accuracy metrics");
  eval_cmd->add_option("pred", eval_opt.pred_file, "predicted depth pfm")->required();
  eval_cmd->add_option("gt", eval_opt.gt_file, "ground-truth depth pfm")->required();
  double cap_value = 0.0;
  CLI::Option* cap_flag = eval_cmd->add_option("--cap", cap_value, "ignore gt beyond this depth");
  eval_cmd->add_flag("--median-scale", eval_opt.do_median_scale, "median-scale pred first");
  eval_cmd->add_option("--out", eval_opt.out_dir, "output directory");

  CloudOptions cloud_opt;
  CLI::App* cloud_cmd = app.add_subcommand("cloud", "textured point cloud from depth");
  cloud_cmd->add_option("depth", cloud_opt.depth_file, "depth pfm")->required();
  cloud_cmd->add_option("image", cloud_opt.image_file, "color png")->required();
  cloud_cmd->add_option("intrinsics", cloud_opt.intrinsics_file, "fx fy cx cy file")->required();
  cloud_cmd->add_option("--pose", cloud_opt.pose_file, "camera-to-world pose file");
  cloud_cmd->add_flag("--binary", cloud_opt.binary, "binary little-endian ply");
  cloud_cmd->add_option("--out", cloud_opt.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
    if (*cap_flag) eval_opt.cap = cap_value;

    if (*render_cmd) return run_render(render_opt);
    if (*edges_cmd) return run_edges(edges_opt);
    if (*align_cmd) return run_align(align_opt);
    if (*refine_cmd) return run_refine(refine_opt);
    if (*eval_cmd) return run_eval(eval_opt);
    if (*cloud_cmd) return run_cloud(cloud_opt);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1; // help exits cleanly, bad usage is 1
  } catch (const vd::NumericalError& e) {
    std::cerr << "numerical failure in " << e.term << ": " << e.what() << "\n";
    return 3;
  } catch (const vd::FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const vd::DegenerateError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const vd::EmptyDomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const vd::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
