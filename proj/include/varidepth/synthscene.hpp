#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varidepth/types.hpp"

// Deterministic raycasting renderer for desk-scale stereo data: axis-aligned
// textured boxes and plane rectangles, Lambertian shading with one ambient
// plus one directional light, primary rays only. Each frame yields a stereo
// pair, ground-truth left depth, and an occlusion mask from a left/right
// depth cross-check.

namespace varidepth {

enum class TextureKind { Flat, Checker, Stripes };

struct Texture {
  TextureKind kind = TextureKind::Flat;
  Vec3 color{0.7, 0.7, 0.7};
  Vec3 color2{0.2, 0.2, 0.2};
  double period = 0.3;   // meters per full light/dark cycle
  double softness = 0.0; // 0 = hard cell edges, larger = smoother blend
  int stripe_axis = 0;   // stripes only: 0/1 selects the face tangent axis
};

struct Box {
  Vec3 center{0, 0, 2};
  Vec3 size{1, 1, 1}; // full extents
  Texture tex;
};

// Axis-aligned rectangle: the plane `coord[normal_axis] == offset`, bounded on
// the two remaining axes (in ascending axis order) by lo/hi.
struct Rect {
  int normal_axis = 2;
  double offset = 4.0;
  Vec2 lo{-5, -5};
  Vec2 hi{5, 5};
  Texture tex;
};

// Camera pose given as position plus yaw/pitch/roll in degrees, applied as
// R = Ry(yaw) Rx(pitch) Rz(roll) in the y-down camera convention.
struct CameraPoseSpec {
  Vec3 position{0, 0, 0};
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
  double roll_deg = 0.0;

  RigidTransform to_transform() const; // camera-to-world
};

struct SceneSpec {
  std::string name = "scene";
  int width = 256;
  int height = 256;
  CameraIntrinsics intrinsics{300.0, 300.0, 128.0, 128.0};
  double baseline = 0.13;
  uint64_t seed = 17;

  double ambient = 0.35;
  Vec3 light_dir{0.4, -0.7, 0.6}; // direction light travels, world frame
  double light_intensity = 0.65;

  std::vector<CameraPoseSpec> trajectory{CameraPoseSpec{}};
  std::vector<Box> boxes;
  std::vector<Rect> planes;

  int frame_count() const { return static_cast<int>(trajectory.size()); }

  // Rescales resolution and intrinsics together, preserving the field of view.
  SceneSpec with_resolution(int w, int h) const;
};

struct StereoSample {
  Image left;
  Image right;
  DepthMap gt_depth;          // left frame, invalid on ray misses
  RigidTransform left_pose;   // camera-to-world
  int timestamp = 0;
  Mask non_occluded;          // left pixels passing the 1 cm left/right check
};

StereoSample render(const SceneSpec& spec, int frame);

// ---------------------------------------------------------------------------
// Expert simulation
// ---------------------------------------------------------------------------

// Degrades ground truth into a structured but metric-agnostic inverse-depth
// map: raw = (scale * gt + shift)^-1, then a monotone gamma warp, box blur,
// Gaussian noise, and uniform outliers, in that order.
struct ExpertSimConfig {
  double scale = 1.0;
  double shift = 0.0; // meters, applied in depth space before inversion
  double gamma = 1.0;
  int blur_radius = 0;
  double noise_sigma = 0.0;
  double outlier_fraction = 0.0;
  uint64_t seed = 0;
};

RelativeDepthMap expert_from_gt(const DepthMap& gt, const ExpertSimConfig& model);

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

// Known names: default-boxes, untextured-wall, thin-structures, trajectory.
// Unknown names raise DomainError listing the available presets.
SceneSpec preset(const std::string& name);

std::vector<std::string> preset_names();

// ---------------------------------------------------------------------------
// Scene files
// ---------------------------------------------------------------------------

class KeyValueDoc;

KeyValueDoc scene_to_doc(const SceneSpec& spec);
SceneSpec scene_from_doc(const KeyValueDoc& doc);

} // namespace varidepth
