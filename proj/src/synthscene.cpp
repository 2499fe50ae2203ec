#include "varidepth/synthscene.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "varidepth/filters.hpp"
#include "varidepth/geometry.hpp"
#include "varidepth/keyval.hpp"

namespace varidepth {

namespace {

constexpr double kRayEps = 1e-9;
constexpr double kOcclusionTolerance = 0.01; // meters

Mat3 rot_y(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 m;
  m << c, 0, s, 0, 1, 0, -s, 0, c;
  return m;
}

Mat3 rot_x(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 m;
  m << 1, 0, 0, 0, c, -s, 0, s, c;
  return m;
}

Mat3 rot_z(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

struct Hit {
  double t = std::numeric_limits<double>::infinity(); // camera z-depth
  Vec3 point = Vec3::Zero();                          // world
  Vec3 normal = Vec3::Zero();                         // faces the ray origin
  int face_axis = 2;
  const Texture* tex = nullptr;

  bool ok() const { return tex != nullptr; }
};

// Smoothed square wave in [-1,1]; softness 0 degenerates to the sign of the
// underlying sine.
double wave(double x, double period, double softness) {
  const double s = std::sin(2.0 * 3.14159265358979323846 * x / period);
  if (softness <= 0.0) return s >= 0.0 ? 1.0 : -1.0;
  return std::tanh(s / softness);
}

Vec3 albedo_at(const Texture& tex, int face_axis, const Vec3& point) {
  if (tex.kind == TextureKind::Flat) return tex.color;
  // Tangent axes in ascending order, texture coordinates from world position.
  const int a1 = face_axis == 0 ? 1 : 0;
  const int a2 = face_axis == 2 ? 1 : 2;
  if (tex.kind == TextureKind::Stripes) {
    const double coord = point[tex.stripe_axis == 0 ? a1 : a2];
    const double blend = 0.5 * (1.0 + wave(coord, tex.period, tex.softness));
    return blend * tex.color + (1.0 - blend) * tex.color2;
  }
  const double blend = 0.5 * (1.0 + wave(point[a1], tex.period, tex.softness) *
                                        wave(point[a2], tex.period, tex.softness));
  return blend * tex.color + (1.0 - blend) * tex.color2;
}

// Ray-box slab test; the ray is origin + t * dir with t equal to camera
// z-depth (dir has unit camera-z component).
bool intersect_box(const Box& box, const Vec3& origin, const Vec3& dir, Hit& hit) {
  const Vec3 lo = box.center - 0.5 * box.size;
  const Vec3 hi = box.center + 0.5 * box.size;
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  int near_axis = -1;
  for (int a = 0; a < 3; ++a) {
    if (std::abs(dir[a]) < 1e-15) {
      if (origin[a] < lo[a] || origin[a] > hi[a]) return false;
      continue;
    }
    double t1 = (lo[a] - origin[a]) / dir[a];
    double t2 = (hi[a] - origin[a]) / dir[a];
    if (t1 > t2) std::swap(t1, t2);
    if (t1 > t_near) {
      t_near = t1;
      near_axis = a;
    }
    t_far = std::min(t_far, t2);
  }
  if (near_axis < 0 || t_near > t_far || t_near <= kRayEps || t_near >= hit.t) return false;

  hit.t = t_near;
  hit.point = origin + t_near * dir;
  hit.normal = Vec3::Zero();
  hit.normal[near_axis] = dir[near_axis] > 0.0 ? -1.0 : 1.0;
  hit.face_axis = near_axis;
  hit.tex = &box.tex;
  return true;
}

bool intersect_rect(const Rect& rect, const Vec3& origin, const Vec3& dir, Hit& hit) {
  const int n = rect.normal_axis;
  if (std::abs(dir[n]) < 1e-15) return false;
  const double t = (rect.offset - origin[n]) / dir[n];
  if (t <= kRayEps || t >= hit.t) return false;
  const Vec3 p = origin + t * dir;
  const int a1 = n == 0 ? 1 : 0;
  const int a2 = n == 2 ? 1 : 2;
  if (p[a1] < rect.lo.x() || p[a1] > rect.hi.x() || p[a2] < rect.lo.y() || p[a2] > rect.hi.y())
    return false;

  hit.t = t;
  hit.point = p;
  hit.normal = Vec3::Zero();
  hit.normal[n] = dir[n] > 0.0 ? -1.0 : 1.0;
  hit.face_axis = n;
  hit.tex = &rect.tex;
  return true;
}

Hit trace(const SceneSpec& spec, const Vec3& origin, const Vec3& dir) {
  Hit hit;
  for (const Box& b : spec.boxes) intersect_box(b, origin, dir, hit);
  for (const Rect& r : spec.planes) intersect_rect(r, origin, dir, hit);
  return hit;
}

// One full raycast pass for a camera pose: shaded image plus z-depth.
void render_view(const SceneSpec& spec, const RigidTransform& pose, Image& image, DepthMap& depth) {
  const CameraIntrinsics& K = spec.intrinsics;
  const Vec3 light = spec.light_dir.normalized();
  for (int v = 0; v < spec.height; ++v) {
    for (int u = 0; u < spec.width; ++u) {
      // Unnormalized direction with unit camera-z so the ray parameter is the
      // camera z-depth directly.
      const Vec3 dir_cam((u - K.cx) / K.fx, (v - K.cy) / K.fy, 1.0);
      const Vec3 dir = pose.rotation * dir_cam;
      const Hit hit = trace(spec, pose.translation, dir);
      if (!hit.ok()) continue;

      depth.data(v, u) = hit.t;
      depth.valid(v, u) = true;
      const double shade =
          std::clamp(spec.ambient + spec.light_intensity * std::max(0.0, hit.normal.dot(-light)),
                     0.0, 1.0);
      const Vec3 rgb = albedo_at(*hit.tex, hit.face_axis, hit.point) * shade;
      for (int c = 0; c < 3; ++c) image.planes[c](v, u) = std::clamp(rgb[c], 0.0, 1.0);
    }
  }
}

} // namespace

RigidTransform CameraPoseSpec::to_transform() const {
  RigidTransform T;
  T.rotation = rot_y(yaw_deg * kDegToRad) * rot_x(pitch_deg * kDegToRad) * rot_z(roll_deg * kDegToRad);
  T.translation = position;
  return T;
}

SceneSpec SceneSpec::with_resolution(int w, int h) const {
  if (w < 2 || h < 2) throw DomainError("resolution must be at least 2x2");
  SceneSpec out = *this;
  out.width = w;
  out.height = h;
  out.intrinsics.fx = intrinsics.fx * double(w) / double(width);
  out.intrinsics.fy = intrinsics.fy * double(h) / double(height);
  out.intrinsics.cx = intrinsics.cx * double(w) / double(width);
  out.intrinsics.cy = intrinsics.cy * double(h) / double(height);
  return out;
}

StereoSample render(const SceneSpec& spec, int frame) {
  if (frame < 0 || frame >= spec.frame_count())
    throw DomainError("frame index outside the trajectory");
  if (!(spec.baseline > 0.0)) throw DomainError("baseline must be positive");

  StereoSample s;
  s.timestamp = frame;
  s.left_pose = spec.trajectory[size_t(frame)].to_transform();
  const RigidTransform right_pose =
      s.left_pose * RigidTransform::translate({spec.baseline, 0.0, 0.0});

  s.left = Image(spec.width, spec.height, 3, 0.0);
  s.right = Image(spec.width, spec.height, 3, 0.0);
  s.gt_depth = DepthMap(spec.width, spec.height);
  DepthMap right_depth(spec.width, spec.height);
  render_view(spec, s.left_pose, s.left, s.gt_depth);
  render_view(spec, right_pose, s.right, right_depth);

  // Occlusion mask: project each left pixel into the right view with its
  // ground-truth depth and require the right depth map to agree within 1 cm.
  s.non_occluded = Mask::Constant(spec.height, spec.width, false);
  const RigidTransform left_to_right = RigidTransform::translate({-spec.baseline, 0.0, 0.0});
  for (int v = 0; v < spec.height; ++v)
    for (int u = 0; u < spec.width; ++u) {
      if (!s.gt_depth.valid(v, u)) continue;
      const Vec3 in_right = left_to_right.apply(
          backproject({double(u), double(v)}, s.gt_depth.data(v, u), spec.intrinsics));
      if (!(in_right.z() > 0.0)) continue;
      const Projection proj = project(in_right, spec.intrinsics);
      const int ur = int(std::lround(proj.pixel.x()));
      const int vr = int(std::lround(proj.pixel.y()));
      if (ur < 0 || ur >= spec.width || vr < 0 || vr >= spec.height) continue;
      if (!right_depth.valid(vr, ur)) continue;
      if (std::abs(right_depth.data(vr, ur) - in_right.z()) <= kOcclusionTolerance)
        s.non_occluded(v, u) = true;
    }
  return s;
}

// ---------------------------------------------------------------------------
// Expert simulation
// ---------------------------------------------------------------------------

RelativeDepthMap expert_from_gt(const DepthMap& gt, const ExpertSimConfig& model) {
  if (model.gamma <= 0.0) throw DomainError("expert gamma must be positive");
  if (model.blur_radius < 0) throw DomainError("expert blur radius must be non-negative");

  const Eigen::Index h = gt.data.rows(), w = gt.data.cols();
  Grid raw = Grid::Zero(h, w);
  for (Eigen::Index v = 0; v < h; ++v)
    for (Eigen::Index u = 0; u < w; ++u) {
      if (!gt.valid(v, u)) continue; // invalid pixels stay 0, below any floor
      const double d = model.scale * gt.data(v, u) + model.shift;
      if (d > 1e-9) raw(v, u) = 1.0 / d;
    }

  if (model.gamma != 1.0) raw = raw.pow(model.gamma);

  if (model.blur_radius > 0) {
    const double win = 2.0 * model.blur_radius + 1.0;
    raw = box_sum(raw, model.blur_radius) / (win * win);
  }

  if (model.noise_sigma > 0.0) {
    std::mt19937_64 rng(model.seed);
    std::normal_distribution<double> noise(0.0, model.noise_sigma);
    for (Eigen::Index v = 0; v < h; ++v)
      for (Eigen::Index u = 0; u < w; ++u) raw(v, u) += noise(rng);
  }

  if (model.outlier_fraction > 0.0) {
    const double lo = raw.minCoeff();
    const double hi = raw.maxCoeff();
    std::mt19937_64 rng(model.seed + 0x51ED270B);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> value(lo, hi == lo ? lo + 1.0 : hi);
    for (Eigen::Index v = 0; v < h; ++v)
      for (Eigen::Index u = 0; u < w; ++u) {
        const double c = coin(rng);
        const double val = value(rng); // always drawn, keeps the stream aligned
        if (c < model.outlier_fraction) raw(v, u) = val;
      }
  }

  return RelativeDepthMap(std::move(raw));
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace {

Texture checker(Vec3 c1, Vec3 c2, double period, double softness = 0.25) {
  Texture t;
  t.kind = TextureKind::Checker;
  t.color = c1;
  t.color2 = c2;
  t.period = period;
  t.softness = softness;
  return t;
}

Texture stripes(Vec3 c1, Vec3 c2, double period, int axis, double softness = 0.3) {
  Texture t;
  t.kind = TextureKind::Stripes;
  t.color = c1;
  t.color2 = c2;
  t.period = period;
  t.softness = softness;
  t.stripe_axis = axis;
  return t;
}

Texture flat(Vec3 c) {
  Texture t;
  t.color = c;
  return t;
}

Rect floor_rect(double y, const Texture& tex) {
  Rect r;
  r.normal_axis = 1;
  r.offset = y;
  r.lo = {-6.0, 0.2}; // x, z ranges
  r.hi = {6.0, 10.0};
  r.tex = tex;
  return r;
}

Rect back_wall(double z, const Texture& tex) {
  Rect r;
  r.normal_axis = 2;
  r.offset = z;
  r.lo = {-8.0, -6.0}; // x, y ranges
  r.hi = {8.0, 6.0};
  r.tex = tex;
  return r;
}

SceneSpec default_boxes() {
  SceneSpec s;
  s.name = "default-boxes";
  s.seed = 17;
  s.planes.push_back(floor_rect(1.1, checker({0.82, 0.80, 0.74}, {0.25, 0.24, 0.22}, 0.7, 0.3)));
  s.planes.push_back(back_wall(6.0, stripes({0.75, 0.72, 0.62}, {0.35, 0.33, 0.3}, 0.9, 0, 0.35)));

  Box b1;
  b1.center = {-0.55, 0.45, 1.7};
  b1.size = {0.55, 0.55, 0.55};
  b1.tex = checker({0.85, 0.32, 0.25}, {0.15, 0.08, 0.08}, 0.2);
  Box b2;
  b2.center = {0.55, 0.3, 2.6};
  b2.size = {0.7, 0.9, 0.6};
  b2.tex = checker({0.25, 0.62, 0.85}, {0.06, 0.12, 0.2}, 0.24);
  Box b3;
  b3.center = {-0.45, -0.35, 3.5};
  b3.size = {0.8, 0.7, 0.7};
  b3.tex = checker({0.35, 0.8, 0.35}, {0.08, 0.18, 0.08}, 0.28);
  Box b4;
  b4.center = {0.95, -0.55, 4.6};
  b4.size = {0.9, 0.9, 0.8};
  b4.tex = checker({0.85, 0.7, 0.25}, {0.2, 0.16, 0.06}, 0.32);
  s.boxes = {b1, b2, b3, b4};
  return s;
}

// Mostly untextured slanted wall seen under yaw, with a checkered floor strip
// at the bottom of the frame providing the only photometric anchor.
SceneSpec untextured_wall() {
  SceneSpec s;
  s.name = "untextured-wall";
  s.seed = 23;
  s.trajectory = {CameraPoseSpec{{0, 0, 0}, 30.0, 0.0, 0.0}};

  Rect wall;
  wall.normal_axis = 0;
  wall.offset = 1.6;
  wall.lo = {-3.0, 0.2}; // y, z ranges
  wall.hi = {3.0, 14.0};
  wall.tex = flat({0.62, 0.60, 0.58});
  s.planes.push_back(wall);

  s.planes.push_back(floor_rect(0.85, checker({0.85, 0.82, 0.75}, {0.2, 0.19, 0.18}, 0.45, 0.3)));

  Rect far_wall;
  far_wall.normal_axis = 2;
  far_wall.offset = 12.0;
  far_wall.lo = {-10.0, -6.0};
  far_wall.hi = {10.0, 6.0};
  far_wall.tex = flat({0.3, 0.3, 0.32});
  s.planes.push_back(far_wall);
  return s;
}

SceneSpec thin_structures() {
  SceneSpec s;
  s.name = "thin-structures";
  s.seed = 29;
  s.planes.push_back(floor_rect(1.1, checker({0.8, 0.78, 0.72}, {0.26, 0.25, 0.23}, 0.7, 0.3)));
  s.planes.push_back(back_wall(5.0, checker({0.7, 0.68, 0.6}, {0.3, 0.28, 0.26}, 0.8, 0.35)));
  for (int i = 0; i < 3; ++i) {
    Box slat;
    slat.center = {-0.6 + 0.6 * i, 0.0, 2.0 + 0.25 * i};
    slat.size = {0.06, 1.5, 0.06};
    slat.tex = flat({0.85, 0.45 + 0.15 * i, 0.2});
    s.boxes.push_back(slat);
  }
  Box bar;
  bar.center = {0.0, -0.5, 2.8};
  bar.size = {1.8, 0.07, 0.07};
  bar.tex = flat({0.4, 0.6, 0.85});
  s.boxes.push_back(bar);
  return s;
}

SceneSpec trajectory_scene() {
  SceneSpec s = default_boxes();
  s.name = "trajectory";
  s.seed = 31;
  s.trajectory.clear();
  for (int i = 0; i < 10; ++i) {
    CameraPoseSpec pose;
    pose.position = {0.02 * i, 0.0, 0.0}; // 2 cm per frame
    pose.yaw_deg = 1.0 * i;               // 1 degree per frame
    s.trajectory.push_back(pose);
  }
  return s;
}

} // namespace

std::vector<std::string> preset_names() {
  return {"default-boxes", "untextured-wall", "thin-structures", "trajectory"};
}

// ---------------------------------------------------------------------------
// Scene files
// ---------------------------------------------------------------------------

namespace {

std::string format_vec(const double* v, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += " ";
    out += format_double(v[i]);
  }
  return out;
}

std::string texture_to_string(const Texture& t) {
  std::string out;
  switch (t.kind) {
    case TextureKind::Flat: out = "flat"; break;
    case TextureKind::Checker: out = "checker"; break;
    case TextureKind::Stripes: out = "stripes"; break;
  }
  out += " color " + format_vec(t.color.data(), 3);
  if (t.kind != TextureKind::Flat) {
    out += " color2 " + format_vec(t.color2.data(), 3);
    out += " period " + format_double(t.period);
    out += " soft " + format_double(t.softness);
  }
  if (t.kind == TextureKind::Stripes) out += " axis " + std::to_string(t.stripe_axis);
  return out;
}

// Token cursor over one value string.
struct Tokens {
  std::vector<std::string> toks;
  size_t pos = 0;

  explicit Tokens(const std::string& s) {
    std::istringstream is(s);
    std::string t;
    while (is >> t) toks.push_back(t);
  }
  bool done() const { return pos >= toks.size(); }
  std::string next(const char* what) {
    if (done()) throw FormatError(std::string("scene file: missing ") + what);
    return toks[pos++];
  }
  double number(const char* what) {
    const std::string t = next(what);
    try {
      size_t used = 0;
      double v = std::stod(t, &used);
      if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    throw FormatError(std::string("scene file: bad number for ") + what + ": " + t);
  }
  Vec3 vec3(const char* what) {
    Vec3 v;
    for (int i = 0; i < 3; ++i) v[i] = number(what);
    return v;
  }
};

Texture texture_from_tokens(Tokens& t) {
  Texture tex;
  const std::string kind = t.next("texture kind");
  if (kind == "flat")
    tex.kind = TextureKind::Flat;
  else if (kind == "checker")
    tex.kind = TextureKind::Checker;
  else if (kind == "stripes")
    tex.kind = TextureKind::Stripes;
  else
    throw FormatError("scene file: unknown texture kind: " + kind);
  while (!t.done()) {
    const std::string field = t.next("texture field");
    if (field == "color")
      tex.color = t.vec3("color");
    else if (field == "color2")
      tex.color2 = t.vec3("color2");
    else if (field == "period")
      tex.period = t.number("period");
    else if (field == "soft")
      tex.softness = t.number("soft");
    else if (field == "axis")
      tex.stripe_axis = int(t.number("axis"));
    else
      throw FormatError("scene file: unknown texture field: " + field);
  }
  return tex;
}

int axis_from_string(const std::string& s) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  throw FormatError("scene file: bad axis: " + s);
}

const char* axis_name(int a) { return a == 0 ? "x" : (a == 1 ? "y" : "z"); }

} // namespace

KeyValueDoc scene_to_doc(const SceneSpec& spec) {
  KeyValueDoc doc;
  doc.set("name", spec.name);
  doc.set("resolution", std::to_string(spec.width) + " " + std::to_string(spec.height));
  const double K[4] = {spec.intrinsics.fx, spec.intrinsics.fy, spec.intrinsics.cx,
                       spec.intrinsics.cy};
  doc.set("intrinsics", format_vec(K, 4));
  doc.set("baseline", spec.baseline);
  doc.set("seed", int64_t(spec.seed));
  doc.set("ambient", spec.ambient);
  doc.set("light_dir", format_vec(spec.light_dir.data(), 3));
  doc.set("light_intensity", spec.light_intensity);
  for (const CameraPoseSpec& f : spec.trajectory) {
    const double vals[6] = {f.position.x(), f.position.y(), f.position.z(),
                            f.yaw_deg, f.pitch_deg, f.roll_deg};
    doc.add("frame", format_vec(vals, 6));
  }
  for (const Box& b : spec.boxes)
    doc.add("box", "center " + format_vec(b.center.data(), 3) + " size " +
                       format_vec(b.size.data(), 3) + " tex " + texture_to_string(b.tex));
  for (const Rect& r : spec.planes) {
    const double lohi[4] = {r.lo.x(), r.lo.y(), r.hi.x(), r.hi.y()};
    doc.add("plane", std::string("normal ") + axis_name(r.normal_axis) + " offset " +
                         format_double(r.offset) + " lo " + format_vec(lohi, 2) + " hi " +
                         format_vec(lohi + 2, 2) + " tex " + texture_to_string(r.tex));
  }
  return doc;
}

SceneSpec scene_from_doc(const KeyValueDoc& doc) {
  SceneSpec spec;
  spec.name = doc.get_or("name", "scene");
  const auto res = parse_numbers(doc.get("resolution"));
  if (res.size() != 2) throw FormatError("scene file: resolution needs two values");
  spec.width = int(res[0]);
  spec.height = int(res[1]);
  const auto K = parse_numbers(doc.get("intrinsics"));
  if (K.size() != 4) throw FormatError("scene file: intrinsics needs fx fy cx cy");
  spec.intrinsics = CameraIntrinsics(K[0], K[1], K[2], K[3]);
  spec.baseline = doc.get_double("baseline");
  spec.seed = uint64_t(doc.get_int_or("seed", 0));
  spec.ambient = doc.get_double_or("ambient", spec.ambient);
  if (doc.has("light_dir")) {
    const auto ld = parse_numbers(doc.get("light_dir"));
    if (ld.size() != 3) throw FormatError("scene file: light_dir needs three values");
    spec.light_dir = Vec3(ld[0], ld[1], ld[2]);
  }
  spec.light_intensity = doc.get_double_or("light_intensity", spec.light_intensity);

  spec.trajectory.clear();
  for (const std::string& f : doc.get_all("frame")) {
    const auto vals = parse_numbers(f);
    if (vals.size() != 6)
      throw FormatError("scene file: frame needs tx ty tz yaw pitch roll");
    CameraPoseSpec pose;
    pose.position = Vec3(vals[0], vals[1], vals[2]);
    pose.yaw_deg = vals[3];
    pose.pitch_deg = vals[4];
    pose.roll_deg = vals[5];
    spec.trajectory.push_back(pose);
  }
  if (spec.trajectory.empty()) spec.trajectory.push_back(CameraPoseSpec{});

  for (const std::string& line : doc.get_all("box")) {
    Tokens t(line);
    Box b;
    if (t.next("box field") != "center") throw FormatError("scene file: box must start with center");
    b.center = t.vec3("center");
    if (t.next("box field") != "size") throw FormatError("scene file: box needs size");
    b.size = t.vec3("size");
    if (t.next("box field") != "tex") throw FormatError("scene file: box needs tex");
    b.tex = texture_from_tokens(t);
    spec.boxes.push_back(b);
  }
  for (const std::string& line : doc.get_all("plane")) {
    Tokens t(line);
    Rect r;
    if (t.next("plane field") != "normal")
      throw FormatError("scene file: plane must start with normal");
    r.normal_axis = axis_from_string(t.next("normal axis"));
    if (t.next("plane field") != "offset") throw FormatError("scene file: plane needs offset");
    r.offset = t.number("offset");
    if (t.next("plane field") != "lo") throw FormatError("scene file: plane needs lo");
    r.lo = {t.number("lo"), t.number("lo")};
    if (t.next("plane field") != "hi") throw FormatError("scene file: plane needs hi");
    r.hi = {t.number("hi"), t.number("hi")};
    if (t.next("plane field") != "tex") throw FormatError("scene file: plane needs tex");
    r.tex = texture_from_tokens(t);
    spec.planes.push_back(r);
  }
  return spec;
}

SceneSpec preset(const std::string& name) {
  if (name == "default-boxes") return default_boxes();
  if (name == "untextured-wall") return untextured_wall();
  if (name == "thin-structures") return thin_structures();
  if (name == "trajectory") return trajectory_scene();
  std::string known;
  for (const std::string& n : preset_names()) known += " " + n;
  throw DomainError("unknown preset '" + name + "', available:" + known);
}

} // namespace varidepth
