#pragma once

#include <vector>

#include "varidepth/types.hpp"

// Pinhole camera geometry and the differentiable inverse-warping operator.
//
// Conventions: x right, y down, z forward (the camera looks along +z). The
// right stereo camera sits at +baseline along x in the left camera frame, so
// left-frame points map into the right frame via a translation of
// (-baseline, 0, 0) and a nearer object gets a larger positive u-disparity.

namespace varidepth {

// Pixel (u,v) at metric depth -> camera-frame 3D point.
Vec3 backproject(const Vec2& pixel, double depth, const CameraIntrinsics& K);

struct Projection {
  Vec2 pixel;
  double depth; // z component of the input point
};

// Camera-frame 3D point -> pixel and depth. Throws DomainError when z <= 0.
Projection project(const Vec3& point, const CameraIntrinsics& K);

inline Vec3 apply_transform(const RigidTransform& T, const Vec3& point) { return T.apply(point); }

// ---------------------------------------------------------------------------
// Bilinear sampling
// ---------------------------------------------------------------------------

struct GridSample {
  double value = 0.0;
  double du = 0.0; // d value / d u
  double dv = 0.0; // d value / d v
  bool valid = false;
};

// Bilinear interpolation of the four neighbors of (u,v). Samples outside
// [0, w-1] x [0, h-1] are flagged invalid instead of clamped.
GridSample bilinear_sample(const Grid& grid, double u, double v);

// Per-channel variant for images.
std::vector<GridSample> bilinear_sample(const Image& image, double u, double v);

// ---------------------------------------------------------------------------
// Warping
// ---------------------------------------------------------------------------

// Geometry of one target pixel pushed through backproject -> T -> project.
// Used by warp() and by pose-gradient accumulation, which need identical
// arithmetic.
struct PixelWarp {
  Vec3 target_point;  // backprojected point in the target camera frame
  Vec3 source_point;  // after applying T
  Vec2 source_pixel;  // projection into the source view
  double du_ddepth = 0.0;
  double dv_ddepth = 0.0;
  bool in_front = false; // source_point.z > 0
};

PixelWarp warp_pixel(double u, double v, double depth, const RigidTransform& T,
                     const CameraIntrinsics& K);

// Inverse warp: for each target pixel, backproject with `depth`, map through
// `T` into the source camera, project, and bilinear-sample `source`. Pixels
// whose projection lands behind the camera or outside the source frame are
// masked invalid, as are pixels with invalid depth.
struct WarpResult {
  Image warped;             // invalid pixels hold 0
  Mask valid;
  Grid du_ddepth;           // d source-pixel coords / d depth at each target pixel
  Grid dv_ddepth;
  std::vector<Grid> dsample_du; // per channel: source intensity gradient at the sample
  std::vector<Grid> dsample_dv;

  // Chain rule: d warped[channel] / d depth, elementwise over target pixels.
  Grid intensity_jacobian(int channel) const {
    return dsample_du[channel] * du_ddepth + dsample_dv[channel] * dv_ddepth;
  }
};

WarpResult warp(const Image& source, const DepthMap& depth, const RigidTransform& T,
                const CameraIntrinsics& K);

// ---------------------------------------------------------------------------
// 6-DoF pose parameterization: params = [axis-angle rotation; translation]
// ---------------------------------------------------------------------------

struct PoseTransform {
  RigidTransform transform;
  Mat3 right_jacobian; // SO(3) right Jacobian at the axis-angle point

  // d(R p + t) / d params, a 3x6 block [-R [p]x Jr | I].
  Eigen::Matrix<double, 3, 6> point_jacobian(const Vec3& target_point) const;
};

PoseTransform pose_param_to_transform(const Vec6& params);

Mat3 skew(const Vec3& w);

} // namespace varidepth
