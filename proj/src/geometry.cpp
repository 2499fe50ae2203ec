#include "varidepth/geometry.hpp"

#include <cmath>

namespace varidepth {

Vec3 backproject(const Vec2& pixel, double depth, const CameraIntrinsics& K) {
  if (!(depth > 0.0)) throw DomainError("backproject requires positive depth");
  return {(pixel.x() - K.cx) * depth / K.fx, (pixel.y() - K.cy) * depth / K.fy, depth};
}

Projection project(const Vec3& point, const CameraIntrinsics& K) {
  if (!(point.z() > 0.0)) throw DomainError("project: point behind camera");
  return {{K.fx * point.x() / point.z() + K.cx, K.fy * point.y() / point.z() + K.cy}, point.z()};
}

// ---------------------------------------------------------------------------
// Bilinear sampling
// ---------------------------------------------------------------------------

GridSample bilinear_sample(const Grid& grid, double u, double v) {
  const Eigen::Index w = grid.cols();
  const Eigen::Index h = grid.rows();
  GridSample s;
  if (!(u >= 0.0) || !(v >= 0.0) || !(u <= double(w - 1)) || !(v <= double(h - 1))) return s;

  // Clamp the cell at the far edge so u == w-1 lands in the last cell with
  // fractional coordinate exactly 1.
  Eigen::Index u0 = std::min<Eigen::Index>(Eigen::Index(std::floor(u)), w - 2);
  Eigen::Index v0 = std::min<Eigen::Index>(Eigen::Index(std::floor(v)), h - 2);
  if (w == 1) u0 = 0;
  if (h == 1) v0 = 0;
  const Eigen::Index u1 = std::min<Eigen::Index>(u0 + 1, w - 1);
  const Eigen::Index v1 = std::min<Eigen::Index>(v0 + 1, h - 1);
  const double fu = u - double(u0);
  const double fv = v - double(v0);

  const double p00 = grid(v0, u0), p01 = grid(v0, u1);
  const double p10 = grid(v1, u0), p11 = grid(v1, u1);

  const double top = p00 + fu * (p01 - p00);
  const double bot = p10 + fu * (p11 - p10);
  s.value = top + fv * (bot - top);
  s.du = (1.0 - fv) * (p01 - p00) + fv * (p11 - p10);
  s.dv = bot - top;
  s.valid = true;
  return s;
}

std::vector<GridSample> bilinear_sample(const Image& image, double u, double v) {
  std::vector<GridSample> out;
  out.reserve(image.planes.size());
  for (const Grid& plane : image.planes) out.push_back(bilinear_sample(plane, u, v));
  return out;
}

// ---------------------------------------------------------------------------
// Warping
// ---------------------------------------------------------------------------

PixelWarp warp_pixel(double u, double v, double depth, const RigidTransform& T,
                     const CameraIntrinsics& K) {
  PixelWarp pw;
  const double a = (u - K.cx) / K.fx;
  const double b = (v - K.cy) / K.fy;
  pw.target_point = Vec3(a * depth, b * depth, depth);

  // source_point = m * depth + t with m = R (a, b, 1)^T, so the depth
  // derivative of the projected coordinates has a closed form.
  const Vec3 m = T.rotation * Vec3(a, b, 1.0);
  pw.source_point = m * depth + T.translation;
  const double z = pw.source_point.z();
  if (!(z > 0.0)) return pw;
  pw.in_front = true;

  pw.source_pixel = Vec2(K.fx * pw.source_point.x() / z + K.cx,
                         K.fy * pw.source_point.y() / z + K.cy);
  const double inv_z2 = 1.0 / (z * z);
  pw.du_ddepth = K.fx * (m.x() * z - pw.source_point.x() * m.z()) * inv_z2;
  pw.dv_ddepth = K.fy * (m.y() * z - pw.source_point.y() * m.z()) * inv_z2;
  return pw;
}

WarpResult warp(const Image& source, const DepthMap& depth, const RigidTransform& T,
                const CameraIntrinsics& K) {
  if (source.width != depth.width || source.height != depth.height)
    throw DomainError("warp: source image and depth shapes differ");

  const int w = depth.width, h = depth.height;
  const int nc = source.channels();
  WarpResult r;
  r.warped = Image(w, h, nc, 0.0);
  r.valid = Mask::Constant(h, w, false);
  r.du_ddepth = Grid::Zero(h, w);
  r.dv_ddepth = Grid::Zero(h, w);
  r.dsample_du.assign(nc, Grid::Zero(h, w));
  r.dsample_dv.assign(nc, Grid::Zero(h, w));

  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!depth.valid(v, u)) continue;
      const PixelWarp pw = warp_pixel(u, v, depth.data(v, u), T, K);
      if (!pw.in_front) continue;
      bool ok = true;
      for (int c = 0; c < nc; ++c) {
        GridSample s = bilinear_sample(source.planes[c], pw.source_pixel.x(), pw.source_pixel.y());
        if (!s.valid) {
          ok = false;
          break;
        }
        r.warped.planes[c](v, u) = s.value;
        r.dsample_du[c](v, u) = s.du;
        r.dsample_dv[c](v, u) = s.dv;
      }
      if (!ok) {
        for (int c = 0; c < nc; ++c) {
          r.warped.planes[c](v, u) = 0.0;
          r.dsample_du[c](v, u) = 0.0;
          r.dsample_dv[c](v, u) = 0.0;
        }
        continue;
      }
      r.valid(v, u) = true;
      r.du_ddepth(v, u) = pw.du_ddepth;
      r.dv_ddepth(v, u) = pw.dv_ddepth;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pose parameterization
// ---------------------------------------------------------------------------

Mat3 skew(const Vec3& w) {
  Mat3 m;
  m << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return m;
}

PoseTransform pose_param_to_transform(const Vec6& params) {
  const Vec3 omega = params.head<3>();
  const Vec3 t = params.tail<3>();
  const double theta = omega.norm();
  const Mat3 W = skew(omega);

  PoseTransform pt;
  pt.transform.translation = t;

  // Rodrigues with a Taylor fallback near zero rotation; the right Jacobian
  // uses the matching series so the two stay consistent under differentiation.
  if (theta < 1e-8) {
    pt.transform.rotation = Mat3::Identity() + W + 0.5 * W * W;
    pt.right_jacobian = Mat3::Identity() - 0.5 * W + (1.0 / 6.0) * W * W;
  } else {
    const double s = std::sin(theta), c = std::cos(theta);
    pt.transform.rotation =
        Mat3::Identity() + (s / theta) * W + ((1.0 - c) / (theta * theta)) * W * W;
    pt.right_jacobian = Mat3::Identity() - ((1.0 - c) / (theta * theta)) * W +
                        ((theta - s) / (theta * theta * theta)) * W * W;
  }
  return pt;
}

Eigen::Matrix<double, 3, 6> PoseTransform::point_jacobian(const Vec3& target_point) const {
  Eigen::Matrix<double, 3, 6> J;
  J.leftCols<3>() = -transform.rotation * skew(target_point) * right_jacobian;
  J.rightCols<3>() = Mat3::Identity();
  return J;
}

} // namespace varidepth
