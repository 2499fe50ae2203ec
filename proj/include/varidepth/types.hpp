#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "varidepth/error.hpp"

namespace varidepth {

// Dense row-major raster addressed as grid(v, u) with u = column and v = row,
// origin at the top-left pixel. All modules share this layout.
template <typename Scalar>
using GridT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Grid = GridT<double>;
using Mask = GridT<bool>;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;

inline Mask all_valid_mask(Eigen::Index height, Eigen::Index width) {
  return Mask::Constant(height, width, true);
}

// ---------------------------------------------------------------------------
// Raster types
// ---------------------------------------------------------------------------

// Intensity image with values in [0,1], one plane per channel (1 or 3).
struct Image {
  int width = 0;
  int height = 0;
  std::vector<Grid> planes;

  Image() = default;
  Image(int w, int h, int channels, double fill = 0.0);
  Image(int w, int h, std::vector<Grid> data);

  int channels() const { return static_cast<int>(planes.size()); }

  // Linear grayscale conversion, luma = 0.299 R + 0.587 G + 0.114 B.
  Grid luma() const;
};

// Metric depth in meters with an explicit per-pixel validity mask. Invalid
// pixels are excluded from every loss and metric.
struct DepthMap {
  int width = 0;
  int height = 0;
  Grid data;
  Mask valid;

  DepthMap() = default;
  DepthMap(int w, int h);
  DepthMap(Grid depth, Mask validity);

  static DepthMap all_valid(Grid depth);

  Eigen::Index valid_count() const { return valid.count(); }
};

// Raw expert output in inverse-depth space: unitless, order-encoding values
// with no positivity requirement before inversion.
struct RelativeDepthMap {
  int width = 0;
  int height = 0;
  Grid data;

  RelativeDepthMap() = default;
  explicit RelativeDepthMap(Grid values);
};

// Pinhole camera: u = fx * x / z + cx, v = fy * y / z + cy.
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  CameraIntrinsics() = default;
  CameraIntrinsics(double fx_, double fy_, double cx_, double cy_);
};

// SE(3) pose, applied as p' = rotation * p + translation.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  RigidTransform inverse() const;

  // Composition: (a * b)(p) == a(b(p)).
  friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
    return RigidTransform{a.rotation * b.rotation, a.rotation * b.translation + a.translation};
  }

  static RigidTransform identity() { return {}; }
  static RigidTransform translate(const Vec3& t) { return {Mat3::Identity(), t}; }
};

// First-order gradients of a scalar raster: gu along columns, gv along rows,
// magnitude = sqrt(gu^2 + gv^2).
struct GradientMap {
  int width = 0;
  int height = 0;
  Grid gu;
  Grid gv;
  Grid magnitude;

  GradientMap() = default;
  GradientMap(Grid gu_, Grid gv_);
};

// Occluding-boundary map: `soft` holds the differentiable values in (-1,1),
// `hard` the thresholded 0/1 values, with hard = 1 exactly where soft > 0.
struct BoundaryMap {
  int width = 0;
  int height = 0;
  Grid soft;
  Grid hard;

  BoundaryMap() = default;
  explicit BoundaryMap(Grid soft_values);
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

// Diagnostic invariant check. Never throws; collects violations instead so
// callers can report all problems at once.
struct ValidationResult {
  struct Violation {
    int u = -1; // -1 when the violation is not tied to one pixel
    int v = -1;
    std::string what;
  };
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string str() const;
};

ValidationResult validate(const Image& image);
ValidationResult validate(const DepthMap& depth);
ValidationResult validate(const RelativeDepthMap& rel);
ValidationResult validate(const CameraIntrinsics& K);
ValidationResult validate(const RigidTransform& T);
ValidationResult validate(const GradientMap& g);
ValidationResult validate(const BoundaryMap& b);

} // namespace varidepth
