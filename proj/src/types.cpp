#include "varidepth/types.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace varidepth {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}

void check_plane_shape(const Grid& g, int w, int h, const char* name) {
  if (g.rows() != h || g.cols() != w) {
    std::ostringstream os;
    os << name << " has shape " << g.cols() << "x" << g.rows() << ", expected " << w << "x" << h;
    throw DomainError(os.str());
  }
}

} // namespace

Image::Image(int w, int h, int channels, double fill) : width(w), height(h) {
  require(w > 0 && h > 0, "image dimensions must be positive");
  require(channels == 1 || channels == 3, "image must have 1 or 3 channels");
  planes.assign(static_cast<size_t>(channels), Grid::Constant(h, w, fill));
}

Image::Image(int w, int h, std::vector<Grid> data) : width(w), height(h), planes(std::move(data)) {
  require(w > 0 && h > 0, "image dimensions must be positive");
  require(planes.size() == 1 || planes.size() == 3, "image must have 1 or 3 channels");
  for (const Grid& p : planes) check_plane_shape(p, w, h, "image plane");
}

Grid Image::luma() const {
  if (planes.size() == 1) return planes[0];
  return 0.299 * planes[0] + 0.587 * planes[1] + 0.114 * planes[2];
}

DepthMap::DepthMap(int w, int h) : width(w), height(h) {
  require(w > 0 && h > 0, "depth dimensions must be positive");
  data = Grid::Zero(h, w);
  valid = Mask::Constant(h, w, false);
}

DepthMap::DepthMap(Grid depth, Mask validity) {
  require(depth.rows() > 0 && depth.cols() > 0, "depth dimensions must be positive");
  if (depth.rows() != validity.rows() || depth.cols() != validity.cols())
    throw DomainError("depth and validity mask shapes differ");
  width = static_cast<int>(depth.cols());
  height = static_cast<int>(depth.rows());
  data = std::move(depth);
  valid = std::move(validity);
}

DepthMap DepthMap::all_valid(Grid depth) {
  Mask m = all_valid_mask(depth.rows(), depth.cols());
  return DepthMap(std::move(depth), std::move(m));
}

RelativeDepthMap::RelativeDepthMap(Grid values) {
  require(values.rows() > 0 && values.cols() > 0, "relative depth dimensions must be positive");
  width = static_cast<int>(values.cols());
  height = static_cast<int>(values.rows());
  data = std::move(values);
}

CameraIntrinsics::CameraIntrinsics(double fx_, double fy_, double cx_, double cy_)
    : fx(fx_), fy(fy_), cx(cx_), cy(cy_) {
  require(fx > 0.0 && fy > 0.0, "focal lengths must be positive");
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

GradientMap::GradientMap(Grid gu_, Grid gv_) {
  if (gu_.rows() != gv_.rows() || gu_.cols() != gv_.cols())
    throw DomainError("gradient component shapes differ");
  width = static_cast<int>(gu_.cols());
  height = static_cast<int>(gu_.rows());
  gu = std::move(gu_);
  gv = std::move(gv_);
  magnitude = (gu.square() + gv.square()).sqrt();
}

BoundaryMap::BoundaryMap(Grid soft_values) {
  width = static_cast<int>(soft_values.cols());
  height = static_cast<int>(soft_values.rows());
  soft = std::move(soft_values);
  hard = (soft > 0.0).cast<double>();
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

std::string ValidationResult::str() const {
  if (ok()) return "pass";
  std::ostringstream os;
  for (const auto& viol : violations) {
    if (viol.u >= 0)
      os << "(" << viol.u << "," << viol.v << ") ";
    os << viol.what << "\n";
  }
  return os.str();
}

namespace {

void add(ValidationResult& r, int u, int v, std::string what) {
  r.violations.push_back({u, v, std::move(what)});
}

// Applies `bad(value) -> message or empty` to every element of a grid.
template <typename Fn>
void scan_grid(ValidationResult& r, const Grid& g, Fn&& bad) {
  for (Eigen::Index v = 0; v < g.rows(); ++v)
    for (Eigen::Index u = 0; u < g.cols(); ++u) {
      std::string msg = bad(g(v, u), u, v);
      if (!msg.empty()) add(r, static_cast<int>(u), static_cast<int>(v), std::move(msg));
    }
}

} // namespace

ValidationResult validate(const Image& image) {
  ValidationResult r;
  if (image.channels() != 1 && image.channels() != 3)
    add(r, -1, -1, "channel count not 1 or 3");
  for (const Grid& p : image.planes) {
    if (p.rows() != image.height || p.cols() != image.width) {
      add(r, -1, -1, "plane shape mismatch");
      continue;
    }
    scan_grid(r, p, [](double x, Eigen::Index, Eigen::Index) -> std::string {
      if (!std::isfinite(x)) return "non-finite intensity";
      if (x < 0.0 || x > 1.0) return "intensity outside [0,1]";
      return {};
    });
  }
  return r;
}

ValidationResult validate(const DepthMap& depth) {
  ValidationResult r;
  if (depth.data.rows() != depth.height || depth.data.cols() != depth.width ||
      depth.valid.rows() != depth.height || depth.valid.cols() != depth.width) {
    add(r, -1, -1, "shape mismatch");
    return r;
  }
  for (Eigen::Index v = 0; v < depth.data.rows(); ++v)
    for (Eigen::Index u = 0; u < depth.data.cols(); ++u) {
      if (!depth.valid(v, u)) continue;
      double d = depth.data(v, u);
      if (!std::isfinite(d))
        add(r, static_cast<int>(u), static_cast<int>(v), "non-finite depth");
      else if (d <= 0.0)
        add(r, static_cast<int>(u), static_cast<int>(v), "non-positive depth");
    }
  return r;
}

ValidationResult validate(const RelativeDepthMap& rel) {
  ValidationResult r;
  if (rel.data.rows() != rel.height || rel.data.cols() != rel.width) {
    add(r, -1, -1, "shape mismatch");
    return r;
  }
  scan_grid(r, rel.data, [](double x, Eigen::Index, Eigen::Index) -> std::string {
    if (!std::isfinite(x)) return "non-finite relative depth";
    return {};
  });
  return r;
}

ValidationResult validate(const CameraIntrinsics& K) {
  ValidationResult r;
  if (!(K.fx > 0.0)) add(r, -1, -1, "fx not positive");
  if (!(K.fy > 0.0)) add(r, -1, -1, "fy not positive");
  if (!std::isfinite(K.cx) || !std::isfinite(K.cy)) add(r, -1, -1, "non-finite principal point");
  return r;
}

ValidationResult validate(const RigidTransform& T) {
  ValidationResult r;
  const Mat3 gram = T.rotation.transpose() * T.rotation;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9)
    add(r, -1, -1, "rotation not orthonormal");
  if (std::abs(T.rotation.determinant() - 1.0) > 1e-9)
    add(r, -1, -1, "rotation determinant not +1");
  if (!T.translation.allFinite()) add(r, -1, -1, "non-finite translation");
  return r;
}

ValidationResult validate(const GradientMap& g) {
  ValidationResult r;
  if (g.gu.rows() != g.height || g.gu.cols() != g.width ||
      g.gv.rows() != g.height || g.gv.cols() != g.width ||
      g.magnitude.rows() != g.height || g.magnitude.cols() != g.width) {
    add(r, -1, -1, "shape mismatch");
    return r;
  }
  for (Eigen::Index v = 0; v < g.magnitude.rows(); ++v)
    for (Eigen::Index u = 0; u < g.magnitude.cols(); ++u) {
      double expect = std::sqrt(g.gu(v, u) * g.gu(v, u) + g.gv(v, u) * g.gv(v, u));
      if (std::abs(g.magnitude(v, u) - expect) > 1e-12)
        add(r, static_cast<int>(u), static_cast<int>(v), "magnitude inconsistent with components");
    }
  return r;
}

ValidationResult validate(const BoundaryMap& b) {
  ValidationResult r;
  if (b.soft.rows() != b.height || b.soft.cols() != b.width ||
      b.hard.rows() != b.height || b.hard.cols() != b.width) {
    add(r, -1, -1, "shape mismatch");
    return r;
  }
  for (Eigen::Index v = 0; v < b.soft.rows(); ++v)
    for (Eigen::Index u = 0; u < b.soft.cols(); ++u) {
      double s = b.soft(v, u);
      double h = b.hard(v, u);
      if (s <= -1.0 || s >= 1.0)
        add(r, static_cast<int>(u), static_cast<int>(v), "soft value outside (-1,1)");
      if (h != (s > 0.0 ? 1.0 : 0.0))
        add(r, static_cast<int>(u), static_cast<int>(v), "hard value inconsistent with soft");
    }
  return r;
}

} // namespace varidepth
