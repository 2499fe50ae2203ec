#pragma once

#include <Eigen/Core>

#include "varidepth/error.hpp"
#include "varidepth/types.hpp"

// Small separable filters over row-major rasters with symmetric boundary
// reflection (index -1 maps to 0, index n maps to n-1). Each filter comes with
// its adjoint so loss gradients can be pushed back through the same padding.

namespace varidepth {

inline Eigen::Index reflect_index(Eigen::Index i, Eigen::Index n) {
  if (i < 0) return -i - 1;
  if (i >= n) return 2 * n - 1 - i;
  return i;
}

namespace detail {

template <typename Scalar>
GridT<Scalar> box_sum_rows(const GridT<Scalar>& x, int radius) {
  GridT<Scalar> out(x.rows(), x.cols());
  for (Eigen::Index v = 0; v < x.rows(); ++v)
    for (Eigen::Index u = 0; u < x.cols(); ++u) {
      Scalar acc = Scalar(0);
      for (int o = -radius; o <= radius; ++o) acc += x(v, reflect_index(u + o, x.cols()));
      out(v, u) = acc;
    }
  return out;
}

template <typename Scalar>
GridT<Scalar> box_sum_cols(const GridT<Scalar>& x, int radius) {
  GridT<Scalar> out(x.rows(), x.cols());
  for (Eigen::Index u = 0; u < x.cols(); ++u)
    for (Eigen::Index v = 0; v < x.rows(); ++v) {
      Scalar acc = Scalar(0);
      for (int o = -radius; o <= radius; ++o) acc += x(reflect_index(v + o, x.rows()), u);
      out(v, u) = acc;
    }
  return out;
}

// Adjoint of the 1-D reflected window sum: scatter instead of gather.
template <typename Scalar>
GridT<Scalar> box_scatter_rows(const GridT<Scalar>& g, int radius) {
  GridT<Scalar> out = GridT<Scalar>::Zero(g.rows(), g.cols());
  for (Eigen::Index v = 0; v < g.rows(); ++v)
    for (Eigen::Index u = 0; u < g.cols(); ++u)
      for (int o = -radius; o <= radius; ++o) out(v, reflect_index(u + o, g.cols())) += g(v, u);
  return out;
}

template <typename Scalar>
GridT<Scalar> box_scatter_cols(const GridT<Scalar>& g, int radius) {
  GridT<Scalar> out = GridT<Scalar>::Zero(g.rows(), g.cols());
  for (Eigen::Index u = 0; u < g.cols(); ++u)
    for (Eigen::Index v = 0; v < g.rows(); ++v)
      for (int o = -radius; o <= radius; ++o) out(reflect_index(v + o, g.rows()), u) += g(v, u);
  return out;
}

} // namespace detail

// Sum over the (2r+1)x(2r+1) window around each pixel, reflected at borders.
template <typename Scalar>
GridT<Scalar> box_sum(const GridT<Scalar>& x, int radius) {
  if (radius < 0) throw DomainError("box radius must be non-negative");
  return detail::box_sum_cols(detail::box_sum_rows(x, radius), radius);
}

// Adjoint of box_sum: box_sum and box_sum_adjoint satisfy
// sum(box_sum(x) * g) == sum(x * box_sum_adjoint(g)) for all x, g.
template <typename Scalar>
GridT<Scalar> box_sum_adjoint(const GridT<Scalar>& g, int radius) {
  if (radius < 0) throw DomainError("box radius must be non-negative");
  return detail::box_scatter_rows(detail::box_scatter_cols(g, radius), radius);
}

// 3x3 cross-correlation with reflected borders:
// out(v,u) = sum_{i,j in [-1,1]} k(i+1, j+1) * x(v+i, u+j).
template <typename Scalar>
GridT<Scalar> correlate3(const GridT<Scalar>& x, const Eigen::Matrix3d& k) {
  if (x.rows() < 3 || x.cols() < 3) throw DomainError("grid smaller than 3x3 kernel");
  GridT<Scalar> out(x.rows(), x.cols());
  for (Eigen::Index v = 0; v < x.rows(); ++v)
    for (Eigen::Index u = 0; u < x.cols(); ++u) {
      Scalar acc = Scalar(0);
      for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
          acc += Scalar(k(i + 1, j + 1)) *
                 x(reflect_index(v + i, x.rows()), reflect_index(u + j, x.cols()));
      out(v, u) = acc;
    }
  return out;
}

// Adjoint of correlate3 with the same reflected padding.
template <typename Scalar>
GridT<Scalar> correlate3_adjoint(const GridT<Scalar>& g, const Eigen::Matrix3d& k) {
  if (g.rows() < 3 || g.cols() < 3) throw DomainError("grid smaller than 3x3 kernel");
  GridT<Scalar> out = GridT<Scalar>::Zero(g.rows(), g.cols());
  for (Eigen::Index v = 0; v < g.rows(); ++v)
    for (Eigen::Index u = 0; u < g.cols(); ++u)
      for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
          out(reflect_index(v + i, g.rows()), reflect_index(u + j, g.cols())) +=
              Scalar(k(i + 1, j + 1)) * g(v, u);
  return out;
}

} // namespace varidepth
