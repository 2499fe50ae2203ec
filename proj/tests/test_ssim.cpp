#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"
#include "varidepth/ssim.hpp"

using namespace varidepth;

namespace {
const SsimConfig kCfg; // 3x3 window, c1 = 1e-4, c2 = 9e-4
}

TEST_CASE("self-similarity is exactly one") {
  Grid x = testutil::random_grid(10, 11, 0, 1, 3);
  const Mask m = all_valid_mask(10, 11);
  const SsimResult r = ssim_map(x, x, m, kCfg);
  CHECK((r.map - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(r.mean() == doctest::Approx(1.0));
}

TEST_CASE("constant zero vs constant one follows the closed form") {
  // mu_a = 0, mu_b = 1, all variances zero: SSIM = c1 / (1 + c1).
  Grid a = Grid::Zero(8, 8);
  Grid b = Grid::Ones(8, 8);
  const SsimResult r = ssim_map(a, b, all_valid_mask(8, 8), kCfg);
  const double expect = kCfg.c1 / (1.0 + kCfg.c1);
  CHECK((r.map - expect).abs().maxCoeff() < 1e-15);
  CHECK(expect == doctest::Approx(9.999e-5).epsilon(1e-3));
}

TEST_CASE("ssim is symmetric in its arguments") {
  Grid a = testutil::random_grid(9, 9, 0, 1, 5);
  Grid b = testutil::random_grid(9, 9, 0, 1, 6);
  const Mask m = all_valid_mask(9, 9);
  const SsimResult rab = ssim_map(a, b, m, kCfg);
  const SsimResult rba = ssim_map(b, a, m, kCfg);
  CHECK((rab.map - rba.map).abs().maxCoeff() < 1e-12);
}

TEST_CASE("ssim values stay within [-1, 1]") {
  for (uint64_t s = 0; s < 8; ++s) {
    Grid a = testutil::random_grid(12, 12, 0, 1, 100 + s);
    Grid b = testutil::random_grid(12, 12, 0, 1, 200 + s);
    const SsimResult r = ssim_map(a, b, all_valid_mask(12, 12), kCfg);
    CHECK(r.map.maxCoeff() <= 1.0 + 1e-12);
    CHECK(r.map.minCoeff() >= -1.0 - 1e-12);
  }
}

TEST_CASE("shape mismatch raises a domain error") {
  CHECK_THROWS_AS(
      ssim_map(Grid::Zero(4, 4), Grid::Zero(4, 5), all_valid_mask(4, 4), kCfg),
      DomainError);
}

TEST_CASE("gradient of the ssim mean matches finite differences") {
  const Eigen::Index h = 9, w = 8;
  Grid a = testutil::random_grid(h, w, 0, 1, 11);
  Grid b = testutil::random_grid(h, w, 0, 1, 12);
  const Mask m = all_valid_mask(h, w);

  auto mean_of = [&](const Grid& aa) { return ssim_map(aa, b, m, kCfg).mean(); };
  const SsimResult fwd = ssim_map(a, b, m, kCfg);
  const Grid upstream = Grid::Constant(h, w, 1.0 / double(h * w));
  const Grid grad = ssim_backward(fwd, a, b, m, kCfg, SsimArg::A, upstream);

  for (Eigen::Index v = 0; v < h; v += 2)
    for (Eigen::Index u = 0; u < w; u += 3) {
      const double fd = testutil::fd_at_pixel(mean_of, a, v, u, 1e-6);
      CHECK(testutil::rel_err(grad(v, u), fd) < 1e-4);
    }
}

TEST_CASE("gradient with respect to the second argument uses the swap") {
  const Eigen::Index h = 7, w = 7;
  Grid a = testutil::random_grid(h, w, 0, 1, 13);
  Grid b = testutil::random_grid(h, w, 0, 1, 14);
  const Mask m = all_valid_mask(h, w);
  auto mean_of = [&](const Grid& bb) { return ssim_map(a, bb, m, kCfg).mean(); };
  const SsimResult fwd = ssim_map(a, b, m, kCfg);
  const Grid upstream = Grid::Constant(h, w, 1.0 / double(h * w));
  const Grid grad = ssim_backward(fwd, a, b, m, kCfg, SsimArg::B, upstream);
  for (Eigen::Index v = 1; v < h; v += 2)
    for (Eigen::Index u = 0; u < w; u += 2) {
      const double fd = testutil::fd_at_pixel(mean_of, b, v, u, 1e-6);
      CHECK(testutil::rel_err(grad(v, u), fd) < 1e-4);
    }
}

TEST_CASE("masked pixels are excluded and windows renormalize") {
  Grid a = testutil::random_grid(8, 8, 0, 1, 15);
  Grid b = a;
  // Plant garbage at a masked pixel; self-similarity must survive because no
  // window may read it.
  Mask m = all_valid_mask(8, 8);
  m(3, 3) = false;
  a(3, 3) = 1e6;
  b(3, 3) = -1e6;
  const SsimResult r = ssim_map(a, b, m, kCfg);
  for (Eigen::Index v = 0; v < 8; ++v)
    for (Eigen::Index u = 0; u < 8; ++u)
      if (m(v, u)) CHECK(r.map(v, u) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(r.valid(3, 3));

  // Gradient must vanish at masked pixels.
  const Grid upstream = Grid::Constant(8, 8, 1.0);
  const Grid g = ssim_backward(r, a, b, m, kCfg, SsimArg::A, upstream);
  CHECK(g(3, 3) == 0.0);
}

TEST_CASE("empty valid set raises an empty-domain error") {
  const Mask none = Mask::Constant(4, 4, false);
  const SsimResult r = ssim_map(Grid::Zero(4, 4), Grid::Zero(4, 4), none, kCfg);
  CHECK_THROWS_AS(r.mean(), EmptyDomainError);
}
