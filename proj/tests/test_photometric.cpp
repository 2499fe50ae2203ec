#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"
#include "varidepth/photometric.hpp"

using namespace varidepth;

namespace {

PhotometricConfig default_cfg() { return PhotometricConfig{}; }

} // namespace

TEST_CASE("identical images give zero loss") {
  Image a = testutil::random_image(9, 9, 3, 31);
  const auto r = pe(a, a, all_valid_mask(9, 9), default_cfg());
  CHECK(r.mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.per_pixel.abs().maxCoeff() < 1e-12);
}

TEST_CASE("constant zero vs constant one evaluates the closed form") {
  Image a(6, 6, 1, 0.0);
  Image b(6, 6, 1, 1.0);
  const PhotometricConfig cfg = default_cfg(); // kappa 0.85, c1 = 1e-4
  const auto r = pe(a, b, all_valid_mask(6, 6), cfg);
  const double ssim = cfg.ssim.c1 / (1.0 + cfg.ssim.c1);
  const double expect = cfg.kappa * (1.0 - ssim) / 2.0 + (1.0 - cfg.kappa) * 1.0;
  CHECK(r.mean == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(0.574958).epsilon(1e-5));
}

TEST_CASE("kappa zero reduces pe to the mean absolute difference") {
  Image a = testutil::random_image(8, 8, 3, 41);
  Image b = testutil::random_image(8, 8, 3, 42);
  PhotometricConfig cfg = default_cfg();
  cfg.kappa = 0.0;
  const auto r = pe(a, b, all_valid_mask(8, 8), cfg);
  double l1 = 0.0;
  for (int c = 0; c < 3; ++c) l1 += (a.planes[c] - b.planes[c]).abs().sum();
  l1 /= 3.0 * 64.0;
  CHECK(r.mean == doctest::Approx(l1).epsilon(1e-12));
}

TEST_CASE("pe is non-negative on random inputs") {
  for (uint64_t s = 0; s < 6; ++s) {
    Image a = testutil::random_image(10, 10, 3, 500 + s);
    Image b = testutil::random_image(10, 10, 3, 600 + s);
    const auto r = pe(a, b, all_valid_mask(10, 10), default_cfg());
    CHECK(r.mean >= 0.0);
    CHECK(r.per_pixel.minCoeff() >= -1e-15);
  }
}

TEST_CASE("constant offsets leave the L1 term exactly invariant") {
  const double delta = 0.1;
  Image a = testutil::random_image(8, 8, 1, 51);
  Image b = testutil::random_image(8, 8, 1, 52);
  a.planes[0] = a.planes[0] * 0.8;  // leave headroom for the offset
  b.planes[0] = b.planes[0] * 0.8;
  Image a2 = a, b2 = b;
  a2.planes[0] += delta;
  b2.planes[0] += delta;

  PhotometricConfig l1_only = default_cfg();
  l1_only.kappa = 0.0;
  const Mask m = all_valid_mask(8, 8);
  const double base = pe(a, b, m, l1_only).mean;
  const double shifted = pe(a2, b2, m, l1_only).mean;
  CHECK(std::abs(base - shifted) < 1e-12);

  // The SSIM term is only offset-invariant up to its stabilizing constants;
  // check it stays close rather than exactly equal.
  const double full_base = pe(a, b, m, default_cfg()).mean;
  const double full_shifted = pe(a2, b2, m, default_cfg()).mean;
  CHECK(std::abs(full_base - full_shifted) < 0.05);
}

TEST_CASE("gradient matches finite differences away from the L1 kink") {
  const int h = 8, w = 8;
  // Keep |target - predicted| > 1e-3 everywhere so the L1 sign is stable.
  Image target(w, h, 3, 0.0);
  Image predicted(w, h, 3, 0.0);
  for (int c = 0; c < 3; ++c) {
    target.planes[c] = testutil::random_grid(h, w, 0.05, 0.40, 700 + uint64_t(c));
    predicted.planes[c] = testutil::random_grid(h, w, 0.60, 0.95, 800 + uint64_t(c));
  }
  const Mask m = all_valid_mask(h, w);
  const PhotometricConfig cfg = default_cfg();
  const auto r = pe(target, predicted, m, cfg);

  for (int c = 0; c < 3; ++c) {
    auto mean_of = [&](const Grid& plane) {
      Image p2 = predicted;
      p2.planes[c] = plane;
      return pe_forward(target, p2, m, cfg).mean;
    };
    for (int v = 0; v < h; v += 3)
      for (int u = 1; u < w; u += 3) {
        const double fd = testutil::fd_at_pixel(mean_of, predicted.planes[c], v, u, 1e-6);
        CHECK(testutil::rel_err(r.grad_predicted[c](v, u), fd) < 1e-4);
      }
  }
}

TEST_CASE("grayscale mode evaluates on luma and spreads the gradient") {
  Image target = testutil::random_image(7, 7, 3, 61);
  Image predicted = testutil::random_image(7, 7, 3, 62);
  PhotometricConfig cfg = default_cfg();
  cfg.grayscale = true;
  const Mask m = all_valid_mask(7, 7);
  const auto r = pe(target, predicted, m, cfg);

  // Only luma matters, so per-channel gradients are proportional.
  CHECK((r.grad_predicted[0] * 0.587 - r.grad_predicted[1] * 0.299).abs().maxCoeff() < 1e-12);

  auto mean_of = [&](const Grid& plane) {
    Image p2 = predicted;
    p2.planes[2] = plane;
    return pe_forward(target, p2, m, cfg).mean;
  };
  const double fd = testutil::fd_at_pixel(mean_of, predicted.planes[2], 3, 3, 1e-6);
  CHECK(testutil::rel_err(r.grad_predicted[2](3, 3), fd) < 1e-4);
}

TEST_CASE("shape mismatch raises a domain error") {
  Image a = testutil::random_image(6, 6, 1, 71);
  Image b = testutil::random_image(6, 7, 1, 72);
  CHECK_THROWS_AS(pe(a, b, all_valid_mask(6, 6), default_cfg()), DomainError);
}
