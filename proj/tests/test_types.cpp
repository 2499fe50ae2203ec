#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>

#include "testutil.hpp"
#include "varidepth/types.hpp"

using namespace varidepth;

TEST_CASE("all-constant image validates") {
  Image img(4, 4, 1, 0.5);
  CHECK(validate(img).ok());
}

TEST_CASE("image constructor rejects bad channel counts and shapes") {
  CHECK_THROWS_AS(Image(4, 4, 2), DomainError);
  CHECK_THROWS_AS(Image(0, 4, 1), DomainError);
  std::vector<Grid> planes{Grid::Zero(3, 4), Grid::Zero(4, 4), Grid::Zero(4, 4)};
  CHECK_THROWS_AS(Image(4, 4, std::move(planes)), DomainError);
}

TEST_CASE("image validation flags out-of-range and non-finite pixels") {
  Image img(3, 3, 1, 0.5);
  img.planes[0](1, 2) = 1.5;
  auto r = validate(img);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations[0].u == 2);
  CHECK(r.violations[0].v == 1);

  img.planes[0](1, 2) = std::nan("");
  CHECK_FALSE(validate(img).ok());
}

TEST_CASE("depth map with negative valid pixel reports non-positive depth") {
  DepthMap d(4, 4);
  d.data.setConstant(2.0);
  d.valid.setConstant(true);
  CHECK(validate(d).ok());

  d.data(2, 1) = -1.0;
  auto r = validate(d);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations[0].what == "non-positive depth");
  CHECK(r.violations[0].u == 1);
  CHECK(r.violations[0].v == 2);

  // Invalid pixels are exempt.
  d.valid(2, 1) = false;
  CHECK(validate(d).ok());
}

TEST_CASE("depth map constructor rejects mismatched mask") {
  CHECK_THROWS_AS(DepthMap(Grid::Zero(4, 4), Mask::Constant(3, 4, true)), DomainError);
}

TEST_CASE("scaled identity is not a rotation") {
  RigidTransform T;
  T.rotation = 2.0 * Mat3::Identity();
  auto r = validate(T);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations[0].what == "rotation not orthonormal");
}

TEST_CASE("rigid transform inverse composes to identity") {
  RigidTransform T;
  T.rotation = Eigen::AngleAxisd(0.7, Vec3(1, 2, -1).normalized()).toRotationMatrix();
  T.translation = {0.3, -1.0, 2.0};
  const RigidTransform id = T * T.inverse();
  CHECK((id.rotation - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(id.translation.norm() < 1e-12);
}

TEST_CASE("gradient map keeps magnitude consistent") {
  Grid gu = testutil::random_grid(5, 5, -2, 2, 11);
  Grid gv = testutil::random_grid(5, 5, -2, 2, 12);
  GradientMap g(gu, gv);
  CHECK(validate(g).ok());
  g.magnitude(2, 2) += 1e-6;
  CHECK_FALSE(validate(g).ok());
}

TEST_CASE("boundary map hard values follow the soft sign") {
  Grid soft = testutil::random_grid(6, 6, -0.99, 0.99, 13);
  BoundaryMap b(soft);
  CHECK(validate(b).ok());
  for (Eigen::Index v = 0; v < 6; ++v)
    for (Eigen::Index u = 0; u < 6; ++u)
      CHECK(b.hard(v, u) == (b.soft(v, u) > 0.0 ? 1.0 : 0.0));
}

TEST_CASE("relative depth only requires finiteness") {
  RelativeDepthMap rel(Grid::Constant(3, 3, -2.5)); // negative is fine pre-inversion
  CHECK(validate(rel).ok());
  rel.data(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(validate(rel).ok());
}

TEST_CASE("intrinsics require positive focal lengths") {
  CHECK_THROWS_AS(CameraIntrinsics(0.0, 1.0, 0.0, 0.0), DomainError);
  CHECK(validate(CameraIntrinsics(300, 300, 128, 128)).ok());
}
