#include "ngdr/geometry.h"

#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "oracles.h"
#include "test_scenes.h"

namespace ngdr {
namespace {

using testing::Camera;

Vec3 RandomUnit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Vec3(g(rng), g(rng), g(rng)).normalized();
}

TEST(RayTest, PrincipalPointLooksDownOpticalAxis) {
  const CameraIntrinsics c = Camera(64, 48, 50);
  const Vec3 r = Ray(c, c.u0, c.v0);
  EXPECT_EQ(r, Vec3(0, 0, 1));
}

TEST(RayTest, BackprojectProjectsBack) {
  const CameraIntrinsics c = Camera(64, 48, 50);
  for (double d : {0.5, 1.0, 7.25}) {
    const Vec3 p = Backproject(c, 10.0, 33.0, d);
    EXPECT_DOUBLE_EQ(p.z(), d);
    EXPECT_NEAR(c.alpha_u * p.x() / p.z() + c.u0, 10.0, 1e-12);
    EXPECT_NEAR(c.alpha_v * p.y() / p.z() + c.v0, 33.0, 1e-12);
  }
  EXPECT_THROW(Backproject(c, 1, 1, 0.0), DomainError);
  EXPECT_THROW(Backproject(c, 1, 1, -1.0), DomainError);
}

TEST(IntrinsicsTest, ValidateRejectsBadCalibration) {
  CameraIntrinsics c = Camera(8, 8, 10);
  EXPECT_NO_THROW(c.Validate());
  c.alpha_u = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = Camera(8, 8, 10);
  c.height = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
}

TEST(PropagateTest, MatchesRayPlaneOracleOnRandomPlanes) {
  const CameraIntrinsics c = Camera(32, 32, 30);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pix(0, 31), depth(0.5, 10);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec3 n = RandomUnit(rng);
    const double su = pix(rng), sv = pix(rng), du = pix(rng), dv = pix(rng);
    const Vec3 p = Backproject(c, su, sv, depth(rng));
    const auto r = oracle::PixelRay(c, du, dv);
    const double denom = n.x() * r.x + n.y() * r.y + n.z() * r.z;
    const auto rs = oracle::PixelRay(c, su, sv);
    const double snum = n.x() * rs.x + n.y() * rs.y + n.z() * rs.z;
    if (std::abs(denom) < 0.05 || std::abs(snum) < 0.05) continue;
    const double expected = oracle::RayPlaneDepth(c, du, dv, n, p);
    const auto got = PropagateDepth(c, su, sv, n, p.z(), du, dv);
    if (expected <= 0) {
      EXPECT_FALSE(got.has_value());
      continue;
    }
    ASSERT_TRUE(got.has_value());
    EXPECT_LE(std::abs(*got - expected) / expected, 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 500);
}

TEST(PropagateTest, SelfPropagationIsExact) {
  const CameraIntrinsics c = Camera(16, 16, 12);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const Vec3 n = RandomUnit(rng);
    const double d = 0.1 + i * 0.37;
    const auto got = PropagateDepth(c, 3, 11, n, d, 3, 11);
    if (!got) continue;
    EXPECT_EQ(*got, d);
  }
}

TEST(PropagateTest, InvariantUnderNormalFlip) {
  const CameraIntrinsics c = Camera(16, 16, 12);
  std::mt19937_64 rng(10);
  for (int i = 0; i < 500; ++i) {
    const Vec3 n = RandomUnit(rng);
    const auto a = PropagateDepth(c, 2, 5, n, 3.0, 7, 9);
    const auto b = PropagateDepth(c, 2, 5, -n, 3.0, 7, 9);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) EXPECT_EQ(*a, *b);
  }
}

TEST(PropagateTest, DestinationRayInPlaneIsDegenerate) {
  const CameraIntrinsics c = Camera(16, 16, 12);
  // Plane through the camera center containing the destination ray.
  const Vec3 rd = Ray(c, 10, 4);
  const Vec3 n = rd.cross(Vec3(0, 1, 0)).normalized();
  EXPECT_FALSE(PropagateDepth(c, 3, 3, n, 2.0, 10, 4).has_value());
  EXPECT_FALSE(PropagationRatio(c, 3, 3, n, 10, 4).has_value());
}

TEST(PropagateTest, RejectsBadInputs) {
  const CameraIntrinsics c = Camera(16, 16, 12);
  EXPECT_THROW(PropagateDepth(c, 1, 1, Vec3(0, 0, 2), 1.0, 2, 2), DomainError);
  EXPECT_THROW(PropagateDepth(c, 1, 1, Vec3(0, 0, -1), 0.0, 2, 2),
               DomainError);
}

TEST(PropagateTest, FrontoParallelPlaneKeepsDepth) {
  const CameraIntrinsics c = Camera(16, 16, 12);
  for (int u = 0; u < 16; u += 3) {
    const auto d = PropagateDepth(c, 8, 8, Vec3(0, 0, -1), 2.5, u, 15 - u);
    ASSERT_TRUE(d.has_value());
    EXPECT_DOUBLE_EQ(*d, 2.5);
  }
}

TEST(PlaneRayDepthTest, Statuses) {
  const Vec3 n(0, 0, -1), p(0, 0, 3);
  const PlaneHit hit = PlaneRayDepth(n, p, Vec3(0.1, 0.2, 1));
  EXPECT_TRUE(hit.ok());
  EXPECT_DOUBLE_EQ(hit.depth, 3.0);
  EXPECT_EQ(PlaneRayDepth(n, p, Vec3(1, 0, 0)).status,
            PlaneHitStatus::kParallel);
  EXPECT_EQ(PlaneRayDepth(n, Vec3(0, 0, -3), Vec3(0, 0, 1)).status,
            PlaneHitStatus::kBehindCamera);
}

TEST(CoarseIntrinsicsTest, StrideOneIsIdentity) {
  const CameraIntrinsics c = Camera(64, 32, 40);
  EXPECT_EQ(CoarseIntrinsics(c, 1), c);
}

TEST(CoarseIntrinsicsTest, CellCenterRaysAgree) {
  CameraIntrinsics c = Camera(64, 32, 40);
  c.u0 = 30.2;
  c.v0 = 17.9;
  for (int s : {2, 4, 8}) {
    const CameraIntrinsics cc = CoarseIntrinsics(c, s);
    EXPECT_EQ(cc.width, 64 / s);
    EXPECT_EQ(cc.height, 32 / s);
    for (int y = 0; y < cc.height; ++y) {
      for (int x = 0; x < cc.width; ++x) {
        const Vec3 a = Ray(cc, x, y);
        const Vec3 b = Ray(c, CoarseCellCenter(x, s), CoarseCellCenter(y, s));
        EXPECT_NEAR((a - b).norm(), 0.0, 1e-14);
      }
    }
  }
}

TEST(CoarseIntrinsicsTest, RejectsNonDividingStride) {
  const CameraIntrinsics c = Camera(30, 30, 20);
  EXPECT_THROW(CoarseIntrinsics(c, 4), ConfigError);
  EXPECT_THROW(CoarseIntrinsics(c, 0), ConfigError);
}

}  // namespace
}  // namespace ngdr
