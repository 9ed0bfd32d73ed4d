#include "ngdr/scene.h"

#include <set>

#include <gtest/gtest.h>

#include "ngdr/parallel.h"
#include "oracles.h"
#include "test_scenes.h"

namespace ngdr {
namespace {

using testing::Camera;

TEST(RenderTest, FrontoParallelPlaneHasConstantDepth) {
  const GroundTruth gt = Render(testing::FrontoParallel(16, 2.5));
  for (int i = 0; i < gt.depth.size(); ++i) {
    EXPECT_DOUBLE_EQ(gt.depth[i], 2.5);
    EXPECT_EQ(gt.normals.normals[i], Vec3(0, 0, -1));
    EXPECT_EQ(gt.surface_id[i], 1);
  }
}

TEST(RenderTest, MatchesNearestRayPlaneOracle) {
  const SceneSpec spec = testing::ThreePlaneRoom(40);
  const GroundTruth gt = Render(spec);
  const CameraIntrinsics& c = spec.intrinsics;
  for (int v = 0; v < c.height; ++v) {
    for (int u = 0; u < c.width; ++u) {
      double best = 1e300;
      int id = -1;
      for (const Primitive& p : spec.primitives) {
        const double d = oracle::RayPlaneDepth(c, u, v, p.normal, p.point);
        if (d > 0 && d < best) {
          best = d;
          id = p.id;
        }
      }
      ASSERT_EQ(gt.surface_id(u, v), id) << u << "," << v;
      EXPECT_LE(std::abs(gt.depth(u, v) - best) / best, 1e-12);
    }
  }
}

TEST(RenderTest, NormalsFaceTheCamera) {
  SceneSpec spec = testing::ThreePlaneRoom(24);
  spec.primitives.push_back(Primitive::Sphere(9, Vec3(0.2, 0.1, 2.0), 0.5));
  const GroundTruth gt = Render(spec);
  std::set<int> ids;
  for (int v = 0; v < 24; ++v) {
    for (int u = 0; u < 24; ++u) {
      EXPECT_LT(gt.normals.normals(u, v).dot(Ray(spec.intrinsics, u, v)), 0.0);
      EXPECT_NEAR(gt.normals.normals(u, v).norm(), 1.0, 1e-12);
      ids.insert(gt.surface_id(u, v));
    }
  }
  EXPECT_TRUE(ids.count(9));
}

TEST(RenderTest, SphereFrontDepthOnAxis) {
  SceneSpec spec;
  spec.intrinsics = Camera(9, 9, 10);
  spec.primitives = {Primitive::Sphere(1, Vec3(0, 0, 5), 1.5),
                     Primitive::Plane(2, Vec3(0, 0, -1), Vec3(0, 0, 10))};
  const GroundTruth gt = Render(spec);
  EXPECT_NEAR(gt.depth(4, 4), 3.5, 1e-12);
  EXPECT_EQ(gt.surface_id(4, 4), 1);
  EXPECT_EQ(gt.surface_id(0, 0), 2);
  EXPECT_NEAR((gt.normals.normals(4, 4) - Vec3(0, 0, -1)).norm(), 0, 1e-12);
}

TEST(RenderTest, CoverageHoleNamesFirstPixel) {
  SceneSpec spec;
  spec.intrinsics = Camera(8, 8, 8);
  // Floor only: the top rows look above the horizon.
  spec.primitives = {Primitive::Plane(1, Vec3(0, -1, 0), Vec3(0, 1, 0))};
  try {
    Render(spec);
    FAIL() << "expected CoverageError";
  } catch (const CoverageError& e) {
    EXPECT_EQ(e.u(), 0);
    EXPECT_EQ(e.v(), 0);
    EXPECT_NE(std::string(e.what()).find("(0, 0)"), std::string::npos);
  }
}

TEST(RenderTest, WorkedExamples) {
  SceneSpec plane;
  plane.intrinsics.alpha_u = plane.intrinsics.alpha_v = 1.0;
  plane.intrinsics.width = 3;
  plane.intrinsics.height = 1;
  plane.primitives = {
      Primitive::Plane(1, Vec3(1, 0, 1).normalized(), Vec3(2, 0, 0))};
  EXPECT_NEAR(Render(plane).depth(1, 0), 1.0, 1e-15);

  SceneSpec sphere;
  sphere.intrinsics.alpha_u = sphere.intrinsics.alpha_v = 1.0;
  sphere.intrinsics.width = sphere.intrinsics.height = 1;
  sphere.primitives = {Primitive::Sphere(1, Vec3(0, 0, 4), 1.0)};
  const GroundTruth gt = Render(sphere);
  EXPECT_DOUBLE_EQ(gt.depth(0, 0), 3.0);
  EXPECT_EQ(gt.normals.normals(0, 0), Vec3(0, 0, -1));
}

TEST(CorruptTest, FullShrinkGivesMeanAndScaleExample) {
  const GroundTruth gt = Render(testing::ThreePlaneRoom(12));
  double mean = 0;
  for (double d : gt.depth.data()) mean += d;
  mean /= gt.depth.size();
  const auto r = Corrupt(gt.depth, {CorruptionMode::kShrinkToMean, 1.0, 0});
  for (double d : r.depth.data()) EXPECT_NEAR(d, mean, 1e-12);
  const auto s = Corrupt(DepthMap(3, 3, 2.0), {CorruptionMode::kScaleError, 0.1, 0});
  for (double d : s.depth.data()) EXPECT_NEAR(d, 2.2, 1e-15);
}

TEST(SynthConfidenceTest, SinglePrimitiveIsFullyConfident) {
  const GroundTruth gt = Render(testing::SlantedPlane(16));
  const NormalMap n = SynthConfidence(gt, ConfidenceSpec{});
  for (double k : n.kappa.data()) EXPECT_EQ(k, 100.0);
}

TEST(SampleAnchorsTest, EmptyAndExhaustive) {
  const GroundTruth gt = Render(testing::ThreePlaneRoom(6));
  EXPECT_TRUE(SampleAnchors(gt, 0, 1).empty());
  const AnchorSet all = SampleAnchors(gt, 36, 1);
  std::set<std::pair<int, int>> seen;
  for (const Anchor& a : all) seen.insert({a.u, a.v});
  EXPECT_EQ(seen.size(), 36u);
}

TEST(SceneSpecTest, ValidateRejectsBadPrimitives) {
  SceneSpec spec = testing::FrontoParallel(8);
  spec.primitives[0].normal = Vec3(0, 0, -2);
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec = testing::FrontoParallel(8);
  spec.primitives = {Primitive::Sphere(1, Vec3(0, 0, 3), 0.0)};
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec.primitives.clear();
  EXPECT_THROW(spec.Validate(), ConfigError);
}

TEST(CorruptTest, ZeroMagnitudeIsIdentity) {
  const GroundTruth gt = Render(testing::ThreePlaneRoom(16));
  for (auto mode : {CorruptionMode::kGaussian, CorruptionMode::kShrinkToMean,
                    CorruptionMode::kLowFrequencyBias,
                    CorruptionMode::kScaleError}) {
    const CorruptionResult r = Corrupt(gt.depth, {mode, 0.0, 3});
    EXPECT_EQ(r.depth, gt.depth);
    EXPECT_EQ(r.clamped, 0);
  }
}

TEST(CorruptTest, ShrinkToMeanAndScale) {
  const GroundTruth gt = Render(testing::ThreePlaneRoom(16));
  double mean = 0;
  for (double d : gt.depth.data()) mean += d;
  mean /= gt.depth.size();
  const auto shrink = Corrupt(gt.depth, {CorruptionMode::kShrinkToMean, 0.5, 0});
  const auto scale = Corrupt(gt.depth, {CorruptionMode::kScaleError, 0.2, 0});
  for (int i = 0; i < gt.depth.size(); ++i) {
    EXPECT_NEAR(shrink.depth[i], 0.5 * gt.depth[i] + 0.5 * mean, 1e-12);
    EXPECT_NEAR(scale.depth[i], 1.2 * gt.depth[i], 1e-12);
  }
}

TEST(CorruptTest, LowFrequencyBiasPeaksAtMagnitude) {
  const GroundTruth gt = Render(testing::FrontoParallel(32, 3.0));
  const auto r = Corrupt(gt.depth, {CorruptionMode::kLowFrequencyBias, 0.4, 8});
  double peak = 0;
  for (int i = 0; i < r.depth.size(); ++i) {
    peak = std::max(peak, std::abs(r.depth[i] - 3.0));
  }
  EXPECT_NEAR(peak, 0.4, 1e-12);
}

TEST(CorruptTest, GaussianIsSeededAndThreadIndependent) {
  const GroundTruth gt = Render(testing::ThreePlaneRoom(24));
  const CorruptionSpec spec{CorruptionMode::kGaussian, 0.05, 42};
  SetNumThreads(1);
  const auto a = Corrupt(gt.depth, spec);
  SetNumThreads(4);
  const auto b = Corrupt(gt.depth, spec);
  SetNumThreads(1);
  EXPECT_EQ(a.depth, b.depth);
  const auto c = Corrupt(gt.depth, {CorruptionMode::kGaussian, 0.05, 43});
  EXPECT_NE(a.depth, c.depth);
}

TEST(CorruptTest, ClampsAndCountsNonPositiveDepths) {
  DepthMap d(4, 1, 1.0);
  const auto r = Corrupt(d, {CorruptionMode::kScaleError, -0.0, 0});
  EXPECT_EQ(r.clamped, 0);
  const auto g = Corrupt(d, {CorruptionMode::kGaussian, 50.0, 1});
  int low = 0;
  for (double x : g.depth.data()) {
    EXPECT_GE(x, kMinCorruptedDepth);
    low += x == kMinCorruptedDepth;
  }
  EXPECT_EQ(low, g.clamped);
  EXPECT_THROW(Corrupt(d, {CorruptionMode::kGaussian, -1.0, 0}), DomainError);
}

TEST(SynthConfidenceTest, BoundaryBandMatchesBruteForceScan) {
  const SceneSpec spec = testing::ThreePlaneRoom(32);
  const GroundTruth gt = Render(spec);
  ConfidenceSpec cs;
  cs.kappa_max = 80;
  cs.kappa_min = 2;
  cs.boundary_width = 2;
  const NormalMap n = SynthConfidence(gt, cs);
  for (int v = 0; v < 32; ++v) {
    for (int u = 0; u < 32; ++u) {
      bool near = false;
      for (int y = v - 2; y <= v + 2; ++y)
        for (int x = u - 2; x <= u + 2; ++x)
          if (gt.surface_id.InBounds(x, y) &&
              gt.surface_id(x, y) != gt.surface_id(u, v))
            near = true;
      EXPECT_EQ(n.kappa(u, v), near ? 2.0 : 80.0) << u << "," << v;
      EXPECT_EQ(n.normals(u, v), gt.normals.normals(u, v));
    }
  }
}

TEST(SynthConfidenceTest, NoiseGrowsWhereConfidenceIsLow) {
  const GroundTruth gt = Render(testing::ThreePlaneRoom(48));
  ConfidenceSpec cs;
  cs.noise_deg = 1.0;
  cs.seed = 5;
  const NormalMap n = SynthConfidence(gt, cs);
  double hi_err = 0, lo_err = 0;
  int hi = 0, lo = 0;
  for (int i = 0; i < n.normals.size(); ++i) {
    EXPECT_NEAR(n.normals[i].norm(), 1.0, 1e-12);
    const double e =
        std::acos(std::min(1.0, n.normals[i].dot(gt.normals.normals[i])));
    if (n.kappa[i] == cs.kappa_max) {
      hi_err += e;
      ++hi;
    } else {
      lo_err += e;
      ++lo;
    }
  }
  ASSERT_GT(hi, 0);
  ASSERT_GT(lo, 0);
  EXPECT_GT(lo_err / lo, 3 * hi_err / hi);
}

TEST(SampleAnchorsTest, DistinctGroundTruthSamplesWithNestedPrefixes) {
  const GroundTruth gt = Render(testing::ThreePlaneRoom(20));
  const AnchorSet a = SampleAnchors(gt, 50, 9);
  const AnchorSet b = SampleAnchors(gt, 10, 9);
  ASSERT_EQ(a.size(), 50u);
  std::set<std::pair<int, int>> seen;
  for (const Anchor& x : a) {
    EXPECT_TRUE(seen.insert({x.u, x.v}).second);
    EXPECT_EQ(x.depth, gt.depth(x.u, x.v));
  }
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(a[i].u, b[i].u);
    EXPECT_EQ(a[i].v, b[i].v);
  }
  EXPECT_EQ(SampleAnchors(gt, 400, 1).size(), 400u);
  EXPECT_THROW(SampleAnchors(gt, 401, 1), DomainError);
  EXPECT_THROW(SampleAnchors(gt, -1, 1), DomainError);
}

TEST(StreamSeedTest, DistinctStreams) {
  std::set<uint64_t> seeds;
  for (uint64_t i = 0; i < 1000; ++i) seeds.insert(StreamSeed(7, i));
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_NE(StreamSeed(7, 0), StreamSeed(8, 0));
}

TEST(CorruptionModeTest, StringRoundTrip) {
  for (auto mode : {CorruptionMode::kGaussian, CorruptionMode::kShrinkToMean,
                    CorruptionMode::kLowFrequencyBias,
                    CorruptionMode::kScaleError}) {
    EXPECT_EQ(CorruptionModeFromString(ToString(mode)), mode);
  }
  EXPECT_THROW(CorruptionModeFromString("blur"), ParseError);
}

}  // namespace
}  // namespace ngdr
