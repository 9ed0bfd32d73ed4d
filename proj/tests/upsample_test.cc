#include "ngdr/upsample.h"

#include <gtest/gtest.h>

#include "ngdr/refine.h"
#include "oracles.h"
#include "test_scenes.h"

namespace ngdr {
namespace {

TEST(UpsampleNearestTest, ReplicatesCells) {
  DepthMap c(2, 2);
  c.data() = {1, 2, 3, 4};
  const DepthMap f = UpsampleNearest(c, 3);
  ASSERT_EQ(f.width(), 6);
  for (int v = 0; v < 6; ++v)
    for (int u = 0; u < 6; ++u) EXPECT_EQ(f(u, v), c(u / 3, v / 3));
}

TEST(UpsampleBilinearTest, ReproducesAffineFieldsInTheInterior) {
  const int s = 4;
  DepthMap c(5, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 5; ++x) c(x, y) = 2.0 + 0.3 * x - 0.1 * y;
  const DepthMap f = UpsampleBilinear(c, s);
  for (int v = 0; v < 16; ++v) {
    for (int u = 0; u < 20; ++u) {
      const double x = std::clamp((u + 0.5) / s - 0.5, 0.0, 4.0);
      const double y = std::clamp((v + 0.5) / s - 0.5, 0.0, 3.0);
      EXPECT_NEAR(f(u, v), 2.0 + 0.3 * x - 0.1 * y, 1e-12);
    }
  }
}

TEST(UpCandidatesTest, ValidCandidatesHitThePlane) {
  const SceneSpec spec = testing::SlantedPlane(32);
  const GroundTruth gt = Render(spec);
  const Primitive& p = spec.primitives[0];
  for (int s : {2, 4, 8}) {
    const CameraIntrinsics cc = CoarseIntrinsics(spec.intrinsics, s);
    const DepthMap dc = DownsampleDepth(spec.intrinsics, gt.depth, gt.normals, s);
    const NormalMap nc = DownsampleNormals(gt.normals, s);
    const CandidateField c = UpCandidates(spec.intrinsics, cc, dc, nc, s);
    ASSERT_EQ(c.K, kUpsampleK);
    ASSERT_EQ(c.width, 32);
    for (int v = 0; v < 32; ++v) {
      for (int u = 0; u < 32; ++u) {
        const int i = v * 32 + u;
        const double want =
            oracle::RayPlaneDepth(spec.intrinsics, u, v, p.normal, p.point);
        EXPECT_TRUE(c.is_valid(i, kContainingCell));
        for (int k = 0; k < c.K; ++k) {
          if (!c.is_valid(i, k)) continue;
          EXPECT_LE(std::abs(c.value(i, k) - want) / want, 1e-12);
        }
      }
    }
  }
}

TEST(UpCandidatesTest, StrideOneContainingCellIsIdentity) {
  const SceneSpec spec = testing::ThreePlaneRoom(8);
  const GroundTruth gt = Render(spec);
  const CandidateField c =
      UpCandidates(spec.intrinsics, spec.intrinsics, gt.depth, gt.normals, 1);
  for (int i = 0; i < 64; ++i) {
    EXPECT_EQ(c.value(i, kContainingCell), gt.depth[i]);
  }
}

TEST(UpSimilarityWeightsTest, AreDistributionsFavoringAlignedNormals) {
  const SceneSpec spec = testing::ThreePlaneRoom(32);
  const GroundTruth gt = Render(spec);
  const int s = 4;
  const CameraIntrinsics cc = CoarseIntrinsics(spec.intrinsics, s);
  const DepthMap dc = DownsampleDepth(spec.intrinsics, gt.depth, gt.normals, s);
  const NormalMap nc = DownsampleNormals(gt.normals, s);
  const CandidateField c = UpCandidates(spec.intrinsics, cc, dc, nc, s);
  const WeightField w = UpSimilarityWeights(c, nc, s, &gt.normals, 0.05);
  EXPECT_NO_THROW(w.Validate());
  const WeightField w0 = UpSimilarityWeights(c, nc, s, nullptr, 0.05);
  EXPECT_NO_THROW(w0.Validate());
}

TEST(NormalGuidedUpsampleTest, OracleWeightsAreExactOnAPlane) {
  const SceneSpec spec = testing::SlantedPlane(64);
  const GroundTruth gt = Render(spec);
  const int s = 8;
  const CameraIntrinsics cc = CoarseIntrinsics(spec.intrinsics, s);
  const DepthMap dc = DownsampleDepth(spec.intrinsics, gt.depth, gt.normals, s);
  const NormalMap nc = DownsampleNormals(gt.normals, s);
  const CandidateField c = UpCandidates(spec.intrinsics, cc, dc, nc, s);
  const DepthMap f = UpStep(c, OracleWeights(c, gt.depth, kContainingCell));
  const DepthMap g = UpStep(c, UpSimilarityWeights(c, nc, s, &gt.normals, 0.1));
  for (int i = 0; i < f.size(); ++i) {
    EXPECT_LE(std::abs(f[i] - gt.depth[i]) / gt.depth[i], 1e-12);
    EXPECT_LE(std::abs(g[i] - gt.depth[i]) / gt.depth[i], 1e-12);
  }
}

TEST(UpsampleTest, FrontoParallelMethodsTie) {
  const SceneSpec spec = testing::FrontoParallel(32, 2.0);
  const GroundTruth gt = Render(spec);
  const int s = 8;
  const CameraIntrinsics cc = CoarseIntrinsics(spec.intrinsics, s);
  const DepthMap dc = DownsampleDepth(spec.intrinsics, gt.depth, gt.normals, s);
  const NormalMap nc = DownsampleNormals(gt.normals, s);
  const CandidateField c = UpCandidates(spec.intrinsics, cc, dc, nc, s);
  const DepthMap a = UpsampleNearest(dc, s);
  const DepthMap b = UpsampleBilinear(dc, s);
  const DepthMap g = UpStep(c, UpSimilarityWeights(c, nc, s, nullptr, 0.1));
  for (int i = 0; i < a.size(); ++i) {
    EXPECT_DOUBLE_EQ(a[i], 2.0);
    EXPECT_DOUBLE_EQ(b[i], 2.0);
    EXPECT_DOUBLE_EQ(g[i], 2.0);
  }
}

TEST(UpsampleModeTest, StringRoundTrip) {
  for (auto m : {UpsampleMode::kNearest, UpsampleMode::kBilinear,
                 UpsampleMode::kNormalGuided}) {
    EXPECT_EQ(UpsampleModeFromString(ToString(m)), m);
  }
  EXPECT_THROW(UpsampleModeFromString("cubic"), ParseError);
}

}  // namespace
}  // namespace ngdr
