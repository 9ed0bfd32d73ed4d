#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ngdr/geometry.h"
#include "ngdr/image.h"
#include "ngdr/io.h"
#include "ngdr/refine.h"
#include "ngdr/upsample.h"

namespace ngdr {

// File names inside a scene directory written by `ngdr scene`.
namespace files {
inline constexpr char kIntrinsics[] = "intrinsics.json";
inline constexpr char kScene[] = "scene.json";
inline constexpr char kDepthGt[] = "depth_gt.pfm";
inline constexpr char kNormalsGt[] = "normals_gt.pfm";
inline constexpr char kDepthInit[] = "depth_init.pfm";
inline constexpr char kNormals[] = "normals.pfm";
inline constexpr char kKappa[] = "kappa.pfm";
inline constexpr char kLabels[] = "labels.pgm";
inline constexpr char kAnchors[] = "anchors.csv";
}  // namespace files

enum class PolicyKind { kOracle, kSimilarity, kLearned, kUniform };
PolicyKind PolicyKindFromString(const std::string& s);

struct RunConfig {
  std::string input_dir;
  std::string output_dir;
  std::string depth_path;    // overrides <input>/depth_init.pfm
  std::string anchors_path;  // anchor CSV; empty = none
  std::string params_path;   // learned policy coefficients
  PolicyKind policy = PolicyKind::kSimilarity;
  int beta = 2;
  int stride = 1;
  int n_iter = 20;
  bool scale_match = false;
  UpsampleMode upsample = UpsampleMode::kNormalGuided;
  double temperature = 0.1;
  bool kappa_gate = false;
  uint64_t seed = 0;
};

// Everything loaded from a scene directory.
struct SceneInputs {
  CameraIntrinsics intr;
  DepthMap depth;
  NormalMap normals;
  std::optional<DepthMap> gt_depth;
  std::optional<Image<Vec3>> gt_normals;
  std::optional<LabelMap> labels;
  std::vector<int> planar_ids;
};

SceneInputs LoadSceneInputs(const std::string& dir,
                            const std::string& depth_override = "");

struct PipelineResult {
  DepthMap depth;  // full resolution
  double scale = 1.0;
  std::vector<IterationSummary> trace;  // empty without ground truth
};

// Optional scale match, refinement at the configured stride, upsampling
// back to full resolution, anchors re-imposed at full resolution.
PipelineResult RunPipeline(const SceneInputs& in, const RunConfig& config,
                           const AnchorSet& anchors);

// Refines once at config.stride (>= 2) and upsamples that coarse result
// with nearest, bilinear and normal-guided upsampling, in that order.
std::vector<std::pair<UpsampleMode, DepthMap>> AblateUpsampling(
    const SceneInputs& in, const RunConfig& config);

MetricsReport Evaluate(const SceneInputs& in, const DepthMap& pred);

// Subcommand entry points; return the process exit status.
int RunCli(int argc, char** argv);

}  // namespace ngdr
