#pragma once

#include <array>
#include <string>
#include <vector>

#include "ngdr/geometry.h"
#include "ngdr/image.h"
#include "ngdr/refine.h"
#include "ngdr/scene.h"

namespace ngdr {

// Per-candidate features of the linear softmax policy, in order:
//   normal_similarity  n_i^T n_j
//   log_kappa          log(kappa_j / kappa_max)
//   relative_change    min(|d_prop - d_i| / d_i, clamp)
//   offset_distance    (|du| + |dv|) / (2 beta)
//   bias               1
inline constexpr int kNumFeatures = 5;
enum FeatureIndex {
  kNormalSimilarity = 0,
  kLogKappa = 1,
  kRelativeChange = 2,
  kOffsetDistance = 3,
  kBias = 4,
};
const std::array<std::string, kNumFeatures>& FeatureNames();

struct PolicyParams {
  std::array<double, kNumFeatures> theta{};

  bool operator==(const PolicyParams&) const = default;
};

struct FeatureOptions {
  double kappa_max = 100.0;
  double clamp = 1.0;
};

// Row-major [pixel][stencil entry][feature]. Entries of invalid candidates
// are zero (they are masked before the softmax).
std::vector<double> PolicyFeatures(const DepthMap& depth,
                                   const NormalMap& normals,
                                   const Stencil& stencil,
                                   const CandidateField& cands,
                                   const FeatureOptions& opts);

// Softmax of theta^T features over the valid candidates of each pixel.
WeightField LearnedWeights(const PolicyParams& params,
                           const std::vector<double>& features,
                           const CandidateField& cands);

class LearnedPolicy : public WeightPolicy {
 public:
  explicit LearnedPolicy(PolicyParams params, FeatureOptions opts = {})
      : params_(params), opts_(opts) {}
  WeightField Weights(const PolicyInput& in) const override;
  std::string name() const override { return "learned"; }

 private:
  PolicyParams params_;
  FeatureOptions opts_;
};

// sum_{t=0..n_iter} gamma^(n_iter - t) * mean|gt - iterates[t]|.
// Throws DomainError unless iterates.size() == n_iter + 1.
double SequenceLoss(const std::vector<DepthMap>& iterates, const DepthMap& gt,
                    double gamma, int n_iter);

// A refinement problem with known answer. Refinement runs on (intr, d0,
// normals) against gt; with stride > 1 the full-resolution target is kept
// for TrainConfig::upsample_loss.
struct TrainingSample {
  CameraIntrinsics intr;
  DepthMap d0;
  NormalMap normals;
  DepthMap gt;
  int stride = 1;
  CameraIntrinsics intr_full;
  DepthMap gt_full;
};

// Renders, corrupts and synthesizes confidence for a scene. With stride > 1
// the inputs and gt are downsampled with DownsampleDepth/DownsampleNormals.
TrainingSample MakeTrainingSample(const SceneSpec& spec, int stride = 1);

struct TrainConfig {
  double gamma = 0.8;
  int n_iter_train = 3;
  double learning_rate = 1.0;
  int epochs = 50;
  uint64_t seed = 0;
  int beta = 2;
  // Stop gradients at d_t between rounds (only the weights' direct effect on
  // d_{t+1} is differentiated).
  bool truncate = false;
  // With stride > 1, measure the loss after normal-guided upsampling against
  // the full-resolution target instead of on the coarse grid.
  bool upsample_loss = false;
  // Temperature of the fixed similarity up-weights used by upsample_loss.
  double up_temperature = 0.1;
  FeatureOptions features;

  void Validate() const;
};

struct LossGradient {
  double loss = 0.0;
  std::array<double, kNumFeatures> grad{};
};

// Sequence loss of one sample under the unrolled refinement, with its exact
// gradient w.r.t. theta.
LossGradient SampleLossGradient(const PolicyParams& params,
                                const TrainingSample& sample,
                                const TrainConfig& config);

// Mean over samples, summed in sample order.
LossGradient BatchLossGradient(const PolicyParams& params,
                               const std::vector<TrainingSample>& samples,
                               const TrainConfig& config);

// Final-iterate mean |gt - d| after n_iter refinement rounds with the
// learned policy, on the same grid the training loss uses.
double FinalIterateL1(const PolicyParams& params, const TrainingSample& sample,
                      int n_iter, const TrainConfig& config);

struct TrainResult {
  PolicyParams params;
  std::vector<double> loss_log;  // loss at the start of each epoch
};

inline constexpr double kDivergenceLoss = 1e6;

// Plain gradient descent on the batch loss. Throws DivergenceError once the
// loss exceeds kDivergenceLoss or stops being finite.
TrainResult Train(const std::vector<TrainingSample>& samples,
                  const TrainConfig& config, PolicyParams init = {});
TrainResult Train(const std::vector<SceneSpec>& scenes,
                  const TrainConfig& config, int stride = 1);

}  // namespace ngdr
