#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ngdr/geometry.h"
#include "ngdr/image.h"
#include "ngdr/scene.h"

namespace ngdr {

// Square propagation neighborhood of radius beta. Offsets are (du, dv),
// ordered row-major: dv outer, du inner, both from -beta to beta.
struct Stencil {
  int beta = 2;
  std::vector<std::pair<int, int>> offsets;

  static Stencil Square(int beta);
  int size() const { return static_cast<int>(offsets.size()); }
  // Index of offset (0, 0).
  int center() const { return size() / 2; }
};

// Per-pixel candidate depths over a stencil. Every candidate is linear in
// one depth of the input map: value = slope * depth[source]. Invalid
// entries (out of bounds or degenerate propagation) hold the pixel's own
// depth (source = pixel, slope = 1) and are masked by weight policies.
struct CandidateField {
  int width = 0;
  int height = 0;
  int K = 0;
  std::vector<double> values;
  std::vector<double> slopes;
  std::vector<int> sources;
  std::vector<uint8_t> valid;

  int pixels() const { return width * height; }
  double value(int i, int k) const { return values[i * K + k]; }
  bool is_valid(int i, int k) const { return valid[i * K + k] != 0; }
};

// Propagates every stencil neighbor's depth along its tangent plane to each
// pixel. Throws DomainError when depth and normals differ in size.
CandidateField Candidates(const CameraIntrinsics& intr, const DepthMap& depth,
                          const NormalMap& normals, const Stencil& stencil);

// Per-pixel distributions over K stencil entries.
struct WeightField {
  int width = 0;
  int height = 0;
  int K = 0;
  std::vector<double> weights;

  WeightField() = default;
  WeightField(int w, int h, int k)
      : width(w), height(h), K(k), weights(static_cast<size_t>(w) * h * k) {}
  double& at(int i, int k) { return weights[i * K + k]; }
  double at(int i, int k) const { return weights[i * K + k]; }

  inline static constexpr double kSumTolerance = 1e-6;
  // Throws ContractViolation on a negative, non-finite or non-normalized
  // per-pixel vector.
  void Validate() const;
};

// d_{t+1}(i) = sum_k w_k(i) cand_k(i). Throws ContractViolation on invalid
// weights and DomainError on shape mismatch.
DepthMap UpdateStep(const CandidateField& cands, const WeightField& weights);

// Softmax over logits with invalid candidates masked out.
WeightField MaskedSoftmax(const CandidateField& cands,
                          const std::vector<double>& logits);

struct PolicyInput {
  const CameraIntrinsics& intr;
  const DepthMap& depth;
  const NormalMap& normals;
  const Stencil& stencil;
  const CandidateField& candidates;
  int iteration = 0;
};

class WeightPolicy {
 public:
  virtual ~WeightPolicy() = default;
  virtual WeightField Weights(const PolicyInput& in) const = 0;
  virtual std::string name() const = 0;
};

// One-hot on the candidate closest to gt. Candidates within a relative
// 1e-12 of the best count as tied; ties prefer the self entry, then the
// smallest stencil index.
WeightField OracleWeights(const CandidateField& cands, const DepthMap& gt,
                          int self_index);

struct SimilarityOptions {
  double temperature = 0.1;
  bool kappa_gate = false;
  double kappa_max = 100.0;
};

// logit_k(i) = n_i^T n_j / temperature (+ log(kappa_j / kappa_max) when
// gated); softmax over valid candidates.
WeightField SimilarityWeights(const NormalMap& normals, const Stencil& stencil,
                              const CandidateField& cands,
                              const SimilarityOptions& opts);

// Equal weight on every valid candidate.
WeightField UniformWeights(const CandidateField& cands);

class OraclePolicy : public WeightPolicy {
 public:
  explicit OraclePolicy(DepthMap gt) : gt_(std::move(gt)) {}
  WeightField Weights(const PolicyInput& in) const override;
  std::string name() const override { return "oracle"; }

 private:
  DepthMap gt_;
};

class SimilarityPolicy : public WeightPolicy {
 public:
  explicit SimilarityPolicy(SimilarityOptions opts) : opts_(opts) {}
  WeightField Weights(const PolicyInput& in) const override;
  std::string name() const override { return "similarity"; }

 private:
  SimilarityOptions opts_;
};

class UniformPolicy : public WeightPolicy {
 public:
  WeightField Weights(const PolicyInput& in) const override;
  std::string name() const override { return "uniform"; }
};

// Throws DomainError on out-of-bounds, duplicate or nonpositive anchors.
void ValidateAnchors(const AnchorSet& anchors, int width, int height);
void ImposeAnchors(const AnchorSet& anchors, DepthMap* depth);

struct IterationSummary {
  int iteration = 0;
  double rmse = 0.0;
  double abs_rel = 0.0;
  double mean_normal_error_deg = 0.0;
};

enum class TraceMode { kNone, kSnapshots, kSummaries };

struct RefineOptions {
  int n_iter = 20;
  int beta = 2;
  AnchorSet anchors;
  TraceMode trace = TraceMode::kNone;
  // Required for TraceMode::kSummaries.
  std::function<IterationSummary(int, const DepthMap&)> summarize;
};

// Holds n_iter + 1 entries (t = 0 included) of whichever kind was requested.
struct RefineTrace {
  int iterations = 0;
  std::vector<DepthMap> snapshots;
  std::vector<IterationSummary> summaries;
};

struct RefineResult {
  DepthMap depth;
  RefineTrace trace;
};

// Jacobi-style refinement: each round builds candidates from d_t only, asks
// the policy for weights and fuses. Anchors overwrite their pixels after
// initialization and after every round.
RefineResult Refine(const CameraIntrinsics& intr, const DepthMap& d0,
                    const NormalMap& normals, const WeightPolicy& policy,
                    const RefineOptions& opts);

struct ScaleMatchResult {
  DepthMap depth;
  double scale = 1.0;
};

// Least-squares scale s = sum(d0(a) d_a) / sum(d0(a)^2) over anchors,
// applied to the whole map. Throws DomainError on an empty anchor set.
ScaleMatchResult ScaleMatch(const DepthMap& d0, const AnchorSet& anchors);

// Coarse-grid inputs for refinement at stride s. Each block contributes the
// normal of its center pixel (s/2, s/2) and the minimum kappa in the block.
NormalMap DownsampleNormals(const NormalMap& normals, int s);

// Coarse depth: the block-center pixel's depth propagated along its own
// normal to the coarse cell's center ray (exact on planes). Falls back to the
// raw block-center depth when that propagation is degenerate.
DepthMap DownsampleDepth(const CameraIntrinsics& intr, const DepthMap& depth,
                         const NormalMap& normals, int s);

}  // namespace ngdr
