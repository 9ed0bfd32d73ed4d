#include "ngdr/learn.h"

#include <cmath>
#include <limits>

#include "ngdr/parallel.h"
#include "ngdr/upsample.h"

namespace ngdr {

const std::array<std::string, kNumFeatures>& FeatureNames() {
  static const std::array<std::string, kNumFeatures> names = {
      "normal_similarity", "log_kappa", "relative_change", "offset_distance",
      "bias"};
  return names;
}

std::vector<double> PolicyFeatures(const DepthMap& depth,
                                   const NormalMap& normals,
                                   const Stencil& stencil,
                                   const CandidateField& cands,
                                   const FeatureOptions& opts) {
  const int K = cands.K;
  const int W = cands.width;
  std::vector<double> f(static_cast<size_t>(cands.pixels()) * K * kNumFeatures,
                        0.0);
  const double reach = stencil.beta > 0 ? 2.0 * stencil.beta : 1.0;
  ParallelFor(cands.pixels(), [&](int i) {
    const int u = i % W;
    const int v = i / W;
    const double di = depth[i];
    for (int k = 0; k < K; ++k) {
      if (!cands.is_valid(i, k)) continue;
      const auto [du, dv] = stencil.offsets[k];
      const int j = depth.Index(u + du, v + dv);
      double* row = &f[(static_cast<size_t>(i) * K + k) * kNumFeatures];
      row[kNormalSimilarity] = normals.normals[i].dot(normals.normals[j]);
      const double kappa =
          std::max(normals.kappa[j], 1e-12 * opts.kappa_max);
      row[kLogKappa] = std::log(kappa / opts.kappa_max);
      row[kRelativeChange] =
          std::min(std::abs(cands.value(i, k) - di) / di, opts.clamp);
      row[kOffsetDistance] = (std::abs(du) + std::abs(dv)) / reach;
      row[kBias] = 1.0;
    }
  });
  return f;
}

WeightField LearnedWeights(const PolicyParams& params,
                           const std::vector<double>& features,
                           const CandidateField& cands) {
  for (double x : params.theta) {
    if (!std::isfinite(x)) throw DomainError("policy parameters not finite");
  }
  const size_t n = static_cast<size_t>(cands.pixels()) * cands.K;
  std::vector<double> logits(n, 0.0);
  for (size_t e = 0; e < n; ++e) {
    const double* row = &features[e * kNumFeatures];
    double z = 0.0;
    for (int f = 0; f < kNumFeatures; ++f) z += params.theta[f] * row[f];
    logits[e] = z;
  }
  return MaskedSoftmax(cands, logits);
}

WeightField LearnedPolicy::Weights(const PolicyInput& in) const {
  const auto features =
      PolicyFeatures(in.depth, in.normals, in.stencil, in.candidates, opts_);
  return LearnedWeights(params_, features, in.candidates);
}

double SequenceLoss(const std::vector<DepthMap>& iterates, const DepthMap& gt,
                    double gamma, int n_iter) {
  if (n_iter < 0 || iterates.size() != static_cast<size_t>(n_iter) + 1) {
    throw DomainError("sequence loss needs n_iter + 1 iterates");
  }
  double loss = 0.0;
  for (int t = 0; t <= n_iter; ++t) {
    const DepthMap& d = iterates[t];
    if (!d.SameShape(gt)) throw DomainError("iterate shape mismatch");
    double l1 = 0.0;
    for (int i = 0; i < gt.size(); ++i) l1 += std::abs(gt[i] - d[i]);
    loss += std::pow(gamma, n_iter - t) * l1 / gt.size();
  }
  return loss;
}

TrainingSample MakeTrainingSample(const SceneSpec& spec, int stride) {
  const GroundTruth gt = Render(spec);
  const DepthMap d0 = Corrupt(gt.depth, spec.corruption).depth;
  const NormalMap normals = SynthConfidence(gt, spec.confidence);
  TrainingSample s;
  s.stride = stride;
  s.intr_full = spec.intrinsics;
  s.gt_full = gt.depth;
  if (stride == 1) {
    s.intr = spec.intrinsics;
    s.d0 = d0;
    s.normals = normals;
    s.gt = gt.depth;
  } else {
    s.intr = CoarseIntrinsics(spec.intrinsics, stride);
    s.d0 = DownsampleDepth(spec.intrinsics, d0, normals, stride);
    s.normals = DownsampleNormals(normals, stride);
    s.gt = DownsampleDepth(spec.intrinsics, gt.depth, gt.normals, stride);
  }
  return s;
}

void TrainConfig::Validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must be in (0,1)");
  if (n_iter_train < 0) throw ConfigError("n_iter_train must be >= 0");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be finite and >= 0");
  }
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (beta < 0) throw ConfigError("beta must be >= 0");
}

namespace {

double Sign(double x) { return (x > 0.0) - (x < 0.0); }

// Everything the backward pass needs from one refinement round.
struct Round {
  CandidateField cands;
  std::vector<double> features;
  WeightField weights;
};

// Maps coarse iterates to the grid the loss is measured on.
class LossGrid {
 public:
  LossGrid(const TrainingSample& s, const TrainConfig& config)
      : s_(s), lifted_(s.stride > 1 && config.upsample_loss) {
    if (lifted_) {
      up_cands_ = UpCandidates(s.intr_full, s.intr, s.d0, s.normals, s.stride);
      up_weights_ = UpSimilarityWeights(up_cands_, s.normals, s.stride,
                                        nullptr, config.up_temperature);
    }
  }

  const DepthMap& target() const {
    return lifted_ ? s_.gt_full : s_.gt;
  }

  DepthMap Lift(const DepthMap& d) const {
    if (!lifted_) return d;
    // Slopes and sources do not depend on depth; only values are refreshed.
    DepthMap out(up_cands_.width, up_cands_.height, 0.0);
    const int K = up_cands_.K;
    for (int p = 0; p < out.size(); ++p) {
      double acc = 0.0;
      for (int k = 0; k < K; ++k) {
        const size_t e = static_cast<size_t>(p) * K + k;
        acc += up_weights_.weights[e] * up_cands_.slopes[e] *
               d[up_cands_.sources[e]];
      }
      out[p] = acc;
    }
    return out;
  }

  // Adds coef * sign(lift(d) - target) / |target| pulled back to d's grid.
  void AccumulateL1Grad(const DepthMap& d, double coef,
                        std::vector<double>* grad) const {
    const DepthMap lifted = Lift(d);
    const DepthMap& gt = target();
    const double scale = coef / gt.size();
    if (!lifted_) {
      for (int i = 0; i < gt.size(); ++i) {
        (*grad)[i] += scale * Sign(lifted[i] - gt[i]);
      }
      return;
    }
    const int K = up_cands_.K;
    for (int p = 0; p < gt.size(); ++p) {
      const double g = scale * Sign(lifted[p] - gt[p]);
      if (g == 0.0) continue;
      for (int k = 0; k < K; ++k) {
        const size_t e = static_cast<size_t>(p) * K + k;
        (*grad)[up_cands_.sources[e]] +=
            g * up_weights_.weights[e] * up_cands_.slopes[e];
      }
    }
  }

 private:
  const TrainingSample& s_;
  const bool lifted_;
  CandidateField up_cands_;
  WeightField up_weights_;
};

}  // namespace

LossGradient SampleLossGradient(const PolicyParams& params,
                                const TrainingSample& sample,
                                const TrainConfig& config) {
  config.Validate();
  const int N = config.n_iter_train;
  const Stencil stencil = Stencil::Square(config.beta);
  const LossGrid grid(sample, config);

  std::vector<DepthMap> iterates{sample.d0};
  std::vector<Round> rounds;
  rounds.reserve(N);
  for (int t = 0; t < N; ++t) {
    const DepthMap& d = iterates.back();
    Round r;
    r.cands = Candidates(sample.intr, d, sample.normals, stencil);
    r.features =
        PolicyFeatures(d, sample.normals, stencil, r.cands, config.features);
    r.weights = LearnedWeights(params, r.features, r.cands);
    iterates.push_back(UpdateStep(r.cands, r.weights));
    rounds.push_back(std::move(r));
  }

  LossGradient out;
  std::vector<DepthMap> lifted;
  lifted.reserve(iterates.size());
  for (const auto& d : iterates) lifted.push_back(grid.Lift(d));
  out.loss = SequenceLoss(lifted, grid.target(), config.gamma, N);

  const int P = sample.d0.size();
  const int K = stencil.size();
  const double theta_rc = params.theta[kRelativeChange];
  // g holds dL/dd_{t+1}.
  std::vector<double> g(P, 0.0);
  grid.AccumulateL1Grad(iterates[N], 1.0, &g);
  for (int t = N - 1; t >= 0; --t) {
    const Round& r = rounds[t];
    const DepthMap& d_t = iterates[t];
    const DepthMap& d_next = iterates[t + 1];
    std::vector<double> g_prev(P, 0.0);
    grid.AccumulateL1Grad(d_t, std::pow(config.gamma, N - t), &g_prev);
    for (int i = 0; i < P; ++i) {
      const double gi = g[i];
      if (gi == 0.0) continue;
      for (int k = 0; k < K; ++k) {
        const size_t e = static_cast<size_t>(i) * K + k;
        const double w = r.weights.weights[e];
        if (w == 0.0) continue;
        const double c = r.cands.values[e];
        // d d_{t+1} / d z_k = w_k (c_k - d_{t+1}).
        const double dz = gi * w * (c - d_next[i]);
        const double* feat = &r.features[e * kNumFeatures];
        for (int f = 0; f < kNumFeatures; ++f) out.grad[f] += dz * feat[f];
        if (config.truncate) continue;
        double dc = gi * w;
        const double di = d_t[i];
        const double x = (c - di) / di;
        if (r.cands.sources[e] != i && std::abs(x) < config.features.clamp) {
          const double df = dz * theta_rc * Sign(x);
          dc += df / di;
          g_prev[i] += df * (-c / (di * di));
        }
        g_prev[r.cands.sources[e]] += dc * r.cands.slopes[e];
      }
    }
    g.swap(g_prev);
  }
  return out;
}

LossGradient BatchLossGradient(const PolicyParams& params,
                               const std::vector<TrainingSample>& samples,
                               const TrainConfig& config) {
  if (samples.empty()) throw DomainError("training needs at least one sample");
  std::vector<LossGradient> parts(samples.size());
  ParallelFor(static_cast<int>(samples.size()), [&](int s) {
    parts[s] = SampleLossGradient(params, samples[s], config);
  });
  LossGradient total;
  for (const auto& p : parts) {
    total.loss += p.loss;
    for (int f = 0; f < kNumFeatures; ++f) total.grad[f] += p.grad[f];
  }
  const double n = static_cast<double>(samples.size());
  total.loss /= n;
  for (auto& x : total.grad) x /= n;
  return total;
}

double FinalIterateL1(const PolicyParams& params, const TrainingSample& sample,
                      int n_iter, const TrainConfig& config) {
  RefineOptions opts;
  opts.n_iter = n_iter;
  opts.beta = config.beta;
  const LearnedPolicy policy(params, config.features);
  const RefineResult r =
      Refine(sample.intr, sample.d0, sample.normals, policy, opts);
  const LossGrid grid(sample, config);
  const DepthMap lifted = grid.Lift(r.depth);
  const DepthMap& gt = grid.target();
  double l1 = 0.0;
  for (int i = 0; i < gt.size(); ++i) l1 += std::abs(gt[i] - lifted[i]);
  return l1 / gt.size();
}

TrainResult Train(const std::vector<TrainingSample>& samples,
                  const TrainConfig& config, PolicyParams init) {
  config.Validate();
  if (samples.empty()) throw DomainError("training needs at least one sample");
  TrainResult result;
  result.params = init;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const LossGradient lg = BatchLossGradient(result.params, samples, config);
    if (!std::isfinite(lg.loss) || lg.loss > kDivergenceLoss) {
      throw DivergenceError("training diverged at epoch " +
                            std::to_string(epoch) + " (loss " +
                            std::to_string(lg.loss) + ")");
    }
    result.loss_log.push_back(lg.loss);
    for (int f = 0; f < kNumFeatures; ++f) {
      result.params.theta[f] -= config.learning_rate * lg.grad[f];
    }
  }
  return result;
}

TrainResult Train(const std::vector<SceneSpec>& scenes,
                  const TrainConfig& config, int stride) {
  std::vector<TrainingSample> samples;
  samples.reserve(scenes.size());
  for (const auto& spec : scenes) {
    samples.push_back(MakeTrainingSample(spec, stride));
  }
  return Train(samples, config);
}

}  // namespace ngdr
