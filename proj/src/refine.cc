#include "ngdr/refine.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ngdr/parallel.h"

namespace ngdr {

Stencil Stencil::Square(int beta) {
  if (beta < 0) throw ConfigError("stencil radius must be >= 0");
  Stencil s;
  s.beta = beta;
  for (int dv = -beta; dv <= beta; ++dv) {
    for (int du = -beta; du <= beta; ++du) s.offsets.emplace_back(du, dv);
  }
  return s;
}

CandidateField Candidates(const CameraIntrinsics& intr, const DepthMap& depth,
                          const NormalMap& normals, const Stencil& stencil) {
  if (!depth.SameShape(normals.normals)) {
    throw DomainError("depth and normal maps differ in size");
  }
  if (depth.width() != intr.width || depth.height() != intr.height) {
    throw DomainError("depth map does not match intrinsics size");
  }
  const int W = depth.width();
  const int H = depth.height();
  const int K = stencil.size();
  const int self = stencil.center();
  CandidateField c;
  c.width = W;
  c.height = H;
  c.K = K;
  const size_t n = static_cast<size_t>(W) * H * K;
  c.values.resize(n);
  c.slopes.resize(n);
  c.sources.resize(n);
  c.valid.resize(n);

  ParallelFor(H, [&](int v) {
    for (int u = 0; u < W; ++u) {
      const int i = depth.Index(u, v);
      for (int k = 0; k < K; ++k) {
        const size_t e = static_cast<size_t>(i) * K + k;
        c.sources[e] = i;
        c.slopes[e] = 1.0;
        c.values[e] = depth[i];
        c.valid[e] = (k == self);
        if (k == self) continue;
        const int su = u + stencil.offsets[k].first;
        const int sv = v + stencil.offsets[k].second;
        if (!depth.InBounds(su, sv)) continue;
        const int j = depth.Index(su, sv);
        const auto ratio =
            PropagationRatio(intr, su, sv, normals.normals[j], u, v);
        if (!ratio) continue;
        c.sources[e] = j;
        c.slopes[e] = *ratio;
        c.values[e] = *ratio * depth[j];
        c.valid[e] = 1;
      }
    }
  });
  return c;
}

void WeightField::Validate() const {
  if (static_cast<size_t>(width) * height * K != weights.size()) {
    throw ContractViolation("weight field size mismatch");
  }
  for (int i = 0; i < width * height; ++i) {
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
      const double w = at(i, k);
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ContractViolation("weight at pixel " + std::to_string(i) +
                                " is negative or non-finite");
      }
      sum += w;
    }
    if (!(std::abs(sum - 1.0) <= kSumTolerance)) {
      throw ContractViolation("weights at pixel " + std::to_string(i) +
                              " sum to " + std::to_string(sum));
    }
  }
}

DepthMap UpdateStep(const CandidateField& cands, const WeightField& weights) {
  if (cands.width != weights.width || cands.height != weights.height ||
      cands.K != weights.K) {
    throw DomainError("candidate and weight fields differ in shape");
  }
  weights.Validate();
  DepthMap out(cands.width, cands.height, 0.0);
  const int K = cands.K;
  ParallelFor(cands.pixels(), [&](int i) {
    double d = 0.0;
    for (int k = 0; k < K; ++k) d += weights.at(i, k) * cands.value(i, k);
    out[i] = d;
  });
  return out;
}

WeightField MaskedSoftmax(const CandidateField& cands,
                          const std::vector<double>& logits) {
  const int K = cands.K;
  WeightField w(cands.width, cands.height, K);
  ParallelFor(cands.pixels(), [&](int i) {
    double peak = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      if (cands.is_valid(i, k)) peak = std::max(peak, logits[i * K + k]);
    }
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
      const double e =
          cands.is_valid(i, k) ? std::exp(logits[i * K + k] - peak) : 0.0;
      w.at(i, k) = e;
      sum += e;
    }
    for (int k = 0; k < K; ++k) w.at(i, k) /= sum;
  });
  return w;
}

WeightField OracleWeights(const CandidateField& cands, const DepthMap& gt,
                          int self_index) {
  if (gt.width() != cands.width || gt.height() != cands.height) {
    throw DomainError("ground truth does not match candidate field");
  }
  const int K = cands.K;
  WeightField w(cands.width, cands.height, K);
  ParallelFor(cands.pixels(), [&](int i) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      best = std::min(best, std::abs(cands.value(i, k) - gt[i]));
    }
    const double tie = best + 1e-12 * std::abs(gt[i]);
    int pick = -1;
    if (std::abs(cands.value(i, self_index) - gt[i]) <= tie) {
      pick = self_index;
    } else {
      for (int k = 0; k < K; ++k) {
        if (std::abs(cands.value(i, k) - gt[i]) <= tie) {
          pick = k;
          break;
        }
      }
    }
    w.at(i, pick) = 1.0;
  });
  return w;
}

WeightField SimilarityWeights(const NormalMap& normals, const Stencil& stencil,
                              const CandidateField& cands,
                              const SimilarityOptions& opts) {
  if (!(opts.temperature > 0.0)) {
    throw DomainError("similarity temperature must be positive");
  }
  const int K = cands.K;
  const int W = cands.width;
  std::vector<double> logits(static_cast<size_t>(cands.pixels()) * K, 0.0);
  ParallelFor(cands.pixels(), [&](int i) {
    const int u = i % W;
    const int v = i / W;
    const Vec3& ni = normals.normals[i];
    for (int k = 0; k < K; ++k) {
      if (!cands.is_valid(i, k)) continue;
      const int j = normals.normals.Index(u + stencil.offsets[k].first,
                                          v + stencil.offsets[k].second);
      double logit = ni.dot(normals.normals[j]) / opts.temperature;
      if (opts.kappa_gate) {
        const double kappa = std::max(normals.kappa[j], 1e-12 * opts.kappa_max);
        logit += std::log(kappa / opts.kappa_max);
      }
      logits[i * K + k] = logit;
    }
  });
  return MaskedSoftmax(cands, logits);
}

WeightField UniformWeights(const CandidateField& cands) {
  return MaskedSoftmax(
      cands, std::vector<double>(static_cast<size_t>(cands.pixels()) * cands.K,
                                 0.0));
}

WeightField OraclePolicy::Weights(const PolicyInput& in) const {
  return OracleWeights(in.candidates, gt_, in.stencil.center());
}

WeightField SimilarityPolicy::Weights(const PolicyInput& in) const {
  return SimilarityWeights(in.normals, in.stencil, in.candidates, opts_);
}

WeightField UniformPolicy::Weights(const PolicyInput& in) const {
  return UniformWeights(in.candidates);
}

void ValidateAnchors(const AnchorSet& anchors, int width, int height) {
  std::set<std::pair<int, int>> seen;
  for (size_t r = 0; r < anchors.size(); ++r) {
    const Anchor& a = anchors[r];
    const std::string where = "anchor " + std::to_string(r) + " at (" +
                              std::to_string(a.u) + ", " +
                              std::to_string(a.v) + ")";
    if (a.u < 0 || a.v < 0 || a.u >= width || a.v >= height) {
      throw DomainError(where + " is out of bounds");
    }
    if (!(a.depth > 0.0) || !std::isfinite(a.depth)) {
      throw DomainError(where + " has nonpositive depth");
    }
    if (!seen.emplace(a.u, a.v).second) {
      throw DomainError(where + " is a duplicate");
    }
  }
}

void ImposeAnchors(const AnchorSet& anchors, DepthMap* depth) {
  for (const Anchor& a : anchors) (*depth)(a.u, a.v) = a.depth;
}

RefineResult Refine(const CameraIntrinsics& intr, const DepthMap& d0,
                    const NormalMap& normals, const WeightPolicy& policy,
                    const RefineOptions& opts) {
  if (opts.n_iter < 0) throw DomainError("n_iter must be >= 0");
  if (opts.trace == TraceMode::kSummaries && !opts.summarize) {
    throw ConfigError("summary trace requested without a summarizer");
  }
  intr.Validate();
  ValidateDepth(d0);
  ValidateNormals(normals);
  if (!d0.SameShape(normals.normals)) {
    throw DomainError("depth and normal maps differ in size");
  }
  ValidateAnchors(opts.anchors, d0.width(), d0.height());

  const Stencil stencil = Stencil::Square(opts.beta);
  RefineResult result;
  result.trace.iterations = opts.n_iter;
  DepthMap d = d0;
  ImposeAnchors(opts.anchors, &d);

  auto record = [&](int t) {
    if (opts.trace == TraceMode::kSnapshots) {
      result.trace.snapshots.push_back(d);
    } else if (opts.trace == TraceMode::kSummaries) {
      result.trace.summaries.push_back(opts.summarize(t, d));
    }
  };
  record(0);
  for (int t = 0; t < opts.n_iter; ++t) {
    const CandidateField cands = Candidates(intr, d, normals, stencil);
    const PolicyInput in{intr, d, normals, stencil, cands, t};
    const WeightField w = policy.Weights(in);
    d = UpdateStep(cands, w);
    ImposeAnchors(opts.anchors, &d);
    record(t + 1);
  }
  result.depth = std::move(d);
  return result;
}

ScaleMatchResult ScaleMatch(const DepthMap& d0, const AnchorSet& anchors) {
  if (anchors.empty()) throw DomainError("scale matching needs anchors");
  ValidateAnchors(anchors, d0.width(), d0.height());
  double num = 0.0;
  double den = 0.0;
  for (const Anchor& a : anchors) {
    const double p = d0(a.u, a.v);
    num += p * a.depth;
    den += p * p;
  }
  if (!(den > 0.0)) throw DomainError("anchor predictions are all zero");
  ScaleMatchResult out;
  out.scale = num / den;
  out.depth = d0;
  for (auto& x : out.depth.data()) x *= out.scale;
  return out;
}

NormalMap DownsampleNormals(const NormalMap& normals, int s) {
  const int W = normals.width();
  const int H = normals.height();
  if (s < 1 || W % s != 0 || H % s != 0) {
    throw ConfigError("stride does not divide normal map size");
  }
  NormalMap out(W / s, H / s);
  for (int y = 0; y < H / s; ++y) {
    for (int x = 0; x < W / s; ++x) {
      out.normals(x, y) = normals.normals(x * s + s / 2, y * s + s / 2);
      double kmin = std::numeric_limits<double>::infinity();
      for (int v = y * s; v < (y + 1) * s; ++v) {
        for (int u = x * s; u < (x + 1) * s; ++u) {
          kmin = std::min(kmin, normals.kappa(u, v));
        }
      }
      out.kappa(x, y) = kmin;
    }
  }
  return out;
}

DepthMap DownsampleDepth(const CameraIntrinsics& intr, const DepthMap& depth,
                         const NormalMap& normals, int s) {
  CoarseIntrinsics(intr, s);  // validates stride
  if (!depth.SameShape(normals.normals)) {
    throw DomainError("depth and normal maps differ in size");
  }
  DepthMap out(depth.width() / s, depth.height() / s);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const int u = x * s + s / 2;
      const int v = y * s + s / 2;
      const auto ratio = PropagationRatio(intr, u, v, normals.normals(u, v),
                                          CoarseCellCenter(x, s),
                                          CoarseCellCenter(y, s));
      out(x, y) = ratio ? *ratio * depth(u, v) : depth(u, v);
    }
  }
  return out;
}

}  // namespace ngdr
