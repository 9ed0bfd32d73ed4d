#include "ngdr/upsample.h"

#include <algorithm>
#include <cmath>

#include "ngdr/parallel.h"

namespace ngdr {

CandidateField UpCandidates(const CameraIntrinsics& intr_full,
                            const CameraIntrinsics& intr_coarse,
                            const DepthMap& d_coarse,
                            const NormalMap& n_coarse, int s) {
  if (s < 1) throw DomainError("stride must be >= 1");
  if (!d_coarse.SameShape(n_coarse.normals)) {
    throw DomainError("coarse depth and normals differ in size");
  }
  if (d_coarse.width() != intr_coarse.width ||
      d_coarse.height() != intr_coarse.height ||
      intr_full.width != s * intr_coarse.width ||
      intr_full.height != s * intr_coarse.height) {
    throw DomainError("full-res size must be stride times coarse size");
  }
  const int W = intr_full.width;
  const int H = intr_full.height;
  const int cw = d_coarse.width();
  CandidateField c;
  c.width = W;
  c.height = H;
  c.K = kUpsampleK;
  const size_t n = static_cast<size_t>(W) * H * kUpsampleK;
  c.values.resize(n);
  c.slopes.resize(n);
  c.sources.resize(n);
  c.valid.resize(n);

  ParallelFor(H, [&](int v) {
    const int cy = v / s;
    for (int u = 0; u < W; ++u) {
      const int cx = u / s;
      const int i = v * W + u;
      const size_t base = static_cast<size_t>(i) * kUpsampleK;
      // Containing cell first; the others fall back to it.
      const int own = cy * cw + cx;
      double own_slope = 1.0;
      if (const auto r = PropagationRatio(
              intr_full, CoarseCellCenter(cx, s), CoarseCellCenter(cy, s),
              n_coarse.normals[own], u, v)) {
        own_slope = *r;
      }
      for (int k = 0; k < kUpsampleK; ++k) {
        const size_t e = base + k;
        c.sources[e] = own;
        c.slopes[e] = own_slope;
        c.values[e] = own_slope * d_coarse[own];
        c.valid[e] = (k == kContainingCell);
        if (k == kContainingCell) continue;
        const int x = cx + (k % 3) - 1;
        const int y = cy + (k / 3) - 1;
        if (!d_coarse.InBounds(x, y)) continue;
        const int j = y * cw + x;
        const auto r =
            PropagationRatio(intr_full, CoarseCellCenter(x, s),
                             CoarseCellCenter(y, s), n_coarse.normals[j], u, v);
        if (!r) continue;
        c.sources[e] = j;
        c.slopes[e] = *r;
        c.values[e] = *r * d_coarse[j];
        c.valid[e] = 1;
      }
    }
  });
  return c;
}

DepthMap UpStep(const CandidateField& cands, const WeightField& weights) {
  return UpdateStep(cands, weights);
}

WeightField UpSimilarityWeights(const CandidateField& cands,
                                const NormalMap& n_coarse, int s,
                                const NormalMap* n_full, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  const int W = cands.width;
  const int cw = n_coarse.width();
  std::vector<double> logits(static_cast<size_t>(cands.pixels()) * kUpsampleK,
                             0.0);
  ParallelFor(cands.pixels(), [&](int i) {
    const int u = i % W;
    const int v = i / W;
    const int cx = u / s;
    const int cy = v / s;
    const Vec3& ref = n_full ? n_full->normals[i]
                             : n_coarse.normals[cy * cw + cx];
    for (int k = 0; k < kUpsampleK; ++k) {
      if (!cands.is_valid(i, k)) continue;
      const int j = (cy + k / 3 - 1) * cw + (cx + k % 3 - 1);
      logits[i * kUpsampleK + k] = ref.dot(n_coarse.normals[j]) / temperature;
    }
  });
  return MaskedSoftmax(cands, logits);
}

DepthMap UpsampleNearest(const DepthMap& d_coarse, int s) {
  if (s < 1) throw DomainError("stride must be >= 1");
  DepthMap out(d_coarse.width() * s, d_coarse.height() * s);
  for (int v = 0; v < out.height(); ++v) {
    for (int u = 0; u < out.width(); ++u) out(u, v) = d_coarse(u / s, v / s);
  }
  return out;
}

DepthMap UpsampleBilinear(const DepthMap& d_coarse, int s) {
  if (s < 1) throw DomainError("stride must be >= 1");
  const int cw = d_coarse.width();
  const int ch = d_coarse.height();
  DepthMap out(cw * s, ch * s);
  auto axis = [s](int p, int n, int* lo, int* hi, double* t) {
    double x = (p + 0.5) / s - 0.5;
    x = std::clamp(x, 0.0, static_cast<double>(n - 1));
    *lo = static_cast<int>(std::floor(x));
    *hi = std::min(*lo + 1, n - 1);
    *t = x - *lo;
  };
  for (int v = 0; v < out.height(); ++v) {
    int y0, y1;
    double ty;
    axis(v, ch, &y0, &y1, &ty);
    for (int u = 0; u < out.width(); ++u) {
      int x0, x1;
      double tx;
      axis(u, cw, &x0, &x1, &tx);
      const double top = (1 - tx) * d_coarse(x0, y0) + tx * d_coarse(x1, y0);
      const double bot = (1 - tx) * d_coarse(x0, y1) + tx * d_coarse(x1, y1);
      out(u, v) = (1 - ty) * top + ty * bot;
    }
  }
  return out;
}

std::string ToString(UpsampleMode mode) {
  switch (mode) {
    case UpsampleMode::kNearest:
      return "nearest";
    case UpsampleMode::kBilinear:
      return "bilinear";
    case UpsampleMode::kNormalGuided:
      return "normal-guided";
  }
  return "nearest";
}

UpsampleMode UpsampleModeFromString(const std::string& s) {
  if (s == "nearest") return UpsampleMode::kNearest;
  if (s == "bilinear") return UpsampleMode::kBilinear;
  if (s == "normal-guided") return UpsampleMode::kNormalGuided;
  throw ParseError("unknown upsample mode '" + s + "'");
}

}  // namespace ngdr
