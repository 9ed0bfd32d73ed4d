#include "ngdr/scene.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "ngdr/parallel.h"

namespace ngdr {

Primitive Primitive::Plane(int id, const Vec3& normal, const Vec3& point) {
  Primitive p;
  p.kind = PrimitiveKind::kPlane;
  p.id = id;
  p.normal = normal;
  p.point = point;
  return p;
}

Primitive Primitive::Sphere(int id, const Vec3& center, double radius) {
  Primitive p;
  p.kind = PrimitiveKind::kSphere;
  p.id = id;
  p.center = center;
  p.radius = radius;
  return p;
}

void SceneSpec::Validate() const {
  intrinsics.Validate();
  if (primitives.empty()) throw ConfigError("scene has no primitives");
  for (const auto& p : primitives) {
    if (p.id < 0) throw ConfigError("primitive ids must be nonnegative");
    if (p.kind == PrimitiveKind::kPlane &&
        !(std::abs(p.normal.norm() - 1.0) <= kUnitNormalTolerance)) {
      throw ConfigError("plane " + std::to_string(p.id) +
                        " normal is not unit length");
    }
    if (p.kind == PrimitiveKind::kSphere && !(p.radius > 0.0)) {
      throw ConfigError("sphere " + std::to_string(p.id) +
                        " radius must be positive");
    }
  }
  if (!(corruption.magnitude >= 0.0) || !std::isfinite(corruption.magnitude)) {
    throw ConfigError("corruption magnitude must be finite and >= 0");
  }
  if (!(confidence.kappa_min >= 0.0) ||
      !(confidence.kappa_max >= confidence.kappa_min)) {
    throw ConfigError("need 0 <= kappa_min <= kappa_max");
  }
}

bool IntersectPrimitive(const Primitive& prim, const Vec3& r, double* depth,
                        Vec3* normal) {
  if (prim.kind == PrimitiveKind::kPlane) {
    const PlaneHit hit = PlaneRayDepth(prim.normal, prim.point, r);
    if (!hit.ok()) return false;
    *depth = hit.depth;
    *normal = prim.normal;
  } else {
    // |d r - c|^2 = R^2  ->  a d^2 + b d + c0 = 0
    const double a = r.squaredNorm();
    const double b = -2.0 * r.dot(prim.center);
    const double c0 = prim.center.squaredNorm() - prim.radius * prim.radius;
    const double disc = b * b - 4.0 * a * c0;
    if (disc < 0.0) return false;
    const double sq = std::sqrt(disc);
    // Numerically stable root pair.
    const double q = -0.5 * (b + std::copysign(sq, b));
    double r1 = q / a;
    double r2 = q != 0.0 ? c0 / q : r1;
    if (r1 > r2) std::swap(r1, r2);
    double d = r1 > 0.0 ? r1 : r2;
    if (!(d > 0.0)) return false;
    *depth = d;
    *normal = (r * d - prim.center) / prim.radius;
    normal->normalize();
  }
  if (normal->dot(r) > 0.0) *normal = -*normal;
  return true;
}

GroundTruth Render(const SceneSpec& spec) {
  spec.Validate();
  const CameraIntrinsics& intr = spec.intrinsics;
  GroundTruth gt;
  gt.depth = DepthMap(intr.width, intr.height, 0.0);
  gt.normals = NormalMap(intr.width, intr.height);
  gt.surface_id = LabelMap(intr.width, intr.height, -1);
  for (auto& k : gt.normals.kappa.data()) k = spec.confidence.kappa_max;

  ParallelFor(intr.height, [&](int v) {
    for (int u = 0; u < intr.width; ++u) {
      const Vec3 r = Ray(intr, u, v);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& prim : spec.primitives) {
        double d;
        Vec3 n;
        if (IntersectPrimitive(prim, r, &d, &n) && d < best) {
          best = d;
          gt.depth(u, v) = d;
          gt.normals.normals(u, v) = n;
          gt.surface_id(u, v) = prim.id;
        }
      }
    }
  });
  for (int v = 0; v < intr.height; ++v) {
    for (int u = 0; u < intr.width; ++u) {
      if (gt.surface_id(u, v) < 0) throw CoverageError(u, v);
    }
  }
  return gt;
}

uint64_t StreamSeed(uint64_t seed, uint64_t index) {
  // splitmix64 finalizer over the pair.
  uint64_t z = seed * 0x9E3779B97F4A7C15ull + index + 0x632BE59BD9B4E019ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

Image<double> LowFrequencyField(int width, int height, double amplitude,
                                uint64_t seed) {
  constexpr int kComponents = 4;
  std::mt19937_64 rng(StreamSeed(seed, 0xB1A5));
  std::uniform_real_distribution<double> freq(0.25, 1.5);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> weight(0.5, 1.0);
  struct Wave {
    double fx, fy, phase, weight;
  };
  std::vector<Wave> waves;
  for (int k = 0; k < kComponents; ++k) {
    Wave w{freq(rng), freq(rng), phase(rng), weight(rng)};
    if (k % 2 == 1) w.fy = -w.fy;
    waves.push_back(w);
  }
  Image<double> field(width, height, 0.0);
  double peak = 0.0;
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      double s = 0.0;
      for (const auto& w : waves) {
        s += w.weight * std::sin(2.0 * std::numbers::pi *
                                     (w.fx * u / width + w.fy * v / height) +
                                 w.phase);
      }
      field(u, v) = s;
      peak = std::max(peak, std::abs(s));
    }
  }
  if (peak > 0.0) {
    for (auto& x : field.data()) x *= amplitude / peak;
  }
  return field;
}

}  // namespace

CorruptionResult Corrupt(const DepthMap& depth_gt, const CorruptionSpec& c) {
  if (!std::isfinite(c.magnitude) || c.magnitude < 0.0) {
    throw DomainError("corruption magnitude must be finite and >= 0");
  }
  CorruptionResult out;
  out.depth = depth_gt;
  if (c.magnitude == 0.0) return out;

  DepthMap& d = out.depth;
  switch (c.mode) {
    case CorruptionMode::kGaussian:
      ParallelFor(d.size(), [&](int i) {
        std::mt19937_64 rng(StreamSeed(c.seed, i));
        std::normal_distribution<double> noise(0.0, c.magnitude);
        d[i] = depth_gt[i] + noise(rng);
      });
      break;
    case CorruptionMode::kShrinkToMean: {
      double sum = 0.0;
      for (double x : depth_gt.data()) sum += x;
      const double mean = sum / depth_gt.size();
      for (int i = 0; i < d.size(); ++i) {
        d[i] = (1.0 - c.magnitude) * depth_gt[i] + c.magnitude * mean;
      }
      break;
    }
    case CorruptionMode::kLowFrequencyBias: {
      const Image<double> field =
          LowFrequencyField(d.width(), d.height(), c.magnitude, c.seed);
      for (int i = 0; i < d.size(); ++i) d[i] = depth_gt[i] + field[i];
      break;
    }
    case CorruptionMode::kScaleError:
      for (int i = 0; i < d.size(); ++i) {
        d[i] = (1.0 + c.magnitude) * depth_gt[i];
      }
      break;
  }
  for (auto& x : d.data()) {
    if (!(x >= kMinCorruptedDepth)) {
      x = kMinCorruptedDepth;
      ++out.clamped;
    }
  }
  return out;
}

namespace {

// Sliding min and max of labels over a (2w+1)^2 window, clipped at borders.
void WindowMinMax(const LabelMap& labels, int w, LabelMap* lo, LabelMap* hi) {
  const int W = labels.width();
  const int H = labels.height();
  LabelMap row_lo(W, H), row_hi(W, H);
  for (int v = 0; v < H; ++v) {
    for (int u = 0; u < W; ++u) {
      int a = labels(u, v), b = a;
      for (int x = std::max(0, u - w); x <= std::min(W - 1, u + w); ++x) {
        a = std::min(a, labels(x, v));
        b = std::max(b, labels(x, v));
      }
      row_lo(u, v) = a;
      row_hi(u, v) = b;
    }
  }
  *lo = LabelMap(W, H);
  *hi = LabelMap(W, H);
  for (int v = 0; v < H; ++v) {
    for (int u = 0; u < W; ++u) {
      int a = row_lo(u, v), b = row_hi(u, v);
      for (int y = std::max(0, v - w); y <= std::min(H - 1, v + w); ++y) {
        a = std::min(a, row_lo(u, y));
        b = std::max(b, row_hi(u, y));
      }
      (*lo)(u, v) = a;
      (*hi)(u, v) = b;
    }
  }
}

// Tilts n by angle theta (radians) toward a random tangent direction.
Vec3 Perturb(const Vec3& n, double theta, double azimuth) {
  const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
  const Vec3 t1 = n.cross(helper).normalized();
  const Vec3 t2 = n.cross(t1);
  const Vec3 dir = std::cos(azimuth) * t1 + std::sin(azimuth) * t2;
  return (std::cos(theta) * n + std::sin(theta) * dir).normalized();
}

}  // namespace

NormalMap SynthConfidence(const GroundTruth& gt, const ConfidenceSpec& spec) {
  const int W = gt.surface_id.width();
  const int H = gt.surface_id.height();
  NormalMap out(W, H);
  out.normals = gt.normals.normals;

  if (spec.boundary_width > 0) {
    LabelMap lo, hi;
    WindowMinMax(gt.surface_id, spec.boundary_width, &lo, &hi);
    for (int i = 0; i < W * H; ++i) {
      const int label = gt.surface_id[i];
      out.kappa[i] = (lo[i] != label || hi[i] != label) ? spec.kappa_min
                                                         : spec.kappa_max;
    }
  } else {
    for (auto& k : out.kappa.data()) k = spec.kappa_max;
  }

  if (spec.noise_deg > 0.0) {
    ParallelFor(W * H, [&](int i) {
      std::mt19937_64 rng(StreamSeed(spec.seed, i));
      const double ratio = spec.kappa_max / std::max(out.kappa[i], 1e-12);
      const double sigma =
          spec.noise_deg * std::numbers::pi / 180.0 * std::sqrt(ratio);
      std::normal_distribution<double> angle(0.0, sigma);
      std::uniform_real_distribution<double> azimuth(0.0,
                                                     2.0 * std::numbers::pi);
      const double theta = angle(rng);
      const double phi = azimuth(rng);
      Vec3 n = Perturb(gt.normals.normals[i], theta, phi);
      // Keep the camera-facing orientation of the source normal.
      if (n.dot(gt.normals.normals[i]) < 0.0) n = -n;
      out.normals[i] = n;
    });
  }
  return out;
}

AnchorSet SampleAnchors(const GroundTruth& gt, int count, uint64_t seed) {
  const int n = gt.depth.size();
  if (count < 0 || count > n) {
    throw DomainError("anchor count " + std::to_string(count) +
                      " outside [0, " + std::to_string(n) + "]");
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(StreamSeed(seed, 0xA9C404));
  AnchorSet anchors;
  anchors.reserve(count);
  // Partial Fisher-Yates: the first count entries are a uniform sample.
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(order[i], order[pick(rng)]);
    const int idx = order[i];
    const int u = idx % gt.depth.width();
    const int v = idx / gt.depth.width();
    anchors.push_back({u, v, gt.depth[idx]});
  }
  return anchors;
}

std::string ToString(CorruptionMode mode) {
  switch (mode) {
    case CorruptionMode::kGaussian:
      return "gaussian";
    case CorruptionMode::kShrinkToMean:
      return "shrink-to-mean";
    case CorruptionMode::kLowFrequencyBias:
      return "low-frequency-bias";
    case CorruptionMode::kScaleError:
      return "scale-error";
  }
  return "gaussian";
}

CorruptionMode CorruptionModeFromString(const std::string& s) {
  if (s == "gaussian") return CorruptionMode::kGaussian;
  if (s == "shrink-to-mean") return CorruptionMode::kShrinkToMean;
  if (s == "low-frequency-bias") return CorruptionMode::kLowFrequencyBias;
  if (s == "scale-error") return CorruptionMode::kScaleError;
  throw ParseError("unknown corruption mode '" + s + "'");
}

}  // namespace ngdr
