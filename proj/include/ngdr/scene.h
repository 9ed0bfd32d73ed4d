#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ngdr/geometry.h"
#include "ngdr/image.h"

namespace ngdr {

enum class PrimitiveKind { kPlane, kSphere };

struct Primitive {
  PrimitiveKind kind = PrimitiveKind::kPlane;
  int id = 0;
  // Plane: unit normal and a point on the plane (meters).
  Vec3 normal = Vec3(0, 0, -1);
  Vec3 point = Vec3(0, 0, 1);
  // Sphere: center and radius (meters).
  Vec3 center = Vec3(0, 0, 2);
  double radius = 1.0;

  static Primitive Plane(int id, const Vec3& normal, const Vec3& point);
  static Primitive Sphere(int id, const Vec3& center, double radius);
};

enum class CorruptionMode { kGaussian, kShrinkToMean, kLowFrequencyBias, kScaleError };

// gaussian: magnitude is the noise sigma in meters.
// shrink-to-mean: magnitude is lambda in (1-lambda)*d + lambda*mean(d).
// low-frequency-bias: magnitude is the peak amplitude in meters.
// scale-error: depths are multiplied by (1 + magnitude).
struct CorruptionSpec {
  CorruptionMode mode = CorruptionMode::kGaussian;
  double magnitude = 0.0;
  uint64_t seed = 0;
};

struct ConfidenceSpec {
  double kappa_max = 100.0;
  double kappa_min = 1.0;
  int boundary_width = 2;  // Chebyshev radius of the low-confidence band
  double noise_deg = 0.0;  // angular noise sigma at kappa_max
  uint64_t seed = 0;
};

struct SceneSpec {
  CameraIntrinsics intrinsics;
  std::vector<Primitive> primitives;
  CorruptionSpec corruption;
  ConfidenceSpec confidence;
  uint64_t seed = 0;

  // Throws ConfigError on an empty primitive list, a non-unit plane normal
  // or a nonpositive radius.
  void Validate() const;
};

struct GroundTruth {
  DepthMap depth;
  NormalMap normals;  // kappa filled with kappa_max
  LabelMap surface_id;
};

inline constexpr double kMinCorruptedDepth = 1e-3;

// Nearest positive hit of each pixel ray; normals face the camera. Ties go
// to the earlier primitive. Throws CoverageError naming the first pixel
// (row-major) that misses every primitive.
GroundTruth Render(const SceneSpec& spec);

// Depth of the nearest positive intersection of ray r with a primitive, with
// the camera-facing surface normal there. Returns false on a miss.
bool IntersectPrimitive(const Primitive& prim, const Vec3& r, double* depth,
                        Vec3* normal);

struct CorruptionResult {
  DepthMap depth;
  int clamped = 0;  // values raised to kMinCorruptedDepth
};

CorruptionResult Corrupt(const DepthMap& depth_gt, const CorruptionSpec& c);

// Normals perturbed by angular noise that grows as kappa falls, and a
// two-valued kappa: kappa_min within boundary_width (Chebyshev) of a label
// change, kappa_max elsewhere.
NormalMap SynthConfidence(const GroundTruth& gt, const ConfidenceSpec& spec);

struct Anchor {
  int u = 0;
  int v = 0;
  double depth = 0.0;

  bool operator==(const Anchor&) const = default;
};
using AnchorSet = std::vector<Anchor>;

// count distinct uniformly random pixels with their ground-truth depth,
// ordered by draw. A prefix of a larger draw with the same seed equals the
// smaller draw. Throws DomainError when count is out of range.
AnchorSet SampleAnchors(const GroundTruth& gt, int count, uint64_t seed);

// Per-pixel deterministic random stream seed.
uint64_t StreamSeed(uint64_t seed, uint64_t index);

std::string ToString(CorruptionMode mode);
CorruptionMode CorruptionModeFromString(const std::string& s);

}  // namespace ngdr
