#pragma once

#include <optional>

#include "ngdr/image.h"

namespace ngdr {

// Pinhole calibration. Pixel (u, v) = (column, row), 0-based, integer
// coordinates address pixel centers.
struct CameraIntrinsics {
  double alpha_u = 1.0;
  double alpha_v = 1.0;
  double u0 = 0.0;
  double v0 = 0.0;
  int width = 1;
  int height = 1;

  // Throws ConfigError unless focal lengths are positive and the image is
  // non-empty.
  void Validate() const;

  bool operator==(const CameraIntrinsics&) const = default;
};

// Ray through pixel (u, v) scaled to unit depth: its third component is
// exactly 1. Fractional coordinates are allowed.
Vec3 Ray(const CameraIntrinsics& intr, double u, double v);

// Camera-centered point at depth d along Ray(u, v). Throws DomainError for
// d <= 0.
Vec3 Backproject(const CameraIntrinsics& intr, double u, double v, double d);

// |n^T r(dst)| below this marks a propagation degenerate.
inline constexpr double kPropagationDenominatorFloor = 1e-4;

// Depth the destination pixel would have if it lay on the plane through
// Backproject(src, d_src) with normal n_src:
//
//   d_dst = (n^T r(src)) / (n^T r(dst)) * d_src
//
// Returns nullopt when the destination ray nearly lies in the plane
// (|n^T r(dst)| < kPropagationDenominatorFloor) or when the plane meets the
// destination ray behind the camera. The caller substitutes the
// self-candidate. Invariant under n -> -n; src == dst returns d_src exactly.
std::optional<double> PropagateDepth(const CameraIntrinsics& intr,
                                     double src_u, double src_v,
                                     const Vec3& n_src, double d_src,
                                     double dst_u, double dst_v);

// Depth ratio n^T r(src) / n^T r(dst) used by PropagateDepth; nullopt when
// degenerate. Candidates are linear in the source depth with this slope.
std::optional<double> PropagationRatio(const CameraIntrinsics& intr,
                                       double src_u, double src_v,
                                       const Vec3& n_src, double dst_u,
                                       double dst_v);

enum class PlaneHitStatus { kHit, kParallel, kBehindCamera };

struct PlaneHit {
  PlaneHitStatus status = PlaneHitStatus::kParallel;
  double depth = 0.0;  // valid when status == kHit

  bool ok() const { return status == PlaneHitStatus::kHit; }
};

// Depth along ray r (scaled so that depth multiplies r) at which it meets
// the plane {X : n^T (X - plane_point) = 0}.
PlaneHit PlaneRayDepth(const Vec3& plane_normal, const Vec3& plane_point,
                       const Vec3& r);

// Intrinsics of the grid obtained by grouping s x s pixel blocks. Coarse
// pixel (x, y) sees the same ray as full-res pixel
// (s*(x+0.5)-0.5, s*(y+0.5)-0.5). Throws ConfigError when s < 1 or s does
// not divide the image size.
CameraIntrinsics CoarseIntrinsics(const CameraIntrinsics& intr, int s);

// Full-resolution coordinate of the center of coarse cell index x.
inline double CoarseCellCenter(int x, int s) { return s * (x + 0.5) - 0.5; }

}  // namespace ngdr
