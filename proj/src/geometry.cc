#include "ngdr/geometry.h"

#include <cmath>

namespace ngdr {
namespace {

// Fixed evaluation order so that negating n negates the result exactly.
double Dot(const Vec3& a, const Vec3& b) {
  return a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
}

}  // namespace

void CameraIntrinsics::Validate() const {
  if (!(alpha_u > 0.0) || !(alpha_v > 0.0)) {
    throw ConfigError("focal lengths must be positive");
  }
  if (!std::isfinite(u0) || !std::isfinite(v0)) {
    throw ConfigError("principal point must be finite");
  }
  if (width < 1 || height < 1) {
    throw ConfigError("image size must be at least 1x1");
  }
}

Vec3 Ray(const CameraIntrinsics& intr, double u, double v) {
  return Vec3((u - intr.u0) / intr.alpha_u, (v - intr.v0) / intr.alpha_v, 1.0);
}

Vec3 Backproject(const CameraIntrinsics& intr, double u, double v, double d) {
  if (!(d > 0.0)) throw DomainError("back-projection needs positive depth");
  return Ray(intr, u, v) * d;
}

std::optional<double> PropagationRatio(const CameraIntrinsics& intr,
                                       double src_u, double src_v,
                                       const Vec3& n_src, double dst_u,
                                       double dst_v) {
  const double den = Dot(n_src, Ray(intr, dst_u, dst_v));
  if (!(std::abs(den) >= kPropagationDenominatorFloor)) return std::nullopt;
  const double ratio = Dot(n_src, Ray(intr, src_u, src_v)) / den;
  if (!(ratio > 0.0) || !std::isfinite(ratio)) return std::nullopt;
  return ratio;
}

std::optional<double> PropagateDepth(const CameraIntrinsics& intr,
                                     double src_u, double src_v,
                                     const Vec3& n_src, double d_src,
                                     double dst_u, double dst_v) {
  if (!(d_src > 0.0)) throw DomainError("propagation needs positive depth");
  if (!(std::abs(n_src.norm() - 1.0) <= kUnitNormalTolerance)) {
    throw DomainError("propagation needs a unit normal");
  }
  const auto ratio = PropagationRatio(intr, src_u, src_v, n_src, dst_u, dst_v);
  if (!ratio) return std::nullopt;
  return *ratio * d_src;
}

PlaneHit PlaneRayDepth(const Vec3& plane_normal, const Vec3& plane_point,
                       const Vec3& r) {
  const double den = Dot(plane_normal, r);
  if (den == 0.0) return {PlaneHitStatus::kParallel, 0.0};
  const double depth = Dot(plane_normal, plane_point) / den;
  if (!std::isfinite(depth)) return {PlaneHitStatus::kParallel, 0.0};
  if (depth <= 0.0) return {PlaneHitStatus::kBehindCamera, depth};
  return {PlaneHitStatus::kHit, depth};
}

CameraIntrinsics CoarseIntrinsics(const CameraIntrinsics& intr, int s) {
  intr.Validate();
  if (s < 1) throw ConfigError("stride must be at least 1");
  if (intr.width % s != 0 || intr.height % s != 0) {
    throw ConfigError("stride " + std::to_string(s) +
                      " does not divide image size " +
                      std::to_string(intr.width) + "x" +
                      std::to_string(intr.height));
  }
  if (s == 1) return intr;
  // ray_full(s*(x+0.5)-0.5) = (x - ((u0+0.5)/s - 0.5)) / (alpha/s)
  CameraIntrinsics coarse;
  coarse.alpha_u = intr.alpha_u / s;
  coarse.alpha_v = intr.alpha_v / s;
  coarse.u0 = (intr.u0 + 0.5) / s - 0.5;
  coarse.v0 = (intr.v0 + 0.5) / s - 0.5;
  coarse.width = intr.width / s;
  coarse.height = intr.height / s;
  return coarse;
}

}  // namespace ngdr
