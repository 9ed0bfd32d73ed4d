#include "ngdr/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ngdr/parallel.h"

namespace ngdr {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

Mask FullMask(int w, int h) { return Mask(w, h, 1); }

}  // namespace

DepthMetrics ComputeDepthMetrics(const DepthMap& pred, const DepthMap& gt) {
  return ComputeDepthMetrics(pred, gt, FullMask(gt.width(), gt.height()));
}

DepthMetrics ComputeDepthMetrics(const DepthMap& pred, const DepthMap& gt,
                                 const Mask& mask) {
  if (!pred.SameShape(gt) || !mask.SameShape(gt)) {
    throw DomainError("depth metrics: shape mismatch");
  }
  double abs_rel = 0, sq = 0, log10 = 0;
  long d1 = 0, d2 = 0, d3 = 0, n = 0;
  for (int i = 0; i < gt.size(); ++i) {
    if (!mask[i]) continue;
    const double p = pred[i];
    const double g = gt[i];
    if (!(g > 0.0) || !(p > 0.0)) {
      throw DomainError("depth metrics need positive depths on the mask");
    }
    abs_rel += std::abs(p - g) / g;
    sq += (p - g) * (p - g);
    log10 += std::abs(std::log10(p) - std::log10(g));
    const double ratio = std::max(p / g, g / p);
    if (ratio < 1.25) ++d1;
    if (ratio < 1.25 * 1.25) ++d2;
    if (ratio < 1.25 * 1.25 * 1.25) ++d3;
    ++n;
  }
  if (n == 0) throw DomainError("depth metrics: empty mask");
  DepthMetrics m;
  m.abs_rel = abs_rel / n;
  m.rmse = std::sqrt(sq / n);
  m.log10 = log10 / n;
  m.delta1 = static_cast<double>(d1) / n;
  m.delta2 = static_cast<double>(d2) / n;
  m.delta3 = static_cast<double>(d3) / n;
  return m;
}

std::vector<double> AngularErrorsDeg(const Image<Vec3>& pred,
                                     const Image<Vec3>& gt) {
  if (!pred.SameShape(gt)) throw DomainError("normal metrics: shape mismatch");
  std::vector<double> err(gt.size());
  for (int i = 0; i < gt.size(); ++i) {
    const double c = std::clamp(pred[i].dot(gt[i]), -1.0, 1.0);
    err[i] = std::acos(c) * kRadToDeg;
  }
  return err;
}

NormalMetrics ComputeNormalMetrics(const Image<Vec3>& pred,
                                   const Image<Vec3>& gt) {
  return ComputeNormalMetrics(pred, gt, FullMask(gt.width(), gt.height()));
}

NormalMetrics ComputeNormalMetrics(const Image<Vec3>& pred,
                                   const Image<Vec3>& gt, const Mask& mask) {
  if (!mask.SameShape(gt)) throw DomainError("normal metrics: shape mismatch");
  const std::vector<double> all = AngularErrorsDeg(pred, gt);
  std::vector<double> err;
  for (int i = 0; i < gt.size(); ++i) {
    if (mask[i]) err.push_back(all[i]);
  }
  if (err.empty()) throw DomainError("normal metrics: empty mask");
  const double n = static_cast<double>(err.size());
  NormalMetrics m;
  double sum = 0, sq = 0;
  long a = 0, b = 0, c = 0;
  for (double e : err) {
    sum += e;
    sq += e * e;
    if (e < 11.25) ++a;
    if (e < 22.5) ++b;
    if (e < 30.0) ++c;
  }
  m.mean = sum / n;
  m.rmse = std::sqrt(sq / n);
  m.pct_11_25 = a / n;
  m.pct_22_5 = b / n;
  m.pct_30 = c / n;
  std::sort(err.begin(), err.end());
  const size_t mid = err.size() / 2;
  m.median = err.size() % 2 ? err[mid] : 0.5 * (err[mid - 1] + err[mid]);
  return m;
}

PlaneFit FitPlane(const std::vector<Vec3>& points) {
  PlaneFit fit;
  if (points.empty()) return fit;
  for (const Vec3& p : points) fit.centroid += p;
  fit.centroid /= static_cast<double>(points.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Vec3& p : points) {
    const Vec3 q = p - fit.centroid;
    cov += q * q.transpose();
  }
  cov /= static_cast<double>(points.size());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  fit.eigenvalues = solver.eigenvalues();
  fit.normal = solver.eigenvectors().col(0);
  return fit;
}

NormalMap NormalsFromDepth(const CameraIntrinsics& intr, const DepthMap& depth,
                           int window) {
  if (window < 3 || window % 2 == 0) {
    throw DomainError("PCA window must be odd and >= 3");
  }
  if (window > depth.width() || window > depth.height()) {
    throw DomainError("PCA window larger than image");
  }
  const int W = depth.width();
  const int H = depth.height();
  const int half = window / 2;
  NormalMap out(W, H);
  ParallelFor(H, [&](int v) {
    std::vector<Vec3> pts;
    pts.reserve(window * window);
    for (int u = 0; u < W; ++u) {
      pts.clear();
      for (int y = std::max(0, v - half); y <= std::min(H - 1, v + half); ++y) {
        for (int x = std::max(0, u - half); x <= std::min(W - 1, u + half);
             ++x) {
          pts.push_back(Ray(intr, x, y) * depth(x, y));
        }
      }
      const PlaneFit fit = FitPlane(pts);
      Vec3 n = fit.normal;
      if (n.dot(Ray(intr, u, v)) > 0.0) n = -n;
      out.normals(u, v) = n;
      const double lmin = std::max(fit.eigenvalues(0), 0.0);
      const double lmid = fit.eigenvalues(1);
      const double lmax = fit.eigenvalues(2);
      double kappa = 0.0;
      if (lmid > 1e-12 * std::max(lmax, std::numeric_limits<double>::min())) {
        kappa = std::clamp(1.0 - lmin / lmid, 0.0, 1.0);
      }
      out.kappa(u, v) = kappa;
    }
  });
  return out;
}

PlanarityMetrics ComputePlanarityMetrics(const CameraIntrinsics& intr,
                                         const DepthMap& pred,
                                         const LabelMap& labels,
                                         const NormalMap& gt_normals,
                                         const std::vector<int>& planar_ids) {
  if (!pred.SameShape(labels) || !pred.SameShape(gt_normals.normals)) {
    throw DomainError("planarity metrics: shape mismatch");
  }
  struct Region {
    std::vector<Vec3> points;
    Vec3 gt_normal = Vec3::Zero();
  };
  std::map<int, Region> regions;
  for (int v = 0; v < pred.height(); ++v) {
    for (int u = 0; u < pred.width(); ++u) {
      const int label = labels(u, v);
      if (label < 0) continue;
      if (!planar_ids.empty() &&
          std::find(planar_ids.begin(), planar_ids.end(), label) ==
              planar_ids.end()) {
        continue;
      }
      Region& r = regions[label];
      r.points.push_back(Backproject(intr, u, v, pred(u, v)));
      r.gt_normal += gt_normals.normals(u, v);
    }
  }
  PlanarityMetrics m;
  double plan = 0, orie = 0;
  for (auto& [label, r] : regions) {
    if (r.points.size() < 3) {
      m.skipped.push_back(label);
      continue;
    }
    const PlaneFit fit = FitPlane(r.points);
    double sq = 0;
    for (const Vec3& p : r.points) {
      const double dist = fit.normal.dot(p - fit.centroid);
      sq += dist * dist;
    }
    plan += std::sqrt(sq / r.points.size());
    const Vec3 g = r.gt_normal.normalized();
    const double c = std::min(1.0, std::abs(fit.normal.dot(g)));
    orie += std::acos(c) * kRadToDeg;
    ++m.regions;
  }
  if (m.regions > 0) {
    m.eps_plan = plan / m.regions;
    m.eps_orie = orie / m.regions;
  }
  return m;
}

std::function<IterationSummary(int, const DepthMap&)> MakeTraceSummarizer(
    const CameraIntrinsics& intr_full, const DepthMap& gt_depth,
    const Image<Vec3>* gt_normals,
    std::function<DepthMap(const DepthMap&)> lift) {
  std::shared_ptr<const Image<Vec3>> normals;
  if (gt_normals) normals = std::make_shared<const Image<Vec3>>(*gt_normals);
  return [intr_full, gt_depth, normals, lift](int t, const DepthMap& d) {
    const DepthMap full = lift ? lift(d) : d;
    const DepthMetrics dm = ComputeDepthMetrics(full, gt_depth);
    IterationSummary s;
    s.iteration = t;
    s.rmse = dm.rmse;
    s.abs_rel = dm.abs_rel;
    s.mean_normal_error_deg = std::numeric_limits<double>::quiet_NaN();
    if (normals) {
      const NormalMap pca = NormalsFromDepth(intr_full, full, kPcaWindow);
      s.mean_normal_error_deg = ComputeNormalMetrics(pca.normals, *normals).mean;
    }
    return s;
  };
}

}  // namespace ngdr
