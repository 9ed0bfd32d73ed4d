#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ngdr/geometry.h"
#include "ngdr/image.h"
#include "ngdr/refine.h"

namespace ngdr {

struct DepthMetrics {
  double abs_rel = 0.0;
  double rmse = 0.0;
  double log10 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
};

struct NormalMetrics {
  double mean = 0.0;
  double median = 0.0;
  double rmse = 0.0;
  double pct_11_25 = 0.0;
  double pct_22_5 = 0.0;
  double pct_30 = 0.0;
};

struct PlanarityMetrics {
  double eps_plan = 0.0;  // meters
  double eps_orie = 0.0;  // degrees
  int regions = 0;
  std::vector<int> skipped;  // labels with fewer than 3 pixels
};

// Threshold comparisons are strict: delta_k counts max(p/g, g/p) < 1.25^k.
// Throws DomainError on shape mismatch, empty mask or nonpositive values
// inside the mask.
DepthMetrics ComputeDepthMetrics(const DepthMap& pred, const DepthMap& gt);
DepthMetrics ComputeDepthMetrics(const DepthMap& pred, const DepthMap& gt,
                                 const Mask& mask);

// Angular error acos(clamp(n_p^T n_g)) in degrees; percentages use strict <.
NormalMetrics ComputeNormalMetrics(const Image<Vec3>& pred,
                                   const Image<Vec3>& gt);
NormalMetrics ComputeNormalMetrics(const Image<Vec3>& pred,
                                   const Image<Vec3>& gt, const Mask& mask);

// Per-pixel angular errors in degrees (row-major).
std::vector<double> AngularErrorsDeg(const Image<Vec3>& pred,
                                     const Image<Vec3>& gt);

struct PlaneFit {
  Vec3 normal = Vec3(0, 0, -1);
  Vec3 centroid = Vec3::Zero();
  Eigen::Vector3d eigenvalues = Eigen::Vector3d::Zero();  // ascending
};

// Total least squares plane through the points (smallest-eigenvalue
// eigenvector of the centered covariance, divided by the point count).
PlaneFit FitPlane(const std::vector<Vec3>& points);

// Windowed PCA normals. Each pixel back-projects its clipped window x window
// neighborhood; the normal faces the camera and kappa holds the planarity
// score 1 - lambda_min / lambda_mid in [0, 1] (0 for rank-deficient
// windows). Throws DomainError for an even or too small window, or one
// larger than the image.
NormalMap NormalsFromDepth(const CameraIntrinsics& intr, const DepthMap& depth,
                           int window);

inline constexpr int kPcaWindow = 7;

// Fits a plane to the predicted points of every labeled region. eps_plan is
// the RMS point-to-plane distance, eps_orie the angle between the fitted
// normal and the region's mean ground-truth normal (sign-agnostic). Both are
// averaged over regions. planar_ids restricts the evaluated labels (empty
// means every label >= 0). Regions with < 3 pixels land in `skipped`.
PlanarityMetrics ComputePlanarityMetrics(const CameraIntrinsics& intr,
                                         const DepthMap& pred,
                                         const LabelMap& labels,
                                         const NormalMap& gt_normals,
                                         const std::vector<int>& planar_ids = {});

// Summarizer for refinement traces against full-resolution ground truth.
// `lift` maps an iterate to full resolution (identity when empty).
std::function<IterationSummary(int, const DepthMap&)> MakeTraceSummarizer(
    const CameraIntrinsics& intr_full, const DepthMap& gt_depth,
    const Image<Vec3>* gt_normals,
    std::function<DepthMap(const DepthMap&)> lift = {});

}  // namespace ngdr
