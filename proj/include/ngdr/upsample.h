#pragma once

#include <string>

#include "ngdr/geometry.h"
#include "ngdr/image.h"
#include "ngdr/refine.h"

namespace ngdr {

// Fixed 3x3 coarse neighborhood around the cell containing a full-res
// pixel, row-major; index 4 is the containing cell.
inline constexpr int kUpsampleK = 9;
inline constexpr int kContainingCell = 4;

// For each full-res pixel, the depths propagated from the 3x3 coarse cells
// around its containing cell, using each cell's center ray and normal. Out
// of bounds and degenerate entries repeat the containing cell's candidate.
// Full-res dimensions must equal s times the coarse ones.
CandidateField UpCandidates(const CameraIntrinsics& intr_full,
                            const CameraIntrinsics& intr_coarse,
                            const DepthMap& d_coarse,
                            const NormalMap& n_coarse, int s);

// Fused full-resolution depth; same contract as UpdateStep with K = 9.
DepthMap UpStep(const CandidateField& cands, const WeightField& weights);

// Similarity-style up-weights: logits n_ref^T n_cell / temperature, where
// n_ref is the full-res normal when given, else the containing cell's.
WeightField UpSimilarityWeights(const CandidateField& cands,
                                const NormalMap& n_coarse, int s,
                                const NormalMap* n_full, double temperature);

// Coarse cell of each full-res pixel, replicated.
DepthMap UpsampleNearest(const DepthMap& d_coarse, int s);

// Bilinear interpolation between coarse cell centers, with full-res pixel u
// sampling coarse coordinate (u + 0.5)/s - 0.5 (clamped to the grid).
DepthMap UpsampleBilinear(const DepthMap& d_coarse, int s);

enum class UpsampleMode { kNearest, kBilinear, kNormalGuided };
std::string ToString(UpsampleMode mode);
UpsampleMode UpsampleModeFromString(const std::string& s);

}  // namespace ngdr
