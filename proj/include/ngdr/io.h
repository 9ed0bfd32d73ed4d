#pragma once

#include <string>
#include <vector>

#include "ngdr/geometry.h"
#include "ngdr/image.h"
#include "ngdr/learn.h"
#include "ngdr/metrics.h"
#include "ngdr/refine.h"
#include "ngdr/scene.h"

namespace ngdr {

// Portable FloatMap: "Pf" (1 channel) or "PF" (3 channels). Rows are stored
// bottom to top; a negative scale means little-endian samples. `data` here
// is top-to-bottom, row-major, channel-interleaved.
struct PfmImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<float> data;
};

// Throws ParseError on a malformed header, a truncated payload (naming the
// expected and actual byte counts) or a NaN/Inf sample.
PfmImage ReadPfm(const std::string& path);
// Always writes little-endian with scale -1.0.
void WritePfm(const std::string& path, const PfmImage& image);

DepthMap ReadDepthPfm(const std::string& path);
void WriteDepthPfm(const std::string& path, const DepthMap& depth);
Image<Vec3> ReadNormalsPfm(const std::string& path);
void WriteNormalsPfm(const std::string& path, const Image<Vec3>& normals);

// Binary PGM (P5); 8-bit when every label fits, 16-bit big-endian otherwise.
// Labels must be in [0, 65535].
void WriteLabelsPgm(const std::string& path, const LabelMap& labels);
LabelMap ReadLabelsPgm(const std::string& path);

// CSV rows "u,v,depth" with a header line. Reading accepts an optional
// header; errors name the 1-based row number.
void WriteAnchorsCsv(const std::string& path, const AnchorSet& anchors);
AnchorSet ReadAnchorsCsv(const std::string& path);
// Reads and checks every anchor against the image size; an out-of-bounds
// anchor is rejected with its row number.
AnchorSet ReadAnchorsCsv(const std::string& path, int width, int height);

void WriteIntrinsicsJson(const std::string& path, const CameraIntrinsics& intr);
CameraIntrinsics ReadIntrinsicsJson(const std::string& path);
std::string IntrinsicsToJson(const CameraIntrinsics& intr);
CameraIntrinsics IntrinsicsFromJson(const std::string& text);

// Scene documents. Errors name the offending line or field path.
SceneSpec SceneSpecFromJson(const std::string& text);
SceneSpec ReadSceneSpec(const std::string& path);
std::string SceneSpecToJson(const SceneSpec& spec);

// Array of {"name": ..., "value": ...} in feature order.
std::string PolicyParamsToJson(const PolicyParams& params);
PolicyParams PolicyParamsFromJson(const std::string& text);
void WritePolicyParams(const std::string& path, const PolicyParams& params);
PolicyParams ReadPolicyParams(const std::string& path);

void WriteTrainLogCsv(const std::string& path, const std::vector<double>& log);
void WriteTraceCsv(const std::string& path,
                   const std::vector<IterationSummary>& trace);

struct MetricsReport {
  DepthMetrics depth;
  bool has_normals = false;
  NormalMetrics normals;
  bool has_planarity = false;
  PlanarityMetrics planarity;
};

std::string MetricsReportToJson(const MetricsReport& report);
std::vector<std::string> MetricsCsvHeader();
std::vector<std::string> MetricsCsvRow(const MetricsReport& report);

// Deterministic text formatting for CSV cells ("%.17g").
std::string FormatDouble(double x);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace ngdr
