#include "ngdr/io.h"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ngdr {

using nlohmann::json;

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
  if (!out) throw ParseError("write failed for " + path);
}

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// PFM

namespace {

uint32_t ByteSwap(uint32_t x) {
  return (x >> 24) | ((x >> 8) & 0xFF00u) | ((x << 8) & 0xFF0000u) | (x << 24);
}

bool HostIsLittleEndian() { return std::endian::native == std::endian::little; }

class HeaderReader {
 public:
  HeaderReader(const std::string& bytes, const std::string& path)
      : bytes_(bytes), path_(path) {}

  std::string Token() {
    while (pos_ < bytes_.size() && std::isspace(Byte(pos_))) ++pos_;
    const size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(Byte(pos_))) ++pos_;
    if (start == pos_) Fail("unexpected end of header");
    return bytes_.substr(start, pos_ - start);
  }

  // Consumes the single whitespace byte that ends the header.
  void EndOfHeader() {
    if (pos_ >= bytes_.size() || !std::isspace(Byte(pos_))) {
      Fail("header must end with a whitespace byte");
    }
    ++pos_;
  }

  size_t pos() const { return pos_; }
  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError(path_ + ": " + what);
  }

 private:
  unsigned char Byte(size_t i) const {
    return static_cast<unsigned char>(bytes_[i]);
  }
  const std::string& bytes_;
  const std::string& path_;
  size_t pos_ = 0;
};

int ParseDimension(const HeaderReader& r, const std::string& token) {
  size_t used = 0;
  long value = 0;
  try {
    value = std::stol(token, &used);
  } catch (const std::exception&) {
    r.Fail("bad dimension '" + token + "'");
  }
  if (used != token.size() || value <= 0 || value > (1 << 20)) {
    r.Fail("bad dimension '" + token + "'");
  }
  return static_cast<int>(value);
}

}  // namespace

PfmImage ReadPfm(const std::string& path) {
  const std::string bytes = ReadTextFile(path);
  HeaderReader r(bytes, path);
  PfmImage img;
  const std::string magic = r.Token();
  if (magic == "Pf") {
    img.channels = 1;
  } else if (magic == "PF") {
    img.channels = 3;
  } else {
    r.Fail("bad magic '" + magic + "'");
  }
  img.width = ParseDimension(r, r.Token());
  img.height = ParseDimension(r, r.Token());
  const std::string scale_token = r.Token();
  double scale = 0.0;
  try {
    size_t used = 0;
    scale = std::stod(scale_token, &used);
    if (used != scale_token.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    r.Fail("bad scale '" + scale_token + "'");
  }
  if (scale == 0.0 || !std::isfinite(scale)) r.Fail("scale must be nonzero");
  r.EndOfHeader();

  const size_t count =
      static_cast<size_t>(img.width) * img.height * img.channels;
  const size_t expected = count * sizeof(float);
  const size_t actual = bytes.size() - r.pos();
  if (actual < expected) {
    r.Fail("truncated payload: expected " + std::to_string(expected) +
           " bytes, got " + std::to_string(actual));
  }
  const bool file_little = scale < 0.0;
  const bool swap = file_little != HostIsLittleEndian();
  img.data.resize(count);
  const char* payload = bytes.data() + r.pos();
  const size_t row = static_cast<size_t>(img.width) * img.channels;
  for (int y = 0; y < img.height; ++y) {
    // File row y counts from the bottom.
    const size_t dst_row = static_cast<size_t>(img.height - 1 - y) * row;
    for (size_t x = 0; x < row; ++x) {
      uint32_t raw;
      std::memcpy(&raw, payload + (y * row + x) * sizeof(float), sizeof(raw));
      if (swap) raw = ByteSwap(raw);
      const float value = std::bit_cast<float>(raw);
      if (!std::isfinite(value)) {
        r.Fail("non-finite sample at row " + std::to_string(y) + ", column " +
               std::to_string(x / img.channels));
      }
      img.data[dst_row + x] = value;
    }
  }
  return img;
}

void WritePfm(const std::string& path, const PfmImage& img) {
  if (img.channels != 1 && img.channels != 3) {
    throw DomainError("PFM supports 1 or 3 channels");
  }
  std::string out = (img.channels == 1 ? "Pf\n" : "PF\n") +
                    std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n-1.0\n";
  const size_t row = static_cast<size_t>(img.width) * img.channels;
  const size_t header = out.size();
  out.resize(header + row * img.height * sizeof(float));
  char* dst = out.data() + header;
  for (int y = 0; y < img.height; ++y) {
    const size_t src_row = static_cast<size_t>(img.height - 1 - y) * row;
    for (size_t x = 0; x < row; ++x) {
      const float value = img.data[src_row + x];
      if (!std::isfinite(value)) throw DomainError("cannot write non-finite PFM");
      uint32_t raw = std::bit_cast<uint32_t>(value);
      if (!HostIsLittleEndian()) raw = ByteSwap(raw);
      std::memcpy(dst + (y * row + x) * sizeof(float), &raw, sizeof(raw));
    }
  }
  WriteTextFile(path, out);
}

DepthMap ReadDepthPfm(const std::string& path) {
  const PfmImage img = ReadPfm(path);
  if (img.channels != 1) throw ParseError(path + ": expected 1-channel PFM");
  DepthMap d(img.width, img.height);
  for (int i = 0; i < d.size(); ++i) d[i] = img.data[i];
  return d;
}

void WriteDepthPfm(const std::string& path, const DepthMap& depth) {
  PfmImage img{depth.width(), depth.height(), 1, {}};
  img.data.reserve(depth.size());
  for (double x : depth.data()) img.data.push_back(static_cast<float>(x));
  WritePfm(path, img);
}

Image<Vec3> ReadNormalsPfm(const std::string& path) {
  const PfmImage img = ReadPfm(path);
  if (img.channels != 3) throw ParseError(path + ": expected 3-channel PFM");
  Image<Vec3> n(img.width, img.height);
  for (int i = 0; i < n.size(); ++i) {
    n[i] = Vec3(img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]);
  }
  return n;
}

void WriteNormalsPfm(const std::string& path, const Image<Vec3>& normals) {
  PfmImage img{normals.width(), normals.height(), 3, {}};
  img.data.reserve(3 * normals.size());
  for (const Vec3& n : normals.data()) {
    for (int c = 0; c < 3; ++c) img.data.push_back(static_cast<float>(n[c]));
  }
  WritePfm(path, img);
}

// ---------------------------------------------------------------------------
// PGM

void WriteLabelsPgm(const std::string& path, const LabelMap& labels) {
  int peak = 0;
  for (int x : labels.data()) {
    if (x < 0 || x > 65535) throw DomainError("label outside [0, 65535]");
    peak = std::max(peak, x);
  }
  const bool wide = peak > 255;
  std::string out = "P5\n" + std::to_string(labels.width()) + " " +
                    std::to_string(labels.height()) + "\n" +
                    (wide ? "65535" : "255") + "\n";
  for (int x : labels.data()) {
    if (wide) out.push_back(static_cast<char>((x >> 8) & 0xFF));
    out.push_back(static_cast<char>(x & 0xFF));
  }
  WriteTextFile(path, out);
}

LabelMap ReadLabelsPgm(const std::string& path) {
  const std::string bytes = ReadTextFile(path);
  HeaderReader r(bytes, path);
  if (r.Token() != "P5") r.Fail("expected binary PGM (P5)");
  const int w = ParseDimension(r, r.Token());
  const int h = ParseDimension(r, r.Token());
  const int maxval = ParseDimension(r, r.Token());
  if (maxval > 65535) r.Fail("maxval above 65535");
  r.EndOfHeader();
  const int bpp = maxval > 255 ? 2 : 1;
  const size_t expected = static_cast<size_t>(w) * h * bpp;
  const size_t actual = bytes.size() - r.pos();
  if (actual < expected) {
    r.Fail("truncated payload: expected " + std::to_string(expected) +
           " bytes, got " + std::to_string(actual));
  }
  LabelMap labels(w, h);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + r.pos());
  for (int i = 0; i < w * h; ++i) {
    labels[i] = bpp == 2 ? (p[2 * i] << 8) | p[2 * i + 1] : p[i];
  }
  return labels;
}

// ---------------------------------------------------------------------------
// Anchors

void WriteAnchorsCsv(const std::string& path, const AnchorSet& anchors) {
  std::string out = "u,v,depth\n";
  for (const Anchor& a : anchors) {
    out += std::to_string(a.u) + "," + std::to_string(a.v) + "," +
           FormatDouble(a.depth) + "\n";
  }
  WriteTextFile(path, out);
}

AnchorSet ReadAnchorsCsv(const std::string& path) {
  std::istringstream in(ReadTextFile(path));
  AnchorSet anchors;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row == 1 && line.find_first_of("0123456789") != 0 &&
        line.rfind("-", 0) != 0) {
      continue;  // header
    }
    std::istringstream cells(line);
    std::string su, sv, sd;
    Anchor a;
    try {
      if (!std::getline(cells, su, ',') || !std::getline(cells, sv, ',') ||
          !std::getline(cells, sd)) {
        throw std::invalid_argument("");
      }
      size_t used = 0;
      a.u = std::stoi(su, &used);
      if (used != su.size()) throw std::invalid_argument("");
      a.v = std::stoi(sv, &used);
      if (used != sv.size()) throw std::invalid_argument("");
      a.depth = std::stod(sd, &used);
      if (used != sd.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError(path + ": row " + std::to_string(row) +
                       ": expected u,v,depth");
    }
    if (!(a.depth > 0.0) || !std::isfinite(a.depth)) {
      throw ParseError(path + ": row " + std::to_string(row) +
                       ": depth must be positive");
    }
    anchors.push_back(a);
  }
  return anchors;
}

AnchorSet ReadAnchorsCsv(const std::string& path, int width, int height) {
  // Re-scan to attach row numbers to range errors.
  std::istringstream in(ReadTextFile(path));
  const AnchorSet anchors = ReadAnchorsCsv(path);
  std::string line;
  int row = 0;
  size_t next = 0;
  while (std::getline(in, line) && next < anchors.size()) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row == 1 && line.find_first_of("0123456789") != 0 &&
        line.rfind("-", 0) != 0) {
      continue;
    }
    const Anchor& a = anchors[next++];
    if (a.u < 0 || a.v < 0 || a.u >= width || a.v >= height) {
      throw DomainError(path + ": row " + std::to_string(row) + ": anchor (" +
                        std::to_string(a.u) + ", " + std::to_string(a.v) +
                        ") is outside the " + std::to_string(width) + "x" +
                        std::to_string(height) + " image");
    }
  }
  ValidateAnchors(anchors, width, height);
  return anchors;
}

// ---------------------------------------------------------------------------
// JSON documents

namespace {

int LineOf(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

json ParseJson(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": syntax error at line " +
                     std::to_string(LineOf(text, e.byte)) + ": " + e.what());
  }
}

const json& Field(const json& obj, const std::string& key,
                  const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError("missing field '" + (path.empty() ? key : path + "." + key) + "'");
  }
  return *it;
}

double Number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = Field(obj, key, path);
  if (!v.is_number()) {
    throw ParseError("field '" + path + "." + key + "' must be a number");
  }
  return v.get<double>();
}

double NumberOr(const json& obj, const std::string& key,
                const std::string& path, double fallback) {
  return obj.contains(key) ? Number(obj, key, path) : fallback;
}

int Integer(const json& obj, const std::string& key, const std::string& path) {
  const json& v = Field(obj, key, path);
  if (!v.is_number_integer()) {
    throw ParseError("field '" + path + "." + key + "' must be an integer");
  }
  return v.get<int>();
}

uint64_t SeedOr(const json& obj, const std::string& key,
                const std::string& path, uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ParseError("field '" + path + "." + key +
                     "' must be a nonnegative integer");
  }
  return v.get<uint64_t>();
}

Vec3 Vector(const json& obj, const std::string& key, const std::string& path) {
  const json& v = Field(obj, key, path);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
      !v[1].is_number() || !v[2].is_number()) {
    throw ParseError("field '" + path + "." + key +
                     "' must be an array of 3 numbers");
  }
  return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

CameraIntrinsics IntrinsicsFromValue(const json& j, const std::string& path) {
  CameraIntrinsics intr;
  intr.alpha_u = Number(j, "alpha_u", path);
  intr.alpha_v = Number(j, "alpha_v", path);
  intr.u0 = Number(j, "u0", path);
  intr.v0 = Number(j, "v0", path);
  intr.width = Integer(j, "width", path);
  intr.height = Integer(j, "height", path);
  try {
    intr.Validate();
  } catch (const ConfigError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return intr;
}

json IntrinsicsValue(const CameraIntrinsics& intr) {
  json j;
  j["alpha_u"] = intr.alpha_u;
  j["alpha_v"] = intr.alpha_v;
  j["u0"] = intr.u0;
  j["v0"] = intr.v0;
  j["width"] = intr.width;
  j["height"] = intr.height;
  return j;
}

json VectorValue(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

std::string IntrinsicsToJson(const CameraIntrinsics& intr) {
  return IntrinsicsValue(intr).dump(2) + "\n";
}

CameraIntrinsics IntrinsicsFromJson(const std::string& text) {
  return IntrinsicsFromValue(ParseJson(text, "intrinsics"), "intrinsics");
}

void WriteIntrinsicsJson(const std::string& path,
                         const CameraIntrinsics& intr) {
  WriteTextFile(path, IntrinsicsToJson(intr));
}

CameraIntrinsics ReadIntrinsicsJson(const std::string& path) {
  return IntrinsicsFromValue(ParseJson(ReadTextFile(path), path), path);
}

SceneSpec SceneSpecFromJson(const std::string& text) {
  const json j = ParseJson(text, "scene spec");
  SceneSpec spec;
  spec.intrinsics = IntrinsicsFromValue(Field(j, "intrinsics", ""), "intrinsics");
  spec.seed = SeedOr(j, "seed", "", 0);

  const json& prims = Field(j, "primitives", "");
  if (!prims.is_array() || prims.empty()) {
    throw ParseError("field 'primitives' must be a non-empty array");
  }
  for (size_t p = 0; p < prims.size(); ++p) {
    const std::string path = "primitives[" + std::to_string(p) + "]";
    const json& pj = prims[p];
    const json& kind = Field(pj, "kind", path);
    const int id = pj.contains("id") ? Integer(pj, "id", path)
                                     : static_cast<int>(p);
    if (kind == "plane") {
      Vec3 n = Vector(pj, "normal", path);
      if (!(n.norm() > 0.0)) {
        throw ParseError("field '" + path + ".normal' must be nonzero");
      }
      if (std::abs(n.norm() - 1.0) > 1e-12) n.normalize();
      spec.primitives.push_back(
          Primitive::Plane(id, n, Vector(pj, "point", path)));
    } else if (kind == "sphere") {
      const double radius = Number(pj, "radius", path);
      if (!(radius > 0.0)) {
        throw ParseError("field '" + path + ".radius' must be positive");
      }
      spec.primitives.push_back(
          Primitive::Sphere(id, Vector(pj, "center", path), radius));
    } else {
      throw ParseError("field '" + path +
                       ".kind' must be \"plane\" or \"sphere\"");
    }
  }

  spec.corruption.seed = StreamSeed(spec.seed, 1);
  if (j.contains("corruption")) {
    const json& c = j.at("corruption");
    const std::string path = "corruption";
    const json& mode = Field(c, "mode", path);
    if (!mode.is_string()) throw ParseError("field 'corruption.mode' must be a string");
    try {
      spec.corruption.mode = CorruptionModeFromString(mode.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError("field 'corruption.mode': " + std::string(e.what()));
    }
    spec.corruption.magnitude = Number(c, "magnitude", path);
    if (!(spec.corruption.magnitude >= 0.0)) {
      throw ParseError("field 'corruption.magnitude' must be >= 0");
    }
    spec.corruption.seed = SeedOr(c, "seed", path, spec.corruption.seed);
  }
  spec.confidence.seed = StreamSeed(spec.seed, 2);
  if (j.contains("confidence")) {
    const json& c = j.at("confidence");
    const std::string path = "confidence";
    spec.confidence.kappa_max = NumberOr(c, "kappa_max", path, 100.0);
    spec.confidence.kappa_min = NumberOr(c, "kappa_min", path, 1.0);
    spec.confidence.boundary_width =
        c.contains("boundary_width") ? Integer(c, "boundary_width", path) : 2;
    spec.confidence.noise_deg = NumberOr(c, "noise_deg", path, 0.0);
    spec.confidence.seed = SeedOr(c, "seed", path, spec.confidence.seed);
  }
  try {
    spec.Validate();
  } catch (const ConfigError& e) {
    throw ParseError(std::string("scene spec: ") + e.what());
  }
  return spec;
}

SceneSpec ReadSceneSpec(const std::string& path) {
  try {
    return SceneSpecFromJson(ReadTextFile(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string SceneSpecToJson(const SceneSpec& spec) {
  json j;
  j["intrinsics"] = IntrinsicsValue(spec.intrinsics);
  j["seed"] = spec.seed;
  json prims = json::array();
  for (const Primitive& p : spec.primitives) {
    json pj;
    pj["id"] = p.id;
    if (p.kind == PrimitiveKind::kPlane) {
      pj["kind"] = "plane";
      pj["normal"] = VectorValue(p.normal);
      pj["point"] = VectorValue(p.point);
    } else {
      pj["kind"] = "sphere";
      pj["center"] = VectorValue(p.center);
      pj["radius"] = p.radius;
    }
    prims.push_back(pj);
  }
  j["primitives"] = prims;
  j["corruption"] = {{"mode", ToString(spec.corruption.mode)},
                     {"magnitude", spec.corruption.magnitude},
                     {"seed", spec.corruption.seed}};
  j["confidence"] = {{"kappa_max", spec.confidence.kappa_max},
                     {"kappa_min", spec.confidence.kappa_min},
                     {"boundary_width", spec.confidence.boundary_width},
                     {"noise_deg", spec.confidence.noise_deg},
                     {"seed", spec.confidence.seed}};
  return j.dump(2) + "\n";
}

std::string PolicyParamsToJson(const PolicyParams& params) {
  json arr = json::array();
  for (int f = 0; f < kNumFeatures; ++f) {
    arr.push_back({{"name", FeatureNames()[f]}, {"value", params.theta[f]}});
  }
  return arr.dump(2) + "\n";
}

PolicyParams PolicyParamsFromJson(const std::string& text) {
  const json j = ParseJson(text, "policy params");
  if (!j.is_array() || j.size() != kNumFeatures) {
    throw ParseError("policy params must be an array of " +
                     std::to_string(kNumFeatures) + " coefficients");
  }
  PolicyParams params;
  for (int f = 0; f < kNumFeatures; ++f) {
    const std::string path = "[" + std::to_string(f) + "]";
    const json& name = Field(j[f], "name", path);
    if (name != FeatureNames()[f]) {
      throw ParseError("coefficient " + path + " must be named '" +
                       FeatureNames()[f] + "'");
    }
    params.theta[f] = Number(j[f], "value", path);
  }
  return params;
}

void WritePolicyParams(const std::string& path, const PolicyParams& params) {
  WriteTextFile(path, PolicyParamsToJson(params));
}

PolicyParams ReadPolicyParams(const std::string& path) {
  return PolicyParamsFromJson(ReadTextFile(path));
}

void WriteTrainLogCsv(const std::string& path, const std::vector<double>& log) {
  std::string out = "epoch,loss\n";
  for (size_t e = 0; e < log.size(); ++e) {
    out += std::to_string(e) + "," + FormatDouble(log[e]) + "\n";
  }
  WriteTextFile(path, out);
}

void WriteTraceCsv(const std::string& path,
                   const std::vector<IterationSummary>& trace) {
  std::string out = "iteration,rmse,abs_rel,mean_normal_error_deg\n";
  for (const auto& s : trace) {
    out += std::to_string(s.iteration) + "," + FormatDouble(s.rmse) + "," +
           FormatDouble(s.abs_rel) + "," +
           FormatDouble(s.mean_normal_error_deg) + "\n";
  }
  WriteTextFile(path, out);
}

namespace {

json NullableNumber(double x) { return std::isfinite(x) ? json(x) : json(); }

}  // namespace

std::string MetricsReportToJson(const MetricsReport& r) {
  json j;
  j["depth"] = {{"abs_rel", r.depth.abs_rel}, {"rmse", r.depth.rmse},
                {"log10", r.depth.log10},     {"delta1", r.depth.delta1},
                {"delta2", r.depth.delta2},   {"delta3", r.depth.delta3}};
  if (r.has_normals) {
    j["normal"] = {{"mean", r.normals.mean},
                   {"median", r.normals.median},
                   {"rmse", r.normals.rmse},
                   {"pct_11_25", r.normals.pct_11_25},
                   {"pct_22_5", r.normals.pct_22_5},
                   {"pct_30", r.normals.pct_30}};
  }
  if (r.has_planarity) {
    j["planarity"] = {{"eps_plan", NullableNumber(r.planarity.eps_plan)},
                      {"eps_orie", NullableNumber(r.planarity.eps_orie)}};
  }
  return j.dump(2) + "\n";
}

std::vector<std::string> MetricsCsvHeader() {
  return {"depth.abs_rel",    "depth.rmse",         "depth.log10",
          "depth.delta1",     "depth.delta2",       "depth.delta3",
          "normal.mean",      "normal.median",      "normal.rmse",
          "normal.pct_11_25", "normal.pct_22_5",    "normal.pct_30",
          "planarity.eps_plan", "planarity.eps_orie"};
}

std::vector<std::string> MetricsCsvRow(const MetricsReport& r) {
  auto cell = [](bool present, double x) {
    return present ? FormatDouble(x) : std::string();
  };
  return {FormatDouble(r.depth.abs_rel),
          FormatDouble(r.depth.rmse),
          FormatDouble(r.depth.log10),
          FormatDouble(r.depth.delta1),
          FormatDouble(r.depth.delta2),
          FormatDouble(r.depth.delta3),
          cell(r.has_normals, r.normals.mean),
          cell(r.has_normals, r.normals.median),
          cell(r.has_normals, r.normals.rmse),
          cell(r.has_normals, r.normals.pct_11_25),
          cell(r.has_normals, r.normals.pct_22_5),
          cell(r.has_normals, r.normals.pct_30),
          cell(r.has_planarity, r.planarity.eps_plan),
          cell(r.has_planarity, r.planarity.eps_orie)};
}

}  // namespace ngdr
