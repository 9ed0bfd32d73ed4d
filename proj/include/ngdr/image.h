#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ngdr/error.h"

namespace ngdr {

using Vec3 = Eigen::Vector3d;

// Row-major 2D grid. Pixel (u, v) is column u, row v.
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, const T& fill = T())
      : width_(width), height_(height) {
    if (width < 0 || height < 0) throw DomainError("negative image size");
    data_.assign(static_cast<size_t>(width) * height, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int size() const { return width_ * height_; }
  bool empty() const { return data_.empty(); }

  bool InBounds(int u, int v) const {
    return u >= 0 && v >= 0 && u < width_ && v < height_;
  }
  int Index(int u, int v) const { return v * width_ + u; }

  T& operator()(int u, int v) { return data_[Index(u, v)]; }
  const T& operator()(int u, int v) const { return data_[Index(u, v)]; }
  T& operator[](int i) { return data_[i]; }
  const T& operator[](int i) const { return data_[i]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  template <typename U>
  bool SameShape(const Image<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Image& other) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// Metric depth in meters; every value must be finite and positive.
using DepthMap = Image<double>;
using LabelMap = Image<int>;
using Mask = Image<uint8_t>;

// Unit surface normals plus per-pixel confidence kappa >= 0.
struct NormalMap {
  Image<Vec3> normals;
  Image<double> kappa;

  NormalMap() = default;
  NormalMap(int width, int height)
      : normals(width, height, Vec3(0, 0, -1)), kappa(width, height, 1.0) {}

  int width() const { return normals.width(); }
  int height() const { return normals.height(); }
};

inline constexpr double kUnitNormalTolerance = 1e-6;

// Throws DomainError when a value is nonpositive or non-finite.
void ValidateDepth(const DepthMap& depth);
// Throws DomainError on a non-unit normal, a negative kappa, or mismatched
// normal/kappa grids.
void ValidateNormals(const NormalMap& normals);

}  // namespace ngdr
