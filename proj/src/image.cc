#include "ngdr/image.h"

#include <cmath>
#include <string>

namespace ngdr {

void ValidateDepth(const DepthMap& depth) {
  for (int v = 0; v < depth.height(); ++v) {
    for (int u = 0; u < depth.width(); ++u) {
      const double d = depth(u, v);
      if (!std::isfinite(d) || d <= 0.0) {
        throw DomainError("depth at (" + std::to_string(u) + ", " +
                          std::to_string(v) + ") is not positive and finite");
      }
    }
  }
}

void ValidateNormals(const NormalMap& nmap) {
  if (!nmap.normals.SameShape(nmap.kappa)) {
    throw DomainError("normal and kappa grids differ in size");
  }
  for (int i = 0; i < nmap.normals.size(); ++i) {
    const double len = nmap.normals[i].norm();
    if (!(std::abs(len - 1.0) <= kUnitNormalTolerance)) {
      throw DomainError("normal " + std::to_string(i) + " is not unit length");
    }
    if (!(nmap.kappa[i] >= 0.0)) {
      throw DomainError("kappa " + std::to_string(i) + " is negative");
    }
  }
}

}  // namespace ngdr
