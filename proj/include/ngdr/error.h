#pragma once

#include <stdexcept>
#include <string>

namespace ngdr {

// Input outside an operation's mathematical domain (nonpositive depth,
// mismatched dimensions, empty mask, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent configuration (stride does not divide image size, bad
// window, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A weight field or other caller-supplied structure broke its invariant.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Scene rendering left a pixel without a surface.
class CoverageError : public std::runtime_error {
 public:
  CoverageError(int u, int v)
      : std::runtime_error("pixel (" + std::to_string(u) + ", " +
                           std::to_string(v) +
                           ") does not intersect any primitive"),
        u_(u),
        v_(v) {}
  int u() const { return u_; }
  int v() const { return v_; }

 private:
  int u_;
  int v_;
};

// Malformed file or document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training loss blew up.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ngdr
