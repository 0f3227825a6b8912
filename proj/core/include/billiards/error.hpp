#pragma once

#include <stdexcept>
#include <string>

namespace billiards {

enum class ErrorKind {
  InvalidInput,     // bad configuration or precondition violation
  Geometry,         // non-convex shape, overlapping obstacles, lost convexity
  Inadmissible,     // symbolic word or splice violates the transition rule
  Escape,           // ray leaves the table without hitting an obstacle
  Tangency,         // collision too close to tangential
  NonConvergence,   // iterative solver hit its cap
  Insufficient,     // not enough data (orbits, Cantor points) for an estimate
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace billiards
