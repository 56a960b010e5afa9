#pragma once

#include <stdexcept>
#include <string>

namespace shapelab {

// Bad input: a precondition on user-supplied parameters failed.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: a solver did not converge or a bracket was lost.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace shapelab
