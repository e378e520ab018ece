#pragma once

#include <stdexcept>
#include <string>

namespace parest {

// Invalid argument or violated precondition of a formula / operation.
class parameter_error : public std::invalid_argument {
 public:
  explicit parameter_error(const std::string& what) : std::invalid_argument(what) {}
};

// Structurally valid parameters for which the requested bound does not exist
// (e.g. a contraction factor >= 1, or a nonpositive denominator).
class infeasible_error : public std::runtime_error {
 public:
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver failed to converge; carries the last residual in the message.
class solver_error : public std::runtime_error {
 public:
  solver_error(const std::string& what, double last_residual)
      : std::runtime_error(what), residual(last_residual) {}
  double residual;
};

// Config / expression syntax errors.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace parest
