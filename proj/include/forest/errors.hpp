#ifndef FOREST_ERRORS_HPP
#define FOREST_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace forest {

/// Malformed input text. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Structurally invalid graph data (self-loop, duplicate edge, bad weight, bad id).
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Problem too large for the requested method (dense limit, subset budget).
class CapacityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Floating-point breakdown: a Sherman-Morrison denominator or a sketch
/// estimate lost positivity.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver stopped before reaching its residual target.
class SolverError : public NumericalError {
public:
  SolverError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

} // namespace forest

#endif
