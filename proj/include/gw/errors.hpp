#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gw {

// Operand dimensions do not line up.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A configuration value or argument is outside its admissible range.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Starting plan unusable for the selected method (e.g. not strictly positive).
struct InitError : ParameterError {
  using ParameterError::ParameterError;
};

// Input lies outside an operation's mathematical domain.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A row or column carries zero mass where a scaling step must divide by it.
struct DegenerateMassError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative routine hit its sweep cap before reaching tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), residual_(last_residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Inner Sinkhorn loop failed to reach its tolerance within its budget.
class InnerConvergenceError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

// Malformed input file; carries the 1-based offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gw
