#pragma once

#include <stdexcept>
#include <string>

namespace netrank {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Precondition violation on a scalar argument (probability out of (0,1), ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Requested quantile lies outside [f(lo), f(hi)] for a bisection solver.
class BracketError : public Error {
 public:
  explicit BracketError(const std::string& what) : Error(what) {}
};

// Pivot collapsed during Gaussian elimination.
class SingularMatrixError : public Error {
 public:
  explicit SingularMatrixError(const std::string& what) : Error(what) {}
};

// Mismatched vector/matrix dimensions.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

// Sample too degenerate to estimate or test: empty blocks, zero block
// densities, estimated rates at/above 1, vanishing variances, non-convex
// quadratics.  Process exit code 3 at the CLI boundary.
class DegenerateStatisticsError : public Error {
 public:
  explicit DegenerateStatisticsError(const std::string& what) : Error(what) {}
};

// Model parameters infeasible at the requested size (edge probability or
// deletion rate outside [0,1]).  Process exit code 4 at the CLI boundary.
class InfeasibleParameterError : public Error {
 public:
  explicit InfeasibleParameterError(const std::string& what) : Error(what) {}
};

// Malformed or inconsistent input files.  Process exit code 2.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace netrank
