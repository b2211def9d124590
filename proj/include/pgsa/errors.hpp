#pragma once

#include <stdexcept>
#include <string>

namespace pgsa {

/// Numerical failure: a solver or quadrature could not reach its contract.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Eigensolver-specific failure (degenerate weight, non-convergence).
class spectral_error : public numerical_error {
 public:
  explicit spectral_error(const std::string& msg) : numerical_error(msg) {}
};

/// Requested closed form / capability does not exist for this input.
class unsupported_error : public std::runtime_error {
 public:
  explicit unsupported_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Data degenerate for the requested statistic (zero variance, all-equal ...).
class degenerate_error : public std::runtime_error {
 public:
  explicit degenerate_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// No positive intertwining infimum exists on the searched grid.
class bound_unavailable_error : public std::runtime_error {
 public:
  explicit bound_unavailable_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pgsa
