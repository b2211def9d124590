#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pgsa/rng.hpp"

namespace pgsa {

struct Interval {
  double a = -std::numeric_limits<double>::infinity();
  double b = std::numeric_limits<double>::infinity();

  bool finite() const;
  double length() const { return b - a; }
  bool contains(double x) const { return x >= a && x <= b; }
};

enum class Family {
  uniform,
  normal,
  exponential,
  gumbel,
  triangular,
  generalized_cauchy,
  pareto,
  symmetric_beta,
  power,
  generalized_logistic,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// One-dimensional input distribution: density, scores, moments, quadrature
/// and sampling, optionally truncated to a finite window. Immutable after
/// construction; safe to share across threads.
class ProbabilityMeasure {
 public:
  static ProbabilityMeasure uniform(double a, double b);
  static ProbabilityMeasure normal(double mean, double variance);
  static ProbabilityMeasure exponential(double rate);
  static ProbabilityMeasure gumbel(double location, double scale);
  static ProbabilityMeasure triangular(double a, double mode, double b);
  static ProbabilityMeasure generalized_cauchy(double beta);
  static ProbabilityMeasure pareto(double z, double alpha);
  static ProbabilityMeasure symmetric_beta(double beta);
  static ProbabilityMeasure power(double alpha);
  static ProbabilityMeasure generalized_logistic(double alpha);

  /// Restriction to [lo,hi]; the density is renormalized by the untruncated
  /// mass of the window.
  ProbabilityMeasure truncated(double lo, double hi) const;

  /// Parse {"family": ..., "params": {...}, "truncation": [a,b]}.
  /// Unknown fields are rejected.
  static ProbabilityMeasure from_json_text(const std::string& text);
  std::string to_json_text() const;

  Family family() const { return family_; }
  const Interval& support() const { return support_; }
  bool finite_support() const { return support_.finite(); }
  bool is_truncated() const { return truncation_.has_value(); }
  double normalization() const { return normalization_; }
  /// Family parameters in declaration order (e.g. {mean, variance}).
  std::span<const double> params() const { return {par_, par_ + npar_}; }
  std::string description() const;

  /// Interior points where the density is only piecewise smooth.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  double density(double x) const;
  double log_density_derivative(double x) const;
  /// (log rho)''; available for every family except triangular-at-the-mode.
  double score_derivative(double x) const;

  double mean() const;
  double cdf(double x) const;
  double quantile(double u) const;

  double sample_one(RandomStream& rng) const;
  std::vector<double> sample(std::size_t n, RandomStream& rng) const;

  /// Integral of f against the measure by composite 5-point Gauss-Legendre
  /// on `cells` equal cells (split at density breakpoints). Finite support
  /// only.
  double quadrature(const std::function<double(double)>& f, int cells = 500) const;

  /// Quadrature grid for this measure: cell edges on the support, split at
  /// breakpoints.
  std::vector<double> cell_edges(int cells = 500) const;

 private:
  ProbabilityMeasure() = default;
  void finalize();

  double raw_density(double x) const;   // untruncated, normalized on base support
  double raw_cdf(double x) const;       // untruncated CDF, closed form or table
  bool has_closed_cdf() const;
  double raw_quantile(double u) const;  // inverse of raw_cdf

  Family family_ = Family::uniform;
  double par_[3] = {0, 0, 0};
  int npar_ = 0;
  Interval base_support_;
  std::optional<Interval> truncation_;
  Interval support_;
  double normalization_ = 1.0;
  bool needs_truncation_ = false;  // density defined only after truncation
  std::vector<double> breakpoints_;
  // cached CDF table on the standard grid, for families without a closed form
  std::vector<double> cdf_nodes_, cdf_vals_;
};

/// Composite 5-point Gauss-Legendre of a plain function over [a,b].
double integrate(const std::function<double(double)>& f, double a, double b, int cells);
double integrate_edges(const std::function<double(double)>& f, std::span<const double> edges);

}  // namespace pgsa
