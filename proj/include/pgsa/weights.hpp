#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgsa/measures.hpp"

namespace pgsa {

/// How an endpoint value of a weight curve was obtained.
enum class BoundaryProvenance { zero, limit_formula, extrapolated };

/// Centered monotone function g used to generate a weight. `value` and
/// `derivative` are required; the endpoint second derivative is optional and
/// falls back to one-sided differences where needed.
struct SaturatingFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> second_derivative;  // may be empty
  int monotonicity = +1;
  // set when the construction guarantees g'(endpoint) == 0 (or != 0)
  std::optional<bool> derivative_zero_at_a;
  std::optional<bool> derivative_zero_at_b;
};

/// A weight w on [a,b], either closed form (callables) or tabulated on a
/// grid with piecewise-linear interpolation. Positive on the interior.
class WeightCurve {
 public:
  WeightCurve() = default;  // empty; assign from a factory before use

  static WeightCurve from_functions(Interval support,
                                    std::function<double(double)> w,
                                    std::function<double(double)> dw = nullptr,
                                    std::function<double(double)> d2w = nullptr,
                                    std::string label = "custom");
  static WeightCurve unit(Interval support);
  static WeightCurve tabulated(std::vector<double> x, std::vector<double> w,
                               std::pair<BoundaryProvenance, BoundaryProvenance> prov,
                               std::string label = "tabulated");

  double operator()(double x) const { return value(x); }
  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  bool closed_form() const { return static_cast<bool>(w_); }
  const Interval& support() const { return support_; }
  const std::string& label() const { return label_; }
  std::pair<double, double> boundary_values() const;
  std::pair<BoundaryProvenance, BoundaryProvenance> boundary_provenance() const {
    return prov_;
  }

  /// Tabulated representation; closed-form curves are sampled on demand.
  const std::vector<double>& grid() const;
  const std::vector<double>& grid_values() const;
  std::pair<std::vector<double>, std::vector<double>> sampled(int nodes) const;

  /// CSV with header `x,w`, >= 10 significant digits, LF endings.
  void write_csv(std::ostream& os) const;
  static WeightCurve read_csv(std::istream& is, std::string label = "csv");

 private:
  Interval support_;
  std::string label_;
  std::pair<BoundaryProvenance, BoundaryProvenance> prov_ =
      {BoundaryProvenance::extrapolated, BoundaryProvenance::extrapolated};
  // closed form
  std::function<double(double)> w_, dw_, d2w_;
  // tabulated
  std::vector<double> xs_, ws_;
};

/// Closed-form weight for the linear saturating function (uniform,
/// exponential, normal, generalized Cauchy, Pareto; full or truncated as
/// listed). Throws unsupported_error when no closed form is listed and
/// domain_error when the full-support moment condition fails.
WeightCurve weight_lin_closed_form(const ProbabilityMeasure& m);

/// Linear saturating function x - E[X] for m.
SaturatingFunction linear_saturating(const ProbabilityMeasure& m);

/// Weight generated by a centered monotone g: solves (u)' = -g rho with
/// u(a) = 0 by classical RK4 on a uniform grid of `nodes` cells, then divides
/// by g' rho. Endpoint values follow the limit rules; where the raw division
/// is 0/0 the two neighbouring nodes are patched by quadratic extrapolation.
WeightCurve weight_from_g(const ProbabilityMeasure& m, const SaturatingFunction& g,
                          int nodes = 500);

enum class ReferenceKind { uniform_ref, gaussian_ref };

/// Non-vanishing weight from a reference measure: cosine eigenfunction of
/// the uniform reference, or the first eigenfunction of the unweighted
/// operator for a truncated Gaussian covering 95% of [a,b].
std::pair<WeightCurve, SaturatingFunction> reference_weight(
    const ProbabilityMeasure& m, ReferenceKind kind, int nodes = 500);

enum class Endpoint { left, right };

/// Limit value of w_g at a finite endpoint: 0 when g' != 0 there,
/// -g/g'' when g' = 0 and g'' != 0.
double boundary_value(const SaturatingFunction& g, const ProbabilityMeasure& m,
                      Endpoint end, int nodes = 500);

}  // namespace pgsa
