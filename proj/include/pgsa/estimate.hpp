#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pgsa/measures.hpp"
#include "pgsa/weights.hpp"

namespace pgsa {

enum class FitDirection { automatic, increasing, decreasing };

struct FitOptions {
  FitDirection direction = FitDirection::automatic;
  int degree = 6;              // monotone basis size
  double penalty_scale = 0.12; // roughness penalty, scaled by 1/sqrt(n)
  // when set, fit an increasing piecewise-affine function on these knots
  std::optional<std::vector<double>> affine_knots;
  int input_index = -1;
};

/// Strictly monotone C^1 estimate of a main effect, centered against the
/// input measure. Monotonicity comes from a nonnegative expansion in an
/// integrated Bernstein basis (least squares with a light roughness penalty,
/// solved by active-set NNLS); a linear tilt keeps |f'| >= slope_floor.
class MainEffectFit {
 public:
  double operator()(double x) const;
  double derivative(double x) const;

  int input_index() const { return input_index_; }
  int direction() const { return direction_; }
  double slope_floor() const { return floor_; }
  double centering_offset() const { return offset_; }
  bool non_monotone_warning() const { return warn_; }
  const Interval& support() const { return support_; }

  SaturatingFunction saturating() const;

  /// CSV with header `x,f_hat,d_f_hat` on a uniform grid.
  void write_csv(std::ostream& os, int nodes = 500) const;
  std::string flags_json() const;

 private:
  friend MainEffectFit fit_main_effect_monotone(std::span<const double>,
                                                std::span<const double>,
                                                const ProbabilityMeasure&,
                                                const FitOptions&);
  double raw(double x) const;        // increasing orientation, before tilt/center
  double raw_derivative(double x) const;

  Interval support_;
  int input_index_ = -1;
  int direction_ = +1;
  double floor_ = 0.0;
  double offset_ = 0.0;
  bool warn_ = false;
  // monotone-basis representation
  std::vector<double> coeffs_;  // nonnegative
  double intercept_ = 0.0;
  int degree_ = 0;
  // piecewise-affine representation (used when affine_knots is given)
  std::vector<double> knots_, knot_values_;
};

MainEffectFit fit_main_effect_monotone(std::span<const double> x,
                                       std::span<const double> y,
                                       const ProbabilityMeasure& m,
                                       const FitOptions& opts = {});

/// Data-driven weight w_{f_hat}; boundary values are zero because the fit
/// derivative is bounded away from zero at the endpoints.
WeightCurve data_driven_weight(const MainEffectFit& fit, const ProbabilityMeasure& m,
                               int nodes = 500);

struct Curve {
  std::vector<double> x, y;
};

/// Unconstrained local quadratic regression (tricube kernel) for reference
/// panels; bandwidth is the window half-width in x units.
Curve estimate_main_effect_reference(std::span<const double> x,
                                     std::span<const double> y, double bandwidth,
                                     int grid = 201);

double spearman_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace pgsa
