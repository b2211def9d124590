#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pgsa/measures.hpp"
#include "pgsa/weights.hpp"

namespace pgsa {

/// Eigenpairs of the weighted Neumann Sturm-Liouville operator on a P1 grid.
/// Mode 0 (the constant) is solved for, checked against zero and dropped;
/// eigenfunctions are centered, mu-orthonormal, with positive value at the
/// right endpoint. Nodal derivatives come from adjacent-slope averaging.
struct SpectralBasis {
  std::vector<double> nodes;
  std::vector<double> eigenvalues;                  // lambda_1 <= lambda_2 <= ...
  std::vector<std::vector<double>> eigenfunctions;  // values at nodes, index n-1
  std::vector<std::vector<double>> derivatives;     // e_n' at nodes
  double lambda0 = 0.0;                             // discarded zero mode
  std::vector<double> residuals;                    // ||K v - lambda M v|| / ||M v||

  double poincare_constant() const { return 1.0 / eigenvalues.at(0); }
  double eval(int n, double x) const;
  double eval_derivative(int n, double x) const;
  int size() const { return static_cast<int>(eigenvalues.size()); }
};

SpectralBasis solve_eigenbasis(const ProbabilityMeasure& m, const WeightCurve& w,
                               int num_eig, int cells = 500);

double poincare_constant(const ProbabilityMeasure& m, const WeightCurve& w,
                         int cells = 500);

/// Tabulated intertwining functional together with its grid infimum.
struct IntertwiningProfile {
  std::vector<double> x;
  std::vector<double> values;
  double infimum = 0.0;
  double argmin = 0.0;
  double parameter = 0.0;  // epsilon, or NaN for explicit-h profiles
};

/// M_{w,eps} = (1-eps) w (eps ((log rho)')^2 - (log rho)''), tabulated on an
/// interior grid (mapped through tan on unbounded supports).
IntertwiningProfile intertwining_profile_eps(const ProbabilityMeasure& m,
                                             const WeightCurve& w, double eps,
                                             int grid = 2001);

/// 1 / sup_eps inf_x M_{w,eps}; the eps sweep uses 401 points on [0,1]
/// followed by golden-section refinement. Throws bound_unavailable_error
/// when no eps yields a positive infimum.
double intertwining_bound(const ProbabilityMeasure& m, const WeightCurve& w,
                          int eps_grid = 401, int x_grid = 2001);

/// M_{w,h} = (-L_w h)'/h' for an explicit h' (and h''); h''' is recovered by
/// high-order differences of h''.
IntertwiningProfile intertwining_profile_h(const ProbabilityMeasure& m,
                                           const WeightCurve& w,
                                           const std::function<double(double)>& hp,
                                           const std::function<double(double)>& hpp,
                                           int grid = 2001);

/// (int f^2 dmu) / (int w (f')^2 dmu) with f auto-centered. Finite supports
/// integrate on a refined cell grid; unbounded supports use geometrically
/// extended cells and fail when the tail does not converge.
double rayleigh_quotient(const ProbabilityMeasure& m, const WeightCurve& w,
                         const std::function<double(double)>& f,
                         const std::function<double(double)>& fp);

/// Family f_eta of centered test functions whose Rayleigh quotient has a
/// registered closed form, approaching 1/C_P as eta -> eta_star. Available
/// for exponential, generalized logistic, Pareto (w = x^2), power
/// (w = x^2 (1 - x^{alpha/2})) and symmetric beta (w = (1-x^2)^2).
struct LimitQuotientFamily {
  double eta_star = 0.0;
  double limit = 0.0;  // quotient value in the eta -> eta_star limit
  std::function<double(double)> quotient;  // closed form, eta -> value
  std::function<std::function<double(double)>(double)> make_f, make_fp;
  WeightCurve weight;
};

LimitQuotientFamily limit_quotient_family(const ProbabilityMeasure& m);

namespace detail {
SaturatingFunction gaussian_reference_saturating(const ProbabilityMeasure& m, int nodes);
}

}  // namespace pgsa
