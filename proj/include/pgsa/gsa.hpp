#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pgsa/estimate.hpp"
#include "pgsa/measures.hpp"
#include "pgsa/rng.hpp"
#include "pgsa/spectral.hpp"
#include "pgsa/weights.hpp"

namespace pgsa {

enum class GradientMode { analytic, finite_difference, tabulated };

/// A deterministic map R^d -> R with independent inputs. Gradients come from
/// the analytic callback when present, otherwise central differences with
/// step 1e-4 (b_i - a_i), one-sided within a step of the boundary.
struct Model {
  std::string name;
  std::vector<ProbabilityMeasure> inputs;
  std::function<double(std::span<const double>)> evaluate;
  std::function<void(std::span<const double>, std::span<double>)> analytic_gradient;
  GradientMode gradient_mode = GradientMode::finite_difference;
  /// optional: true when x sits within one FD step of a model kink
  std::function<bool(std::span<const double>)> kink_proximity;
  /// per-input overrides for main-effect fitting (e.g. piecewise-affine knots)
  std::vector<std::optional<FitOptions>> fit_overrides;

  int dimension() const { return static_cast<int>(inputs.size()); }
  double partial(std::span<const double> x, int i) const;
  void gradient(std::span<const double> x, std::span<double> out) const;
  double fd_step(int i) const;

  /// one joint draw, inputs in index order
  void sample_row(RandomStream& rng, std::span<double> out) const;
};

struct SobolEstimate {
  std::vector<double> total;  // clipped to [-0.05, 1.05] for display
  std::vector<double> raw;
  int n = 0;
  std::string estimator = "jansen";
};

/// Jansen pick-freeze estimator of all total indices from n(d+1) evaluations.
SobolEstimate sobol_total_reference(const Model& model, int n, RandomStream& rng);

/// Monte-Carlo weighted DGSM: E[w(X_i) (d_i f(X))^2] over n joint draws.
double weighted_dgsm(const Model& model, int i, const WeightCurve& w, int n,
                     RandomStream& rng);

enum class WeightKind { unit, lin, uniform_ref, gauss_ref, data_driven };
std::string weight_kind_name(WeightKind k);
WeightKind weight_kind_from_name(const std::string& s);

/// Weight curve plus the Poincare constant that goes with it (1 for every
/// saturating-function construction, FEM or closed form for the unit weight).
struct PreparedWeight {
  WeightCurve curve;
  double c_p = 1.0;
  WeightKind kind = WeightKind::unit;
  bool non_monotone_warning = false;
};

PreparedWeight prepare_weight(const ProbabilityMeasure& m, WeightKind kind,
                              int nodes = 500, int cells = 500,
                              const MainEffectFit* fit = nullptr);

struct DgsmBound {
  int input = 0;
  std::string kind;
  double c_p = 0.0;
  double nu = 0.0;
  double value = 0.0;
  double q025 = 0.0, q50 = 0.0, q975 = 0.0;
};

DgsmBound dgsm_upper_bound(const Model& model, int i, const PreparedWeight& w, int n,
                           int boot, RandomStream& rng);

struct StabilityResult {
  double upper = 0.0;  // C_P nu / Var
  double s_tot = 0.0;
  double gap = 0.0;    // upper - s_tot, in [0, bound]
  double bound = 0.0;  // C_P E[v^2] eps / Var
};

/// Stability of the upper bound for a separated model
/// f = u(x_{-i}) + h(x_i) v(x_{-i}); everything is evaluated by quadrature.
/// `g` saturates the weighted inequality (C_P = 1 after its normalization).
StabilityResult stability_gap(const ProbabilityMeasure& m_i, const WeightCurve& w,
                              double c_p, const std::function<double(double)>& h,
                              const std::function<double(double)>& hp,
                              const std::function<double(double)>& g,
                              const std::function<double(double)>& gp, double var_u,
                              double mean_v_sq, int cells = 2000);

struct MultiIndexCoeff {
  std::vector<int> alpha;
  double der_free = 0.0;
  double der_based = 0.0;
};

struct PoinceApprox {
  int input = 0;
  std::string kind;
  double der_free = 0.0;
  double der_based = 0.0;
  double free_q025 = 0.0, free_q50 = 0.0, free_q975 = 0.0;
  double based_q025 = 0.0, based_q50 = 0.0, based_q975 = 0.0;
  std::vector<MultiIndexCoeff> coefficients;
};

/// Chaos approximation of S_i^tot over the truncation set
/// A_i = { alpha : alpha_i in {1,2}, sum_{j != i} alpha_j <= 1 }.
/// Requires two eigenpairs for input i and one for every other input;
/// weights must be the ones the bases were built with.
PoinceApprox poince_approx(const Model& model, int i,
                           const std::vector<SpectralBasis>& bases,
                           const std::vector<WeightCurve>& weights, int n, int boot,
                           RandomStream& rng);

struct ReportConfig {
  std::vector<WeightKind> bound_kinds{WeightKind::unit, WeightKind::lin,
                                      WeightKind::data_driven};
  std::vector<WeightKind> poince_kinds{};
  int n = 150;
  int ref_n = 10000;
  int fit_n = 150;
  int boot = 100;
  int nodes = 500;
  int cells = 500;
  std::uint64_t seed = 0;
};

struct InputReport {
  int index = 0;
  double s_tot_ref = 0.0;
  double s_tot_raw = 0.0;
  std::vector<DgsmBound> bounds;
  std::vector<PoinceApprox> poince;
  std::vector<std::string> errors;  // per-cell failure markers
};

struct GsaReport {
  std::string model;
  std::uint64_t seed = 0;
  int n = 0, ref_n = 0, boot = 0;
  double variance = 0.0;
  int kink_flagged = 0;
  std::vector<InputReport> per_input;

  std::string to_json() const;
  std::string to_csv() const;
};

GsaReport build_report(const Model& model, const ReportConfig& config);

/// Fixed-slice deterministic parallel loop; thread count is capped by the
/// GSA_THREADS environment variable (default: sequential).
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

double quantile_of(std::vector<double> values, double p);

}  // namespace pgsa
