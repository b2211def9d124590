#include <cmath>
#include <memory>

#include "doctest.h"
#include "helpers.hpp"
#include "pgsa/errors.hpp"
#include "pgsa/gsa.hpp"
#include "pgsa/models.hpp"

using namespace pgsa;

namespace {

Model single_variable_model() {
  Model m;
  m.name = "f(x)=x1";
  m.inputs = {ProbabilityMeasure::uniform(0, 1), ProbabilityMeasure::uniform(0, 1)};
  m.evaluate = [](std::span<const double> x) { return x[0]; };
  m.analytic_gradient = [](std::span<const double>, std::span<double> g) {
    g[0] = 1.0;
    g[1] = 0.0;
  };
  m.gradient_mode = GradientMode::analytic;
  return m;
}

}  // namespace

TEST_CASE("Jansen estimator on a single-variable model") {
  Model m = single_variable_model();
  RandomStream rng(1001);
  SobolEstimate est = sobol_total_reference(m, 10000, rng);
  CHECK(std::abs(est.raw[0] - 1.0) < 0.02);
  CHECK(std::abs(est.raw[1] - 0.0) < 0.02);
}

TEST_CASE("Jansen estimator matches the toy oracles") {
  {
    Model m = toy1_model();
    RandomStream rng(77);
    SobolEstimate est = sobol_total_reference(m, 10000, rng);
    const auto oracle = toy1_sobol_oracle();
    for (int i = 0; i < 5; ++i) CHECK(std::abs(est.raw[i] - oracle[i]) < 0.02);
  }
  {
    Model m = toy2_model();
    RandomStream rng(78);
    SobolEstimate est = sobol_total_reference(m, 10000, rng);
    const auto oracle = toy2_sobol_oracle();
    for (int i = 0; i < 5; ++i) CHECK(std::abs(est.raw[i] - oracle[i]) < 0.02);
  }
}

TEST_CASE("weighted DGSM values") {
  Model m = single_variable_model();
  auto u = ProbabilityMeasure::uniform(0, 1);
  RandomStream rng(5);
  const double nu_lin = weighted_dgsm(m, 0, weight_lin_closed_form(u), 20000, rng);
  CHECK(std::abs(nu_lin - 1.0 / 12) < 2e-3);
  RandomStream rng2(6);
  CHECK(weighted_dgsm(m, 1, weight_lin_closed_form(u), 2000, rng2) ==
        doctest::Approx(0.0));
  RandomStream rng3(7);
  CHECK(weighted_dgsm(m, 0, WeightCurve::unit(u.support()), 2000, rng3) ==
        doctest::Approx(1.0));
}

TEST_CASE("quadrature equality case: f = x1 with the lin weight") {
  // bound = C_P int w dmu / Var(X1) = 1 exactly
  auto u = ProbabilityMeasure::uniform(0, 1);
  auto w = weight_lin_closed_form(u);
  const double nu = u.quadrature([&](double x) { return w.value(x); });
  const double var = 1.0 / 12;
  CHECK(std::abs(1.0 * nu / var - 1.0) < 1e-3);
  // unweighted version is strictly larger than one
  const double cp_unit = 1.0 / (M_PI * M_PI);
  CHECK(cp_unit * 1.0 / var == doctest::Approx(12.0 / (M_PI * M_PI)).epsilon(1e-12));
  CHECK(cp_unit / var > 1.0);
}

TEST_CASE("Monte-Carlo upper bound on the single-variable model") {
  Model m = single_variable_model();
  auto u = ProbabilityMeasure::uniform(0, 1);
  PreparedWeight lin = prepare_weight(u, WeightKind::lin);
  RandomStream rng(17);
  DgsmBound b = dgsm_upper_bound(m, 0, lin, 20000, 100, rng);
  CHECK(b.c_p == 1.0);
  CHECK(std::abs(b.value - 1.0) < 0.02);
  CHECK(b.q025 <= b.q50);
  CHECK(b.q50 <= b.q975);

  PreparedWeight unit = prepare_weight(u, WeightKind::unit);
  CHECK(unit.c_p == doctest::Approx(1.0 / (M_PI * M_PI)).epsilon(1e-10));
  RandomStream rng2(18);
  DgsmBound bu = dgsm_upper_bound(m, 0, unit, 20000, 50, rng2);
  CHECK(std::abs(bu.value - 12.0 / (M_PI * M_PI)) < 0.05);
  CHECK(bu.value > 1.0);
}

TEST_CASE("toy1 data-driven bound approaches the equality case") {
  Model m = toy1_model();
  auto u = ProbabilityMeasure::uniform(0, 1);
  RandomStream fit_rng = RandomStream::split(13, 2);
  std::vector<double> xs, ys, row(5);
  for (int k = 0; k < 150; ++k) {
    m.sample_row(fit_rng, row);
    xs.push_back(row[0]);
    ys.push_back(m.evaluate(row));
  }
  FitOptions opts;
  opts.input_index = 0;
  auto fit = fit_main_effect_monotone(xs, ys, u, opts);
  PreparedWeight w = prepare_weight(u, WeightKind::data_driven, 500, 500, &fit);
  RandomStream rng(19);
  DgsmBound b = dgsm_upper_bound(m, 0, w, 10000, 0, rng);
  CHECK(std::abs(b.value - toy1_sobol_oracle()[0]) < 0.05);
}

TEST_CASE("stability of the upper bound") {
  auto u = ProbabilityMeasure::uniform(0, 1);
  auto w = weight_lin_closed_form(u);
  auto g = [](double x) { return x - 0.5; };
  auto gp = [](double) { return 1.0; };

  // h = g: the bound is attained
  StabilityResult eq = stability_gap(u, w, 1.0, g, gp, g, gp, 0.0, 1.0);
  CHECK(std::abs(eq.gap) < 1e-12);

  // mildly nonlinear h: 0 < gap <= bound
  auto h = [](double x) { return x + 0.1 * x * x; };
  auto hp = [](double x) { return 1.0 + 0.2 * x; };
  StabilityResult r = stability_gap(u, w, 1.0, h, hp, g, gp, 0.0, 1.0);
  CHECK(r.gap > 0.0);
  CHECK(r.gap <= r.bound);

  // scaling v by 2 leaves the gap invariant when u = 0
  StabilityResult r4 = stability_gap(u, w, 1.0, h, hp, g, gp, 0.0, 4.0);
  CHECK(r4.gap == doctest::Approx(r.gap).epsilon(1e-10));
}

TEST_CASE("chaos approximation recovers a pure eigenfunction model") {
  auto u = ProbabilityMeasure::uniform(0, 1);
  auto w = reference_weight(u, ReferenceKind::gaussian_ref, 400).first;
  auto basis = solve_eigenbasis(u, w, 2, 400);

  Model m;
  m.name = "e11";
  m.inputs = {u, u};
  auto b = std::make_shared<SpectralBasis>(basis);
  m.evaluate = [b](std::span<const double> x) { return b->eval(1, x[0]); };
  m.analytic_gradient = [b](std::span<const double> x, std::span<double> g) {
    g[0] = b->eval_derivative(1, x[0]);
    g[1] = 0.0;
  };
  m.gradient_mode = GradientMode::analytic;

  std::vector<SpectralBasis> bases{basis, basis};
  std::vector<WeightCurve> weights{w, w};
  RandomStream rng(23);
  PoinceApprox p = poince_approx(m, 0, bases, weights, 20000, 0, rng);
  CHECK(std::abs(p.der_free - 1.0) < 0.02);
  // a single coefficient carries the mass
  double largest = 0, second = 0;
  for (const auto& c : p.coefficients) {
    const double a = std::abs(c.der_free);
    if (a > largest) {
      second = largest;
      largest = a;
    } else {
      second = std::max(second, a);
    }
  }
  CHECK(largest > 0.9);
  CHECK(second < 0.05);
}

TEST_CASE("derivative-based and derivative-free coefficients agree") {
  auto u = ProbabilityMeasure::uniform(0, 1);
  auto w = reference_weight(u, ReferenceKind::gaussian_ref, 400).first;
  auto basis = solve_eigenbasis(u, w, 2, 400);
  auto b = std::make_shared<SpectralBasis>(basis);

  Model m;
  m.name = "sum of first eigenfunctions";
  m.inputs = {u, u, u};
  m.evaluate = [b](std::span<const double> x) {
    return b->eval(1, x[0]) + b->eval(1, x[1]) + b->eval(1, x[2]);
  };
  m.analytic_gradient = [b](std::span<const double> x, std::span<double> g) {
    for (int i = 0; i < 3; ++i) g[i] = b->eval_derivative(1, x[i]);
  };
  m.gradient_mode = GradientMode::analytic;

  std::vector<SpectralBasis> bases{basis, basis, basis};
  std::vector<WeightCurve> weights{w, w, w};
  RandomStream rng(29);
  PoinceApprox p = poince_approx(m, 0, bases, weights, 10000, 0, rng);
  // alpha = (1,0,0) is the leading coefficient in both routes
  const auto& lead = p.coefficients.front();
  REQUIRE(lead.alpha[0] == 1);
  CHECK(lead.der_based == doctest::Approx(lead.der_free).epsilon(0.02));
}

TEST_CASE("Parseval: monotone in the index set and below the variance") {
  Model m = toy1_model();
  auto u = ProbabilityMeasure::uniform(0, 1);
  auto w = reference_weight(u, ReferenceKind::gaussian_ref, 400).first;
  auto basis = solve_eigenbasis(u, w, 2, 400);
  std::vector<SpectralBasis> bases(5, basis);
  std::vector<WeightCurve> weights(5, w);
  RandomStream rng(31);
  PoinceApprox p = poince_approx(m, 0, bases, weights, 20000, 0, rng);

  // adding terms only grows the approximation
  double partial = 0;
  for (std::size_t t = 0; t < p.coefficients.size(); ++t) {
    const double c = p.coefficients[t].der_free;
    const double next = partial + c * c;
    CHECK(next >= partial);
    partial = next;
  }
  // ceiling: the truncated coefficient mass stays below Var(f)
  const double var = toy1_variance();
  CHECK(partial <= var * (1 + 3 * 0.02));
  // the i-marginal truncation underestimates S_i^tot up to MC noise
  CHECK(p.der_free <= toy1_sobol_oracle()[0] + 0.03);
}

TEST_CASE("upper bounds dominate the reference totals across the grid") {
  for (const char* name : {"toy1", "toy2"}) {
    Model m = builtin_model(name);
    ReportConfig cfg;
    cfg.seed = 13;
    cfg.n = 4000;
    cfg.ref_n = 4000;
    cfg.boot = 60;
    cfg.bound_kinds = {WeightKind::unit, WeightKind::lin, WeightKind::data_driven};
    GsaReport rep = build_report(m, cfg);
    for (const auto& in : rep.per_input) {
      CHECK(in.errors.empty());
      const double se_ref = 3.0 / std::sqrt(static_cast<double>(cfg.ref_n));
      for (const auto& b : in.bounds) {
        const double spread = (b.q975 - b.q025) + se_ref;
        CHECK(in.s_tot_raw <= b.value + 3 * spread);
      }
    }
  }
}

TEST_CASE("report determinism and serialization") {
  Model m = toy1_model();
  ReportConfig cfg;
  cfg.seed = 99;
  cfg.n = 500;
  cfg.ref_n = 500;
  cfg.boot = 20;
  cfg.bound_kinds = {WeightKind::lin};
  cfg.poince_kinds = {WeightKind::uniform_ref};
  GsaReport a = build_report(m, cfg);
  GsaReport b = build_report(m, cfg);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.to_json().find("per_input") != std::string::npos);
  CHECK(a.to_csv().rfind("input,kind,metric", 0) == 0);

  // empty weight list: reference totals only
  ReportConfig ref_only;
  ref_only.seed = 1;
  ref_only.ref_n = 500;
  ref_only.bound_kinds = {};
  GsaReport c = build_report(m, ref_only);
  CHECK(c.per_input.size() == 5);
  for (const auto& in : c.per_input) {
    CHECK(in.bounds.empty());
    CHECK(in.poince.empty());
  }
}

TEST_CASE("chaos approximations reject vanishing weight kinds") {
  Model m = toy1_model();
  ReportConfig cfg;
  cfg.ref_n = 500;
  cfg.n = 200;
  cfg.bound_kinds = {};
  cfg.poince_kinds = {WeightKind::lin};
  CHECK_THROWS_AS(build_report(m, cfg), std::invalid_argument);
}

TEST_CASE("toy1 report reproduces the expected bound ordering") {
  Model m = toy1_model();
  ReportConfig cfg;
  cfg.seed = 13;
  cfg.n = 4000;
  cfg.ref_n = 2000;
  cfg.boot = 40;
  cfg.bound_kinds = {WeightKind::unit, WeightKind::lin, WeightKind::data_driven};
  GsaReport rep = build_report(m, cfg);
  for (const auto& in : rep.per_input) {
    double unit = 0, lin = 0, dd = 0;
    for (const auto& b : in.bounds) {
      if (b.kind == "unit") unit = b.q50;
      if (b.kind == "lin") lin = b.q50;
      if (b.kind == "data_driven") dd = b.q50;
    }
    CHECK(dd <= lin + 0.02);
    CHECK(lin < unit);
  }
}
