#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "pgsa/errors.hpp"
#include "pgsa/weights.hpp"

using namespace pgsa;

namespace {

double max_abs_gap(const WeightCurve& tab, const std::function<double(double)>& ref) {
  double e = 0;
  const auto& xs = tab.grid();
  const auto& ws = tab.grid_values();
  for (std::size_t j = 0; j < xs.size(); ++j) e = std::max(e, std::abs(ws[j] - ref(xs[j])));
  return e;
}

}  // namespace

TEST_CASE("closed-form lin weights") {
  auto u = ProbabilityMeasure::uniform(0, 1);
  CHECK(weight_lin_closed_form(u).value(0.5) == doctest::Approx(0.125));

  auto e2 = ProbabilityMeasure::exponential(2);
  CHECK(weight_lin_closed_form(e2).value(1.0) == doctest::Approx(0.5));

  // half-window convention: N(0,1) on [0,3] carries the [-3,3] curve
  auto tn_half = ProbabilityMeasure::normal(0, 1).truncated(0, 3);
  CHECK(weight_lin_closed_form(tn_half).value(0.0) ==
        doctest::Approx(1.0 - std::exp(-4.5)).epsilon(1e-12));
  CHECK(1.0 - std::exp(-4.5) == doctest::Approx(0.9888910).epsilon(1e-6));

  CHECK_THROWS_AS(weight_lin_closed_form(ProbabilityMeasure::generalized_cauchy(1.2)),
                  std::domain_error);
  CHECK_THROWS_AS(weight_lin_closed_form(ProbabilityMeasure::pareto(1, 1.5)),
                  std::domain_error);
  CHECK_THROWS_AS(weight_lin_closed_form(ProbabilityMeasure::power(2)), unsupported_error);
  CHECK_THROWS_AS(
      weight_lin_closed_form(ProbabilityMeasure::normal(0, 1).truncated(-1, 2)),
      unsupported_error);
}

TEST_CASE("RK4 weight reproduces closed forms") {
  auto u = ProbabilityMeasure::uniform(0, 1);
  auto w = weight_from_g(u, linear_saturating(u), 500);
  CHECK(max_abs_gap(w, [](double x) { return 0.5 * x * (1 - x); }) < 1e-6);

  auto te = ProbabilityMeasure::exponential(1).truncated(0, 2);
  auto wt = weight_from_g(te, linear_saturating(te), 500);
  const double den = std::expm1(2.0);
  CHECK(max_abs_gap(wt, [den](double x) { return x - 2.0 * std::expm1(x) / den; }) < 1e-6);
}

TEST_CASE("cosine saturating function gives the constant uniform weight") {
  auto u = ProbabilityMeasure::uniform(0, 1);
  SaturatingFunction g;
  g.value = [](double x) { return std::cos(M_PI * x); };
  g.derivative = [](double x) { return -M_PI * std::sin(M_PI * x); };
  g.second_derivative = [](double x) { return -M_PI * M_PI * std::cos(M_PI * x); };
  g.monotonicity = -1;
  auto w = weight_from_g(u, g, 500);
  CHECK(max_abs_gap(w, [](double) { return 1.0 / (M_PI * M_PI); }) < 1e-9);
  CHECK(w.boundary_values().first == doctest::Approx(1.0 / (M_PI * M_PI)));
  CHECK(w.boundary_provenance().first == BoundaryProvenance::limit_formula);
}

TEST_CASE("boundary value limits") {
  auto u = ProbabilityMeasure::uniform(0, 1);
  CHECK(boundary_value(linear_saturating(u), u, Endpoint::left) == 0.0);

  SaturatingFunction g;
  g.value = [](double x) { return std::cos(M_PI * x); };
  g.derivative = [](double x) { return -M_PI * std::sin(M_PI * x); };
  g.second_derivative = [](double x) { return -M_PI * M_PI * std::cos(M_PI * x); };
  CHECK(boundary_value(g, u, Endpoint::left) ==
        doctest::Approx(1.0 / (M_PI * M_PI)).epsilon(1e-12));

  // g' = g'' = 0 at the endpoint is a hypothesis failure
  SaturatingFunction bad;
  bad.value = [](double x) { return std::pow(x, 3) - 0.25; };
  bad.derivative = [](double x) { return 3 * x * x; };
  bad.second_derivative = [](double x) { return 6 * x; };
  bad.derivative_zero_at_a = true;
  CHECK_THROWS_AS(boundary_value(bad, u, Endpoint::left), std::invalid_argument);

  CHECK_THROWS_AS(
      boundary_value(linear_saturating(u), ProbabilityMeasure::exponential(1),
                     Endpoint::right),
      std::invalid_argument);
}

TEST_CASE("centering contract") {
  auto u = ProbabilityMeasure::uniform(0, 1);
  // slightly off-center is corrected silently
  SaturatingFunction g;
  g.value = [](double x) { return x - 0.5 + 1e-4; };
  g.derivative = [](double) { return 1.0; };
  auto w = weight_from_g(u, g, 200);
  CHECK(max_abs_gap(w, [](double x) { return 0.5 * x * (1 - x); }) < 1e-5);
  // grossly off-center violates the contract
  SaturatingFunction bad;
  bad.value = [](double x) { return x; };
  bad.derivative = [](double) { return 1.0; };
  CHECK_THROWS_AS(weight_from_g(u, bad, 200), std::invalid_argument);
}

TEST_CASE("reference weights are positive everywhere") {
  for (auto m : {ProbabilityMeasure::uniform(0, 1),
                 ProbabilityMeasure::normal(0, 1).truncated(0, 3),
                 ProbabilityMeasure::gumbel(0, 1).truncated(0, 4),
                 ProbabilityMeasure::triangular(49, 50, 51)}) {
    for (auto kind : {ReferenceKind::uniform_ref, ReferenceKind::gaussian_ref}) {
      auto [w, g] = reference_weight(m, kind, 400);
      INFO(m.description());
      CHECK(w.boundary_values().first > 0.0);
      CHECK(w.boundary_values().second > 0.0);
      for (double v : w.grid_values()) CHECK(v > 0.0);
    }
  }
  // uniform reference on the uniform measure: w is the constant 1/pi^2
  auto u = ProbabilityMeasure::uniform(0, 1);
  auto [wu, gu] = reference_weight(u, ReferenceKind::uniform_ref, 500);
  CHECK(max_abs_gap(wu, [](double) { return 1.0 / (M_PI * M_PI); }) < 1e-10);
}

TEST_CASE("truncated exponential weight converges to x/gamma as the window grows") {
  double prev = 1e9;
  double final_err = 0;
  for (double h : {5.0, 10.0, 20.0}) {
    auto m = ProbabilityMeasure::exponential(1).truncated(0, h);
    auto w = weight_from_g(m, linear_saturating(m), 2000);
    const double err = std::abs(w.value(1.0) - 1.0);
    CHECK(err < prev);
    prev = err;
    final_err = err;
  }
  CHECK(final_err < 1e-3);
}

TEST_CASE("defining ODE residual is O(h^2)") {
  auto m = ProbabilityMeasure::normal(0, 1).truncated(-3, 3);
  auto g = linear_saturating(m);
  auto w = weight_from_g(m, g, 500);
  const auto& xs = w.grid();
  const auto& ws = w.grid_values();
  // central difference of (w g' rho) + g rho must vanish
  double worst = 0;
  for (std::size_t j = 2; j + 2 < xs.size(); ++j) {
    const double h = xs[j + 1] - xs[j];
    const double fp = ws[j + 1] * g.derivative(xs[j + 1]) * m.density(xs[j + 1]);
    const double fm = ws[j - 1] * g.derivative(xs[j - 1]) * m.density(xs[j - 1]);
    const double resid = (fp - fm) / (2 * h) + g.value(xs[j]) * m.density(xs[j]);
    worst = std::max(worst, std::abs(resid));
  }
  CHECK(worst < 5e-5);  // O(h^2) at h = 6/500
}

TEST_CASE("weight CSV round trip") {
  auto u = ProbabilityMeasure::uniform(0, 1);
  auto w = weight_from_g(u, linear_saturating(u), 100);
  std::ostringstream os;
  w.write_csv(os);
  std::istringstream is(os.str());
  auto back = WeightCurve::read_csv(is);
  CHECK(back.value(0.37) == doctest::Approx(w.value(0.37)).epsilon(1e-10));
  CHECK(os.str().substr(0, 4) == "x,w\n");
  CHECK(os.str().find('\r') == std::string::npos);
}
