#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "pgsa/errors.hpp"
#include "pgsa/measures.hpp"

using namespace pgsa;

namespace {

std::vector<ProbabilityMeasure> study_measures() {
  // the flood table plus the toy-model input
  std::vector<ProbabilityMeasure> ms;
  ms.push_back(ProbabilityMeasure::gumbel(1013, 558).truncated(500, 3000));
  ms.push_back(ProbabilityMeasure::normal(30, 64).truncated(15, 75));
  ms.push_back(ProbabilityMeasure::triangular(49, 50, 51));
  ms.push_back(ProbabilityMeasure::triangular(54, 55, 56));
  ms.push_back(ProbabilityMeasure::uniform(7, 9));
  ms.push_back(ProbabilityMeasure::triangular(55, 55.5, 56));
  ms.push_back(ProbabilityMeasure::triangular(4990, 5000, 5010));
  ms.push_back(ProbabilityMeasure::triangular(295, 300, 305));
  ms.push_back(ProbabilityMeasure::uniform(0, 1));
  return ms;
}

}  // namespace

TEST_CASE("density values") {
  auto u = ProbabilityMeasure::uniform(0, 1);
  CHECK(u.density(0.3) == doctest::Approx(1.0));

  // generalized Cauchy beta=1 has Z = pi
  auto c = ProbabilityMeasure::generalized_cauchy(1.0);
  CHECK(c.density(0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));

  // truncated Gumbel at its location: e^{-1}/beta over the window mass
  auto g = ProbabilityMeasure::gumbel(1013, 558).truncated(500, 3000);
  CHECK(g.density(1013) == doctest::Approx(7.403257212034e-04).epsilon(1e-9));
  CHECK(g.normalization() == doctest::Approx(0.890529848896).epsilon(1e-9));

  CHECK_THROWS_AS(u.density(1.5), std::domain_error);
}

TEST_CASE("log density derivative") {
  auto n = ProbabilityMeasure::normal(0, 1);
  CHECK(n.log_density_derivative(2.0) == doctest::Approx(-2.0));
  auto e = ProbabilityMeasure::exponential(3);
  CHECK(e.log_density_derivative(0.7) == doctest::Approx(-3.0));
  auto p = ProbabilityMeasure::pareto(1, 2);
  CHECK(p.log_density_derivative(2.0) == doctest::Approx(-1.5));
  // triangular takes the left derivative at the mode
  auto t = ProbabilityMeasure::triangular(0, 0.5, 1);
  CHECK(t.log_density_derivative(0.5) == doctest::Approx(2.0));
  CHECK_THROWS_AS(t.log_density_derivative(0.0), std::domain_error);
}

TEST_CASE("score matches finite differences of log density") {
  RandomStream rng(7);
  for (const auto& m : study_measures()) {
    const Interval s = m.support();
    const double h = 1e-6 * s.length();
    for (int k = 0; k < 100; ++k) {
      const double x = s.a + (0.02 + 0.96 * rng.uniform01()) * s.length();
      // stay away from the density breakpoints where the score jumps
      bool near_bp = false;
      for (double bp : m.breakpoints())
        if (std::abs(x - bp) < 2 * h) near_bp = true;
      if (near_bp) continue;
      const double fd =
          (std::log(m.density(x + h)) - std::log(m.density(x - h))) / (2 * h);
      CHECK(m.log_density_derivative(x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("means") {
  CHECK(ProbabilityMeasure::uniform(2, 6).mean() == doctest::Approx(4.0));
  // truncated exponential closed form, gamma=1 on [0,2]
  auto te = ProbabilityMeasure::exponential(1).truncated(0, 2);
  CHECK(te.mean() == doctest::Approx(0.686964714501).epsilon(1e-10));
  CHECK(ProbabilityMeasure::triangular(49, 50, 51).mean() == doctest::Approx(50.0));
  CHECK_THROWS_AS(ProbabilityMeasure::generalized_cauchy(0.9).mean(), std::domain_error);
  CHECK_THROWS_AS(ProbabilityMeasure::pareto(1, 1).mean(), std::domain_error);
}

TEST_CASE("quadrature normalizes every study measure") {
  for (const auto& m : study_measures()) {
    CHECK(m.quadrature([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-10));
  }
  auto u = ProbabilityMeasure::uniform(0, 1);
  CHECK(u.quadrature([](double x) { return x; }) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(ProbabilityMeasure::normal(0, 1).quadrature([](double) { return 1.0; }),
                  std::domain_error);
}

TEST_CASE("second moment of truncated normal matches the frozen MC oracle") {
  // 1e7-draw Monte-Carlo oracle: mean 0.9727222, standard error 4.16e-4
  auto tn = ProbabilityMeasure::normal(0, 1).truncated(0, 3);
  const double q = tn.quadrature([](double x) { return x * x; });
  CHECK(std::abs(q - 0.9727222) < 3 * 4.16e-4);
}

TEST_CASE("sampling is deterministic and matches closed forms") {
  auto u = ProbabilityMeasure::uniform(0, 1);
  RandomStream a(123), b(123);
  const auto sa = u.sample(3, a), sb = u.sample(3, b);
  CHECK(sa == sb);

  auto te = ProbabilityMeasure::exponential(1).truncated(0, 2);
  RandomStream rng(99);
  const auto draws = te.sample(1000000, rng);
  double mean = 0;
  for (double d : draws) mean += d;
  mean /= draws.size();
  CHECK(std::abs(mean - 0.686964714501) < 0.002);

  auto tri = ProbabilityMeasure::triangular(0, 0.5, 1);
  RandomStream rng2(5);
  const auto td = tri.sample(1000000, rng2);
  double below = 0;
  for (double d : td)
    if (d <= 0.5) below += 1;
  CHECK(std::abs(below / td.size() - 0.5) < 0.005);
}

TEST_CASE("empirical CDF agrees with the quadrature CDF (KS)") {
  for (const auto& m : study_measures()) {
    RandomStream rng(2024);
    auto sample = m.sample(100000, rng);
    const double d =
        testutil::ks_statistic(std::move(sample), [&](double x) { return m.cdf(x); });
    INFO(m.description());
    CHECK(d < 0.01);
  }
  // families without a closed-form quantile go through bisection
  auto cb = ProbabilityMeasure::generalized_cauchy(2).truncated(-1, 1);
  RandomStream rng(11);
  auto s = cb.sample(100000, rng);
  CHECK(testutil::ks_statistic(std::move(s), [&](double x) { return cb.cdf(x); }) < 0.01);
  auto sb = ProbabilityMeasure::symmetric_beta(2);
  RandomStream rng2(12);
  auto s2 = sb.sample(100000, rng2);
  CHECK(testutil::ks_statistic(std::move(s2), [&](double x) { return sb.cdf(x); }) < 0.01);
}

TEST_CASE("measure JSON round trip and strictness") {
  const std::string text =
      R"({"family":"gumbel","params":{"location":1013,"scale":558},"truncation":[500,3000]})";
  auto m = ProbabilityMeasure::from_json_text(text);
  CHECK(m.family() == Family::gumbel);
  CHECK(m.support().a == doctest::Approx(500));
  auto again = ProbabilityMeasure::from_json_text(m.to_json_text());
  CHECK(again.density(1013) == doctest::Approx(m.density(1013)));

  CHECK_THROWS_AS(ProbabilityMeasure::from_json_text(
                      R"({"family":"uniform","params":{"a":0,"b":1},"extra":1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ProbabilityMeasure::from_json_text(
                      R"({"family":"uniform","params":{"a":0,"b":1,"c":2}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ProbabilityMeasure::from_json_text(R"({"family":"nope","params":{}})"),
                  std::invalid_argument);
}
