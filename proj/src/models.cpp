#include "pgsa/models.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace pgsa {

// ---------------------------------------------------------------------------
// toy model 1

Model toy1_model() {
  Model m;
  m.name = "toy1";
  for (int i = 0; i < 5; ++i) m.inputs.push_back(ProbabilityMeasure::uniform(0, 1));
  m.evaluate = [](std::span<const double> x) {
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += std::pow(x[i], i + 1);
    return s;
  };
  m.analytic_gradient = [](std::span<const double> x, std::span<double> g) {
    for (int i = 0; i < 5; ++i) g[i] = (i + 1) * std::pow(x[i], i);
  };
  m.gradient_mode = GradientMode::analytic;
  return m;
}

double toy1_variance() {
  double v = 0.0;
  for (int i = 1; i <= 5; ++i) v += 1.0 / (2 * i + 1) - 1.0 / ((1 + i) * (1 + i));
  return v;
}

std::vector<double> toy1_sobol_oracle() {
  const double v = toy1_variance();
  std::vector<double> s(5);
  for (int i = 1; i <= 5; ++i)
    s[i - 1] = (1.0 / (2 * i + 1) - 1.0 / ((1 + i) * (1 + i))) / v;
  return s;
}

// ---------------------------------------------------------------------------
// toy model 2: prod (1 + h(x_i)/(1+a_i)), h(x) = x^4 - 1/5

namespace {
inline double toy2_h(double x) { return std::pow(x, 4) - 0.2; }
inline double toy2_hp(double x) { return 4 * std::pow(x, 3); }
// E[h^2] under U(0,1): Var(X^4) = 1/9 - 1/25
constexpr double kToy2R = 1.0 / 9.0 - 1.0 / 25.0;
}  // namespace

Model toy2_model(std::vector<double> a) {
  if (a.empty()) throw std::invalid_argument("toy2: need at least one coefficient");
  Model m;
  m.name = "toy2";
  for (std::size_t i = 0; i < a.size(); ++i)
    m.inputs.push_back(ProbabilityMeasure::uniform(0, 1));
  auto coef = std::make_shared<std::vector<double>>(std::move(a));
  m.evaluate = [coef](std::span<const double> x) {
    double p = 1.0;
    for (std::size_t i = 0; i < coef->size(); ++i)
      p *= 1.0 + toy2_h(x[i]) / (1.0 + (*coef)[i]);
    return p;
  };
  m.analytic_gradient = [coef](std::span<const double> x, std::span<double> g) {
    const std::size_t d = coef->size();
    for (std::size_t i = 0; i < d; ++i) {
      double p = 1.0;
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) p *= 1.0 + toy2_h(x[j]) / (1.0 + (*coef)[j]);
      g[i] = p * toy2_hp(x[i]) / (1.0 + (*coef)[i]);
    }
  };
  m.gradient_mode = GradientMode::analytic;
  return m;
}

double toy2_variance(const std::vector<double>& a) {
  double p = 1.0;
  for (double ai : a) p *= 1.0 + kToy2R / ((1 + ai) * (1 + ai));
  return p - 1.0;
}

std::vector<double> toy2_sobol_oracle(const std::vector<double>& a) {
  const double var = toy2_variance(a);
  std::vector<double> s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double qi = kToy2R / ((1 + a[i]) * (1 + a[i]));
    double p = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (j != i) p *= 1.0 + kToy2R / ((1 + a[j]) * (1 + a[j]));
    s[i] = qi * p / var;
  }
  return s;
}

// ---------------------------------------------------------------------------
// flood model

const std::vector<std::string>& flood_input_names() {
  static const std::vector<std::string> names{"Q", "Ks", "Zv", "Zm",
                                              "Hd", "Cb", "L", "B"};
  return names;
}

namespace {

std::vector<ProbabilityMeasure> flood_inputs() {
  std::vector<ProbabilityMeasure> in;
  in.push_back(ProbabilityMeasure::gumbel(1013, 558).truncated(500, 3000));
  in.push_back(ProbabilityMeasure::normal(30, 64).truncated(15, 75));
  in.push_back(ProbabilityMeasure::triangular(49, 50, 51));
  in.push_back(ProbabilityMeasure::triangular(54, 55, 56));
  in.push_back(ProbabilityMeasure::uniform(7, 9));
  in.push_back(ProbabilityMeasure::triangular(55, 55.5, 56));
  in.push_back(ProbabilityMeasure::triangular(4990, 5000, 5010));
  in.push_back(ProbabilityMeasure::triangular(295, 300, 305));
  return in;
}

}  // namespace

double flood_s_eval(std::span<const double> x) {
  const double q = x[0], ks = x[1], zv = x[2], zm = x[3], hd = x[4], cb = x[5],
               l = x[6], b = x[7];
  if (!(zm > zv)) throw std::domain_error("flood: needs Z_m > Z_v");
  if (!(q > 0) || !(ks > 0) || !(l > 0) || !(b > 0))
    throw std::domain_error("flood: Q, K_s, L, B must be positive");
  const double base = q / (b * ks) * std::sqrt(l / (zm - zv));
  return zv - hd - cb + std::pow(base, 0.6);
}

double flood_c_eval(std::span<const double> x) {
  const double s = flood_s_eval(x);
  const double hd = x[4];
  double c = s > 0 ? 1.0
                   : 0.2 + 0.8 * (1.0 - std::exp(-1000.0 / (s * s * s * s)));
  return c + std::max(hd, 8.0) / 20.0;
}

Model flood_model_s() {
  Model m;
  m.name = "flood_s";
  m.inputs = flood_inputs();
  m.evaluate = [](std::span<const double> x) { return flood_s_eval(x); };
  m.gradient_mode = GradientMode::finite_difference;
  return m;
}

Model flood_model_c() {
  Model m;
  m.name = "flood_c";
  m.inputs = flood_inputs();
  m.evaluate = [](std::span<const double> x) { return flood_c_eval(x); };
  m.gradient_mode = GradientMode::finite_difference;
  m.kink_proximity = [](std::span<const double> x) {
    // cost kinks: the S = 0 indicator and max{H_d, 8}; a sample is near a
    // kink when an FD stencil step crosses either one
    static const double widths[8] = {2500, 60, 2, 2, 2, 1, 20, 10};
    if (std::abs(x[4] - 8.0) <= 1e-4 * widths[4]) return true;
    const double s0 = flood_s_eval(x);
    std::vector<double> xx(x.begin(), x.end());
    for (int i = 0; i < 8; ++i) {
      const double st = 1e-4 * widths[i];
      const double xi = xx[i];
      xx[i] = xi + st;
      const double sp = flood_s_eval(xx);
      xx[i] = xi - st;
      const double sm = flood_s_eval(xx);
      xx[i] = xi;
      if ((s0 > 0) != (sp > 0) || (s0 > 0) != (sm > 0)) return true;
    }
    return false;
  };
  // the H_d main effect of the cost is non-monotone; fit the increasing
  // piecewise-affine surrogate with knots at 7, 8, 9 instead
  m.fit_overrides.resize(m.inputs.size());
  FitOptions hd;
  hd.direction = FitDirection::increasing;
  hd.affine_knots = std::vector<double>{7.0, 8.0, 9.0};
  m.fit_overrides[4] = hd;
  return m;
}

std::pair<SobolEstimate, SobolEstimate> flood_reference_run(int n, std::uint64_t seed) {
  Model ms = flood_model_s();
  Model mc = flood_model_c();
  RandomStream rs = RandomStream::split(seed, 0);
  RandomStream rc = RandomStream::split(seed, 0);  // same draws for both outputs
  return {sobol_total_reference(ms, n, rs), sobol_total_reference(mc, n, rc)};
}

Model builtin_model(const std::string& name) {
  if (name == "toy1") return toy1_model();
  if (name == "toy2") return toy2_model();
  if (name == "flood_s") return flood_model_s();
  if (name == "flood_c") return flood_model_c();
  throw std::invalid_argument("unknown builtin model: " + name);
}

bool is_builtin_model(const std::string& name) {
  return name == "toy1" || name == "toy2" || name == "flood_s" || name == "flood_c";
}

}  // namespace pgsa
