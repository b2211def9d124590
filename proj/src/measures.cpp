#include "pgsa/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "pgsa/errors.hpp"
#include "json.hpp"

namespace pgsa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.5772156649015329;

// 5-point Gauss-Legendre rule on [-1,1]
constexpr double kGlx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                            0.5384693101056831, 0.9061798459386640};
constexpr double kGlw[5] = {0.2369268850561891, 0.4786286704993665,
                            0.5688888888888889, 0.4786286704993665,
                            0.2369268850561891};

double gl5_cell(const std::function<double(double)>& f, double x0, double x1) {
  const double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
  double s = 0.0;
  for (int q = 0; q < 5; ++q) s += kGlw[q] * f(mid + half * kGlx[q]);
  return s * half;
}

double norm_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

double logistic_sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

}  // namespace

bool Interval::finite() const { return std::isfinite(a) && std::isfinite(b); }

std::string family_name(Family f) {
  switch (f) {
    case Family::uniform: return "uniform";
    case Family::normal: return "normal";
    case Family::exponential: return "exponential";
    case Family::gumbel: return "gumbel";
    case Family::triangular: return "triangular";
    case Family::generalized_cauchy: return "generalized_cauchy";
    case Family::pareto: return "pareto";
    case Family::symmetric_beta: return "symmetric_beta";
    case Family::power: return "power";
    case Family::generalized_logistic: return "generalized_logistic";
  }
  throw std::logic_error("unknown family");
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::uniform, Family::normal, Family::exponential,
                   Family::gumbel, Family::triangular, Family::generalized_cauchy,
                   Family::pareto, Family::symmetric_beta, Family::power,
                   Family::generalized_logistic}) {
    if (family_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown distribution family: " + name);
}

double integrate(const std::function<double(double)>& f, double a, double b, int cells) {
  if (!(b > a) || cells < 1) throw std::invalid_argument("integrate: bad interval");
  const double h = (b - a) / cells;
  double s = 0.0;
  for (int j = 0; j < cells; ++j) s += gl5_cell(f, a + j * h, a + (j + 1) * h);
  return s;
}

double integrate_edges(const std::function<double(double)>& f, std::span<const double> edges) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < edges.size(); ++j) s += gl5_cell(f, edges[j], edges[j + 1]);
  return s;
}

// ---------------------------------------------------------------------------
// constructors

ProbabilityMeasure ProbabilityMeasure::uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("uniform: need a < b");
  ProbabilityMeasure m;
  m.family_ = Family::uniform;
  m.par_[0] = a; m.par_[1] = b; m.npar_ = 2;
  m.base_support_ = {a, b};
  m.finalize();
  return m;
}

ProbabilityMeasure ProbabilityMeasure::normal(double mean, double variance) {
  if (!(variance > 0)) throw std::invalid_argument("normal: need variance > 0");
  ProbabilityMeasure m;
  m.family_ = Family::normal;
  m.par_[0] = mean; m.par_[1] = variance; m.npar_ = 2;
  m.base_support_ = {-kInf, kInf};
  m.finalize();
  return m;
}

ProbabilityMeasure ProbabilityMeasure::exponential(double rate) {
  if (!(rate > 0)) throw std::invalid_argument("exponential: need rate > 0");
  ProbabilityMeasure m;
  m.family_ = Family::exponential;
  m.par_[0] = rate; m.npar_ = 1;
  m.base_support_ = {0.0, kInf};
  m.finalize();
  return m;
}

ProbabilityMeasure ProbabilityMeasure::gumbel(double location, double scale) {
  if (!(scale > 0)) throw std::invalid_argument("gumbel: need scale > 0");
  ProbabilityMeasure m;
  m.family_ = Family::gumbel;
  m.par_[0] = location; m.par_[1] = scale; m.npar_ = 2;
  m.base_support_ = {-kInf, kInf};
  m.finalize();
  return m;
}

ProbabilityMeasure ProbabilityMeasure::triangular(double a, double mode, double b) {
  if (!(a < mode && mode < b)) throw std::invalid_argument("triangular: need a < mode < b");
  ProbabilityMeasure m;
  m.family_ = Family::triangular;
  m.par_[0] = a; m.par_[1] = mode; m.par_[2] = b; m.npar_ = 3;
  m.base_support_ = {a, b};
  m.finalize();
  return m;
}

ProbabilityMeasure ProbabilityMeasure::generalized_cauchy(double beta) {
  // normalizable on R only for beta > 1/2; any beta works once truncated
  ProbabilityMeasure m;
  m.family_ = Family::generalized_cauchy;
  m.par_[0] = beta; m.npar_ = 1;
  m.base_support_ = {-kInf, kInf};
  m.finalize();
  return m;
}

ProbabilityMeasure ProbabilityMeasure::pareto(double z, double alpha) {
  if (!(z > 0) || !(alpha > 0)) throw std::invalid_argument("pareto: need z, alpha > 0");
  ProbabilityMeasure m;
  m.family_ = Family::pareto;
  m.par_[0] = z; m.par_[1] = alpha; m.npar_ = 2;
  m.base_support_ = {z, kInf};
  m.finalize();
  return m;
}

ProbabilityMeasure ProbabilityMeasure::symmetric_beta(double beta) {
  if (!(beta > 0)) throw std::invalid_argument("symmetric_beta: need beta > 0");
  ProbabilityMeasure m;
  m.family_ = Family::symmetric_beta;
  m.par_[0] = beta; m.npar_ = 1;
  m.base_support_ = {-1.0, 1.0};
  m.finalize();
  return m;
}

ProbabilityMeasure ProbabilityMeasure::power(double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("power: need alpha > 0");
  ProbabilityMeasure m;
  m.family_ = Family::power;
  m.par_[0] = alpha; m.npar_ = 1;
  m.base_support_ = {0.0, 1.0};
  m.finalize();
  return m;
}

ProbabilityMeasure ProbabilityMeasure::generalized_logistic(double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("generalized_logistic: need alpha > 0");
  ProbabilityMeasure m;
  m.family_ = Family::generalized_logistic;
  m.par_[0] = alpha; m.npar_ = 1;
  m.base_support_ = {-kInf, kInf};
  m.finalize();
  return m;
}

ProbabilityMeasure ProbabilityMeasure::truncated(double lo, double hi) const {
  if (!(lo < hi)) throw std::invalid_argument("truncated: need lo < hi");
  ProbabilityMeasure m = *this;
  m.truncation_ = Interval{lo, hi};
  m.finalize();
  return m;
}

void ProbabilityMeasure::finalize() {
  needs_truncation_ =
      family_ == Family::generalized_cauchy && par_[0] <= 0.5 && !truncation_;
  support_ = base_support_;
  if (truncation_) {
    support_.a = std::max(base_support_.a, truncation_->a);
    support_.b = std::min(base_support_.b, truncation_->b);
    if (!(support_.a < support_.b))
      throw std::invalid_argument("truncation window misses the support");
    if (!support_.finite())
      throw std::invalid_argument("truncation window must be finite");
  }

  breakpoints_.clear();
  if (family_ == Family::triangular) {
    const double c = par_[1];
    if (c > support_.a && c < support_.b) breakpoints_.push_back(c);
  }

  // untruncated mass of the effective support
  if (!truncation_) {
    normalization_ = 1.0;
  } else if (has_closed_cdf()) {
    normalization_ = raw_cdf(support_.b) - raw_cdf(support_.a);
  } else {
    auto edges = cell_edges(500);
    normalization_ = integrate_edges([this](double x) { return raw_density(x); }, edges);
  }
  if (!(normalization_ > 0))
    throw std::invalid_argument("truncation window carries no mass");

  // cumulative table for families without a closed-form CDF
  cdf_nodes_.clear();
  cdf_vals_.clear();
  if (!has_closed_cdf() && family_ != Family::normal && support_.finite()) {
    cdf_nodes_ = cell_edges(500);
    cdf_vals_.resize(cdf_nodes_.size());
    cdf_vals_[0] = 0.0;
    for (std::size_t j = 0; j + 1 < cdf_nodes_.size(); ++j) {
      cdf_vals_[j + 1] = cdf_vals_[j] +
          gl5_cell([this](double x) { return raw_density(x); },
                   cdf_nodes_[j], cdf_nodes_[j + 1]);
    }
  }
}

// ---------------------------------------------------------------------------
// density and scores (raw = untruncated, normalized on the base support)

double ProbabilityMeasure::raw_density(double x) const {
  switch (family_) {
    case Family::uniform:
      return 1.0 / (par_[1] - par_[0]);
    case Family::normal: {
      const double v = par_[1];
      return std::exp(-(x - par_[0]) * (x - par_[0]) / (2 * v)) /
             std::sqrt(2 * M_PI * v);
    }
    case Family::exponential:
      return par_[0] * std::exp(-par_[0] * x);
    case Family::gumbel: {
      const double z = (x - par_[0]) / par_[1];
      return std::exp(-z - std::exp(-z)) / par_[1];
    }
    case Family::triangular: {
      const double a = par_[0], c = par_[1], b = par_[2];
      if (x <= c) return 2 * (x - a) / ((b - a) * (c - a));
      return 2 * (b - x) / ((b - a) * (b - c));
    }
    case Family::generalized_cauchy: {
      const double beta = par_[0];
      if (beta <= 0.5) return std::pow(1 + x * x, -beta);  // truncation renormalizes
      const double z = std::sqrt(M_PI) * std::exp(std::lgamma(beta - 0.5) - std::lgamma(beta));
      return std::pow(1 + x * x, -beta) / z;
    }
    case Family::pareto:
      return par_[1] * std::pow(par_[0], par_[1]) / std::pow(x, par_[1] + 1);
    case Family::symmetric_beta: {
      const double beta = par_[0];
      const double z = std::sqrt(M_PI) * std::exp(std::lgamma(beta) - std::lgamma(beta + 0.5));
      return std::pow(1 - x * x, beta - 1) / z;
    }
    case Family::power:
      return par_[0] * std::pow(x, par_[0] - 1);
    case Family::generalized_logistic: {
      const double al = par_[0];
      // alpha e^{-x} (1+e^{-x})^{-alpha-1}; rewritten on the left tail where
      // e^{-x} overflows
      if (x >= 0) return al * std::exp(-x - (al + 1) * std::log1p(std::exp(-x)));
      return al * std::exp(al * x - (al + 1) * std::log1p(std::exp(x)));
    }
  }
  throw std::logic_error("raw_density: unreachable");
}

double ProbabilityMeasure::density(double x) const {
  if (needs_truncation_)
    throw std::domain_error(description() + ": not normalizable; truncate first");
  if (!support_.contains(x))
    throw std::domain_error(description() + ": density evaluated outside support");
  return raw_density(x) / normalization_;
}

double ProbabilityMeasure::log_density_derivative(double x) const {
  if (!(x > support_.a && x < support_.b))
    throw std::domain_error(description() + ": score needs an interior point");
  switch (family_) {
    case Family::uniform: return 0.0;
    case Family::normal: return -(x - par_[0]) / par_[1];
    case Family::exponential: return -par_[0];
    case Family::gumbel:
      return (std::exp(-(x - par_[0]) / par_[1]) - 1.0) / par_[1];
    case Family::triangular: {
      const double a = par_[0], c = par_[1], b = par_[2];
      if (x <= c) return 1.0 / (x - a);  // left derivative at the mode
      return -1.0 / (b - x);
    }
    case Family::generalized_cauchy:
      return -2 * par_[0] * x / (1 + x * x);
    case Family::pareto:
      return -(par_[1] + 1) / x;
    case Family::symmetric_beta:
      return -2 * (par_[0] - 1) * x / (1 - x * x);
    case Family::power:
      return (par_[0] - 1) / x;
    case Family::generalized_logistic:
      return -1.0 + (par_[0] + 1) * logistic_sigmoid(-x);
  }
  throw std::logic_error("score: unreachable");
}

double ProbabilityMeasure::score_derivative(double x) const {
  if (!(x > support_.a && x < support_.b))
    throw std::domain_error(description() + ": score derivative needs an interior point");
  switch (family_) {
    case Family::uniform: return 0.0;
    case Family::normal: return -1.0 / par_[1];
    case Family::exponential: return 0.0;
    case Family::gumbel: {
      const double z = (x - par_[0]) / par_[1];
      return -std::exp(-z) / (par_[1] * par_[1]);
    }
    case Family::triangular: {
      const double a = par_[0], c = par_[1], b = par_[2];
      if (x <= c) return -1.0 / ((x - a) * (x - a));
      return -1.0 / ((b - x) * (b - x));
    }
    case Family::generalized_cauchy: {
      const double t = 1 + x * x;
      return -2 * par_[0] * (1 - x * x) / (t * t);
    }
    case Family::pareto:
      return (par_[1] + 1) / (x * x);
    case Family::symmetric_beta: {
      const double t = 1 - x * x;
      return -2 * (par_[0] - 1) * (1 + x * x) / (t * t);
    }
    case Family::power:
      return -(par_[0] - 1) / (x * x);
    case Family::generalized_logistic:
      return -(par_[0] + 1) * logistic_sigmoid(x) * logistic_sigmoid(-x);
  }
  throw std::logic_error("score derivative: unreachable");
}

// ---------------------------------------------------------------------------
// CDF / quantile

bool ProbabilityMeasure::has_closed_cdf() const {
  switch (family_) {
    case Family::generalized_cauchy: return par_[0] == 1.0;
    case Family::symmetric_beta: return false;
    default: return true;
  }
}

double ProbabilityMeasure::raw_cdf(double x) const {
  switch (family_) {
    case Family::uniform:
      return std::clamp((x - par_[0]) / (par_[1] - par_[0]), 0.0, 1.0);
    case Family::normal:
      return norm_cdf((x - par_[0]) / std::sqrt(par_[1]));
    case Family::exponential:
      return x <= 0 ? 0.0 : -std::expm1(-par_[0] * x);
    case Family::gumbel:
      return std::exp(-std::exp(-(x - par_[0]) / par_[1]));
    case Family::triangular: {
      const double a = par_[0], c = par_[1], b = par_[2];
      if (x <= a) return 0.0;
      if (x >= b) return 1.0;
      if (x <= c) return (x - a) * (x - a) / ((b - a) * (c - a));
      return 1.0 - (b - x) * (b - x) / ((b - a) * (b - c));
    }
    case Family::generalized_cauchy:
      if (par_[0] == 1.0) return std::atan(x) / M_PI + 0.5;
      break;
    case Family::pareto:
      return x <= par_[0] ? 0.0 : 1.0 - std::pow(par_[0] / x, par_[1]);
    case Family::symmetric_beta:
      break;
    case Family::power:
      return std::clamp(std::pow(x, par_[0]), 0.0, 1.0);
    case Family::generalized_logistic:
      return std::pow(1.0 + std::exp(-x), -par_[0]);
  }
  // table-backed families: cumulative over the (finite) effective support
  if (cdf_nodes_.empty())
    throw std::domain_error(description() + ": CDF needs a finite (truncated) support");
  if (x <= cdf_nodes_.front()) return 0.0;
  if (x >= cdf_nodes_.back()) return cdf_vals_.back();
  auto it = std::upper_bound(cdf_nodes_.begin(), cdf_nodes_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - cdf_nodes_.begin()) - 1;
  return cdf_vals_[j] +
         gl5_cell([this](double t) { return raw_density(t); }, cdf_nodes_[j], x);
}

double ProbabilityMeasure::cdf(double x) const {
  if (x <= support_.a) return 0.0;
  if (x >= support_.b) return 1.0;
  const bool table = !has_closed_cdf() && family_ != Family::normal;
  if (table) return raw_cdf(x) / normalization_;  // table already starts at support_.a
  const double lo = std::isfinite(support_.a) && truncation_ ? raw_cdf(support_.a) : 0.0;
  return (raw_cdf(x) - lo) / normalization_;
}

double ProbabilityMeasure::raw_quantile(double u) const {
  switch (family_) {
    case Family::uniform:
      return par_[0] + u * (par_[1] - par_[0]);
    case Family::exponential:
      return -std::log1p(-u) / par_[0];
    case Family::gumbel:
      return par_[0] - par_[1] * std::log(-std::log(u));
    case Family::triangular: {
      const double a = par_[0], c = par_[1], b = par_[2];
      const double fc = (c - a) / (b - a);
      if (u <= fc) return a + std::sqrt(u * (b - a) * (c - a));
      return b - std::sqrt((1 - u) * (b - a) * (b - c));
    }
    case Family::generalized_cauchy:
      if (par_[0] == 1.0) return std::tan(M_PI * (u - 0.5));
      break;
    case Family::pareto:
      return par_[0] * std::pow(1.0 - u, -1.0 / par_[1]);
    case Family::power:
      return std::pow(u, 1.0 / par_[0]);
    case Family::generalized_logistic:
      return -std::log(std::pow(u, -1.0 / par_[0]) - 1.0);
    default:
      break;
  }
  throw unsupported_error("raw_quantile: no closed form");
}

double ProbabilityMeasure::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile: u outside [0,1]");
  if (u == 0.0) return support_.a;
  if (u == 1.0) return support_.b;
  const bool closed_q = has_closed_cdf() && family_ != Family::normal;
  if (closed_q) {
    double lo = 0.0;
    if (truncation_ && std::isfinite(support_.a)) lo = raw_cdf(support_.a);
    if (!truncation_) return raw_quantile(u);
    return std::clamp(raw_quantile(lo + u * normalization_), support_.a, support_.b);
  }
  // monotone bisection on the truncated CDF
  double a = support_.a, b = support_.b;
  if (!std::isfinite(a) || !std::isfinite(b)) {
    if (family_ != Family::normal)
      throw unsupported_error(description() +
                              ": quantile needs a finite (truncated) support");
    // untruncated normal: expand a bracket around the mean
    const double s = std::sqrt(par_[1]);
    a = par_[0] - 10 * s;
    b = par_[0] + 10 * s;
    while (cdf(a) > u) a -= 10 * s;
    while (cdf(b) < u) b += 10 * s;
  }
  const double tol = 1e-12 * std::max(1.0, std::abs(b - a));
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    if (cdf(mid) < u) a = mid; else b = mid;
  }
  return 0.5 * (a + b);
}

double ProbabilityMeasure::sample_one(RandomStream& rng) const {
  return quantile(rng.uniform_open());
}

std::vector<double> ProbabilityMeasure::sample(std::size_t n, RandomStream& rng) const {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = sample_one(rng);
  return out;
}

// ---------------------------------------------------------------------------
// moments and quadrature

double ProbabilityMeasure::mean() const {
  if (!truncation_) {
    switch (family_) {
      case Family::uniform: return 0.5 * (par_[0] + par_[1]);
      case Family::normal: return par_[0];
      case Family::exponential: return 1.0 / par_[0];
      case Family::gumbel: return par_[0] + par_[1] * kEulerGamma;
      case Family::triangular: return (par_[0] + par_[1] + par_[2]) / 3.0;
      case Family::generalized_cauchy:
        if (par_[0] <= 1.0)
          throw std::domain_error("generalized_cauchy: mean needs beta > 1");
        return 0.0;
      case Family::pareto:
        if (par_[1] <= 1.0) throw std::domain_error("pareto: mean needs alpha > 1");
        return par_[1] * par_[0] / (par_[1] - 1.0);
      case Family::symmetric_beta: return 0.0;
      case Family::power: return par_[0] / (par_[0] + 1.0);
      case Family::generalized_logistic: {
        // integrate over a quantile window; the tails decay exponentially
        const double lo = raw_quantile(1e-14), hi = raw_quantile(1.0 - 1e-14);
        return integrate([this](double x) { return x * raw_density(x); }, lo, hi, 4000);
      }
    }
  }
  if (family_ == Family::exponential) {
    const double g = par_[0], lo = support_.a, hi = support_.b;
    const double elo = std::exp(-g * lo), ehi = std::exp(-g * hi);
    return ((lo + 1 / g) * elo - (hi + 1 / g) * ehi) / (elo - ehi);
  }
  if (family_ == Family::uniform) return 0.5 * (support_.a + support_.b);
  return quadrature([](double x) { return x; });
}

std::vector<double> ProbabilityMeasure::cell_edges(int cells) const {
  if (!support_.finite())
    throw std::domain_error(description() + ": finite support required");
  if (cells < 1) throw std::invalid_argument("cell_edges: cells >= 1");
  std::vector<double> edges(static_cast<std::size_t>(cells) + 1);
  for (int j = 0; j <= cells; ++j)
    edges[j] = support_.a + (support_.b - support_.a) * j / cells;
  edges.back() = support_.b;
  for (double bp : breakpoints_) {
    auto it = std::lower_bound(edges.begin(), edges.end(), bp);
    if (it != edges.end() && *it != bp && it != edges.begin()) edges.insert(it, bp);
  }
  return edges;
}

double ProbabilityMeasure::quadrature(const std::function<double(double)>& f, int cells) const {
  auto edges = cell_edges(cells);
  return integrate_edges([&](double x) { return f(x) * raw_density(x); }, edges) /
         normalization_;
}

// ---------------------------------------------------------------------------
// JSON spec

namespace {

const std::vector<std::string>& param_keys(Family f) {
  static const std::vector<std::string> uni{"a", "b"};
  static const std::vector<std::string> nrm{"mean", "variance"};
  static const std::vector<std::string> exp_{"rate"};
  static const std::vector<std::string> gum{"location", "scale"};
  static const std::vector<std::string> tri{"a", "mode", "b"};
  static const std::vector<std::string> bet{"beta"};
  static const std::vector<std::string> par{"z", "alpha"};
  static const std::vector<std::string> alp{"alpha"};
  switch (f) {
    case Family::uniform: return uni;
    case Family::normal: return nrm;
    case Family::exponential: return exp_;
    case Family::gumbel: return gum;
    case Family::triangular: return tri;
    case Family::generalized_cauchy: return bet;
    case Family::pareto: return par;
    case Family::symmetric_beta: return bet;
    case Family::power: return alp;
    case Family::generalized_logistic: return alp;
  }
  throw std::logic_error("param_keys: unreachable");
}

ProbabilityMeasure build(Family f, const std::vector<double>& p) {
  switch (f) {
    case Family::uniform: return ProbabilityMeasure::uniform(p[0], p[1]);
    case Family::normal: return ProbabilityMeasure::normal(p[0], p[1]);
    case Family::exponential: return ProbabilityMeasure::exponential(p[0]);
    case Family::gumbel: return ProbabilityMeasure::gumbel(p[0], p[1]);
    case Family::triangular: return ProbabilityMeasure::triangular(p[0], p[1], p[2]);
    case Family::generalized_cauchy: return ProbabilityMeasure::generalized_cauchy(p[0]);
    case Family::pareto: return ProbabilityMeasure::pareto(p[0], p[1]);
    case Family::symmetric_beta: return ProbabilityMeasure::symmetric_beta(p[0]);
    case Family::power: return ProbabilityMeasure::power(p[0]);
    case Family::generalized_logistic: return ProbabilityMeasure::generalized_logistic(p[0]);
  }
  throw std::logic_error("build: unreachable");
}

}  // namespace

ProbabilityMeasure ProbabilityMeasure::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("measure spec: expected an object");
  for (auto& [key, _] : j.items()) {
    if (key != "family" && key != "params" && key != "truncation")
      throw std::invalid_argument("measure spec: unknown field '" + key + "'");
  }
  if (!j.contains("family") || !j.contains("params"))
    throw std::invalid_argument("measure spec: 'family' and 'params' are required");
  const Family fam = family_from_name(j.at("family").get<std::string>());
  const auto& keys = param_keys(fam);
  const auto& jp = j.at("params");
  for (auto& [key, _] : jp.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw std::invalid_argument("measure spec: unknown parameter '" + key + "' for " +
                                  family_name(fam));
  }
  std::vector<double> p;
  for (const auto& k : keys) {
    if (!jp.contains(k))
      throw std::invalid_argument("measure spec: missing parameter '" + k + "'");
    p.push_back(jp.at(k).get<double>());
  }
  ProbabilityMeasure m = build(fam, p);
  if (j.contains("truncation")) {
    const auto& t = j.at("truncation");
    if (!t.is_array() || t.size() != 2)
      throw std::invalid_argument("measure spec: truncation must be [lo, hi]");
    m = m.truncated(t[0].get<double>(), t[1].get<double>());
  }
  return m;
}

std::string ProbabilityMeasure::to_json_text() const {
  nlohmann::json j;
  j["family"] = family_name(family_);
  const auto& keys = param_keys(family_);
  for (int k = 0; k < npar_; ++k) j["params"][keys[k]] = par_[k];
  if (truncation_) j["truncation"] = {support_.a, support_.b};
  return j.dump();
}

std::string ProbabilityMeasure::description() const {
  std::ostringstream os;
  os << family_name(family_) << "(";
  for (int k = 0; k < npar_; ++k) os << (k ? "," : "") << par_[k];
  os << ")";
  if (truncation_) os << "|[" << support_.a << "," << support_.b << "]";
  return os.str();
}

}  // namespace pgsa
