#include "pgsa/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "pgsa/errors.hpp"
#include "pgsa/spectral.hpp"

namespace pgsa {

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double t = (x - xs[j]) / (xs[j + 1] - xs[j]);
  return ys[j] + t * (ys[j + 1] - ys[j]);
}

// 4th-order central difference with the stencil pulled inside the support
double fd_derivative(const std::function<double(double)>& f, double x, const Interval& s) {
  double h = 1e-5 * std::max(1.0, std::abs(x));
  if (s.finite()) h = std::min(h, 1e-5 * s.length());
  if (std::isfinite(s.a)) h = std::min(h, std::max((x - s.a) / 2, 1e-14));
  if (std::isfinite(s.b)) h = std::min(h, std::max((s.b - x) / 2, 1e-14));
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

double fd_second(const std::function<double(double)>& f, double x, const Interval& s) {
  double h = 3e-4 * std::max(1.0, std::abs(x));
  if (s.finite()) h = std::min(h, 2e-4 * s.length());
  if (std::isfinite(s.a)) h = std::min(h, std::max((x - s.a) / 2, 1e-12));
  if (std::isfinite(s.b)) h = std::min(h, std::max((s.b - x) / 2, 1e-12));
  return (f(x - h) - 2 * f(x) + f(x + h)) / (h * h);
}

}  // namespace

// ---------------------------------------------------------------------------
// WeightCurve

WeightCurve WeightCurve::from_functions(Interval support, std::function<double(double)> w,
                                        std::function<double(double)> dw,
                                        std::function<double(double)> d2w,
                                        std::string label) {
  WeightCurve c;
  c.support_ = support;
  c.w_ = std::move(w);
  c.dw_ = std::move(dw);
  c.d2w_ = std::move(d2w);
  c.label_ = std::move(label);
  c.prov_ = {BoundaryProvenance::limit_formula, BoundaryProvenance::limit_formula};
  return c;
}

WeightCurve WeightCurve::unit(Interval support) {
  auto c = from_functions(support, [](double) { return 1.0; },
                          [](double) { return 0.0; }, [](double) { return 0.0; }, "unit");
  return c;
}

WeightCurve WeightCurve::tabulated(std::vector<double> x, std::vector<double> w,
                                   std::pair<BoundaryProvenance, BoundaryProvenance> prov,
                                   std::string label) {
  if (x.size() != w.size() || x.size() < 2)
    throw std::invalid_argument("WeightCurve::tabulated: need matching grids, size >= 2");
  if (!std::is_sorted(x.begin(), x.end()))
    throw std::invalid_argument("WeightCurve::tabulated: grid must be sorted");
  WeightCurve c;
  c.support_ = {x.front(), x.back()};
  c.xs_ = std::move(x);
  c.ws_ = std::move(w);
  c.prov_ = prov;
  c.label_ = std::move(label);
  for (std::size_t j = 1; j + 1 < c.xs_.size(); ++j)
    if (!(c.ws_[j] > 0))
      throw numerical_error("WeightCurve: tabulated weight not positive at interior node");
  return c;
}

double WeightCurve::value(double x) const {
  if (w_) return w_(x);
  return interp(xs_, ws_, x);
}

double WeightCurve::derivative(double x) const {
  if (dw_) return dw_(x);
  if (w_) return fd_derivative(w_, x, support_);
  // slope of the containing segment
  if (x <= xs_.front()) x = xs_.front();
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t j = it == xs_.end() ? xs_.size() - 1 : static_cast<std::size_t>(it - xs_.begin());
  if (j == 0) j = 1;
  return (ws_[j] - ws_[j - 1]) / (xs_[j] - xs_[j - 1]);
}

double WeightCurve::second_derivative(double x) const {
  if (d2w_) return d2w_(x);
  if (w_) return fd_second(w_, x, support_);
  return fd_second([this](double t) { return value(t); }, x, support_);
}

std::pair<double, double> WeightCurve::boundary_values() const {
  if (w_) {
    return {std::isfinite(support_.a) ? w_(support_.a) : 0.0,
            std::isfinite(support_.b) ? w_(support_.b) : 0.0};
  }
  return {ws_.front(), ws_.back()};
}

const std::vector<double>& WeightCurve::grid() const {
  if (w_) throw std::logic_error("WeightCurve::grid: closed-form curve, use sampled()");
  return xs_;
}

const std::vector<double>& WeightCurve::grid_values() const {
  if (w_) throw std::logic_error("WeightCurve::grid_values: closed-form curve");
  return ws_;
}

std::pair<std::vector<double>, std::vector<double>> WeightCurve::sampled(int nodes) const {
  if (!support_.finite())
    throw std::domain_error("WeightCurve::sampled: infinite support");
  if (!w_) return {xs_, ws_};
  std::vector<double> x(static_cast<std::size_t>(nodes) + 1), v(x.size());
  for (int j = 0; j <= nodes; ++j) {
    x[j] = support_.a + (support_.b - support_.a) * j / nodes;
    v[j] = w_(x[j]);
  }
  return {std::move(x), std::move(v)};
}

void WeightCurve::write_csv(std::ostream& os) const {
  const auto [x, v] = w_ ? sampled(500) : std::make_pair(xs_, ws_);
  os << "x,w\n";
  char buf[80];
  for (std::size_t j = 0; j < x.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.12e,%.12e\n", x[j], v[j]);
    os << buf;
  }
}

WeightCurve WeightCurve::read_csv(std::istream& is, std::string label) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,w", 0) != 0)
    throw std::invalid_argument("weight CSV: missing 'x,w' header");
  std::vector<double> xs, ws;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("weight CSV: malformed row '" + line + "'");
    xs.push_back(std::stod(line.substr(0, comma)));
    ws.push_back(std::stod(line.substr(comma + 1)));
  }
  return tabulated(std::move(xs), std::move(ws),
                   {BoundaryProvenance::extrapolated, BoundaryProvenance::extrapolated},
                   std::move(label));
}

// ---------------------------------------------------------------------------
// closed forms for the linear saturating function

SaturatingFunction linear_saturating(const ProbabilityMeasure& m) {
  const double mean = m.mean();
  SaturatingFunction g;
  g.value = [mean](double x) { return x - mean; };
  g.derivative = [](double) { return 1.0; };
  g.second_derivative = [](double) { return 0.0; };
  g.monotonicity = +1;
  g.derivative_zero_at_a = false;
  g.derivative_zero_at_b = false;
  return g;
}

WeightCurve weight_lin_closed_form(const ProbabilityMeasure& m) {
  const auto p = m.params();
  const Interval s = m.support();
  switch (m.family()) {
    case Family::uniform: {
      const double a = s.a, b = s.b;
      return WeightCurve::from_functions(
          s, [a, b](double x) { return 0.5 * (x - a) * (b - x); },
          [a, b](double x) { return 0.5 * (a + b) - x; }, [](double) { return -1.0; },
          "lin");
    }
    case Family::exponential: {
      const double g = p[0];
      if (!m.is_truncated()) {
        return WeightCurve::from_functions(
            s, [g](double x) { return x / g; }, [g](double) { return 1.0 / g; },
            [](double) { return 0.0; }, "lin");
      }
      if (s.a != 0.0)
        throw unsupported_error("lin closed form: truncated exponential needs window [0,h]");
      const double h = s.b, d = std::expm1(g * h);
      return WeightCurve::from_functions(
          s, [g, h, d](double x) { return (x - h * std::expm1(g * x) / d) / g; },
          [g, h, d](double x) { return (1.0 - h * g * std::exp(g * x) / d) / g; },
          [g, h, d](double x) { return -h * g * std::exp(g * x) / d; }, "lin");
    }
    case Family::normal: {
      const double mu = p[0], v = p[1];
      if (!m.is_truncated()) {
        return WeightCurve::from_functions(
            s, [v](double) { return v; }, [](double) { return 0.0; },
            [](double) { return 0.0; }, "lin");
      }
      const double la = s.a - mu, lb = s.b - mu;
      const double width = s.b - s.a;
      double h;
      if (std::abs(la + lb) <= 1e-9 * width) {
        h = lb;  // symmetric window [mu-h, mu+h]
      } else if (std::abs(la) <= 1e-9 * width || std::abs(lb) <= 1e-9 * width) {
        // window starting or ending at the mean: the symmetric-window curve
        // restricted to one half, the convention used for plotting
        h = std::max(std::abs(la), std::abs(lb));
      } else {
        throw unsupported_error(
            "lin closed form: truncated normal needs a symmetric window about the mean");
      }
      return WeightCurve::from_functions(
          s,
          [mu, v, h](double x) {
            return v * (1.0 - std::exp(((x - mu) * (x - mu) - h * h) / (2 * v)));
          },
          [mu, v, h](double x) {
            return -(x - mu) * std::exp(((x - mu) * (x - mu) - h * h) / (2 * v));
          },
          [mu, v, h](double x) {
            const double e = std::exp(((x - mu) * (x - mu) - h * h) / (2 * v));
            return -e * (1.0 + (x - mu) * (x - mu) / v);
          },
          "lin");
    }
    case Family::generalized_cauchy: {
      const double beta = p[0];
      if (!m.is_truncated()) {
        if (beta <= 1.5)
          throw std::domain_error("lin closed form: full Cauchy needs beta > 3/2");
        return WeightCurve::from_functions(
            s, [beta](double x) { return (1 + x * x) / (2 * (beta - 1)); },
            [beta](double x) { return x / (beta - 1); },
            [beta](double) { return 1.0 / (beta - 1); }, "lin");
      }
      if (std::abs(s.a + s.b) > 1e-9 * (s.b - s.a))
        throw unsupported_error("lin closed form: truncated Cauchy needs window [-h,h]");
      const double h = s.b;
      if (beta == 1.0) {
        return WeightCurve::from_functions(
            s,
            [h](double x) {
              return 0.5 * (1 + x * x) * std::log((1 + h * h) / (1 + x * x));
            },
            [h](double x) { return x * std::log((1 + h * h) / (1 + x * x)) - x; },
            [h](double x) {
              return std::log((1 + h * h) / (1 + x * x)) - 2 * x * x / (1 + x * x) - 1;
            },
            "lin");
      }
      const double c = std::pow(1 + h * h, 1 - beta);
      return WeightCurve::from_functions(
          s,
          [beta, c](double x) {
            return ((1 + x * x) - std::pow(1 + x * x, beta) * c) / (2 * (beta - 1));
          },
          [beta, c](double x) {
            return (2 * x - 2 * beta * x * std::pow(1 + x * x, beta - 1) * c) /
                   (2 * (beta - 1));
          },
          [beta, c](double x) {
            const double t = 1 + x * x;
            return (2 - 2 * beta * c *
                            (std::pow(t, beta - 1) +
                             2 * (beta - 1) * x * x * std::pow(t, beta - 2))) /
                   (2 * (beta - 1));
          },
          "lin");
    }
    case Family::pareto: {
      const double z = p[0], alpha = p[1];
      if (!m.is_truncated()) {
        if (alpha <= 2.0)
          throw std::domain_error("lin closed form: full Pareto needs alpha > 2");
        return WeightCurve::from_functions(
            s, [z, alpha](double x) { return x * (x - z) / (alpha - 1); },
            [z, alpha](double x) { return (2 * x - z) / (alpha - 1); },
            [alpha](double) { return 2.0 / (alpha - 1); }, "lin");
      }
      if (std::abs(s.a - z) > 1e-12 * z)
        throw unsupported_error("lin closed form: truncated Pareto needs window [z, z+h]");
      const double zh = s.b;
      if (alpha == 1.0) {
        const double L = std::log(zh / z), D = 1 / z - 1 / zh;
        return WeightCurve::from_functions(
            s,
            [z, L, D](double x) {
              return x * x * (L * (1 / z - 1 / x) / D - std::log(x / z));
            },
            nullptr, nullptr, "lin");
      }
      const double r = (std::pow(z, 1 - alpha) - std::pow(zh, 1 - alpha)) /
                       (std::pow(z, -alpha) - std::pow(zh, -alpha));
      return WeightCurve::from_functions(
          s,
          [z, alpha, r](double x) {
            return std::pow(x, alpha + 1) / (alpha - 1) *
                   (r * (std::pow(z, -alpha) - std::pow(x, -alpha)) -
                    (std::pow(z, 1 - alpha) - std::pow(x, 1 - alpha)));
          },
          nullptr, nullptr, "lin");
    }
    default:
      throw unsupported_error("no closed-form lin weight for " +
                              family_name(m.family()));
  }
}

// ---------------------------------------------------------------------------
// boundary values and the RK4 construction

namespace {

double max_abs_derivative(const SaturatingFunction& g, const Interval& s) {
  double mx = 0.0;
  for (int j = 0; j <= 64; ++j) {
    const double x = s.a + (s.b - s.a) * j / 64.0;
    mx = std::max(mx, std::abs(g.derivative(x)));
  }
  return mx;
}

bool derivative_is_zero(const SaturatingFunction& g, const Interval& s, Endpoint end) {
  if (end == Endpoint::left && g.derivative_zero_at_a) return *g.derivative_zero_at_a;
  if (end == Endpoint::right && g.derivative_zero_at_b) return *g.derivative_zero_at_b;
  const double x = end == Endpoint::left ? s.a : s.b;
  return std::abs(g.derivative(x)) <= 1e-9 * std::max(max_abs_derivative(g, s), 1e-300);
}

double endpoint_second_derivative(const SaturatingFunction& g, const Interval& s,
                                  Endpoint end, int nodes) {
  const double h = s.length() / nodes;
  if (g.second_derivative) {
    return g.second_derivative(end == Endpoint::left ? s.a : s.b);
  }
  // one-sided second difference with the grid step
  if (end == Endpoint::left)
    return (g.value(s.a) - 2 * g.value(s.a + h) + g.value(s.a + 2 * h)) / (h * h);
  return (g.value(s.b) - 2 * g.value(s.b - h) + g.value(s.b - 2 * h)) / (h * h);
}

}  // namespace

double boundary_value(const SaturatingFunction& g, const ProbabilityMeasure& m,
                      Endpoint end, int nodes) {
  const Interval s = m.support();
  const double x = end == Endpoint::left ? s.a : s.b;
  if (!std::isfinite(x))
    throw std::invalid_argument("boundary_value: endpoint must be finite");
  if (!derivative_is_zero(g, s, end)) return 0.0;
  const double g2 = endpoint_second_derivative(g, s, end, nodes);
  const double scale = std::max(std::abs(g.value(x)), 1e-300);
  if (std::abs(g2) <= 1e-12 * scale / std::max(s.length(), 1.0))
    throw std::invalid_argument(
        "boundary_value: g' and g'' both vanish at the endpoint");
  return -g.value(x) / g2;
}

WeightCurve weight_from_g(const ProbabilityMeasure& m, const SaturatingFunction& g_in,
                          int nodes) {
  const Interval s = m.support();
  if (!s.finite()) throw std::domain_error("weight_from_g: finite support required");
  if (nodes < 8) throw std::invalid_argument("weight_from_g: nodes >= 8");

  // centering: tolerate drift up to 1e-3 of the function scale, then correct
  SaturatingFunction g = g_in;
  double gmax = 0.0;
  for (int j = 0; j <= 64; ++j)
    gmax = std::max(gmax, std::abs(g_in.value(s.a + s.length() * j / 64.0)));
  const double c0 = m.quadrature([&](double x) { return g_in.value(x); });
  if (std::abs(c0) > 1e-3 * std::max(gmax, 1e-300))
    throw std::invalid_argument("weight_from_g: g is not centered (|mean| = " +
                                std::to_string(c0) + ")");
  auto base = g_in.value;
  g.value = [base, c0](double x) { return base(x) - c0; };
  const double c1 = m.quadrature([&](double x) { return g.value(x); });
  if (std::abs(c1) > 1e-8 * std::max(gmax, 1.0))
    throw numerical_error("weight_from_g: centering failed");

  const std::size_t n = static_cast<std::size_t>(nodes);
  const double h = s.length() / nodes;
  std::vector<double> x(n + 1), u(n + 1), w(n + 1);
  for (std::size_t j = 0; j <= n; ++j) x[j] = s.a + h * j;
  x[n] = s.b;

  // u' = -g rho; the right side has no u-dependence, so RK4 reduces to
  // Simpson increments with O(h^4) global error
  auto f = [&](double t) { return -g.value(t) * m.density(t); };
  u[0] = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double k1 = f(x[j]);
    const double k2 = f(x[j] + 0.5 * h);
    const double k4 = f(x[j + 1]);
    u[j + 1] = u[j] + h / 6.0 * (k1 + 4.0 * k2 + k4);
  }

  for (std::size_t j = 1; j < n; ++j) {
    w[j] = u[j] / (g.derivative(x[j]) * m.density(x[j]));
    if (!(w[j] > 0.0))
      throw numerical_error(
          "weight_from_g: nonpositive weight at interior node (hypotheses violated)");
  }

  const double bva = boundary_value(g, m, Endpoint::left, nodes);
  const double bvb = boundary_value(g, m, Endpoint::right, nodes);
  w[0] = bva;
  w[n] = bvb;
  auto prov = std::make_pair(
      bva == 0.0 ? BoundaryProvenance::zero : BoundaryProvenance::limit_formula,
      bvb == 0.0 ? BoundaryProvenance::zero : BoundaryProvenance::limit_formula);

  // where the raw division is 0/0 at the endpoint, replace the two nearest
  // interior nodes by the quadratic through the limit and nodes 3, 4
  auto patch = [&](bool left) {
    const std::size_t i0 = left ? 0 : n;
    const auto idx = [&](std::size_t k) { return left ? k : n - k; };
    const double x0 = x[i0], x3 = x[idx(3)], x4 = x[idx(4)];
    const double y0 = w[i0], y3 = w[idx(3)], y4 = w[idx(4)];
    // Lagrange quadratic
    auto q = [&](double t) {
      return y0 * (t - x3) * (t - x4) / ((x0 - x3) * (x0 - x4)) +
             y3 * (t - x0) * (t - x4) / ((x3 - x0) * (x3 - x4)) +
             y4 * (t - x0) * (t - x3) / ((x4 - x0) * (x4 - x3));
    };
    w[idx(1)] = q(x[idx(1)]);
    w[idx(2)] = q(x[idx(2)]);
  };
  if (derivative_is_zero(g, s, Endpoint::left)) patch(true);
  if (derivative_is_zero(g, s, Endpoint::right)) patch(false);

  for (std::size_t j = 1; j < n; ++j)
    if (!(w[j] > 0.0))
      throw numerical_error("weight_from_g: boundary patch produced a nonpositive value");

  return WeightCurve::tabulated(std::move(x), std::move(w), prov, "w_g");
}

// ---------------------------------------------------------------------------
// reference-measure weights

std::pair<WeightCurve, SaturatingFunction> reference_weight(const ProbabilityMeasure& m,
                                                            ReferenceKind kind, int nodes) {
  const Interval s = m.support();
  if (!s.finite()) throw std::domain_error("reference_weight: finite support required");

  SaturatingFunction g;
  if (kind == ReferenceKind::uniform_ref) {
    const double a = s.a, len = s.length();
    auto gt = [a, len](double x) { return std::cos(M_PI * (x - a) / len); };
    const double c = m.quadrature(gt);
    g.value = [gt, c](double x) { return gt(x) - c; };
    g.derivative = [a, len](double x) {
      return -M_PI / len * std::sin(M_PI * (x - a) / len);
    };
    g.second_derivative = [a, len](double x) {
      return -(M_PI / len) * (M_PI / len) * std::cos(M_PI * (x - a) / len);
    };
    g.monotonicity = -1;
    g.derivative_zero_at_a = true;
    g.derivative_zero_at_b = true;
  } else {
    g = detail::gaussian_reference_saturating(m, nodes);
  }

  WeightCurve w = weight_from_g(m, g, nodes);
  const auto [wa, wb] = w.boundary_values();
  if (!(wa > 0.0) || !(wb > 0.0))
    throw numerical_error("reference_weight: weight does not stay positive at the boundary");
  auto grid = w.grid();
  auto vals = w.grid_values();
  return {WeightCurve::tabulated(std::move(grid), std::move(vals),
                                 {BoundaryProvenance::limit_formula,
                                  BoundaryProvenance::limit_formula},
                                 kind == ReferenceKind::uniform_ref ? "w_U" : "w_G"),
          g};
}

}  // namespace pgsa
