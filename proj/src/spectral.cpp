#include "pgsa/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <memory>

#include "pgsa/errors.hpp"

namespace pgsa {

namespace {

constexpr double kGlx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                            0.5384693101056831, 0.9061798459386640};
constexpr double kGlw[5] = {0.2369268850561891, 0.4786286704993665,
                            0.5688888888888889, 0.4786286704993665,
                            0.2369268850561891};
constexpr double kZ975 = 1.959963984540054;

/// Symmetric tridiagonal matrix: diagonal d (n), off-diagonal e (n-1).
struct TriSym {
  std::vector<double> d, e;
  std::size_t size() const { return d.size(); }

  void mul(const std::vector<double>& x, std::vector<double>& y) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
      double s = d[i] * x[i];
      if (i > 0) s += e[i - 1] * x[i - 1];
      if (i + 1 < n) s += e[i] * x[i + 1];
      y[i] = s;
    }
  }
};

/// LU factorization with partial pivoting of a tridiagonal matrix
/// (general, works for the indefinite shifted pencils used in inverse
/// iteration). Layout after factorization: dl, d, du, du2 + pivot flags.
struct TriLU {
  std::vector<double> dl, d, du, du2;
  std::vector<int> piv;

  explicit TriLU(const TriSym& A, const TriSym& B, double sigma) {
    const std::size_t n = A.size();
    dl.assign(n, 0.0);
    d.assign(n, 0.0);
    du.assign(n, 0.0);
    du2.assign(n, 0.0);
    piv.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = A.d[i] - sigma * B.d[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double off = A.e[i] - sigma * B.e[i];
      dl[i + 1] = off;  // sub-diagonal entry of row i+1
      du[i] = off;
    }
    // dgttrf-style elimination
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i + 1])) {
        piv[i] = 0;
        if (d[i] == 0.0) d[i] = 1e-300;
        const double fact = dl[i + 1] / d[i];
        dl[i + 1] = fact;
        d[i + 1] -= fact * du[i];
        if (i + 2 < n) du2[i] = 0.0;
      } else {
        piv[i] = 1;
        const double fact = d[i] / dl[i + 1];
        d[i] = dl[i + 1];
        dl[i + 1] = fact;
        const double tmp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = tmp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
      }
    }
    if (d[n - 1] == 0.0) d[n - 1] = 1e-300;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (piv[i] == 0) {
        b[i + 1] -= dl[i + 1] * b[i];
      } else {
        const double tmp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = tmp - dl[i + 1] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t k = n; k-- > 2;) {
      const std::size_t i = k - 2;
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
  }
};

struct Assembled {
  std::vector<double> nodes;
  TriSym K, M;
};

Assembled assemble_p1(const ProbabilityMeasure& m, const WeightCurve& w, int cells) {
  const Interval s = m.support();
  if (!s.finite()) throw std::domain_error("solve_eigenbasis: finite support required");
  if (cells < 50) throw std::invalid_argument("solve_eigenbasis: cells >= 50");
  const std::size_t n = static_cast<std::size_t>(cells) + 1;
  Assembled out;
  out.nodes.resize(n);
  const double h = s.length() / cells;
  for (std::size_t j = 0; j < n; ++j) out.nodes[j] = s.a + h * j;
  out.nodes.back() = s.b;
  out.K.d.assign(n, 0.0);
  out.K.e.assign(n - 1, 0.0);
  out.M.d.assign(n, 0.0);
  out.M.e.assign(n - 1, 0.0);
  for (int j = 0; j < cells; ++j) {
    const double x0 = out.nodes[j], x1 = out.nodes[j + 1];
    const double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
    double k00 = 0.0, m00 = 0.0, m01 = 0.0, m11 = 0.0;
    for (int q = 0; q < 5; ++q) {
      const double x = mid + half * kGlx[q];
      const double wq = half * kGlw[q];
      const double rho = m.density(x);
      const double wv = w.value(x);
      const double t = (x - x0) / (x1 - x0);
      k00 += wq * wv * rho;
      m00 += wq * rho * (1 - t) * (1 - t);
      m01 += wq * rho * (1 - t) * t;
      m11 += wq * rho * t * t;
    }
    const double kl = k00 / ((x1 - x0) * (x1 - x0));
    out.K.d[j] += kl;
    out.K.d[j + 1] += kl;
    out.K.e[j] -= kl;
    out.M.d[j] += m00;
    out.M.d[j + 1] += m11;
    out.M.e[j] += m01;
  }
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double m_inner(const TriSym& M, const std::vector<double>& a, const std::vector<double>& b,
               std::vector<double>& scratch) {
  M.mul(b, scratch);
  return dot(a, scratch);
}

}  // namespace

double SpectralBasis::eval(int n, double x) const {
  const auto& v = eigenfunctions.at(static_cast<std::size_t>(n) - 1);
  if (x <= nodes.front()) return v.front();
  if (x >= nodes.back()) return v.back();
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - nodes.begin()) - 1;
  const double t = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
  return v[j] + t * (v[j + 1] - v[j]);
}

double SpectralBasis::eval_derivative(int n, double x) const {
  const auto& v = derivatives.at(static_cast<std::size_t>(n) - 1);
  if (x <= nodes.front()) return v.front();
  if (x >= nodes.back()) return v.back();
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - nodes.begin()) - 1;
  const double t = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
  return v[j] + t * (v[j + 1] - v[j]);
}

SpectralBasis solve_eigenbasis(const ProbabilityMeasure& m, const WeightCurve& w,
                               int num_eig, int cells) {
  if (num_eig < 1) throw std::invalid_argument("solve_eigenbasis: num_eig >= 1");
  Assembled A = assemble_p1(m, w, cells);
  const std::size_t n = A.nodes.size();

  std::vector<double> scratch(n), ones(n, 1.0);
  const double m_total = m_inner(A.M, ones, ones, scratch);

  SpectralBasis basis;
  basis.nodes = A.nodes;
  basis.lambda0 = m_inner(A.K, ones, ones, scratch) / m_total;

  // M-orthonormal deflation set, starting with the constant mode
  std::vector<std::vector<double>> defl;
  {
    std::vector<double> e0(n, 1.0 / std::sqrt(m_total));
    defl.push_back(std::move(e0));
  }

  const double kscale = *std::max_element(A.K.d.begin(), A.K.d.end());
  const double mscale = *std::max_element(A.M.d.begin(), A.M.d.end());
  const double reg = 1e-10 * kscale / mscale;

  auto orthogonalize = [&](std::vector<double>& v) {
    for (const auto& u : defl) {
      const double c = m_inner(A.M, u, v, scratch);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * u[i];
    }
  };
  auto m_normalize = [&](std::vector<double>& v) {
    const double nrm = std::sqrt(m_inner(A.M, v, v, scratch));
    if (!(nrm > 0)) throw spectral_error("inverse iteration collapsed to zero");
    for (auto& t : v) t /= nrm;
  };
  auto rayleigh = [&](const std::vector<double>& v) {
    return m_inner(A.K, v, v, scratch) / m_inner(A.M, v, v, scratch);
  };
  auto residual_norm = [&](const std::vector<double>& v, double lam) {
    std::vector<double> kv(n), mv(n);
    A.K.mul(v, kv);
    A.M.mul(v, mv);
    double rn = 0.0, mn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = kv[i] - lam * mv[i];
      rn += r * r;
      mn += mv[i] * mv[i];
    }
    return std::sqrt(rn) / std::sqrt(mn);
  };

  for (int mode = 1; mode <= num_eig; ++mode) {
    // start vector shaped like the expected Neumann mode
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = std::cos(mode * M_PI * static_cast<double>(i) / (n - 1)) +
             1e-3 * std::sin((mode + 1) * M_PI * (i + 0.5) / n);
    orthogonalize(v);
    m_normalize(v);

    double lam = rayleigh(v);
    // fixed-shift phase
    {
      TriLU lu(A.K, A.M, -reg);
      for (int it = 0; it < 200; ++it) {
        std::vector<double> rhs(n);
        A.M.mul(v, rhs);
        lu.solve(rhs);
        orthogonalize(rhs);
        m_normalize(rhs);
        v = std::move(rhs);
        const double lam_new = rayleigh(v);
        const bool done = std::abs(lam_new - lam) <= 1e-8 * std::max(lam_new, reg);
        lam = lam_new;
        if (done && it >= 2) break;
      }
    }
    // Rayleigh refinement with a shift just below the estimate
    for (int it = 0; it < 6; ++it) {
      if (residual_norm(v, lam) <= 1e-10 * std::max(1.0, lam)) break;
      const double sigma = lam * (1.0 - 1e-5) - reg;
      TriLU lu(A.K, A.M, sigma);
      std::vector<double> rhs(n);
      A.M.mul(v, rhs);
      lu.solve(rhs);
      orthogonalize(rhs);
      m_normalize(rhs);
      v = std::move(rhs);
      lam = rayleigh(v);
    }

    const double res = residual_norm(v, lam);
    if (!(res <= 1e-8 * std::max(1.0, lam)))
      throw spectral_error("eigensolver did not converge (residual " +
                           std::to_string(res) + ")");
    if (mode == 1) {
      if (!(lam > 1e-10))
        throw spectral_error("spectral gap below 1e-10: degenerate weight");
      if (!(basis.lambda0 < 1e-8 * lam))
        throw spectral_error("zero mode not separated from the spectral gap");
    }

    // center, normalize, fix the sign at the right endpoint
    const double c = m_inner(A.M, ones, v, scratch) / m_total;
    for (auto& t : v) t -= c;
    m_normalize(v);
    double tail = v[n - 1];
    if (tail == 0.0) tail = v[n - 2];
    if (tail < 0.0)
      for (auto& t : v) t = -t;

    basis.eigenvalues.push_back(lam);
    basis.residuals.push_back(res);
    defl.push_back(v);
    basis.eigenfunctions.push_back(std::move(v));
  }

  // nodal derivatives: average adjacent element slopes, one-sided at the ends
  for (const auto& v : basis.eigenfunctions) {
    std::vector<double> d(n);
    std::vector<double> slope(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j)
      slope[j] = (v[j + 1] - v[j]) / (basis.nodes[j + 1] - basis.nodes[j]);
    d[0] = slope[0];
    d[n - 1] = slope[n - 2];
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = 0.5 * (slope[j - 1] + slope[j]);
    basis.derivatives.push_back(std::move(d));
  }
  return basis;
}

double poincare_constant(const ProbabilityMeasure& m, const WeightCurve& w, int cells) {
  return solve_eigenbasis(m, w, 1, cells).poincare_constant();
}

// ---------------------------------------------------------------------------
// intertwining profiles

namespace {

/// Interior evaluation grid. Unbounded directions are reached through a tan
/// map so tail limits are attained to machine precision; finite endpoints get
/// geometrically refined approach points so boundary limits show up in the
/// infimum.
std::vector<double> profile_grid(const Interval& s, int grid) {
  std::vector<double> x;
  x.reserve(grid + 80);
  const bool la = std::isfinite(s.a), lb = std::isfinite(s.b);
  for (int j = 0; j < grid; ++j) {
    const double t = (j + 0.5) / grid;  // (0,1)
    double xi;
    if (la && lb) {
      xi = s.a + t * (s.b - s.a);
    } else if (la) {
      xi = s.a + std::tan(0.5 * M_PI * t) * std::max(1.0, std::abs(s.a));
    } else if (lb) {
      xi = s.b - std::tan(0.5 * M_PI * (1 - t)) * std::max(1.0, std::abs(s.b));
    } else {
      xi = std::tan(M_PI * (t - 0.5));
    }
    x.push_back(xi);
  }
  const double len = la && lb ? s.length() : 1.0;
  for (int k = 2; k <= 40; ++k) {
    const double d = len * std::pow(0.5, k);
    if (la) x.push_back(s.a + d);
    if (lb) x.push_back(s.b - d);
  }
  std::sort(x.begin(), x.end());
  return x;
}

IntertwiningProfile make_profile(std::vector<double> x, std::vector<double> vals,
                                 double parameter) {
  IntertwiningProfile p;
  p.x = std::move(x);
  p.values = std::move(vals);
  p.parameter = parameter;
  const auto it = std::min_element(p.values.begin(), p.values.end());
  p.infimum = *it;
  p.argmin = p.x[static_cast<std::size_t>(it - p.values.begin())];
  return p;
}

}  // namespace

IntertwiningProfile intertwining_profile_eps(const ProbabilityMeasure& m,
                                             const WeightCurve& w, double eps, int grid) {
  auto xs = profile_grid(m.support(), grid);
  std::vector<double> vals(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double s1 = m.log_density_derivative(xs[j]);
    const double s2 = m.score_derivative(xs[j]);
    vals[j] = (1.0 - eps) * w.value(xs[j]) * (eps * s1 * s1 - s2);
  }
  return make_profile(std::move(xs), std::move(vals), eps);
}

double intertwining_bound(const ProbabilityMeasure& m, const WeightCurve& w, int eps_grid,
                          int x_grid) {
  auto xs = profile_grid(m.support(), x_grid);
  std::vector<double> s1(xs.size()), s2(xs.size()), wv(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    s1[j] = m.log_density_derivative(xs[j]);
    s2[j] = m.score_derivative(xs[j]);
    wv[j] = w.value(xs[j]);
  }
  auto inf_at = [&](double eps) {
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double v = (1.0 - eps) * wv[j] * (eps * s1[j] * s1[j] - s2[j]);
      inf = std::min(inf, v);
    }
    return inf;
  };

  double best = -std::numeric_limits<double>::infinity(), best_eps = 0.0;
  for (int k = 0; k < eps_grid; ++k) {
    const double eps = static_cast<double>(k) / (eps_grid - 1);
    const double v = inf_at(eps);
    if (v > best) {
      best = v;
      best_eps = eps;
    }
  }
  // golden-section refinement around the grid argmax
  const double step = 1.0 / (eps_grid - 1);
  double lo = std::max(0.0, best_eps - step), hi = std::min(1.0, best_eps + step);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = inf_at(c), fd = inf_at(d);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (fc > fd) {
      hi = d; d = c; fd = fc;
      c = hi - gr * (hi - lo); fc = inf_at(c);
    } else {
      lo = c; c = d; fc = fd;
      d = lo + gr * (hi - lo); fd = inf_at(d);
    }
  }
  best = std::max(best, std::max(fc, fd));
  // an infimum that only stays positive by grid resolution is a boundary
  // limit of zero: no usable bound
  double scale = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j)
    scale = std::max(scale,
                     std::abs((1.0 - best_eps) * wv[j] *
                              (best_eps * s1[j] * s1[j] - s2[j])));
  if (!(best > 1e-8 * scale))
    throw bound_unavailable_error(
        "intertwining_bound: no eps in [0,1] gives a positive infimum");
  return 1.0 / best;
}

IntertwiningProfile intertwining_profile_h(const ProbabilityMeasure& m,
                                           const WeightCurve& w,
                                           const std::function<double(double)>& hp,
                                           const std::function<double(double)>& hpp,
                                           int grid) {
  const Interval s = m.support();
  auto xs = profile_grid(s, grid);

  // sign consistency of h'
  int sign = 0;
  for (double x : xs) {
    const double v = hp(x);
    if (v == 0.0 || !std::isfinite(v))
      throw std::invalid_argument("intertwining_profile_h: h' vanishes on the interior");
    const int sg = v > 0 ? 1 : -1;
    if (sign == 0) sign = sg;
    if (sg != sign)
      throw std::invalid_argument("intertwining_profile_h: h' changes sign");
  }

  // h''' by high-order differences of h''; the step shrinks with the distance
  // to the boundary so the stencil stays inside even at the approach points
  auto hppp = [&](double x) {
    double step = 1e-2 * std::max(1.0, std::abs(x));
    if (std::isfinite(s.a)) step = std::min(step, 0.2 * (x - s.a));
    if (std::isfinite(s.b)) step = std::min(step, 0.2 * (s.b - x));
    return (hpp(x - 2 * step) - 8 * hpp(x - step) + 8 * hpp(x + step) -
            hpp(x + 2 * step)) /
           (12 * step);
  };

  std::vector<double> vals(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double x = xs[j];
    const double s1 = m.log_density_derivative(x);
    const double s2 = m.score_derivative(x);
    const double wv = w.value(x), w1 = w.derivative(x), w2 = w.second_derivative(x);
    const double p = hp(x), p1 = hpp(x), p2 = hppp(x);
    // (L_w h)' = w p'' + (2w' + w s) p' + (w'' + w' s + w s') p
    vals[j] = -(wv * p2 + (2 * w1 + wv * s1) * p1 + (w2 + w1 * s1 + wv * s2) * p) / p;
  }
  auto prof = make_profile(std::move(xs), std::move(vals),
                           std::numeric_limits<double>::quiet_NaN());
  return prof;
}

// ---------------------------------------------------------------------------
// Rayleigh quotients

namespace {

/// Integral of f against the measure on an unbounded support: geometric cell
/// extension until the contributions vanish.
double integrate_unbounded(const ProbabilityMeasure& m,
                           const std::function<double(double)>& f) {
  const Interval s = m.support();
  auto integrand = [&](double x) { return f(x) * m.density(x); };
  auto sweep = [&](double from, int dir) {
    // anchor cell size from the central quantiles
    double scale;
    try {
      scale = std::abs(m.quantile(0.75) - m.quantile(0.25));
    } catch (const std::exception&) {
      scale = 1.0;
    }
    if (!(scale > 0) || !std::isfinite(scale)) scale = 1.0;
    double width = scale / 64.0, x0 = from, total = 0.0;
    int quiet = 0;
    for (int cell = 0; cell < 200000; ++cell) {
      const double x1 = x0 + dir * width;
      const double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
      double c = 0.0;
      for (int q = 0; q < 5; ++q) c += kGlw[q] * integrand(mid + half * kGlx[q]);
      c *= half;
      total += c;
      if (!std::isfinite(total))
        throw numerical_error("rayleigh_quotient: unbounded integral diverged");
      if (std::abs(c) <= 1e-15 * std::max(std::abs(total), 1e-300)) {
        if (++quiet >= 40) return total;
      } else {
        quiet = 0;
      }
      x0 = x1;
      width *= 1.05;
    }
    throw numerical_error(
        "rayleigh_quotient: slow tail decay; use the registered closed form");
  };

  double total = 0.0;
  if (std::isfinite(s.a)) {
    total += sweep(s.a, +1);
  } else if (std::isfinite(s.b)) {
    total += sweep(s.b, -1) * -1.0;
  } else {
    total += sweep(0.0, +1);
    total -= sweep(0.0, -1);
  }
  return total;
}

double measure_integral(const ProbabilityMeasure& m,
                        const std::function<double(double)>& f, int cells) {
  if (m.finite_support()) return m.quadrature(f, cells);
  return integrate_unbounded(m, f);
}

}  // namespace

double rayleigh_quotient(const ProbabilityMeasure& m, const WeightCurve& w,
                         const std::function<double(double)>& f,
                         const std::function<double(double)>& fp) {
  const int cells = 2000;
  const double c = measure_integral(m, f, cells);
  const double num =
      measure_integral(m, [&](double x) { const double v = f(x) - c; return v * v; }, cells);
  const double den = measure_integral(
      m, [&](double x) { const double v = fp(x); return w.value(x) * v * v; }, cells);
  if (!(den > 0.0))
    throw degenerate_error("rayleigh_quotient: zero energy denominator");
  return num / den;
}

// ---------------------------------------------------------------------------
// registered closed-form quotient families

namespace {

double log_beta_z(double a) {
  // Z_a = int_{-1}^1 (1-x^2)^{a-1} dx = sqrt(pi) Gamma(a) / Gamma(a + 1/2)
  return 0.5 * std::log(M_PI) + std::lgamma(a) - std::lgamma(a + 0.5);
}

}  // namespace

LimitQuotientFamily limit_quotient_family(const ProbabilityMeasure& m) {
  LimitQuotientFamily fam;
  const auto p = m.params();
  switch (m.family()) {
    case Family::exponential: {
      const double g = p[0];
      fam.eta_star = g / 2;
      fam.limit = 4.0 / (g * g);
      fam.quotient = [g](double eta) {
        const double d = eta - g;
        return (d * d - g * (g - 2 * eta)) / (eta * eta * d * d);
      };
      fam.make_f = [g](double eta) {
        return [g, eta](double x) { return std::exp(eta * x) - g / (g - eta); };
      };
      fam.make_fp = [](double eta) {
        return [eta](double x) { return eta * std::exp(eta * x); };
      };
      fam.weight = WeightCurve::unit(m.support());
      return fam;
    }
    case Family::generalized_logistic: {
      const double al = p[0];
      fam.eta_star = al / 2;
      fam.limit = 4.0 / (al * al);
      fam.quotient = [al](double eta) {
        return (al + 1 - 2 * eta) * (al + 2 - 2 * eta) / (2 * (al - eta) * (al - eta));
      };
      fam.make_f = [al](double eta) {
        return [al, eta](double x) {
          return std::pow(1 + std::exp(-x), eta) - al / (al - eta);
        };
      };
      fam.make_fp = [](double eta) {
        return [eta](double x) {
          return -eta * std::exp(-x) * std::pow(1 + std::exp(-x), eta - 1);
        };
      };
      fam.weight = WeightCurve::unit(m.support());
      return fam;
    }
    case Family::pareto: {
      const double z = p[0], al = p[1];
      fam.eta_star = al / 2;
      fam.limit = 4.0 / (al * al);
      fam.quotient = [al](double eta) { return 1.0 / ((al - eta) * (al - eta)); };
      fam.make_f = [z, al](double eta) {
        return [z, al, eta](double x) {
          return std::pow(x, eta) - al * std::pow(z, eta) / (al - eta);
        };
      };
      fam.make_fp = [](double eta) {
        return [eta](double x) { return eta * std::pow(x, eta - 1); };
      };
      fam.weight = WeightCurve::from_functions(
          m.support(), [](double x) { return x * x; }, [](double x) { return 2 * x; },
          [](double) { return 2.0; }, "x^2");
      return fam;
    }
    case Family::power: {
      const double al = p[0];
      fam.eta_star = al / 2;
      fam.limit = 4.0 / (al * al);
      fam.quotient = [al](double eta) {
        return (3 * al - 4 * eta) / (al * (al - eta) * (al - eta));
      };
      fam.make_f = [al](double eta) {
        return [al, eta](double x) { return std::pow(x, -eta) - al / (al - eta); };
      };
      fam.make_fp = [](double eta) {
        return [eta](double x) { return -eta * std::pow(x, -eta - 1); };
      };
      fam.weight = WeightCurve::from_functions(
          m.support(), [al](double x) { return x * x * (1 - std::pow(x, al / 2)); },
          [al](double x) { return 2 * x - (2 + al / 2) * std::pow(x, 1 + al / 2); },
          [al](double x) { return 2 - (2 + al / 2) * (1 + al / 2) * std::pow(x, al / 2); },
          "x^2(1-x^(a/2))");
      return fam;
    }
    case Family::symmetric_beta: {
      const double be = p[0];
      fam.eta_star = -be / 2;
      fam.limit = 1.0 / (be * be);
      fam.quotient = [be](double eta) {
        const double zb = log_beta_z(be);
        const double r2 = std::exp(log_beta_z(2 * eta + be) - zb);
        const double r1 = std::exp(log_beta_z(eta + be) - zb);
        const double r3 = std::exp(log_beta_z(2 * eta + be + 1) - zb);
        return (r2 - r1 * r1) / (2 * eta * eta / (2 * eta + be) * r3);
      };
      fam.make_f = [be](double eta) {
        const double c = std::exp(log_beta_z(eta + be) - log_beta_z(be));
        return [eta, c](double x) { return std::pow(1 - x * x, eta) - c; };
      };
      fam.make_fp = [](double eta) {
        return [eta](double x) { return -2 * eta * x * std::pow(1 - x * x, eta - 1); };
      };
      fam.weight = WeightCurve::from_functions(
          m.support(), [](double x) { const double t = 1 - x * x; return t * t; },
          [](double x) { return -4 * x * (1 - x * x); },
          [](double x) { return -4 + 12 * x * x; }, "(1-x^2)^2");
      return fam;
    }
    default:
      throw unsupported_error("no registered limit quotient family for " +
                              family_name(m.family()));
  }
}

// ---------------------------------------------------------------------------
// Gaussian reference saturating function (used by reference_weight)

namespace detail {

SaturatingFunction gaussian_reference_saturating(const ProbabilityMeasure& m, int nodes) {
  const Interval s = m.support();
  if (!s.finite())
    throw std::domain_error("gaussian reference: finite support required");
  const double sigma = s.length() / (2 * kZ975);
  const auto ref = ProbabilityMeasure::normal(0.5 * (s.a + s.b), sigma * sigma)
                       .truncated(s.a, s.b);
  SpectralBasis basis = solve_eigenbasis(ref, WeightCurve::unit(s), 1, nodes);

  auto nodes_v = std::make_shared<std::vector<double>>(basis.nodes);
  auto vals = std::make_shared<std::vector<double>>(basis.eigenfunctions[0]);
  auto ders = std::make_shared<std::vector<double>>(basis.derivatives[0]);

  // Neumann check: the recovered slope must vanish at both ends
  double dmax = 0.0;
  for (double d : *ders) dmax = std::max(dmax, std::abs(d));
  if (std::abs(ders->front()) > 1e-2 * dmax || std::abs(ders->back()) > 1e-2 * dmax)
    throw numerical_error("gaussian reference: eigenfunction violates Neumann ends");
  // monotone on the interior
  for (std::size_t j = 1; j + 1 < ders->size(); ++j)
    if ((*ders)[j] * (*ders)[ders->size() / 2] < 0)
      throw numerical_error("gaussian reference: eigenfunction derivative changes sign");

  auto lin = [nodes_v](const std::vector<double>& v, double x) {
    const auto& xs = *nodes_v;
    if (x <= xs.front()) return v.front();
    if (x >= xs.back()) return v.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[j]) / (xs[j + 1] - xs[j]);
    return v[j] + t * (v[j + 1] - v[j]);
  };

  auto raw = [vals, lin](double x) { return lin(*vals, x); };
  const double center = m.quadrature(raw);

  SaturatingFunction g;
  g.value = [raw, center](double x) { return raw(x) - center; };
  g.derivative = [ders, lin](double x) { return lin(*ders, x); };
  // endpoint curvature from one-sided second differences of the table
  const double h = (*nodes_v)[1] - (*nodes_v)[0];
  const auto& v = *vals;
  const double g2a = (v[0] - 2 * v[1] + v[2]) / (h * h);
  const double g2b = (v[v.size() - 1] - 2 * v[v.size() - 2] + v[v.size() - 3]) / (h * h);
  const double mid = 0.5 * (s.a + s.b);
  g.second_derivative = [g2a, g2b, mid](double x) { return x < mid ? g2a : g2b; };
  g.monotonicity = (*ders)[ders->size() / 2] > 0 ? +1 : -1;
  g.derivative_zero_at_a = true;
  g.derivative_zero_at_b = true;
  return g;
}

}  // namespace detail

}  // namespace pgsa
