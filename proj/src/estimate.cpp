#include "pgsa/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>

#include "pgsa/errors.hpp"

namespace pgsa {

namespace {

// ---------------------------------------------------------------------------
// Bernstein basis and its running integrals on [0,1]

double bernstein(int k, int deg, double t) {
  // binomial through lgamma is plenty for deg <= 20
  const double lb = std::lgamma(deg + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(deg - k + 1.0);
  if (t <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (t >= 1.0) return k == deg ? 1.0 : 0.0;
  return std::exp(lb + k * std::log(t) + (deg - k) * std::log1p(-t));
}

// int_0^t B_{k,deg} = (1/(deg+1)) sum_{j>k} B_{j,deg+1}(t)
double bernstein_integral(int k, int deg, double t) {
  double s = 0.0;
  for (int j = k + 1; j <= deg + 1; ++j) s += bernstein(j, deg + 1, t);
  return s / (deg + 1);
}

// ---------------------------------------------------------------------------
// small dense linear algebra for the active-set solver

using Mat = std::vector<std::vector<double>>;

std::vector<double> solve_spd(Mat a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {  // Gaussian elimination, partial pivot
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    if (a[k][k] == 0.0) a[k][k] = 1e-300;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

/// min ||A c - y||^2 subject to c_j >= 0 for j in `constrained`.
/// Lawson-Hanson on the normal equations; dimensions here are tiny.
std::vector<double> nnls(const Mat& ata, const std::vector<double>& aty,
                         const std::vector<bool>& constrained) {
  const std::size_t n = aty.size();
  std::vector<bool> active(n, false);  // active = in the positive/free set
  for (std::size_t j = 0; j < n; ++j)
    if (!constrained[j]) active[j] = true;
  std::vector<double> c(n, 0.0);

  auto solve_subset = [&](const std::vector<bool>& sel) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j)
      if (sel[j]) idx.push_back(j);
    Mat a(idx.size(), std::vector<double>(idx.size()));
    std::vector<double> b(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      b[i] = aty[idx[i]];
      for (std::size_t j = 0; j < idx.size(); ++j) a[i][j] = ata[idx[i]][idx[j]];
    }
    auto s = solve_spd(std::move(a), std::move(b));
    std::vector<double> full(n, 0.0);
    for (std::size_t i = 0; i < idx.size(); ++i) full[idx[i]] = s[i];
    return full;
  };

  for (int outer = 0; outer < 300; ++outer) {
    // gradient of the residual: w = A^T y - A^T A c
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = aty[i];
      for (std::size_t j = 0; j < n; ++j) s -= ata[i][j] * c[j];
      grad[i] = s;
    }
    std::size_t best = n;
    double gbest = 1e-10;
    for (std::size_t j = 0; j < n; ++j)
      if (!active[j] && grad[j] > gbest) {
        gbest = grad[j];
        best = j;
      }
    if (best == n) break;
    active[best] = true;

    for (int inner = 0; inner < 300; ++inner) {
      auto trial = solve_subset(active);
      bool feasible = true;
      double alpha = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (active[j] && constrained[j] && trial[j] <= 0.0) {
          feasible = false;
          const double denom = c[j] - trial[j];
          if (denom > 0) alpha = std::min(alpha, c[j] / denom);
        }
      }
      if (feasible) {
        c = std::move(trial);
        break;
      }
      for (std::size_t j = 0; j < n; ++j)
        if (active[j]) c[j] += alpha * (trial[j] - c[j]);
      for (std::size_t j = 0; j < n; ++j)
        if (active[j] && constrained[j] && c[j] <= 1e-14) {
          c[j] = 0.0;
          active[j] = false;
        }
    }
  }
  return c;
}

std::vector<double> ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> ord(n);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[ord[j + 1]] == v[ord[i]]) ++j;
    const double avg = 0.5 * (i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[ord[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x), ry = ranks(y);
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// MainEffectFit

double MainEffectFit::raw(double x) const {
  if (!knots_.empty()) {
    const auto& xs = knots_;
    if (x <= xs.front()) return knot_values_.front();
    if (x >= xs.back()) return knot_values_.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[j]) / (xs[j + 1] - xs[j]);
    return knot_values_[j] + t * (knot_values_[j + 1] - knot_values_[j]);
  }
  const double t = (x - support_.a) / support_.length();
  double v = intercept_;
  for (int k = 0; k < degree_; ++k)
    v += coeffs_[k] * bernstein_integral(k, degree_ - 1, t);
  return v;
}

double MainEffectFit::raw_derivative(double x) const {
  if (!knots_.empty()) {
    const auto& xs = knots_;
    double xc = std::clamp(x, xs.front(), xs.back());
    auto it = std::upper_bound(xs.begin(), xs.end(), xc);
    std::size_t j = it == xs.end() ? xs.size() - 1 : static_cast<std::size_t>(it - xs.begin());
    if (j == 0) j = 1;
    return (knot_values_[j] - knot_values_[j - 1]) / (xs[j] - xs[j - 1]);
  }
  const double t = (x - support_.a) / support_.length();
  double v = 0.0;
  for (int k = 0; k < degree_; ++k) v += coeffs_[k] * bernstein(k, degree_ - 1, t);
  return v / support_.length();
}

double MainEffectFit::operator()(double x) const {
  return direction_ * (raw(x) + floor_ * (x - support_.a)) - offset_;
}

double MainEffectFit::derivative(double x) const {
  return direction_ * (raw_derivative(x) + floor_);
}

SaturatingFunction MainEffectFit::saturating() const {
  SaturatingFunction g;
  g.value = [*this](double x) { return (*this)(x); };
  g.derivative = [*this](double x) { return derivative(x); };
  g.monotonicity = direction_;
  g.derivative_zero_at_a = false;
  g.derivative_zero_at_b = false;
  return g;
}

void MainEffectFit::write_csv(std::ostream& os, int nodes) const {
  os << "x,f_hat,d_f_hat\n";
  char buf[120];
  for (int j = 0; j <= nodes; ++j) {
    const double x = support_.a + support_.length() * j / nodes;
    std::snprintf(buf, sizeof(buf), "%.12e,%.12e,%.12e\n", x, (*this)(x), derivative(x));
    os << buf;
  }
}

std::string MainEffectFit::flags_json() const {
  std::ostringstream os;
  os << "{\"input\":" << input_index_ << ",\"direction\":" << direction_
     << ",\"non_monotone_warning\":" << (warn_ ? "true" : "false")
     << ",\"slope_floor\":" << floor_ << "}";
  return os.str();
}

MainEffectFit fit_main_effect_monotone(std::span<const double> x,
                                       std::span<const double> y,
                                       const ProbabilityMeasure& m,
                                       const FitOptions& opts) {
  if (x.size() != y.size()) throw std::invalid_argument("fit: size mismatch");
  if (x.size() < 20) throw std::invalid_argument("fit: need at least 20 pairs");
  const Interval s = m.support();
  if (!s.finite()) throw std::domain_error("fit: finite support required");
  for (double xi : x)
    if (!s.contains(xi)) throw std::domain_error("fit: x outside the input support");

  const double ymin = *std::min_element(y.begin(), y.end());
  const double ymax = *std::max_element(y.begin(), y.end());
  if (ymax == ymin) throw degenerate_error("fit: all responses equal");

  MainEffectFit fit;
  fit.support_ = s;
  fit.input_index_ = opts.input_index;

  const double rho = spearman_correlation(x, y);
  switch (opts.direction) {
    case FitDirection::automatic:
      fit.direction_ = rho >= 0 ? +1 : -1;
      fit.warn_ = std::abs(rho) < 0.05;
      break;
    case FitDirection::increasing: fit.direction_ = +1; break;
    case FitDirection::decreasing: fit.direction_ = -1; break;
  }

  const std::size_t n = x.size();
  std::vector<double> yy(n);
  for (std::size_t i = 0; i < n; ++i) yy[i] = fit.direction_ * y[i];

  if (opts.affine_knots) {
    // increasing piecewise-affine fallback: knot values from a local average,
    // projected to be increasing
    auto knots = *opts.affine_knots;
    std::sort(knots.begin(), knots.end());
    if (knots.size() < 2) throw std::invalid_argument("fit: need >= 2 affine knots");
    const double bw = 0.75 * (knots.back() - knots.front()) / (knots.size() - 1);
    std::vector<double> vals(knots.size());
    for (std::size_t k = 0; k < knots.size(); ++k) {
      double sw = 0, sy = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double u = std::abs(x[i] - knots[k]) / bw;
        if (u < 1.0) {
          const double wgt = 1 - u * u;
          sw += wgt;
          sy += wgt * yy[i];
        }
      }
      if (sw <= 0) throw std::invalid_argument("fit: empty window around affine knot");
      vals[k] = sy / sw;
    }
    // pool adjacent violators
    std::vector<double> pv = vals, pw(vals.size(), 1.0);
    std::vector<std::size_t> cnt(vals.size(), 1);
    std::size_t mlen = vals.size();
    for (std::size_t i = 1; i < mlen;) {
      if (pv[i - 1] > pv[i]) {
        pv[i - 1] = (pv[i - 1] * pw[i - 1] + pv[i] * pw[i]) / (pw[i - 1] + pw[i]);
        pw[i - 1] += pw[i];
        cnt[i - 1] += cnt[i];
        pv.erase(pv.begin() + i);
        pw.erase(pw.begin() + i);
        cnt.erase(cnt.begin() + i);
        --mlen;
        if (i > 1) --i;
      } else {
        ++i;
      }
    }
    std::size_t pos = 0;
    for (std::size_t blk = 0; blk < pv.size(); ++blk)
      for (std::size_t r = 0; r < cnt[blk]; ++r) vals[pos++] = pv[blk];
    // keep a visible slope on pooled flats so 1/(g' rho) stays bounded
    const double span = knots.back() - knots.front();
    const double vrange = *std::max_element(vals.begin(), vals.end()) -
                          *std::min_element(vals.begin(), vals.end());
    const double smin = 0.02 * std::max(vrange, 1e-3 * (ymax - ymin)) / span;
    for (std::size_t k = 1; k < vals.size(); ++k)
      vals[k] = std::max(vals[k], vals[k - 1] + smin * (knots[k] - knots[k - 1]));
    fit.knots_ = std::move(knots);
    fit.knot_values_ = std::move(vals);
    fit.warn_ = true;  // the fallback exists because the effect is not monotone
  } else {
    const int deg = std::max(2, opts.degree);
    const std::size_t ncol = static_cast<std::size_t>(deg) + 2;  // basis + intercept(+/-)
    // normal equations of [I_0..I_{deg-1}, 1, -1] plus roughness rows
    Mat ata(ncol, std::vector<double>(ncol, 0.0));
    std::vector<double> aty(ncol, 0.0);
    std::vector<double> row(ncol);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (x[i] - s.a) / s.length();
      for (int k = 0; k < deg; ++k) row[k] = bernstein_integral(k, deg - 1, t);
      row[deg] = 1.0;
      row[deg + 1] = -1.0;
      for (std::size_t a = 0; a < ncol; ++a) {
        aty[a] += row[a] * yy[i];
        for (std::size_t b = 0; b < ncol; ++b) ata[a][b] += row[a] * row[b];
      }
    }
    // penalty sqrt(lam*n)*sd(y) on second differences of the basis weights
    double my = std::accumulate(yy.begin(), yy.end(), 0.0) / n, sy = 0;
    for (double v : yy) sy += (v - my) * (v - my);
    sy = std::sqrt(sy / std::max<std::size_t>(n - 1, 1));
    const double lam = opts.penalty_scale / std::sqrt(static_cast<double>(n));
    const double pw = lam * n * sy * sy;
    for (int r = 0; r + 2 < deg; ++r) {
      const int idx[3] = {r, r + 1, r + 2};
      const double cf[3] = {1.0, -2.0, 1.0};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) ata[idx[a]][idx[b]] += pw * cf[a] * cf[b];
    }
    std::vector<bool> constrained(ncol, true);
    constrained[deg] = constrained[deg + 1] = false;
    auto c = nnls(ata, aty, constrained);
    fit.coeffs_.assign(c.begin(), c.begin() + deg);
    fit.intercept_ = c[deg] - c[deg + 1];
    fit.degree_ = deg;
  }

  // slope floor: a linear tilt keeps the derivative away from zero
  const double rise = fit.raw(s.b) - fit.raw(s.a);
  fit.floor_ = 1e-6 * std::max(rise, 1e-12 * (ymax - ymin)) / s.length();
  fit.offset_ = 0.0;
  fit.offset_ = m.quadrature([&fit](double t) { return fit(t); });
  return fit;
}

WeightCurve data_driven_weight(const MainEffectFit& fit, const ProbabilityMeasure& m,
                               int nodes) {
  WeightCurve w = weight_from_g(m, fit.saturating(), nodes);
  auto grid = w.grid();
  auto vals = w.grid_values();
  return WeightCurve::tabulated(std::move(grid), std::move(vals),
                                {BoundaryProvenance::zero, BoundaryProvenance::zero},
                                "data_driven");
}

Curve estimate_main_effect_reference(std::span<const double> x,
                                     std::span<const double> y, double bandwidth,
                                     int grid) {
  if (x.size() != y.size() || x.size() < 50)
    throw std::invalid_argument("reference curve: need at least 50 pairs");
  if (!(bandwidth > 0)) throw std::invalid_argument("reference curve: bandwidth > 0");
  const double lo = *std::min_element(x.begin(), x.end());
  const double hi = *std::max_element(x.begin(), x.end());
  Curve out;
  out.x.resize(grid);
  out.y.resize(grid);
  for (int jq = 0; jq < grid; ++jq) {
    const double x0 = lo + (hi - lo) * jq / (grid - 1);
    // tricube-weighted quadratic fit around x0
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, b0 = 0, b1 = 0, b2 = 0;
    int inside = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double u = std::abs(x[i] - x0) / bandwidth;
      if (u >= 1.0) continue;
      ++inside;
      const double t = 1 - u * u * u;
      const double w = t * t * t;
      const double d = x[i] - x0;
      s0 += w;
      s1 += w * d;
      s2 += w * d * d;
      s3 += w * d * d * d;
      s4 += w * d * d * d * d;
      b0 += w * y[i];
      b1 += w * y[i] * d;
      b2 += w * y[i] * d * d;
    }
    if (inside < 3)
      throw std::invalid_argument("reference curve: empty neighborhood, increase bandwidth");
    Mat a{{s0, s1, s2}, {s1, s2, s3}, {s2, s3, s4}};
    auto sol = solve_spd(std::move(a), {b0, b1, b2});
    out.x[jq] = x0;
    out.y[jq] = sol[0];
  }
  return out;
}

}  // namespace pgsa
