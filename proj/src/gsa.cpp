#include "pgsa/gsa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <thread>

#include "pgsa/errors.hpp"
#include "json.hpp"

namespace pgsa {

// ---------------------------------------------------------------------------
// Model

double Model::fd_step(int i) const {
  const Interval s = inputs[static_cast<std::size_t>(i)].support();
  if (!s.finite()) throw std::domain_error("fd_step: finite support required");
  return 1e-4 * s.length();
}

double Model::partial(std::span<const double> x, int i) const {
  if (gradient_mode == GradientMode::analytic && analytic_gradient) {
    std::vector<double> g(inputs.size());
    analytic_gradient(x, g);
    return g[static_cast<std::size_t>(i)];
  }
  const Interval s = inputs[static_cast<std::size_t>(i)].support();
  const double h = fd_step(i);
  std::vector<double> xx(x.begin(), x.end());
  const double xi = x[static_cast<std::size_t>(i)];
  // central differences, one-sided within a step of the boundary
  const double lo = std::max(xi - h, s.a), hi = std::min(xi + h, s.b);
  xx[static_cast<std::size_t>(i)] = hi;
  const double fp = evaluate(xx);
  xx[static_cast<std::size_t>(i)] = lo;
  const double fm = evaluate(xx);
  return (fp - fm) / (hi - lo);
}

void Model::gradient(std::span<const double> x, std::span<double> out) const {
  if (gradient_mode == GradientMode::analytic && analytic_gradient) {
    analytic_gradient(x, out);
    return;
  }
  for (int i = 0; i < dimension(); ++i) out[static_cast<std::size_t>(i)] = partial(x, i);
}

void Model::sample_row(RandomStream& rng, std::span<double> out) const {
  for (std::size_t i = 0; i < inputs.size(); ++i) out[i] = inputs[i].sample_one(rng);
}

// ---------------------------------------------------------------------------
// helpers

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn) {
  static const int cap = [] {
    const char* env = std::getenv("GSA_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return std::clamp(v, 1, 64);
  }();
  const std::size_t nthreads = std::min<std::size_t>(cap, count);
  if (nthreads <= 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + nthreads - 1) / nthreads;
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

double quantile_of(std::vector<double> values, double p) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double h = (values.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - lo) * (values[lo + 1] - values[lo]);
}

namespace {

double sample_variance(std::span<const double> y) {
  const std::size_t n = y.size();
  double m = 0.0;
  for (double v : y) m += v;
  m /= static_cast<double>(n);
  double s = 0.0;
  for (double v : y) s += (v - m) * (v - m);
  return s / static_cast<double>(n - 1);
}

/// Joint sample with model evaluations and one gradient column per input.
struct EvalSample {
  int d = 0, n = 0;
  std::vector<double> x;   // n*d, row-major
  std::vector<double> y;   // n
  std::vector<double> g;   // n*d gradient columns
  int kink_flagged = 0;

  double xat(int row, int col) const { return x[static_cast<std::size_t>(row) * d + col]; }
  double gat(int row, int col) const { return g[static_cast<std::size_t>(row) * d + col]; }
};

EvalSample draw_sample(const Model& model, int n, RandomStream& rng, bool with_grad) {
  EvalSample s;
  s.d = model.dimension();
  s.n = n;
  s.x.resize(static_cast<std::size_t>(n) * s.d);
  s.y.resize(n);
  if (with_grad) s.g.resize(static_cast<std::size_t>(n) * s.d);
  for (int k = 0; k < n; ++k)
    model.sample_row(rng, std::span<double>(s.x.data() + static_cast<std::size_t>(k) * s.d,
                                            s.d));
  std::vector<int> kinks(n, 0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
    std::vector<double> grad(s.d);
    for (std::size_t k = lo; k < hi; ++k) {
      std::span<const double> row(s.x.data() + k * s.d, s.d);
      s.y[k] = model.evaluate(row);
      if (with_grad) {
        model.gradient(row, grad);
        for (int i = 0; i < s.d; ++i) s.g[k * s.d + i] = grad[i];
        if (model.kink_proximity && model.kink_proximity(row)) kinks[k] = 1;
      }
    }
  });
  if (with_grad) s.kink_flagged = std::accumulate(kinks.begin(), kinks.end(), 0);
  return s;
}

std::vector<std::vector<int>> bootstrap_indices(int boot, int n, RandomStream& rng) {
  std::vector<std::vector<int>> idx(boot);
  for (int r = 0; r < boot; ++r) {
    idx[r].resize(n);
    for (int k = 0; k < n; ++k) idx[r][k] = static_cast<int>(rng.index(n));
  }
  return idx;
}

}  // namespace

// ---------------------------------------------------------------------------
// reference Sobol estimator

SobolEstimate sobol_total_reference(const Model& model, int n, RandomStream& rng) {
  if (n < 100) throw std::invalid_argument("sobol_total_reference: n >= 100");
  const int d = model.dimension();
  std::vector<double> A(static_cast<std::size_t>(n) * d), B(A.size());
  for (int k = 0; k < n; ++k)
    model.sample_row(rng, std::span<double>(A.data() + static_cast<std::size_t>(k) * d, d));
  for (int k = 0; k < n; ++k)
    model.sample_row(rng, std::span<double>(B.data() + static_cast<std::size_t>(k) * d, d));

  std::vector<double> fA(n);
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k)
      fA[k] = model.evaluate(std::span<const double>(A.data() + k * d, d));
  });
  const double var = sample_variance(fA);
  if (!(var > 0)) throw degenerate_error("sobol_total_reference: zero output variance");

  SobolEstimate est;
  est.n = n;
  est.raw.resize(d);
  est.total.resize(d);
  std::vector<double> AB(A.size());
  for (int i = 0; i < d; ++i) {
    AB = A;
    for (int k = 0; k < n; ++k)
      AB[static_cast<std::size_t>(k) * d + i] = B[static_cast<std::size_t>(k) * d + i];
    std::vector<double> partial_sums(n);
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        const double diff =
            fA[k] - model.evaluate(std::span<const double>(AB.data() + k * d, d));
        partial_sums[k] = diff * diff;
      }
    });
    const double s = std::accumulate(partial_sums.begin(), partial_sums.end(), 0.0);
    est.raw[i] = s / (2.0 * n) / var;
    est.total[i] = std::clamp(est.raw[i], -0.05, 1.05);
  }
  return est;
}

// ---------------------------------------------------------------------------
// weighted DGSM and upper bounds

double weighted_dgsm(const Model& model, int i, const WeightCurve& w, int n,
                     RandomStream& rng) {
  EvalSample s = draw_sample(model, n, rng, true);
  double acc = 0.0;
  int bad = 0;
  for (int k = 0; k < n; ++k) {
    const double gi = s.gat(k, i);
    const double v = w.value(s.xat(k, i)) * gi * gi;
    if (std::isfinite(v)) acc += v; else ++bad;
  }
  if (bad > n / 1000)
    throw numerical_error("weighted_dgsm: too many non-finite gradient draws");
  return acc / (n - bad);
}

std::string weight_kind_name(WeightKind k) {
  switch (k) {
    case WeightKind::unit: return "unit";
    case WeightKind::lin: return "lin";
    case WeightKind::uniform_ref: return "uniform_ref";
    case WeightKind::gauss_ref: return "gauss_ref";
    case WeightKind::data_driven: return "data_driven";
  }
  throw std::logic_error("weight_kind_name");
}

WeightKind weight_kind_from_name(const std::string& s) {
  for (WeightKind k : {WeightKind::unit, WeightKind::lin, WeightKind::uniform_ref,
                       WeightKind::gauss_ref, WeightKind::data_driven})
    if (weight_kind_name(k) == s) return k;
  throw std::invalid_argument("unknown weight kind: " + s);
}

PreparedWeight prepare_weight(const ProbabilityMeasure& m, WeightKind kind, int nodes,
                              int cells, const MainEffectFit* fit) {
  PreparedWeight out;
  out.kind = kind;
  switch (kind) {
    case WeightKind::unit:
      out.curve = WeightCurve::unit(m.support());
      if (m.family() == Family::uniform) {
        const double len = m.support().length();
        out.c_p = len * len / (M_PI * M_PI);
      } else {
        out.c_p = poincare_constant(m, out.curve, cells);
      }
      return out;
    case WeightKind::lin:
      try {
        out.curve = weight_lin_closed_form(m);
      } catch (const unsupported_error&) {
        out.curve = weight_from_g(m, linear_saturating(m), nodes);
      }
      out.c_p = 1.0;
      return out;
    case WeightKind::uniform_ref:
      out.curve = reference_weight(m, ReferenceKind::uniform_ref, nodes).first;
      out.c_p = 1.0;
      return out;
    case WeightKind::gauss_ref:
      out.curve = reference_weight(m, ReferenceKind::gaussian_ref, nodes).first;
      out.c_p = 1.0;
      return out;
    case WeightKind::data_driven:
      if (!fit)
        throw std::invalid_argument("prepare_weight: data_driven needs a main-effect fit");
      out.curve = data_driven_weight(*fit, m, nodes);
      out.c_p = 1.0;
      out.non_monotone_warning = fit->non_monotone_warning();
      return out;
  }
  throw std::logic_error("prepare_weight");
}

namespace {

DgsmBound bound_from_sample(const EvalSample& s, int i, const PreparedWeight& w,
                            const std::vector<std::vector<int>>& boot_idx) {
  const int n = s.n;
  std::vector<double> nu_row(n);
  for (int k = 0; k < n; ++k) {
    const double gi = s.gat(k, i);
    nu_row[k] = w.curve.value(s.xat(k, i)) * gi * gi;
    if (!std::isfinite(nu_row[k]))
      throw numerical_error("upper bound: non-finite weighted gradient");
  }
  const double nu = std::accumulate(nu_row.begin(), nu_row.end(), 0.0) / n;
  const double var = sample_variance(s.y);
  if (!(var > 0)) throw degenerate_error("upper bound: zero output variance");

  DgsmBound b;
  b.input = i;
  b.kind = weight_kind_name(w.kind);
  b.c_p = w.c_p;
  b.nu = nu;
  b.value = w.c_p * nu / var;

  if (!boot_idx.empty()) {
    std::vector<double> reps(boot_idx.size());
    parallel_for(boot_idx.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t r = lo; r < hi; ++r) {
        double sy = 0, syy = 0, snu = 0;
        for (int k : boot_idx[r]) {
          sy += s.y[k];
          syy += s.y[k] * s.y[k];
          snu += nu_row[k];
        }
        const double nn = static_cast<double>(boot_idx[r].size());
        const double var_b = (syy - sy * sy / nn) / (nn - 1);
        reps[r] = var_b > 0 ? w.c_p * (snu / nn) / var_b
                            : std::numeric_limits<double>::quiet_NaN();
      }
    });
    reps.erase(std::remove_if(reps.begin(), reps.end(),
                              [](double v) { return !std::isfinite(v); }),
               reps.end());
    b.q025 = quantile_of(reps, 0.025);
    b.q50 = quantile_of(reps, 0.5);
    b.q975 = quantile_of(reps, 0.975);
  }
  return b;
}

}  // namespace

DgsmBound dgsm_upper_bound(const Model& model, int i, const PreparedWeight& w, int n,
                           int boot, RandomStream& rng) {
  EvalSample s = draw_sample(model, n, rng, true);
  auto idx = bootstrap_indices(boot, n, rng);
  return bound_from_sample(s, i, w, idx);
}

// ---------------------------------------------------------------------------
// stability of the upper bound for separated models

StabilityResult stability_gap(const ProbabilityMeasure& m_i, const WeightCurve& w,
                              double c_p, const std::function<double(double)>& h,
                              const std::function<double(double)>& hp,
                              const std::function<double(double)>& g,
                              const std::function<double(double)>& gp, double var_u,
                              double mean_v_sq, int cells) {
  const double ch = m_i.quadrature(h, cells);
  const double e_h2 = m_i.quadrature(
      [&](double x) { const double v = h(x) - ch; return v * v; }, cells);
  const double e_wh2 = m_i.quadrature(
      [&](double x) { const double v = hp(x); return w.value(x) * v * v; }, cells);
  const double eps = m_i.quadrature(
      [&](double x) { const double v = hp(x) - gp(x); return w.value(x) * v * v; },
      cells);
  (void)g;

  StabilityResult r;
  const double var_f = var_u + e_h2 * mean_v_sq;
  if (!(var_f > 0)) throw degenerate_error("stability_gap: zero model variance");
  r.s_tot = e_h2 * mean_v_sq / var_f;
  r.upper = c_p * e_wh2 * mean_v_sq / var_f;
  r.gap = r.upper - r.s_tot;
  r.bound = c_p * mean_v_sq * eps / var_f;
  const double tol = 1e-10 * std::max(1.0, r.upper);
  if (r.gap < -tol || r.gap > r.bound + tol)
    throw numerical_error("stability_gap: computed gap escapes [0, bound]");
  return r;
}

// ---------------------------------------------------------------------------
// Poincare chaos approximations

namespace {

struct PoinceCache {
  // per multi-index row products, without the y factor for der-free terms
  std::vector<std::vector<int>> alphas;
  std::vector<std::vector<double>> free_rows;   // e-products per row
  std::vector<std::vector<double>> based_rows;  // weighted derivative products
};

PoinceCache poince_rows(const EvalSample& s, int i,
                        const std::vector<SpectralBasis>& bases,
                        const std::vector<WeightCurve>& weights) {
  const int d = s.d, n = s.n;
  if (static_cast<int>(bases.size()) != d || static_cast<int>(weights.size()) != d)
    throw std::invalid_argument("poince: need one basis and weight per input");
  if (bases[static_cast<std::size_t>(i)].size() < 2)
    throw std::invalid_argument("poince: input i needs two eigenpairs");

  const auto& bi = bases[static_cast<std::size_t>(i)];
  std::vector<double> e1(n), e2(n), db1(n), db2(n);
  for (int k = 0; k < n; ++k) {
    const double xi = s.xat(k, i);
    const double wk = weights[static_cast<std::size_t>(i)].value(xi);
    const double gk = s.gat(k, i);
    e1[k] = bi.eval(1, xi);
    e2[k] = bi.eval(2, xi);
    db1[k] = wk * gk * bi.eval_derivative(1, xi) / bi.eigenvalues[0];
    db2[k] = wk * gk * bi.eval_derivative(2, xi) / bi.eigenvalues[1];
  }
  std::vector<std::vector<double>> other(d);
  for (int j = 0; j < d; ++j) {
    if (j == i) continue;
    if (bases[static_cast<std::size_t>(j)].size() < 1)
      throw std::invalid_argument("poince: missing eigenpair for input " +
                                  std::to_string(j));
    other[j].resize(n);
    for (int k = 0; k < n; ++k)
      other[j][k] = bases[static_cast<std::size_t>(j)].eval(1, s.xat(k, j));
  }

  PoinceCache cache;
  for (int ai = 1; ai <= 2; ++ai) {
    const auto& base = ai == 1 ? e1 : e2;
    const auto& dbase = ai == 1 ? db1 : db2;
    {
      std::vector<int> alpha(d, 0);
      alpha[static_cast<std::size_t>(i)] = ai;
      cache.alphas.push_back(alpha);
      cache.free_rows.push_back(base);
      cache.based_rows.push_back(dbase);
    }
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      std::vector<int> alpha(d, 0);
      alpha[static_cast<std::size_t>(i)] = ai;
      alpha[static_cast<std::size_t>(j)] = 1;
      std::vector<double> fr(n), br(n);
      for (int k = 0; k < n; ++k) {
        fr[k] = base[k] * other[j][k];
        br[k] = dbase[k] * other[j][k];
      }
      cache.alphas.push_back(std::move(alpha));
      cache.free_rows.push_back(std::move(fr));
      cache.based_rows.push_back(std::move(br));
    }
  }
  return cache;
}

struct PoinceValues {
  double der_free = 0.0, der_based = 0.0;
  std::vector<double> c_free, c_based;
};

PoinceValues poince_accumulate(const PoinceCache& cache, const EvalSample& s,
                               std::span<const int> rows) {
  const std::size_t nterms = cache.alphas.size();
  PoinceValues out;
  out.c_free.assign(nterms, 0.0);
  out.c_based.assign(nterms, 0.0);
  std::vector<double> t_mean(nterms, 0.0);
  double sy = 0.0, syy = 0.0;
  const double nn = static_cast<double>(rows.size());
  for (int k : rows) {
    sy += s.y[k];
    syy += s.y[k] * s.y[k];
    for (std::size_t t = 0; t < nterms; ++t) {
      out.c_free[t] += s.y[k] * cache.free_rows[t][k];
      t_mean[t] += cache.free_rows[t][k];
      out.c_based[t] += cache.based_rows[t][k];
    }
  }
  const double ymean = sy / nn;
  const double var = (syy - sy * sy / nn) / (nn - 1);
  double df = 0.0, db = 0.0;
  for (std::size_t t = 0; t < nterms; ++t) {
    // centering y reduces the coefficient variance and is exact in the mean
    out.c_free[t] = out.c_free[t] / nn - ymean * t_mean[t] / nn;
    out.c_based[t] /= nn;
    df += out.c_free[t] * out.c_free[t];
    db += out.c_based[t] * out.c_based[t];
  }
  out.der_free = df / var;
  out.der_based = db / var;
  return out;
}

PoinceApprox poince_from_sample(const EvalSample& s, int i,
                                const std::vector<SpectralBasis>& bases,
                                const std::vector<WeightCurve>& weights,
                                const std::vector<std::vector<int>>& boot_idx) {
  PoinceCache cache = poince_rows(s, i, bases, weights);
  std::vector<int> all(s.n);
  std::iota(all.begin(), all.end(), 0);
  PoinceValues main = poince_accumulate(cache, s, all);

  PoinceApprox out;
  out.input = i;
  out.der_free = main.der_free;
  out.der_based = main.der_based;
  for (std::size_t t = 0; t < cache.alphas.size(); ++t)
    out.coefficients.push_back({cache.alphas[t], main.c_free[t], main.c_based[t]});

  if (!boot_idx.empty()) {
    std::vector<double> rf(boot_idx.size()), rb(boot_idx.size());
    parallel_for(boot_idx.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t r = lo; r < hi; ++r) {
        PoinceValues v = poince_accumulate(cache, s, boot_idx[r]);
        rf[r] = v.der_free;
        rb[r] = v.der_based;
      }
    });
    out.free_q025 = quantile_of(rf, 0.025);
    out.free_q50 = quantile_of(rf, 0.5);
    out.free_q975 = quantile_of(rf, 0.975);
    out.based_q025 = quantile_of(rb, 0.025);
    out.based_q50 = quantile_of(rb, 0.5);
    out.based_q975 = quantile_of(rb, 0.975);
  }
  return out;
}

}  // namespace

PoinceApprox poince_approx(const Model& model, int i,
                           const std::vector<SpectralBasis>& bases,
                           const std::vector<WeightCurve>& weights, int n, int boot,
                           RandomStream& rng) {
  EvalSample s = draw_sample(model, n, rng, true);
  auto idx = bootstrap_indices(boot, n, rng);
  return poince_from_sample(s, i, bases, weights, idx);
}

// ---------------------------------------------------------------------------
// report pipeline

GsaReport build_report(const Model& model, const ReportConfig& config) {
  const int d = model.dimension();
  GsaReport rep;
  rep.model = model.name;
  rep.seed = config.seed;
  rep.n = config.n;
  rep.ref_n = config.ref_n;
  rep.boot = config.boot;
  rep.per_input.resize(d);

  // reference totals
  {
    RandomStream ref_rng = RandomStream::split(config.seed, 0);
    SobolEstimate ref = sobol_total_reference(model, config.ref_n, ref_rng);
    for (int i = 0; i < d; ++i) {
      rep.per_input[i].index = i;
      rep.per_input[i].s_tot_ref = ref.total[i];
      rep.per_input[i].s_tot_raw = ref.raw[i];
    }
  }

  const bool need_eval = !config.bound_kinds.empty() || !config.poince_kinds.empty();
  if (!need_eval) return rep;

  RandomStream eval_rng = RandomStream::split(config.seed, 1);
  EvalSample s = draw_sample(model, config.n, eval_rng, true);
  rep.variance = sample_variance(s.y);
  rep.kink_flagged = s.kink_flagged;
  RandomStream boot_rng = RandomStream::split(config.seed, 3);
  const auto boot_idx = bootstrap_indices(config.boot, config.n, boot_rng);

  // main-effect fits for data-driven weights, from an independent sample
  std::vector<MainEffectFit> fits;
  const bool want_dd =
      std::find(config.bound_kinds.begin(), config.bound_kinds.end(),
                WeightKind::data_driven) != config.bound_kinds.end();
  if (want_dd) {
    RandomStream fit_rng = RandomStream::split(config.seed, 2);
    EvalSample fs = draw_sample(model, config.fit_n, fit_rng, false);
    for (int i = 0; i < d; ++i) {
      std::vector<double> xi(fs.n);
      for (int k = 0; k < fs.n; ++k) xi[k] = fs.xat(k, i);
      FitOptions opts;
      if (i < static_cast<int>(model.fit_overrides.size()) &&
          model.fit_overrides[i])
        opts = *model.fit_overrides[i];
      opts.input_index = i;
      fits.push_back(fit_main_effect_monotone(xi, fs.y, model.inputs[i], opts));
    }
  }

  for (WeightKind kind : config.bound_kinds) {
    for (int i = 0; i < d; ++i) {
      try {
        PreparedWeight w = prepare_weight(
            model.inputs[i], kind, config.nodes, config.cells,
            kind == WeightKind::data_driven ? &fits[i] : nullptr);
        rep.per_input[i].bounds.push_back(bound_from_sample(s, i, w, boot_idx));
      } catch (const std::exception& e) {
        rep.per_input[i].errors.push_back("bound/" + weight_kind_name(kind) + ": " +
                                          e.what());
      }
    }
  }

  for (WeightKind kind : config.poince_kinds) {
    if (kind != WeightKind::unit && kind != WeightKind::uniform_ref &&
        kind != WeightKind::gauss_ref)
      throw std::invalid_argument(
          "build_report: chaos approximations need a non-vanishing weight kind");
    try {
      std::vector<SpectralBasis> bases;
      std::vector<WeightCurve> weights;
      for (int i = 0; i < d; ++i) {
        PreparedWeight w = prepare_weight(model.inputs[i], kind, config.nodes,
                                          config.cells, nullptr);
        bases.push_back(solve_eigenbasis(model.inputs[i], w.curve, 2, config.cells));
        weights.push_back(std::move(w.curve));
      }
      for (int i = 0; i < d; ++i) {
        try {
          PoinceApprox p = poince_from_sample(s, i, bases, weights, boot_idx);
          p.kind = weight_kind_name(kind);
          rep.per_input[i].poince.push_back(std::move(p));
        } catch (const std::exception& e) {
          rep.per_input[i].errors.push_back("poince/" + weight_kind_name(kind) + ": " +
                                            e.what());
        }
      }
    } catch (const std::exception& e) {
      for (int i = 0; i < d; ++i)
        rep.per_input[i].errors.push_back("poince/" + weight_kind_name(kind) + ": " +
                                          e.what());
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// serialization

std::string GsaReport::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["seed"] = seed;
  j["n"] = n;
  j["ref_n"] = ref_n;
  j["boot"] = boot;
  j["variance"] = variance;
  j["kink_flagged"] = kink_flagged;
  j["per_input"] = nlohmann::ordered_json::array();
  for (const auto& in : per_input) {
    nlohmann::ordered_json ji;
    ji["i"] = in.index;
    ji["s_tot_ref"] = in.s_tot_ref;
    ji["s_tot_raw"] = in.s_tot_raw;
    ji["bounds"] = nlohmann::ordered_json::object();
    for (const auto& b : in.bounds) {
      ji["bounds"][b.kind] = {{"value", b.value}, {"c_p", b.c_p},  {"nu", b.nu},
                              {"q025", b.q025},   {"q50", b.q50}, {"q975", b.q975}};
    }
    ji["poince"] = nlohmann::ordered_json::object();
    for (const auto& p : in.poince) {
      ji["poince"][p.kind] = {
          {"der_free", p.der_free},
          {"der_based", p.der_based},
          {"der_free_quantiles", {p.free_q025, p.free_q50, p.free_q975}},
          {"der_based_quantiles", {p.based_q025, p.based_q50, p.based_q975}}};
    }
    if (!in.errors.empty()) ji["errors"] = in.errors;
    j["per_input"].push_back(std::move(ji));
  }
  return j.dump(2) + "\n";
}

std::string GsaReport::to_csv() const {
  std::ostringstream os;
  os << "input,kind,metric,value,q025,q50,q975\n";
  char buf[200];
  auto row = [&](int i, const std::string& kind, const std::string& metric, double v,
                 double a, double b, double c) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%s,%.12g,%.12g,%.12g,%.12g\n", i,
                  kind.c_str(), metric.c_str(), v, a, b, c);
    os << buf;
  };
  for (const auto& in : per_input) {
    row(in.index, "reference", "s_tot", in.s_tot_ref, in.s_tot_raw, in.s_tot_raw,
        in.s_tot_raw);
    for (const auto& b : in.bounds)
      row(in.index, b.kind, "upper_bound", b.value, b.q025, b.q50, b.q975);
    for (const auto& p : in.poince) {
      row(in.index, p.kind, "der_free", p.der_free, p.free_q025, p.free_q50,
          p.free_q975);
      row(in.index, p.kind, "der_based", p.der_based, p.based_q025, p.based_q50,
          p.based_q975);
    }
  }
  return os.str();
}

}  // namespace pgsa
