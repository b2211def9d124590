// Command-line front end: emits plot-ready CSV/JSON for weight construction,
// spectral solves, Sobol bounds and chaos approximations.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pgsa/errors.hpp"
#include "pgsa/gsa.hpp"
#include "pgsa/models.hpp"
#include "pgsa/report_io.hpp"

namespace {

using namespace pgsa;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitPartial = 4;

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write " + path);
  f << text;
}

ProbabilityMeasure measure_from_file(const std::string& path) {
  return ProbabilityMeasure::from_json_text(slurp(path));
}

std::vector<WeightKind> parse_kinds(const std::string& list) {
  std::vector<WeightKind> kinds;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) kinds.push_back(weight_kind_from_name(tok));
  }
  if (kinds.empty()) throw std::invalid_argument("empty weight list");
  return kinds;
}

struct CommonOpts {
  std::string measure_path, model_name, out = "pgsa_out", format = "json";
  std::string weights = "lin";
  int nodes = 500;
  int n = 150;
  int ref_n = 10000;
  int boot = 100;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_model) {
  cmd->add_option("--measure", o.measure_path, "measure spec JSON file");
  if (with_model) cmd->add_option("--model", o.model_name, "builtin model name");
  cmd->add_option("--nodes", o.nodes, "grid cells for weights and FEM (default 500)");
  cmd->add_option("--n", o.n, "Monte-Carlo sample size (default 150)");
  cmd->add_option("--ref-n", o.ref_n, "reference sample size (default 10000)");
  cmd->add_option("--boot", o.boot, "bootstrap replicates (default 100)");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--weights", o.weights, "comma-separated weight kinds");
  cmd->add_option("--out", o.out, "output path prefix");
  cmd->add_option("--format", o.format, "csv|json (report commands)")
      ->check(CLI::IsMember({"csv", "json", "both"}));
}

int run_weight(const CommonOpts& o, bool numeric_only) {
  ProbabilityMeasure m = measure_from_file(o.measure_path);
  const auto kinds = parse_kinds(o.weights);
  for (WeightKind kind : kinds) {
    WeightCurve numeric;
    switch (kind) {
      case WeightKind::lin: {
        bool have_closed = true;
        WeightCurve closed;
        try {
          closed = weight_lin_closed_form(m);
        } catch (const std::exception&) {
          have_closed = false;
        }
        if (!have_closed && !numeric_only)
          throw unsupported_error(
              "no closed-form lin weight for this measure; pass --numeric to use "
              "the RK4 construction");
        numeric = weight_from_g(m, linear_saturating(m), o.nodes);
        if (have_closed) {
          std::ostringstream cs;
          closed.write_csv(cs);
          spit(o.out + "_lin_exact.csv", cs.str());
          double maxerr = 0.0;
          const auto& xs = numeric.grid();
          const auto& ws = numeric.grid_values();
          for (std::size_t j = 0; j < xs.size(); ++j)
            maxerr = std::max(maxerr, std::abs(ws[j] - closed.value(xs[j])));
          std::printf("lin: closed form available, max abs error = %.6e\n", maxerr);
        }
        break;
      }
      case WeightKind::unit:
        numeric = WeightCurve::unit(m.support());
        break;
      case WeightKind::uniform_ref:
        numeric = reference_weight(m, ReferenceKind::uniform_ref, o.nodes).first;
        break;
      case WeightKind::gauss_ref:
        numeric = reference_weight(m, ReferenceKind::gaussian_ref, o.nodes).first;
        break;
      case WeightKind::data_driven:
        throw std::invalid_argument(
            "data_driven weights need model samples; use the bound command");
    }
    std::ostringstream cs;
    if (numeric.closed_form()) {
      auto [xs, ws] = numeric.sampled(o.nodes);
      WeightCurve::tabulated(xs, ws, numeric.boundary_provenance(), numeric.label())
          .write_csv(cs);
    } else {
      numeric.write_csv(cs);
    }
    spit(o.out + "_" + weight_kind_name(kind) + ".csv", cs.str());
  }
  return kExitOk;
}

int run_spectrum(const CommonOpts& o, const std::string& weight_file, int num_eig) {
  ProbabilityMeasure m = measure_from_file(o.measure_path);
  WeightCurve w;
  std::string label;
  if (!weight_file.empty()) {
    std::ifstream f(weight_file);
    if (!f) throw std::invalid_argument("cannot open " + weight_file);
    w = WeightCurve::read_csv(f, "file");
    label = weight_file;
  } else {
    const auto kinds = parse_kinds(o.weights);
    if (kinds.size() != 1)
      throw std::invalid_argument("spectrum: exactly one weight kind");
    w = prepare_weight(m, kinds[0], o.nodes, o.nodes).curve;
    label = weight_kind_name(kinds[0]);
  }
  SpectralBasis basis = solve_eigenbasis(m, w, num_eig, o.nodes);
  std::ostringstream cs;
  write_eigen_csv(cs, basis);
  spit(o.out + ".csv", cs.str());
  spit(o.out + ".meta.json", eigen_metadata_json(basis, m.description(), label, o.nodes));
  std::printf("lambda1 = %.10g, C_P = %.10g\n", basis.eigenvalues[0],
              basis.poincare_constant());
  return kExitOk;
}

int emit_report(const GsaReport& rep, const CommonOpts& o) {
  if (o.format == "json" || o.format == "both") spit(o.out + ".json", rep.to_json());
  if (o.format == "csv" || o.format == "both") spit(o.out + ".csv", rep.to_csv());
  int cells_failed = 0;
  for (const auto& in : rep.per_input) cells_failed += static_cast<int>(in.errors.size());
  if (cells_failed > 0) {
    std::fprintf(stderr, "%d report cell(s) failed; see the errors field\n",
                 cells_failed);
    return kExitPartial;
  }
  return kExitOk;
}

ReportConfig config_from(const CommonOpts& o) {
  ReportConfig cfg;
  cfg.n = o.n;
  cfg.ref_n = o.ref_n;
  cfg.boot = o.boot;
  cfg.nodes = o.nodes;
  cfg.cells = o.nodes;
  cfg.seed = o.seed;
  return cfg;
}

int run_bound(const CommonOpts& o) {
  Model model = builtin_model(o.model_name);
  ReportConfig cfg = config_from(o);
  cfg.bound_kinds = parse_kinds(o.weights);
  cfg.poince_kinds = {};
  return emit_report(build_report(model, cfg), o);
}

int run_poince(const CommonOpts& o) {
  Model model = builtin_model(o.model_name);
  ReportConfig cfg = config_from(o);
  cfg.bound_kinds = {};
  cfg.poince_kinds = parse_kinds(o.weights);
  return emit_report(build_report(model, cfg), o);
}

int run_sobol(const CommonOpts& o) {
  Model model = builtin_model(o.model_name);
  ReportConfig cfg = config_from(o);
  cfg.bound_kinds = {};
  cfg.poince_kinds = {};
  return emit_report(build_report(model, cfg), o);
}

int run_main_effect(const CommonOpts& o, const std::string& data_path, int data_input,
                    double loess_bandwidth) {
  if (!data_path.empty()) {
    // tabulated mode: X1..Xd,Y[,G1..Gd] columns
    std::ifstream f(data_path);
    if (!f) throw std::invalid_argument("cannot open " + data_path);
    std::string header;
    std::getline(f, header);
    std::vector<std::string> names;
    {
      std::stringstream hs(header);
      std::string tok;
      while (std::getline(hs, tok, ',')) names.push_back(tok);
    }
    int d = 0;
    while (d < static_cast<int>(names.size()) && names[d].rfind("X", 0) == 0) ++d;
    if (d == 0 || d >= static_cast<int>(names.size()) || names[d] != "Y")
      throw std::invalid_argument("tabulated CSV needs header X1..Xd,Y[,G1..Gd]");
    const std::size_t ncol = names.size();
    std::vector<std::vector<double>> cols(ncol);
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string tok;
      std::size_t c = 0;
      while (std::getline(ss, tok, ',') && c < ncol) cols[c++].push_back(std::stod(tok));
    }
    if (data_input < 0 || data_input >= d)
      throw std::invalid_argument("--input outside the data dimension");
    ProbabilityMeasure m = measure_from_file(o.measure_path);
    FitOptions opts;
    opts.input_index = data_input;
    MainEffectFit fit = fit_main_effect_monotone(cols[data_input], cols[d], m, opts);
    std::ostringstream cs;
    fit.write_csv(cs, o.nodes);
    spit(o.out + ".csv", cs.str());
    spit(o.out + ".flags.json", fit.flags_json() + "\n");
    return kExitOk;
  }

  Model model = builtin_model(o.model_name);
  RandomStream rng = RandomStream::split(o.seed, 2);
  const int d = model.dimension();
  std::vector<double> row(d);
  std::vector<std::vector<double>> X(d);
  std::vector<double> y;
  for (int k = 0; k < o.n; ++k) {
    model.sample_row(rng, row);
    for (int i = 0; i < d; ++i) X[i].push_back(row[i]);
    y.push_back(model.evaluate(row));
  }
  int failures = 0;
  for (int i = 0; i < d; ++i) {
    FitOptions opts;
    if (i < static_cast<int>(model.fit_overrides.size()) && model.fit_overrides[i])
      opts = *model.fit_overrides[i];
    opts.input_index = i;
    try {
      MainEffectFit fit = fit_main_effect_monotone(X[i], y, model.inputs[i], opts);
      std::ostringstream cs;
      fit.write_csv(cs, o.nodes);
      spit(o.out + "_input" + std::to_string(i) + ".csv", cs.str());
      spit(o.out + "_input" + std::to_string(i) + ".flags.json",
           fit.flags_json() + "\n");
      if (loess_bandwidth > 0) {
        Curve ref = estimate_main_effect_reference(X[i], y, loess_bandwidth);
        std::ostringstream rs;
        rs << "x,f_ref\n";
        char buf[80];
        for (std::size_t j = 0; j < ref.x.size(); ++j) {
          std::snprintf(buf, sizeof(buf), "%.12e,%.12e\n", ref.x[j], ref.y[j]);
          rs << buf;
        }
        spit(o.out + "_input" + std::to_string(i) + ".loess.csv", rs.str());
      }
    } catch (const std::exception& e) {
      std::fprintf(stderr, "input %d: %s\n", i, e.what());
      ++failures;
    }
  }
  return failures == 0 ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted Poincare inequalities for global sensitivity analysis"};
  app.require_subcommand(1);

  CommonOpts ow, os, ob, op, oj, om;
  bool numeric_only = false;
  std::string weight_file;
  int num_eig = 2;
  std::string data_path;
  int data_input = 0;
  double loess_bandwidth = 0.0;

  auto* cw = app.add_subcommand("weight", "weight curves for a measure");
  add_common(cw, ow, false);
  cw->add_flag("--numeric", numeric_only, "allow RK4-only lin weights");

  auto* cs = app.add_subcommand("spectrum", "eigenvalues and eigenfunctions");
  add_common(cs, os, false);
  cs->add_option("--weight-file", weight_file, "tabulated weight CSV");
  cs->add_option("--num-eig", num_eig, "number of eigenpairs (default 2)");

  auto* cb = app.add_subcommand("bound", "DGSM upper bounds on total Sobol indices");
  add_common(cb, ob, true);

  auto* cp = app.add_subcommand("poince", "chaos approximations of total Sobol indices");
  add_common(cp, op, true);
  cp->get_option("--weights")->default_val(std::string("gauss_ref,uniform_ref"));

  auto* cj = app.add_subcommand("sobol", "reference Jansen totals");
  add_common(cj, oj, true);

  auto* cm = app.add_subcommand("main-effect", "monotone main-effect fits");
  add_common(cm, om, true);
  cm->add_option("--data", data_path, "tabulated CSV (X1..Xd,Y)");
  cm->add_option("--input", data_input, "input column for --data mode");
  cm->add_option("--loess-bandwidth", loess_bandwidth,
                 "also emit a local-quadratic reference curve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (cw->parsed()) return run_weight(ow, numeric_only);
    if (cs->parsed()) return run_spectrum(os, weight_file, num_eig);
    if (cb->parsed()) return run_bound(ob);
    if (cp->parsed()) return run_poince(op);
    if (cj->parsed()) return run_sobol(oj);
    if (cm->parsed()) return run_main_effect(om, data_path, data_input, loess_bandwidth);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const pgsa::unsupported_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitConfig;
}
