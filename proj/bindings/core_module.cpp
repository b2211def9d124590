#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pgsa/estimate.hpp"
#include "pgsa/gsa.hpp"
#include "pgsa/measures.hpp"
#include "pgsa/models.hpp"
#include "pgsa/spectral.hpp"
#include "pgsa/weights.hpp"

namespace py = pybind11;
using namespace pgsa;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> from_array(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  return {a.data(), a.data() + a.size()};
}

SaturatingFunction make_saturating(std::function<double(double)> g,
                                   std::function<double(double)> gp, int monotonicity) {
  SaturatingFunction s;
  s.value = std::move(g);
  s.derivative = std::move(gp);
  s.monotonicity = monotonicity;
  return s;
}

FitDirection parse_direction(const std::string& d) {
  if (d == "auto") return FitDirection::automatic;
  if (d == "inc") return FitDirection::increasing;
  if (d == "dec") return FitDirection::decreasing;
  throw std::invalid_argument("direction must be auto|inc|dec");
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "weighted Poincare inequalities for global sensitivity analysis";

  py::class_<ProbabilityMeasure>(mod, "Measure")
      .def_static("uniform", &ProbabilityMeasure::uniform)
      .def_static("normal", &ProbabilityMeasure::normal)
      .def_static("exponential", &ProbabilityMeasure::exponential)
      .def_static("gumbel", &ProbabilityMeasure::gumbel)
      .def_static("triangular", &ProbabilityMeasure::triangular)
      .def_static("generalized_cauchy", &ProbabilityMeasure::generalized_cauchy)
      .def_static("pareto", &ProbabilityMeasure::pareto)
      .def_static("symmetric_beta", &ProbabilityMeasure::symmetric_beta)
      .def_static("power", &ProbabilityMeasure::power)
      .def_static("generalized_logistic", &ProbabilityMeasure::generalized_logistic)
      .def_static("from_json", &ProbabilityMeasure::from_json_text)
      .def("truncated", &ProbabilityMeasure::truncated)
      .def("density", &ProbabilityMeasure::density)
      .def("log_density_derivative", &ProbabilityMeasure::log_density_derivative)
      .def("score_derivative", &ProbabilityMeasure::score_derivative)
      .def("mean", &ProbabilityMeasure::mean)
      .def("cdf", &ProbabilityMeasure::cdf)
      .def("quantile", &ProbabilityMeasure::quantile)
      .def("quadrature",
           [](const ProbabilityMeasure& m, std::function<double(double)> f, int cells) {
             return m.quadrature(f, cells);
           },
           py::arg("f"), py::arg("cells") = 500)
      .def("sample",
           [](const ProbabilityMeasure& m, std::size_t n, std::uint64_t seed) {
             RandomStream rng(seed);
             return to_array(m.sample(n, rng));
           },
           py::arg("n"), py::arg("seed"))
      .def("support",
           [](const ProbabilityMeasure& m) {
             return std::make_pair(m.support().a, m.support().b);
           })
      .def("to_json", &ProbabilityMeasure::to_json_text)
      .def("__repr__", &ProbabilityMeasure::description);

  py::class_<WeightCurve>(mod, "WeightCurve")
      .def_static("unit",
                  [](const ProbabilityMeasure& m) { return WeightCurve::unit(m.support()); })
      .def_static("from_function",
                  [](const ProbabilityMeasure& m, std::function<double(double)> w,
                     const std::string& label) {
                    return WeightCurve::from_functions(m.support(), std::move(w), nullptr,
                                                       nullptr, label);
                  },
                  py::arg("measure"), py::arg("w"), py::arg("label") = "custom")
      .def("__call__", &WeightCurve::value)
      .def("derivative", &WeightCurve::derivative)
      .def("boundary_values", &WeightCurve::boundary_values)
      .def("label", &WeightCurve::label)
      .def("sampled",
           [](const WeightCurve& w, int nodes) {
             auto [x, v] = w.sampled(nodes);
             return std::make_pair(to_array(x), to_array(v));
           },
           py::arg("nodes") = 500);

  mod.def("weight_lin_closed_form", &weight_lin_closed_form);
  mod.def(
      "weight_from_g",
      [](const ProbabilityMeasure& m, std::function<double(double)> g,
         std::function<double(double)> gp, int monotonicity, int nodes) {
        return weight_from_g(m, make_saturating(std::move(g), std::move(gp), monotonicity),
                             nodes);
      },
      py::arg("measure"), py::arg("g"), py::arg("gp"), py::arg("monotonicity") = 1,
      py::arg("nodes") = 500);
  mod.def(
      "reference_weight",
      [](const ProbabilityMeasure& m, const std::string& kind, int nodes) {
        const ReferenceKind k = kind == "uniform_ref" ? ReferenceKind::uniform_ref
                                                      : ReferenceKind::gaussian_ref;
        if (kind != "uniform_ref" && kind != "gauss_ref")
          throw std::invalid_argument("kind must be uniform_ref|gauss_ref");
        return reference_weight(m, k, nodes).first;
      },
      py::arg("measure"), py::arg("kind"), py::arg("nodes") = 500);

  py::class_<SpectralBasis>(mod, "SpectralBasis")
      .def_property_readonly("nodes", [](const SpectralBasis& b) { return to_array(b.nodes); })
      .def_property_readonly("eigenvalues",
                             [](const SpectralBasis& b) { return to_array(b.eigenvalues); })
      .def_property_readonly("lambda0", [](const SpectralBasis& b) { return b.lambda0; })
      .def("eigenfunction",
           [](const SpectralBasis& b, int n) { return to_array(b.eigenfunctions.at(n - 1)); })
      .def("derivative_values",
           [](const SpectralBasis& b, int n) { return to_array(b.derivatives.at(n - 1)); })
      .def("eval", &SpectralBasis::eval)
      .def("eval_derivative", &SpectralBasis::eval_derivative)
      .def("poincare_constant", &SpectralBasis::poincare_constant);

  mod.def("solve_eigenbasis", &solve_eigenbasis, py::arg("measure"), py::arg("weight"),
          py::arg("num_eig") = 2, py::arg("cells") = 500);
  mod.def("poincare_constant", &poincare_constant, py::arg("measure"), py::arg("weight"),
          py::arg("cells") = 500);

  py::class_<IntertwiningProfile>(mod, "IntertwiningProfile")
      .def_property_readonly("x", [](const IntertwiningProfile& p) { return to_array(p.x); })
      .def_property_readonly("values",
                             [](const IntertwiningProfile& p) { return to_array(p.values); })
      .def_readonly("infimum", &IntertwiningProfile::infimum)
      .def_readonly("argmin", &IntertwiningProfile::argmin)
      .def_readonly("parameter", &IntertwiningProfile::parameter);

  mod.def("intertwining_profile_eps", &intertwining_profile_eps, py::arg("measure"),
          py::arg("weight"), py::arg("eps"), py::arg("grid") = 2001);
  mod.def("intertwining_bound", &intertwining_bound, py::arg("measure"), py::arg("weight"),
          py::arg("eps_grid") = 401, py::arg("x_grid") = 2001);
  mod.def("intertwining_profile_h", &intertwining_profile_h, py::arg("measure"),
          py::arg("weight"), py::arg("hp"), py::arg("hpp"), py::arg("grid") = 2001);
  mod.def("rayleigh_quotient", &rayleigh_quotient, py::arg("measure"), py::arg("weight"),
          py::arg("f"), py::arg("fp"));

  py::class_<LimitQuotientFamily>(mod, "LimitQuotientFamily")
      .def_readonly("eta_star", &LimitQuotientFamily::eta_star)
      .def_readonly("limit", &LimitQuotientFamily::limit)
      .def_readonly("weight", &LimitQuotientFamily::weight)
      .def("quotient", [](const LimitQuotientFamily& f, double eta) { return f.quotient(eta); })
      .def("f", [](const LimitQuotientFamily& f, double eta) { return f.make_f(eta); })
      .def("fp", [](const LimitQuotientFamily& f, double eta) { return f.make_fp(eta); });
  mod.def("limit_quotient_family", &limit_quotient_family);

  py::class_<MainEffectFit>(mod, "MainEffectFit")
      .def("__call__", &MainEffectFit::operator())
      .def("derivative", &MainEffectFit::derivative)
      .def_property_readonly("direction", &MainEffectFit::direction)
      .def_property_readonly("slope_floor", &MainEffectFit::slope_floor)
      .def_property_readonly("non_monotone_warning", &MainEffectFit::non_monotone_warning);

  mod.def(
      "fit_main_effect_monotone",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
         py::array_t<double, py::array::c_style | py::array::forcecast> y,
         const ProbabilityMeasure& m, const std::string& direction, int degree,
         std::optional<std::vector<double>> affine_knots) {
        FitOptions opts;
        opts.direction = parse_direction(direction);
        opts.degree = degree;
        if (affine_knots) opts.affine_knots = std::move(*affine_knots);
        return fit_main_effect_monotone(from_array(x), from_array(y), m, opts);
      },
      py::arg("x"), py::arg("y"), py::arg("measure"), py::arg("direction") = "auto",
      py::arg("degree") = 6, py::arg("affine_knots") = std::nullopt);
  mod.def("data_driven_weight", &data_driven_weight, py::arg("fit"), py::arg("measure"),
          py::arg("nodes") = 500);
  mod.def(
      "estimate_main_effect_reference",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
         py::array_t<double, py::array::c_style | py::array::forcecast> y, double bandwidth,
         int grid) {
        Curve c = estimate_main_effect_reference(from_array(x), from_array(y), bandwidth,
                                                 grid);
        return std::make_pair(to_array(c.x), to_array(c.y));
      },
      py::arg("x"), py::arg("y"), py::arg("bandwidth"), py::arg("grid") = 201);

  py::class_<Model>(mod, "Model")
      .def_property_readonly("name", [](const Model& m) { return m.name; })
      .def_property_readonly("dimension", &Model::dimension)
      .def_property_readonly("inputs", [](const Model& m) { return m.inputs; })
      .def("evaluate",
           [](const Model& m, py::array_t<double, py::array::c_style | py::array::forcecast> x) {
             auto v = from_array(x);
             return m.evaluate(v);
           })
      .def("gradient",
           [](const Model& m, py::array_t<double, py::array::c_style | py::array::forcecast> x) {
             auto v = from_array(x);
             std::vector<double> g(m.dimension());
             m.gradient(v, g);
             return to_array(g);
           });

  mod.def("toy1_model", &toy1_model);
  mod.def("toy2_model", &toy2_model, py::arg("a") = std::vector<double>{1, 2, 4.5, 90, 90});
  mod.def("flood_model_s", &flood_model_s);
  mod.def("flood_model_c", &flood_model_c);
  mod.def("builtin_model", &builtin_model);
  mod.def("toy1_sobol_oracle", &toy1_sobol_oracle);
  mod.def("toy2_sobol_oracle", &toy2_sobol_oracle,
          py::arg("a") = std::vector<double>{1, 2, 4.5, 90, 90});

  py::class_<SobolEstimate>(mod, "SobolEstimate")
      .def_property_readonly("total", [](const SobolEstimate& s) { return to_array(s.total); })
      .def_property_readonly("raw", [](const SobolEstimate& s) { return to_array(s.raw); })
      .def_readonly("n", &SobolEstimate::n);

  mod.def(
      "sobol_total_reference",
      [](const Model& m, int n, std::uint64_t seed) {
        RandomStream rng = RandomStream::split(seed, 0);
        return sobol_total_reference(m, n, rng);
      },
      py::arg("model"), py::arg("n") = 10000, py::arg("seed") = 0);

  mod.def(
      "build_report",
      [](const Model& m, std::vector<std::string> bound_kinds,
         std::vector<std::string> poince_kinds, int n, int ref_n, int fit_n, int boot,
         int nodes, std::uint64_t seed) {
        ReportConfig cfg;
        cfg.bound_kinds.clear();
        for (const auto& s : bound_kinds) cfg.bound_kinds.push_back(weight_kind_from_name(s));
        cfg.poince_kinds.clear();
        for (const auto& s : poince_kinds) cfg.poince_kinds.push_back(weight_kind_from_name(s));
        cfg.n = n;
        cfg.ref_n = ref_n;
        cfg.fit_n = fit_n;
        cfg.boot = boot;
        cfg.nodes = nodes;
        cfg.cells = nodes;
        cfg.seed = seed;
        return build_report(m, cfg).to_json();
      },
      py::arg("model"), py::arg("bound_kinds") = std::vector<std::string>{"unit", "lin"},
      py::arg("poince_kinds") = std::vector<std::string>{}, py::arg("n") = 150,
      py::arg("ref_n") = 10000, py::arg("fit_n") = 150, py::arg("boot") = 100,
      py::arg("nodes") = 500, py::arg("seed") = 0);
}
