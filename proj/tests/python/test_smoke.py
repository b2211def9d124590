#!/usr/bin/env python3
"""Smoke tests for the python bindings."""
import json
import math
import sys

import numpy as np

import pgsa

failures = []


def check(name, cond, detail=""):
    print(f"  [{'ok' if cond else 'FAIL'}] {name} {detail}")
    if not cond:
        failures.append(name)


# measures
u = pgsa.Measure.uniform(0.0, 1.0)
check("uniform density", u.density(0.3) == 1.0)
tn = pgsa.Measure.normal(0.0, 1.0).truncated(0.0, 3.0)
check("truncated support", tn.support() == (0.0, 3.0))
check("quadrature mass", abs(tn.quadrature(lambda x: 1.0) - 1.0) < 1e-10)
draws = tn.sample(5000, seed=7)
check("sampling inside support", float(draws.min()) >= 0.0 and float(draws.max()) <= 3.0)
check("json round trip",
      pgsa.Measure.from_json(tn.to_json()).density(1.0) == tn.density(1.0))

# weights
wlin = pgsa.weight_lin_closed_form(u)
check("lin weight value", abs(wlin(0.5) - 0.125) < 1e-14)
wg = pgsa.weight_from_g(u, lambda x: x - 0.5, lambda x: 1.0)
xs, ws = wg.sampled(500)
check("rk4 matches closed form",
      float(np.max(np.abs(ws - 0.5 * xs * (1 - xs)))) < 1e-6)
wu = pgsa.reference_weight(u, "uniform_ref")
check("uniform reference constant", abs(wu(0.5) - 1 / math.pi**2) < 1e-10)

# spectral
basis = pgsa.solve_eigenbasis(u, pgsa.WeightCurve.unit(u), num_eig=2, cells=300)
check("cosine gap", abs(basis.eigenvalues[0] - math.pi**2) / math.pi**2 < 1e-3)
check("poincare constant",
      abs(pgsa.poincare_constant(u, wlin, cells=300) - 1.0) < 2e-3)
e2 = pgsa.Measure.exponential(2.0)
check("intertwining bound",
      abs(pgsa.intertwining_bound(e2, pgsa.WeightCurve.unit(e2)) - 1.0) < 1e-6)
fam = pgsa.limit_quotient_family(pgsa.Measure.pareto(1.0, 3.0))
check("limit family", abs(fam.quotient(1.0) - 0.25) < 1e-12)
q = pgsa.rayleigh_quotient(pgsa.Measure.exponential(1.0),
                           pgsa.WeightCurve.unit(pgsa.Measure.exponential(1.0)),
                           lambda x: math.exp(0.25 * x) - 4 / 3,
                           lambda x: 0.25 * math.exp(0.25 * x))
check("rayleigh quotient", abs(q - 16 / 9) < 1e-8)

# fits and models
rng = np.random.default_rng(5)
x = rng.random(200)
y = 2 * x + 0.05 * rng.standard_normal(200)
fit = pgsa.fit_main_effect_monotone(x, y, u)
check("fit direction", fit.direction == 1)
check("fit centered near line", abs(fit(0.75) - (2 * 0.75 - 1.0)) < 0.1)
wdd = pgsa.data_driven_weight(fit, u)
check("data-driven boundary", wdd.boundary_values() == (0.0, 0.0))

m = pgsa.toy1_model()
check("toy1 eval", m.evaluate(np.ones(5)) == 5.0)
check("toy1 gradient", np.allclose(m.gradient(np.ones(5)), [1, 2, 3, 4, 5]))
est = pgsa.sobol_total_reference(m, n=2000, seed=1)
oracle = pgsa.toy1_sobol_oracle()
check("jansen close to oracle",
      max(abs(est.raw[i] - oracle[i]) for i in range(5)) < 0.05)

rep = json.loads(pgsa.build_report(m, bound_kinds=["lin"], poince_kinds=["uniform_ref"],
                                   n=500, ref_n=500, boot=10, seed=3))
check("report shape", len(rep["per_input"]) == 5 and "lin" in rep["per_input"][0]["bounds"])

flood = pgsa.flood_model_s()
check("flood eval",
      abs(flood.evaluate(np.array([1013.0, 30, 50, 55, 8, 55.5, 5000, 300]))
          - (-11.357996571882)) < 1e-9)

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
