#!/usr/bin/env python3
"""End-to-end CLI checks: flags, exit codes, file formats, reproducibility."""
import json
import os
import subprocess
import sys
import tempfile

CLI = sys.argv[1]
DATA = sys.argv[2] if len(sys.argv) > 2 else None

failures = []


def check(name, cond, detail=""):
    status = "ok" if cond else "FAIL"
    print(f"  [{status}] {name} {detail}")
    if not cond:
        failures.append(name)


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


with tempfile.TemporaryDirectory() as tmp:
    u01 = os.path.join(tmp, "u01.json")
    with open(u01, "w") as f:
        f.write('{"family":"uniform","params":{"a":0,"b":1}}')
    tn = os.path.join(tmp, "tn03.json")
    with open(tn, "w") as f:
        f.write('{"family":"normal","params":{"mean":0,"variance":1},"truncation":[0,3]}')
    gum = os.path.join(tmp, "gum.json")
    with open(gum, "w") as f:
        f.write('{"family":"gumbel","params":{"location":0,"scale":1},"truncation":[0,4]}')

    # --help exists and documents flags; unknown flags are hard errors
    r = run("--help")
    check("help", r.returncode == 0 and "weight" in r.stdout and "poince" in r.stdout)
    r = run("bound", "--model", "toy1", "--garbage", "1")
    check("unknown flag rejected", r.returncode == 2, f"rc={r.returncode}")
    r = run("bound", "--model", "not_a_model", "--out", os.path.join(tmp, "x"))
    check("unknown model is a config error", r.returncode == 2)
    r = run("weight", "--measure", os.path.join(tmp, "missing.json"))
    check("missing measure file", r.returncode == 2)

    # weight command: three kinds for the uniform measure (the constant w_U case)
    out = os.path.join(tmp, "W")
    r = run("weight", "--measure", u01, "--weights", "lin,uniform_ref,gauss_ref",
            "--out", out)
    check("weight exit", r.returncode == 0, r.stderr.strip())
    check("weight closed-form line", "max abs error" in r.stdout)
    wu = open(out + "_uniform_ref.csv").read().splitlines()
    check("weight csv header", wu[0] == "x,w")
    vals = [float(line.split(",")[1]) for line in wu[1:]]
    check("w_U constant 1/pi^2",
          max(abs(v - 0.10132118364233778) for v in vals) < 1e-10)
    check("LF endings", "\r" not in open(out + "_lin.csv", newline="").read())

    # truncated-normal figure case and the numeric-only Gumbel case
    r = run("weight", "--measure", tn, "--weights", "lin", "--out", os.path.join(tmp, "T"))
    check("tnorm weight exit", r.returncode == 0)
    r = run("weight", "--measure", gum, "--weights", "lin", "--out", os.path.join(tmp, "G"))
    check("gumbel lin needs --numeric", r.returncode == 2)
    r = run("weight", "--measure", gum, "--weights", "lin", "--numeric", "--out",
            os.path.join(tmp, "G"))
    check("gumbel numeric weight", r.returncode == 0)
    r = run("weight", "--measure", gum, "--weights", "uniform_ref,gauss_ref", "--out",
            os.path.join(tmp, "G"))
    check("gumbel reference weights", r.returncode == 0)

    # spectrum: uniform/unit has lambda1 = pi^2; uniform/lin has C_P = 1
    out = os.path.join(tmp, "S")
    r = run("spectrum", "--measure", u01, "--weights", "unit", "--out", out)
    meta = json.load(open(out + ".meta.json"))
    check("spectrum lambda1", abs(meta["eigenvalues"][0] - 9.8696044) / 9.8696044 < 1e-3)
    r = run("spectrum", "--measure", u01, "--weights", "lin", "--out", out)
    meta = json.load(open(out + ".meta.json"))
    check("spectrum C_P(lin) = 1", abs(meta["c_p"] - 1.0) < 1e-3)
    header = open(out + ".csv").readline().strip()
    check("spectrum csv header", header == "x,e1,e2,d_e1,d_e2")

    # spectrum from a weight file round-trips
    r = run("spectrum", "--measure", u01, "--weight-file",
            os.path.join(tmp, "W_lin.csv"), "--out", os.path.join(tmp, "S2"))
    meta2 = json.load(open(os.path.join(tmp, "S2.meta.json")))
    check("spectrum from CSV weight", abs(meta2["c_p"] - 1.0) < 2e-3)

    # sobol/bound/poince reports: schema and determinism
    out = os.path.join(tmp, "R")
    args = ["bound", "--model", "toy1", "--weights", "unit,lin", "--n", "800",
            "--ref-n", "800", "--boot", "30", "--seed", "11", "--format", "both",
            "--out", out]
    r = run(*args)
    check("bound exit", r.returncode == 0, r.stderr.strip())
    rep = json.load(open(out + ".json"))
    check("report schema",
          {"model", "seed", "n", "boot", "per_input"} <= set(rep.keys()))
    check("report per-input schema",
          {"i", "s_tot_ref", "bounds", "poince"} <= set(rep["per_input"][0].keys()))
    check("report bound cell",
          {"value", "q025", "q50", "q975"} <= set(rep["per_input"][0]["bounds"]["lin"].keys()))
    first = open(out + ".json").read() + open(out + ".csv").read()
    r = run(*args)
    second = open(out + ".json").read() + open(out + ".csv").read()
    check("bound rerun is byte-identical", first == second)

    # thread cap must not change any byte of the output
    env = dict(os.environ, GSA_THREADS="4")
    subprocess.run([CLI, *args], capture_output=True, env=env)
    threaded = open(out + ".json").read() + open(out + ".csv").read()
    check("GSA_THREADS=4 output identical", threaded == first)

    r = run("poince", "--model", "toy1", "--n", "800", "--ref-n", "800", "--boot",
            "20", "--seed", "11", "--out", os.path.join(tmp, "P"))
    check("poince exit", r.returncode == 0, r.stderr.strip())
    rep = json.load(open(os.path.join(tmp, "P.json")))
    cell = rep["per_input"][0]["poince"]["gauss_ref"]
    check("poince cell schema", {"der_free", "der_based"} <= set(cell.keys()))

    r = run("sobol", "--model", "flood_s", "--ref-n", "500", "--seed", "3", "--out",
            os.path.join(tmp, "F"), "--format", "csv")
    check("sobol exit", r.returncode == 0)
    lines = open(os.path.join(tmp, "F.csv")).read().splitlines()
    check("sobol csv rows", len(lines) == 9 and lines[0].startswith("input,kind,metric"))

    # main-effect fits, including the flood H_d affine fallback
    r = run("main-effect", "--model", "flood_c", "--n", "300", "--seed", "5", "--out",
            os.path.join(tmp, "ME"))
    check("main-effect exit", r.returncode == 0, r.stderr.strip())
    flags = json.load(open(os.path.join(tmp, "ME_input4.flags.json")))
    check("H_d fallback warns", flags["non_monotone_warning"] is True)
    fit_rows = open(os.path.join(tmp, "ME_input4.csv")).read().splitlines()
    check("fit csv header", fit_rows[0] == "x,f_hat,d_f_hat")
    dcol = [float(x.split(",")[2]) for x in fit_rows[1:]]
    check("H_d fallback increasing", min(dcol) > 0)

    # tabulated main-effect mode
    tab = os.path.join(tmp, "tab.csv")
    with open(tab, "w") as f:
        f.write("X1,X2,Y\n")
        for k in range(200):
            x1 = (k + 0.5) / 200
            x2 = ((k * 7919) % 200 + 0.5) / 200
            f.write(f"{x1},{x2},{x1 + 0.1 * x2}\n")
    r = run("main-effect", "--data", tab, "--input", "0", "--measure", u01, "--out",
            os.path.join(tmp, "TD"))
    check("tabulated fit exit", r.returncode == 0, r.stderr.strip())

if DATA:
    fixture = os.path.join(DATA, "flood_reference.json")
    check("flood fixture committed", os.path.exists(fixture))

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
