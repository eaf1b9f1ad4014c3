"""End-to-end runs of the rglab command line tool."""
import filecmp
import json
import math
import os
import subprocess
import sys
import tempfile

BIN, DATA = sys.argv[1], sys.argv[2]
failures = []


def run(*args):
    return subprocess.run([BIN, *args], capture_output=True, text=True)


def expect(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def rates(name):
    return os.path.join(DATA, name + ".json")


with tempfile.TemporaryDirectory() as tmp:
    def out(name):
        return os.path.join(tmp, name)

    r = run("s0", "--rates", rates("waring"), "--nmax", "100000", "--out", out("w"))
    s0 = json.load(open(out("w/s0.json")))
    expect(r.returncode == 0 and s0["classification"] == "exactly-one", "s0 waring exactly-one")

    r = run("s0", "--rates", rates("quadratic"), "--nmax", "100000", "--out", out("q"))
    s0 = json.load(open(out("q/s0.json")))
    expect(abs(s0["partial"] - 0.72797) < 5e-6 and s0["classification"] == "strictly-below-one",
           "s0 quadratic partial and class")
    expect(abs(s0["estimate"] - (1 - math.pi / math.sinh(math.pi))) < 1e-9, "s0 quadratic tail estimate")

    r = run("adversarial", "--rates", rates("const"), "--n", "3", "--M", "10", "--out", out("a"))
    cert = json.load(open(out("a/certificate.json")))
    expect(r.returncode == 0 and cert["pass"] and len(cert["points"]) == 3 and max(cert["points"]) > 10,
           "adversarial certificate")
    rows = open(out("a/adversarial.csv")).read().split()
    expect(rows[0] == "k,P0" and abs(sum(float(x.split(",")[1]) for x in rows[1:]) - 1) < 1e-12,
           "adversarial CSV is a distribution")

    r = run("adversarial", "--rates", rates("waring"), "--n", "5", "--M", "20", "--out", out("al"))
    expect(r.returncode == 0, "adversarial linear family")

    r = run("stationary", "--rates", rates("waring"), "--nmax", "1000", "--out", out("s"))
    st = json.load(open(out("s/stationary.json")))
    expect(r.returncode == 0 and abs(st["Q0"] - 0.5) < 1e-12, "stationary Waring Q0")

    r = run("transient", "--rates", rates("waring"), "--n", "6", "--tmax", "5", "--samples", "51",
            "--out", out("t"))
    pts = json.load(open(out("t/stationary_points.json")))
    expect(r.returncode == 0 and all(p["count"] == 1 for p in pts[1:]), "transient single points")
    expect(abs(pts[3]["points"][0] - math.log(4)) < 1e-8, "transient point at ln(n+1)")
    lines = open(out("t/transient.csv")).read().split()
    expect(len(lines) == 52 and lines[0].count(",") == 7, "transient CSV shape")

    with open(out("init.csv"), "w") as f:
        f.write("k,P0\n0,0.25\n1,0.25\n2,0.5\n")
    r = run("evolve", "--rates", rates("quadratic"), "--variant", "modified", "--nmax", "40",
            "--tmax", "1", "--tol", "1e-10", "--initial", out("init.csv"), "--out", out("e"))
    diag = open(out("e/diagnostics.csv")).read().split()
    expect(r.returncode == 0 and diag[0] == "t,mass,dmass_dt_numeric,identity_rhs,residual",
           "evolve diagnostics")
    traj = open(out("e/trajectory.csv")).read().split()
    expect(traj[1].startswith("0,0.25,0.25,0.5,0,"), "evolve starts from the given distribution")

    run("evolve", "--rates", rates("const"), "--nmax", "50", "--tmax", "2", "--out", out("d1"))
    run("evolve", "--rates", rates("const"), "--nmax", "50", "--tmax", "2", "--out", out("d2"))
    expect(filecmp.cmp(out("d1/trajectory.csv"), out("d2/trajectory.csv"), shallow=False),
           "byte-identical trajectories")

    reports = [out("w/s0.json"), out("a/certificate.json"), out("s/stationary.json"),
               out("t/stationary_points.json")]
    args = ["check", "--rates", rates("quadratic"), "--out", out("c")]
    for p in reports:
        args += ["--report", p]
    env = dict(os.environ, RGLAB_THREADS="2")
    r = subprocess.run([BIN, *args], capture_output=True, text=True, env=env)
    chk = json.load(open(out("c/check.json")))
    expect(r.returncode == 0 and chk["pass"], "check on config and reports")
    r = run("check", "--report", out("c/check.json"), "--out", out("c2"))
    expect(r.returncode == 0, "check re-parses its own report")

    # exit codes
    with open(out("bad.json"), "w") as f:
        f.write('{"gamma": {"kind": "constant", "value": 1}}')
    expect(run("s0", "--rates", out("bad.json"), "--out", out("x")).returncode == 1, "config error exits 1")
    expect(run("s0", "--rates", out("missing.json")).returncode == 1, "missing file exits 1")
    expect(run("frobnicate").returncode == 1, "unknown command exits 1")
    with open(out("flat.json"), "w") as f:
        f.write('{"gamma": {"kind": "exponential", "c": 1, "a": 0.36787944117144233},'
                ' "mu": {"kind": "exponential", "c": 1, "a": 0.36787944117144233}}')
    r = run("stationary", "--rates", out("flat.json"), "--nmax", "50", "--out", out("x"))
    expect(r.returncode == 2 and "not-normalizable" in r.stderr, "numeric failure exits 2")
    r = run("evolve", "--rates", rates("waring"), "--variant", "constant-reset", "--nmax", "30",
            "--tol", "1e-300", "--out", out("x"))
    expect(r.returncode == 2 and "step-underflow" in r.stderr, "step underflow exits 2")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
