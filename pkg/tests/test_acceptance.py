"""Acceptance suite: one test and one printed pass/fail line per criterion.

Each criterion is verified at its stated tolerance and inside its stated
runtime budget.  Tolerances here are contract values; do not tighten or
loosen them to chase a failure, fix the library instead.
"""

import hashlib
import json
import math
import time

import numpy as np
from scipy.special import loggamma

from diwt.cli import main as cli_main
from diwt.oracles import CANONICAL_CASES, canonical_suite, run_suite
from diwt.quad import MellinBarnesSpec, integrate_vertical_line
from diwt.specfun import WhittakerOrder, whittaker_w_bessel, whittaker_w_mb
from diwt.transforms import (
    CoefficientSeq,
    ForwardHandle,
    FourierPolynomial,
    ProfileHandle,
    TransformParams,
    closed_form_coefficients,
    coefficient_transform,
    function_from_profile,
    invert_series,
    synthesize_series,
)


def verdict(num, label, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {num}: {label} [{detail}]"
    print(line)
    assert ok, line


def test_criterion_1_inversion_round_trip():
    budget = 300.0
    seq = (1.0, 0.5, -0.25)
    t0 = time.perf_counter()
    worst = 0.0
    ok = True
    for mu in (-0.25, 0.0, 0.25):
        f = ForwardHandle(CoefficientSeq(seq), mu)
        params = TransformParams(mu)
        for n in (1, 2, 3):
            r = invert_series(f, params, n)
            err = abs(r.value - seq[n - 1])
            ok &= err <= max(1e-3, r.error_bound)
            worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < budget
    verdict(1, "series inversion recovers every coefficient",
            ok, f"worst abs err {worst:.2e}, {elapsed:.1f}s of {budget:.0f}s")


def test_criterion_2_profile_round_trip():
    budget = 180.0
    t0 = time.perf_counter()
    ok = True
    worst_coeff = 0.0
    worst_synth = 0.0
    for k in (1, 2):
        for mu in (0.0, 0.25):
            profile = FourierPolynomial(
                sine_coeffs=(0.0,) * (k - 1) + (1.0,))
            f = ProfileHandle(profile, mu)
            peak = closed_form_coefficients(profile, mu, k)
            for n in range(1, 5):
                got = coefficient_transform(f, mu, n)
                if n == k:
                    rel = abs(got - peak) / abs(peak)
                    ok &= rel <= 1e-6
                    worst_coeff = max(worst_coeff, rel)
                else:
                    ok &= abs(got) <= 1e-6 * abs(peak)
            seq = CoefficientSeq(tuple(
                closed_form_coefficients(profile, mu, n)
                for n in range(1, k + 1)))
            for x in (0.5, 1.0, 2.0, 5.0, 10.0):
                want = function_from_profile(profile, mu, x)
                got = synthesize_series(seq, mu, x).value
                rel = abs(got - want) / abs(want)
                ok &= rel <= 1e-4
                worst_synth = max(worst_synth, rel)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < budget
    verdict(2, "profile coefficients and synthesis match closed forms", ok,
            f"worst coeff rel {worst_coeff:.2e}, worst synth rel "
            f"{worst_synth:.2e}, {elapsed:.1f}s of {budget:.0f}s")


def test_criterion_3_whittaker_cross_route():
    budget = 120.0
    t0 = time.perf_counter()
    worst = 0.0
    for mu in (-1.0, -0.25, 0.0, 0.25, 0.45):
        for tau in (0.5, 1.0, 2.0, 4.0):
            order = WhittakerOrder(mu, tau)
            for x in (0.1, 1.0, 5.0, 20.0):
                a = whittaker_w_mb(order, x)
                b = whittaker_w_bessel(order, x)
                worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-7 and elapsed < budget
    verdict(3, "contour and Bessel-integral routes agree on the 5x4x4 grid",
            ok, f"worst rel {worst:.2e}, {elapsed:.1f}s of {budget:.0f}s")


def test_criterion_4_identity_suite():
    budget = 300.0
    stated = {
        "whittaker-laplace-bessel": (9, 1e-8),
        "gaussian-laplace-erfc-sign-corrected": (5, 1e-8),
        "bessel-laplace-transform": (6, 1e-8),
        "kernel-index-relation": (9, 1e-6),
        "kl-reduction": (6, 1e-10),
        "iterated-inversion-route": (2, 1e-3),
    }
    t0 = time.perf_counter()
    reports = canonical_suite()
    elapsed = time.perf_counter() - t0
    ok = all(r.passed for r in reports) and elapsed < budget
    for cid, (count, tol) in stated.items():
        mine = [r for r in reports if r.check_id == cid]
        ok &= len(mine) == count
        ok &= all(r.tolerance == tol for r in mine)
        ok &= len(CANONICAL_CASES[cid]) == count
    failed = sum(not r.passed for r in reports)
    verdict(4, "identity suite all-pass at stated tolerances", ok,
            f"{len(reports)} reports, {failed} failing, "
            f"{elapsed:.1f}s of {budget:.0f}s")


def test_criterion_5_bound_suite():
    reports = run_suite(["bessel-index-bound", "whittaker-index-bound"],
                        trials=100, seed=0)
    violations = sum(not r.passed for r in reports)
    ok = len(reports) == 200 and violations == 0
    ok &= all(r.tolerance == 1e-12 for r in reports)
    verdict(5, "index bounds hold on 100 seeded draws each", ok,
            f"{len(reports)} draws, {violations} violations")


def test_criterion_6_contour_quadrature_sanity():
    worst = 0.0
    for x in (0.5, 1.0, 2.0):
        for gamma in (0.5, 1.0, 2.0):
            def g(s):
                return np.exp(loggamma(s) - s * math.log(x))
            r = integrate_vertical_line(g, MellinBarnesSpec(gamma))
            worst = max(worst, abs(r.value - math.exp(-x)) / math.exp(-x))
    ok = worst <= 1e-10
    verdict(6, "vertical-line quadrature reproduces the exponential", ok,
            f"worst rel {worst:.2e} over 9 (x, abscissa) pairs")


def test_criterion_7_cli_reproducibility(tmp_path):
    def write_cfg(name, cfg):
        p = tmp_path / name
        p.write_text(json.dumps(cfg), encoding="utf-8")
        return str(p)

    def digest(path):
        return hashlib.sha256(path.read_bytes()).hexdigest()

    ok = True

    # replay from manifest must reproduce bytes
    cfg = write_cfg("eval.json", {
        "function": "W", "parameters": {"mu": 0.25, "tau": 1.0},
        "points": [0.5, 1.0, 2.0]})
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    ok &= cli_main(["eval", "--config", cfg, "--out", str(out1),
                    "--quiet"]) == 0
    manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    replay = write_cfg("replay.json", manifest["config"])
    ok &= cli_main(["eval", "--config", replay, "--out", str(out2),
                    "--quiet"]) == 0
    ok &= out1.read_bytes() == out2.read_bytes()
    ok &= manifest["outputs"][str(out1)] == digest(out1)

    # a second command family: kernel tables round-trip bytes through load
    table = tmp_path / "table.csv"
    build = write_cfg("build.json", {
        "action": "build", "kind": "erfc-cos", "mu": 0.0,
        "indices": [1, 2], "x_grid": [1.0, 2.0], "path": str(table)})
    ok &= cli_main(["kernel-table", "--config", build, "--quiet"]) == 0
    reload_out = tmp_path / "reloaded.csv"
    load = write_cfg("load.json", {"action": "load", "path": str(table)})
    ok &= cli_main(["kernel-table", "--config", load, "--out",
                    str(reload_out), "--quiet"]) == 0
    ok &= table.read_bytes() == reload_out.read_bytes()

    # exit-code contract: 2 usage, 3 numerical, 4 precision cap, 5 persistence
    bad_key = write_cfg("bad_key.json", {
        "mu": 0.0, "coefficients": [1.0], "x_grid": [1.0], "typo": True})
    ok &= cli_main(["forward", "--config", bad_key, "--quiet"]) == 2
    bad_point = write_cfg("bad_point.json", {
        "function": "K0", "points": [1.0, -1.0]})
    ok &= cli_main(["eval", "--config", bad_point, "--quiet"]) == 3
    over_cap = write_cfg("over_cap.json", {
        "mu": 0.0, "coefficients": [1.0], "n_range": [9, 9]})
    ok &= cli_main(["invert", "--config", over_cap, "--quiet"]) == 4
    table.write_text(table.read_text().replace("diwt-kernel-table",
                                               "diwt-kernel-tab1e"))
    ok &= cli_main(["kernel-table", "--config", load, "--quiet"]) == 5

    verdict(7, "CLI replays byte-identically and honors the exit-code "
               "contract", ok, "eval+kernel-table replayed, codes 2/3/4/5")
