"""Acceptance criteria, one test (and one printed PASS/FAIL line) per criterion."""
import math
import os
import time
from fractions import Fraction

import numpy as np
import pytest

from vega_sharp import bounds, specfun
from vega_sharp.enclosure import Enclosure
from vega_sharp.norms import (
    ProblemSpec,
    lambda4_closed,
    lambda_head,
    lambda_many,
    lambda_norm,
    lambda_tail_bound,
    quadratic_minorant,
)
from vega_sharp.published import HEADS_D4, HEADS_D5, LAMBDA6_26, Q0_TABLE
from vega_sharp.verify import VERIFIED, cutoff, verify_hierarchy

JOBS = os.cpu_count() or 1


@pytest.fixture
def report(capsys):
    def emit(label, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}" + (f": {detail}" if detail else ""))
        assert ok, f"{label}: {detail}"
    return emit


def test_01_head_d4(report):
    t0 = time.perf_counter()
    head = lambda_head(ProblemSpec(4, "10/3", 0), 200)
    elapsed = time.perf_counter() - t0
    ok = 0.257 <= head.lo and head.hi < 0.258 and elapsed < 5
    report("1 head integral d=4 in [0.257, 0.258), < 5 s", ok, f"{head}, {elapsed:.2f} s")


def test_02_tail_exactness(report):
    bad = []
    for d, q in [(4, "10/3"), (5, 3)]:
        k = 0
        # every k whose order satisfies the Krasikov hypothesis at R = 200
        while 200 > 1.5 * ProblemSpec(d, q, k).nu:
            if lambda_tail_bound(ProblemSpec(d, q, k), 200) != 0.005:
                bad.append((d, k))
            k += 1
    report("2 tail bound = 0.005 exactly for (4,10/3) and (5,3)", not bad, f"mismatches {bad}")


def _cutoff_K(d, q):
    rep = verify_hierarchy(d, q, jobs=JOBS)
    K, *_ = cutoff(d, Fraction(q), rep.threshold_rounded, rep.threshold_strict)
    return K


def test_03a_cutoff_d4(report):
    K = _cutoff_K(4, "10/3")
    report("3a cutoff K = 28 for (4,10/3)", K == 28, f"K = {K}")


def test_03b_cutoff_d5(report):
    K = _cutoff_K(5, "3")
    report("3b cutoff K = 28 for (5,3)", K == 28, f"K = {K}")


def test_04_per_k_tables(report):
    t0 = time.perf_counter()
    misses = []
    for d, q, values in [(4, "10/3", HEADS_D4), (5, 3, HEADS_D5)]:
        specs = [ProblemSpec(d, q, k) for k in range(1, len(values) + 1)]
        for res, v in zip(lambda_many(specs, 200, jobs=JOBS), values):
            # the enclosure must meet [v, v + 0.001)
            if not (res.head.hi >= v and res.head.lo < v + 0.001):
                misses.append((d, res.spec.k, v, str(res.head)))
    elapsed = time.perf_counter() - t0
    ok = not misses and elapsed < 180
    report("4 per-k head tables (28 + 28 values), < 3 min", ok,
           f"misses {misses}, {elapsed:.1f} s")


def test_05_verdicts(report):
    verdicts = {(d, str(q)): verify_hierarchy(d, q, jobs=JOBS).verdict
                for d, q in [(4, "10/3"), (5, 3), (3, 4), (2, 6)]}
    ok = all(v == VERIFIED for v in verdicts.values())
    report("5 VERIFIED for (4,10/3), (5,3), (3,4), (2,6)", ok, str(verdicts))


def test_06_lambda6_d2(report):
    spec = ProblemSpec(2, 6, 0)
    res = lambda_norm(spec, R=1e6, tol=2.5e-7)
    ok = res.power.contains(LAMBDA6_26) and res.power.width <= 2e-6
    report("6 Lambda^6_{2,6}(0) contains 0.3368280, width <= 2e-6", ok,
           f"{res.power}, width {res.power.width:.2e}")


def test_07_closed_form_oracle(report):
    misses = [d for d in range(3, 9) if not lambda_norm(ProblemSpec(d, 4, 0)).power.contains(lambda4_closed(d))]
    d4 = abs(lambda4_closed(4) - 1 / math.pi**2)
    report("7 lambda4_closed(d) inside power enclosure d=3..8; d=4 is 1/pi^2",
           not misses and d4 <= 1e-10, f"misses {misses}, |d=4 - 1/pi^2| = {d4:.1e}")


def test_08_q0_table(report):
    t0 = time.perf_counter()
    rows = []
    for d, value in sorted(Q0_TABLE.items()):
        upper = bounds.q0_upper(d).q0_upper
        rows.append((d, upper, upper <= value + 0.02, bounds.threshold_residual(d, value) >= 0))
    elapsed = time.perf_counter() - t0
    ok = all(a and b for _, _, a, b in rows) and elapsed < 10
    detail = ", ".join(f"d={d}: {u:.4f}" for d, u, _, _ in rows) + f"; {elapsed:.1f} s"
    report("8 q0_upper(d) <= table + 0.02 and residual >= 0, < 10 s", ok, detail)


def test_09a_asymptotic_d100(report):
    (_, ratio), = bounds.q0_asymptotic_check([100])
    report("9a q0_upper(100)/(100 log 100) < 0.75", ratio < 0.75, f"{ratio:.4f}")


def test_09b_asymptotic_decreasing(report):
    ratios = bounds.q0_asymptotic_check([50, 100, 200, 500, 1000])
    values = [r for _, r in ratios]
    ok = all(a > b for a, b in zip(values, values[1:]))
    report("9b q0_upper(d)/(d log d) decreasing over d = 50..1000", ok,
           ", ".join(f"d={d}: {r:.4f}" for d, r in ratios))


def _hi_abs(nu, rs):
    val, err = specfun.bessel_j_array(nu, rs)
    return np.abs(val) + err


def test_10a_pointwise_suites(report):
    failures = []
    L = specfun.landau_constant()
    rs = np.linspace(0.05, 60, 1200)
    for nu in np.arange(0, 30.5, 0.5):
        hi = _hi_abs(nu, rs)
        if not np.all(hi <= np.array([specfun.power_bound(nu, r) for r in rs]) * (1 + 1e-12)):
            failures.append(("power", nu))
        if not np.all(np.cbrt(rs) * hi <= L):
            failures.append(("landau", nu))
    for nu in np.arange(0.5, 50.5, 0.5):
        rk = np.linspace(1.5 * nu, 1.5 * nu + 200, 2001)[1:]
        hi = _hi_abs(nu, rk)
        if not np.all(hi <= rk**-0.5):
            failures.append(("krasikov", nu))
        if not np.all(np.cbrt(rk) * hi <= L):
            failures.append(("landau-far", nu))
    for nu in np.arange(0, 20.5, 0.5):
        rm = np.linspace(1e-6, 2 * math.sqrt(nu + 1), 400)
        val, err = specfun.bessel_j_array(nu, rm)
        norm = (val - err) * math.gamma(nu + 1) * (rm / 2) ** (-nu)
        if not np.all([quadratic_minorant(nu, r) <= n + 1e-12 for r, n in zip(rm, norm)]):
            failures.append(("minorant", nu))
    for x in np.geomspace(1e-3, 150, 500):
        if not specfun.stirling_bounds(x).contains(specfun.gamma(x)):
            failures.append(("stirling", x))
    for x in np.arange(0.5, 100.5, 0.5):
        if abs(specfun.gamma(x + 1) / (x * specfun.gamma(x)) - 1) > 1e-13:
            failures.append(("gamma recurrence", x))
    rl = np.geomspace(0.1, 400, 200)
    for nu in np.arange(1, 40.5, 0.5):
        jm, j0, jp = (specfun.bessel_j_array(nu + s, rl)[0] for s in (-1, 0, 1))
        if not np.all(np.abs(jm + jp - 2 * nu / rl * j0) <= 1e-9 * np.maximum(1, np.abs(j0))):
            failures.append(("recurrence", nu))
    report("10a Krasikov, Landau, power, minorant, Stirling, recurrence sweeps",
           not failures, f"failures {failures[:10]}")


def test_10b_decreasing_checks(report):
    failures = []
    for d in range(2, 11):
        for q in sorted({bounds.tomas_stein(d), Fraction(4), Fraction(6), "inf"}, key=str):
            try:
                if not bounds.u_bound_decreasing_check(d, q, 200):
                    failures.append((d, str(q), "not decreasing"))
            except ValueError as exc:
                failures.append((d, str(q), str(exc)))
    report("10b u_bound_decreasing_check up to k=200 on {2..10} x {TS, 4, 6, inf}",
           not failures, f"failures {failures}")


def test_11_consistency(report):
    beta_err = max(abs(bounds.beta_gap(d) - bounds.u_bound(d, "inf", 1) / bounds.u_bound(d, "inf", 0))
                   for d in range(2, 51))
    u0_err = max(abs(bounds.u_bound(d, "inf", 0) - 1 / (2 ** (d / 2 - 1) * math.gamma(d / 2)))
                 for d in range(2, 51))
    far = abs(bounds.beta_gap(10**4) - math.exp(-1))
    ok = beta_err <= 1e-12 and u0_err <= 1e-12 and far <= 0.01
    report("11 beta identity, U(d,inf,0) closed form, beta(1e4) near 1/e", ok,
           f"{beta_err:.1e}, {u0_err:.1e}, {far:.4f}")


def test_enclosure_type_in_use():
    assert isinstance(lambda_head(ProblemSpec(4, "10/3", 0), 200), Enclosure)
