"""Certify that Lambda_{d,q}(0) strictly dominates Lambda_{d,q}(k) for every k >= 1.

The procedure has three steps:

(a) a certified lower bound for Lambda^q(0) from the head integral alone;
(b) a cutoff K beyond which a closed-form upper bound already sits below (a);
(c) certified upper bounds (head + tail) for each 1 <= k <= K.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import bounds
from .enclosure import Enclosure, truncate
from .errors import DomainError
from .norms import (
    DEFAULT_R,
    DEFAULT_TOL,
    INF,
    LambdaResult,
    ProblemSpec,
    cutoff_for_tail,
    format_q,
    lambda_many,
    lambda_norm,
)
from .specfun import LANDAU_L, MAX_NU, surface_area

VERIFIED = "VERIFIED"
INCONCLUSIVE = "INCONCLUSIVE"
REFUTED = "REFUTED"

# largest degree scanned when the cutoff relies on the split bound
SPLIT_K_CAP = 10_000
# tail target used when the constant itself is wanted to ~1e-6
CONSTANT_TAIL = 1e-6
CONSTANT_TOL = 2.5e-7
# the closed-form scan gives up here; no step (c) is possible that far out anyway
SCAN_LIMIT = 100_000


class _NoCutoff(Exception):
    """Step (b) found no usable K at this cutoff R."""


@dataclass(frozen=True)
class HierarchyReport:
    d: int
    q: object
    lambda0_power_lo: float
    cutoff_K: int
    per_k: list
    verdict: str
    cutoff_R: float
    cutoff_K_strict: int = 0
    threshold_rounded: float = 0.0
    threshold_strict: float = 0.0
    bound_after_K: float = 0.0
    method: str = ""
    lambda0: LambdaResult | None = None
    results: list = field(default_factory=list, repr=False)
    offending: list = field(default_factory=list)
    notes: list = field(default_factory=list)


@dataclass(frozen=True)
class SharpConstantResult:
    d: int
    q: object
    constant: Enclosure
    argmax_k: int
    certified: bool
    lam: Enclosure | None = None
    notes: list = field(default_factory=list)


def _cutoff_scan(bound, threshold, k_start=1, k_stop=None):
    """Largest k with bound(k) > threshold, scanning upward until the first failure."""
    k = k_start
    last = k_start - 1
    while k_stop is None or k <= k_stop:
        if k > SCAN_LIMIT:
            raise _NoCutoff(f"bound still above {threshold:.6g} at k={SCAN_LIMIT}")
        if bound(k) > threshold:
            last = k
        elif k_stop is None:
            return last
        k += 1
    return last


def _split_limit(d, q):
    """Limit of the split bound as k -> inf, or None when it does not decay."""
    qf = float(q)
    e = d - 1 - qf * (d / 2 - 2 / 3)
    if abs(e + 1) < 1e-12:
        return LANDAU_L ** qf * math.log(0.75 * math.e)
    if e < -1:
        return 0.0
    return None


def cutoff(d: int, q, threshold_rounded: float, threshold_strict: float):
    """Step (b): (K_rounded, K_strict, bound at K_rounded + 1, method, notes)."""
    notes = []
    if q > bounds.hypothesis_exponent(d):
        def power(k):
            return bounds.u_bound_power(d, q, k)
        K = _cutoff_scan(power, threshold_rounded)
        K_strict = _cutoff_scan(power, threshold_strict)
        if not bounds.u_bound_decreasing_check(d, q, K + 1):
            raise DomainError(f"closed-form bound is not decreasing up to k={K + 1}")
        return K, K_strict, power(K + 1), "closed-form bound U_{d,q}(k)^q, decreasing in k", notes
    limit = _split_limit(d, q)
    if limit is None:
        raise DomainError(
            f"no decaying bound below Lambda^q(0) for d={d}, q={q}: "
            "exponent at or below 2d/(d-4/3) and the split bound does not decay in k"
        )
    if not limit < threshold_strict:
        raise _NoCutoff(f"split bound tends to {limit:.6f}, not below {threshold_strict:.6f}")

    def power(k):
        return bounds.split_bound_power(d, q, k)
    values = [power(k) for k in range(1, SPLIT_K_CAP + 2)]
    if values[-1] >= threshold_strict or values[-1] > threshold_rounded:
        raise _NoCutoff(f"split bound still above threshold at k={SPLIT_K_CAP + 1}")
    K = max((k for k, v in enumerate(values, 1) if v > threshold_rounded), default=0)
    K_strict = max((k for k, v in enumerate(values, 1) if v > threshold_strict), default=0)
    notes.append(
        f"split bound scanned for 1 <= k <= {SPLIT_K_CAP + 1}; its limit as k -> inf is "
        f"{limit:.6f}, below the threshold"
    )
    return K, K_strict, values[K], "split bound (power / Landau / decay regions)", notes


def verify_hierarchy(d: int, q, R: float = DEFAULT_R, tol: float = DEFAULT_TOL,
                     jobs: int = 1) -> HierarchyReport:
    """Run steps (a)-(c) and return a verdict for the pair (d, q)."""
    spec0 = ProblemSpec(d, q, 0)
    if not spec0.finite:
        raise DomainError("hierarchy verification needs a finite exponent; q = inf is exact")
    q = spec0.q

    # (a) the head integral alone bounds Lambda^q(0) from below
    res0 = lambda_norm(spec0, R, tol)
    lower = res0.head.lo
    threshold_rounded = truncate(res0.head.lo) - res0.tail_hi
    threshold_strict = lower

    # (b)
    k_cap = int(MAX_NU - spec0.alpha)
    try:
        K, K_strict, after, method, notes = cutoff(d, q, threshold_rounded, threshold_strict)
    except _NoCutoff as exc:
        return _inconclusive(spec0, res0, threshold_rounded, str(exc))
    if K > k_cap:
        return _inconclusive(spec0, res0, threshold_rounded,
                             f"cutoff K={K} needs Bessel orders beyond {MAX_NU}")

    # (c)
    results = lambda_many([spec0.with_k(k) for k in range(1, K + 1)], R, tol, jobs)
    per_k = [(r.spec.k, r.power.hi) for r in results]
    offending = [k for k, hi in per_k if not hi < lower]
    refuting = [r.spec.k for r in results if r.power.lo > res0.power.hi]

    if refuting:
        verdict = REFUTED
        offending = refuting
    elif not offending and after < lower:
        verdict = VERIFIED
    else:
        verdict = INCONCLUSIVE
    if q.denominator == 1 and q.numerator % 2 == 0:
        notes.append("q is an even integer, where constants are known to be the extremizers")
    return HierarchyReport(
        d=d, q=q, lambda0_power_lo=lower, cutoff_K=K, per_k=per_k, verdict=verdict,
        cutoff_R=res0.cutoff_R, cutoff_K_strict=K_strict, threshold_rounded=threshold_rounded,
        threshold_strict=threshold_strict, bound_after_K=after, method=method,
        lambda0=res0, results=results, offending=offending, notes=notes,
    )


def _inconclusive(spec0, res0, threshold_rounded, why):
    lower = res0.head.lo
    return HierarchyReport(
        d=spec0.d, q=spec0.q, lambda0_power_lo=lower, cutoff_K=None, per_k=[],
        verdict=INCONCLUSIVE, cutoff_R=res0.cutoff_R, cutoff_K_strict=None,
        threshold_rounded=threshold_rounded, threshold_strict=lower, bound_after_K=None,
        method="none", lambda0=res0, notes=[f"no usable cutoff at R={res0.cutoff_R:g}: {why}"],
    )


def sharp_constant(d: int, q, R: float = DEFAULT_R, tol: float = DEFAULT_TOL,
                   jobs: int = 1) -> SharpConstantResult:
    """(2 pi)^{d/2} max_k Lambda_{d,q}(k), certified when the maximum is at k = 0."""
    spec0 = ProblemSpec(d, q, 0)
    factor = (2 * math.pi) ** (d / 2)
    if not spec0.finite:
        area = surface_area(d)
        return SharpConstantResult(
            d, INF, Enclosure.from_mid_rad(area, 0.0), 0, True,
            Enclosure.point(area / factor),
            ["q = inf: the constant is the surface area of the unit sphere"],
        )
    report = verify_hierarchy(d, spec0.q, R, tol, jobs)
    R_big = cutoff_for_tail(spec0, CONSTANT_TAIL)
    lam = lambda_norm(spec0, R_big, CONSTANT_TOL).lam
    notes = [f"hierarchy verdict {report.verdict} (K={report.cutoff_K})",
             f"Lambda(0) from cutoff R={R_big:g}"] + list(report.notes)
    certified = report.verdict == VERIFIED
    if not certified:
        notes.append("maximum over k not certified; constant uses k = 0 as best effort")
    return SharpConstantResult(d, spec0.q, lam.scale(factor), 0, certified, lam, notes)


def describe(report: HierarchyReport) -> str:
    return (f"d={report.d} q={format_q(report.q)} K={report.cutoff_K} "
            f"verdict={report.verdict}")
