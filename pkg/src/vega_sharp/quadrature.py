"""Adaptive Gauss-Kronrod integration and 1-D maximisation with enclosures.

Integrands are vectorised callables.  Given an array of abscissae they return
either an array of values (treated as exact up to a rounding cushion) or a
pair ``(mid, rad)`` of arrays describing pointwise enclosures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .enclosure import EPS, Enclosure
from .errors import DomainError, ToleranceNotMet

# 21-point Kronrod extension of the 10-point Gauss rule (nonnegative half).
_XK = np.array([
    0.0,
    0.14887433898163121088, 0.29439286270146019813, 0.43339539412924719080,
    0.56275713466860468334, 0.67940956829902440623, 0.78081772658641689706,
    0.86506336668898451073, 0.93015749135570822600, 0.97390652851717172008,
    0.99565716302580808074,
])
_WK = np.array([
    0.14944555400291690566,
    0.14773910490133849137, 0.14277593857706008080, 0.13470921731147332593,
    0.12349197626206585108, 0.10938715880229764190, 0.093125454583697605535,
    0.075039674810919952767, 0.054755896574351996031, 0.032558162307964727479,
    0.011694638867371874278,
])
# Gauss weights on the odd-indexed Kronrod nodes above
_WG = np.array([
    0.29552422471475287017, 0.26926671930999635509, 0.21908636251598204400,
    0.14945134915058059315, 0.066671344308688137594,
])

NODES = np.concatenate([-_XK[:0:-1], _XK])
KRONROD_W = np.concatenate([_WK[:0:-1], _WK])
GAUSS_W = np.zeros(21)
GAUSS_W[10 + np.arange(1, 11, 2)] = _WG
GAUSS_W[10 - np.arange(1, 11, 2)] = _WG

MAX_DEPTH = 40
# extra pending panels allowed beyond four per initial panel
PANEL_BUDGET = 100_000
# the rule difference underestimates the error on rough panels
_INFLATE = 2.0
_CHUNK = 20000
_INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class Panel:
    a: float
    b: float
    value: Enclosure
    depth: int


@dataclass(frozen=True)
class QuadratureResult:
    value: Enclosure
    panels_used: int
    requested_tol: float
    panels: tuple = ()


def _evaluate(f, x):
    out = f(x)
    if isinstance(out, tuple):
        mid, rad = (np.asarray(v, dtype=float) for v in out)
    else:
        mid = np.asarray(out, dtype=float)
        rad = np.zeros_like(mid)
    mid = np.broadcast_to(mid, x.shape)
    rad = np.broadcast_to(rad, x.shape)
    if not (np.all(np.isfinite(mid)) and np.all(np.isfinite(rad))):
        raise DomainError("integrand returned a non-finite value")
    return mid, rad + 4 * EPS * np.abs(mid)


def _gk_panels(f, a, b):
    """Apply the GK21 pair to each panel [a_i, b_i]; returns (value, error)."""
    if a.size > _CHUNK:
        parts = [_gk_panels(f, a[i:i + _CHUNK], b[i:i + _CHUNK])
                 for i in range(0, a.size, _CHUNK)]
        return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    x = centre[:, None] + half[:, None] * NODES[None, :]
    mid, rad = _evaluate(f, x)
    kron = half * (mid @ KRONROD_W)
    gauss = half * (mid @ GAUSS_W)
    spread = half * (rad @ KRONROD_W)
    rounding = 8 * EPS * half * (np.abs(mid) @ KRONROD_W)
    err = _INFLATE * np.abs(kron - gauss) + spread + rounding
    return kron, err


def integrate(f, a: float, b: float, tol: float = 1e-9, breakpoints=None,
              max_depth: int = MAX_DEPTH) -> QuadratureResult:
    """Integrate ``f`` over [a, b] to absolute tolerance ``tol``.

    The global tolerance is shared among panels in proportion to their
    length, so the returned enclosure has width at most ``2 * tol``.
    ``breakpoints`` are forced panel boundaries (e.g. kinks of the integrand).
    Raises ``ToleranceNotMet`` if some panel still fails at ``max_depth``,
    or once the number of pending panels outgrows a budget of
    ``4 * len(edges) + PANEL_BUDGET`` (tolerances below rounding level).
    """
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError(f"need finite a < b, got [{a}, {b}]")
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    edges = [a]
    if breakpoints is not None:
        edges.extend(float(c) for c in np.sort(np.asarray(breakpoints, dtype=float)) if a < c < b)
    edges.append(b)
    edges = np.unique(np.asarray(edges))
    lo_pts, hi_pts = edges[:-1], edges[1:]
    depth = np.zeros(lo_pts.size, dtype=int)
    density = tol / (b - a)
    budget = 4 * lo_pts.size + PANEL_BUDGET

    done_a, done_b, done_v, done_e, done_d = [], [], [], [], []
    failed = False
    while lo_pts.size:
        value, err = _gk_panels(f, lo_pts, hi_pts)
        ok = err <= density * (hi_pts - lo_pts)
        stuck = ~ok & (depth >= max_depth)
        if 2 * np.count_nonzero(~ok) > budget:
            stuck = ~ok
        accept = ok | stuck
        failed |= bool(stuck.any())
        done_a.append(lo_pts[accept])
        done_b.append(hi_pts[accept])
        done_v.append(value[accept])
        done_e.append(err[accept])
        done_d.append(depth[accept])
        split = ~accept
        mids = 0.5 * (lo_pts[split] + hi_pts[split])
        lo_pts = np.concatenate([lo_pts[split], mids])
        hi_pts = np.concatenate([mids, hi_pts[split]])
        depth = np.concatenate([depth[split], depth[split]]) + 1

    pa = np.concatenate(done_a)
    order = np.argsort(pa, kind="stable")
    pa = pa[order]
    pb = np.concatenate(done_b)[order]
    pv = np.concatenate(done_v)[order]
    pe = np.concatenate(done_e)[order]
    pd = np.concatenate(done_d)[order]
    total = Enclosure(math.fsum(pv - pe), math.fsum(pv + pe)).widened()
    panels = tuple(
        Panel(float(x0), float(x1), Enclosure(v - e, v + e), int(dd))
        for x0, x1, v, e, dd in zip(pa, pb, pv, pe, pd)
    )
    result = QuadratureResult(total, len(panels), tol, panels)
    if failed:
        raise ToleranceNotMet(
            f"tolerance {tol:g} not met on [{a}, {b}] within depth {max_depth} "
            f"and {budget} pending panels", result
        )
    return result


def _golden(f, a, b, tol):
    """Golden-section search for a maximiser of scalar ``f`` on [a, b]."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    # the ends of the bracket are candidates too (maximum at a boundary);
    # ties go to the left end so flat maxima at the origin report 0
    best = max([(f(a), a), (fc, c), (fd, d), (f(b), b)], key=lambda t: t[0])
    return best[1]


def maximize(f, a: float, b: float, tol: float = 1e-10, step: float = math.pi / 4,
             candidates: int = 6):
    """Locate the maximum of ``f`` on [a, b].

    A grid of spacing ``step`` picks the most promising samples, then golden
    section refines a two-step bracket around each.  Returns ``(argmax,
    Enclosure)`` where the enclosure is ``f``'s enclosure at the argmax.
    """
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    n = max(2, int(math.ceil((b - a) / step)) + 1)
    grid = np.linspace(a, b, n)
    mid, _ = _evaluate(f, grid)
    h = grid[1] - grid[0]

    def scalar(x):
        return float(_evaluate(f, np.array([x]))[0][0])

    best_x, best_v = None, -math.inf
    for i in np.argsort(mid)[::-1][:candidates]:
        lo, hi = max(a, grid[i] - h), min(b, grid[i] + h)
        x = _golden(scalar, lo, hi, tol)
        v = scalar(x)
        if v > best_v:
            best_x, best_v = x, v
    m, r = _evaluate(f, np.array([best_x]))
    value = Enclosure.from_mid_rad(float(m[0]), float(r[0]))
    # a flat maximum at an endpoint is only resolved to ~sqrt(eps); snap to it
    # when the endpoint value cannot be told apart from the best one
    for end in (a, b):
        if abs(best_x - end) <= 1e-7 * max(1.0, abs(end)):
            me, re = _evaluate(f, np.array([end]))
            end_value = Enclosure.from_mid_rad(float(me[0]), float(re[0]))
            if end_value.intersects(value):
                return end, end_value.hull(value)
    return best_x, value
