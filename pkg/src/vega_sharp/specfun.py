"""Gamma family, Bessel J of nonnegative real order, and pointwise Bessel bounds.

Every Bessel value comes with an absolute error radius.  The radius collects
analytic truncation bounds (series tail, Hankel remainder) together with
rounding cushions propagated through the recurrences; see ``bessel_j_array``.
"""
from __future__ import annotations

import math

import numpy as np

from .enclosure import EPS, Enclosure
from .errors import DomainError, RangeError

LD = np.longdouble
LD_EPS = float(np.finfo(np.longdouble).eps)

# Upper bound for sup |r^(1/3) J_nu(r)|; Landau's value 0.785746... rounded up.
LANDAU_L = 0.785747

MAX_R = 1.0e6
MAX_NU = 500.0
# Below this radius the ascending series is summed in extended precision;
# above it Hankel's expansion for orders < 2 is accurate to ~1e-14.
SERIES_R = 14.0
_HANKEL_TERMS = 60
_TINY = 1e-300


def _check_positive(x, name="x"):
    if not (isinstance(x, (int, float, np.floating, np.integer)) and math.isfinite(x)) or x <= 0:
        raise DomainError(f"{name} must be a positive finite real, got {x!r}")


def gamma(x: float) -> float:
    _check_positive(x)
    try:
        return math.gamma(x)
    except OverflowError as exc:
        raise RangeError(f"gamma({x}) overflows double precision") from exc


def lgamma(x: float) -> float:
    _check_positive(x)
    return math.lgamma(x)


_lgamma_ufunc = np.frompyfunc(math.lgamma, 1, 1)


def lgamma_array(x) -> np.ndarray:
    """Vectorised log-gamma for positive arguments."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or not np.all(np.isfinite(x)):
        raise DomainError("lgamma_array needs positive finite arguments")
    return _lgamma_ufunc(x).astype(float)


def stirling_bounds(x: float) -> Enclosure:
    """Enclosure of gamma(x) from Stirling's formula with 1/(12x+1) < mu(x) < 1/(12x)."""
    _check_positive(x)
    base = 0.5 * math.log(2 * math.pi) + (x - 0.5) * math.log(x) - x
    try:
        lo = math.exp(base + 1.0 / (12 * x + 1))
        hi = math.exp(base + 1.0 / (12 * x))
    except OverflowError as exc:
        raise RangeError(f"Stirling bounds for x={x} overflow") from exc
    # exp/log rounding grows with |base|
    slack = (abs(base) + 4.0) * 4 * EPS
    return Enclosure(lo * (1 - slack), hi * (1 + slack))


def surface_area(d: int) -> float:
    """Area of the unit sphere S^{d-1} in R^d: 2 pi^{d/2} / Gamma(d/2)."""
    if int(d) != d or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d!r}")
    return math.exp(math.log(2) + 0.5 * d * math.log(math.pi) - math.lgamma(d / 2))


def landau_constant() -> float:
    return LANDAU_L


def power_bound(nu: float, r: float) -> float:
    """r^nu / (2^nu Gamma(nu+1)), an upper bound for |J_nu(r)|."""
    if nu < 0:
        raise DomainError(f"order must be nonnegative, got {nu}")
    _check_positive(r, "r")
    if nu == 0:
        return 1.0
    log_val = nu * math.log(r / 2) - math.lgamma(nu + 1)
    try:
        return math.exp(log_val)
    except OverflowError as exc:
        raise RangeError(f"power bound overflows for nu={nu}, r={r}") from exc


def krasikov_bound(nu: float, r: float) -> float:
    """|J_nu(r)| <= r^{-1/2}, valid for nu >= 1/2 and r > 3 nu / 2."""
    if nu < 0.5 or not r > 1.5 * nu:
        raise DomainError(
            f"Krasikov bound requires nu >= 1/2 and r > 3*nu/2 (got nu={nu}, r={r})"
        )
    return r ** -0.5


def check_order(nu: float) -> float:
    nu = float(nu)
    if not math.isfinite(nu) or nu < 0:
        raise DomainError(f"Bessel order must be a nonnegative real, got {nu}")
    if nu > MAX_NU:
        raise RangeError(f"Bessel order {nu} exceeds supported maximum {MAX_NU}")
    return nu


# ---------------------------------------------------------------------------
# Bessel J


def _prefactor(nu: float, r: np.ndarray):
    """(r/2)^nu / Gamma(nu+1) and its relative error bound."""
    if nu == 0:
        return np.ones_like(r), 0.0
    if nu < 170:
        with np.errstate(under="ignore"):
            out = np.power(r / 2, nu) / math.gamma(nu + 1)
        return out, 8 * EPS
    with np.errstate(divide="ignore", under="ignore"):
        logs = nu * np.log(r / 2) - math.lgamma(nu + 1)
        out = np.exp(logs)
    return out, (np.abs(logs) + 8) * 2 * EPS


def _series_sum(nu: float, r: np.ndarray):
    """Sum of the ascending series without its (r/2)^nu / Gamma(nu+1) prefactor.

    Computed in extended precision.  Returns (sum, absolute error, terms used).
    Once the term ratio drops below 1/2 the remaining terms alternate and
    decrease, so the tail is bounded by the next term.
    """
    x = (LD(0.5) * r.astype(LD)) ** 2
    term = np.ones_like(x)
    total = np.ones_like(x)
    total_abs = np.ones_like(x)
    tail = np.zeros_like(x)
    active = np.ones(r.shape, dtype=bool)
    n = 0
    nu_ld = LD(nu)
    while active.any():
        n += 1
        term = -term * x / (LD(n) * (nu_ld + n))
        total = np.where(active, total + term, total)
        total_abs = np.where(active, total_abs + abs(term), total_abs)
        ratio = x / (LD(n + 1) * (nu_ld + n + 1))
        done = active & (ratio < 0.5) & (abs(term) * ratio <= LD_EPS * total_abs)
        tail = np.where(done, abs(term) * ratio, tail)
        active &= ~done
        if n > 4000:
            raise RangeError("power series failed to converge")
    rounding = (4 * n + 8) * LD_EPS * total_abs
    return total.astype(float), (tail + rounding).astype(float) + EPS * np.abs(total.astype(float))


def _series(nu: float, r: np.ndarray):
    """J_nu(r) from the ascending series; returns (value, err)."""
    total, total_err = _series_sum(nu, r)
    pref, pref_rel = _prefactor(nu, r)
    value = pref * total
    err = pref * total_err + (pref_rel + 2 * EPS) * np.abs(value)
    # (r/2)^nu may underflow for tiny r and large nu
    err += _TINY
    return value, err


def _hankel(mu: float, r: np.ndarray):
    """J_mu and Y_mu from Hankel's expansion (mu < 2), with remainder bounds.

    For real argument and 2k > mu - 1/2 the remainder of each of P, Q is no
    larger than the first neglected term, so truncating just before the
    smallest term is safe.
    """
    m4 = 4.0 * mu * mu
    P = np.ones_like(r)
    Q = np.zeros_like(r)
    omitted_p = np.zeros_like(r)
    omitted_q = np.zeros_like(r)
    term = np.ones_like(r)
    prev = np.full_like(r, np.inf)
    active = np.ones(r.shape, dtype=bool)
    for k in range(1, _HANKEL_TERMS + 1):
        term = term * (m4 - (2 * k - 1) ** 2) / (8.0 * k * r)
        mag = np.abs(term)
        stop = active & ((mag >= prev) | (mag < 1e-18) | (k == _HANKEL_TERMS))
        # term k is the first omitted term of its own series; the other
        # series first omits term k + 1
        nxt = mag * np.abs((m4 - (2 * k + 1) ** 2) / (8.0 * (k + 1) * r))
        own, other = (omitted_p, omitted_q) if k % 2 == 0 else (omitted_q, omitted_p)
        own[stop] = mag[stop]
        other[stop] = nxt[stop]
        active &= ~stop
        sign = 1.0 if (k // 2) % 2 == 0 else -1.0
        if k % 2 == 0:
            P = np.where(active, P + sign * term, P)
        else:
            Q = np.where(active, Q + sign * term, Q)
        prev = mag
        if not active.any():
            break
    phase = (0.5 * mu + 0.25) * math.pi
    cp, sp = math.cos(phase), math.sin(phase)
    cr, sr = np.cos(r), np.sin(r)
    cos_chi = cr * cp + sr * sp
    sin_chi = sr * cp - cr * sp
    amp = np.sqrt(2.0 / (math.pi * r))
    J = amp * (P * cos_chi - Q * sin_chi)
    Y = amp * (P * sin_chi + Q * cos_chi)
    err = amp * (omitted_p + omitted_q + 32 * EPS * (np.abs(P) + np.abs(Q)))
    return J, Y, err


def _forward(nu: float, r: np.ndarray):
    """Hankel seeds at orders f, f+1 then upward recurrence; needs nu <= r.

    With J and Y both recurred, the Green's function of the recurrence is
    bounded by pi r max_n (J_n^2 + Y_n^2), which scales every injected error.
    """
    m = int(math.floor(nu))
    f = nu - m
    J0, Y0, e0 = _hankel(f, r)
    if m == 0:
        return J0, e0
    J1, Y1, e1 = _hankel(f + 1, r)
    injected = e0 + e1
    msq = np.maximum(J0**2 + Y0**2, J1**2 + Y1**2)
    order = f + 1
    for _ in range(m - 1):
        c = 2.0 * order / r
        J2 = c * J1 - J0
        Y2 = c * Y1 - Y0
        injected = injected + 3 * EPS * (np.abs(c * J1) + np.abs(J0))
        msq = np.maximum(msq, J2**2 + Y2**2)
        J0, J1, Y0, Y1 = J1, J2, Y1, Y2
        order += 1
    green = math.pi * r * msq * 1.02
    return J1, green * injected


def _backward(nu: float, r: np.ndarray):
    """Downward recurrence from series seeds at a high order; needs nu > r.

    J_n(r) > 0 for n > r and the recurrence is stable downward there, so the
    relative error stays at the seed level times a modest growth factor
    (bounded by ~r^(1/3) near the turning point).  The seeds are used without
    their common prefactor, which is applied in log space at the end, and the
    running pair is renormalised to keep it in range.
    """
    rmax = float(r.max())
    # seed series cancellation grows like exp(r^2 / (2 * order))
    extra = max(0, int(math.ceil(max(1.5 * rmax + 10, rmax * rmax / 14) - nu)))
    top = nu + extra
    s1, e1 = _series_sum(top + 1, r)
    s0, e0 = _series_sum(top, r)
    rel = e1 / np.abs(s1) + e0 / np.abs(s0)
    hi = s1 * (0.5 * r) / (top + 1)
    lo = s0
    log_scale = np.zeros_like(r)
    order = top
    for _ in range(extra):
        c = 2.0 * order / r
        hi, lo = lo, c * lo - hi
        order -= 1
        big = np.abs(lo) > 1e200
        if big.any():
            f = np.where(big, 1.0 / np.abs(lo), 1.0)
            hi, lo = hi * f, lo * f
            log_scale -= np.log(f)
    log_pref = top * np.log(0.5 * r) - math.lgamma(top + 1)
    with np.errstate(under="ignore", divide="ignore"):
        value = np.sign(lo) * np.exp(np.log(np.abs(lo)) + log_scale + log_pref)
    growth = 4.0 * np.cbrt(r) + 2.0
    exp_rel = (np.abs(log_scale) + np.abs(log_pref) + 8) * 2 * EPS
    err = np.abs(value) * (growth * (rel + 4 * (extra + 2) * EPS) + exp_rel) + _TINY
    return value, err


def bessel_j_array(nu: float, r) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised J_nu(r) returning (value, absolute error radius)."""
    nu = check_order(nu)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if r.size and (np.any(~np.isfinite(r)) or r.min() < 0):
        raise DomainError("Bessel argument must be a nonnegative real")
    if r.size and r.max() > MAX_R:
        raise RangeError(f"Bessel argument {r.max()} exceeds supported maximum {MAX_R}")
    value = np.zeros_like(r)
    err = np.zeros_like(r)
    zero = r == 0
    small = ~zero & (r <= SERIES_R)
    large = r > SERIES_R
    back = large & (r < nu)
    fwd = large & (r >= nu)
    if zero.any():
        value[zero] = 1.0 if nu == 0 else 0.0
    if small.any():
        value[small], err[small] = _series(nu, r[small])
    if back.any():
        value[back], err[back] = _backward(nu, r[back])
    if fwd.any():
        value[fwd], err[fwd] = _forward(nu, r[fwd])
    return value, err


def bessel_j(nu: float, r: float) -> Enclosure:
    if not math.isfinite(r) or r < 0:
        raise DomainError(f"Bessel argument must be a nonnegative real, got {r}")
    value, err = bessel_j_array(nu, [r])
    if r == 0:
        return Enclosure.point(float(value[0]))
    return Enclosure.from_mid_rad(float(value[0]), float(err[0]))


def normalized_bessel_array(nu: float, alpha: float, r) -> tuple[np.ndarray, np.ndarray]:
    """r^{-alpha} J_nu(r) with its error radius; the r -> 0+ limit is used at r = 0."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    value, err = bessel_j_array(nu, r)
    out = np.empty_like(value)
    rad = np.empty_like(err)
    pos = r > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = r[pos] ** (-alpha)
    out[pos] = value[pos] * scale
    rad[pos] = err[pos] * scale
    zero = ~pos
    if zero.any():
        if alpha == nu:
            out[zero] = math.exp(-nu * math.log(2) - math.lgamma(nu + 1))
        elif alpha < nu:
            out[zero] = 0.0
        else:
            raise DomainError("r^{-alpha} J_nu(r) is unbounded at 0 when alpha > nu")
        rad[zero] = 4 * EPS * np.abs(out[zero])
    return out, rad
