"""Closed-form upper bounds for Lambda_{d,q}(k) and the q0 threshold search.

Everything gamma-heavy is evaluated in log space and exponentiated last.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .errors import DomainError
from .norms import INF, log_lambda4_closed, parse_q
from .specfun import LANDAU_L

LOG_L = math.log(LANDAU_L)
LOG2 = math.log(2.0)
# Lambda_{2,6}(0)^6 = 0.3368280 +- 5e-7; the threshold uses the upper end
LAMBDA6_26 = 0.3368280
LAMBDA6_26_HI = 0.3368285


def hypothesis_exponent(d: int) -> Fraction:
    """2d/(d - 4/3): the closed-form bound needs q strictly above this."""
    return Fraction(6 * d, 3 * d - 4)


def tomas_stein(d: int) -> Fraction:
    return Fraction(2 * (d + 1), d - 1)


def _check_d(d):
    if isinstance(d, bool) or int(d) != d or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d}")
    return int(d)


def _check_u_args(d, q, k):
    d = _check_d(d)
    q = parse_q(q)
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DomainError(f"degree must be an integer >= 0, got {k}")
    if q != INF and not q > hypothesis_exponent(d):
        raise DomainError(
            f"closed-form bound requires 2d/(d-4/3) < q; got d={d}, q={q} "
            f"<= {hypothesis_exponent(d)}"
        )
    return d, q, int(k)


def log_u_bound(d: int, q, k: int) -> float:
    """log U_{d,q}(k)."""
    d, q, k = _check_u_args(d, q, k)
    h = d / 2
    A = h + k - 2 / 3
    dq = 0.0 if q == INF else d / float(q)
    s = -h + 2 / 3 + dq
    val = ((k + dq) / A) * LOG_L + ((h + k - 1) * s / A) * LOG2 + (s / A) * math.lgamma(h + k)
    if q != INF:
        qf = float(q)
        val += math.log(1 / (k * qf + d) + 1 / (qf * (h - 2 / 3) - d)) / qf
    return val


def u_bound(d: int, q, k: int) -> float:
    """Closed-form upper bound U_{d,q}(k) for Lambda_{d,q}(k), decreasing in k."""
    return math.exp(log_u_bound(d, q, k))


def u_bound_power(d: int, q, k: int) -> float:
    """U^q for finite q (comparable with Lambda^q); U itself for q = inf."""
    q = parse_q(q)
    if q == INF:
        return u_bound(d, q, k)
    return math.exp(float(q) * log_u_bound(d, q, k))


def gamma_power_check(x_max: float) -> bool:
    """Gamma(x) < x^{x - 2/3} on half-integers in (1, x_max]; equality holds at x = 1."""
    xs = np.arange(1.5, x_max + 0.25, 0.5)
    return bool(np.all(gammaln(xs) < (xs - 2 / 3) * np.log(xs)))


def u_bound_decreasing_check(d: int, q, k_max: int) -> bool:
    """True iff U(k) > U(k+1) for 0 <= k < k_max and the gamma inequality holds."""
    logs = [log_u_bound(d, q, k) for k in range(k_max + 1)]
    strictly = all(a > b for a, b in zip(logs, logs[1:]))
    return strictly and gamma_power_check(k_max + d / 2)


def split_bound_power(d: int, q, k: int) -> float:
    """Upper bound for Lambda_{d,q}(k)^q valid for any admissible finite q and k >= 1.

    The integral is split at a <= b: the power bound |J_nu(r)| <= (r/2)^nu /
    Gamma(nu+1) on [0, a], Landau's bound |J_nu(r)| <= L r^{-1/3} on [a, b],
    and |J_nu(r)| <= r^{-1/2} beyond b = max(3 nu / 2, L^{-6}).
    """
    d = _check_d(d)
    q = parse_q(q)
    if q == INF:
        raise DomainError("split bound is for finite q")
    if not q > Fraction(2 * d, d - 1):
        raise DomainError(f"exponent q={q} must exceed 2d/(d-1)")
    if k < 1:
        raise DomainError("split bound is stated for k >= 1")
    qf = float(q)
    nu = d / 2 - 1 + k
    b = max(1.5 * nu, LANDAU_L ** -6)
    log_power = LOG_L + nu * LOG2 + math.lgamma(nu + 1)
    a = min(b, math.exp(log_power / (nu + 1 / 3)))
    m = k * qf + d
    head = math.exp(m * math.log(a) - math.log(m) - qf * (nu * LOG2 + math.lgamma(nu + 1)))
    e = d - 1 - qf * (d / 2 - 2 / 3)
    if abs(e + 1) < 1e-12:
        middle = math.log(b / a)
    else:
        middle = (b ** (e + 1) - a ** (e + 1)) / (e + 1)
    middle *= LANDAU_L ** qf
    c = qf * (d - 1) / 2 - d
    tail = b ** (-c) / c
    return head + middle + tail


def log_beta(d: int) -> float:
    d = _check_d(d)
    return (6 * LOG_L + (3 * d - 6) * LOG2 + 6 * math.lgamma(d / 2)
            - (3 * d - 4) * math.log(d)) / (3 * d + 2)


def beta_gap(d: int) -> float:
    """beta(d) = U_{d,inf}(1) / U_{d,inf}(0), the explicit gap ratio."""
    return math.exp(log_beta(d))


def _log_lhs(d: int) -> float:
    if d == 2:
        return math.log(LAMBDA6_26_HI / 2)
    h = d / 2
    return (
        log_lambda4_closed(d)
        + 4 * ((h - 1) * LOG2 + math.lgamma(h))
        - ((d - 1) * LOG2 + h * math.log(h) + math.lgamma(h))
    )


def _log_rhs(d: int, q: np.ndarray) -> np.ndarray:
    lb = log_beta(d)
    if d == 2:
        return -(q - 6) * lb - np.log(q + 1)
    return gammaln(q + 1) - (q - 4) * lb - gammaln(q + d / 2 + 1)


def _q_floor(d: int) -> float:
    return 6.0 if d == 2 else 4.0


def threshold_residual(d: int, q):
    """log(RHS) - log(LHS) of the sufficient condition; >= 0 means it holds.

    Accepts a scalar or an array of exponents.
    """
    d = _check_d(d)
    qa = np.asarray(q, dtype=float)
    if np.any(~np.isfinite(qa)) or np.any(qa < _q_floor(d)):
        need = "q >= 6 when d = 2" if d == 2 else "q >= 4 when d >= 3"
        raise DomainError(f"threshold condition needs {need}; got q={q}")
    out = _log_rhs(d, qa) - _log_lhs(d)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ThresholdReport:
    d: int
    q0_upper: float
    log_lhs: float
    grid_q: np.ndarray = field(repr=False)
    grid_residual: np.ndarray = field(repr=False)
    method_note: str = ""

    @property
    def grid_checked(self) -> list:
        """(q, lhs, rhs) for every sample, lhs and rhs in log form."""
        return [(float(q), self.log_lhs, self.log_lhs + float(r))
                for q, r in zip(self.grid_q, self.grid_residual)]

    @property
    def samples(self) -> int:
        return int(self.grid_q.size)


_BLOCK = 1 << 20


def q0_upper(d: int, tol: float = 0.01, window: float | None = None,
             q_limit: float | None = None, refine: bool = True) -> ThresholdReport:
    """Least q (to within ``tol``) after which the threshold condition holds.

    Samples on a grid of step ``tol`` and accepts a crossing only when every
    sample in the following window of length ``10 d log d`` is nonnegative,
    which guards against a non-monotone residual.  The crossing is then
    refined by bisection.
    """
    d = _check_d(d)
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    if window is None:
        window = 10 * d * math.log(d)
    if q_limit is None:
        q_limit = _q_floor(d) + 4 * d * math.log(d) + 50
    start = _q_floor(d)
    span = int(math.ceil(window / tol))
    limit_idx = int(math.ceil((q_limit - start) / tol))
    lhs = _log_lhs(d)

    qs_parts, res_parts = [], []
    candidate = None
    i0 = 0
    while True:
        idx = np.arange(i0, i0 + _BLOCK)
        qs = start + idx * tol
        res = _log_rhs(d, qs) - lhs
        qs_parts.append(qs)
        res_parts.append(res)
        neg = np.nonzero(res < 0)[0]
        if neg.size:
            candidate = i0 + int(neg[-1]) + 1
        elif candidate is None:
            candidate = i0
        i0 += _BLOCK
        if candidate is not None and i0 > candidate + span:
            break
        if candidate is not None and candidate > limit_idx:
            raise DomainError(f"threshold condition not met for any q <= {q_limit} (d={d})")
    all_q = np.concatenate(qs_parts)
    all_r = np.concatenate(res_parts)
    keep = slice(0, candidate + span + 1)
    all_q, all_r = all_q[keep], all_r[keep]
    q_star = float(all_q[candidate])
    note = f"grid step {tol:g} from q={start:g}; forward window {window:.4g} all nonnegative"
    if refine and candidate > 0:
        lo, hi = float(all_q[candidate - 1]), q_star
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if threshold_residual(d, mid) >= 0:
                hi = mid
            else:
                lo = mid
            if hi - lo < 1e-12:
                break
        fine = np.linspace(hi, q_star, 65)
        if np.all(threshold_residual(d, fine) >= 0):
            q_star = hi
            note += "; crossing refined by bisection"
    return ThresholdReport(d, q_star, lhs, all_q, all_r, note)


def q0_asymptotic_check(d_list, tol: float = 0.01) -> list:
    """(d, q0_upper(d) / (d log d)) for each d >= 3."""
    out = []
    for d in d_list:
        if d < 3:
            raise DomainError("asymptotic check needs d >= 3")
        out.append((d, q0_upper(d, tol).q0_upper / (d * math.log(d))))
    return out
