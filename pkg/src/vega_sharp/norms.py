"""Weighted L^q norms of normalised Bessel functions.

For dimension ``d``, exponent ``q`` and degree ``k`` the quantity of interest is

    Lambda_{d,q}(k) = ( int_0^inf |r^{1-d/2} J_nu(r)|^q r^{d-1} dr )^{1/q},
    nu = d/2 - 1 + k,

and its sup-norm counterpart when ``q`` is infinite.  The integral is split
at a cutoff ``R``: the head is integrated numerically, the tail is bounded
in closed form using |J_nu(r)| <= r^{-1/2}.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import specfun
from .enclosure import EPS, Enclosure
from .errors import DomainError
from .quadrature import integrate, maximize

INF = math.inf
DEFAULT_R = 200.0
DEFAULT_TOL = 1e-9
# grid used to bracket Bessel zeros before refinement
_ZERO_STEP = math.pi / 4
_BISECTIONS = 8


def parse_q(token) -> Fraction | float:
    """Parse an exponent: ``inf``, an integer, a decimal or a ratio such as ``10/3``."""
    if isinstance(token, Fraction):
        q = token
    elif isinstance(token, float) and math.isinf(token):
        return INF
    elif isinstance(token, (int, float)):
        q = Fraction(token)
    else:
        text = str(token).strip().lower()
        if text in ("inf", "infinity", "∞"):
            return INF
        try:
            q = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse exponent {token!r}") from exc
    if q <= 0:
        raise DomainError(f"exponent must be positive, got {q}")
    return q


def q_float(q) -> float:
    return INF if q == INF else float(q)


def format_q(q) -> str:
    return "inf" if q == INF else str(q)


@dataclass(frozen=True)
class ProblemSpec:
    d: int
    q: Fraction | float
    k: int = 0

    def __post_init__(self):
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.d}")
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 0:
            raise DomainError(f"degree must be an integer >= 0, got {self.k}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "k", int(self.k))
        q = parse_q(self.q)
        object.__setattr__(self, "q", q)
        if q != INF and not q > Fraction(2 * self.d, self.d - 1):
            raise DomainError(
                f"exponent q={q} must exceed 2d/(d-1) = {Fraction(2 * self.d, self.d - 1)}"
            )

    @property
    def nu(self) -> float:
        return self.d / 2 - 1 + self.k

    @property
    def alpha(self) -> float:
        return self.d / 2 - 1

    @property
    def finite(self) -> bool:
        return self.q != INF

    def with_k(self, k: int) -> ProblemSpec:
        return ProblemSpec(self.d, self.q, k)


@dataclass(frozen=True)
class LambdaResult:
    spec: ProblemSpec
    power: Enclosure
    lam: Enclosure
    cutoff_R: float
    head: Enclosure
    tail_hi: float
    notes: tuple = field(default=())


def bessel_zeros(nu: float, a: float, b: float, step: float = _ZERO_STEP) -> np.ndarray:
    """Approximate zeros of J_nu in (a, b), sorted.

    Sign changes on a grid are narrowed by a few bisection steps and finished
    with one regula falsi step.  Accuracy is well below the panel scale, which
    is all the integrator needs to place the kinks of |J_nu|.
    """
    n = max(2, int(math.ceil((b - a) / step)) + 1)
    grid = np.linspace(a, b, n)
    vals, _ = specfun.bessel_j_array(nu, grid)
    idx = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
    lo, hi = grid[idx], grid[idx + 1]
    flo, fhi = vals[idx], vals[idx + 1]
    for _ in range(_BISECTIONS):
        if not lo.size:
            break
        mid = 0.5 * (lo + hi)
        fm, _ = specfun.bessel_j_array(nu, mid)
        left = flo * fm <= 0
        hi = np.where(left, mid, hi)
        fhi = np.where(left, fm, fhi)
        lo = np.where(left, lo, mid)
        flo = np.where(left, flo, fm)
    with np.errstate(invalid="ignore", divide="ignore"):
        root = lo - flo * (hi - lo) / (fhi - flo)
    root = np.where(np.isfinite(root) & (root > lo) & (root < hi), root, 0.5 * (lo + hi))
    return root


def _integrand(spec: ProblemSpec):
    nu, alpha, d = spec.nu, spec.alpha, spec.d
    q = float(spec.q)

    def f(r):
        m, rho = specfun.normalized_bessel_array(nu, alpha, r)
        m = np.abs(m)
        lo = np.maximum(m - rho, 0.0) ** q
        hi = (m + rho) ** q
        weight = r ** (d - 1)
        mid = 0.5 * (lo + hi) * weight
        rad = 0.5 * (hi - lo) * weight + 4 * q * EPS * np.abs(mid)
        return mid, rad

    return f


def lambda_head(spec: ProblemSpec, R: float = DEFAULT_R, tol: float = DEFAULT_TOL) -> Enclosure:
    """Enclosure for the integral of |r^{1-d/2} J_nu(r)|^q r^{d-1} over [0, R]."""
    if not spec.finite:
        raise DomainError("head integral needs a finite exponent")
    if not R > 0:
        raise DomainError(f"cutoff must be positive, got {R}")
    zeros = bessel_zeros(spec.nu, 0.0, R)
    return integrate(_integrand(spec), 0.0, R, tol, breakpoints=zeros).value


def tail_exponent(spec: ProblemSpec) -> Fraction | float:
    """Power of R in the tail bound, d - q(d-1)/2."""
    q = spec.q if isinstance(spec.q, Fraction) else Fraction(spec.q)
    return spec.d - q * (spec.d - 1) / 2


def lambda_tail_bound(spec: ProblemSpec, R: float) -> float:
    """Closed-form bound R^{d - q(d-1)/2} / (q(d-1)/2 - d) for the tail beyond ``R``.

    Uses |J_nu(r)| <= r^{-1/2}.  For nu >= 1/2 this needs r > 3 nu / 2; for
    0 <= nu < 1/2 it follows from sqrt(r)|J_nu(r)| <= sqrt(2/pi) for all r > 0.
    """
    if not spec.finite:
        raise DomainError("tail bound needs a finite exponent")
    if not R > 0:
        raise DomainError(f"cutoff must be positive, got {R}")
    nu = spec.nu
    if nu >= 0.5 and not R > 1.5 * nu:
        raise DomainError(
            f"Krasikov hypothesis r > 3*nu/2 fails: R={R}, nu={nu} (need R > {1.5 * nu})"
        )
    e = tail_exponent(spec)
    c = -e
    if not c > 0:
        raise DomainError(f"tail not integrable: q(d-1)/2 - d = {c} <= 0")
    if e.denominator == 1 and float(R).is_integer():
        return float(Fraction(int(R)) ** int(e) / c)
    return math.exp(float(e) * math.log(R)) / float(c)


def admissible_cutoff(spec: ProblemSpec, R: float) -> float:
    """``R`` itself, or 1.6 nu when the tail hypothesis r > 3 nu / 2 would fail."""
    if spec.nu >= 0.5 and not R > 1.5 * spec.nu:
        return 1.6 * spec.nu
    return float(R)


def lambda_norm(spec: ProblemSpec, R: float = DEFAULT_R, tol: float = DEFAULT_TOL) -> LambdaResult:
    """Certified Lambda_{d,q}(k) via head quadrature plus the analytic tail."""
    if not spec.finite:
        lam = lambda_inf(spec.d, spec.k)
        return LambdaResult(spec, lam, lam, 0.0, lam, 0.0)
    notes = ()
    R_used = admissible_cutoff(spec, R)
    if R_used != R:
        msg = f"cutoff raised from {R} to {R_used} so that R > 3*nu/2 (nu={spec.nu})"
        warnings.warn(msg, stacklevel=2)
        notes = (msg,)
    head = lambda_head(spec, R_used, tol)
    tail = lambda_tail_bound(spec, R_used)
    lo = max(head.lo, 0.0)
    power = Enclosure(lo, max(head.hi, lo) + tail).widened()
    return LambdaResult(spec, power, power.root(float(spec.q)), R_used, head, tail, notes)


def lambda_many(specs, R: float = DEFAULT_R, tol: float = DEFAULT_TOL, jobs: int = 1) -> list:
    """Evaluate several specs, possibly on a thread pool; output follows input order."""
    specs = list(specs)
    if jobs <= 1 or len(specs) <= 1:
        return [lambda_norm(s, R, tol) for s in specs]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda s: lambda_norm(s, R, tol), specs))


def cutoff_for_tail(spec: ProblemSpec, tail: float, max_R: float = specfun.MAX_R) -> float:
    """Smallest integer cutoff (at least 200) whose tail bound is at most ``tail``."""
    c = float(-tail_exponent(spec))
    R = math.ceil((tail * c) ** (-1.0 / c))
    R = admissible_cutoff(spec, max(float(R), DEFAULT_R))
    return float(min(math.ceil(R), max_R))


def log_lambda4_closed(d: int) -> float:
    """Logarithm of :func:`lambda4_closed`; stays finite where the value underflows."""
    if isinstance(d, bool) or int(d) != d or d < 3:
        raise DomainError(f"closed form needs an integer d >= 3 (order nu = d/2 - 1 > 0), got {d}")
    return (
        math.lgamma(d / 2 - 1) + math.lgamma(d - 2) - math.log(2 * math.pi)
        - 2 * math.lgamma(d / 2 - 0.5) - math.lgamma(1.5 * d - 3)
    )


def lambda4_closed(d: int) -> float:
    """Exact Lambda_{d,4}(0)^4 as a ratio of gamma values (d >= 3)."""
    return math.exp(log_lambda4_closed(d))


def lambda_inf_zero(d: int) -> float:
    """Lambda_{d,inf}(0) = 1 / (2^{d/2-1} Gamma(d/2)), the r -> 0 limit."""
    return math.exp(-(d / 2 - 1) * math.log(2) - math.lgamma(d / 2))


def lambda_inf(d: int, k: int, R_search: float | None = None, tol: float = DEFAULT_TOL) -> Enclosure:
    """Enclosure for sup_r |r^{1-d/2} J_{d/2-1+k}(r)|.

    For k >= 1 the interior maximum on [0, R_search] is combined with the
    decay bound r^{-(d-1)/2} beyond R_search, which is valid there because
    R_search exceeds 3 nu / 2.
    """
    spec = ProblemSpec(d, INF, k)
    if k == 0:
        return Enclosure.point(lambda_inf_zero(d))
    nu, alpha = spec.nu, spec.alpha
    if R_search is None:
        R_search = 3 * nu + 50
    R_search = max(float(R_search), 1.5 * nu + 1)

    def f(r):
        m, rho = specfun.normalized_bessel_array(nu, alpha, r)
        return np.abs(m), rho

    while True:
        _, value = maximize(f, 0.0, R_search, tol=min(tol, 1e-8))
        decay = R_search ** -(alpha + 0.5)
        if decay < value.lo:
            break
        R_search *= 2
    return Enclosure(value.lo, value.hi + tol)


def lambda0_lower_bound(d: int, q) -> float:
    """Explicit lower bound for Lambda_{d,q}(0) from the quadratic minorant."""
    spec = ProblemSpec(d, q, 0)
    if not spec.finite:
        raise DomainError("lower bound is stated for finite q")
    q = float(spec.q)
    h = d / 2
    log_val = (
        ((d - 1) * math.log(2) + h * math.log(h)) / q
        - (h - 1) * math.log(2) - math.lgamma(h)
        + (math.lgamma(q + 1) + math.lgamma(h) - math.lgamma(q + h + 1)) / q
    )
    return math.exp(log_val)


def quadratic_minorant(nu: float, r: float) -> float:
    """1 - r^2 / (4(nu+1)), a lower bound for Gamma(nu+1)(r/2)^{-nu} J_nu(r)."""
    if nu < 0:
        raise DomainError(f"order must be nonnegative, got {nu}")
    limit = 2 * math.sqrt(nu + 1)
    if not 0 <= r <= limit:
        raise DomainError(f"minorant holds only for 0 <= r <= 2 sqrt(nu+1) = {limit}, got {r}")
    return 1 - r * r / (4 * (nu + 1))
