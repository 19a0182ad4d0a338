import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vega_sharp import specfun
from vega_sharp.errors import DomainError, ToleranceNotMet
from vega_sharp.norms import ProblemSpec, _integrand, bessel_zeros
from vega_sharp.quadrature import integrate, maximize


def test_cubic():
    res = integrate(lambda r: r**3, 0.0, 1.0, 1e-12)
    assert res.value.contains(0.25)
    assert res.value.width <= 2e-12


def test_sine():
    res = integrate(np.sin, 0.0, math.pi, 1e-12)
    assert res.value.contains(2.0)
    assert res.requested_tol == 1e-12
    assert res.panels_used >= 1


def test_bessel_power_head_d4():
    spec = ProblemSpec(4, "10/3", 0)
    res = integrate(_integrand(spec), 0.0, 200.0, 1e-9, breakpoints=bessel_zeros(1, 0, 200))
    assert 0.257 <= res.value.lo and res.value.hi < 0.258
    assert res.value.width <= 2e-9


def test_panels_respect_depth_and_order():
    res = integrate(np.sin, 0.0, 10.0, 1e-10, breakpoints=[3.0, 7.0])
    assert all(p.a < p.b and p.depth <= 40 for p in res.panels)
    assert [p.a for p in res.panels] == sorted(p.a for p in res.panels)
    assert 3.0 in [p.a for p in res.panels] and 7.0 in [p.a for p in res.panels]


def test_tolerance_not_met_carries_best_effort():
    f = lambda r: np.abs(r - 1 / 3) ** 0.5  # noqa: E731
    with pytest.raises(ToleranceNotMet) as info:
        integrate(f, 0.0, 1.0, 1e-15, max_depth=3)
    best = info.value.result
    assert best is not None
    exact = (2 / 3) * ((1 / 3) ** 1.5 + (2 / 3) ** 1.5)
    assert best.value.contains(exact)


def test_domain_errors():
    with pytest.raises(DomainError):
        integrate(np.sin, 1.0, 0.0)
    with pytest.raises(DomainError):
        integrate(np.sin, 0.0, math.inf)
    with pytest.raises(DomainError), np.errstate(divide="ignore"):
        integrate(lambda r: 1 / (r - 0.5), 0.0, 1.0)


def test_oscillatory_against_mpmath():
    spec = ProblemSpec(3, 4, 2)
    exact = float(mp.quad(lambda r: (r**-0.5 * mp.besselj(2.5, r))**4 * r**2,
                          mp.linspace(0, 60, 40)))
    res = integrate(_integrand(spec), 0.0, 60.0, 1e-10, breakpoints=bessel_zeros(2.5, 0, 60))
    assert res.value.contains(exact)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.05, max_value=0.95))
def test_panel_additivity(frac):
    # kinks of |J|^q sit on panel edges, as in every production call
    f = _integrand(ProblemSpec(4, "10/3", 1))
    a, b = 0.0, 40.0
    c = a + frac * (b - a)
    zeros = bessel_zeros(2, a, b)
    whole = integrate(f, a, b, 1e-10, breakpoints=zeros).value
    left = integrate(f, a, c, 1e-10, breakpoints=zeros).value
    right = integrate(f, c, b, 1e-10, breakpoints=zeros).value
    assert whole.intersects(left + right)


def test_monotone_refinement():
    f = _integrand(ProblemSpec(5, 3, 0))
    coarse_tol = 1e-6
    coarse = integrate(f, 0.0, 100.0, coarse_tol).value
    fine = integrate(f, 0.0, 100.0, 1e-9).value
    assert fine.width <= coarse.width + coarse_tol
    assert fine.intersects(coarse)


def test_positivity():
    f = _integrand(ProblemSpec(2, 6, 3))
    tol = 1e-9
    assert integrate(f, 0.0, 50.0, tol).value.lo >= -tol


def test_maximize_parabola():
    x, v = maximize(lambda r: -(r - 1) ** 2, 0.0, 2.0, tol=1e-10)
    assert x == pytest.approx(1.0, abs=1e-6)
    assert v.hi >= 0 - 1e-10
    assert v.contains(0.0) or abs(v.mid) < 1e-12


def test_maximize_j1():
    def f(r):
        m, rho = specfun.bessel_j_array(1, r)
        return np.abs(m), rho
    x, v = maximize(f, 0.0, 10.0)
    # scan oracle
    grid = np.linspace(1.7, 2.0, 300001)
    vals = [abs(float(mp.besselj(1, t))) for t in grid[::1000]]
    assert x == pytest.approx(1.8411837813, abs=1e-6)
    assert v.mid == pytest.approx(0.5818652242, abs=1e-9)
    assert v.hi >= max(vals) - 1e-10


def test_maximize_supremum_at_origin():
    def f(r):
        m, rho = specfun.normalized_bessel_array(0.5, 0.5, r)
        return np.abs(m), rho
    x, v = maximize(f, 0.0, 50.0)
    assert x == 0.0
    assert v.contains(2**-0.5 / math.gamma(1.5))


def test_maximize_rejects_non_finite():
    with pytest.raises(DomainError), np.errstate(divide="ignore"):
        maximize(lambda r: 1 / r, 0.0, 1.0)


def test_bessel_zeros_match_mpmath():
    zeros = bessel_zeros(1, 0.0, 50.0)
    exact = [float(mp.besseljzero(1, s)) for s in range(1, len(zeros) + 1)]
    assert len(zeros) == 15
    assert np.allclose(zeros, exact, atol=1e-3)
