import math

import pytest

from vega_sharp import bounds
from vega_sharp.enclosure import truncate
from vega_sharp.errors import DomainError
from vega_sharp.published import HEADS_D4, HEADS_D5
from vega_sharp.verify import VERIFIED, sharp_constant, verify_hierarchy


@pytest.fixture(scope="module")
def report_d4():
    return verify_hierarchy(4, "10/3")


@pytest.fixture(scope="module")
def report_d5():
    return verify_hierarchy(5, 3)


def test_d4_verified(report_d4):
    assert report_d4.verdict == VERIFIED
    assert report_d4.cutoff_K == 28
    assert report_d4.threshold_rounded == pytest.approx(0.252, abs=1e-15)
    assert [k for k, _ in report_d4.per_k] == list(range(1, 29))


def test_d4_per_k_upper_bounds(report_d4):
    for (k, hi), value in zip(report_d4.per_k, HEADS_D4):
        assert abs(hi - (value + 0.005)) <= 2e-3, k


def test_d4_invariants(report_d4):
    rep = report_d4
    assert rep.bound_after_K < rep.lambda0_power_lo
    assert all(hi < rep.lambda0_power_lo for _, hi in rep.per_k)
    assert rep.cutoff_K_strict <= rep.cutoff_K
    assert rep.lambda0_power_lo == rep.lambda0.head.lo


def test_d5_verified(report_d5):
    assert report_d5.verdict == VERIFIED
    assert report_d5.threshold_rounded == pytest.approx(0.205, abs=1e-15)


def test_d5_cutoff_matches_scan(report_d5):
    scan = [k for k in range(60) if bounds.u_bound_power(5, 3, k) > report_d5.threshold_rounded]
    assert report_d5.cutoff_K == max(scan)


def test_d5_heads(report_d5):
    for res, value in zip(report_d5.results, HEADS_D5):
        assert truncate(res.head.lo) == value or res.head.intersects(
            type(res.head)(value, value + 0.001)), res.spec.k


@pytest.mark.parametrize("d, q", [(3, 4), (4, 4), (2, 6)])
def test_even_exponents_verified(d, q):
    rep = verify_hierarchy(d, q)
    assert rep.verdict == VERIFIED
    assert any("even" in n for n in rep.notes)


def test_split_method_for_d2_q6():
    rep = verify_hierarchy(2, 6)
    assert rep.method.startswith("split bound")
    assert rep.bound_after_K < rep.lambda0_power_lo


@pytest.mark.parametrize("d, q", [(4, "10/3"), (5, 3)])
def test_verdict_stable_in_cutoff(d, q):
    assert verify_hierarchy(d, q, R=300).verdict == verify_hierarchy(d, q, R=200).verdict


def test_jobs_do_not_change_report(report_d4):
    threaded = verify_hierarchy(4, "10/3", jobs=4)
    assert threaded.per_k == report_d4.per_k
    assert threaded.verdict == report_d4.verdict


def test_infinite_exponent_refused():
    with pytest.raises(DomainError):
        verify_hierarchy(3, "inf")


def test_no_decaying_bound_refused():
    # exponent below 2d/(d-4/3) where the split bound does not decay
    for d, q in [(8, "7/3"), (3, "7/2"), (6, "5/2")]:
        with pytest.raises(DomainError, match="does not decay"):
            verify_hierarchy(d, q)


def test_constant_inf():
    res = sharp_constant(3, "inf")
    assert res.constant.contains(4 * math.pi)
    assert res.argmax_k == 0 and res.certified


def test_constant_d2_q6():
    res = sharp_constant(2, 6)
    target = 2 * math.pi * 0.3368280 ** (1 / 6)
    assert res.certified
    assert res.constant.lo - 1e-5 <= target <= res.constant.hi + 1e-5
    assert res.constant.width < 1e-5


def test_constant_d4():
    res = sharp_constant(4, "10/3")
    assert res.certified and res.argmax_k == 0
    lam = res.lam
    assert res.constant.lo == pytest.approx((2 * math.pi) ** 2 * lam.lo, rel=1e-14)
