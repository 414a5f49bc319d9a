from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from knotasym.flow import (RotationNumber, Undecidable, asymptotic_signature, closure_times,
                           template_knot)

F = Fraction


def test_convergents_golden_and_silver():
    assert RotationNumber.golden().denominators(8) == [1, 1, 2, 3, 5, 8, 13, 21]
    assert RotationNumber.silver().denominators(6) == [1, 2, 5, 12, 29, 70]


def test_golden_closures_are_convergent_denominators():
    lam = RotationNumber.golden()
    seq = closure_times(lam, count=8)
    dens = set(lam.denominators(40))
    assert all(t in dens for t in seq.times)
    assert seq.times == sorted(seq.times)


def test_silver_closures_include_intermediate_fractions():
    # best one-sided approximations of sqrt2-1 also visit semiconvergent denominators
    seq = closure_times(RotationNumber.silver(), count=8)
    assert seq.times[:6] == [1, 3, 5, 17, 29, 99]
    assert 3 not in RotationNumber.silver().denominators(30)


@pytest.mark.parametrize("lam", [RotationNumber.golden(), RotationNumber.silver(),
                                 RotationNumber.parse("cf:0,3,1,4;2")])
def test_closure_params_coprime_and_close(lam):
    seq = closure_times(lam, count=8)
    x = lam.approx(60)
    for p, q in seq.params:
        assert gcd(p, q) == 1
        assert abs(F(q, p) - x) < F(1, p * p)


def test_finite_prefix_is_undecidable():
    lam = RotationNumber([0, 2, 2, 2, 2])
    with pytest.raises(Undecidable):
        closure_times(lam, count=8)


def test_parse_variants():
    assert RotationNumber.parse("golden").denominators(5) == RotationNumber.golden().denominators(5)
    assert RotationNumber.parse("cf:0;2").denominators(6) == RotationNumber.silver().denominators(6)
    assert RotationNumber.parse("cf:0,2").denominators(6) == RotationNumber.silver().denominators(6)
    with pytest.raises(ValueError):
        RotationNumber.parse("pi")


def test_template_knot_and_signature():
    seq = closure_times(RotationNumber.golden(), count=5)
    k = template_knot(seq, 4)
    assert (k.p, k.q) == seq.params[4]
    with pytest.raises(IndexError):
        template_knot(seq, 5)
    lo, hi = asymptotic_signature(RotationNumber.golden())
    assert hi - lo < F(1, 10 ** 10)
    assert abs(float(lo) - 0.30901699437) < 1e-10
    assert asymptotic_signature(F(1)) == (F(1, 2), F(1, 2))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=3), st.lists(st.integers(1, 4), min_size=1, max_size=2),
       st.integers(2, 11))
def test_closure_times_record_rule(head, period, x0den):
    """Each closure time is a new one-sided record of the orbit above x0 (checked in floats at high depth)."""
    lam = RotationNumber.periodic([0] + head, period)
    x0 = F(1, x0den)
    seq = closure_times(lam, x0, count=5)
    x = lam.approx(40)
    best = F(1)
    recs = []
    m = 0
    while len(recs) < 5:
        m += 1
        xm = (x0 + m * x) % 1
        if x0 < xm < best:
            best = xm
            recs.append(m)
    assert recs == seq.times
