from fractions import Fraction

import pytest

from knotasym.algebra import ParamPoly
from knotasym.jacobi import EMPTY, Diagram, DiagramSum, canonicalize, key_degree, quotient_for, wheel_diagram
from knotasym.kontsevich import (THETA, DivergentLimit, asymptotic_limit, diagonal_rescale, omega,
                                 omega_pairing, scaled_diagonal_limit, specialize, strut_sum,
                                 theta_diagram, theta_sum, unknot, z_torus)

F = Fraction
P, Q = ParamPoly.p(), ParamPoly.q()


@pytest.fixture(scope="module")
def quot2():
    return quotient_for(2)


@pytest.fixture(scope="module")
def z2(quot2):
    return z_torus(2, quotient=quot2)


def test_omega_low_terms():
    om = omega(4)
    w2, w4 = wheel_diagram(2), wheel_diagram(4)
    assert om[EMPTY] == ParamPoly.const(1)
    assert not om.degree_part(1).terms
    assert om.coefficient(w2) == ParamPoly.const(F(1, 48))
    assert om.coefficient(w4) == ParamPoly.const(F(-1, 5760))
    assert om.coefficient(Diagram.disjoint(w2, w2)) == ParamPoly.const(F(1, 2 * 48 * 48))
    assert omega(4) * omega(4, -1) == DiagramSum.one(4)


def test_omega_pairing_starts_at_one(quot2):
    pair = omega_pairing(2, quot2)
    assert pair[EMPTY] == ParamPoly.const(1)
    # Omega has no degree-1 part, so neither does the pairing
    assert not pair.degree_part(1).terms


def test_degree_zero_and_one(z2):
    assert z2[EMPTY] == ParamPoly.const(1)
    # every degree-1 term cancels, for all p, q
    assert not z2.degree_part(1).terms


def test_wheel_two_coefficient(z2):
    # coefficient of w2 in the wheel_diagram(2) orientation
    assert z2.coefficient(wheel_diagram(2)) == (P * P + Q * Q - P * P * Q * Q) * F(1, 48)


def test_unknot_and_symmetry(z2, quot2):
    u = unknot(2, quot2)
    for n in (1, 2, 5):
        assert specialize(z2, 1, n) == u
        assert specialize(z2, n, 1) == u
    assert specialize(z2, 2, 3) == specialize(z2, 3, 2)
    assert specialize(z2, 2, 5) != specialize(z2, 2, 3)


def test_numeric_matches_symbolic(z2, quot2):
    assert z_torus(2, 2, 3, quot2) == specialize(z2, 2, 3)


def test_asymptotic_limit_equals_scaled_limit(z2, quot2):
    rep = scaled_diagonal_limit(2, quot2, z=z2)
    assert rep.ok()
    assert rep.limit == asymptotic_limit(2, 1, quot2)
    assert rep.limit[EMPTY] == ParamPoly.const(1)


def test_diagonal_rescale_of_pairing_tends_to_one(quot2):
    pair = omega_pairing(2, quot2)
    # pairing has no p-dependence; rescaling by p^{-2n} only leaves negative powers away from degree 0
    r = diagonal_rescale(pair)
    for k, v in r.terms.items():
        neg, zero, pos = v.split_p()
        assert not pos.terms
        assert zero == (ParamPoly.const(1) if k == EMPTY else ParamPoly())


def test_strut_exponential_rescales_exactly():
    s = strut_sum(P * Q * F(1, 2), 3).exp(3)
    r = diagonal_rescale(s)
    for k, v in r.terms.items():
        assert v == ParamPoly.const(F(1, 2) ** key_degree(k) / [1, 1, 2, 6][key_degree(k)])


def test_divergent_parts_raise_in_strict_mode():
    bad = theta_sum(P ** 3, 2)
    with pytest.raises(DivergentLimit):
        scaled_diagonal_limit(2, quotient_for(2), z=bad)
    rep = scaled_diagonal_limit(2, quotient_for(2), strict=False, z=bad)
    assert not rep.ok() and rep.notes


def test_theta_key():
    assert THETA == canonicalize(theta_diagram())[0]
    assert canonicalize(theta_diagram())[1] != 0
