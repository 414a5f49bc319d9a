from fractions import Fraction
from math import gcd

import pytest

from knotasym.torus import (TorusKnotParams, alexander_torus, jones_torus, normalized_series,
                            v2_from_alexander)

from oracles import burau_minor, jones_state_sum

F = Fraction
SMALL = [(p, q) for p in range(2, 6) for q in range(p + 1, 10) if gcd(p, q) == 1 and p * q <= 30]


def braid_word(p, q):
    return [i for _ in range(q) for i in range(1, p)]


def test_trefoil_polynomials():
    assert alexander_torus((2, 3)).terms() == {-1: 1, 0: -1, 1: 1}
    assert jones_torus((2, 3)).terms() == {1: 1, 3: 1, 4: -1}


def test_cinquefoil_polynomials():
    assert alexander_torus((2, 5)).terms() == {-2: 1, -1: -1, 0: 1, 1: -1, 2: 1}
    assert jones_torus((2, 5)).terms() == {2: 1, 4: 1, 5: -1, 6: 1, 7: -1}


@pytest.mark.parametrize("p,q", SMALL)
def test_alexander_against_burau(p, q):
    delta = alexander_torus((p, q))
    ratios = [burau_minor(p, braid_word(p, q), F(t)) / delta(F(t)) for t in (2, 3)]
    # ratio is t^k with the same k for both sample points
    k2 = ratios[0].numerator.bit_length() - 1
    assert ratios[0] == F(2) ** k2 and ratios[1] == F(3) ** k2


@pytest.mark.parametrize("p,q", [k for k in SMALL if (k[0] - 1) * k[1] <= 14])
def test_jones_against_state_sum(p, q):
    assert jones_state_sum(p, braid_word(p, q)) == {F(k): v for k, v in jones_torus((p, q)).terms().items()}


@pytest.mark.parametrize("p,q", SMALL + [(7, 11), (10, 13)])
def test_symmetry_and_normalization(p, q):
    a, b = alexander_torus((p, q)), alexander_torus((q, p))
    assert a == b
    assert a.terms() == {-k: v for k, v in a.terms().items()}  # symmetric
    assert a(F(1)) == 1
    assert jones_torus((p, q))(F(1)) == 1
    assert jones_torus((p, q)) == jones_torus((q, p))


def test_normalized_series_trefoil():
    s = normalized_series(alexander_torus((2, 3)), 1, 4)
    assert [s[n] for n in range(5)] == [1, 0, 1, 0, F(1, 12)]
    assert normalized_series(jones_torus((2, 3)), 1, 2)[2] == -3


@pytest.mark.parametrize("p,q", SMALL)
def test_v2_closed_form(p, q):
    assert 24 * v2_from_alexander((p, q)) == (p * p - 1) * (q * q - 1)


def test_unknots_and_params():
    assert alexander_torus((1, 7)).terms() == {0: 1}
    assert jones_torus((5, 1)).terms() == {0: 1}
    with pytest.raises(ValueError):
        TorusKnotParams(4, 6)
    with pytest.raises(ValueError):
        TorusKnotParams(0, 0)


def test_scaled_coefficients_at_p100():
    s = normalized_series(alexander_torus((100, 101)), F(1, 100 ** 2), 4)
    # approach 1/24 and 1/1920 from above with O(1/p) error
    assert F(1, 24) < s[2] < F(1, 24) * F(103, 100)
    assert F(1, 1920) < s[4] < F(1, 1920) * F(105, 100)
