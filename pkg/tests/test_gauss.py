from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from knotasym.gauss import (CASSON, ONE_ARROW_BACKWARD, ONE_ARROW_FORWARD, BraidWord, GaussDiagram,
                            braid_closure_to_gauss, casson, pairing, pairing_bruteforce,
                            torus_knot_diagram, writhe)
from knotasym.torus import v2_from_alexander


def test_trefoil_and_mirror():
    g = torus_knot_diagram(2, 3)
    assert g.n_arrows == 3 and writhe(g) == 3
    assert casson(g) == 1
    mirror = braid_closure_to_gauss(BraidWord.from_ints(2, [-1, -1, -1]))
    assert casson(mirror) == 1
    assert writhe(mirror) == -3


def test_three_braid_trefoil_and_figure_eight():
    # sigma1 sigma2 (3-braid, unknot) and sigma1 sigma2^-1 sigma1 sigma2^-1 (figure eight)
    assert casson(braid_closure_to_gauss(BraidWord.from_ints(3, [1, 2]))) == 0
    assert casson(braid_closure_to_gauss(BraidWord.from_ints(3, [1, -2, 1, -2]))) == -1


def test_trefoil_as_three_braid():
    # (sigma1 sigma2)^2 closes to T(3,2), the trefoil again
    g = torus_knot_diagram(3, 2)
    assert casson(g) == 1


def test_links_rejected():
    with pytest.raises(ValueError):
        braid_closure_to_gauss(BraidWord.from_ints(2, [1, 1]))
    with pytest.raises(ValueError):
        torus_knot_diagram(2, 4)


def test_gauss_json_roundtrip():
    g = torus_knot_diagram(3, 4)
    assert GaussDiagram.from_json(g.to_json()) == g


def test_malformed_gauss_diagram():
    with pytest.raises(ValueError):
        GaussDiagram.from_triples([(0, 2, 1)])
    with pytest.raises(ValueError):
        GaussDiagram.from_triples([(0, 1, 2)])


def test_empty_pattern_pairs_to_one():
    assert pairing(GaussDiagram(), torus_knot_diagram(2, 5)) == 1
    assert pairing(CASSON, GaussDiagram()) == 0


@pytest.mark.parametrize("p,q", [(p, q) for p in range(2, 8) for q in range(2, 12) if gcd(p, q) == 1 and p * q <= 40])
def test_casson_equals_alexander_v2(p, q):
    assert casson(torus_knot_diagram(p, q)) == v2_from_alexander((p, q))
    # closed form (p^2-1)(q^2-1)/24
    assert casson(torus_knot_diagram(p, q)) * 24 == (p * p - 1) * (q * q - 1)


def random_knot_braid():
    return st.tuples(st.integers(2, 4), st.lists(st.integers(1, 3), min_size=1, max_size=9),
                     st.lists(st.booleans(), min_size=9, max_size=9))


def _to_braid(strands, idx, signs):
    word = [(min(i, strands - 1)) * (1 if s else -1) for i, s in zip(idx, signs)]
    return BraidWord.from_ints(strands, word)


@settings(max_examples=80, deadline=None)
@given(random_knot_braid())
def test_fast_pairing_matches_bruteforce(args):
    b = _to_braid(*args)
    if b.n_components() != 1:
        return
    g = braid_closure_to_gauss(b)
    for gamma in (ONE_ARROW_FORWARD, ONE_ARROW_BACKWARD, CASSON,
                  GaussDiagram.from_triples([(0, 2, 1), (1, 3, -1)]),
                  GaussDiagram.from_triples([(0, 3, 1), (1, 5, 1), (4, 2, 1)]),
                  GaussDiagram.from_triples([(1, 0, 1), (2, 3, 1), (5, 4, -1)])):
        assert pairing(gamma, g) == pairing_bruteforce(gamma, g)


@settings(max_examples=80, deadline=None)
@given(random_knot_braid())
def test_one_arrow_patterns_sum_to_writhe(args):
    b = _to_braid(*args)
    if b.n_components() != 1:
        return
    g = braid_closure_to_gauss(b)
    assert pairing(ONE_ARROW_FORWARD, g) + pairing(ONE_ARROW_BACKWARD, g) == writhe(g)


@settings(max_examples=40, deadline=None)
@given(random_knot_braid())
def test_casson_invariant_under_base_point(args):
    # v2 does not depend on the base point
    b = _to_braid(*args)
    if b.n_components() != 1:
        return
    g = braid_closure_to_gauss(b)
    vals = {casson(g.rotated(k)) for k in range(2 * g.n_arrows)}
    assert len(vals) == 1
