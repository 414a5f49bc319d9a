from fractions import Fraction

import pytest

from knotasym.algebra import LaurentSeries, fplus_derivative, wheel_log_series
from knotasym.gluegraphs import (BudgetExceeded, Decoration, GlueGraph, aut_bruteforce, canonical,
                                 enumerate_graphs, expand_tree_closed, pole_remainder, sub_bruteforce,
                                 sub_tree_closed, torus_decorations, tree_expansion, verify_eq_ntor,
                                 verify_eq_sub)
from knotasym.jacobi import DiagramSum, glue, quotient_for, wheel_diagram
from knotasym.kontsevich import omega

F = Fraction


def _signature(g):
    return tuple(sorted(g.labels)), g.n_edges


def test_one_edge_classes():
    gs = enumerate_graphs(1)
    sigs = sorted((_signature(g), a) for g, a in gs)
    assert sigs == [((("x", "y"), 1), 1), ((("x", "z"), 1), 1), ((("y", "z"), 1), 1),
                    ((("z",), 1), 2), ((("z", "z"), 1), 2)]
    no_loops = enumerate_graphs(1, loops=False)
    assert sorted(a for _, a in no_loops) == [1, 1, 1, 2]


def test_class_counts_and_budget():
    assert len(enumerate_graphs(2)) == 26
    with pytest.raises(BudgetExceeded):
        enumerate_graphs(5)


@pytest.mark.parametrize("E", [1, 2])
def test_aut_matches_bruteforce(E):
    for g, a in enumerate_graphs(E):
        assert aut_bruteforce(g) == a


def test_enumeration_independent_of_order():
    base = [canonical(g) for g, _ in enumerate_graphs(2)]
    for seed in (1, 7):
        assert [canonical(g) for g, _ in enumerate_graphs(2, seed=seed)] == base


def test_no_same_label_edges_except_z_loops():
    for g, _ in enumerate_graphs(2):
        for a, b in g.edges():
            if g.labels[a] == g.labels[b]:
                assert g.labels[a] == "z"


def test_isolated_vertex_exponentiates_to_omega():
    g = GlueGraph(("z",), ((),), ())
    s = sub_bruteforce(g, {"z": Decoration(wheel_log_series(6))}, 4)
    assert s.exp(4) == omega(4)


def test_single_edge_multiplicity():
    w2_only = LaurentSeries.monomial("h", 2, 1)
    g = GlueGraph(("x", "y"), ((0,), (1,)), (1, 0))
    res = sub_bruteforce(g, {"x": Decoration(w2_only), "y": Decoration(w2_only)}, 3)
    w = wheel_diagram(2)
    # one dart lands in either of the two slots at each end
    assert res == DiagramSum.of(glue(w, w, [(w.legs()[0], w.legs()[0])]), 4, 3)


def test_tree_closed_formula_small_cases():
    f = wheel_log_series(6)
    iso = GlueGraph(("z",), ((),), ())
    assert sub_tree_closed(iso, {"z": f})[0] == f
    edge = GlueGraph(("x", "y"), ((0,), (1,)), (1, 0))
    closed = sub_tree_closed(edge, {"x": f, "y": f})
    assert closed[0].agrees_with(f.derivative(1)) and closed[1].agrees_with(f.derivative(1))
    with pytest.raises(ValueError):
        sub_tree_closed(GlueGraph(("z",), ((0, 1),), (1, 0)), {"z": f})


@pytest.mark.parametrize("D", [1, 2])
def test_tree_closed_matches_bruteforce(D):
    quot = quotient_for(D)
    f = torus_decorations(D)
    for g, _ in enumerate_graphs(2, trees_only=True):
        assert expand_tree_closed(g, f, D, quot) == sub_bruteforce(g, f, D, quot)


def test_tree_expansion_structure():
    out = tree_expansion(2)
    assert out["global_factor"] == "exp(theta/48)"
    assert out["trees"]
    for t in out["trees"]:
        assert t.graph.is_tree() and t.check()
        for dec in t.decorations:
            if dec["label"] == "z":
                assert dec["kind"] == "Fplus_deriv_over_factorial"
            else:
                assert dec["kind"] == "minus_half_inverse_power"
        assert set(t.to_json()) >= {"edges", "labels", "aut", "decorations"}


@pytest.mark.parametrize("D", [1, 2])
def test_substitution_identity(D):
    rep = verify_eq_sub(D)
    assert rep.equal, rep.discrepancies


def test_substitution_identity_needs_loops():
    rep = verify_eq_sub(2, loops=False)
    assert not rep.equal
    # a z-loop on the two-wheel already contributes the theta graph in degree 1
    assert rep.per_degree[0] and not rep.per_degree[1]


def test_substitution_identity_numeric():
    assert verify_eq_sub(2, 2, 3).equal


@pytest.mark.parametrize("n", range(1, 7))
def test_pole_remainder_regular(n):
    r = pole_remainder(n)
    assert r.valuation >= 0
    assert fplus_derivative(n, 6)[-n] != 0


def test_ntor_report_shape():
    rep = verify_eq_ntor(1)
    assert {"regular_part_equal", "discrepancies", "singular_terms"} <= set(rep)
