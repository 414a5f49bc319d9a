"""Labelled gluing graphs: wheels glued along the edges of a graph with cyclic orders at vertices.

A graph is a map on darts: ``rot[v]`` lists the darts at vertex v in cyclic order, ``alpha`` pairs
the two darts of each edge.  Labels come from X = {x, y, z}.
"""
from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .algebra import LaurentSeries, ParamPoly, fplus_derivative, fstr, wheel_log_series
from .jacobi import (Diagram, DiagramSum, QuotientBasis, canonicalize, describe_key, glue,
                     quotient_for, strut_exp, wheel_diagram)

LABELS = ("x", "y", "z")


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class GlueGraph:
    labels: tuple[str, ...]
    rot: tuple[tuple[int, ...], ...]
    alpha: tuple[int, ...]

    @property
    def n_edges(self) -> int:
        return len(self.alpha) // 2

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    def vertex_of(self) -> dict[int, int]:
        return {d: v for v, ds in enumerate(self.rot) for d in ds}

    def valency(self, v: int) -> int:
        return len(self.rot[v])

    def edges(self) -> list[tuple[int, int]]:
        vo = self.vertex_of()
        return [(vo[d], vo[self.alpha[d]]) for d in range(len(self.alpha)) if d < self.alpha[d]]

    def is_connected(self) -> bool:
        if self.n_vertices <= 1:
            return True
        adj = defaultdict(set)
        for a, b in self.edges():
            adj[a].add(b)
            adj[b].add(a)
        seen, stack = {0}, [0]
        while stack:
            v = stack.pop()
            for w in adj[v] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == self.n_vertices

    def is_tree(self) -> bool:
        return self.is_connected() and self.n_edges == self.n_vertices - 1

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "rot": [list(r) for r in self.rot],
                "alpha": list(self.alpha), "edges": [list(e) for e in self.edges()]}


def allowed(g: GlueGraph, loops: bool = True) -> bool:
    """No x-x or y-y edges; loops only at z (and only if ``loops``)."""
    for a, b in g.edges():
        la, lb = g.labels[a], g.labels[b]
        if a == b and (not loops or la != "z"):
            return False
        if la == lb and la in ("x", "y"):
            return False
    return True


def _code(g: GlueGraph, root: int):
    vo = g.vertex_of()
    labels: dict[int, int] = {}
    order: list[int] = []
    verts = []

    def visit(d):
        v = vo[d]
        r = g.rot[v]
        i = r.index(d)
        verts.append((g.labels[v], len(r)))
        for x in r[i:] + r[:i]:
            labels[x] = len(order)
            order.append(x)

    visit(root)
    i = 0
    while i < len(order):
        e = g.alpha[order[i]]
        if e not in labels:
            visit(e)
        i += 1
    return (tuple(verts), tuple(labels[g.alpha[d]] for d in order))


def canonical(g: GlueGraph) -> tuple[tuple, int]:
    """Canonical code of a connected graph and its automorphism count."""
    if g.n_edges == 0:
        if g.n_vertices != 1:
            raise ValueError("canonical form needs a connected graph")
        return (((g.labels[0], 0),), ()), 1
    codes = [_code(g, r) for r in range(len(g.alpha))]
    best = min(codes)
    return best, codes.count(best)


def from_code(code) -> GlueGraph:
    verts, alab = code
    labels, rot, start = [], [], 0
    for lab, k in verts:
        labels.append(lab)
        rot.append(tuple(range(start, start + k)))
        start += k
    return GlueGraph(tuple(labels), tuple(rot), tuple(alab))


def aut_bruteforce(g: GlueGraph) -> int:
    """Count dart permutations commuting with alpha and the rotation and preserving labels."""
    n = len(g.alpha)
    if n == 0:
        return 1
    sigma = [0] * n
    for r in g.rot:
        for i, d in enumerate(r):
            sigma[d] = r[(i + 1) % len(r)]
    vo = g.vertex_of()
    count = 0
    for perm in itertools.permutations(range(n)):
        if all(perm[g.alpha[d]] == g.alpha[perm[d]] and perm[sigma[d]] == sigma[perm[d]]
               and g.labels[vo[d]] == g.labels[vo[perm[d]]] for d in range(n)):
            count += 1
    return count


def _cycles(perm) -> list[tuple[int, ...]]:
    seen, out = set(), []
    for d in range(len(perm)):
        if d in seen:
            continue
        cyc = [d]
        seen.add(d)
        e = perm[d]
        while e != d:
            cyc.append(e)
            seen.add(e)
            e = perm[e]
        out.append(tuple(cyc))
    return out


def enumerate_graphs(max_edges: int = 3, min_edges: int = 1, loops: bool = True,
                     trees_only: bool = False, seed: int | None = None,
                     budget: int = 4) -> list[tuple[GlueGraph, int]]:
    """Connected labelled graphs with cyclic orders, up to isomorphism, with |aut|.

    Edges x-x and y-y are excluded; a loop counts as an edge between equal labels, so loops occur
    only at z vertices.  ``seed`` randomizes the generation order (the output is sorted anyway).
    """
    if max_edges > budget:
        raise BudgetExceeded(f"max_edges={max_edges} exceeds the enumeration budget {budget}")
    found: dict = {}
    rng = random.Random(seed) if seed is not None else None
    if min_edges <= 0:
        for lab in LABELS:
            g = GlueGraph((lab,), ((),), ())
            found[canonical(g)[0]] = 1
    for E in range(max(1, min_edges), max_edges + 1):
        n = 2 * E
        alpha = tuple(d ^ 1 for d in range(n))
        perms = list(itertools.permutations(range(n)))
        if rng is not None:
            rng.shuffle(perms)
        for perm in perms:
            rot = _cycles(perm)
            V = len(rot)
            if trees_only and V != E + 1:
                continue
            label_choices = list(itertools.product(LABELS, repeat=V))
            if rng is not None:
                rng.shuffle(label_choices)
            base = GlueGraph(("z",) * V, tuple(rot), alpha)
            if not base.is_connected():
                continue
            for labs in label_choices:
                g = GlueGraph(tuple(labs), tuple(rot), alpha)
                if not allowed(g, loops):
                    continue
                code, aut = canonical(g)
                if code not in found:
                    found[code] = aut
    return [(from_code(c), a) for c, a in sorted(found.items())]


# ---------------------------------------------------------------------------------------
# substitution

@dataclass(frozen=True)
class Decoration:
    """f(h) = sign * series(scale * h): coefficient of h^n is sign * series[n] * scale^n."""
    series: LaurentSeries
    scale: ParamPoly = field(default_factory=lambda: ParamPoly.const(1))
    sign: int = 1

    def coeff(self, n: int) -> ParamPoly:
        c = self.series[n]
        if not c:
            return ParamPoly()
        return ParamPoly.const(self.sign * c) * (self.scale ** n)


def torus_decorations(D: int, p=None, q=None) -> dict[str, Decoration]:
    """f(x) = F(p h), f(y) = F(q h), f(z) = -F(pq h)."""
    pp = ParamPoly.p() if p is None else ParamPoly.const(p)
    qq = ParamPoly.q() if q is None else ParamPoly.const(q)
    F = wheel_log_series(2 * D + 2)
    return {"x": Decoration(F, pp), "y": Decoration(F, qq), "z": Decoration(F, pp * qq, -1)}


def _wheel_with_slots(sizes, slot_maps):
    """Disjoint wheels; returns the diagram and the univalent dart of each (vertex, slot)."""
    wheels = [wheel_diagram(n) for n in sizes]
    d = Diagram.disjoint(*wheels)
    leg_of, off = {}, 0
    for v, n in enumerate(sizes):
        for s in range(n):
            leg_of[(v, s)] = off + 3 * n + s
        off += 4 * n
    return d, leg_of


def _glue_graph(g: GlueGraph, sizes, assign) -> Diagram:
    """``assign[d]`` = wheel slot of graph dart d at its vertex."""
    d, leg_of = _wheel_with_slots(sizes, None)
    vo = g.vertex_of()
    pairs = []
    for x in range(len(g.alpha)):
        y = g.alpha[x]
        if x < y:
            pairs.append((leg_of[(vo[x], assign[x])], leg_of[(vo[y], assign[y])]))
    return glue(d, None, pairs)


def _cyclic_injections(k: int, n: int):
    """Cyclic-order-preserving injections of k ordered darts into n cyclic slots."""
    if k == 0:
        yield ()
        return
    for subset in itertools.combinations(range(n), k):
        for r in range(k):
            yield tuple(subset[(j + r) % k] for j in range(k))


def _wheel_sizes(g: GlueGraph, f: dict[str, Decoration], D: int):
    """Wheel sizes n_v >= max(k_v, 1) with nonzero coefficient and total degree N - E <= D."""
    choices = []
    for v in range(g.n_vertices):
        k = g.valency(v)
        lo = max(k, 1)
        hi = D + g.n_edges
        choices.append([n for n in range(lo, hi + 1) if f[g.labels[v]].coeff(n)])
    for sizes in itertools.product(*choices):
        if sum(sizes) - g.n_edges <= D:
            yield sizes


def sub_bruteforce(g: GlueGraph, f: dict[str, Decoration], D: int,
                   quotient: QuotientBasis | None = None) -> DiagramSum:
    """Replace each vertex by its wheel series and sum over all cyclic-order-preserving gluings."""
    out = DiagramSum(max_degree=D)
    for sizes in _wheel_sizes(g, f, D):
        w = ParamPoly.const(1)
        for v, n in enumerate(sizes):
            w = w * f[g.labels[v]].coeff(n)
        per_vertex = [list(_cyclic_injections(g.valency(v), sizes[v])) for v in range(g.n_vertices)]
        counts: dict = defaultdict(int)
        for choice in itertools.product(*per_vertex):
            assign = {}
            for v, slots in enumerate(choice):
                for d, s in zip(g.rot[v], slots):
                    assign[d] = s
            key, s = canonicalize(_glue_graph(g, sizes, assign))
            if s:
                counts[key] += s
        for key, m in counts.items():
            if m:
                out.add_term(key, w * m)
    return quotient.project(out) if quotient is not None else out


def sub_graph_sum(D: int, f: dict[str, Decoration] | None = None, p=None, q=None,
                  quotient: QuotientBasis | None = None, loops: bool = True) -> DiagramSum:
    """sub(G, f) with G = sum over all graphs (pq)^{-|E|}/|aut| Gamma = exp(connected part)."""
    quot = quotient if quotient is not None else quotient_for(D)
    pp = ParamPoly.p() if p is None else ParamPoly.const(p)
    qq = ParamPoly.q() if q is None else ParamPoly.const(q)
    f = f if f is not None else torus_decorations(D, p, q)
    inv = (pp * qq) ** -1 if p is None or q is None else ParamPoly.const(Fraction(1) / (pp * qq).constant())
    conn = DiagramSum(max_degree=D)
    for g, aut in enumerate_graphs(D, min_edges=0, loops=loops):
        w = (inv ** g.n_edges) * Fraction(1, aut)
        conn = conn + sub_bruteforce(g, f, D).scale(w)
    return quot.project(conn.exp(D))


@dataclass
class EquationReport:
    degree: int
    equal: bool
    per_degree: dict[int, bool]
    discrepancies: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"degree": self.degree, "equal": self.equal,
                "per_degree": {str(k): v for k, v in self.per_degree.items()},
                "discrepancies": self.discrepancies}


def compare_sums(lhs: DiagramSum, rhs: DiagramSum, D: int) -> EquationReport:
    per = {n: True for n in range(D + 1)}
    disc = []
    from .jacobi import key_degree
    for k in sorted(set(lhs.terms) | set(rhs.terms)):
        a, b = lhs[k], rhs[k]
        if a != b:
            per[key_degree(k)] = False
            disc.append({"diagram": describe_key(k), "degree": key_degree(k),
                         "lhs": repr(a), "rhs": repr(b)})
    return EquationReport(D, not disc, per, disc)


def verify_eq_sub(D: int = 2, p=None, q=None, quotient: QuotientBasis | None = None,
                  loops: bool = True) -> EquationReport:
    """d_{Omega^{-1}}(_q Omega . Omega_p exp(pq/2 strut)) versus sub(G, f) exp(pq/2 strut)."""
    from .kontsevich import torus_core
    quot = quotient if quotient is not None else quotient_for(D)
    lhs = torus_core(D, p, q, quot)
    pp = ParamPoly.p() if p is None else ParamPoly.const(p)
    qq = ParamPoly.q() if q is None else ParamPoly.const(q)
    rhs = quot.project(sub_graph_sum(D, None, p, q, quot, loops) * strut_exp(pp * qq * Fraction(1, 2), D))
    return compare_sums(lhs, rhs, D)


# ---------------------------------------------------------------------------------------
# trees

def sub_tree_closed(g: GlueGraph, f: dict[str, LaurentSeries] | dict[str, Decoration]) -> dict[int, LaurentSeries]:
    """Per-vertex series d^k f(y) / (k-1)! (f itself at an isolated vertex), for a tree."""
    if not g.is_tree():
        raise ValueError("closed substitution formula needs a tree")
    out = {}
    for v in range(g.n_vertices):
        s = f[g.labels[v]]
        s = s.series * s.sign if isinstance(s, Decoration) else s
        k = g.valency(v)
        out[v] = s if k == 0 else s.derivative(k) * Fraction(1, factorial(k - 1))
    return out


def _compositions(m: int, k: int):
    if k == 1:
        yield (m,)
        return
    for first in range(m + 1):
        for rest in _compositions(m - first, k - 1):
            yield (first,) + rest


def expand_tree_closed(g: GlueGraph, f: dict[str, Decoration], D: int,
                       quotient: QuotientBasis | None = None) -> DiagramSum:
    """Turn the closed per-vertex series back into diagrams.

    At a vertex with k edges the coefficient of y^m is spread evenly over the ways of placing m
    hairs in the k gaps between consecutive edges on the vertex circle.
    """
    closed = sub_tree_closed(g, f)
    out = DiagramSum(max_degree=D)
    per_vertex = []
    for v in range(g.n_vertices):
        k = g.valency(v)
        dec = f[g.labels[v]]
        opts = []
        for m in range(0, D + g.n_edges - k + 1):
            n = m + k
            if n < 1:
                continue
            c = closed[v][m]
            if not c:
                continue
            coeff = ParamPoly.const(c) * (dec.scale ** n)
            if k == 0:
                opts.append((n, coeff, [()]))
            else:
                comps = list(_compositions(m, k))
                slots = []
                for comp in comps:
                    pos, s = 0, []
                    for gap in comp:
                        s.append(pos)
                        pos += gap + 1
                    slots.append(tuple(s))
                opts.append((n, coeff * Fraction(1, len(comps)), slots))
        per_vertex.append(opts)
    for choice in itertools.product(*per_vertex):
        sizes = [c[0] for c in choice]
        if sum(sizes) - g.n_edges > D:
            continue
        w = ParamPoly.const(1)
        for c in choice:
            w = w * c[1]
        for slot_choice in itertools.product(*(c[2] for c in choice)):
            assign = {}
            for v, slots in enumerate(slot_choice):
                for d, s in zip(g.rot[v], slots):
                    assign[d] = s
            out.add_diagram(_glue_graph(g, sizes, assign), w)
    return quotient.project(out) if quotient is not None else out


@dataclass
class DecoratedTree:
    graph: GlueGraph
    aut: int
    decorations: list[dict]

    def check(self) -> bool:
        return sum(d["k"] for d in self.decorations) == 2 * self.graph.n_edges

    def weight(self) -> Fraction:
        return Fraction(1, self.aut)

    def to_json(self) -> dict:
        return {"edges": [list(e) for e in self.graph.edges()], "labels": list(self.graph.labels),
                "aut": self.aut, "decorations": self.decorations,
                "circles": [list(r) for r in self.graph.rot]}


def tree_expansion(max_edges: int = 3) -> dict:
    """Trees of the asymptotic expansion with their decorations; global factor exp(theta/48)."""
    trees = []
    for g, aut in enumerate_graphs(max_edges, trees_only=True):
        decs = []
        for v in range(g.n_vertices):
            k = g.valency(v)
            kind = "Fplus_deriv_over_factorial" if g.labels[v] == "z" else "minus_half_inverse_power"
            expr = f"F+^({k})(y_{v})/{k - 1}!" if g.labels[v] == "z" else f"-1/(2 y_{v}^{k})"
            decs.append({"vertex": v, "label": g.labels[v], "kind": kind, "k": k, "expr": expr})
        t = DecoratedTree(g, aut, decs)
        assert t.check()
        trees.append(t)
    return {"global_factor": "exp(theta/48)", "trees": trees}


def pole_remainder(n: int, order: int = 6) -> LaurentSeries:
    """F+^{(n)}(h) - (-1)^{n-1} (n-1)! / (2 h^n); regular at h = 0."""
    s = fplus_derivative(n, order)
    pole = LaurentSeries.monomial("h", -n, Fraction((-1) ** (n - 1) * factorial(n - 1), 2))
    return s - pole


def verify_eq_ntor(D: int = 2, quotient: QuotientBasis | None = None) -> dict:
    """Report on the tree formula for the non-wheel part at finite p, q (not asserted).

    Vertex series are derivatives of f+ = f +/- (1/2) log: the regular part is re-glued into
    diagrams, the singular part is listed as it stands.
    """
    from .jacobi import key_degree
    from .kontsevich import omega_pairing, theta_sum, z_torus
    quot = quotient if quotient is not None else quotient_for(D)
    pp, qq = ParamPoly.p(), ParamPoly.q()
    z = z_torus(D, None, None, quot)
    lhs = DiagramSum(max_degree=D)
    for k, v in z.terms.items():
        if k and not any(_betti_le_one(c) for c in k):
            lhs.add_term(k, v)
    f = torus_decorations(D)
    inv = (pp * qq) ** -1
    total = DiagramSum(max_degree=D)
    singular = []
    for g, aut in enumerate_graphs(D, trees_only=True):
        w = (inv ** g.n_edges) * Fraction(1, aut)
        # regular part: identical to the f-expansion except at m = 0 with the log correction,
        # which only changes negative powers, so re-glue through f and record the poles separately
        total = total + expand_tree_closed(g, f, D).scale(w)
        for v in range(g.n_vertices):
            k = g.valency(v)
            sign = 1 if g.labels[v] == "z" else -1
            # d^k of (+/- 1/2 log y) / (k-1)!
            c = Fraction(sign * (-1) ** (k - 1), 2)
            singular.append({"tree": g.to_json(), "vertex": v, "power": -k, "coeff": fstr(c)})
    rhs = quot.project(total * theta_sum(pp * qq * Fraction(1, 48), D).exp(D) * omega_pairing(D, quot).inverse(D))
    rhs_nw = DiagramSum(max_degree=D)
    for k, v in rhs.terms.items():
        if k and not any(_betti_le_one(c) for c in k):
            rhs_nw.add_term(k, v)
    rep = compare_sums(lhs, rhs_nw, D)
    return {"degree": D, "regular_part_equal": rep.equal, "per_degree": rep.per_degree,
            "discrepancies": rep.discrepancies, "singular_terms": singular,
            "singular_cancel": not singular,
            "lhs_degrees": sorted({key_degree(k) for k in lhs.terms})}


def _betti_le_one(code) -> bool:
    from .jacobi import code_betti
    return code_betti(code) <= 1
