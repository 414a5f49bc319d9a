"""Uni-trivalent (Jacobi) diagrams modulo AS and IHX, and the gluing operations between them.

A diagram is stored as a combinatorial map on darts (half-edges): ``sigma`` rotates the darts
around each vertex (a fixed point is a univalent vertex, a 3-cycle an oriented trivalent one)
and ``alpha`` pairs the two darts of every edge.  AS is absorbed by a canonical form that is
minimal over roots *and* over reversal of trivalent vertices, with sign (-1)^{#reversals}.
IHX is handled by exact row reduction per connected block.
"""
from __future__ import annotations

import itertools
import logging
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .algebra import ParamPoly

log = logging.getLogger(__name__)

Code = tuple  # (vertex sizes, alpha labels) of one connected component
Key = tuple  # sorted tuple of component codes


class VertexFreeLoop(RuntimeError):
    """A gluing closed up a component with no vertices."""


class BudgetExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------------------
# raw maps

@dataclass
class Diagram:
    sigma: list[int]
    alpha: list[int]

    def __post_init__(self):
        n = len(self.sigma)
        if len(self.alpha) != n:
            raise ValueError("sigma and alpha must act on the same darts")
        for d in range(n):
            a = self.alpha[d]
            if a == d or self.alpha[a] != d:
                raise ValueError("alpha must be a fixed-point-free involution")
        for d in range(n):
            size = 1
            e = self.sigma[d]
            while e != d:
                e = self.sigma[e]
                size += 1
                if size > 3:
                    break
            if size not in (1, 3):
                raise ValueError("every vertex must be univalent or trivalent")

    @property
    def n_darts(self):
        return len(self.sigma)

    def legs(self) -> list[int]:
        return [d for d in range(self.n_darts) if self.sigma[d] == d]

    def vertices(self) -> list[list[int]]:
        seen, out = set(), []
        for d in range(self.n_darts):
            if d in seen:
                continue
            cyc = [d]
            seen.add(d)
            e = self.sigma[d]
            while e != d:
                cyc.append(e)
                seen.add(e)
                e = self.sigma[e]
            out.append(cyc)
        return out

    def n_vertices(self) -> int:
        return len(self.vertices())

    @property
    def degree(self) -> Fraction:
        return Fraction(self.n_vertices(), 2)

    def components(self) -> list[list[int]]:
        n = self.n_darts
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d in range(n):
            for e in (self.sigma[d], self.alpha[d]):
                a, b = find(d), find(e)
                if a != b:
                    parent[a] = b
        groups = defaultdict(list)
        for d in range(n):
            groups[find(d)].append(d)
        return [sorted(g) for g in groups.values()]

    def reversed_at(self, vertex_dart: int) -> "Diagram":
        """Reverse the cyclic order at the vertex containing ``vertex_dart``."""
        sig = list(self.sigma)
        cyc = [vertex_dart, self.sigma[vertex_dart], self.sigma[self.sigma[vertex_dart]]]
        if len(set(cyc)) == 3:
            sig[cyc[0]], sig[cyc[1]], sig[cyc[2]] = cyc[2], cyc[0], cyc[1]
        return Diagram(sig, list(self.alpha))

    @staticmethod
    def disjoint(*ds: "Diagram") -> "Diagram":
        sig, alp, off = [], [], 0
        for d in ds:
            sig += [x + off for x in d.sigma]
            alp += [x + off for x in d.alpha]
            off += d.n_darts
        return Diagram(sig, alp)


def _search(sigma, alpha, darts, allow_flips: bool):
    """Branch-and-bound over root darts and (optionally) vertex reversals.

    A labelling is built breadth first: the darts of a newly reached vertex get consecutive
    labels starting at the entry dart, in rotation order or (when flips are allowed) reversed.
    The token sequence of the labelling (one token per dart position) is minimized
    lexicographically; prefixes already larger than the best are pruned.  Returns the minimal
    token sequence with its labelling order and the set of reversal parities achieving it.
    """
    best: list = [None, None]  # tokens, order
    parities: set = set()

    def emit_vertex(e, labels, order, flip):
        cyc = _cycle(sigma, e)
        if flip:
            cyc = [cyc[0], cyc[2], cyc[1]]
        for x in cyc:
            labels[x] = len(order)
            order.append(x)
        return -len(cyc)

    def run(labels, order, tokens, par, i, state):
        # state: 0 = equal to best so far, -1 = already smaller (or no best yet)
        while i < len(order):
            e = alpha[order[i]]
            if e in labels:
                tok = 2 * labels[e]
                tokens.append(tok)
                i += 1
                state = _step(tokens, state)
                if state is None:
                    return
                continue
            if sigma[e] == e or not allow_flips:
                tokens.append(emit_vertex(e, labels, order, False))
                i += 1
                state = _step(tokens, state)
                if state is None:
                    return
                continue
            for flip in (False, True):
                lab2, ord2, tok2 = dict(labels), list(order), list(tokens)
                tok2.append(emit_vertex(e, lab2, ord2, flip))
                st2 = _step(tok2, state)
                if st2 is not None:
                    run(lab2, ord2, tok2, par ^ flip, i + 1, st2)
            return
        cur = best[0]
        if cur is None or tokens < cur:
            best[0], best[1] = tokens, order
            parities.clear()
            parities.add(par)
        elif tokens == cur:
            parities.add(par)

    def _step(tokens, state):
        cur = best[0]
        if cur is None:
            return -1
        k = len(tokens) - 1
        if state == -1 and tokens[:k] >= cur[:k]:
            state = 0  # best improved meanwhile; re-anchor
            if tokens[:k] != cur[:k]:
                return None
        if state == 0:
            if tokens[k] > cur[k]:
                return None
            if tokens[k] < cur[k]:
                return -1
        return state

    for r in darts:
        if sigma[r] == r or not allow_flips:
            flips = (False,)
        else:
            flips = (False, True)
        for flip in flips:
            labels, order = {}, []
            tokens = [emit_vertex(r, labels, order, flip)]
            st0 = _step(tokens, -1 if best[0] is None else 0)
            if st0 is not None:
                run(labels, order, tokens, int(flip), 0, st0)
    return best[0], best[1], parities


def _canon_component(sigma, alpha, darts) -> tuple[Code, int]:
    """Canonical code of a connected component up to reversal of trivalent vertices.

    Returns ``(code, sign)`` where sign is the parity of the reversals realizing the code; sign
    is 0 when the component equals its own negative under AS.
    """
    _, order, parities = _search(sigma, alpha, darts, True)
    # the labelled vertices are written in label order, so re-read sizes from the labelling
    code = _decoded_code(sigma, alpha, order)
    if len(parities) == 2:
        return code, 0
    return code, (-1 if parities.pop() else 1)


def _decoded_code(sigma, alpha, order) -> Code:
    """Code of the labelling: vertex sizes in label order and partner labels.

    The search may list a vertex's darts against the rotation (a reversal); the code records the
    labelled cyclic order, which is the rotation of the canonical representative.
    """
    labels = {d: i for i, d in enumerate(order)}
    sizes = []
    i = 0
    while i < len(order):
        s = len(_cycle(sigma, order[i]))
        sizes.append(s)
        i += s
    return (tuple(sizes), tuple(labels[alpha[d]] for d in order))


def _cycle(sigma, d):
    out = [d]
    e = sigma[d]
    while e != d:
        out.append(e)
        e = sigma[e]
    return out


def _oriented_code(sigma, alpha, darts) -> Code:
    _, order, _ = _search(sigma, alpha, darts, False)
    return _decoded_code(sigma, alpha, order)


_CANON_CACHE: dict[Code, tuple[Code, int]] = {}


def canonical_component(sigma, alpha, darts) -> tuple[Code, int]:
    oc = _oriented_code(sigma, alpha, darts)
    hit = _CANON_CACHE.get(oc)
    if hit is None:
        dec = decode_component(oc)
        hit = _canon_component(dec.sigma, dec.alpha, list(range(dec.n_darts)))
        _CANON_CACHE[oc] = hit
    return hit


def canonicalize(d: Diagram) -> tuple[Key, int]:
    """Canonical key (sorted component codes) and sign; sign 0 means the diagram is 0 by AS."""
    codes, sign = [], 1
    for comp in d.components():
        c, s = canonical_component(d.sigma, d.alpha, comp)
        if s == 0:
            return tuple(sorted(codes + [c])), 0
        codes.append(c)
        sign *= s
    return tuple(sorted(codes)), sign


def decode_component(code: Code) -> Diagram:
    sizes, alab = code
    sig = []
    start = 0
    for s in sizes:
        if s == 1:
            sig.append(start)
        else:
            sig += [start + 1, start + 2, start]
        start += s
    return Diagram(sig, list(alab))


def decode(key: Key) -> Diagram:
    return Diagram.disjoint(*(decode_component(c) for c in key)) if key else Diagram([], [])


def code_shape(code: Code) -> tuple[int, int]:
    """(trivalent count, univalent count) of a component code."""
    sizes = code[0]
    t = sum(1 for s in sizes if s == 3)
    return t, len(sizes) - t


def code_degree(code: Code) -> int:
    return len(code[0]) // 2


def key_degree(key: Key) -> int:
    return sum(len(c[0]) for c in key) // 2


def key_legs(key: Key) -> int:
    return sum(code_shape(c)[1] for c in key)


def key_trivalent(key: Key) -> int:
    return sum(code_shape(c)[0] for c in key)


def code_betti(code: Code) -> int:
    t, u = code_shape(code)
    edges = (3 * t + u) // 2
    return edges - (t + u) + 1


# ---------------------------------------------------------------------------------------
# named diagrams

def wheel_diagram(n: int) -> Diagram:
    """Circle with n legs; every trivalent vertex ordered (incoming, outgoing, leg)."""
    if n < 1:
        raise ValueError("wheels need at least one leg")
    sig = [0] * (4 * n)
    alp = [0] * (4 * n)
    for i in range(n):
        cin, cout, leg = 3 * i, 3 * i + 1, 3 * i + 2
        sig[cin], sig[cout], sig[leg] = cout, leg, cin
        nxt = 3 * ((i + 1) % n)
        alp[cout], alp[nxt] = nxt, cout
        u = 3 * n + i
        sig[u] = u
        alp[leg], alp[u] = u, leg
    return Diagram(sig, alp)


def strut_diagram() -> Diagram:
    return Diagram([0, 1], [1, 0])


def empty_diagram() -> Diagram:
    return Diagram([], [])


def key_of(d: Diagram) -> tuple[Key, int]:
    return canonicalize(d)


def wheel_key(n: int) -> tuple[Key, int]:
    return canonicalize(wheel_diagram(n))


STRUT = canonicalize(strut_diagram())[0]
EMPTY: Key = ()


def glue(a: Diagram, b: Diagram | None, pairs: Iterable[tuple[int, int]]) -> Diagram:
    """Glue legs of ``a`` to legs of ``b`` (dart ids local to each); ``b=None`` glues within ``a``.

    Each glued pair of univalent darts disappears and their neighbours are joined by an edge.
    """
    if b is None:
        base, off = a, 0
    else:
        base, off = Diagram.disjoint(a, b), a.n_darts
    match = {}
    for x, y in pairs:
        y = y + off
        if base.sigma[x] != x or base.sigma[y] != y:
            raise ValueError("only univalent darts can be glued")
        if x in match or y in match or x == y:
            raise ValueError("a leg is glued twice")
        match[x], match[y] = y, x
    if not match:
        return base
    keep = [d for d in range(base.n_darts) if d not in match]
    new_id = {d: i for i, d in enumerate(keep)}
    alpha = [0] * len(keep)
    visited = set()
    for d in keep:
        x = base.alpha[d]
        while x in match:
            visited.add(x)
            y = match[x]
            visited.add(y)
            x = base.alpha[y]
        alpha[new_id[d]] = new_id[x]
    if len(visited) != len(match):
        raise VertexFreeLoop("gluing produced a circle without vertices")
    sigma = [new_id[base.sigma[d]] for d in keep]
    return Diagram(sigma, alpha)


# ---------------------------------------------------------------------------------------
# enumeration of connected diagrams per block

def _multigraphs(t: int, legs: list[int]) -> Iterator[dict]:
    """Symmetric multiplicity matrices on t vertices with free valence 3 - legs[i]."""
    need = [3 - l for l in legs]
    pairs = [(i, j) for i in range(t) for j in range(i, t)]
    mult: dict = {}

    def rec(k):
        if k == len(pairs):
            if all(x == 0 for x in need):
                yield dict(mult)
            return
        i, j = pairs[k]
        # vertex i must be saturated after its last pair (i, t-1)
        if i == j:
            top = need[i] // 2
        else:
            top = min(need[i], need[j])
        for m in range(top, -1, -1):
            use_i = 2 * m if i == j else m
            use_j = 0 if i == j else m
            need[i] -= use_i
            need[j] -= use_j
            if j == t - 1 and need[i] != 0:
                pass
            else:
                if m:
                    mult[(i, j)] = m
                yield from rec(k + 1)
                mult.pop((i, j), None)
            need[i] += use_i
            need[j] += use_j

    yield from rec(0)


def _build_map(t: int, legs: list[int], mult: dict, rng: random.Random | None = None) -> Diagram | None:
    slots: list[list[int]] = [[] for _ in range(t)]
    alpha: dict[int, int] = {}
    nd = 0

    def new(v):
        nonlocal nd
        d = nd
        nd += 1
        if v is not None:
            slots[v].append(d)
        return d

    items = sorted(mult.items())
    if rng is not None:
        rng.shuffle(items)
    for (i, j), m in items:
        for _ in range(m):
            a, b = new(i), new(j)
            alpha[a], alpha[b] = b, a
    univ = []
    order = list(range(t))
    if rng is not None:
        rng.shuffle(order)
    for i in order:
        for _ in range(legs[i]):
            a = new(i)
            u = new(None)
            univ.append(u)
            alpha[a], alpha[u] = u, a
    sigma = [0] * nd
    for v in range(t):
        s = slots[v]
        if rng is not None:
            rng.shuffle(s)
        for k in range(3):
            sigma[s[k]] = s[(k + 1) % 3]
    for u in univ:
        sigma[u] = u
    d = Diagram(sigma, [alpha[x] for x in range(nd)])
    if len(d.components()) != 1:
        return None
    return d


def enumerate_block(t: int, u: int, seed: int | None = None) -> dict[Code, Diagram]:
    """All connected diagrams with t trivalent and u univalent vertices, up to AS sign.

    Returns canonical code -> a representative map (zero classes included).
    """
    out: dict[Code, Diagram] = {}
    if (3 * t + u) % 2:
        return out
    if t == 0:
        if u == 2:
            d = strut_diagram()
            out[canonicalize(d)[0][0]] = d
        return out
    rng = random.Random(seed) if seed is not None else None
    leg_vectors = set()
    for combo in itertools.combinations_with_replacement(range(t), u):
        legs = [0] * t
        for i in combo:
            legs[i] += 1
        if max(legs) <= 3:
            leg_vectors.add(tuple(sorted(legs, reverse=True)))
    for legs in sorted(leg_vectors):
        legs = list(legs)
        for mult in _multigraphs(t, legs):
            d = _build_map(t, legs, mult, rng)
            if d is None:
                continue
            (code,), _ = canonicalize(d)
            if code not in out:
                out[code] = decode_component(code)
    return out


def ihx_relations(d: Diagram) -> list[dict[Code, int]]:
    """One three-term relation per edge joining two distinct trivalent vertices of a connected diagram."""
    rels = []
    seen_edges = set()
    for da in range(d.n_darts):
        db = d.alpha[da]
        if d.sigma[da] == da or d.sigma[db] == db:
            continue
        cyc_a, cyc_b = _cycle(d.sigma, da), _cycle(d.sigma, db)
        if set(cyc_a) == set(cyc_b):
            continue  # loop edge
        e = frozenset((da, db))
        if e in seen_edges:
            continue
        seen_edges.add(e)
        x, y = d.sigma[da], d.sigma[d.sigma[da]]
        z, r = d.sigma[db], d.sigma[d.sigma[db]]
        row: dict[Code, int] = defaultdict(int)
        for (a1, a2), (b1,) in (((x, y), (z,)), ((y, z), (x,)), ((z, x), (y,))):
            sig = list(d.sigma)
            # vertex a: (da, a1, a2); vertex b: (db, b1, r)
            sig[da], sig[a1], sig[a2] = a1, a2, da
            sig[db], sig[b1], sig[r] = b1, r, db
            (code,), s = canonicalize(Diagram(sig, list(d.alpha)))
            if s:
                row[code] += s
        row = {k: v for k, v in row.items() if v}
        rels.append(row)
    return rels


# ---------------------------------------------------------------------------------------
# exact row reduction

def _is_wheel_code(code: Code) -> bool:
    t, u = code_shape(code)
    if t != u or t == 0:
        return False
    return canonicalize(wheel_diagram(t))[0] == (code,)


def _column_rank(code: Code) -> tuple:
    # later columns become free (basis) columns; prefer wheels and small Betti number
    return (1 if _is_wheel_code(code) else 0, -code_betti(code), code)


@dataclass
class Block:
    shape: tuple[int, int]
    classes: list[Code]
    zero: set
    basis: list[Code]
    projection: dict[Code, dict[Code, Fraction]]
    relations: list[dict[Code, int]] = field(default_factory=list)


def _row_reduce(columns: list[Code], rows: list[dict[Code, Fraction]]):
    pos = {c: i for i, c in enumerate(columns)}
    pivots: dict[Code, dict[Code, Fraction]] = {}
    for row in rows:
        r = {k: Fraction(v) for k, v in row.items() if v}
        # eliminate existing pivots
        changed = True
        while r and changed:
            changed = False
            for c in sorted(r, key=pos.__getitem__):
                if c in pivots:
                    f = r[c]
                    for k, v in pivots[c].items():
                        nv = r.get(k, 0) - f * v
                        if nv:
                            r[k] = nv
                        else:
                            r.pop(k, None)
                    changed = True
                    break
        if not r:
            continue
        pc = min(r, key=pos.__getitem__)
        f = r[pc]
        r = {k: v / f for k, v in r.items()}
        # back-substitute into existing pivot rows
        for c, prow in pivots.items():
            if pc in prow:
                g = prow[pc]
                for k, v in r.items():
                    nv = prow.get(k, 0) - g * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        pivots[pc] = r
    return pivots


def build_block(t: int, u: int, seed: int | None = None) -> Block:
    reps = enumerate_block(t, u, seed)
    zero = set()
    for code in reps:
        if canonicalize(decode_component(code))[1] == 0:
            zero.add(code)
    rels = []
    for code, d in reps.items():
        if code in zero:
            continue
        rels.extend(ihx_relations(d))
    columns = sorted((c for c in reps if c not in zero), key=_column_rank)
    rows = [{k: Fraction(v) for k, v in r.items() if k not in zero} for r in rels]
    unknown = {k for r in rels for k in r} - set(reps)
    if unknown:
        raise AssertionError(f"IHX produced diagrams outside the enumerated block {(t, u)}")
    pivots = _row_reduce(columns, rows)
    basis = [c for c in columns if c not in pivots]
    proj: dict[Code, dict[Code, Fraction]] = {c: {} for c in zero}
    for c in columns:
        if c in pivots:
            proj[c] = {k: -v for k, v in pivots[c].items() if k != c}
        else:
            proj[c] = {c: Fraction(1)}
    return Block((t, u), sorted(reps), zero, basis, proj, rels)


class QuotientBasis:
    """AS/IHX quotient of connected diagrams, built block by block on demand."""

    def __init__(self, max_degree: int = 3, seed: int | None = None, max_classes: int = 5000):
        self.max_degree = max_degree
        self.seed = seed
        self.max_classes = max_classes
        self.blocks: dict[tuple[int, int], Block] = {}

    def block(self, t: int, u: int) -> Block:
        b = self.blocks.get((t, u))
        if b is None:
            if (t + u) // 2 > self.max_degree:
                raise BudgetExceeded(f"block {(t, u)} exceeds degree budget {self.max_degree}")
            b = build_block(t, u, self.seed)
            if len(b.classes) > self.max_classes:
                raise BudgetExceeded(f"block {(t, u)} has {len(b.classes)} diagrams")
            log.info("block t=%d u=%d: %d diagrams, %d zero, dimension %d",
                     t, u, len(b.classes), len(b.zero), len(b.basis))
            self.blocks[(t, u)] = b
        return b

    def shapes(self, degree: int) -> list[tuple[int, int]]:
        out = []
        for t in range(0, 2 * degree + 1):
            u = 2 * degree - t
            if (3 * t + u) % 2 == 0 and (t > 0 or u == 2):
                out.append((t, u))
        return out

    def build(self, upto: int | None = None) -> "QuotientBasis":
        for deg in range(1, (upto if upto is not None else self.max_degree) + 1):
            for t, u in self.shapes(deg):
                self.block(t, u)
        return self

    def connected_dimension(self, degree: int) -> int:
        return sum(len(self.block(t, u).basis) for t, u in self.shapes(degree))

    def connected_basis(self, degree: int) -> list[Code]:
        return [c for t, u in self.shapes(degree) for c in self.block(t, u).basis]

    def dimension(self, degree: int) -> int:
        """Dimension of the full degree piece (products of connected basis elements)."""
        counts = [self.connected_dimension(d) for d in range(1, degree + 1)]
        # number of multisets with total degree = degree
        ways = [1] + [0] * degree
        for d, c in enumerate(counts, start=1):
            for _ in range(c):
                for s in range(degree, d - 1, -1):
                    acc = 0
                    k = 1
                    while k * d <= s:
                        acc += ways[s - k * d] if False else 0
                        k += 1
                # multiset of one kind: unlimited repetitions
                for s in range(d, degree + 1):
                    ways[s] += ways[s - d]
        return ways[degree]

    def project_code(self, code: Code) -> dict[Code, Fraction]:
        t, u = code_shape(code)
        return self.block(t, u).projection[code]

    def project_key(self, key: Key) -> dict[Key, Fraction]:
        out: dict[Key, Fraction] = {(): Fraction(1)}
        for c in key:
            pc = self.project_code(c)
            nxt: dict[Key, Fraction] = defaultdict(Fraction)
            for k, v in out.items():
                for b, w in pc.items():
                    nxt[tuple(sorted(k + (b,)))] += v * w
            out = {k: v for k, v in nxt.items() if v}
            if not out:
                break
        return out

    def project(self, s: "DiagramSum") -> "DiagramSum":
        out = DiagramSum(max_degree=s.max_degree)
        for key, coeff in s.terms.items():
            for k, w in self.project_key(key).items():
                out.add_term(k, coeff * w)
        return out

    def is_basis_key(self, key: Key) -> bool:
        return all(self.project_code(c) == {c: 1} for c in key)


_DEFAULT_QUOTIENTS: dict[int, QuotientBasis] = {}


def build_quotient(D: int, seed: int | None = None) -> QuotientBasis:
    if seed is None:
        q = _DEFAULT_QUOTIENTS.get(D)
        if q is None:
            q = QuotientBasis(D).build()
            _DEFAULT_QUOTIENTS[D] = q
        return q
    return QuotientBasis(D, seed=seed).build()


def quotient_for(D: int) -> QuotientBasis:
    """Shared quotient whose blocks are built lazily (only the ones a computation touches)."""
    for d, q in _DEFAULT_QUOTIENTS.items():
        if d >= D:
            return q
    q = QuotientBasis(D)
    _DEFAULT_QUOTIENTS[D] = q
    return q


# ---------------------------------------------------------------------------------------
# formal sums

class DiagramSum:
    """Finite linear combination of canonical diagrams with :class:`ParamPoly` coefficients.

    Terms of degree above ``max_degree`` are dropped on insertion.
    """

    def __init__(self, terms: Mapping[Key, object] | None = None, max_degree: int | None = None):
        self.max_degree = max_degree
        self.terms: dict[Key, ParamPoly] = {}
        if terms:
            for k, v in terms.items():
                self.add_term(k, v)

    @classmethod
    def one(cls, max_degree=None) -> "DiagramSum":
        return cls({EMPTY: 1}, max_degree)

    @classmethod
    def of(cls, d: Diagram, coeff=1, max_degree=None) -> "DiagramSum":
        key, s = canonicalize(d)
        out = cls(max_degree=max_degree)
        if s:
            out.add_term(key, _pp(coeff) * s)
        return out

    def add_term(self, key: Key, coeff) -> None:
        if self.max_degree is not None and key_degree(key) > self.max_degree:
            return
        coeff = _pp(coeff)
        if not coeff:
            return
        cur = self.terms.get(key)
        new = coeff if cur is None else cur + coeff
        if new:
            self.terms[key] = new
        else:
            self.terms.pop(key, None)

    def add_diagram(self, d: Diagram, coeff) -> None:
        key, s = canonicalize(d)
        if s:
            self.add_term(key, _pp(coeff) * s)

    def copy(self, max_degree="same") -> "DiagramSum":
        md = self.max_degree if max_degree == "same" else max_degree
        return DiagramSum(self.terms, md)

    def __getitem__(self, key: Key) -> ParamPoly:
        return self.terms.get(key, ParamPoly())

    def coefficient(self, d: Diagram) -> ParamPoly:
        key, s = canonicalize(d)
        return self[key] * s if s else ParamPoly()

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __eq__(self, other):
        return isinstance(other, DiagramSum) and self.terms == other.terms

    def _md(self, other):
        ms = [m for m in (self.max_degree, getattr(other, "max_degree", None)) if m is not None]
        return min(ms) if ms else None

    def __add__(self, other: "DiagramSum") -> "DiagramSum":
        out = DiagramSum(self.terms, self._md(other))
        for k, v in other.terms.items():
            out.add_term(k, v)
        return out

    def __neg__(self):
        return DiagramSum({k: -v for k, v in self.terms.items()}, self.max_degree)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DiagramSum":
        c = _pp(c)
        return DiagramSum({k: v * c for k, v in self.terms.items()}, self.max_degree)

    def __mul__(self, other):
        if not isinstance(other, DiagramSum):
            return self.scale(other)
        md = self._md(other)
        out = DiagramSum(max_degree=md)
        for k1, v1 in self.terms.items():
            d1 = key_degree(k1)
            for k2, v2 in other.terms.items():
                if md is not None and d1 + key_degree(k2) > md:
                    continue
                out.add_term(tuple(sorted(k1 + k2)), v1 * v2)
        return out

    __rmul__ = scale

    def truncate(self, D: int) -> "DiagramSum":
        return DiagramSum({k: v for k, v in self.terms.items() if key_degree(k) <= D}, D)

    def degree_part(self, n: int) -> "DiagramSum":
        return DiagramSum({k: v for k, v in self.terms.items() if key_degree(k) == n}, self.max_degree)

    def map_coeffs(self, fn) -> "DiagramSum":
        return DiagramSum({k: fn(k, v) for k, v in self.terms.items()}, self.max_degree)

    def exp(self, max_degree: int | None = None) -> "DiagramSum":
        """exp of a sum without constant term, by disjoint-union powers."""
        md = max_degree if max_degree is not None else self.max_degree
        if md is None:
            raise ValueError("exp needs a truncation degree")
        if EMPTY in self.terms:
            raise ValueError("exp argument must have no constant term")
        x = DiagramSum(self.terms, md)
        out, power = DiagramSum.one(md), DiagramSum.one(md)
        k = 1
        while True:
            power = (power * x).scale(Fraction(1, k))
            if not power.terms:
                break
            out = out + power
            k += 1
        return out

    def inverse(self, max_degree: int | None = None) -> "DiagramSum":
        """Multiplicative inverse; constant term must be 1."""
        md = max_degree if max_degree is not None else self.max_degree
        if self[EMPTY] != ParamPoly.const(1):
            raise ValueError("inverse needs constant term 1")
        x = DiagramSum({k: v for k, v in self.terms.items() if k != EMPTY}, md)
        out, power = DiagramSum.one(md), DiagramSum.one(md)
        while True:
            power = -(power * x)
            if not power.terms:
                break
            out = out + power
        return out

    def to_json(self) -> list[dict]:
        out = []
        for k in sorted(self.terms):
            d = decode(k)
            out.append({
                "diagram": {"sigma": d.sigma, "alpha": d.alpha,
                            "components": [[list(c[0]), list(c[1])] for c in k]},
                "degree": key_degree(k),
                "coeff": self.terms[k].to_json(),
            })
        return out

    @classmethod
    def from_json(cls, items, max_degree=None) -> "DiagramSum":
        out = cls(max_degree=max_degree)
        for it in items:
            key = tuple(sorted((tuple(c[0]), tuple(c[1])) for c in it["diagram"]["components"]))
            out.add_term(key, ParamPoly.from_json(it["coeff"]))
        return out

    def __repr__(self):
        parts = [f"({v})*{describe_key(k)}" for k, v in sorted(self.terms.items())]
        return "DiagramSum[" + " + ".join(parts) + "]"


def _pp(c) -> ParamPoly:
    return c if isinstance(c, ParamPoly) else ParamPoly.const(c)


def describe_key(key: Key) -> str:
    if not key:
        return "1"
    names = []
    for c in key:
        t, u = code_shape(c)
        if c == STRUT[0]:
            names.append("strut")
        elif _is_wheel_code(c):
            names.append(f"w{t}")
        elif u == 0 and t == 2:
            names.append("theta")
        else:
            names.append(f"D(t={t},u={u},b1={code_betti(c)})")
    return "*".join(names)


# ---------------------------------------------------------------------------------------
# gluing operations

def _legs_of(key: Key) -> tuple[Diagram, list[int]]:
    d = decode(key)
    return d, d.legs()


def _glue_terms(a: DiagramSum, b: DiagramSum, mode: str, D: int | None,
                weights: tuple | None = None, quotient: QuotientBasis | None = None) -> DiagramSum:
    """Shared driver for the three gluing brackets.

    ``mode``: "all" (every leg of A to every leg of B), "partial" (every leg of A to some legs
    of B), "some" (partial matchings; weights ``(wa, wb)`` multiply per unmatched leg).
    """
    out = DiagramSum(max_degree=D)
    cache: dict = {}
    for ka, ca in a.terms.items():
        da, la = _legs_of(ka)
        for kb, cb in b.terms.items():
            db, lb = _legs_of(kb)
            na, nb = len(la), len(lb)
            if mode == "all" and na != nb:
                continue
            if mode == "partial" and na > nb:
                continue
            coeff = ca * cb
            counts: dict[tuple[Key, int, int], int] = defaultdict(int)
            for pairs in _matchings(la, lb, mode):
                k = len(pairs)
                # result degree = deg A + deg B - k
                if D is not None and key_degree(ka) + key_degree(kb) - k > D:
                    continue
                ck = (ka, kb, tuple(sorted(pairs)))
                res = cache.get(ck)
                if res is None:
                    res = canonicalize(glue(da, db, pairs))
                    cache[ck] = res
                key, s = res
                if s:
                    counts[(key, na - k, nb - k)] += s
            for (key, ra, rb), m in counts.items():
                if not m:
                    continue
                w = coeff * m
                if weights is not None:
                    wa, wb = weights
                    w = w * (wa ** ra) * (wb ** rb)
                out.add_term(key, w)
    return quotient.project(out) if quotient is not None else out


def _matchings(la: list[int], lb: list[int], mode: str):
    if mode == "all":
        for perm in itertools.permutations(lb):
            yield list(zip(la, perm))
    elif mode == "partial":
        for img in itertools.permutations(lb, len(la)):
            yield list(zip(la, img))
    else:
        for k in range(min(len(la), len(lb)) + 1):
            for sa in itertools.combinations(la, k):
                for img in itertools.permutations(lb, k):
                    yield list(zip(sa, img))


def glue_all(a: DiagramSum, b: DiagramSum, D: int | None = None, quotient=None) -> DiagramSum:
    """<A, B>: glue all legs of A to all legs of B, summed over bijections."""
    return _glue_terms(a, b, "all", D, quotient=quotient)


def partial_glue(a: DiagramSum, b: DiagramSum, D: int | None = None, quotient=None) -> DiagramSum:
    """d_A B: glue all legs of A into some legs of B, summed over injections."""
    return _glue_terms(a, b, "partial", D, quotient=quotient)


def weighted_glue(a: DiagramSum, b: DiagramSum, qw=None, pw=None, D: int | None = None,
                  quotient=None) -> DiagramSum:
    """_q A . B_p: partial matchings, weighted q^(free legs of A) p^(free legs of B)."""
    qw = ParamPoly.q() if qw is None else _pp(qw)
    pw = ParamPoly.p() if pw is None else _pp(pw)
    return _glue_terms(a, b, "some", D, (qw, pw), quotient=quotient)


def glue_product(a: DiagramSum, b: DiagramSum, D: int | None = None, quotient=None) -> DiagramSum:
    """A . B: partial matchings without weights."""
    return _glue_terms(a, b, "some", D, (ParamPoly.const(1), ParamPoly.const(1)), quotient=quotient)


def wheels_series(coeffs: Mapping[int, object], max_degree: int) -> DiagramSum:
    """wh(f) = sum_n f_n w_n, truncated at degree max_degree (w_n has degree n)."""
    out = DiagramSum(max_degree=max_degree)
    for n, c in coeffs.items():
        if n < 1 or n > max_degree:
            continue
        key, s = wheel_key(n)
        if s:
            out.add_term(key, _pp(c) * s)
    return out


def strut_exp(c, max_degree: int) -> DiagramSum:
    """exp(c * strut) truncated at max_degree."""
    return DiagramSum({STRUT: _pp(c)}, max_degree).exp()
