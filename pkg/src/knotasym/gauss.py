"""Pointed Gauss diagrams of closed braids and the Goussarov-Polyak-Viro pairing."""
from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd

import numpy as np


@dataclass(frozen=True)
class Arrow:
    tail: int  # under-passage
    head: int  # over-passage
    sign: int

    @property
    def lo(self):
        return min(self.tail, self.head)

    @property
    def hi(self):
        return max(self.tail, self.head)


@dataclass(frozen=True)
class GaussDiagram:
    """Signed arrows on a pointed circle; positions 0..2n-1 in order from the base point."""

    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        pos = [x for a in self.arrows for x in (a.tail, a.head)]
        if sorted(pos) != list(range(len(pos))):
            raise ValueError("arrow endpoints must exhaust 0..2n-1 exactly once")
        if any(a.sign not in (1, -1) for a in self.arrows):
            raise ValueError("arrow signs must be +1 or -1")

    @classmethod
    def from_triples(cls, triples) -> "GaussDiagram":
        return cls(tuple(Arrow(int(t), int(h), int(s)) for t, h, s in triples))

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def to_json(self) -> dict:
        return {"arrows": [{"tail": a.tail, "head": a.head, "sign": a.sign} for a in self.arrows]}

    @classmethod
    def from_json(cls, d) -> "GaussDiagram":
        if isinstance(d, str):
            d = json.loads(d)
        return cls.from_triples((a["tail"], a["head"], a["sign"]) for a in d["arrows"])

    def pattern(self) -> tuple:
        """Canonical word of the diagram: endpoints in order, arrows renamed by first visit."""
        return _pattern([(a.tail, a.head) for a in self.arrows])

    def rotated(self, k: int) -> "GaussDiagram":
        """Move the base point forward by k positions."""
        m = 2 * self.n_arrows
        return GaussDiagram(tuple(Arrow((a.tail - k) % m, (a.head - k) % m, a.sign) for a in self.arrows))


def _pattern(pairs) -> tuple:
    ends = sorted((pos, i, kind) for i, (t, h) in enumerate(pairs) for pos, kind in ((t, "T"), (h, "H")))
    rename: dict[int, int] = {}
    word = []
    for _, i, kind in ends:
        if i not in rename:
            rename[i] = len(rename)
        word.append((rename[i], kind))
    return tuple(word)


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        for i, e in self.letters:
            if not 1 <= i <= self.strands - 1 or e not in (1, -1):
                raise ValueError(f"bad braid letter {(i, e)} on {self.strands} strands")

    @classmethod
    def from_ints(cls, strands: int, word) -> "BraidWord":
        """``[1, 1, -2]`` means sigma_1 sigma_1 sigma_2^{-1}."""
        return cls(strands, tuple((abs(w), 1 if w > 0 else -1) for w in word))

    def permutation(self) -> list[int]:
        perm = list(range(self.strands))  # position -> strand now there
        for i, _ in self.letters:
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
        # strand starting at position s ends at position perm.index(s)
        out = [0] * self.strands
        for pos, s in enumerate(perm):
            out[s] = pos
        return out

    def n_components(self) -> int:
        perm, seen, n = self.permutation(), set(), 0
        for s in range(self.strands):
            if s not in seen:
                n += 1
                while s not in seen:
                    seen.add(s)
                    s = perm[s]
        return n


def braid_closure_to_gauss(b: BraidWord, basepoint_strand: int = 1) -> GaussDiagram:
    """Gauss diagram of the closed braid, base point on ``basepoint_strand`` above the first letter.

    Strands run top to bottom.  At sigma_i^{+1} the strand moving from position i+1 to i passes
    over, which makes the crossing positive; sigma_i^{-1} is the mirror.
    """
    if b.n_components() != 1:
        raise ValueError(f"braid closure has {b.n_components()} components; only knots are supported")
    k = b.strands
    if not b.letters:
        return GaussDiagram()
    pos = basepoint_strand - 1
    events: list[tuple[int, bool]] = []  # (letter index, passes over)
    for _ in range(k):
        for idx, (i, e) in enumerate(b.letters):
            left = i - 1
            if pos == left:
                events.append((idx, e < 0))
                pos = left + 1
            elif pos == left + 1:
                events.append((idx, e > 0))
                pos = left
        if pos == basepoint_strand - 1:
            break
    if len(events) != 2 * len(b.letters):
        raise AssertionError("closure traversal did not visit every crossing twice")
    tail, head = {}, {}
    for t, (idx, over) in enumerate(events):
        (head if over else tail)[idx] = t
    return GaussDiagram(tuple(Arrow(tail[i], head[i], e) for i, (_, e) in enumerate(b.letters)))


def torus_braid(p: int, q: int) -> BraidWord:
    if p < 1 or q < 0:
        raise ValueError("need p >= 1 and q >= 0")
    if gcd(p, q) != 1:
        raise ValueError(f"T({p},{q}) is a link: gcd = {gcd(p, q)}")
    return BraidWord(p, tuple((i, 1) for _ in range(q) for i in range(1, p)))


def torus_knot_diagram(p: int, q: int) -> GaussDiagram:
    """Closure of (sigma_1 ... sigma_{p-1})^q."""
    return braid_closure_to_gauss(torus_braid(p, q))


def writhe(g: GaussDiagram) -> int:
    return sum(a.sign for a in g.arrows)


def _arrays(g: GaussDiagram):
    t = np.fromiter((a.tail for a in g.arrows), dtype=np.int64, count=g.n_arrows)
    h = np.fromiter((a.head for a in g.arrows), dtype=np.int64, count=g.n_arrows)
    s = np.fromiter((a.sign for a in g.arrows), dtype=np.int64, count=g.n_arrows)
    return t, h, s


def _pair_class(lo_a, hi_a, fwd_a, lo_b, hi_b, fwd_b):
    # lo_a < lo_b assumed; 0 = disjoint, 1 = crossing, 2 = nested
    return (np.where(hi_a < lo_b, 0, np.where(hi_a < hi_b, 1, 2)), fwd_a, fwd_b)


def _pairing_two(gamma: GaussDiagram, g: GaussDiagram) -> int:
    a, b = sorted(gamma.arrows, key=lambda x: x.lo)
    cls = 0 if a.hi < b.lo else (1 if a.hi < b.hi else 2)
    want = (cls, a.tail < a.head, b.tail < b.head)
    t, h, s = _arrays(g)
    lo, hi, fwd = np.minimum(t, h), np.maximum(t, h), t < h
    order = np.argsort(lo)
    lo, hi, fwd, s = lo[order], hi[order], fwd[order], s[order]
    total = 0
    for i in range(len(lo) - 1):
        if bool(fwd[i]) != want[1]:
            continue
        lb, hb, fb, sb = lo[i + 1:], hi[i + 1:], fwd[i + 1:], s[i + 1:]
        if want[0] == 0:
            m = hi[i] < lb
        elif want[0] == 1:
            m = (lb < hi[i]) & (hi[i] < hb)
        else:
            m = hb < hi[i]
        m &= fb == want[2]
        total += int(s[i]) * int(sb[m].sum())
    return total * a.sign * b.sign


def _pairing_backtrack(gamma: GaussDiagram, g: GaussDiagram) -> int:
    n = gamma.n_arrows
    gam = sorted(gamma.arrows, key=lambda x: x.lo)
    # endpoint ranks of gamma in circular order
    garr = sorted(g.arrows, key=lambda x: x.lo)
    los = [x.lo for x in garr]
    gsign = 1
    for x in gam:
        gsign *= x.sign
    total = 0

    def rec(i: int, chosen: list[Arrow], start: int, sgn: int):
        nonlocal total
        if i == n:
            total += sgn
            return
        ga = gam[i]
        fwd = ga.tail < ga.head
        # previously placed endpoints and their gamma positions
        prev_g = [(x, y) for k in range(i) for x, y in ((gam[k].lo, chosen[k].lo), (gam[k].hi, chosen[k].hi))]
        lo_lb, lo_ub, hi_lb, hi_ub = -1, 1 << 60, -1, 1 << 60
        for gp, cp in prev_g:
            if gp < ga.lo:
                lo_lb = max(lo_lb, cp)
            else:
                lo_ub = min(lo_ub, cp)
            if gp < ga.hi:
                hi_lb = max(hi_lb, cp)
            else:
                hi_ub = min(hi_ub, cp)
        j0 = max(start, bisect.bisect_right(los, lo_lb))
        j1 = bisect.bisect_left(los, lo_ub)
        for j in range(j0, j1):
            c = garr[j]
            if (c.tail < c.head) != fwd or not (hi_lb < c.hi < hi_ub):
                continue
            chosen.append(c)
            rec(i + 1, chosen, j + 1, sgn * c.sign)
            chosen.pop()

    rec(0, [], 0, 1)
    return total * gsign


def pairing(gamma: GaussDiagram, g: GaussDiagram) -> int:
    """Signed count of pointed sub-diagrams of ``g`` isomorphic to ``gamma``.

    Each occurrence is weighted by the product of its arrow signs times the product of
    ``gamma``'s own signs.
    """
    n = gamma.n_arrows
    if n == 0:
        return 1
    if n > g.n_arrows:
        return 0
    if n == 1:
        a = gamma.arrows[0]
        fwd = a.tail < a.head
        return a.sign * sum(x.sign for x in g.arrows if (x.tail < x.head) == fwd)
    if n == 2:
        return _pairing_two(gamma, g)
    return _pairing_backtrack(gamma, g)


def pairing_bruteforce(gamma: GaussDiagram, g: GaussDiagram) -> int:
    """Reference count over all n-subsets; exponential, for tests only."""
    want = gamma.pattern()
    gs = 1
    for a in gamma.arrows:
        gs *= a.sign
    total = 0
    for sub in combinations(g.arrows, gamma.n_arrows):
        if _pattern([(a.tail, a.head) for a in sub]) == want:
            s = 1
            for a in sub:
                s *= a.sign
            total += s
    return total * gs


# named patterns ------------------------------------------------------------------------
ONE_ARROW_FORWARD = GaussDiagram.from_triples([(0, 1, 1)])
ONE_ARROW_BACKWARD = GaussDiagram.from_triples([(1, 0, 1)])
# Two interleaved positive arrows; the first arrow met from the base point is traversed
# head-first and the second tail-first.  This orientation gives +1 on the trefoil.
CASSON = GaussDiagram.from_triples([(2, 0, 1), (1, 3, 1)])

PATTERNS = {
    "casson": CASSON,
    "one+": ONE_ARROW_FORWARD,
    "one-": ONE_ARROW_BACKWARD,
    "empty": GaussDiagram(),
}


def casson(g: GaussDiagram) -> int:
    return pairing(CASSON, g)
