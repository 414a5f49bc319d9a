"""Irrational rotation template: return times of the suspension flow and torus-knot parameters.

The rotation number is carried as a continued fraction; every comparison between orbit points
is decided with rational enclosures from consecutive convergents, refined on demand.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count as _count
from math import floor, gcd
from typing import Callable, Sequence

from .torus import TorusKnotParams


class Undecidable(RuntimeError):
    """An orbit comparison stayed undecided at the maximum continued-fraction depth."""


class RotationNumber:
    """Irrational number in [0, 1] given by its continued fraction ``[a0; a1, a2, ...]``.

    ``terms`` is either a finite prefix (refinement past it raises :class:`Undecidable`) or a
    callable ``i -> a_i`` for an infinite expansion.
    """

    def __init__(self, terms: Sequence[int] | Callable[[int], int], name: str = ""):
        self._fn = terms if callable(terms) else None
        self._prefix = [] if callable(terms) else [int(a) for a in terms]
        self.name = name
        self._conv: list[tuple[int, int]] = []

    @classmethod
    def periodic(cls, head: Sequence[int], period: Sequence[int], name: str = "") -> "RotationNumber":
        head, period = list(head), list(period)
        if not period:
            raise ValueError("empty period")
        return cls(lambda i: head[i] if i < len(head) else period[(i - len(head)) % len(period)], name)

    @classmethod
    def golden(cls) -> "RotationNumber":
        return cls.periodic([0], [1], "golden")

    @classmethod
    def silver(cls) -> "RotationNumber":
        """sqrt(2) - 1 = [0; 2, 2, 2, ...]."""
        return cls.periodic([0], [2], "sqrt2-1")

    @classmethod
    def parse(cls, text: str) -> "RotationNumber":
        """Parse ``golden``, ``silver``, ``cf:0;2`` (periodic part after ';') or ``cf:0,2,2,2``.

        A plain ``cf:`` list repeats its last partial quotient forever, so the CLI always gets an
        irrational number; use the constructor directly for a hard finite prefix.
        """
        t = text.strip()
        if t in ("golden", "phi"):
            return cls.golden()
        if t in ("silver", "sqrt2-1"):
            return cls.silver()
        if not t.startswith("cf:"):
            raise ValueError(f"cannot parse rotation number {text!r}")
        body = t[3:]
        if ";" in body:
            head, per = body.split(";")
            return cls.periodic([int(x) for x in head.split(",") if x], [int(x) for x in per.split(",") if x], t)
        terms = [int(x) for x in body.split(",") if x]
        if not terms:
            raise ValueError("empty continued fraction")
        return cls.periodic(terms[:-1], terms[-1:], t)

    def term(self, i: int) -> int:
        if self._fn is not None:
            a = int(self._fn(i))
        elif i < len(self._prefix):
            a = self._prefix[i]
        else:
            raise Undecidable(f"continued fraction prefix exhausted at depth {i}")
        if i >= 1 and a < 1:
            raise ValueError("partial quotients a_i (i >= 1) must be >= 1")
        return a

    def depth_available(self) -> int | None:
        return None if self._fn is not None else len(self._prefix)

    def convergent(self, k: int) -> tuple[int, int]:
        """k-th convergent ``num/den`` as an integer pair."""
        while len(self._conv) <= k:
            i = len(self._conv)
            a = self.term(i)
            if i == 0:
                self._conv.append((a, 1))
            elif i == 1:
                n0, d0 = self._conv[0]
                self._conv.append((a * n0 + 1, a))
            else:
                (n1, d1), (n2, d2) = self._conv[-1], self._conv[-2]
                self._conv.append((a * n1 + n2, a * d1 + d2))
        return self._conv[k]

    def denominators(self, n: int) -> list[int]:
        return [self.convergent(k)[1] for k in range(n)]

    def bracket(self, k: int) -> tuple[Fraction, Fraction]:
        """Enclosure of the number between convergents k and k+1."""
        a, b = Fraction(*self.convergent(k)), Fraction(*self.convergent(k + 1))
        return (a, b) if a < b else (b, a)

    def approx(self, k: int = 30) -> Fraction:
        return Fraction(*self.convergent(k))

    def __repr__(self):
        return f"RotationNumber({self.name or self._prefix})"


@dataclass
class ClosureSequence:
    x0: Fraction
    times: list[int] = field(default_factory=list)
    params: list[tuple[int, int]] = field(default_factory=list)
    lam: RotationNumber | None = None

    def to_json(self) -> list[dict]:
        return [{"t_k": t, "p_k": p, "q_k": q} for t, (p, q) in zip(self.times, self.params)]


class _Enclosure:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo, self.hi = lo, hi

    def less(self, other) -> bool | None:
        if self.hi < other.lo:
            return True
        if self.lo > other.hi:
            return False
        return None


def _orbit_point(m: int, x0: Fraction, lo: Fraction, hi: Fraction):
    a, b = x0 + m * lo, x0 + m * hi
    fa, fb = floor(a), floor(b)
    if fa != fb:
        return None
    return _Enclosure(a - fa, b - fa)


def closure_times(lam: RotationNumber, x0=Fraction(1, 7), count: int = 8,
                  start_depth: int = 8, max_depth: int = 200) -> ClosureSequence:
    """Return times ``t_1 < t_2 < ...`` of the orbit ``x_m = x0 + m*lam mod 1``.

    ``t_{k+1}`` is the first ``m > t_k`` with ``x0 < x_m`` and ``x_m`` below every earlier
    orbit point lying above ``x0``.  ``p_k = t_k`` and ``q_k = floor(lam * t_k)``.
    """
    x0 = Fraction(x0)
    if not 0 < x0 < 1:
        raise ValueError("x0 must lie in (0, 1)")
    avail = lam.depth_available()
    if avail is not None:
        max_depth = min(max_depth, avail - 2)
    depth = min(start_depth, max_depth)
    while True:
        if depth > max_depth or depth < 0:
            raise Undecidable(f"orbit comparisons undecided at continued-fraction depth {max_depth}")
        try:
            lo, hi = lam.bracket(depth)
        except Undecidable:
            raise Undecidable("continued fraction prefix too short to decide the orbit order") from None
        res = _scan(lam, x0, count, lo, hi)
        if res is not None:
            return res
        if depth == max_depth:
            raise Undecidable(f"orbit comparisons undecided at continued-fraction depth {max_depth}")
        depth = min(max_depth, depth + max(2, depth // 2))


def _scan(lam, x0, count, lo, hi):
    one = _Enclosure(Fraction(1), Fraction(1))
    best = one
    x0e = _Enclosure(x0, x0)
    times = []
    for m in _count(1):
        xm = _orbit_point(m, x0, lo, hi)
        if xm is None:
            return None
        above = x0e.less(xm)
        if above is None:
            return None
        if not above:
            continue
        below = xm.less(best) if best is not one else True
        if below is None:
            return None
        if below:
            best = xm
            times.append(m)
            if len(times) == count:
                break
    params = []
    for t in times:
        f0, f1 = floor(t * lo), floor(t * hi)
        if f0 != f1:
            return None
        params.append((t, f0))
    return ClosureSequence(x0, times, params, lam)


def template_knot(seq: ClosureSequence, k: int) -> TorusKnotParams:
    if not 0 <= k < len(seq.params):
        raise IndexError(f"closure index {k} out of range (have {len(seq.params)})")
    return TorusKnotParams(*seq.params[k])


def asymptotic_signature(lam: RotationNumber | Fraction | int, depth: int = 30) -> tuple[Fraction, Fraction]:
    """Enclosure of sigma = lam / 2 (the writhe of the template knots grows like lam * t^2)."""
    if not isinstance(lam, RotationNumber):
        s = Fraction(lam) / 2
        return s, s
    try:
        lo, hi = lam.bracket(depth)
    except Undecidable:
        d = lam.depth_available() or 1
        lo, hi = lam.bracket(max(0, d - 2))
    return lo / 2, hi / 2


def coprime(p: int, q: int) -> bool:
    return gcd(p, q) == 1
