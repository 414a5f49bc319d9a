"""Closed-form Alexander and Jones polynomials of torus knots and their e^h expansions."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .algebra import LaurentSeries, substitute_exp


@dataclass(frozen=True)
class TorusKnotParams:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q == 0:
            raise ValueError("torus knot parameters must be non-negative")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"T({self.p},{self.q}) is not a knot (gcd {gcd(self.p, self.q)})")


def _as_params(k) -> TorusKnotParams:
    return k if isinstance(k, TorusKnotParams) else TorusKnotParams(*k)


def _is_unknot(k: TorusKnotParams) -> bool:
    return min(k.p, k.q) <= 1


def _divide_by_binomial(num: list[int], m: int) -> list[int]:
    """Exact quotient of ``num`` by ``t^m - 1`` (coefficient lists, index = exponent)."""
    # num_i = Q_{i-m} - Q_i
    deg = len(num) - 1 - m
    quo = [0] * (deg + 1)
    for i in range(deg + 1):
        quo[i] = (quo[i - m] if i >= m else 0) - num[i]
    # remainder check: coefficients above deg must match
    for i in range(deg + 1, len(num)):
        if num[i] != (quo[i - m] if 0 <= i - m <= deg else 0) - (quo[i] if i <= deg else 0):
            raise ArithmeticError("non-exact division")
    return quo


def _half_shift(p: int, q: int) -> int:
    n = (p - 1) * (q - 1)
    assert n % 2 == 0, "(p-1)(q-1) odd: parameters not coprime"
    return n // 2


def alexander_torus(k) -> LaurentSeries:
    """Symmetric Alexander polynomial ``t^{-(p-1)(q-1)/2} (t^{pq}-1)(t-1)/((t^p-1)(t^q-1))``."""
    k = _as_params(k)
    if _is_unknot(k):
        return LaurentSeries("t", 0, [1], None)
    p, q = k.p, k.q
    num = [0] * (p * q + 2)
    # (t^{pq} - 1)(t - 1) = t^{pq+1} - t^{pq} - t + 1
    num[p * q + 1] += 1
    num[p * q] -= 1
    num[1] -= 1
    num[0] += 1
    quo = _divide_by_binomial(num, p)
    quo = _divide_by_binomial(quo, q)
    s = _half_shift(p, q)
    return LaurentSeries("t", -s, quo, None)


def jones_torus(k) -> LaurentSeries:
    """``t^{(p-1)(q-1)/2} (1 - t^{p+1} - t^{q+1} + t^{p+q}) / (1 - t^2)``."""
    k = _as_params(k)
    if _is_unknot(k):
        return LaurentSeries("t", 0, [1], None)
    p, q = k.p, k.q
    num = [0] * (p + q + 1)
    num[0] += 1
    num[p + 1] -= 1
    num[q + 1] -= 1
    num[p + q] += 1
    # divide by 1 - t^2 = -(t^2 - 1)
    quo = [-c for c in _divide_by_binomial(num, 2)]
    return LaurentSeries("t", _half_shift(p, q), quo, None)


def normalized_series(poly: LaurentSeries, scale=1, order: int = 6) -> LaurentSeries:
    """``poly(e^{scale*h})`` as a series in h through ``h^order``."""
    return substitute_exp(poly, scale, order, "h")


def v2_from_alexander(k) -> int:
    """Second-order Vassiliev invariant read off ``Delta(e^h) = 1 + v2 h^2 + O(h^4)``.

    Calibrated so that the trefoil has v2 = 1; this equals the z^2 coefficient of the
    Conway polynomial.
    """
    c = normalized_series(alexander_torus(k), 1, 2)[2]
    assert c.denominator == 1
    return int(c)
