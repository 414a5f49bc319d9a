"""Wheeled Kontsevich integral of torus knots in the open-diagram space, truncated at degree D.

Everything is computed with the generic gluing brackets of :mod:`knotasym.jacobi`; coefficients
stay symbolic in ``p, q`` until the caller specializes them.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import LaurentSeries, ParamPoly, wheel_log_series
from .jacobi import (EMPTY, STRUT, Diagram, DiagramSum, QuotientBasis, canonicalize, glue_all,
                     key_degree, partial_glue, quotient_for, strut_exp, weighted_glue,
                     wheel_diagram, wheels_series)

log = logging.getLogger(__name__)


def theta_diagram() -> Diagram:
    """Planar theta graph: both vertices ordered so that the three edges are drawn without crossings."""
    return Diagram([1, 2, 0, 4, 5, 3], [3, 5, 4, 0, 2, 1])


THETA, _THETA_SIGN = canonicalize(theta_diagram())


def theta_sum(c=1, max_degree=None) -> DiagramSum:
    return DiagramSum.of(theta_diagram(), c, max_degree)


def strut_sum(c=1, max_degree=None) -> DiagramSum:
    return DiagramSum({STRUT: ParamPoly.const(c) if not isinstance(c, ParamPoly) else c}, max_degree)


def wheel_sum(n: int, c=1, max_degree=None) -> DiagramSum:
    return DiagramSum.of(wheel_diagram(n), c, max_degree)


def wheel_exponent(series: LaurentSeries, scale=None, max_degree: int = 3) -> DiagramSum:
    """wh(f) for a power series f in h; ``scale`` (a ParamPoly) multiplies h, i.e. f(scale * h)."""
    coeffs = {}
    for n in range(1, max_degree + 1):
        c = series[n]
        if c:
            coeffs[n] = ParamPoly.const(c) * (scale ** n if scale is not None else 1)
    return wheels_series(coeffs, max_degree)


def omega(D: int, sign: int = 1) -> DiagramSum:
    """Omega = exp(wh(F)) (``sign=-1`` gives its inverse exp(-wh(F))), to degree D."""
    F = wheel_log_series(D + 1)
    return wheel_exponent(F * sign, None, D).exp(D)


def omega_pairing(D: int, quotient: QuotientBasis | None = None) -> DiagramSum:
    """<Omega, Omega> to degree D.  Gluing all legs of wheel products: degree equals leg count."""
    om = omega(D)
    return glue_all(om, om, D, quotient)


@dataclass
class TorusConfig:
    degree: int = 3
    project: bool = True


def _pq(p, q) -> tuple[ParamPoly, ParamPoly]:
    pp = ParamPoly.p() if p is None else ParamPoly.const(p)
    qq = ParamPoly.q() if q is None else ParamPoly.const(q)
    return pp, qq


def torus_core(D: int, p=None, q=None, quotient: QuotientBasis | None = None) -> DiagramSum:
    """d_{Omega^{-1}}( _q Omega . Omega_p exp(pq/2 strut) ), i.e. the left side of the substitution identity."""
    pp, qq = _pq(p, q)
    quot = quotient if quotient is not None else quotient_for(D)
    # trivalent count of the result is the sum over the inputs, so inputs need degree <= 2D
    om = omega(2 * D)
    prod = weighted_glue(om, om, qq, pp, D, quotient=quot)
    b = prod * strut_exp(pp * qq * Fraction(1, 2), D)
    # d_W preserves the degree of each term of b, so b truncated at D is exact
    return partial_glue(omega(2 * D, -1), b, D, quotient=quot)


def z_torus(D: int = 3, p=None, q=None, quotient: QuotientBasis | None = None) -> DiagramSum:
    """Wheeled Kontsevich integral of T(p, q) in the open-diagram space, to degree D.

    ``p`` or ``q`` left as ``None`` stay symbolic.  Result is projected onto the quotient basis.
    """
    pp, qq = _pq(p, q)
    quot = quotient if quotient is not None else quotient_for(D)
    core = torus_core(D, p, q, quot)
    tail = (strut_sum(pp * qq * Fraction(-1, 2), D) + theta_sum(pp * qq * Fraction(1, 48), D)).exp(D)
    norm = omega_pairing(D, quot).inverse(D)
    out = quot.project(core * tail * norm)
    if out[EMPTY] != ParamPoly.const(1):
        raise AssertionError("degree-0 coefficient of a torus-knot integral must be 1")
    return out


def unknot(D: int = 3, quotient: QuotientBasis | None = None) -> DiagramSum:
    """Omega / <Omega, Omega>."""
    quot = quotient if quotient is not None else quotient_for(D)
    return quot.project(omega(D) * omega_pairing(D, quot).inverse(D))


def specialize(s: DiagramSum, p, q) -> DiagramSum:
    return s.map_coeffs(lambda k, v: ParamPoly.const(v.evaluate(p, q)))


def degree_scale(s: DiagramSum, c) -> DiagramSum:
    """Multiply each degree-n term by c^n."""
    c = Fraction(c)
    return s.map_coeffs(lambda k, v: v * (c ** key_degree(k)))


def asymptotic_limit(D: int = 3, c=1, quotient: QuotientBasis | None = None) -> DiagramSum:
    """c^deg d_{Omega^{-1}}(exp(strut/2)) exp(-strut/2 + theta/48); c = 2 sigma (1 on the diagonal)."""
    quot = quotient if quotient is not None else quotient_for(D)
    core = partial_glue(omega(2 * D, -1), strut_exp(Fraction(1, 2), D), D, quotient=quot)
    tail = (strut_sum(Fraction(-1, 2), D) + theta_sum(Fraction(1, 48), D)).exp(D)
    return degree_scale(quot.project(core * tail), c)


@dataclass
class LimitReport:
    limit: DiagramSum
    vanishing: DiagramSum
    divergent: DiagramSum
    notes: list[str] = field(default_factory=list)

    def ok(self) -> bool:
        return not self.divergent.terms


class DivergentLimit(AssertionError):
    pass


def diagonal_rescale(s: DiagramSum) -> DiagramSum:
    """Set q = p, then multiply each degree-n coefficient by p^{-2n}."""
    return s.map_coeffs(lambda k, v: v.diagonal().shift_p(-2 * key_degree(k)))


def scaled_diagonal_limit(D: int = 3, quotient: QuotientBasis | None = None, strict: bool = True,
                          z: DiagramSum | None = None) -> LimitReport:
    """Constant part in p of p^{-2 deg} Z(T(p, p)), with the vanishing and divergent parts split off."""
    quot = quotient if quotient is not None else quotient_for(D)
    if z is None:
        z = z_torus(D, None, None, quot)
    scaled = diagonal_rescale(z)
    lim, neg, pos = DiagramSum(max_degree=D), DiagramSum(max_degree=D), DiagramSum(max_degree=D)
    for k, v in scaled.terms.items():
        n, c0, ps = v.split_p()
        lim.add_term(k, c0)
        neg.add_term(k, n)
        pos.add_term(k, ps)
    rep = LimitReport(lim, neg, pos)
    if pos.terms:
        rep.notes.append(f"{len(pos.terms)} diagrams keep positive powers of p")
        if strict:
            raise DivergentLimit(f"positive powers of p survive: {pos!r}")
    return rep
