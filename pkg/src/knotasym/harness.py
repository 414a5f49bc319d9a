"""Convergence sweeps over torus-knot families: Gauss pairings, polynomial coefficients, cross-family checks."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd

from .flow import RotationNumber, closure_times
from .gauss import PATTERNS, GaussDiagram, pairing, torus_knot_diagram, writhe
from .report import ConvergenceReport, Row, two_point_fit
from .torus import alexander_torus, jones_torus, normalized_series

log = logging.getLogger(__name__)


@dataclass
class Family:
    name: str
    members: list[tuple[int, int]]
    lam: Fraction  # q/p -> lam (a rational enclosure midpoint for irrational templates)
    note: str = ""

    @property
    def sigma(self) -> Fraction:
        return self.lam / 2


def family_successor(pmax: int, pmin: int = 2, step: int = 1) -> Family:
    """T(p, p+1): lam = 1."""
    return Family("q=p+1", [(p, p + 1) for p in range(pmin, pmax + 1, step)], Fraction(1))


def family_half(pmax: int, pmin: int = 5, step: int = 2) -> Family:
    """T(p, (p-1)/2) for odd p: lam = 1/2."""
    if pmin % 2 == 0:
        pmin += 1
    step += step % 2
    return Family("q=(p-1)/2", [(p, (p - 1) // 2) for p in range(pmin, pmax + 1, step)], Fraction(1, 2))


def family_template(lam: RotationNumber, pmax: int, x0=Fraction(1, 7), pmin: int = 2) -> Family:
    """Closed orbits of the rotation template whose meridian count is at most pmax."""
    count = 8
    while True:
        seq = closure_times(lam, x0, count=count)
        if seq.times[-1] > pmax or count > 64:
            break
        count *= 2
    members = [(p, q) for p, q in seq.params if pmin <= p <= pmax]
    lo, hi = lam.bracket(30)
    return Family(f"template:{lam.name}", members, (lo + hi) / 2,
                  note=f"x0={x0}; closure times {[p for p, _ in members]}")


def family_from_name(name: str, pmax: int) -> Family:
    if name in ("succ", "q=p+1"):
        return family_successor(pmax)
    if name in ("half", "q=(p-1)/2"):
        return family_half(pmax)
    return family_template(RotationNumber.parse(name), pmax)


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def pairing_targets(n: int, sigma: Fraction) -> dict[str, Fraction]:
    """Candidate limits of <Gamma, G>/p^{2n}: sigma^n/(2n-1)!! and 2^n sigma^n/(2n)!."""
    return {"odd_double_factorial": sigma ** n / double_factorial(2 * n - 1),
            "two_pow_over_factorial": 2 ** n * sigma ** n / factorial(2 * n)}


def sweep_pairing(gamma: GaussDiagram | str, family: Family, max_arrows: int = 3) -> ConvergenceReport:
    """<gamma, G(T(p,q))> / p^{2n} along the family, with the two candidate constants."""
    if isinstance(gamma, str):
        gamma = PATTERNS[gamma]
    n = gamma.n_arrows
    if n > max_arrows:
        raise ValueError(f"pattern with {n} arrows exceeds the budget of {max_arrows}")
    rep = ConvergenceReport(f"pairing n={n} on {family.name}", key_label="quantity")
    key = f"pairing_n{n}"
    for p, q in family.members:
        raw = Fraction(pairing(gamma, torus_knot_diagram(p, q)))
        rep.rows.append(Row(key, p, q, raw, raw / Fraction(p) ** (2 * n)))
    rep.targets[key] = pairing_targets(n, family.sigma) if n else {"one": Fraction(1)}
    if family.note:
        rep.notes.append(family.note)
    return rep


def casson_closed_form(p: int, q: int) -> Fraction:
    return Fraction((p * p - 1) * (q * q - 1), 24)


def closed_form_limit(family: Family) -> Fraction:
    """Two-point fit of the closed form v2/p^4 on the same family (an independent reference)."""
    return two_point_fit([(p, casson_closed_form(p, q) / Fraction(p) ** 4) for p, q in family.members])


INVARIANTS = ("casson", "writhe", "alexander", "jones")


def _invariant_value(name: str, p: int, q: int, n: int) -> Fraction:
    if name == "casson":
        return Fraction(pairing(PATTERNS["casson"], torus_knot_diagram(p, q)))
    if name == "writhe":
        return Fraction(writhe(torus_knot_diagram(p, q)))
    poly = alexander_torus((p, q)) if name == "alexander" else jones_torus((p, q))
    return normalized_series(poly, 1, n)[n]


def invariant_degree(name: str, n: int | None = None) -> int:
    return {"casson": 2, "writhe": 1}.get(name, n if n is not None else 2)


def sweep_invariant(name: str, family: Family, n: int | None = None) -> ConvergenceReport:
    """v(T(p,q))/p^{2n} along the family; for polynomials v is the h^n coefficient of P(e^h)."""
    deg = invariant_degree(name, n)
    key = f"{name}" if name in ("casson", "writhe") else f"{name}_h{deg}"
    rep = ConvergenceReport(f"{key} on {family.name}", key_label="quantity")
    for p, q in family.members:
        raw = _invariant_value(name, p, q, deg)
        rep.rows.append(Row(key, p, q, raw, raw / Fraction(p) ** (2 * deg)))
    s = family.sigma
    if name == "writhe":
        rep.targets[key] = {"two_sigma": 2 * s}
    elif name == "casson":
        rep.targets[key] = pairing_targets(2, s)
    else:
        rep.targets[key] = series_targets(name, deg, s)
    if family.note:
        rep.notes.append(family.note)
    return rep


def series_targets(which: str, n: int, sigma: Fraction) -> dict[str, Fraction]:
    """Candidate h^n coefficients of the limit series at signature sigma."""
    if which == "alexander":
        return {"sinh_ratio": sigma ** n / factorial(n + 1) if n % 2 == 0 else Fraction(0)}
    if which == "jones":
        claimed = Fraction(0) if n == 0 else -(sigma ** n) / factorial(n - 1)
        alt = sigma ** n * (1 - n) / factorial(n)
        return {"minus_h_exp": claimed, "one_minus_h_exp": alt}
    raise ValueError(f"no closed-form targets for {which!r}")


def asymptotic_coefficient_limits(family: Family, which: str = "alexander", order: int = 4) -> ConvergenceReport:
    """Scaled h^n coefficients of P(e^{h/p^2}) for n <= order, one key per degree."""
    poly_fn = alexander_torus if which == "alexander" else jones_torus
    rep = ConvergenceReport(f"{which} series on {family.name}", key_label="h_degree")
    for p, q in family.members:
        poly = poly_fn((p, q))
        s = normalized_series(poly, Fraction(1, p * p), order)
        raw = normalized_series(poly, 1, order)
        for n in range(order + 1):
            rep.rows.append(Row(str(n), p, q, raw[n], s[n]))
    for n in range(order + 1):
        rep.targets[str(n)] = series_targets(which, n, family.sigma)
    if family.note:
        rep.notes.append(family.note)
    return rep


def fitted_series(rep: ConvergenceReport) -> dict[int, Fraction]:
    return {int(k): rep.fit(k) for k in rep.keys() if rep.fit(k) is not None}


def rescaled_series(rep: ConvergenceReport, sigma: Fraction) -> dict[int, Fraction]:
    """Divide the degree-n fitted coefficient by (2 sigma)^n."""
    return {n: c / (2 * sigma) ** n for n, c in fitted_series(rep).items()}


def extracted_alpha(rep: ConvergenceReport, key: str, sigma: Fraction, n: int) -> Fraction:
    return rep.fit(key) / sigma ** n


@dataclass
class CrossCheck:
    values: dict[str, Fraction]
    rel_spread: Fraction
    tol: Fraction
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.rel_spread <= self.tol


def cross_lambda_alpha(name: str, families: list[Family], n: int | None = None,
                       tol=Fraction(2, 100)) -> CrossCheck:
    """alpha_n = fit / sigma^n extracted from several families; relative spread against the mean."""
    deg = invariant_degree(name, n)
    vals = {}
    for fam in families:
        rep = sweep_invariant(name, fam, deg)
        key = rep.keys()[0]
        vals[fam.name] = extracted_alpha(rep, key, fam.sigma, deg)
    mean = sum(vals.values()) / len(vals)
    spread = max(abs(v - mean) for v in vals.values()) / abs(mean) if mean else Fraction(0)
    return CrossCheck(vals, spread, Fraction(tol))


def coprime_family(f: Family) -> bool:
    return all(gcd(p, q) == 1 for p, q in f.members)
