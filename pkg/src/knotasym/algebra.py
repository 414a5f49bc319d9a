"""Exact coefficient arithmetic: truncated Laurent series and Laurent polynomials in p, q.

All coefficients are :class:`fractions.Fraction`.  A :class:`LaurentSeries` knows the
highest exponent up to which its coefficients are certified (``order``); ``order=None``
marks an exact Laurent polynomial.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping

INF = None  # order of an exact polynomial


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def fstr(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _min_order(*orders):
    finite = [o for o in orders if o is not None]
    return min(finite) if finite else None


class LaurentSeries:
    """Laurent series ``sum_k c_k var^k`` for ``lowest <= k <= order``.

    Terms above ``order`` are unknown.  Leading zeros are stripped so ``lowest`` is the
    valuation whenever some certified coefficient is nonzero.
    """

    __slots__ = ("var", "lowest", "coeffs", "order")

    def __init__(self, var: str, lowest: int, coeffs: Iterable, order: int | None):
        cs = [frac(c) for c in coeffs]
        if order is not None:
            keep = order - lowest + 1
            if keep < 0:
                cs, lowest = [], order + 1
            else:
                cs = cs[:keep] + [Fraction(0)] * max(0, keep - len(cs))
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        cs = cs[i:]
        lowest += i
        if order is None:
            while cs and cs[-1] == 0:
                cs.pop()
            if not cs:
                lowest = 0
        elif not cs:
            lowest = order + 1
        self.var = var
        self.lowest = lowest
        self.coeffs = tuple(cs)
        self.order = order

    # construction -----------------------------------------------------------------
    @classmethod
    def from_dict(cls, var: str, terms: Mapping[int, object], order: int | None = None):
        terms = {k: frac(v) for k, v in terms.items() if frac(v) != 0}
        if not terms:
            return cls(var, 0, [], order)
        lo, hi = min(terms), max(terms)
        if order is not None:
            hi = max(hi, order)
        return cls(var, lo, [terms.get(k, 0) for k in range(lo, hi + 1)], order)

    @classmethod
    def monomial(cls, var: str, k: int, c=1, order: int | None = None):
        return cls.from_dict(var, {k: c}, order)

    @classmethod
    def exp_series(cls, var: str, order: int, scale=1):
        """``exp(scale * var)`` to the given order."""
        s = frac(scale)
        return cls(var, 0, [s ** n / factorial(n) for n in range(order + 1)], order)

    # access ------------------------------------------------------------------------
    def __getitem__(self, k: int) -> Fraction:
        if self.order is not None and k > self.order:
            raise IndexError(f"coefficient of {self.var}^{k} is beyond truncation order {self.order}")
        i = k - self.lowest
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def terms(self) -> dict[int, Fraction]:
        return {self.lowest + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> int | None:
        return self.lowest if self.coeffs else None

    @property
    def highest(self) -> int | None:
        return self.lowest + len(self.coeffs) - 1 if self.coeffs else None

    def truncate(self, order: int) -> "LaurentSeries":
        order = order if self.order is None else min(order, self.order)
        return LaurentSeries(self.var, self.lowest, self.coeffs, order)

    def principal_part(self) -> dict[int, Fraction]:
        return {k: c for k, c in self.terms().items() if k < 0}

    def __call__(self, x):
        """Evaluate a Laurent polynomial (exact objects only)."""
        if self.order is not None:
            raise ValueError("cannot evaluate a truncated series")
        return sum((c * frac(x) ** k for k, c in self.terms().items()), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.var, self.order, self.terms()) == (other.var, other.order, other.terms())

    def __hash__(self):
        return hash((self.var, self.order, tuple(sorted(self.terms().items()))))

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equality up to the common truncation order."""
        o = _min_order(self.order, other.order)
        a = self if o is None else self.truncate(o)
        b = other if o is None else other.truncate(o)
        return a.terms() == b.terms()

    def __repr__(self):
        body = " + ".join(f"{fstr(c)}*{self.var}^{k}" for k, c in sorted(self.terms().items())) or "0"
        tail = "" if self.order is None else f" + O({self.var}^{self.order + 1})"
        return f"LaurentSeries({body}{tail})"

    # arithmetic ------------------------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries(self.var, 0, [other], None)
        if other.var != self.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
        return other

    def __add__(self, other):
        other = self._check(other)
        order = _min_order(self.order, other.order)
        t = self.terms()
        for k, c in other.terms().items():
            t[k] = t.get(k, 0) + c
        if order is not None:
            t = {k: c for k, c in t.items() if k <= order}
        return LaurentSeries.from_dict(self.var, t, order)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.var, self.lowest, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def _rel_precision(self):
        # number of certified terms above the valuation
        if self.order is None:
            return None
        v = self.lowest if self.coeffs else self.order + 1
        return self.order - v

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            c = frac(other)
            return LaurentSeries(self.var, self.lowest, [c * x for x in self.coeffs], self.order)
        other = self._check(other)
        va = self.lowest if self.coeffs else (self.order + 1 if self.order is not None else 0)
        vb = other.lowest if other.coeffs else (other.order + 1 if other.order is not None else 0)
        cands = []
        if self.order is not None:
            cands.append(self.order + vb)
        if other.order is not None:
            cands.append(other.order + va)
        order = min(cands) if cands else None
        t: dict[int, Fraction] = {}
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            ka = self.lowest + i
            for j, b in enumerate(other.coeffs):
                k = ka + other.lowest + j
                if order is not None and k > order:
                    break
                t[k] = t.get(k, 0) + a * b
        return LaurentSeries.from_dict(self.var, t, order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            return self * (1 / frac(other))
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by a series that vanishes to its truncation order")
        va = self.lowest if self.coeffs else None
        vb = other.lowest
        precs = [p for p in (self._rel_precision(), other._rel_precision()) if p is not None]
        if va is None:
            if self.order is None:
                return LaurentSeries(self.var, 0, [], None)
            return LaurentSeries(self.var, 0, [], self.order - vb)
        if not precs:
            # exact polynomials: result must be exact, else fall back is an error
            q, r = _poly_divmod(self, other)
            if r:
                raise ValueError("exact division of Laurent polynomials leaves a remainder; truncate first")
            return q
        n = min(precs)
        b = [other[vb + i] if vb + i <= (other.highest or vb) else Fraction(0) for i in range(n + 1)]
        a = [self[va + i] if (self.order is None or va + i <= self.order) else Fraction(0) for i in range(n + 1)]
        inv0 = 1 / b[0]
        out = []
        for i in range(n + 1):
            s = a[i] - sum(out[j] * b[i - j] for j in range(max(0, i - len(b) + 1), i))
            out.append(s * inv0)
        return LaurentSeries(self.var, va - vb, out, va - vb + n)

    def __rtruediv__(self, other):
        return LaurentSeries(self.var, 0, [other], None) / self

    def __pow__(self, n: int):
        if n < 0:
            return 1 / (self ** (-n))
        out = LaurentSeries(self.var, 0, [1], None)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # analytic operations ---------------------------------------------------------------
    def exp(self) -> "LaurentSeries":
        if self.order is None:
            raise ValueError("exp needs a truncation order")
        if self.coeffs and self.lowest < 1:
            raise ValueError("exp requires lowest exponent >= 1")
        n = self.order
        a = [self[k] if k >= 1 else Fraction(0) for k in range(n + 1)]
        # e' = a' e
        e = [Fraction(1)] + [Fraction(0)] * n
        for k in range(1, n + 1):
            e[k] = sum(j * a[j] * e[k - j] for j in range(1, k + 1)) / k
        return LaurentSeries(self.var, 0, e, n)

    def log(self) -> "LaurentSeries":
        if self.order is None:
            raise ValueError("log needs a truncation order")
        if not self.coeffs or self.lowest < 0 or self[0] != 1 or self.lowest > 0:
            raise ValueError("log requires constant term 1 and no negative exponents")
        n = self.order
        a = [self[k] for k in range(n + 1)]
        lg = [Fraction(0)] * (n + 1)
        # l' = a'/a  =>  k l_k = k a_k - sum_{j<k} j l_j a_{k-j}
        for k in range(1, n + 1):
            lg[k] = (k * a[k] - sum(j * lg[j] * a[k - j] for j in range(1, k))) / k
        return LaurentSeries(self.var, 0, lg, n)

    def scale(self, c) -> "LaurentSeries":
        """Substitute ``var -> c*var``."""
        c = frac(c)
        if c == 0:
            if self.principal_part():
                raise ValueError("cannot scale a series with a principal part by 0")
            return LaurentSeries(self.var, 0, [self[0]] if self.coeffs and self.lowest <= 0 else [], None)
        return LaurentSeries(self.var, self.lowest,
                             [x * c ** (self.lowest + i) for i, x in enumerate(self.coeffs)], self.order)

    def derivative(self, n: int = 1) -> "LaurentSeries":
        if n < 0:
            raise ValueError("derivative order must be >= 0")
        out = self
        for _ in range(n):
            t = {k - 1: k * c for k, c in out.terms().items() if k != 0}
            out = LaurentSeries.from_dict(out.var, t, None if out.order is None else out.order - 1)
        return out

    def with_var(self, var: str) -> "LaurentSeries":
        return LaurentSeries(var, self.lowest, self.coeffs, self.order)

    # serialization --------------------------------------------------------------------
    def to_json(self) -> dict:
        return {"var": self.var, "lowest": self.lowest,
                "coeffs": [fstr(c) for c in self.coeffs], "order": self.order}

    @classmethod
    def from_json(cls, d: Mapping) -> "LaurentSeries":
        return cls(d["var"], int(d["lowest"]), [frac(c) for c in d["coeffs"]], d.get("order"))


def _poly_divmod(a: LaurentSeries, b: LaurentSeries):
    num = dict(a.terms())
    bt = b.terms()
    bhi = max(bt)
    lead = bt[bhi]
    q: dict[int, Fraction] = {}
    blo = min(bt)
    while num and max(num) - bhi >= min(num) - blo:
        top = max(num)
        c = num[top] / lead
        q[top - bhi] = c
        for k, v in bt.items():
            kk = k + top - bhi
            num[kk] = num.get(kk, 0) - c * v
            if num[kk] == 0:
                del num[kk]
    return LaurentSeries.from_dict(a.var, q), bool(num)


def series_arith(a: LaurentSeries, b: LaurentSeries, op: str) -> LaurentSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def series_exp_log(a: LaurentSeries, op: str) -> LaurentSeries:
    if op == "exp":
        return a.exp()
    if op == "log":
        return a.log()
    raise ValueError(f"unknown op {op!r}")


def substitute_exp(poly: LaurentSeries, scale, order: int, var: str = "h") -> LaurentSeries:
    """``poly(e^{scale*h})`` expanded to ``h^order``; ``poly`` must be an exact Laurent polynomial."""
    if poly.order is not None:
        raise ValueError("substitute_exp expects an exact Laurent polynomial")
    s = frac(scale)
    terms = poly.terms()
    out = []
    for n in range(order + 1):
        tot = sum(c * k ** n for k, c in terms.items())
        out.append(Fraction(tot) * s ** n / factorial(n))
    return LaurentSeries(var, 0, out, order)


# named series of the construction ---------------------------------------------------------

def sinhc_half(order: int, var: str = "h") -> LaurentSeries:
    """``sinh(h/2)/(h/2)`` to ``h^order``."""
    return LaurentSeries(var, 0, [Fraction(1, 4 ** (n // 2) * factorial(n + 1)) if n % 2 == 0 else 0
                                  for n in range(order + 1)], order)


def wheel_log_series(order: int, var: str = "h") -> LaurentSeries:
    """``F(h) = 1/2 log(sinh(h/2)/(h/2))``; the wheel exponent of the unknot."""
    return sinhc_half(order, var).log() * Fraction(1, 2)


def fplus_derivative(n: int, order: int, var: str = "h") -> LaurentSeries:
    """n-th derivative (n >= 1) of ``F+(h) = 1/2 log sinh(h/2)``, i.e. of ``F(h) + 1/2 log(h/2)``.

    Certified through ``h^order``.
    """
    if n < 1:
        raise ValueError("F+ itself is not a Laurent series; need n >= 1")
    first = wheel_log_series(order + n, var).derivative(1) + LaurentSeries.monomial(var, -1, Fraction(1, 2))
    return first.derivative(n - 1)


class ParamPoly:
    """Laurent polynomial in two parameters ``p, q`` with rational coefficients.

    Stored as ``{(a, b): c}`` meaning ``c * p^a * q^b``; zero coefficients are dropped.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        t = {}
        if terms:
            for k, v in terms.items():
                v = frac(v)
                if v != 0:
                    t[(int(k[0]), int(k[1]))] = v
        self.terms = t

    @classmethod
    def const(cls, c) -> "ParamPoly":
        return cls({(0, 0): c})

    @classmethod
    def mono(cls, a: int, b: int, c=1) -> "ParamPoly":
        return cls({(a, b): c})

    @classmethod
    def p(cls) -> "ParamPoly":
        return cls.mono(1, 0)

    @classmethod
    def q(cls) -> "ParamPoly":
        return cls.mono(0, 1)

    def __bool__(self):
        return bool(self.terms)

    def is_const(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    def constant(self) -> Fraction:
        return self.terms.get((0, 0), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, ParamPoly):
            other = ParamPoly.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other):
        if not isinstance(other, ParamPoly):
            other = ParamPoly.const(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            s = t.get(k, 0) + v
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        out = ParamPoly()
        out.terms = t
        return out

    __radd__ = __add__

    def __neg__(self):
        out = ParamPoly()
        out.terms = {k: -v for k, v in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other if isinstance(other, ParamPoly) else ParamPoly.const(-frac(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ParamPoly):
            c = frac(other)
            out = ParamPoly()
            out.terms = {k: v * c for k, v in self.terms.items()} if c else {}
            return out
        t: dict[tuple[int, int], Fraction] = {}
        for (a, b), u in self.terms.items():
            for (c, d), v in other.terms.items():
                k = (a + c, b + d)
                t[k] = t.get(k, 0) + u * v
        return ParamPoly(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials are invertible")
            ((a, b), c), = self.terms.items()
            return ParamPoly.mono(-a * -n, -b * -n, c ** n)
        out = ParamPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, p, q) -> Fraction:
        p, q = frac(p), frac(q)
        return sum((c * p ** a * q ** b for (a, b), c in self.terms.items()), Fraction(0))

    def diagonal(self) -> "ParamPoly":
        """Specialize ``q = p``; result uses exponents ``(a+b, 0)``."""
        t: dict = {}
        for (a, b), c in self.terms.items():
            t[(a + b, 0)] = t.get((a + b, 0), 0) + c
        return ParamPoly(t)

    def shift_p(self, k: int) -> "ParamPoly":
        out = ParamPoly()
        out.terms = {(a + k, b): c for (a, b), c in self.terms.items()}
        return out

    def max_p_power(self) -> int | None:
        return max((a for a, _ in self.terms), default=None)

    def split_p(self) -> tuple["ParamPoly", "ParamPoly", "ParamPoly"]:
        """Split a diagonal polynomial into (negative, constant, positive) powers of p."""
        neg, zero, pos = {}, {}, {}
        for (a, b), c in self.terms.items():
            (neg if a < 0 else zero if a == 0 else pos)[(a, b)] = c
        return ParamPoly(neg), ParamPoly(zero), ParamPoly(pos)

    def to_json(self) -> dict:
        return {f"({a},{b})": fstr(c) for (a, b), c in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, d: Mapping[str, str]) -> "ParamPoly":
        t = {}
        for k, v in d.items():
            a, b = k.strip("()").split(",")
            t[(int(a), int(b))] = frac(v)
        return cls(t)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            m = "".join(s for s in (f"p^{a}" if a else "", f"q^{b}" if b else ""))
            parts.append(fstr(c) + (f"*{m}" if m else ""))
        return " + ".join(parts)
