"""Rational functions over Z_{p^r} and truncated Laurent expansions.

A denominator is admissible when its lowest-degree nonzero coefficient is a
unit, i.e. it has the form D^l q(D) with q(0) a unit; such a fraction has a
semi-infinite Laurent expansion starting at exponent >= -l.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import NonUnitDenominator
from .poly import Poly, exact_quotient, gcd_monic


def _split_denominator(den: Poly):
    """den = D^l * q with q(0) a unit; returns (l, q)."""
    if den.is_zero():
        raise NonUnitDenominator("zero denominator")
    low = den.low_order()
    if not den.ctx.is_unit(den[low]):
        raise NonUnitDenominator(f"lowest coefficient of {den} is not a unit")
    return low, den.shift(-low)


@dataclass(frozen=True, eq=False)
class RationalFn:
    num: Poly
    den: Poly

    def __post_init__(self):
        if self.num.ctx != self.den.ctx:
            raise TypeError("numerator and denominator over different rings")
        _split_denominator(self.den)

    @classmethod
    def from_poly(cls, f: Poly):
        return cls(f, Poly.one(f.ctx))

    @classmethod
    def zero(cls, ctx):
        return cls(Poly.zero(ctx), Poly.one(ctx))

    @classmethod
    def one(cls, ctx):
        return cls(Poly.one(ctx), Poly.one(ctx))

    @property
    def ctx(self):
        return self.num.ctx

    def _coerce(self, other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, Poly):
            return RationalFn.from_poly(other)
        if isinstance(other, int):
            return RationalFn.from_poly(Poly.const(other, self.ctx))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFn(self.num + o.num, self.den)._tidy()
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)._tidy()

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFn(self.num * o.num, self.den * o.den)._tidy()

    __rmul__ = __mul__

    def inverse(self):
        return RationalFn(self.den, self.num)._tidy()

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        raise TypeError("RationalFn equality is cross-multiplication; not hashable")

    def _tidy(self):
        # over a field reduce to lowest terms with a monic-lowest denominator;
        # over Z_{p^r} only a unit constant denominator is cleared
        num, den = self.num, self.den
        if num.is_zero():
            return RationalFn(num, Poly.one(num.ctx))
        if num.ctx.is_field:
            g = gcd_monic([num, den])
            if g.degree > 0:
                num, den = num // g, den // g
            c = num.ctx.inverse(den[den.low_order()])
            return RationalFn(num.scale(c), den.scale(c))
        if den.degree == 0:
            return RationalFn(num.scale(num.ctx.inverse(den[0])), Poly.one(num.ctx))
        q = exact_quotient(num, den) if den.low_order() == 0 else None
        if q is not None:
            return RationalFn(q, Poly.one(num.ctx))
        return RationalFn(num, den)

    def is_polynomial(self) -> bool:
        return self.as_poly() is not None

    def as_poly(self):
        """The polynomial this equals, or None."""
        if self.num.is_zero():
            return Poly.zero(self.ctx)
        low, q = _split_denominator(self.den)
        quo = exact_quotient(self.num, q)
        if quo is None:
            return None
        if low and quo.low_order() < low:
            return None
        return quo.shift(-low)

    def is_laurent_polynomial(self) -> bool:
        """Finite Laurent expansion (denominator effectively c D^l)."""
        if self.num.is_zero():
            return True
        _, q = _split_denominator(self.den)
        return exact_quotient(self.num, q) is not None

    def leading_exponent(self) -> int:
        """Exponent of the first term of the Laurent expansion bound: -l."""
        low, _ = _split_denominator(self.den)
        return -low

    def project(self):
        return RationalFn(self.num.project(), self.den.project())

    def change_ring(self, ctx):
        return RationalFn(self.num.change_ring(ctx), self.den.change_ring(ctx))

    def __str__(self):
        if self.den == Poly.one(self.ctx):
            return str(self.num)
        n = str(self.num)
        if len([c for c in self.num.coeffs if c]) > 1:
            n = f"({n})"
        return f"{n}/({self.den})"

    __repr__ = __str__


@dataclass(frozen=True)
class LaurentWindow:
    """sum_i coeffs[i] D^(start+i) for i < len(coeffs)."""

    start: int
    coeffs: tuple
    modulus: int

    @property
    def horizon(self) -> int:
        return len(self.coeffs)

    def coefficient(self, e: int) -> int:
        i = e - self.start
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                e = self.start + i
                terms.append(f"{c}" if e == 0 else f"{c}D^{e}" if e != 1 else f"{c}D")
        return "+".join(terms) if terms else "0"


def rational_expand(f, horizon: int, start: int | None = None) -> LaurentWindow:
    """First coefficients of the Laurent expansion of f.

    The window covers exponents start .. start+horizon-1; start defaults to
    -l where the denominator is D^l q with q(0) a unit.
    """
    if isinstance(f, Poly):
        f = RationalFn.from_poly(f)
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    ctx = f.ctx
    m = ctx.modulus
    low, q = _split_denominator(f.den)
    first = -low
    if start is None:
        start = first
    if start > first:
        # expand from the natural start then drop the leading part
        need = horizon + (start - first)
        full = rational_expand(f, need, first)
        return LaurentWindow(start, full.coeffs[start - first:], m)
    q0inv = ctx.inverse(q[0])
    n = f.num
    # series of num/q, aligned so index 0 is exponent -low
    count = horizon - (first - start)
    c = []
    for k in range(max(count, 0)):
        acc = n[k]
        for j in range(1, min(k, q.degree) + 1):
            acc -= q[j] * c[k - j]
        c.append(acc * q0inv % m)
    coeffs = (0,) * (first - start) + tuple(c)
    return LaurentWindow(start, coeffs[:horizon], m)


def window_weight(w: LaurentWindow) -> int:
    return sum(1 for c in w.coeffs if c)


class Weight(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"


def classify_weight(f) -> Weight:
    if isinstance(f, Poly):
        return Weight.FINITE
    return Weight.FINITE if f.is_laurent_polynomial() else Weight.INFINITE


def window_mul_poly(w: LaurentWindow, g: Poly) -> LaurentWindow:
    """Product of a series window with a polynomial, exact on the window."""
    m = w.modulus
    out = []
    for k in range(w.horizon):
        acc = 0
        for j in range(min(k, g.degree) + 1):
            if g[j]:
                acc += g[j] * w.coeffs[k - j]
        out.append(acc % m)
    return LaurentWindow(w.start, tuple(out), m)


def window_add(a: LaurentWindow, b: LaurentWindow) -> LaurentWindow:
    if a.start != b.start or a.horizon != b.horizon:
        raise ValueError("windows must cover the same exponent range")
    return LaurentWindow(a.start, tuple((x + y) % a.modulus for x, y in zip(a.coeffs, b.coeffs)), a.modulus)


def encode_stream(inputs, G, horizon: int, start: int | None = None):
    """Expand each input to a window and push it through G coefficientwise.

    Returns (input_windows, output_windows), all on a common exponent range.
    """
    if start is None:
        start = min(f.leading_exponent() if isinstance(f, RationalFn) else 0 for f in inputs)
    wins = [rational_expand(f, horizon, start) for f in inputs]
    outs = []
    for j in range(G.ncols):
        acc = LaurentWindow(start, (0,) * horizon, G.ctx.modulus)
        for i, w in enumerate(wins):
            acc = window_add(acc, window_mul_poly(w, G[i, j]))
        outs.append(acc)
    return wins, outs
