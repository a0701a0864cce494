"""Finite extension fields GF(p^m) = F_p[x]/(P) for a chosen irreducible P."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ZeroInverse
from .poly import Poly, egcd, is_irreducible, poly_divmod


class ExtField:
    """GF(p^m) built on the root alpha of a monic irreducible minpoly."""

    def __init__(self, minpoly: Poly, check: bool = True):
        if not minpoly.ctx.is_field:
            raise ValueError("the minimal polynomial must be over F_p")
        if not minpoly.is_monic():
            minpoly = minpoly.monic()
        if check and not is_irreducible(minpoly):
            raise ValueError(f"{minpoly} is not irreducible over F_{minpoly.ctx.p}")
        self.minpoly = minpoly
        self.ctx = minpoly.ctx
        self.p = self.ctx.p
        self.m = minpoly.degree

    def __eq__(self, other):
        return isinstance(other, ExtField) and other.minpoly == self.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        return f"GF({self.p}^{self.m}) = F_{self.p}[a]/({self.minpoly})"

    def from_poly(self, f: Poly) -> "ExtFieldElem":
        r = poly_divmod(f.change_ring(self.ctx), self.minpoly)[1]
        return ExtFieldElem(tuple(r[i] for i in range(self.m)), self)

    def __call__(self, value) -> "ExtFieldElem":
        if isinstance(value, ExtFieldElem):
            return value
        if isinstance(value, Poly):
            return self.from_poly(value)
        return self.from_poly(Poly.const(value, self.ctx))

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def alpha(self):
        return self.from_poly(Poly.D(self.ctx))

    def elements(self):
        import itertools

        for c in itertools.product(range(self.p), repeat=self.m):
            yield ExtFieldElem(tuple(c), self)


@dataclass(frozen=True)
class ExtFieldElem:
    coeffs: tuple
    field: ExtField

    def to_poly(self) -> Poly:
        """Coordinates in the basis 1, a, ..., a^(m-1) read as a polynomial."""
        return Poly(self.coeffs, self.field.ctx)

    def _other(self, other):
        if isinstance(other, ExtFieldElem):
            if other.field != self.field:
                raise TypeError("cannot mix elements of different extension fields")
            return other
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return ExtFieldElem(tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)), self.field)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return ExtFieldElem(tuple(-a % p for a in self.coeffs), self.field)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return ext_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        return self * ext_inverse(other)

    def inverse(self):
        return ext_inverse(self)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"[{self.to_poly()}]".replace("D", "a")


def ext_mul(x: ExtFieldElem, y) -> ExtFieldElem:
    y = x._other(y)
    if y is NotImplemented:
        return y
    return x.field.from_poly(x.to_poly() * y.to_poly())


def ext_inverse(x: ExtFieldElem) -> ExtFieldElem:
    if x.is_zero():
        raise ZeroInverse("0 has no inverse")
    g, s, _ = egcd(x.to_poly(), x.field.minpoly)
    if g.degree != 0:
        raise ZeroInverse(f"{x} is not invertible (minpoly not irreducible?)")
    return x.field.from_poly(s)


def left_nullspace(rows, field: ExtField):
    """Basis of {y : y * A = 0} for a k x n matrix A over GF(p^m)."""
    k = len(rows)
    n = len(rows[0]) if k else 0
    # row-reduce [A | I] and read off the identity part of the zero rows
    M = [list(rows[i]) + [field(1 if j == i else 0) for j in range(k)] for i in range(k)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, k) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = M[r][c].inverse()
        M[r] = [v * inv for v in M[r]]
        for i in range(k):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return [M[i][n:] for i in range(r, k)]
