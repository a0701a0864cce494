"""Dense univariate polynomials over Z_{p^r} and F_p.

Coefficients are stored low-to-high as canonical residues.  The zero
polynomial has no coefficients and degree -1 (used as the "-inf" sentinel).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .errors import AllZero, NonUnitLeading, NotRegular
from .linalg import solve_mod
from .ring import RingCtx


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class Poly:
    coeffs: tuple
    ctx: RingCtx

    def __post_init__(self):
        m = self.ctx.modulus
        object.__setattr__(self, "coeffs", _trim(c % m for c in self.coeffs))

    # construction helpers
    @classmethod
    def zero(cls, ctx):
        return cls((), ctx)

    @classmethod
    def one(cls, ctx):
        return cls((1,), ctx)

    @classmethod
    def const(cls, c, ctx):
        return cls((c,), ctx)

    @classmethod
    def monomial(cls, c, k, ctx):
        return cls((0,) * k + (c,), ctx)

    @classmethod
    def D(cls, ctx):
        return cls((0, 1), ctx)

    @classmethod
    def parse(cls, text, ctx):
        return parse_poly(text, ctx)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def low_order(self) -> int:
        """Exponent of the lowest nonzero term (-1 for zero)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monomial(self) -> bool:
        return sum(1 for c in self.coeffs if c) == 1

    def is_power_of_D(self) -> bool:
        """True for c*D^l with c a unit (includes nonzero unit constants)."""
        return self.is_monomial() and self.ctx.is_unit(self.lc)

    def _check(self, other):
        if isinstance(other, int):
            return Poly.const(other, self.ctx)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.ctx != self.ctx:
            raise TypeError(f"ring mismatch: {self.ctx} vs {other.ctx}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                          for i in range(n)), self.ctx)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs), self.ctx)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.ctx)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(tuple(out), self.ctx)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Poly.one(self.ctx)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c: int) -> "Poly":
        return Poly(tuple(c * x for x in self.coeffs), self.ctx)

    def shift(self, k: int) -> "Poly":
        """Multiply by D^k (k >= 0) or drop the k lowest terms (k < 0)."""
        if k >= 0:
            return Poly((0,) * k + self.coeffs, self.ctx)
        return Poly(self.coeffs[-k:], self.ctx)

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, int) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if isinstance(acc, int):
            return acc % self.ctx.modulus
        return acc

    def change_ring(self, ctx: RingCtx) -> "Poly":
        """Reduce (or lift with zero high digits) into another Z_{p^s}."""
        return Poly(self.coeffs, ctx)

    def project(self) -> "Poly":
        return self.change_ring(self.ctx.residue_field())

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self.scale(self.ctx.inverse(self.lc))

    def valuation(self) -> int:
        """Largest v with p^v dividing every coefficient (r for zero)."""
        if not self.coeffs:
            return self.ctx.r
        return min(self.ctx.valuation(c) for c in self.coeffs)

    def divmod(self, other):
        return poly_divmod(self, other)

    def __floordiv__(self, other):
        return poly_divmod(self, other)[0]

    def __mod__(self, other):
        return poly_divmod(self, other)[1]

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r} over {self.ctx})"

    def sort_key(self):
        return (len(self.coeffs), tuple(reversed(self.coeffs)))


# ----------------------------------------------------------------------------
# text syntax

_TERM = re.compile(r"^(\d*)(?:\*?(D)(?:\^(\d+))?)?$")


def parse_poly(text: str, ctx: RingCtx) -> Poly:
    """Parse sums of terms ``c``, ``cD``, ``cD^k`` (also ``c*D^k``, ``-``).

    Parenthesised products such as ``3(1+D)`` or ``(1+D)(2+D)^2`` are
    accepted as well, so matrices can be copied in factored form.
    """
    from .textio import parse_poly_expr

    return parse_poly_expr(text, ctx)


def format_poly(f: Poly) -> str:
    if not f.coeffs:
        return "0"
    terms = []
    for k, c in enumerate(f.coeffs):
        if not c:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            coef = "" if c == 1 else str(c)
            terms.append(f"{coef}D" if k == 1 else f"{coef}D^{k}")
    return "+".join(terms)


# ----------------------------------------------------------------------------
# division


def poly_divmod(a: Poly, b: Poly):
    """Division with remainder by a unit-leading divisor."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ctx = a.ctx
    if not ctx.is_unit(b.lc):
        raise NonUnitLeading(f"leading coefficient of {b} is not a unit")
    inv = ctx.inverse(b.lc)
    rem = list(a.coeffs)
    db = b.degree
    q = [0] * max(len(rem) - db, 0)
    m = ctx.modulus
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k] * inv % m
        if c:
            q[k - db] = c
            for j, bc in enumerate(b.coeffs):
                rem[k - db + j] = (rem[k - db + j] - c * bc) % m
    return Poly(tuple(q), ctx), Poly(tuple(rem[:db]), ctx)


def gcd_monic(polys) -> Poly:
    """Monic gcd over F_p of the nonzero inputs."""
    polys = [f for f in polys if not f.is_zero()]
    if not polys:
        raise AllZero("gcd of an all-zero family is undefined")
    g = polys[0]
    if not g.ctx.is_field:
        raise ValueError("gcd_monic requires polynomials over F_p")
    for f in polys[1:]:
        a, b = g, f
        while not b.is_zero():
            a, b = b, poly_divmod(a, b)[1]
        g = a
        if g.degree == 0:
            break
    return g.monic()


def egcd(a: Poly, b: Poly):
    """(g, s, t) with s a + t b = g monic, over a field."""
    ctx = a.ctx
    r0, r1 = a, b
    s0, s1 = Poly.one(ctx), Poly.zero(ctx)
    t0, t1 = Poly.zero(ctx), Poly.one(ctx)
    while not r1.is_zero():
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = ctx.inverse(r0.lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


# ----------------------------------------------------------------------------
# factorization over F_p


@dataclass(frozen=True)
class Factorization:
    unit: int
    factors: tuple  # of (Poly, multiplicity)

    def expand(self) -> Poly:
        ctx = self.factors[0][0].ctx if self.factors else None
        if ctx is None:
            raise ValueError("empty factorization has no ring; use unit")
        out = Poly.const(self.unit, ctx)
        for f, e in self.factors:
            out = out * f ** e
        return out

    def irreducibles(self):
        """Factors repeated according to multiplicity."""
        return [f for f, e in self.factors for _ in range(e)]

    def __str__(self):
        parts = [] if self.unit == 1 else [str(self.unit)]
        for f, e in self.factors:
            s = f"({f})"
            parts.append(s if e == 1 else f"{s}^{e}")
        return "*".join(parts) or "1"


def monic_polys(degree: int, ctx: RingCtx):
    """All monic polynomials of a given degree, lexicographic in the lower coefficients."""
    for tail in itertools.product(range(ctx.modulus), repeat=degree):
        yield Poly(tuple(reversed(tail)) + (1,), ctx)


def is_irreducible(f: Poly) -> bool:
    """Trial division by every monic polynomial of degree <= deg f / 2."""
    if f.degree < 1:
        return False
    for d in range(1, f.degree // 2 + 1):
        for g in monic_polys(d, f.ctx):
            if poly_divmod(f, g)[1].is_zero():
                return False
    return True


def factor_fp(f: Poly) -> Factorization:
    """Complete factorization over F_p into monic irreducibles."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    ctx = f.ctx
    if not ctx.is_field:
        raise ValueError("factor_fp requires a polynomial over F_p")
    unit = f.lc
    rest = f.monic()
    found = {}
    d = 1
    while rest.degree >= 2 * d:
        for g in monic_polys(d, ctx):
            while True:
                q, r = poly_divmod(rest, g)
                if not r.is_zero():
                    break
                found[g] = found.get(g, 0) + 1
                rest = q
        d += 1
    if rest.degree >= 1:
        found[rest] = found.get(rest, 0) + 1
    factors = tuple(sorted(found.items(), key=lambda fe: fe[0].sort_key()))
    result = Factorization(unit, factors)
    if factors and result.expand() != f:
        raise AssertionError("factorization does not re-expand to its input")
    return result


# ----------------------------------------------------------------------------
# Z_{p^r}-specific operations


def is_regular(f: Poly) -> bool:
    return not f.project().is_zero()


def unit_inverse(u: Poly) -> Poly:
    """Inverse of a unit of Z_{p^r}[D] (unit constant, nilpotent remainder)."""
    ctx = u.ctx
    if u.is_zero() or not ctx.is_unit(u[0]) or not u.project().is_constant():
        raise NotRegular(f"{u} is not a unit of {ctx}[D]")
    c_inv = ctx.inverse(u[0])
    # u = c (1 + N) with N nilpotent: N^r = 0
    n = u.scale(c_inv) - 1
    acc = Poly.one(ctx)
    term = Poly.one(ctx)
    for _ in range(ctx.r):
        term = -(term * n)
        acc = acc + term
    inv = acc.scale(c_inv)
    if u * inv != Poly.one(ctx):
        raise AssertionError("unit inverse check failed")
    return inv


def is_unit_poly(u: Poly) -> bool:
    return not u.is_zero() and u.ctx.is_unit(u[0]) and u.project().is_constant()


def monic_unit_split(f: Poly):
    """Write a regular f as f1 * f2, f1 monic with the same projection as the
    monic normalization of f mod p, f2 a unit polynomial.

    Linear Hensel lifting of the coprime factorization f = monic(f_bar) * c.
    """
    if not is_regular(f):
        raise NotRegular(f"{f} has zero projection")
    ctx = f.ctx
    p, m = ctx.p, ctx.modulus
    fbar = f.project()
    g_bar = fbar.monic()
    c = fbar.lc
    c_inv_p = pow(c, -1, p)
    g = g_bar.change_ring(ctx)
    h = Poly.const(c, ctx)
    fld = ctx.residue_field()
    for k in range(1, ctx.r):
        pk = p ** k
        err = f - g * h
        if any(x % pk for x in err.coeffs):
            raise AssertionError("Hensel invariant broken")
        e = Poly(tuple((x // pk) % p for x in err.coeffs), fld)
        q, rem = poly_divmod(e.scale(c_inv_p), g_bar)
        g = g + rem.change_ring(ctx).scale(pk)
        h = h + (q.change_ring(ctx).scale(c)).scale(pk)
    if g * h != f:
        raise AssertionError("monic/unit split does not multiply back")
    unit_inverse(h)
    return g, h


def divides(P: Poly, Q: Poly) -> bool:
    """Whether P | Q in Z_{p^r}[D] for regular P (zero Q is divisible)."""
    return exact_quotient(Q, P) is not None


def exact_quotient(Q: Poly, P: Poly):
    """Q / P in Z_{p^r}[D] when P is regular and divides Q, else None."""
    if Q.is_zero():
        return Poly.zero(Q.ctx)
    if P.ctx.is_field:
        q, r = poly_divmod(Q, P)
        return q if r.is_zero() else None
    P1, P2 = monic_unit_split(P)
    q, r = poly_divmod(Q, P1)
    if not r.is_zero():
        return None
    return q * unit_inverse(P2)


def divisibility_lift_check(P: Poly, Q: Poly):
    """Least i such that p^j P divides p^j Q for every j in [i, r-1], or None.

    p^j P | p^j Q in Z_{p^r}[D] is the same as P | Q in Z_{p^(r-j)}[D].
    The search descends from j = r-1 and stops at the first failure.
    """
    if not is_regular(P) or not is_regular(Q):
        raise NotRegular("divisibility_lift_check needs regular polynomials")
    ctx = P.ctx
    best = None
    for j in range(ctx.r - 1, -1, -1):
        sub = ctx.truncated(ctx.r - j)
        if divides(P.change_ring(sub), Q.change_ring(sub)):
            best = j
        else:
            break
    return best


def divides_by_linear_system(P: Poly, Q: Poly, degree_bound=None) -> bool:
    """Brute-force divisibility: solve Q = P S for S with bounded degree."""
    ctx = P.ctx
    if Q.is_zero():
        return True
    if degree_bound is None:
        degree_bound = max(Q.degree, 0) + ctx.r * (P.degree + 1)
    nS = degree_bound + 1
    nrows = max(P.degree + nS, Q.degree + 1)
    A = [[0] * nS for _ in range(nrows)]
    for j in range(nS):
        for i, c in enumerate(P.coeffs):
            A[i + j][j] = c
    b = [Q[i] for i in range(nrows)]
    return solve_mod(A, b, ctx.p, ctx.r) is not None
