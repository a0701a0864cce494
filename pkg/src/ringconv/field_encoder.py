"""Encoders over F_p: basicity, catastrophicity, concentrating Delta into one
row, and explicit catastrophic inputs."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HypothesisViolation, InternalCheckFailed
from .extfield import ExtField, left_nullspace
from .laurent import RationalFn, Weight, classify_weight
from .matrix import PolyMatrix, RatMatrix, TransformLog, apply_left, delta
from .poly import Poly, exact_quotient, factor_fp


def _require_field(G: PolyMatrix):
    if not G.ctx.is_field:
        raise ValueError("expected a matrix over F_p")


def is_basic(G: PolyMatrix) -> bool:
    """gcd of the maximal minors is 1."""
    _require_field(G)
    return delta(G).degree == 0


def is_noncatastrophic_field(G: PolyMatrix) -> bool:
    """Delta(G) is a power of D."""
    _require_field(G)
    return delta(G).is_power_of_D()


@dataclass
class ConcentrationResult:
    M: RatMatrix
    row_index: int
    quotient: PolyMatrix  # basic
    log: TransformLog
    product: PolyMatrix  # M G; row `row_index` equals Delta times the quotient row

    @property
    def det(self) -> RationalFn:
        return self.M.det()


def zeroing_row(vectors):
    """Pick (row, vector) from a left-null basis: the largest index at which
    some basis vector is nonzero, with that vector normalised to 1 there."""
    best = None
    for y in vectors:
        nz = [i for i, c in enumerate(y) if not c.is_zero()]
        if nz and (best is None or nz[-1] > best[0]):
            best = (nz[-1], y)
    if best is None:
        return None
    j, y = best
    inv = y[j].inverse()
    return j, [c * inv for c in y]


def _remove_factor(rows, P: Poly, log: TransformLog, ctx):
    """Make one row divisible by P with transvections, then divide it."""
    K = ExtField(P)
    at_root = [[K.from_poly(e) for e in row] for row in rows]
    pick = zeroing_row(left_nullspace(at_root, K))
    if pick is None:
        raise InternalCheckFailed(f"{P} divides Delta but G(alpha) has full rank")
    j, y = pick
    target = list(rows[j])
    for i, c in enumerate(y):
        if i == j or c.is_zero():
            continue
        mult = c.to_poly()
        log.add(j, i, mult)
        target = [a + mult * b for a, b in zip(target, rows[i])]
    divided = []
    for e in target:
        q = exact_quotient(e, P)
        if q is None:
            raise InternalCheckFailed(f"row {j} is not divisible by {P} after zeroing at its root")
        divided.append(q)
    log.scale(j, RationalFn(Poly.one(ctx), P))
    rows[j] = divided
    return j


def concentrate_delta(G: PolyMatrix) -> ConcentrationResult:
    """Find M with constant determinant such that one row of M G is Delta(G)
    times a row of a basic matrix.

    Each irreducible factor P of Delta (with multiplicity) is removed by
    zeroing a row of G(alpha) over GF(p^deg P), alpha a root of P, reading
    the GF coordinates back as polynomials in D, and dividing that row by P.
    The last designated row is finally multiplied by Delta(G).
    """
    _require_field(G)
    ctx = G.ctx
    d = delta(G)
    log = TransformLog(G.nrows, ctx)
    rows = [list(r) for r in G.rows]
    j = G.nrows - 1
    for P, mult in factor_fp(d).factors:
        for _ in range(mult):
            j = _remove_factor(rows, P, log, ctx)
    quotient = PolyMatrix(rows, ctx)
    if delta(quotient).degree != 0:
        raise InternalCheckFailed("quotient is not basic")
    if d.degree > 0:
        log.scale(j, RationalFn.from_poly(d))
    M = log.matrix()
    product = apply_left(M, G)
    expected = quotient.with_row(j, [e * d for e in quotient.rows[j]])
    if product != expected:
        raise InternalCheckFailed("M G does not match the scaled quotient")
    return ConcentrationResult(M, j, quotient, log, product)


def _default_factor(d: Poly):
    nonD = [f for f, _ in factor_fp(d).factors if not f.is_power_of_D()]
    if not nonD:
        return None
    return min(nonD, key=lambda f: f.sort_key())


def catastrophic_witness(G: PolyMatrix, factor: Poly | None = None):
    """(u, y): u has an infinite-weight entry and y = u G is polynomial.

    u = (1/Q) * (row j of M), M from concentrate_delta and Q a non-D
    irreducible factor of Delta; None when G is noncatastrophic.
    """
    _require_field(G)
    d = delta(G)
    Q = factor if factor is not None else _default_factor(d)
    if Q is None:
        return None
    if exact_quotient(d, Q) is None:
        raise ValueError(f"{Q} does not divide Delta(G) = {d}")
    res = concentrate_delta(G)
    u = [m / RationalFn.from_poly(Q) for m in res.M.rows[res.row_index]]
    if all(classify_weight(x) is Weight.FINITE for x in u):
        raise InternalCheckFailed("witness input came out finite")
    y = []
    for c in range(G.ncols):
        acc = RationalFn.zero(G.ctx)
        for i in range(G.nrows):
            acc = acc + u[i] * G[i, c]
        p = acc.as_poly()
        if p is None:
            raise InternalCheckFailed("witness output is not polynomial")
        y.append(p)
    return u, tuple(y)


def _laurent_monomial(f: RationalFn) -> bool:
    """f = c D^a for a nonzero constant c and integer a."""
    if f.num.is_zero():
        return False
    return f.num.is_monomial() and f.den.is_monomial()


def verify_witness_decomposition(G: PolyMatrix, u, M) -> bool:
    """For M with det c D^a whose product M G has a row divisible by Delta(G),
    check that w = u M^{-1} has exactly one infinite-weight entry, at that
    row, of the form R/(D^l Q) with Q | Delta(G)."""
    _require_field(G)
    ctx = G.ctx
    if isinstance(M, PolyMatrix):
        M = RatMatrix.from_poly_matrix(M)
    if not _laurent_monomial(M.det()):
        raise HypothesisViolation("det M is not of the form c D^a")
    prod = M @ G
    if not prod.is_polynomial():
        raise HypothesisViolation("M G is not polynomial")
    MG = prod.to_poly_matrix()
    d = delta(G)
    rows = [i for i, r in enumerate(MG.rows) if all(exact_quotient(e, d) is not None for e in r)]
    if not rows:
        raise HypothesisViolation("no row of M G is divisible by Delta(G)")
    u = [x if isinstance(x, RationalFn) else RationalFn.from_poly(x) for x in u]
    Minv = M.inverse()
    w = [sum((u[i] * Minv[i, c] for i in range(len(u))), RationalFn.zero(ctx)) for c in range(M.ncols)]
    infinite = [i for i, x in enumerate(w) if classify_weight(x) is Weight.INFINITE]
    if len(infinite) != 1 or infinite[0] not in rows:
        return False
    x = w[infinite[0]]
    low = x.den.low_order()
    Q = x.den.shift(-low)
    return exact_quotient(d, Q) is not None
