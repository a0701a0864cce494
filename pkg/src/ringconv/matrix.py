"""Polynomial matrices over Z_{p^r}[D], their minors, and tracked transforms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import NonPolynomialResult, RankDeficient, RankDeficientProjection, ShapeError, ZeroRow
from .laurent import RationalFn
from .poly import Poly, gcd_monic
from .ring import RingCtx


class PolyMatrix:
    """Immutable k x n matrix of polynomials over one ring."""

    __slots__ = ("rows", "ctx", "_minors")

    def __init__(self, rows, ctx: RingCtx):
        conv = []
        for row in rows:
            r = []
            for e in row:
                if isinstance(e, int):
                    e = Poly.const(e, ctx)
                elif e.ctx != ctx:
                    e = e.change_ring(ctx)
                r.append(e)
            conv.append(tuple(r))
        if conv and len({len(r) for r in conv}) != 1:
            raise ShapeError("ragged rows")
        self.rows = tuple(conv)
        self.ctx = ctx
        self._minors = None

    @classmethod
    def parse(cls, rows, ctx):
        """Build from nested lists of strings in the polynomial syntax."""
        return cls([[Poly.parse(e, ctx) if isinstance(e, str) else e for e in row] for row in rows], ctx)

    @classmethod
    def identity(cls, k, ctx):
        return cls([[1 if i == j else 0 for j in range(k)] for i in range(k)], ctx)

    @classmethod
    def zeros(cls, k, n, ctx):
        return cls([[0] * n for _ in range(k)], ctx)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and other.ctx == self.ctx and other.rows == self.rows

    def __hash__(self):
        return hash((self.rows, self.ctx))

    def __str__(self):
        return "\n".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows)

    def __repr__(self):
        return f"PolyMatrix over {self.ctx}:\n{self}"

    def to_lists(self):
        return [[str(e) for e in r] for r in self.rows]

    # structural helpers
    def change_ring(self, ctx):
        return PolyMatrix([[e.change_ring(ctx) for e in r] for r in self.rows], ctx)

    def project(self):
        return self.change_ring(self.ctx.residue_field())

    def scale(self, c):
        return PolyMatrix([[e * c for e in r] for r in self.rows], self.ctx)

    def stack(self, other):
        if other.nrows and self.nrows and other.ncols != self.ncols:
            raise ShapeError("column counts differ")
        return PolyMatrix(self.rows + other.rows, self.ctx)

    def with_row(self, i, row):
        rows = list(self.rows)
        rows[i] = tuple(row)
        return PolyMatrix(rows, self.ctx)

    def drop_zero_rows(self):
        return PolyMatrix([r for r in self.rows if any(not e.is_zero() for e in r)], self.ctx)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        zero = Poly.zero(self.ctx)
        out = []
        for r in self.rows:
            out.append([sum((r[t] * other.rows[t][j] for t in range(self.ncols)), zero)
                        for j in range(other.ncols)])
        return PolyMatrix(out, self.ctx)

    def __add__(self, other):
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ctx)

    def __sub__(self, other):
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ctx)

    def evaluate(self, x):
        return [[e(x) for e in r] for r in self.rows]

    def constant_term(self):
        """G(0) as integer rows."""
        return [[e[0] for e in r] for r in self.rows]

    def row_degrees(self):
        return [max((e.degree for e in r), default=-1) for r in self.rows]

    # minors
    def minors(self):
        if self._minors is None:
            object.__setattr__(self, "_minors", minors_k(self))
        return self._minors

    def det(self):
        if self.nrows != self.ncols:
            raise ShapeError("determinant of a non-square matrix")
        if self.nrows == 0:
            return Poly.one(self.ctx)
        return minors_k(self)[tuple(range(self.ncols))]


def minors_k(G: PolyMatrix):
    """All maximal (k x k) minors keyed by the sorted column tuple.

    Cofactor expansion along the rows, memoized over column subsets; no
    division is ever performed, so it is exact over Z_{p^r}.
    """
    k, n = G.shape
    if k > n:
        raise ShapeError(f"{k} rows exceed {n} columns")
    ctx = G.ctx
    rows = G.rows

    @lru_cache(maxsize=None)
    def det_sub(i, cols):
        # determinant of rows i..k-1 restricted to the column tuple `cols`
        if i == k:
            return Poly.one(ctx)
        acc = Poly.zero(ctx)
        for pos, c in enumerate(cols):
            e = rows[i][c]
            if e.is_zero():
                continue
            sub = det_sub(i + 1, cols[:pos] + cols[pos + 1:])
            term = e * sub
            acc = acc - term if pos % 2 else acc + term
        return acc

    return {cols: det_sub(0, cols) for cols in itertools.combinations(range(n), k)}


def delta(G: PolyMatrix) -> Poly:
    """Monic gcd of the nonzero maximal minors of a matrix over F_p."""
    if not G.ctx.is_field:
        raise ValueError("delta is defined over F_p; use delta_p over Z_{p^r}")
    nz = [m for m in G.minors().values() if not m.is_zero()]
    if not nz:
        raise RankDeficient("all maximal minors vanish")
    return gcd_monic(nz)


def delta_p(G: PolyMatrix) -> Poly:
    """delta of the entrywise mod-p projection."""
    try:
        return delta(G.project())
    except RankDeficient as exc:
        raise RankDeficientProjection("projection is not of full row rank") from exc


def delta_p_via_ring_minors(G: PolyMatrix) -> Poly:
    """Second route to delta_p: minors over Z_{p^r}, then project."""
    nz = [m.project() for m in G.minors().values()]
    nz = [m for m in nz if not m.is_zero()]
    if not nz:
        raise RankDeficientProjection("projection is not of full row rank")
    return gcd_monic(nz)


@dataclass(frozen=True)
class Degrees:
    row_degrees: tuple
    extdeg: int
    intdeg: int


def degrees(G: PolyMatrix) -> Degrees:
    rd = tuple(G.row_degrees())
    ext = sum(d for d in rd if d >= 0)
    nz = [m for m in G.minors().values() if not m.is_zero()]
    intdeg = max((m.degree for m in nz), default=-1)
    return Degrees(rd, ext, intdeg)


def intdeg(G: PolyMatrix) -> int:
    return degrees(G).intdeg


def lrc(G: PolyMatrix):
    """Leading row coefficient matrix as integer rows."""
    out = []
    for i, r in enumerate(G.rows):
        d = max((e.degree for e in r), default=-1)
        if d < 0:
            raise ZeroRow(f"row {i} is zero")
        out.append([e[d] for e in r])
    return out


def is_unimodular(M: PolyMatrix) -> bool:
    if M.nrows != M.ncols:
        raise ShapeError("unimodularity needs a square matrix")
    d = M.det().project()
    return d.degree == 0


# ----------------------------------------------------------------------------
# rational matrices and transform logs


class RatMatrix:
    """Square or rectangular matrix of RationalFn entries."""

    def __init__(self, rows, ctx):
        self.ctx = ctx
        conv = []
        for r in rows:
            conv.append(tuple(e if isinstance(e, RationalFn) else RationalFn.from_poly(
                e if isinstance(e, Poly) else Poly.const(e, ctx)) for e in r))
        self.rows = tuple(conv)

    @classmethod
    def identity(cls, k, ctx):
        return cls([[1 if i == j else 0 for j in range(k)] for i in range(k)], ctx)

    @classmethod
    def from_poly_matrix(cls, M: PolyMatrix):
        return cls(M.rows, M.ctx)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other):
        if isinstance(other, PolyMatrix):
            other = RatMatrix.from_poly_matrix(other)
        return (isinstance(other, RatMatrix) and self.nrows == other.nrows
                and all(a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)))

    def __matmul__(self, other):
        if isinstance(other, PolyMatrix):
            other = RatMatrix.from_poly_matrix(other)
        if self.ncols != other.nrows:
            raise ShapeError("shape mismatch")
        zero = RationalFn.zero(self.ctx)
        return RatMatrix([[sum((r[t] * other.rows[t][j] for t in range(self.ncols)), zero)
                           for j in range(other.ncols)] for r in self.rows], self.ctx)

    def scale(self, c):
        return RatMatrix([[e * c for e in r] for r in self.rows], self.ctx)

    def det(self) -> RationalFn:
        k = self.nrows
        if k != self.ncols:
            raise ShapeError("determinant of a non-square matrix")
        acc = RationalFn.zero(self.ctx)
        for perm in itertools.permutations(range(k)):
            sign = 1
            for a in range(k):
                for b in range(a + 1, k):
                    if perm[a] > perm[b]:
                        sign = -sign
            term = RationalFn.one(self.ctx)
            for i, j in enumerate(perm):
                term = term * self.rows[i][j]
                if term.num.is_zero():
                    break
            acc = acc + term if sign > 0 else acc - term
        return acc

    def inverse(self) -> "RatMatrix":
        """Inverse over the rational-function field F_p(D); fields only."""
        if not self.ctx.is_field:
            raise ValueError("rational inversion implemented over F_p only")
        k = self.nrows
        A = [list(r) + [RationalFn.from_poly(Poly.const(1 if i == j else 0, self.ctx)) for j in range(k)]
             for i, r in enumerate(self.rows)]
        for c in range(k):
            piv = next((i for i in range(c, k) if not A[i][c].num.is_zero()), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            A[c], A[piv] = A[piv], A[c]
            inv = A[c][c].inverse()
            A[c] = [x * inv for x in A[c]]
            for i in range(k):
                if i != c and not A[i][c].num.is_zero():
                    f = A[i][c]
                    A[i] = [x - f * y for x, y in zip(A[i], A[c])]
        return RatMatrix([r[k:] for r in A], self.ctx)

    def to_poly_matrix(self) -> PolyMatrix:
        out = []
        for i, r in enumerate(self.rows):
            row = []
            for j, e in enumerate(r):
                q = e.as_poly()
                if q is None:
                    raise NonPolynomialResult(f"entry ({i},{j}) = {e} is not polynomial")
                row.append(q)
            out.append(row)
        return PolyMatrix(out, self.ctx)

    def is_polynomial(self) -> bool:
        return all(e.is_polynomial() for r in self.rows for e in r)

    def __str__(self):
        return "\n".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows)

    __repr__ = __str__


@dataclass
class TransformLog:
    """Elementary left operations; replaying them on I gives the transform M.

    Step tuples:
      ("add", target, source, multiplier)   row_t += multiplier * row_s
      ("scale", target, factor)             row_t *= factor  (unit or rational)
      ("swap", a, b)
    Multipliers and factors are Poly or RationalFn.
    """

    size: int
    ctx: RingCtx
    steps: list = field(default_factory=list)

    def add(self, target, source, multiplier):
        self.steps.append(("add", target, source, multiplier))

    def scale(self, target, factor):
        self.steps.append(("scale", target, factor))

    def swap(self, a, b):
        self.steps.append(("swap", a, b))

    def extend(self, other: "TransformLog"):
        self.steps.extend(other.steps)

    def replay(self, start=None):
        """Apply the steps to `start` (default identity); rows are RationalFn."""
        rows = [list(r) for r in (start or RatMatrix.identity(self.size, self.ctx)).rows]
        for step in self.steps:
            kind = step[0]
            if kind == "add":
                _, t, s, mult = step
                rows[t] = [a + mult * b for a, b in zip(rows[t], rows[s])]
            elif kind == "scale":
                _, t, fac = step
                rows[t] = [a * fac for a in rows[t]]
            elif kind == "swap":
                _, a, b = step
                rows[a], rows[b] = rows[b], rows[a]
        return RatMatrix(rows, self.ctx)

    def matrix(self) -> RatMatrix:
        return self.replay()

    @property
    def net_det(self) -> RationalFn:
        det = RationalFn.one(self.ctx)
        for step in self.steps:
            if step[0] == "scale":
                fac = step[2]
                det = det * fac
            elif step[0] == "swap":
                det = -det
        return det

    def __len__(self):
        return len(self.steps)

    def describe(self):
        out = []
        for step in self.steps:
            if step[0] == "add":
                out.append(f"row{step[1] + 1} += ({step[3]}) * row{step[2] + 1}")
            elif step[0] == "scale":
                out.append(f"row{step[1] + 1} *= {step[2]}")
            else:
                out.append(f"swap row{step[1] + 1}, row{step[2] + 1}")
        return out


def apply_left(M, G: PolyMatrix, polynomial: bool = True):
    """M G for a PolyMatrix, RatMatrix or TransformLog M.

    With polynomial=True the product must clear all denominators
    (NonPolynomialResult otherwise) and a PolyMatrix is returned.
    """
    if isinstance(M, TransformLog):
        M = M.matrix()
    if isinstance(M, PolyMatrix):
        return M @ G
    prod = M @ G
    return prod.to_poly_matrix() if polynomial else prod
