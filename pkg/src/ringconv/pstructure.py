"""p-linear algebra: p-linear combinations, p-generator sequences, p-bases.

Membership questions over A[D] (A = {0,...,p-1}) are answered in two steps:
an exact Z_{p^r}-linear solve for ordinary polynomial coefficients, followed
by a carry pushdown through the p-generator certificate that turns every
coefficient into a digit polynomial.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import CoefficientOutOfA, Inconclusive
from .linalg import group_order_exponent, nullspace_mod_p, solve_mod
from .matrix import PolyMatrix, TransformLog, lrc
from .poly import Poly, factor_fp, gcd_monic

MAX_ESCALATION = 8


def _is_digit_poly(f: Poly) -> bool:
    return all(c < f.ctx.p for c in f.coeffs)


def p_linear_combination(coeffs, G: PolyMatrix):
    """sum_j a_j(D) g_j(D) for digit polynomials a_j."""
    if len(coeffs) != G.nrows:
        raise ValueError("one coefficient per row is required")
    ctx = G.ctx
    out = [Poly.zero(ctx)] * G.ncols
    for a, row in zip(coeffs, G.rows):
        if isinstance(a, int):
            a = Poly.const(a, ctx)
        if not _is_digit_poly(a):
            raise CoefficientOutOfA(f"coefficient {a} has digits outside 0..{ctx.p - 1}")
        out = [o + a * e for o, e in zip(out, row)]
    return tuple(out)


def combine(coeffs, rows, ctx):
    """Unrestricted Z_{p^r}[D]-combination of rows."""
    n = len(rows[0]) if rows else 0
    out = [Poly.zero(ctx)] * n
    for a, row in zip(coeffs, rows):
        if a.is_zero():
            continue
        out = [o + a * e for o, e in zip(out, row)]
    return tuple(out)


# ----------------------------------------------------------------------------
# linear solving


def _build_system(rows, ncols, bound, extra_len):
    """Column block for unknown coefficients c_{i,t}, t <= bound."""
    k = len(rows)
    rowdeg = max((e.degree for r in rows for e in r), default=-1)
    E = max(rowdeg + bound, extra_len - 1, 0) + 1
    cols = []
    for i in range(k):
        for t in range(bound + 1):
            col = [0] * (ncols * E)
            for c in range(ncols):
                e = rows[i][c]
                for d, x in enumerate(e.coeffs):
                    if x:
                        col[c * E + d + t] = x
            cols.append(col)
    return cols, E


def span_solve(v, rows, ctx, bound: int):
    """Polynomial coefficients c_i (deg <= bound) with sum c_i rows_i = v, or None."""
    if not rows:
        return [] if all(e.is_zero() for e in v) else None
    n = len(v)
    vlen = max((e.degree + 1 for e in v), default=0)
    cols, E = _build_system(rows, n, bound, vlen)
    if vlen > E:
        return None
    A = [list(r) for r in zip(*cols)]
    b = [0] * (n * E)
    for c in range(n):
        for d, x in enumerate(v[c].coeffs):
            b[c * E + d] = x
    x = solve_mod(A, b, ctx.p, ctx.r)
    if x is None:
        return None
    nb = bound + 1
    return [Poly(tuple(x[i * nb:(i + 1) * nb]), ctx) for i in range(len(rows))]


@dataclass
class RationalMembership:
    """D^shift * den * v = sum coeffs_i rows_i with den(0) = 1."""

    shift: int
    den: Poly
    coeffs: list

    def check(self, v, rows, ctx) -> bool:
        lhs = tuple((self.den * e).shift(self.shift) for e in v)
        return lhs == combine(self.coeffs, rows, ctx)


def rational_span_solve(v, rows, ctx, bound: int):
    """Membership of v in the span of rows over Laurent series.

    Searches a denominator D^l d(D), d(0) = 1, deg d <= bound, l <= bound,
    together with polynomial coefficients of degree <= bound.
    """
    if not rows:
        return RationalMembership(0, Poly.one(ctx), []) if all(e.is_zero() for e in v) else None
    n = len(v)
    for shift in range(bound + 1):
        sv = [e.shift(shift) for e in v]
        vlen = max((e.degree + 1 for e in sv), default=0) + bound
        cols, E = _build_system(rows, n, bound, vlen)
        # unknowns d_1..d_bound enter with -D^(shift+t) v
        for t in range(1, bound + 1):
            col = [0] * (n * E)
            for c in range(n):
                for d, x in enumerate(sv[c].coeffs):
                    col[c * E + d + t] = -x
            cols.append(col)
        A = [list(r) for r in zip(*cols)]
        b = [0] * (n * E)
        for c in range(n):
            for d, x in enumerate(sv[c].coeffs):
                b[c * E + d] = x
        x = solve_mod(A, b, ctx.p, ctx.r)
        if x is None:
            continue
        nb = bound + 1
        k = len(rows)
        coeffs = [Poly(tuple(x[i * nb:(i + 1) * nb]), ctx) for i in range(k)]
        den = Poly((1,) + tuple(x[k * nb:]), ctx)
        cert = RationalMembership(shift, den, coeffs)
        if not cert.check(v, rows, ctx):
            raise AssertionError("rational membership certificate does not replay")
        return cert
    return None


def _escalate(fn, start_bound):
    b = max(start_bound, 1)
    for _ in range(4):
        out = fn(b)
        if out is not None:
            return out, b
        if b >= start_bound * MAX_ESCALATION:
            break
        b *= 2
    return None, b


def default_bound(G: PolyMatrix) -> int:
    return max(max(G.row_degrees(), default=0), 1)


# ----------------------------------------------------------------------------
# p-generator sequences


@dataclass
class PBasisCertificate:
    kind: str  # "generator-sequence", "p-basis", "reduced-p-basis"
    witness: list  # witness[i][j]: digit polynomial with p v_i = sum_j witness[i][j] v_j
    degree_bound: int = 0
    lrc_independence: bool | None = None

    def replay(self, G: PolyMatrix) -> bool:
        ctx = G.ctx
        k = G.nrows
        for i in range(k):
            coeffs = self.witness[i]
            if any(not coeffs[j].is_zero() for j in range(i + 1)):
                return False
            if any(not _is_digit_poly(c) for c in coeffs):
                return False
            lhs = tuple(e.scale(ctx.p) for e in G.rows[i])
            if lhs != combine(coeffs, G.rows, ctx):
                return False
        return True

    def to_json(self):
        return {
            "kind": self.kind,
            "degree_bound": self.degree_bound,
            "witness": [[str(c) for c in row] for row in self.witness],
        }


def pushdown(coeffs, witness, ctx):
    """Rewrite Z_{p^r}[D] coefficients as digit polynomials with the same
    combination, carrying multiples of p down the generator sequence."""
    p = ctx.p
    c = list(coeffs)
    k = len(c)
    out = []
    for i in range(k):
        digits = Poly(tuple(x % p for x in c[i].coeffs), ctx)
        carry = Poly(tuple(x // p for x in c[i].coeffs), ctx)
        out.append(digits)
        if carry.is_zero():
            continue
        for j in range(i + 1, k):
            w = witness[i][j]
            if not w.is_zero():
                c[j] = c[j] + carry * w
    return out


def is_p_generator_sequence(G: PolyMatrix, degree_bound: int | None = None):
    """PBasisCertificate if the rows form a p-generator sequence, else None.

    Raises Inconclusive when some p*v_i could not be expressed within the
    escalated degree bound but no structural obstruction was found.
    """
    ctx = G.ctx
    k = G.nrows
    zero = Poly.zero(ctx)
    witness = [[zero] * k for _ in range(k)]
    if k == 0:
        return PBasisCertificate("generator-sequence", witness)
    last = tuple(e.scale(ctx.p) for e in G.rows[-1])
    if any(not e.is_zero() for e in last):
        return None
    bound0 = degree_bound if degree_bound is not None else default_bound(G)
    used = bound0
    for i in range(k - 2, -1, -1):
        target = tuple(e.scale(ctx.p) for e in G.rows[i])
        tail = list(G.rows[i + 1:])
        sol, b = _escalate(lambda bb: span_solve(target, tail, ctx, bb), bound0)
        if sol is None:
            if rational_span_solve(target, tail, ctx, bound0) is None and ctx.r == 1:
                return None
            raise Inconclusive(f"p*row{i + 1} not expressed over later rows within degree {b}")
        used = max(used, b)
        tail_witness = [row[i + 1:] for row in witness[i + 1:]]
        digits = pushdown(sol, tail_witness, ctx)
        witness[i] = [zero] * (i + 1) + digits
    cert = PBasisCertificate("generator-sequence", witness, used)
    if not cert.replay(G):
        raise AssertionError("generator certificate does not replay")
    return cert


def p_span_membership(v, G: PolyMatrix, degree_bound: int, cert: PBasisCertificate | None = None):
    """Digit coefficients (deg of the Z-solution <= bound) expressing v, or None."""
    ctx = G.ctx
    v = tuple(v)
    if cert is None:
        cert = is_p_generator_sequence(G)
        if cert is None:
            raise ValueError("rows are not a p-generator sequence")
    sol = span_solve(v, list(G.rows), ctx, degree_bound)
    if sol is None:
        return None
    digits = pushdown(sol, cert.witness, ctx)
    if combine(digits, G.rows, ctx) != v:
        raise AssertionError("pushdown changed the combination")
    return digits


# ----------------------------------------------------------------------------
# independence


def p_dimension(G: PolyMatrix) -> int:
    """Length of the row module after inverting every regular polynomial.

    Fraction-free elimination pivoting on an entry of least p-adic
    valuation; a pivot of valuation v contributes r - v.
    """
    ctx = G.ctx
    r, p = ctx.r, ctx.p
    M = [list(row) for row in G.rows]
    k, n = G.shape
    total = 0
    t = 0
    active_rows = list(range(k))
    active_cols = list(range(n))
    while active_rows and active_cols:
        best = None
        for i in active_rows:
            for j in active_cols:
                v = M[i][j].valuation()
                if v < r and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        v, pi, pj = best
        piv = M[pi][pj]
        g = Poly(tuple(x // p ** v for x in piv.coeffs), ctx)
        for i in active_rows:
            if i == pi or M[i][pj].is_zero():
                continue
            h = Poly(tuple(x // p ** v for x in M[i][pj].coeffs), ctx)
            M[i] = [g * a - h * b for a, b in zip(M[i], M[pi])]
        total += r - v
        active_rows.remove(pi)
        active_cols.remove(pj)
        t += 1
    return total


def is_p_independent(G: PolyMatrix) -> bool:
    """For a p-generator sequence: independent iff its length equals the row count."""
    if G.nrows == 0:
        return True
    if any(all(e.is_zero() for e in row) for row in G.rows):
        return False
    return p_dimension(G) == G.nrows


def constant_dependency(rows, p: int, r: int):
    """A nonzero digit vector a with sum a_j v_j = 0 in Z_{p^r}^n, or None.

    Every solution reduces mod p to the F_p null space of the transposed
    system, so only that space is enumerated.
    """
    k = len(rows)
    if k == 0:
        return None
    n = len(rows[0])
    mod = p ** r
    At = [[rows[j][c] for j in range(k)] for c in range(n)]
    basis = nullspace_mod_p(At, p) if n else [[1 if i == j else 0 for i in range(k)] for j in range(k)]
    if not basis:
        return None
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        if not any(coeffs):
            continue
        a = [sum(c * b[j] for c, b in zip(coeffs, basis)) % p for j in range(k)]
        if all(sum(a[j] * rows[j][c] for j in range(k)) % mod == 0 for c in range(n)):
            return a
    return None


def constant_p_independence(rows, p: int, r: int) -> bool:
    return constant_dependency(rows, p, r) is None


# ----------------------------------------------------------------------------
# reduction to a reduced p-basis


@dataclass
class ReductionResult:
    matrix: PolyMatrix
    log: TransformLog
    dropped: list = field(default_factory=list)  # original indices of rows that became zero


def reduce_to_reduced_p_basis(G: PolyMatrix):
    """Repeatedly cancel leading row coefficients until they are p-independent.

    Given a digit dependency a of the lrc rows, with delta the largest row
    degree carrying a nonzero digit, the row of largest index among those of
    degree delta is replaced by sum_j a_j D^(delta - deg_j) v_j.
    """
    ctx = G.ctx
    rows = [list(r) for r in G.rows]
    ids = list(range(G.nrows))
    log = TransformLog(G.nrows, ctx)
    dropped = []
    while True:
        keep = [i for i, r in enumerate(rows) if any(not e.is_zero() for e in r)]
        if len(keep) != len(rows):
            dropped.extend(ids[i] for i in range(len(rows)) if i not in keep)
            rows = [rows[i] for i in keep]
            ids = [ids[i] for i in keep]
        if not rows:
            break
        cur = PolyMatrix(rows, ctx)
        dep = constant_dependency(lrc(cur), ctx.p, ctx.r)
        if dep is None:
            break
        degs = cur.row_degrees()
        delta = max(degs[j] for j in range(len(rows)) if dep[j])
        t = max(j for j in range(len(rows)) if dep[j] and degs[j] == delta)
        new = [e.scale(dep[t]) for e in rows[t]]
        if dep[t] != 1:
            log.scale(ids[t], Poly.const(dep[t], ctx))
        for j in range(len(rows)):
            if j == t or not dep[j]:
                continue
            mult = Poly.monomial(dep[j], delta - degs[j], ctx)
            new = [a + mult * b for a, b in zip(new, rows[j])]
            log.add(ids[t], ids[j], mult)
        rows[t] = new
    return ReductionResult(PolyMatrix(rows, ctx) if rows else PolyMatrix([], ctx), log, dropped)


# ----------------------------------------------------------------------------
# noncatastrophicity of p-encoders


def _quotient_vectors(vecs, Q: Poly):
    """Coordinates of polynomial vectors in (Z_{p^r}[D]/(Q))^len as flat int lists."""
    m = Q.degree
    out = []
    for v in vecs:
        flat = []
        for e in v:
            rem = e % Q
            flat.extend(rem[i] for i in range(m))
        out.append(flat)
    return out


def _module_exponent(vecs, Q: Poly, ctx):
    """log_p of the size of the Z_{p^r}[D]/(Q)-span of the given vectors."""
    m = Q.degree
    gens = []
    for v in vecs:
        for t in range(m):
            gens.append([Poly.monomial(1, t, ctx) * e for e in v])
    if not gens:
        return 0
    return group_order_exponent(_quotient_vectors(gens, Q), ctx.p, ctx.r)


def canonical_lift(Pbar: Poly, ctx):
    """Monic lift with zero higher digits.

    Torsion at any monic Q with irreducible projection P is detected by this
    single lift: the P-primary torsion has a nonzero element killed by p and
    by P, hence by every lift of P.
    """
    return Pbar.change_ring(ctx)


def level_matrices(G: PolyMatrix):
    """Rows grouped by p-adic valuation, divided by p^v and projected mod p."""
    ctx = G.ctx
    levels = {}
    for row in G.rows:
        v = min(e.valuation() for e in row)
        if v >= ctx.r:
            continue
        w = [Poly(tuple(x // ctx.p ** v for x in e.coeffs), ctx).project() for e in row]
        levels.setdefault(v, []).append(w)
    return {v: PolyMatrix(rows, ctx.residue_field()) for v, rows in sorted(levels.items())}


def _rank_profile_gcd(W: PolyMatrix):
    """gcd over the full-rank row subsets of largest size (rank-deficient levels)."""
    k = W.nrows
    for size in range(min(k, W.ncols), 0, -1):
        found = []
        for subset in itertools.combinations(range(k), size):
            sub = PolyMatrix([W.rows[i] for i in subset], W.ctx)
            found.extend(m for m in sub.minors().values() if not m.is_zero())
        if found:
            return gcd_monic(found)
    return Poly.one(W.ctx)


SCAN_DEGREE = 2


def catastrophe_candidates(G: PolyMatrix, extra=(), scan_degree: int = SCAN_DEGREE):
    """Monic irreducible non-D polynomials over F_p to test for torsion.

    Irreducible factors of each valuation level's minor gcd, any extra
    polynomials supplied by the caller, and every irreducible of degree
    <= scan_degree.
    """
    from .poly import is_irreducible, monic_polys

    fp = G.ctx.residue_field()
    Dp = Poly.D(fp)
    cands = []

    def push(f):
        if f != Dp and f not in cands:
            cands.append(f)

    sources = []
    for W in level_matrices(G).values():
        if W.nrows <= W.ncols and any(not m.is_zero() for m in W.minors().values()):
            sources.append(gcd_monic([m for m in W.minors().values() if not m.is_zero()]))
        else:
            sources.append(_rank_profile_gcd(W))
    sources.extend(e.project() if e.ctx != fp else e for e in extra)
    for g in sources:
        if g.degree >= 1:
            for f, _ in factor_fp(g).factors:
                push(f)
    for d in range(1, scan_degree + 1):
        for f in monic_polys(d, fp):
            if is_irreducible(f):
                push(f)
    return cands


def _relation_rows(G: PolyMatrix, cert: PBasisCertificate):
    ctx = G.ctx
    k = G.nrows
    rel = []
    for i in range(k):
        row = [Poly.zero(ctx)] * k
        row[i] = Poly.const(ctx.p, ctx)
        for j in range(i + 1, k):
            row[j] = -cert.witness[i][j]
        rel.append(row)
    return rel


def p_encoder_torsion(G: PolyMatrix, cert: PBasisCertificate, Q: Poly) -> bool:
    """Whether the cokernel of the Laurent-polynomial row module has Q-torsion.

    N/QN has size p^(rmk) / |relations mod Q|; torsion exists iff its map
    into (Z_{p^r}[D]/(Q))^n is not injective.
    """
    ctx = G.ctx
    free = ctx.r * Q.degree * G.nrows
    return free - _module_exponent(_relation_rows(G, cert), Q, ctx) != _module_exponent(G.rows, Q, ctx)


@dataclass
class TorsionWitness:
    """x G = Q v with v a finite codeword that is not a Laurent-polynomial
    combination of the rows; the digit input for v has infinite weight."""

    Q: Poly
    x: list
    codeword: tuple

    def input_rationals(self):
        from .laurent import RationalFn

        return [RationalFn(xi, self.Q) for xi in self.x]


def torsion_witness(G: PolyMatrix, cert: PBasisCertificate, Q: Poly):
    """A TorsionWitness at Q, or None."""
    from .linalg import left_kernel_mod

    ctx = G.ctx
    m = Q.degree
    k = G.nrows
    A = []
    for i in range(k):
        for t in range(m):
            A.append(_quotient_vectors([[Poly.monomial(1, t, ctx) * e for e in G.rows[i]]], Q)[0])
    kernel = left_kernel_mod(A, ctx.p, ctx.r)
    rel = []
    for row in _relation_rows(G, cert):
        for t in range(m):
            rel.append(_quotient_vectors([[Poly.monomial(1, t, ctx) * e for e in row]], Q)[0])
    relT = [list(c) for c in zip(*rel)]
    for x in kernel:
        if solve_mod(relT, x, ctx.p, ctx.r) is not None:
            continue
        xs = [Poly(tuple(x[i * m:(i + 1) * m]), ctx) for i in range(k)]
        prod = combine(xs, G.rows, ctx)
        v = []
        for e in prod:
            q, rem = e.divmod(Q)
            if not rem.is_zero():
                raise AssertionError("kernel element does not clear Q")
            v.append(q)
        return TorsionWitness(Q, xs, tuple(v))
    return None


def find_catastrophe(G: PolyMatrix, cert: PBasisCertificate | None = None, extra=()):
    """First TorsionWitness over the candidate set, or None."""
    if cert is None:
        cert = is_p_generator_sequence(G)
        if cert is None:
            raise ValueError("rows are not a p-generator sequence")
    for Pbar in catastrophe_candidates(G, extra):
        Q = canonical_lift(Pbar, G.ctx)
        if p_encoder_torsion(G, cert, Q):
            w = torsion_witness(G, cert, Q)
            if w is None:
                raise AssertionError("size test found torsion but no kernel element escaped")
            return w
    return None


def is_noncatastrophic_p_encoder(G: PolyMatrix, cert: PBasisCertificate | None = None, extra=()):
    """No finite codeword needs an infinite-weight digit input.

    For a p-basis the digit representation of a codeword is unique, so the
    encoder is catastrophic iff some finite codeword lies outside the
    Laurent-polynomial row module, i.e. the cokernel has torsion.
    """
    return find_catastrophe(G, cert, extra) is None


def digit_stream(G: PolyMatrix, cert: PBasisCertificate, inputs, horizon: int):
    """Expand Z_{p^r}-rational inputs and rewrite them as digit series.

    Carries p*c_i are pushed onto later rows through the generator
    certificate, window by window.  Returns (digit_windows, output_windows),
    where the outputs are computed from the digit windows alone.
    """
    from .laurent import LaurentWindow, rational_expand, window_add, window_mul_poly

    ctx = G.ctx
    p = ctx.p
    k = G.nrows
    start = min(0, min(f.leading_exponent() for f in inputs))
    wins = [rational_expand(f, horizon, start) for f in inputs]
    digits = []
    for i in range(k):
        w = wins[i]
        digits.append(LaurentWindow(start, tuple(c % p for c in w.coeffs), ctx.modulus))
        carry = LaurentWindow(start, tuple(c // p for c in w.coeffs), ctx.modulus)
        for j in range(i + 1, k):
            if not cert.witness[i][j].is_zero():
                wins[j] = window_add(wins[j], window_mul_poly(carry, cert.witness[i][j]))
    outs = []
    for c in range(G.ncols):
        acc = LaurentWindow(start, (0,) * horizon, ctx.modulus)
        for i in range(k):
            acc = window_add(acc, window_mul_poly(digits[i], G[i, c]))
        outs.append(acc)
    return digits, outs


# ----------------------------------------------------------------------------
# validation


@dataclass
class EncoderValidation:
    is_p_encoder: bool
    delay_free: bool
    reduced: bool
    noncatastrophic: bool
    spans_code: bool | None = None
    certificate: PBasisCertificate | None = None
    catastrophe: "TorsionWitness | None" = None

    @property
    def minimal(self) -> bool:
        ok = self.is_p_encoder and self.delay_free and self.reduced and self.noncatastrophic
        return ok and self.spans_code is not False

    def to_json(self):
        return {
            "is_p_encoder": self.is_p_encoder,
            "delay_free": self.delay_free,
            "reduced": self.reduced,
            "noncatastrophic": self.noncatastrophic,
            "spans_code": self.spans_code,
            "minimal": self.minimal,
        }


def spans_equal(G: PolyMatrix, H: PolyMatrix, bound: int | None = None):
    """Bidirectional Laurent-span membership certificates, or None."""
    ctx = G.ctx
    if bound is None:
        bound = max(default_bound(G), default_bound(H))
    fw, bw = [], []
    for v in G.rows:
        c, _ = _escalate(lambda b: rational_span_solve(v, list(H.rows), ctx, b), bound)
        if c is None:
            return None
        fw.append(c)
    for v in H.rows:
        c, _ = _escalate(lambda b: rational_span_solve(v, list(G.rows), ctx, b), bound)
        if c is None:
            return None
        bw.append(c)
    return fw, bw


def validate_p_encoder(G: PolyMatrix, code: PolyMatrix | None = None) -> EncoderValidation:
    """Flags for p-encoder, delay-free, reduced and noncatastrophic.

    `code` is any generator matrix of the code; when given, span equality
    is certified in both directions.
    """
    ctx = G.ctx
    if G.nrows == 0 or any(all(e.is_zero() for e in r) for r in G.rows):
        return EncoderValidation(False, False, False, False)
    try:
        cert = is_p_generator_sequence(G)
    except Inconclusive:
        cert = None
    indep = cert is not None and is_p_independent(G)
    if cert is not None:
        cert.kind = "p-basis" if indep else "generator-sequence"
    delay_free = constant_p_independence(G.constant_term(), ctx.p, ctx.r)
    reduced = constant_p_independence(lrc(G), ctx.p, ctx.r)
    if cert is not None and indep and reduced:
        cert.kind = "reduced-p-basis"
        cert.lrc_independence = True
    witness = find_catastrophe(G, cert) if (cert is not None and indep) else None
    nc = cert is not None and indep and witness is None
    spans = None
    if code is not None:
        spans = spans_equal(G, code) is not None
    return EncoderValidation(bool(cert is not None and indep), delay_free, reduced, nc, spans, cert, witness)
