"""Encoders over Z_{p^r}: catastrophicity through the mod-p projection,
row-divisibility at level p^i, the per-level ladder G_0..G_{r-1}, internal
degree reduction and minimal p-encoder synthesis."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    DirectSumViolation,
    Inconclusive,
    InternalCheckFailed,
    RankDeficientProjection,
)
from .field_encoder import catastrophic_witness
from .laurent import RationalFn
from .linalg import nullspace_mod_p, solve_mod
from .matrix import PolyMatrix, RatMatrix, TransformLog, apply_left, delta_p, intdeg, lrc
from .poly import Poly, exact_quotient, factor_fp, poly_divmod
from .pstructure import (
    EncoderValidation,
    TorsionWitness,
    constant_p_independence,
    default_bound,
    find_catastrophe,
    is_p_generator_sequence,
    is_p_independent,
    reduce_to_reduced_p_basis,
    span_solve,
    spans_equal,
    validate_p_encoder,
)

MAX_LIFTS = 256


def is_catastrophic_ring(G: PolyMatrix) -> bool:
    """Catastrophic iff Delta_p(G) is not a power of D."""
    return not delta_p(G).is_power_of_D()


# ----------------------------------------------------------------------------
# one factor at a time, modulo p^s


def monic_lifts_dividing(Pbar: Poly, polys, sctx):
    """Monic Q over Z_{p^s} with projection Pbar dividing every poly.

    Built digit by digit: a lift valid mod p^(t+1) restricts to one valid
    mod p^t.  A factor D only ever lifts to D itself, the one monic lift
    that stays invertible in Laurent series.
    """
    polys = [f.change_ring(sctx) for f in polys]
    if Pbar.degree == 1 and Pbar[0] == 0:
        Q = Poly.D(sctx)
        return [Q] if all(f.is_zero() or f[0] == 0 for f in polys) else []
    m = Pbar.degree
    p = sctx.p
    cands = [Pbar]
    for t in range(1, sctx.r):
        tctx = sctx.truncated(t + 1)
        sub = [f.change_ring(tctx) for f in polys]
        nxt = []
        for Q in cands:
            base = Q.change_ring(tctx)
            for digs in itertools.product(range(p), repeat=m):
                Q2 = base + Poly(tuple(p ** t * d for d in digs), tctx)
                if all(poly_divmod(f, Q2)[1].is_zero() for f in sub):
                    nxt.append(Q2)
                    if len(nxt) >= MAX_LIFTS:
                        break
            if len(nxt) >= MAX_LIFTS:
                break
        cands = nxt
        if not cands:
            return []
    return [Q.change_ring(sctx) for Q in cands]


def _residues(f: Poly, Q: Poly):
    r = poly_divmod(f, Q)[1]
    return [r[i] for i in range(Q.degree)]


def row_zeroing_transvection(rows, Q: Poly, sctx):
    """(j, y) with row_j + sum_{i != j} y_i row_i = 0 mod Q, or None.

    Solved as a linear system over Z_{p^s}[D]/(Q) with y_j = 1; the target
    row is tried from the last to the first.
    """
    k = len(rows)
    n = len(rows[0])
    m = Q.degree
    for j in range(k - 1, -1, -1):
        others = [i for i in range(k) if i != j]
        cols = []
        for i in others:
            for t in range(m):
                col = []
                for c in range(n):
                    col.extend(_residues(Poly.monomial(1, t, sctx) * rows[i][c], Q))
                cols.append(col)
        b = []
        for c in range(n):
            b.extend(-x for x in _residues(rows[j][c], Q))
        if not cols:
            if all(x % sctx.modulus == 0 for x in b):
                return j, {}
            continue
        A = [list(r) for r in zip(*cols)]
        x = solve_mod(A, b, sctx.p, sctx.r)
        if x is None:
            continue
        ys = {}
        for pos, i in enumerate(others):
            y = Poly(tuple(x[pos * m:(pos + 1) * m]), sctx)
            if not y.is_zero():
                ys[i] = y
        return j, ys
    return None


def remove_lifted_factor(rows, Pbar: Poly, sctx, log: TransformLog):
    """Divide one row by a monic lift of Pbar after row additions.

    Returns (j, Q) or None when no lift dividing every maximal minor admits
    a zeroing transvection.
    """
    minors = [m for m in PolyMatrix(rows, sctx).minors().values() if not m.is_zero()]
    for Q in monic_lifts_dividing(Pbar, minors, sctx):
        found = row_zeroing_transvection(rows, Q, sctx)
        if found is None:
            continue
        j, ys = found
        target = list(rows[j])
        for i, y in ys.items():
            target = [a + y * b for a, b in zip(target, rows[i])]
        divided = [exact_quotient(e, Q) for e in target]
        if any(d is None for d in divided):
            raise InternalCheckFailed(f"row {j} not divisible by {Q} after zeroing mod {Q}")
        for i, y in ys.items():
            log.add(j, i, y)
        log.scale(j, RationalFn(Poly.one(sctx), Q))
        rows[j] = divided
        return j, Q
    return None


def _factor_list(d: Poly, include_D: bool):
    out = []
    for f, mult in factor_fp(d).factors:
        if f.is_power_of_D() and not include_D:
            continue
        out.extend([f] * mult)
    return out


def _lift_rows(rows, ctx):
    return PolyMatrix([[e.change_ring(ctx) for e in r] for r in rows], ctx)


# ----------------------------------------------------------------------------
# concentration at the smallest workable level


@dataclass
class RingConcentration:
    M: RatMatrix  # over Z_{p^(r-i0)}; det M is 1
    i0: int
    H: PolyMatrix  # noncatastrophic, lifted with zero high digits
    row_index: int
    divisors: list  # monic lifts removed, in order
    log: TransformLog
    certificates: dict = field(default_factory=dict)  # level -> (forward, backward)


def concentrate_delta_ring(G: PolyMatrix, certify: bool = True) -> RingConcentration:
    """Smallest i0 such that working mod p^(r-i0) every irreducible factor of
    Delta_p(G), D included, can be divided out of rows after row additions.

    p^i0 M G then has row `row_index` divisible by the product of the lifts,
    and H (after the divisions) satisfies span[p^i H] = span[p^i G] for
    every i >= i0.
    """
    ctx = G.ctx
    d = delta_p(G)
    factors = _factor_list(d, include_D=True)
    for i0 in range(ctx.r):
        sctx = ctx.truncated(ctx.r - i0)
        rows = [[e.change_ring(sctx) for e in r] for r in G.rows]
        log = TransformLog(G.nrows, sctx)
        removed = []
        j = G.nrows - 1
        ok = True
        for P in factors:
            step = remove_lifted_factor(rows, P, sctx, log)
            if step is None:
                ok = False
                break
            j, Q = step
            removed.append(Q)
        if not ok:
            continue
        prodQ = Poly.one(sctx)
        for Q in removed:
            prodQ = prodQ * Q
        if removed:
            log.scale(j, RationalFn.from_poly(prodQ))
        M = log.matrix()
        Hs = PolyMatrix(rows, sctx)
        MG = apply_left(M, G.change_ring(sctx))
        if MG != Hs.with_row(j, [e * prodQ for e in Hs.rows[j]]):
            raise InternalCheckFailed("p^i0 M G does not match the divided matrix")
        H = _lift_rows(rows, ctx)
        if not delta_p(H).is_power_of_D():
            raise InternalCheckFailed("H is still catastrophic")
        res = RingConcentration(M, i0, H, j, removed, log)
        if certify:
            for i in range(i0, ctx.r):
                cert = spans_equal(H.scale(ctx.p ** i), G.scale(ctx.p ** i))
                if cert is None:
                    raise InternalCheckFailed(f"span equality failed at level {i}")
                res.certificates[i] = cert
        return res
    raise InternalCheckFailed("no level admits the concentration")


# ----------------------------------------------------------------------------
# internal degree reduction and the level ladder


def _strip_level(G: PolyMatrix, s: int, log: TransformLog):
    """Greedily divide out non-D irreducible common divisors of the maximal
    minors mod p^s; returns rows over Z_{p^s}."""
    ctx = G.ctx
    sctx = ctx.truncated(s)
    rows = [[e.change_ring(sctx) for e in r] for r in G.rows]
    if G.nrows > G.ncols:
        raise RankDeficientProjection("more rows than columns")
    progress = True
    while progress:
        progress = False
        minors = [m for m in PolyMatrix(rows, sctx).minors().values() if not m.is_zero()]
        if not minors:
            break
        projected = [m.project() for m in minors if not m.project().is_zero()]
        if not projected:
            break
        from .poly import gcd_monic

        g = gcd_monic(projected)
        for P in _factor_list(g, include_D=False):
            if remove_lifted_factor(rows, P, sctx, log) is not None:
                progress = True
                break
    return rows


def ridm_reduce(G: PolyMatrix):
    """(G', log): divide out every non-D irreducible common divisor of the
    maximal minors over Z_{p^r}; internal degree never increases."""
    delta_p(G)  # full projected rank
    log = TransformLog(G.nrows, G.ctx)
    rows = _strip_level(G, G.ctx.r, log)
    return PolyMatrix(rows, G.ctx), log


@dataclass
class GiLadder:
    matrices: list  # G_0 .. G_{r-1}, lifted to Z_{p^r} with zero high digits
    logs: list
    certificates: dict = field(default_factory=dict)  # level -> (forward, backward)

    def level(self, i: int) -> PolyMatrix:
        return self.matrices[i]


def build_gi_ladder(G: PolyMatrix, certify: bool = True) -> GiLadder:
    """G_i with span[p^i G_i] = span[p^i G], level i worked mod p^(r-i).

    G_0 is G with common non-D minor divisors removed; G_i starts from
    G_{i-1} and removes whatever further divisors appear mod p^(r-i).
    """
    ctx = G.ctx
    delta_p(G)
    mats, logs = [], []
    cur = G
    for i in range(ctx.r):
        log = TransformLog(G.nrows, ctx.truncated(ctx.r - i))
        rows = _strip_level(cur, ctx.r - i, log)
        cur = _lift_rows(rows, ctx)
        mats.append(cur)
        logs.append(log)
    ladder = GiLadder(mats, logs)
    if certify:
        for i, Gi in enumerate(mats):
            cert = spans_equal(Gi.scale(ctx.p ** i), G.scale(ctx.p ** i))
            if cert is None:
                raise InternalCheckFailed(f"ladder span equality failed at level {i}")
            ladder.certificates[i] = cert
    return ladder


# ----------------------------------------------------------------------------
# codes and p-encoder synthesis


@dataclass
class CodeSpec:
    """A code given by one free encoder or by free components G_0..G_{r-1}
    of a direct sum C_0 + p C_1 + ... (None marks an empty component)."""

    ctx: object
    n: int
    free: PolyMatrix | None = None
    components: list | None = None

    @classmethod
    def from_matrix(cls, G: PolyMatrix):
        return cls(G.ctx, G.ncols, free=G)

    @classmethod
    def from_components(cls, comps, ctx):
        comps = list(comps) + [None] * (ctx.r - len(comps))
        n = next(c.ncols for c in comps if c is not None)
        return cls(ctx, n, components=comps)

    @property
    def is_decomposed(self) -> bool:
        return self.components is not None

    @property
    def is_free(self) -> bool:
        if not self.is_decomposed:
            return True
        return all(c is None for c in self.components[1:])

    def free_encoder(self) -> PolyMatrix:
        if not self.is_decomposed:
            return self.free
        if not self.is_free:
            raise ValueError("code is not free")
        return self.components[0]

    def generator(self) -> PolyMatrix:
        """G_0 stacked over p G_1, p^2 G_2, ... (or the free encoder)."""
        if not self.is_decomposed:
            return self.free
        rows = []
        for i, c in enumerate(self.components):
            if c is not None:
                rows.extend(c.scale(self.ctx.p ** i).rows)
        return PolyMatrix(rows, self.ctx)

    def cumulative(self, i: int):
        """G^i = (G_0; ...; G_i) over the nonempty components."""
        rows = []
        for c in self.components[: i + 1]:
            if c is not None:
                rows.extend(c.rows)
        return PolyMatrix(rows, self.ctx) if rows else None

    def check_direct_sum(self):
        if not self.is_decomposed:
            delta_p(self.free)
            return
        for i, c in enumerate(self.components):
            if c is None:
                continue
            try:
                delta_p(c)
            except RankDeficientProjection as exc:
                raise DirectSumViolation(f"component {i} is not of full projected rank") from exc
        try:
            delta_p(self.cumulative(len(self.components) - 1))
        except RankDeficientProjection as exc:
            raise DirectSumViolation("stacked projections are not jointly of full rank") from exc


def delta_p_code(code: CodeSpec) -> Poly:
    """Delta_p of the internal-degree-reduced free encoder."""
    G = code.free_encoder()
    return delta_p(ridm_reduce(G)[0])


def _order(row, ctx) -> int:
    return ctx.r - min(e.valuation() for e in row)


def stack_p_multiples(rows, ctx):
    """(W; pW; ...; p^(r-1) W) without zero rows: always a p-generator sequence."""
    out = []
    for i in range(ctx.r):
        for r in rows:
            s = [e.scale(ctx.p ** i) for e in r]
            if any(not e.is_zero() for e in s):
                out.append(s)
    return out


def prune_generator_sequence(rows, ctx, bound: int):
    """Drop, from the back, rows in the span of the rows kept after them.

    The kept tail always spans what the original tail spanned, so every
    kept row still has p times itself in the span of its successors.
    """
    kept = []
    for r in reversed(rows):
        if kept and span_solve(tuple(r), kept, ctx, bound) is not None:
            continue
        kept.insert(0, list(r))
    return kept


def order_as_generator_sequence(rows, ctx, bound: int | None = None):
    """Order rows so that p times each lies in the span of the rows after it.

    Built from the back: any row whose p-multiple is spanned by the tail
    chosen so far may go next.  The tail span only grows, so the greedy
    choice finds an order whenever one exists.  Returns None otherwise.
    """
    rows = [list(r) for r in rows]
    if bound is None:
        bound = max(default_bound(PolyMatrix(rows, ctx)), 1) + 1
    left = list(range(len(rows)))
    tail = []
    while left:
        for i in sorted(left, key=lambda i: (_order(rows[i], ctx), -i)):
            pv = tuple(e.scale(ctx.p) for e in rows[i])
            if all(e.is_zero() for e in pv) or (tail and span_solve(pv, [rows[j] for j in tail], ctx, bound) is not None):
                tail.insert(0, i)
                left.remove(i)
                break
        else:
            return None
    out = [rows[i] for i in tail]
    return out if _is_generator(out, ctx) else None


def _is_generator(rows, ctx) -> bool:
    try:
        return is_p_generator_sequence(PolyMatrix(rows, ctx)) is not None
    except Inconclusive:
        return False


def _digit_dependencies(rows, p, r, limit=64):
    """Digit vectors a != 0 with sum a_j rows_j = 0 (at most `limit`)."""
    k = len(rows)
    n = len(rows[0]) if rows else 0
    mod = p ** r
    At = [[rows[j][c] for j in range(k)] for c in range(n)]
    basis = nullspace_mod_p(At, p)
    found = []
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        if not any(coeffs):
            continue
        a = [sum(c * b[j] for c, b in zip(coeffs, basis)) % p for j in range(k)]
        if all(sum(a[j] * rows[j][c] for j in range(k)) % mod == 0 for c in range(n)):
            found.append(a)
            if len(found) >= limit:
                break
    return found


def _lrc_steps(rows, ctx):
    """Candidate rows lists after one leading-coefficient cancellation."""
    cur = PolyMatrix(rows, ctx)
    degs = cur.row_degrees()
    for dep in _digit_dependencies(lrc(cur), ctx.p, ctx.r):
        delta = max(degs[j] for j in range(len(rows)) if dep[j])
        for t in reversed([j for j in range(len(rows)) if dep[j] and degs[j] == delta]):
            new = [e.scale(dep[t]) for e in rows[t]]
            for j in range(len(rows)):
                if j != t and dep[j]:
                    mult = Poly.monomial(dep[j], delta - degs[j], ctx)
                    new = [x + mult * y for x, y in zip(new, rows[j])]
            yield [new if j == t else rows[j] for j in range(len(rows))]


def _constant_steps(rows, ctx):
    """Candidate rows lists after cancelling a constant-term dependency and
    dividing the result by D (a unit for Laurent inputs)."""
    cur = PolyMatrix(rows, ctx)
    degs = cur.row_degrees()
    for dep in _digit_dependencies(cur.constant_term(), ctx.p, ctx.r):
        delta = max(degs[j] for j in range(len(rows)) if dep[j])
        for t in reversed([j for j in range(len(rows)) if dep[j] and degs[j] == delta]):
            new = [e.scale(dep[t]) for e in rows[t]]
            for j in range(len(rows)):
                if j != t and dep[j]:
                    new = [x + y.scale(dep[j]) for x, y in zip(new, rows[j])]
            if any(e[0] for e in new):
                continue
            new = [e.shift(-1) for e in new]
            yield [new if j == t else rows[j] for j in range(len(rows))]


def reduce_checked(rows, ctx, max_steps: int = 256):
    """Cancel leading (then constant) row coefficients one step at a time,
    keeping only steps after which the rows can still be ordered as a
    p-generator sequence.  Returns (rows, lrc_independent)."""
    rows = [list(r) for r in rows]
    for _ in range(max_steps):
        moved = False
        for steps in (_lrc_steps, _constant_steps):
            for cand in steps(rows, ctx):
                cand = [r for r in cand if any(not e.is_zero() for e in r)]
                arr = order_as_generator_sequence(cand, ctx)
                if arr is not None:
                    rows = arr
                    moved = True
                    break
            if moved:
                break
        if not moved:
            break
    return rows, not _digit_dependencies(lrc(PolyMatrix(rows, ctx)), ctx.p, ctx.r, limit=1)


def polish_p_encoder(G: PolyMatrix) -> PolyMatrix:
    """Make a p-basis delay-free and reduced where the checked steps allow;
    G comes back unchanged when it already is."""
    rows, _ = reduce_checked(G.rows, G.ctx)
    return PolyMatrix(rows, G.ctx) if _is_generator(rows, G.ctx) else G


def p_basis_from_generators(rows, ctx, bound: int | None = None):
    """A p-basis of the module generated by `rows`, reduced when the checked
    reduction gets there."""
    rows = [list(r) for r in rows if any(not e.is_zero() for e in r)]
    if bound is None:
        bound = max(default_bound(PolyMatrix(rows, ctx)), 1) + 1
    seq = prune_generator_sequence(stack_p_multiples(rows, ctx), ctx, bound)
    red, _ = reduce_checked(seq, ctx)
    arr = red if _is_generator(red, ctx) else order_as_generator_sequence(red, ctx)
    if arr is not None:
        return PolyMatrix(arr, ctx)
    raise InternalCheckFailed("could not order the reduced rows as a p-generator sequence")


@dataclass
class Synthesis:
    encoder: PolyMatrix
    construction: PolyMatrix  # stacked ladder after row reduction
    construction_catastrophe: TorsionWitness | None
    repairs: list
    validation: EncoderValidation
    reduction_log: TransformLog | None = None
    construction_is_p_basis: bool = True


def saturate_p_encoder(G: PolyMatrix, extra=(), max_rounds: int = 16):
    """Add finite codewords that only infinite digit inputs reach until the
    row module is closed under them; returns (encoder, witnesses used)."""
    used = []
    for _ in range(max_rounds):
        cert = is_p_generator_sequence(G)
        if cert is None:
            raise InternalCheckFailed("encoder lost the p-generator property")
        w = find_catastrophe(G, cert, extra)
        if w is None:
            return G, used
        used.append(w)
        G = p_basis_from_generators([list(w.codeword)] + [list(r) for r in G.rows], G.ctx)
    raise InternalCheckFailed("saturation did not converge")


def _finish(stacked: PolyMatrix, code_gen: PolyMatrix, extra) -> Synthesis:
    ctx = stacked.ctx
    red = reduce_to_reduced_p_basis(stacked)
    construction = red.matrix
    try:
        cert = is_p_generator_sequence(construction)
    except Inconclusive:
        cert = None
    is_basis = cert is not None and is_p_independent(construction)
    basis = construction if is_basis else p_basis_from_generators(stacked.rows, ctx)
    witness = find_catastrophe(basis, cert if is_basis else None, extra)
    encoder, repairs = (basis, [])
    if witness is not None:
        encoder, repairs = saturate_p_encoder(basis, extra)
    encoder = polish_p_encoder(encoder)
    validation = validate_p_encoder(encoder, code_gen)
    return Synthesis(encoder, construction, witness, repairs, validation, red.log, is_basis)


def synthesize_free(code) -> Synthesis:
    """Stack G_0, p G_1, ..., p^(r-1) G_(r-1) from the ladder, row-reduce,
    then saturate if some finite codeword still needs an infinite input."""
    if isinstance(code, PolyMatrix):
        code = CodeSpec.from_matrix(code)
    G = code.free_encoder()
    ctx = G.ctx
    G0, _ = ridm_reduce(G)
    ladder = build_gi_ladder(G0, certify=False)
    rows = []
    for i, Gi in enumerate(ladder.matrices):
        rows.extend(Gi.scale(ctx.p ** i).rows)
    stacked = PolyMatrix([r for r in rows if any(not e.is_zero() for e in r)], ctx)
    return _finish(stacked, G, [delta_p(G)])


def minimal_p_encoder_free(code) -> PolyMatrix:
    return synthesize_free(code).encoder


def synthesize_general(code: CodeSpec) -> Synthesis:
    """Stack p^i H^i, H^i the level-i ladder matrix of G^i = (G_0; ...; G_i)."""
    if not code.is_decomposed:
        return synthesize_free(code)
    code.check_direct_sum()
    ctx = code.ctx
    rows = []
    extra = []
    for i in range(ctx.r):
        Gi = code.cumulative(i)
        if Gi is None:
            continue
        extra.append(delta_p(Gi))
        Hi = build_gi_ladder(Gi, certify=False).matrices[i]
        rows.extend(Hi.scale(ctx.p ** i).rows)
    stacked = PolyMatrix([r for r in rows if any(not e.is_zero() for e in r)], ctx)
    return _finish(stacked, code.generator(), extra)


def minimal_p_encoder_general(code: CodeSpec) -> PolyMatrix:
    return synthesize_general(code).encoder


# ----------------------------------------------------------------------------
# witnesses and stream evidence


def ring_catastrophic_witness(G: PolyMatrix, factor: Poly | None = None):
    """(u, y) over Z_{p^r}: p^(r-1) times a lifted witness of the projection.

    Multiplying by p^(r-1) makes u G depend on the input only mod p, so the
    field-level witness carries over unchanged.
    """
    ctx = G.ctx
    found = catastrophic_witness(G.project(), factor)
    if found is None:
        return None
    ubar, ybar = found
    scale = ctx.p ** (ctx.r - 1)
    u = [RationalFn(f.num.change_ring(ctx).scale(scale), f.den.change_ring(ctx)) for f in ubar]
    y = tuple(e.change_ring(ctx).scale(scale) for e in ybar)
    return u, y


@dataclass
class StreamEvidence:
    horizons: tuple
    input_weights: tuple
    output_weights: tuple

    @property
    def output_stable(self) -> bool:
        return len(set(self.output_weights)) == 1

    @property
    def input_growth(self) -> int:
        return self.input_weights[-1] - self.input_weights[0]


def stream_evidence(G: PolyMatrix, inputs, horizons=(64, 128)) -> StreamEvidence:
    """Weights of truncated input and output streams at two horizons."""
    from .laurent import encode_stream, window_weight

    iw, ow = [], []
    for h in horizons:
        ins, outs = encode_stream(inputs, G, h)
        iw.append(sum(window_weight(w) for w in ins))
        ow.append(sum(window_weight(w) for w in outs))
    return StreamEvidence(tuple(horizons), tuple(iw), tuple(ow))


def digit_stream_evidence(G: PolyMatrix, witness: TorsionWitness, horizons=(64, 128)) -> StreamEvidence:
    """Same measurement for a p-encoder fed the digit form of a witness."""
    from .laurent import window_weight
    from .pstructure import digit_stream

    cert = is_p_generator_sequence(G)
    iw, ow = [], []
    for h in horizons:
        ins, outs = digit_stream(G, cert, witness.input_rationals(), h)
        iw.append(sum(window_weight(w) for w in ins))
        ow.append(sum(window_weight(w) for w in outs))
    return StreamEvidence(tuple(horizons), tuple(iw), tuple(ow))


def witness_absence_smoke(G: PolyMatrix, trials: int = 200, length: int = 64, min_weight: int = 32, seed: int = 0):
    """Random digit inputs of the given length and weight; returns the list
    of (input_weight, output_weight) pairs violating
    output >= input / (2 d + 2), d the largest row degree."""
    import random

    ctx = G.ctx
    rng = random.Random(seed)
    d = max(max(G.row_degrees(), default=0), 1)
    failures = []
    for _ in range(trials):
        while True:
            u = [Poly(tuple(rng.randrange(ctx.p) for _ in range(length)), ctx) for _ in range(G.nrows)]
            w = sum(sum(1 for c in f.coeffs if c) for f in u)
            if w >= min_weight:
                break
        out = [Poly.zero(ctx)] * G.ncols
        for f, row in zip(u, G.rows):
            out = [o + f * e for o, e in zip(out, row)]
        ow = sum(sum(1 for c in e.coeffs if c) for e in out)
        if ow * (2 * d + 2) < w:
            failures.append((w, ow))
    return failures


# ----------------------------------------------------------------------------
# end-to-end analysis


@dataclass
class AnalysisReport:
    ring: tuple
    is_free: bool
    delta_p: Poly | None  # of the encoder as given
    delta_p_code: Poly | None  # of its internal-degree-reduced form
    is_catastrophic: bool  # the encoder as given
    code_catastrophic: bool  # no free noncatastrophic encoder exists
    ridm_intdeg: int | None
    minimal_p_encoder: PolyMatrix | None = None
    construction: PolyMatrix | None = None
    construction_catastrophe: TorsionWitness | None = None
    repairs: list = field(default_factory=list)
    validation: EncoderValidation | None = None
    witness: tuple | None = None
    logs: dict = field(default_factory=dict)


def analyze(code, synthesize: bool = True, witness: bool = False) -> AnalysisReport:
    if isinstance(code, PolyMatrix):
        code = CodeSpec.from_matrix(code)
    ctx = code.ctx
    if code.is_free:
        G = code.free_encoder()
        dg = delta_p(G)
        G0, log = ridm_reduce(G)
        dc = delta_p(G0)
        rep = AnalysisReport((ctx.p, ctx.r), True, dg, dc, not dg.is_power_of_D(), not dc.is_power_of_D(),
                             intdeg(G0) if G0.nrows <= G0.ncols else None)
        rep.logs["ridm"] = log
        if witness and rep.is_catastrophic:
            rep.witness = ring_catastrophic_witness(G)
        syn = synthesize_free(code) if synthesize else None
    else:
        code.check_direct_sum()
        rep = AnalysisReport((ctx.p, ctx.r), False, None, None, True, True, None)
        syn = synthesize_general(code) if synthesize else None
    if syn is not None:
        rep.minimal_p_encoder = syn.encoder
        rep.construction = syn.construction
        rep.construction_catastrophe = syn.construction_catastrophe
        rep.repairs = syn.repairs
        rep.validation = syn.validation
        rep.logs["reduction"] = syn.reduction_log
    return rep
