import itertools

import pytest

import oracles
from helpers import rand_matrix, rand_unimodular, seeded
from ringconv.errors import CoefficientOutOfA, Inconclusive
from ringconv.matrix import PolyMatrix, lrc
from ringconv.poly import Poly
from ringconv.pstructure import (
    combine,
    constant_dependency,
    constant_p_independence,
    find_catastrophe,
    is_p_generator_sequence,
    is_p_independent,
    p_dimension,
    p_linear_combination,
    p_span_membership,
    reduce_to_reduced_p_basis,
    spans_equal,
    validate_p_encoder,
)
from ringconv.ring import RingCtx
from ringconv.ring_encoder import prune_generator_sequence, stack_p_multiples

Z2, Z4, Z9, Z16 = RingCtx(2, 1), RingCtx(2, 2), RingCtx(3, 2), RingCtx(2, 4)

# G' for the Z_16 free example: rows of G, 2G, 4G_2, 8G_3.
Z16_GPRIME = [
    ["1+2D^2", "1+D", "1+D", "1+D^2"],
    ["D", "1+D", "15+3D", "2D^2"],
    ["2+4D^2", "2+2D", "2+2D", "2+2D^2"],
    ["2D", "2+2D", "14+6D", "4D^2"],
    ["12+8D", "8", "0", "12+12D"],
    ["4D", "4+4D", "12+12D", "8D^2"],
    ["8", "0", "0", "8+8D"],
    ["8", "8", "8", "8"],
]
Z16_GTILDE = [list(r) for r in Z16_GPRIME]
Z16_GTILDE[5] = ["12D", "4+4D", "12+12D", "8D"]


def M(rows, ctx):
    return PolyMatrix.parse(rows, ctx)


# --- p-linear combinations


def test_p_linear_combination_rejects_large_digits():
    G = M([["1", "D"]], Z4)
    assert p_linear_combination([Poly.parse("1+D", Z4)], G) == (Poly.parse("1+D", Z4), Poly.parse("D+D^2", Z4))
    with pytest.raises(CoefficientOutOfA):
        p_linear_combination([Poly.const(2, Z4)], G)


# --- constant-level independence vs exhaustive enumeration


def test_constant_dependency_vs_enumeration():
    rng = seeded(21)
    for _ in range(300):
        ctx = rng.choice([Z4, Z9, Z16])
        k, n = rng.randint(1, 3), rng.randint(1, 3)
        rows = [[rng.randrange(ctx.modulus) for _ in range(n)] for _ in range(k)]
        dep = constant_dependency(rows, ctx.p, ctx.r)
        brute = oracles.has_digit_dependency([[[x] if x else [] for x in r] for r in rows], ctx.p, ctx.modulus, 0)
        assert (dep is not None) == brute
        if dep is not None:
            assert any(dep) and all(0 <= a < ctx.p for a in dep)
            assert all(sum(a * r[c] for a, r in zip(dep, rows)) % ctx.modulus == 0 for c in range(n))


# --- generator sequences, membership and independence on small instances


def _instances(seed, count):
    """Seeded p-generator sequences over Z_4 / Z_9 with n <= 3, k <= 2 base rows
    of degree <= 1, stacked as (W; pW) and optionally pruned."""
    rng = seeded(seed)
    out = []
    while len(out) < count:
        ctx = rng.choice([Z4, Z9])
        W = rand_matrix(rng, ctx, rng.randint(1, 2), rng.randint(1, 3), 1)
        rows = [r for r in W.rows if any(not e.is_zero() for e in r)]
        if not rows:
            continue
        seq = stack_p_multiples(rows, ctx)
        if rng.random() < 0.5:
            seq = prune_generator_sequence(seq, ctx, 2)
        out.append((rng, PolyMatrix(seq, ctx)))
    return out


def test_generator_certificates_replay():
    for _, G in _instances(1, 200):
        cert = is_p_generator_sequence(G)
        assert cert is not None and cert.replay(G)


def test_p_independence_vs_enumeration():
    seen = set()
    for _, G in _instances(2, 200):
        ctx = G.ctx
        ind = is_p_independent(G)
        dep = oracles.has_digit_dependency(oracles.lists_of(G), ctx.p, ctx.modulus, 1)
        assert ind == (not dep), oracles.lists_of(G)
        seen.add(ind)
    assert seen == {True, False}


def test_p_span_membership_vs_enumeration():
    for rng, G in _instances(3, 200):
        ctx = G.ctx
        cert = is_p_generator_sequence(G)
        L = oracles.lists_of(G)
        members = oracles.p_span_members(L, ctx.p, ctx.modulus, 1)
        # every enumerated member is found, with a digit certificate
        for v in rng.sample(sorted(members), min(8, len(members))):
            vec = tuple(Poly(tuple(x), ctx) for x in v)
            digits = p_span_membership(vec, G, 2, cert)
            assert digits is not None
            assert all(c < ctx.p for d in digits for c in d.coeffs)
            assert combine(digits, G.rows, ctx) == vec
        # a negative answer at degree 2 means no degree-1 digit combination exists
        for _ in range(4):
            vec = tuple(Poly(tuple(rng.randrange(ctx.modulus) for _ in range(3)), ctx) for _ in range(G.ncols))
            if p_span_membership(vec, G, 2, cert) is None:
                assert tuple(tuple(oracles.trim(e.coeffs)) for e in vec) not in members


def test_non_generator_sequence():
    # over a field a nonzero last row is never a generator sequence
    assert is_p_generator_sequence(M([["1", "D"]], Z2)) is not None
    assert is_p_generator_sequence(M([["1", "1"]], Z4)) is None
    # (1, 1), (0, 1): 2*(1,1) is not in the span of (0,1)
    with pytest.raises(Inconclusive):
        is_p_generator_sequence(M([["1", "1"], ["0", "1"], ["0", "2"]], Z4))


def test_p_dimension_unimodular_invariance():
    rng = seeded(4)
    for _ in range(100):
        ctx = rng.choice([Z4, Z9])
        G = rand_matrix(rng, ctx, 2, 3, 1)
        U = rand_unimodular(rng, ctx, 2)
        assert p_dimension(U @ G) == p_dimension(G)


# --- reduction


def test_reduction_single_step_on_z16_example():
    G = M(Z16_GPRIME, Z16)
    assert not constant_p_independence(lrc(G), 2, 4)
    res = reduce_to_reduced_p_basis(G)
    assert res.matrix == M(Z16_GTILDE, Z16)
    assert res.dropped == []
    assert constant_p_independence(lrc(res.matrix), 2, 4)


def test_reduction_z2_example():
    res = reduce_to_reduced_p_basis(M([["1+D", "1+D"], ["D", "D"]], Z2))
    assert res.matrix == M([["1", "1"]], Z2)
    assert res.dropped == [1]


def test_reduction_already_reduced_is_unchanged():
    G = M([["1", "D"], ["1", "0"]], Z2)
    res = reduce_to_reduced_p_basis(G)
    assert res.matrix == G and res.dropped == []


def test_reduction_preserves_span_and_count():
    rng = seeded(5)
    for _ in range(40):
        ctx = rng.choice([Z4, Z9])
        W = rand_matrix(rng, ctx, 2, 3, 1)
        rows = [r for r in W.rows if any(not e.is_zero() for e in r)]
        if not rows:
            continue
        G = PolyMatrix(prune_generator_sequence(stack_p_multiples(rows, ctx), ctx, 2), ctx)
        res = reduce_to_reduced_p_basis(G)
        assert constant_p_independence(lrc(res.matrix), ctx.p, ctx.r)
        assert spans_equal(G, res.matrix) is not None
        # a shuffled copy of the same rows reduces to the same number of rows
        perm = list(range(G.nrows))
        rng.shuffle(perm)
        res2 = reduce_to_reduced_p_basis(PolyMatrix([G.rows[i] for i in perm], ctx))
        if is_p_independent(res.matrix) and is_p_independent(res2.matrix):
            assert res.matrix.nrows == res2.matrix.nrows


# --- validation and catastrophe detection


def test_z16_reduced_matrix_is_catastrophic_p_encoder():
    G = M(Z16_GTILDE, Z16)
    v = validate_p_encoder(G)
    assert v.is_p_encoder and v.reduced and v.delay_free
    assert not v.noncatastrophic
    w = find_catastrophe(G)
    assert w is not None
    # Q v = x G with finite codeword v
    prod = combine(w.x, G.rows, Z16)
    assert prod == tuple(w.Q * e for e in w.codeword)


def test_z16_known_codeword_needs_infinite_digits():
    G = M(Z16_GTILDE, Z16)
    v = tuple(Poly.parse(s, Z16) for s in ["14+4D", "12", "0", "14+6D"])
    cert = is_p_generator_sequence(G)
    assert all(p_span_membership(v, G, b, cert) is None for b in (2, 6))
    # yet (1+D) v is a digit combination of rows 3, 4 and 8
    one_plus_d = Poly.parse("1+D", Z16)
    target = tuple(one_plus_d * e for e in v)
    assert p_span_membership(target, G, 4, cert) is not None


def test_noncatastrophic_small_encoder():
    G = M([["1", "1+D"], ["2", "2+2D"]], Z4)
    v = validate_p_encoder(G)
    assert v.is_p_encoder and v.noncatastrophic and v.minimal


def test_invalid_inputs_fail_validation():
    assert not validate_p_encoder(M([["0", "0"]], Z4)).is_p_encoder
    assert not validate_p_encoder(M([["1", "1"]], Z4)).is_p_encoder
