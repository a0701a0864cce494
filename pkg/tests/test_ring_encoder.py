import pytest

import oracles
from helpers import rand_matrix, rand_unimodular, seeded
from ringconv.errors import DirectSumViolation
from ringconv.laurent import RationalFn
from ringconv.matrix import PolyMatrix, delta_p, intdeg, lrc
from ringconv.poly import Poly, exact_quotient
from ringconv.pstructure import (
    constant_p_independence,
    find_catastrophe,
    rational_span_solve,
    spans_equal,
    validate_p_encoder,
)
from ringconv.ring import RingCtx
from ringconv.ring_encoder import (
    CodeSpec,
    analyze,
    build_gi_ladder,
    concentrate_delta_ring,
    delta_p_code,
    digit_stream_evidence,
    is_catastrophic_ring,
    monic_lifts_dividing,
    ridm_reduce,
    ring_catastrophic_witness,
    stream_evidence,
    synthesize_free,
    synthesize_general,
    witness_absence_smoke,
)

Z4, Z8, Z9, Z16, Z27 = RingCtx(2, 2), RingCtx(2, 3), RingCtx(3, 2), RingCtx(2, 4), RingCtx(3, 3)

Z16_DIV = [["1+D", "9+D", "1+5D"], ["D", "5D^2", "2+D^2"]]
Z16_FREE = [["1+2D^2", "1+D", "1+D", "1+D^2"], ["D", "1+D", "15+3D", "2D^2"]]
Z27_ROW = [["2+7D^2", "5+3D+19D^2+9D^3"]]
Z9_G0 = [["3D+3", "5+D", "5+7D", "8+D"], ["5+6D", "8+3D", "1+5D", "6+D"]]
Z9_G1 = [["1+4D", "4+7D", "7+D", "4+D"]]
Z9_SHOWN_EXTRA = [["0", "3", "3", "3"], ["0", "0", "6", "3"], ["3", "3", "3", "3"]]


def M(rows, ctx):
    return PolyMatrix.parse(rows, ctx)


def z9_code():
    return CodeSpec.from_components([M(Z9_G0, Z9), M(Z9_G1, Z9)], Z9)


def _eval(f, x, m):
    return sum(c * pow(x, i, m) for i, c in enumerate(f.coeffs)) % m


# --- Delta_p goldens


def test_delta_p_goldens():
    assert delta_p(M(Z16_DIV, Z16)) == Poly.parse("D(1+D)^2", RingCtx(2, 1))
    assert delta_p(M(Z27_ROW, Z27)) == Poly.parse("2+D^2", RingCtx(3, 1))
    assert delta_p(M(Z16_FREE, Z16)) == Poly.parse("(1+D)^2", RingCtx(2, 1))
    assert delta_p(z9_code().cumulative(1)) == Poly.parse("(1+D)^2(2+D)", RingCtx(3, 1))


def test_delta_p_agrees_with_oracle():
    for rows, ctx in [(Z16_DIV, Z16), (Z27_ROW, Z27), (Z16_FREE, Z16)]:
        G = M(rows, ctx)
        proj = [[[c % ctx.p for c in e] for e in r] for r in oracles.lists_of(G)]
        assert list(delta_p(G).coeffs) == oracles.delta_fp(proj, ctx.p)


# --- lifting and concentration


def test_monic_lifts_divide_every_poly():
    sctx = Z27
    polys = [Poly.parse(s, Z27) for s in ["2+7D^2", "5+3D+19D^2+9D^3"]]
    lifts = monic_lifts_dividing(Poly.parse("2+D", RingCtx(3, 1)), polys, sctx)
    assert Poly.parse("17+D", Z27) in lifts
    for Q in lifts:
        assert Q.is_monic() and all(exact_quotient(f, Q) is not None for f in polys)


def test_concentrate_ring_z16():
    G = M(Z16_DIV, Z16)
    res = concentrate_delta_ring(G)
    assert res.i0 == 3
    assert res.H == M([["1", "1", "1"], ["0", "1", "1"]], Z16)
    assert res.row_index == 1
    assert sorted(str(q) for q in res.divisors) == ["1+D", "1+D", "D"]
    assert delta_p(res.H).is_power_of_D()
    assert spans_equal(res.H.scale(8), G.scale(8)) is not None
    # H is not span-equal to G one level lower
    assert spans_equal(res.H.scale(4), G.scale(4)) is None


# --- internal degree reduction and the ladder


def test_z27_level_zero_common_root():
    G = M(Z27_ROW, Z27)
    # both entries vanish at D = 10, so the lift D+17 of 2+D divides both
    assert all(_eval(e, 10, 27) == 0 for e in G.rows[0])
    G0, _ = ridm_reduce(G)
    assert G0 == M([["16+7D", "13+D+9D^2"]], Z27)
    assert intdeg(G) == 3 and intdeg(G0) == 2
    assert spans_equal(G0, G) is not None


def test_z27_ladder():
    G = M(Z27_ROW, Z27)
    ladder = build_gi_ladder(ridm_reduce(G)[0])
    G1, G2 = ladder.level(1), ladder.level(2)
    assert G1 == M([["7+7D", "4+D"]], Z27)
    assert G2 == M([["1", "1"]], Z27)
    for i, Gi in ((1, G1), (2, G2)):
        a, b = Gi.scale(3 ** i), G.scale(3 ** i)
        assert rational_span_solve(a.rows[0], list(b.rows), Z27, 4) is not None
        assert rational_span_solve(b.rows[0], list(a.rows), Z27, 4) is not None
    assert sorted(ladder.certificates) == [0, 1, 2]


def test_z16_ladder_matches_displayed_levels():
    G = M(Z16_FREE, Z16)
    ladder = build_gi_ladder(ridm_reduce(G)[0])
    shown_g2 = M([["3+2D", "2", "0", "3+3D"], ["D", "1+D", "3+3D", "2D^2"]], Z16)
    shown_g3 = M([["1", "0", "0", "1+D"], ["1", "1", "1", "1"]], Z16)
    assert spans_equal(ladder.level(2).scale(4), shown_g2.scale(4)) is not None
    assert spans_equal(ladder.level(3).scale(8), shown_g3.scale(8)) is not None
    assert spans_equal(shown_g2.scale(4), G.scale(4)) is not None
    assert delta_p(ladder.level(3)).is_power_of_D()


def test_planted_factor_is_stripped():
    rng = seeded(8)
    done = 0
    while done < 25:
        B = rand_matrix(rng, Z9, 2, 3, 1)
        try:
            base = intdeg(ridm_reduce(B)[0])
        except Exception:
            continue
        U = rand_unimodular(rng, Z9, 2)
        planted = M([["1+D", "0"], ["0", "1"]], Z9) @ B
        G = U @ planted
        done += 1
        G0, _ = ridm_reduce(G)
        assert intdeg(G0) == base
        assert intdeg(G0) <= intdeg(planted) - 1
        assert spans_equal(G0, B) is not None


def test_delta_p_code():
    # G_0 = (16+7D, 13+D+9D^2) projects to (1+D)(1, 1)
    assert delta_p_code(CodeSpec.from_matrix(M(Z27_ROW, Z27))) == Poly.parse("1+D", RingCtx(3, 1))
    assert delta_p_code(CodeSpec.from_matrix(M([["1", "D"]], Z27))) == Poly.one(RingCtx(3, 1))
    assert delta_p_code(CodeSpec.from_matrix(M(Z16_FREE, Z16))) == Poly.parse("(1+D)^2", RingCtx(2, 1))
    assert is_catastrophic_ring(M(Z16_FREE, Z16))


# --- synthesis


def _check_minimal(syn, code_gen, rows):
    enc = syn.encoder
    assert enc.nrows == rows
    v = syn.validation
    assert v.is_p_encoder and v.delay_free and v.reduced and v.noncatastrophic and v.spans_code and v.minimal
    assert constant_p_independence(lrc(enc), enc.ctx.p, enc.ctx.r)
    assert spans_equal(enc, code_gen) is not None


def test_synthesis_z16():
    G = M(Z16_FREE, Z16)
    syn = synthesize_free(G)
    _check_minimal(syn, G, 8)
    # the construction before repair is catastrophic and got repaired
    assert syn.construction_catastrophe is not None and syn.repairs


def test_synthesis_z9():
    code = z9_code()
    syn = synthesize_general(code)
    _check_minimal(syn, code.generator(), 5)
    shown = PolyMatrix(list(M(Z9_G0, Z9).rows) + list(M(Z9_SHOWN_EXTRA, Z9).rows), Z9)
    assert spans_equal(syn.encoder, shown) is not None
    assert spans_equal(syn.construction, shown) is not None
    # the displayed matrix has a finite codeword reached only by infinite digit input
    w = find_catastrophe(shown)
    assert w is not None


def test_degenerate_decomposition_is_free_path():
    G = M(Z16_FREE, Z16)
    code = CodeSpec.from_components([G], Z16)
    assert code.is_free
    a = synthesize_general(code).encoder
    b = synthesize_free(G).encoder
    assert a == b


def test_direct_sum_violation():
    G0 = M([["1", "D"]], Z9)
    with pytest.raises(DirectSumViolation):
        CodeSpec.from_components([G0, G0], Z9).check_direct_sum()
    with pytest.raises(DirectSumViolation):
        synthesize_general(CodeSpec.from_components([G0, M([["3", "3D"]], Z9)], Z9))


def test_random_free_codes_yield_minimal_encoders():
    rng = seeded(31)
    done = 0
    while done < 30:
        ctx = rng.choice([Z4, Z8, Z9])
        k = rng.randint(1, 2)
        G = rand_matrix(rng, ctx, k, rng.randint(k, 3), 1)
        try:
            delta_p(G)
        except Exception:
            continue
        done += 1
        syn = synthesize_free(G)
        assert syn.validation.minimal, oracles.lists_of(G)


# --- witnesses and stream evidence


def test_ring_witness_stream_evidence():
    G = M(Z16_DIV, Z16)
    u, y = ring_catastrophic_witness(G)
    assert any(not f.den.is_monomial() for f in u if not f.num.is_zero())
    ev = stream_evidence(G, u)
    assert ev.output_stable and ev.input_growth >= 32
    assert sum(sum(1 for c in e.coeffs if c) for e in y) == ev.output_weights[0]


def test_digit_stream_evidence_for_catastrophic_p_encoder():
    syn = synthesize_free(M(Z16_FREE, Z16))
    ev = digit_stream_evidence(syn.construction, syn.construction_catastrophe)
    assert ev.output_stable and ev.input_growth >= 32


def test_witness_absence_smoke_on_minimal_encoders():
    assert witness_absence_smoke(synthesize_free(M(Z16_FREE, Z16)).encoder) == []
    assert witness_absence_smoke(synthesize_general(z9_code()).encoder) == []
    assert ring_catastrophic_witness(M([["1", "1"]], Z27)) is None


def test_analyze_reports():
    rep = analyze(M(Z27_ROW, Z27))
    assert rep.is_catastrophic and rep.code_catastrophic
    assert rep.ridm_intdeg == 2 and rep.validation.minimal
    rep = analyze(M([["1+D", "D"]], Z9), synthesize=False)
    assert not rep.is_catastrophic and not rep.code_catastrophic
    rep = analyze(z9_code(), synthesize=False)
    assert not rep.is_free and rep.minimal_p_encoder is None
