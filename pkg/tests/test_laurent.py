import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ringconv.errors import NonUnitDenominator
from ringconv.laurent import (
    RationalFn,
    Weight,
    classify_weight,
    encode_stream,
    rational_expand,
    window_weight,
)
from ringconv.matrix import PolyMatrix
from ringconv.poly import Poly
from ringconv.ring import RingCtx

F3, Z9, Z16 = RingCtx(3, 1), RingCtx(3, 2), RingCtx(2, 4)


def R(num, den, ctx):
    return RationalFn(Poly.parse(num, ctx), Poly.parse(den, ctx))


def test_expand_geometric_z16():
    w = rational_expand(R("1", "1+D", Z16), 6)
    assert w.coeffs == (1, 15, 1, 15, 1, 15)
    assert w.start == 0


def test_expand_with_pole_at_zero():
    w = rational_expand(R("1", "D+D^2", F3), 4)
    assert w.start == -1
    assert w.coeffs == (1, 2, 1, 2)


def test_non_unit_denominator_rejected():
    with pytest.raises(NonUnitDenominator):
        R("1", "3+D", Z9)
    with pytest.raises(NonUnitDenominator):
        R("1", "0", Z9)


def test_weight_classes():
    assert classify_weight(R("1+D", "1+D", F3)) is Weight.FINITE
    assert classify_weight(R("1", "2+D", F3)) is Weight.INFINITE
    assert classify_weight(R("1", "D^2", F3)) is Weight.FINITE
    assert classify_weight(Poly.parse("1+D", F3)) is Weight.FINITE


def test_small_input_encodes_to_finite_output():
    G = PolyMatrix.parse([["1+D", "D", "2"], ["2+2D", "2", "D"]], F3)
    u = [R("D", "2+D", F3), R("1", "2+D", F3)]
    for h in (2, 8, 64):
        ins, outs = encode_stream(u, G, h)
        want = [Poly.parse(s, F3) for s in ("1+D", "1+D", "0")]
        for w, f in zip(outs, want):
            assert w.coeffs == tuple(f[i] for i in range(h))
    ins, outs = encode_stream(u, G, 64)
    assert sum(window_weight(w) for w in outs) == 4
    assert sum(window_weight(w) for w in ins) > 32


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([F3, Z9, Z16]), st.data())
def test_expansion_times_denominator_is_numerator(ctx, data):
    num = Poly(tuple(data.draw(st.lists(st.integers(0, ctx.modulus - 1), max_size=4))), ctx)
    den_tail = data.draw(st.lists(st.integers(0, ctx.modulus - 1), max_size=3))
    c0 = data.draw(st.sampled_from([a for a in range(1, ctx.modulus) if ctx.is_unit(a)]))
    den = Poly((c0, *den_tail), ctx)
    h = 24
    w = rational_expand(RationalFn(num, den), h)
    prod = oracles.series_times(list(w.coeffs), list(den.coeffs), ctx.modulus, h)
    assert prod == [num[i] for i in range(h)]


def test_stream_matches_oracle_simulation():
    rng = random.Random(11)
    ctx = Z16
    for _ in range(20):
        G = PolyMatrix([[Poly(tuple(rng.randrange(16) for _ in range(3)), ctx) for _ in range(3)] for _ in range(2)], ctx)
        u = [RationalFn(Poly(tuple(rng.randrange(16) for _ in range(2)), ctx), Poly((1, rng.randrange(16)), ctx)) for _ in range(2)]
        ins, outs = encode_stream(u, G, 30)
        ref = oracles.simulate([list(w.coeffs) for w in ins], oracles.lists_of(G), 16, 30)
        assert [list(w.coeffs) for w in outs] == ref


def test_rational_arithmetic_field():
    a = R("1", "1+D", F3)
    b = R("D", "1+D", F3)
    assert a + b == RationalFn.one(F3)
    assert (a * R("1+D", "1", F3)).as_poly() == Poly.one(F3)
    assert a.inverse() == R("1+D", "1", F3)
