import itertools
import random

import pytest

from ringconv.errors import ZeroInverse
from ringconv.extfield import ExtField, ext_inverse, left_nullspace
from ringconv.poly import Poly
from ringconv.ring import RingCtx

F2, F3 = RingCtx(2, 1), RingCtx(3, 1)


@pytest.mark.parametrize("ctx,mp", [(F2, "1+D+D^2"), (F3, "1+D^2"), (F2, "1+D+D^3"), (F3, "2+D")])
def test_field_axioms(ctx, mp):
    K = ExtField(Poly.parse(mp, ctx))
    els = list(K.elements())
    assert len(els) == ctx.p ** K.m
    for x in els:
        if not x.is_zero():
            assert x * ext_inverse(x) == K.one
    for x, y in itertools.product(els[:6], repeat=2):
        assert x * y == y * x
        assert (x + y) - y == x


def test_alpha_is_root():
    K = ExtField(Poly.parse("1+D+D^2", F2))
    a = K.alpha
    assert a * a + a + K.one == K.zero


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        ExtField(Poly.parse("1+D^2", F2))


def test_zero_inverse():
    K = ExtField(Poly.parse("1+D+D^2", F2))
    with pytest.raises(ZeroInverse):
        K.zero.inverse()


def test_left_nullspace_random():
    rng = random.Random(3)
    K = ExtField(Poly.parse("2+D+D^2", F3))
    els = list(K.elements())
    for _ in range(50):
        k, n = rng.randint(1, 3), rng.randint(1, 3)
        A = [[rng.choice(els) for _ in range(n)] for _ in range(k)]
        if rng.random() < 0.5 and k > 1:
            A[-1] = [a + b for a, b in zip(A[0], A[1 % k])]
        N = left_nullspace(A, K)
        for y in N:
            for c in range(n):
                acc = K.zero
                for i in range(k):
                    acc = acc + y[i] * A[i][c]
                assert acc.is_zero()
        # brute-force dimension check over the whole space
        zero_count = 0
        for y in itertools.product(els, repeat=k):
            if all(sum((y[i] * A[i][c] for i in range(k)), K.zero).is_zero() for c in range(n)):
                zero_count += 1
        assert zero_count == len(els) ** len(N)
