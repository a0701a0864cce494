import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringconv.errors import NotAUnit, NotPrime
from ringconv.ring import RingCtx, is_prime, padic_digits, recompose, ring_inverse

RINGS = [(2, 1), (2, 4), (3, 1), (3, 3), (5, 2), (7, 1)]


def test_primality():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_composite_p_rejected():
    with pytest.raises(NotPrime):
        RingCtx(6, 1)


def test_units_and_valuation_z16():
    c = RingCtx(2, 4)
    assert [a for a in range(16) if c.is_unit(a)] == list(range(1, 16, 2))
    assert [c.valuation(a) for a in (1, 2, 4, 8, 12)] == [0, 1, 2, 3, 2]
    assert c.valuation(0) == 4


def test_inverse_of_nonunit_raises():
    c = RingCtx(3, 2)
    with pytest.raises(NotAUnit):
        c.inverse(3)


def test_digit_expansion_example():
    c = RingCtx(3, 3)
    assert padic_digits(c.elem(19)) == [1, 0, 2]
    assert int(recompose([1, 0, 2], c)) == 19


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(RINGS), st.integers(0, 10**6))
def test_digits_round_trip(pr, a):
    c = RingCtx(*pr)
    x = c.elem(a)
    ds = padic_digits(x)
    assert len(ds) == c.r and all(0 <= d < c.p for d in ds)
    assert int(recompose(ds, c)) == a % c.modulus


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(RINGS), st.integers(0, 10**6))
def test_inverse_property(pr, a):
    c = RingCtx(*pr)
    x = c.elem(a)
    if x.is_unit():
        assert int(ring_inverse(x) * x) == 1
    else:
        with pytest.raises(NotAUnit):
            ring_inverse(x)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(RINGS), st.integers(0, 999), st.integers(0, 999), st.integers(0, 999))
def test_ring_axioms(pr, a, b, d):
    c = RingCtx(*pr)
    x, y, z = c.elem(a), c.elem(b), c.elem(d)
    assert int(x * (y + z)) == int(x * y + x * z)
    assert int((x - y) + y) == int(x)
