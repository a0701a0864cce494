"""Residue arithmetic in Z_{p^r} (F_p when r = 1)."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import NotAUnit, NotPrime


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class RingCtx:
    """The coefficient ring Z_{p^r}."""

    p: int
    r: int = 1
    modulus: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"p = {self.p} is not prime")
        if self.r < 1:
            raise ValueError(f"exponent r must be >= 1, got {self.r}")
        object.__setattr__(self, "modulus", self.p ** self.r)

    @property
    def is_field(self) -> bool:
        return self.r == 1

    def residue_field(self) -> "RingCtx":
        return RingCtx(self.p)

    def truncated(self, s: int) -> "RingCtx":
        """Z_{p^s} for 1 <= s <= r."""
        return RingCtx(self.p, s)

    def is_unit(self, a: int) -> bool:
        return a % self.p != 0

    def inverse(self, a: int) -> int:
        a %= self.modulus
        if a % self.p == 0:
            raise NotAUnit(f"{a} is not a unit in Z_{self.p}^{self.r}")
        return pow(a, -1, self.modulus)

    def valuation(self, a: int) -> int:
        """p-adic valuation of a residue; r for zero."""
        a %= self.modulus
        if a == 0:
            return self.r
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def elem(self, value: int) -> "ChainRingElem":
        return ChainRingElem(value % self.modulus, self)

    def __str__(self):
        if self.r == 1:
            return f"Z({self.p})"
        return f"Z({self.p}^{self.r})"


@dataclass(frozen=True)
class ChainRingElem:
    value: int
    ctx: RingCtx

    def __post_init__(self):
        if not 0 <= self.value < self.ctx.modulus:
            object.__setattr__(self, "value", self.value % self.ctx.modulus)

    def _coerce(self, other):
        if isinstance(other, ChainRingElem):
            if other.ctx != self.ctx:
                raise TypeError("cannot mix elements of different rings")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.ctx.elem(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.ctx.elem(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.ctx.elem(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.ctx.elem(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self.ctx.elem(-self.value)

    def is_unit(self) -> bool:
        return self.ctx.is_unit(self.value)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.ctx.modulus})"


def padic_digits(a: ChainRingElem) -> list[int]:
    """Digits d_0..d_{r-1} in {0,...,p-1} with a = sum d_i p^i."""
    p, v = a.ctx.p, a.value
    digits = []
    for _ in range(a.ctx.r):
        v, d = divmod(v, p)
        digits.append(d)
    return digits


def recompose(digits, ctx: RingCtx) -> ChainRingElem:
    return ctx.elem(sum(d * ctx.p ** i for i, d in enumerate(digits)))


def ring_inverse(a: ChainRingElem) -> ChainRingElem:
    return ChainRingElem(a.ctx.inverse(a.value), a.ctx)
