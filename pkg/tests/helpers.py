"""Random generators shared by the property tests."""

import random

from ringconv.matrix import PolyMatrix
from ringconv.poly import Poly


def rand_poly(rng, ctx, max_deg):
    return Poly(tuple(rng.randrange(ctx.modulus) for _ in range(rng.randint(0, max_deg + 1))), ctx)


def rand_matrix(rng, ctx, k, n, max_deg):
    return PolyMatrix([[rand_poly(rng, ctx, max_deg) for _ in range(n)] for _ in range(k)], ctx)


def rand_unimodular(rng, ctx, k, steps=4, max_deg=2):
    """Product of random transvections, unit scalings and swaps."""
    rows = [[Poly.const(1 if i == j else 0, ctx) for j in range(k)] for i in range(k)]
    units = [a for a in range(1, ctx.modulus) if ctx.is_unit(a)]
    for _ in range(steps):
        kind = rng.random()
        if k > 1 and kind < 0.6:
            t, s = rng.sample(range(k), 2)
            m = rand_poly(rng, ctx, max_deg)
            rows[t] = [a + m * b for a, b in zip(rows[t], rows[s])]
        elif kind < 0.8:
            t = rng.randrange(k)
            u = rng.choice(units)
            rows[t] = [a.scale(u) for a in rows[t]]
        elif k > 1:
            a, b = rng.sample(range(k), 2)
            rows[a], rows[b] = rows[b], rows[a]
    return PolyMatrix(rows, ctx)


def seeded(seed):
    return random.Random(seed)
