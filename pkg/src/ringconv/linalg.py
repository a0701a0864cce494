"""Exact linear algebra over Z_{p^s} on plain integer matrices.

Z_{p^s} is a chain ring: every nonzero element is p^v times a unit, so
elimination pivots on an entry of least valuation and never divides by a
zero divisor.
"""

from __future__ import annotations

import itertools


def _val(a: int, p: int, s: int) -> int:
    a %= p ** s
    if a == 0:
        return s
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def solve_mod(A, b, p: int, s: int):
    """Return one solution x of A x = b over Z_{p^s}, or None.

    A is a list of rows (m x n), b a list of length m.  Free variables are
    set to zero.
    """
    mod = p ** s
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[A[i][j] % mod for j in range(n)] + [b[i] % mod] for i in range(m)]
    cols = list(range(n))
    pivots = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = _val(M[i][j], p, s)
                if v < s and (best is None or v < best[0]):
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, pi, pj = best
        M[t], M[pi] = M[pi], M[t]
        if pj != t:
            for row in M:
                row[t], row[pj] = row[pj], row[t]
            cols[t], cols[pj] = cols[pj], cols[t]
        unit = (M[t][t] // p ** v) % mod
        uinv = pow(unit, -1, mod)
        for i in range(t + 1, m):
            a = M[i][t]
            if a == 0:
                continue
            f = (a // p ** v) * uinv % mod
            rt = M[t]
            M[i] = [(x - f * y) % mod for x, y in zip(M[i], rt)]
        pivots.append(v)
        t += 1
    rank = t
    for i in range(rank, m):
        if M[i][n] % mod:
            return None
    y = [0] * n
    for t in range(rank - 1, -1, -1):
        v = pivots[t]
        rhs = (M[t][n] - sum(M[t][j] * y[j] for j in range(t + 1, n))) % mod
        if rhs % p ** v:
            return None
        unit = (M[t][t] // p ** v) % mod
        y[t] = (rhs // p ** v) * pow(unit, -1, mod) % mod
    x = [0] * n
    for pos, c in enumerate(cols):
        x[c] = y[pos]
    return x


def nullspace_mod_p(A, p: int):
    """Basis of the right null space {x : A x = 0} over F_p."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[a % p for a in row] for row in A]
    pivcols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        pivcols.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivcols]
    basis = []
    for fc in free:
        x = [0] * n
        x[fc] = 1
        for row_i, pc in enumerate(pivcols):
            x[pc] = -M[row_i][fc] % p
        basis.append(x)
    return basis


def rank_mod_p(A, p: int) -> int:
    n = len(A[0]) if A else 0
    return n - len(nullspace_mod_p(A, p)) if A else 0


def span_mod_p(basis, p: int):
    """Iterate over every F_p-combination of the given basis vectors."""
    if not basis:
        yield None
        return
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        n = len(basis[0])
        yield [sum(c * v[i] for c, v in zip(coeffs, basis)) % p for i in range(n)]


def group_order_exponent(A, p: int, s: int) -> int:
    """log_p of the size of the row module of A over Z_{p^s}."""
    mod = p ** s
    M = [[a % mod for a in row] for row in A]
    m = len(M)
    n = len(M[0]) if m else 0
    total = 0
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = _val(M[i][j], p, s)
                if v < s and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        v, pi, pj = best
        M[t], M[pi] = M[pi], M[t]
        for row in M:
            row[t], row[pj] = row[pj], row[t]
        uinv = pow((M[t][t] // p ** v) % mod, -1, mod)
        for i in range(m):
            if i != t and M[i][t]:
                f = (M[i][t] // p ** v) * uinv % mod
                M[i] = [(x - f * y) % mod for x, y in zip(M[i], M[t])]
        # column operations would clear the pivot row without touching the rest
        total += s - v
        t += 1
    return total


def left_kernel_mod(A, p: int, s: int):
    """Generators of {x : x A = 0} over Z_{p^s} for an m x n matrix A.

    Row operations are tracked in U so that U A is diagonal after column
    operations; the kernel is spanned by the rows of U scaled by the
    annihilator of their diagonal entry.
    """
    mod = p ** s
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[a % mod for a in row] for row in A]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    t = 0
    diag = []
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = _val(M[i][j], p, s)
                if v < s and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        v, pi, pj = best
        M[t], M[pi] = M[pi], M[t]
        U[t], U[pi] = U[pi], U[t]
        for row in M:
            row[t], row[pj] = row[pj], row[t]
        uinv = pow((M[t][t] // p ** v) % mod, -1, mod)
        for i in range(m):
            if i != t and M[i][t]:
                f = (M[i][t] // p ** v) * uinv % mod
                M[i] = [(x - f * y) % mod for x, y in zip(M[i], M[t])]
                U[i] = [(x - f * y) % mod for x, y in zip(U[i], U[t])]
        # clear the pivot row to the right with column operations (U unaffected)
        for j in range(t + 1, n):
            if M[t][j]:
                f = (M[t][j] // p ** v) * uinv % mod
                for row in M:
                    row[j] = (row[j] - f * row[t]) % mod
        diag.append(v)
        t += 1
    gens = []
    for i in range(m):
        if i < t:
            scale = p ** (s - diag[i])
            if scale == mod:
                continue
            gens.append([x * scale % mod for x in U[i]])
        else:
            gens.append(list(U[i]))
    return [g for g in gens if any(g)]
