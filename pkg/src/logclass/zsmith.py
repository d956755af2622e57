"""Small exact integer Smith normal form and finite abelian group helpers.

Everything here works on plain Python ints; matrices are lists of lists.
Used for finite-group bookkeeping (subgroup orders, quotients, discrete
solves) where l-adic precision tracking would be noise.
"""

from __future__ import annotations


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def smith(mat: list[list[int]]):
    """Return (u, d, v) with u @ mat @ v = d in Smith form over Z."""
    a = [row[:] for row in mat]
    r = len(a)
    c = len(a[0]) if r else 0
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def addmul_row(dst, src, q):
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, q):
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(r, c):
        # find a nonzero pivot of minimal absolute value
        piv = None
        for i in range(t, r):
            for j in range(t, c):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        _swap_rows(a, t, piv[0]); _swap_rows(u, t, piv[0])
        _swap_cols(a, t, piv[1]); _swap_cols(v, t, piv[1])
        dirty = False
        for i in range(t + 1, r):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                addmul_row(i, t, q)
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, c):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                addmul_col(j, t, q)
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot must divide the rest of the block
        ok = True
        for i in range(t + 1, r):
            for j in range(t + 1, c):
                if a[i][j] % a[t][t]:
                    addmul_row(t, i, -1)
                    ok = False
                    break
            if not ok:
                break
        if ok:
            if a[t][t] < 0:
                a[t] = [-x for x in a[t]]
                u[t] = [-x for x in u[t]]
            t += 1
    return u, a, v


def diagonal(mat: list[list[int]]) -> list[int]:
    _, d, _ = smith(mat)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def group_order(divisors: list[int]) -> int:
    out = 1
    for d in divisors:
        if d == 0:
            return 0
        out *= d
    return out


def subgroup_order(orders: list[int], vectors: list[list[int]]) -> int:
    """Order of the subgroup of prod Z/orders generated by the vectors."""
    if not vectors:
        return 1
    n = len(orders)
    quotient = cokernel_in(orders, vectors)
    return group_order(orders) // group_order(quotient)


def cokernel_in(orders: list[int], vectors: list[list[int]]) -> list[int]:
    """Cyclic decomposition of (prod Z/orders)/<vectors>, nontrivial parts."""
    n = len(orders)
    rel = [list(v) for v in vectors] + \
          [[orders[i] if j == i else 0 for j in range(n)] for i in range(n)]
    cols = [[rel[k][i] for k in range(len(rel))] for i in range(n)]
    d = diagonal(cols)
    return [x for x in d if x not in (1, -1)] + [0] * (n - len(d))


def solve_mod(orders: list[int], vectors: list[list[int]], target: list[int]):
    """Integer combination of vectors hitting target in prod Z/orders, or None."""
    n = len(orders)
    k = len(vectors)
    if n == 0:
        return [0] * k
    # solve sum x_j vectors[j] + sum y_i orders[i] e_i = target over Z
    cols = []
    for j in range(k):
        cols.append([vectors[j][i] for i in range(n)])
    for i in range(n):
        cols.append([orders[i] if r == i else 0 for r in range(n)])
    m = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
    u, d, v = smith(m)
    tb = [sum(u[i][r] * target[r] for r in range(n)) for i in range(n)]
    y = [0] * len(cols)
    for i in range(n):
        di = d[i][i] if i < min(len(d), len(cols)) else 0
        if di == 0:
            if i < len(tb) and tb[i] != 0:
                return None
            continue
        if tb[i] % di:
            return None
        y[i] = tb[i] // di
    x = [sum(v[i][j] * y[j] for j in range(len(cols))) for i in range(len(cols))]
    return x[:k]
