"""Exact Gaussian elimination over the Novikov scalar field.

Matrices are dense lists of rows of NovikovScalar.  Pivots are chosen by
maximal valuation (ties broken by lowest row index) so eliminations are
deterministic and mirror the numerically stable choice.
"""

from __future__ import annotations

from .novikov import NEG_INF, NovikovScalar


def zeros(field, m, n):
    z = NovikovScalar.zero(field)
    return [[z for _ in range(n)] for _ in range(m)]


def identity(field, n):
    a = zeros(field, n, n)
    one = NovikovScalar.one(field)
    for i in range(n):
        a[i][i] = one
    return a


def mat_vec(a, v):
    field = a[0][0].field if a and a[0] else v[0].field
    out = []
    for row in a:
        acc = NovikovScalar.zero(field)
        for x, y in zip(row, v):
            if not (x.is_zero() or y.is_zero()):
                acc = acc + x * y
        out.append(acc)
    return out


def mat_mul(a, b):
    field = a[0][0].field
    n, k, m = len(a), len(b), len(b[0])
    out = zeros(field, n, m)
    for i in range(n):
        arow = a[i]
        orow = out[i]
        for t in range(k):
            x = arow[t]
            if x.is_zero():
                continue
            brow = b[t]
            for j in range(m):
                y = brow[j]
                if not y.is_zero():
                    orow[j] = orow[j] + x * y
    return out


def _pivot_row(col_entries, used):
    best, best_val = None, None
    for i, x in col_entries:
        if i in used or x.is_zero():
            continue
        v = x.valuation()
        if best is None or v > best_val:
            best, best_val = i, v
    return best


def _row_echelon(rows, ncols):
    """In-place elimination; returns (pivot list [(row, col)], row order)."""
    m = len(rows)
    used = set()
    pivots = []
    for j in range(ncols):
        pr = _pivot_row([(i, rows[i][j]) for i in range(m)], used)
        if pr is None:
            continue
        used.add(pr)
        pivots.append((pr, j))
        piv = rows[pr][j]
        inv = piv.inverse()
        for i in range(m):
            if i == pr or i in used and i != pr:
                pass
            if i == pr:
                continue
            x = rows[i][j]
            if x.is_zero():
                continue
            f = x * inv
            ri, rp = rows[i], rows[pr]
            for t in range(j, len(ri)):
                if not rp[t].is_zero():
                    ri[t] = ri[t] - f * rp[t]
    return pivots


def rank(a) -> int:
    if not a or not a[0]:
        return 0
    rows = [list(r) for r in a]
    return len(_row_echelon(rows, len(a[0])))


def solve(a, b):
    """One solution x of a x = b, or None if inconsistent.

    a: m x n matrix, b: length-m vector.  Free variables are set to 0.
    """
    if not a:
        return [] if all(x.is_zero() for x in b) else None
    field = a[0][0].field if a[0] else b[0].field
    m, n = len(a), len(a[0])
    rows = [list(r) + [b[i]] for i, r in enumerate(a)]
    pivots = _row_echelon(rows, n)
    piv_rows = {r for r, _ in pivots}
    for i in range(m):
        if i not in piv_rows and not rows[i][n].is_zero():
            return None
    x = [NovikovScalar.zero(field) for _ in range(n)]
    for r, c in pivots:
        x[c] = rows[r][n] / rows[r][c]
    return x


def nullspace(a):
    """Basis of the kernel of a (list of length-n vectors)."""
    if not a or not a[0]:
        return []
    field = a[0][0].field
    m, n = len(a), len(a[0])
    rows = [list(r) for r in a]
    pivots = _row_echelon(rows, n)
    piv_cols = {c: r for r, c in pivots}
    free_cols = [j for j in range(n) if j not in piv_cols]
    basis = []
    one = NovikovScalar.one(field)
    for fc in free_cols:
        v = [NovikovScalar.zero(field) for _ in range(n)]
        v[fc] = one
        for c, r in piv_cols.items():
            # pivot row: rows[r][c] * x_c + ... + rows[r][fc] * x_fc + ... = 0
            coeff = rows[r][fc]
            if not coeff.is_zero():
                v[c] = -(coeff / rows[r][c])
        basis.append(v)
    return basis


def det(a) -> NovikovScalar:
    n = len(a)
    if n == 0:
        raise ValueError("empty matrix")
    field = a[0][0].field
    rows = [list(r) for r in a]
    sign_flip = 0
    d = NovikovScalar.one(field)
    used = []
    for j in range(n):
        pr = _pivot_row([(i, rows[i][j]) for i in range(n)], set(used))
        if pr is None:
            return NovikovScalar.zero(field)
        used.append(pr)
        piv = rows[pr][j]
        d = d * piv
        inv = piv.inverse()
        for i in range(n):
            if i in used:
                continue
            x = rows[i][j]
            if x.is_zero():
                continue
            f = x * inv
            for t in range(j, n):
                if not rows[pr][t].is_zero():
                    rows[i][t] = rows[i][t] - f * rows[pr][t]
    # row order permutation sign
    perm = list(used)
    seen = [False] * n
    for i in range(n):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        sign_flip += clen - 1
    if sign_flip % 2:
        d = -d
    return d


def inverse(a):
    n = len(a)
    field = a[0][0].field
    rows = [list(r) + list(identity(field, n)[i]) for i, r in enumerate(a)]
    pivots = _row_echelon(rows, n)
    if len(pivots) < n:
        return None
    out = zeros(field, n, n)
    for r, c in pivots:
        inv_piv = rows[r][c].inverse()
        for j in range(n):
            out[c][j] = rows[r][n + j] * inv_piv
    return out
