"""Integer Smith normal form.

Large simplicial boundary matrices are sparse with mostly unit entries, so
``invariant_factors`` first eliminates unit pivots on a sparse row/column
structure (each such pivot contributes an invariant factor 1) and only runs
the dense algorithm on whatever is left.
"""
from collections import defaultdict

import numpy as np
from scipy import sparse


def smith_normal_form(matrix):
    """Dense Smith normal form ``(D, U, V)`` with ``U @ matrix @ V == D``.

    Entries are Python integers; ``U`` and ``V`` are unimodular. The diagonal of
    ``D`` is non-negative and each nonzero entry divides the next.
    """
    A = [[int(x) for x in row] for row in np.asarray(matrix, dtype=object).tolist()]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for M in (A, V):
            for row in M:
                row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if not done:
                # a remainder is smaller than the pivot: move it into place and repeat
                nz = [(abs(A[i][t]), i, None) for i in range(t + 1, m) if A[i][t]]
                nz += [(abs(A[t][j]), None, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(nz, key=lambda e: e[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return A, U, V


def _dense_invariants(rows, ncols):
    if not rows or not ncols:
        return []
    D, _, _ = smith_normal_form(rows)
    return [D[i][i] for i in range(min(len(D), ncols)) if D[i][i]]


def invariant_factors(matrix):
    """Nonzero invariant factors of an integer matrix (dense array or scipy sparse)."""
    M = sparse.coo_matrix(matrix)
    rows = defaultdict(dict)
    cols = defaultdict(dict)
    for r, c, v in zip(M.row.tolist(), M.col.tolist(), M.data.tolist()):
        v = int(v)
        if v:
            rows[r][c] = rows[r].get(c, 0) + v
    for r, entries in list(rows.items()):
        for c, v in list(entries.items()):
            if v:
                cols[c][r] = v
            else:
                del entries[c]
    units = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols, key=lambda c: (len(cols[c]), c)):
            col = cols.get(c)
            if not col:
                continue
            unit_rows = [r for r, v in col.items() if v in (1, -1)]
            if not unit_rows:
                continue
            r = min(unit_rows, key=lambda r: (len(rows[r]), r))
            _eliminate(rows, cols, r, c)
            units += 1
            progress = True
    remaining_rows = sorted(r for r in rows if rows[r])
    remaining_cols = sorted(c for c in cols if cols[c])
    cindex = {c: k for k, c in enumerate(remaining_cols)}
    dense = [[0] * len(remaining_cols) for _ in remaining_rows]
    for k, r in enumerate(remaining_rows):
        for c, v in rows[r].items():
            dense[k][cindex[c]] = v
    return [1] * units + _dense_invariants(dense, len(remaining_cols))


def _eliminate(rows, cols, r, c):
    p = rows[r][c]
    pivot_row = rows[r]
    for r2 in [x for x in cols[c] if x != r]:
        k = cols[c][r2] * p  # p is a unit, p^-1 == p
        target = rows[r2]
        for cc, v in pivot_row.items():
            nv = target.get(cc, 0) - k * v
            if nv:
                target[cc] = nv
                cols[cc][r2] = nv
            else:
                target.pop(cc, None)
                cols[cc].pop(r2, None)
    for cc in pivot_row:
        cols[cc].pop(r, None)
    del rows[r]
    cols.pop(c, None)


def rank_and_torsion(matrix):
    factors = invariant_factors(matrix)
    return len(factors), [f for f in factors if f > 1]
