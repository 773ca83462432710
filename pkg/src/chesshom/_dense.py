"""Dense integer diagonalization for the non-unit remainder of an elimination.

Entries are Python ints held in numpy object arrays so row and column
operations are vectorized without overflow.
"""

from __future__ import annotations

from math import gcd

import numpy as np


def diagonalize(rows, track=None):
    """Reduce an integer matrix to generalized diagonal form.

    ``rows`` is a 2-D sequence of ints.  ``track`` is an optional sequence of
    column vectors (one per tracked vector, each of length ``len(rows)``)
    that receive every row operation, so on return they are expressed in the
    coordinates where the column lattice is ``sum(d_k * e_{pivot_row_k})``.

    Returns ``(diag, pivot_rows, tracked)`` where ``diag[k]`` sits at row
    ``pivot_rows[k]`` (positions refer to the final row order, which is also
    the order of ``tracked``).
    """
    A = np.array(rows, dtype=object)
    if A.ndim != 2:
        A = A.reshape(len(rows), -1)
    m, n = A.shape
    Z = None
    if track is not None and len(track):
        Z = np.array(track, dtype=object).T.reshape(m, -1).copy()
    diag: list[int] = []
    t = 0
    while t < m and t < n:
        block = A[t:, t:]
        mask = block != 0
        if not mask.any():
            break
        absb = np.where(mask, np.abs(block), 0)
        # smallest nonzero magnitude
        flat = absb[mask]
        amin = min(flat)
        hits = np.argwhere(absb == amin)
        i, j = hits[0]
        _swap_rows(A, Z, t, t + i)
        _swap_cols(A, t, t + j)
        while True:
            a = A[t, t]
            col = A[t + 1:, t]
            if col.size and (col != 0).any():
                q = col // a
                A[t + 1:, :] -= np.multiply.outer(q, A[t, :])
                if Z is not None:
                    Z[t + 1:, :] -= np.multiply.outer(q, Z[t, :])
            row = A[t, t + 1:]
            if row.size and (row != 0).any():
                q = row // a
                A[:, t + 1:] -= np.multiply.outer(A[:, t], q)
            rest_c = A[t + 1:, t]
            rest_r = A[t, t + 1:]
            nzc = np.nonzero(rest_c)[0]
            nzr = np.nonzero(rest_r)[0]
            if not len(nzc) and not len(nzr):
                break
            # a leftover is smaller than the pivot; move the smallest into place
            best = None
            for k in nzc:
                v = abs(rest_c[k])
                if best is None or v < best[0]:
                    best = (v, "r", k)
            for k in nzr:
                v = abs(rest_r[k])
                if best is None or v < best[0]:
                    best = (v, "c", k)
            if best[1] == "r":
                _swap_rows(A, Z, t, t + 1 + best[2])
            else:
                _swap_cols(A, t, t + 1 + best[2])
        diag.append(A[t, t])
        t += 1
    tracked = None if Z is None else [list(Z[:, k]) for k in range(Z.shape[1])]
    return [abs(int(x)) for x in diag], list(range(len(diag))), tracked


def _swap_rows(A, Z, i, j):
    if i != j:
        A[[i, j], :] = A[[j, i], :]
        if Z is not None:
            Z[[i, j], :] = Z[[j, i], :]


def _swap_cols(A, i, j):
    if i != j:
        A[:, [i, j]] = A[:, [j, i]]


def invariant_factors(diag) -> list[int]:
    """Invariant factors ``d1 | d2 | ...`` of a diagonal matrix (zeros dropped)."""
    ds = sorted(abs(int(x)) for x in diag if x)
    k = len(ds)
    for i in range(k):
        for j in range(i + 1, k):
            a, b = ds[i], ds[j]
            if b % a:
                g = gcd(a, b)
                ds[i], ds[j] = g, a // g * b
    return sorted(ds)


def smith_with_transforms(rows):
    """Full Smith form ``U A V = D`` with unimodular ``U``, ``V`` and ``V^-1``.

    Pure Python ints; intended for the small matrices used when explicit
    homology coordinates are needed.  Returns ``(D, U, V, Vinv)`` as lists of
    lists with ``D`` in Smith form (divisibility chain on the diagonal).
    """
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    W = [[int(i == j) for j in range(n)] for i in range(n)]  # V^-1

    def rowop(i, k, q):  # row_i -= q row_k
        if q:
            Ai, Ak = A[i], A[k]
            for c in range(n):
                if Ak[c]:
                    Ai[c] -= q * Ak[c]
            Ui, Uk = U[i], U[k]
            for c in range(m):
                if Uk[c]:
                    Ui[c] -= q * Uk[c]

    def colop(j, k, q):  # col_j -= q col_k
        if q:
            for r in range(m):
                if A[r][k]:
                    A[r][j] -= q * A[r][k]
            for r in range(n):
                if V[r][k]:
                    V[r][j] -= q * V[r][k]
            # V^-1: row_k += q row_j
            Wj, Wk = W[j], W[k]
            for c in range(n):
                if Wj[c]:
                    Wk[c] += q * Wj[c]

    def rowswap(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def colswap(j, k):
        for r in range(m):
            A[r][j], A[r][k] = A[r][k], A[r][j]
        for r in range(n):
            V[r][j], V[r][k] = V[r][k], V[r][j]
        W[j], W[k] = W[k], W[j]

    def rowneg(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        rowswap(t, i)
        colswap(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    rowop(i, t, A[i][t] // A[t][t])
            for j in range(t + 1, n):
                if A[t][j]:
                    colop(j, t, A[t][j] // A[t][t])
            best = None
            for i in range(t + 1, m):
                if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                    best = (abs(A[i][t]), "r", i)
            for j in range(t + 1, n):
                if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                    best = (abs(A[t][j]), "c", j)
            if best is not None:
                done = False
                if best[1] == "r":
                    rowswap(t, best[2])
                else:
                    colswap(t, best[2])
                continue
            # divisibility: pull in a row whose entries the pivot does not divide
            a = A[t][t]
            bad = None
            for i in range(t + 1, m):
                if any(A[i][j] % a for j in range(t + 1, n)):
                    bad = i
                    break
            if bad is not None:
                rowop(t, bad, -1)  # row_t += row_bad
                done = False
                continue
            if done:
                break
        if A[t][t] < 0:
            rowneg(t)
        t += 1
    return A, U, V, W
