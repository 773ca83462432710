"""Dense linear algebra over Z/p on int64 numpy arrays (p small)."""

from __future__ import annotations

import numpy as np


def as_array(M, shape=None) -> np.ndarray:
    """SparseMatrix or nested list to a dense int64 array."""
    if hasattr(M, "columns"):
        A = np.zeros((M.nrows, M.ncols), dtype=np.int64)
        for j, col in enumerate(M.columns):
            for i, v in col.items():
                A[i, j] = v
        return A
    A = np.array(M, dtype=np.int64)
    if shape is not None:
        A = A.reshape(shape)
    return A


def rref(A: np.ndarray, p: int, ncols: int | None = None):
    """Reduced row echelon form; pivots are sought only among the first ``ncols`` columns."""
    A = np.array(A, dtype=np.int64) % p
    nrows = A.shape[0]
    limit = A.shape[1] if ncols is None else ncols
    piv: list[int] = []
    r = 0
    for c in range(limit):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if not len(nz):
            continue
        i = r + nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if len(rows):
            A[rows] = (A[rows] - np.outer(col[rows], A[r])) % p
        piv.append(c)
        r += 1
    return A, piv


def rank(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning ``{x : A x = 0}``."""
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    N = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        N[f, k] = 1
        for r, c in enumerate(piv):
            N[c, k] = (-R[r, f]) % p
    return N


def column_basis(A: np.ndarray, p: int) -> np.ndarray:
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=np.int64)
    _, piv = rref(A, p)
    return A[:, piv] % p


def left_inverse(Q: np.ndarray, p: int) -> np.ndarray:
    """``L`` with ``L Q = I`` for ``Q`` of full column rank."""
    n, k = Q.shape
    aug = np.concatenate([Q % p, np.eye(n, dtype=np.int64)], axis=1)
    R, piv = rref(aug, p, ncols=k)
    if len(piv) != k:
        raise ValueError("matrix does not have full column rank")
    return R[:k, k:]


class FieldHomology:
    """Homology of ``C_{d+1} -> C_d -> C_{d-1}`` over Z/p with explicit representatives.

    ``reps`` holds one cycle per basis class (as columns) and ``coords(z)``
    gives the class of a cycle ``z`` in that basis.
    """

    def __init__(self, down: np.ndarray, up: np.ndarray, p: int):
        self.p = p
        n = down.shape[1]
        Z = nullspace(down, p)
        B = column_basis(up, p)
        b = B.shape[1]
        Q0 = np.concatenate([B, Z], axis=1)
        if Q0.shape[1]:
            _, piv = rref(Q0, p)
            Q = Q0[:, piv]
        else:
            Q = np.zeros((n, 0), dtype=np.int64)
        self.reps = Q[:, b:]
        L = left_inverse(Q, p) if Q.shape[1] else np.zeros((0, n), dtype=np.int64)
        self._coord = L[b:]
        self.dim = self.reps.shape[1]

    def coords(self, z: np.ndarray) -> np.ndarray:
        return self._coord @ (np.asarray(z, dtype=np.int64) % self.p) % self.p
