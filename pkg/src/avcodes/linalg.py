"""Dense Gaussian elimination over GF(q) on int64 arrays."""
from __future__ import annotations

import numpy as np

from .gf import Field


def row_reduce(field: Field, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` and its pivot columns."""
    M = np.array(A, dtype=np.int64, copy=True)
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if not len(nz):
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = field.inv(int(M[r, c]))
        if inv != 1:
            M[r, c:] = field.vmul(M[r, c:], inv)
        col = M[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if len(hit):
            M[np.ix_(hit, np.arange(c, cols))] = field.vsub(
                M[hit, c:], field.vmul(col[hit, None], M[r, None, c:])
            )
        pivots.append(c)
        r += 1
    return M, pivots


def rank(field: Field, A: np.ndarray) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(row_reduce(field, A)[1])


def kernel_vector(field: Field, A: np.ndarray) -> np.ndarray | None:
    """A nonzero solution of ``A x = 0`` built from the first free column, or ``None``."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    R, pivots = row_reduce(field, A)
    pivot_set = set(pivots)
    free = next((c for c in range(cols) if c not in pivot_set), None)
    if free is None:
        return None
    x = np.zeros(cols, dtype=np.int64)
    x[free] = 1
    for row, c in enumerate(pivots):
        x[c] = field.neg(int(R[row, free]))
    return x


def matvec(field: Field, A: np.ndarray, x: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    x = np.asarray(x, dtype=np.int64)
    if field.e == 1:
        # products stay below 2^63 for q <= 2^16 only when accumulated with care
        return (A % field.p * x % field.p).sum(axis=1) % field.p
    out = np.zeros(A.shape[0], dtype=np.int64)
    for j in np.nonzero(x)[0]:
        out = field.vadd(out, field.vmul(A[:, j], int(x[j])))
    return out
