"""Dense exact linear algebra over F_p on int64 residue arrays.

All routines take residues in ``[0, p)`` and never mutate their inputs.
Pivoting always takes the first nonzero entry of the current column, so
results are deterministic.
"""

from __future__ import annotations

import numpy as np


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    A = np.array(mat, dtype=np.int64) % p
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        if inv != 1:
            A[r, c:] = (A[r, c:] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            A[others, c:] = (A[others, c:] - np.outer(col[others], A[r, c:])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank(mat: np.ndarray, p: int) -> int:
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0
    # elimination cost is driven by the pivot loop; put the short side first
    if mat.shape[0] > mat.shape[1]:
        mat = mat.T
    return len(rref(mat, p)[1])


def nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of ``{v : mat @ v = 0}``.

    The basis is the standard one read off the reduced echelon form: at the
    free columns it restricts to the identity matrix.
    """
    mat = np.asarray(mat)
    ncols = mat.shape[1]
    if mat.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    R, pivots = rref(mat, p)
    free = [j for j in range(ncols) if j not in set(pivots)]
    K = np.zeros((ncols, len(free)), dtype=np.int64)
    if free:
        K[free, np.arange(len(free))] = 1
        if pivots:
            K[pivots, :] = (-R[: len(pivots)][:, free]) % p
    return K


def free_columns(mat: np.ndarray, p: int) -> list[int]:
    """Non-pivot columns; the null-space basis is the identity on them."""
    ncols = mat.shape[1]
    if mat.shape[0] == 0:
        return list(range(ncols))
    pivots = set(rref(mat, p)[1])
    return [j for j in range(ncols) if j not in pivots]


def solve(mat: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of ``mat @ x = rhs`` (free variables zero), or ``None``."""
    mat = np.asarray(mat, dtype=np.int64)
    rhs = np.asarray(rhs, dtype=np.int64).reshape(mat.shape[0], -1)
    ncols = mat.shape[1]
    R, pivots = rref(np.hstack([mat, rhs]), p)
    if any(c >= ncols for c in pivots):
        return None
    x = np.zeros((ncols, rhs.shape[1]), dtype=np.int64)
    x[pivots] = R[: len(pivots), ncols:]
    return x[:, 0] if x.shape[1] == 1 else x


def independent_columns(mat: np.ndarray, p: int, start: int = 0) -> list[int]:
    """Indices ``>= start`` of the columns chosen greedily (left to right) to
    extend a basis of the span of the first ``start`` columns."""
    mat = np.asarray(mat)
    if mat.shape[1] == 0:
        return []
    return [c for c in rref(mat, p)[1] if c >= start]


def column_basis(mat: np.ndarray, p: int) -> np.ndarray:
    """A subset of the columns of ``mat`` forming a basis of its span."""
    return mat[:, independent_columns(mat, p)]


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product mod p, splitting the inner dimension so partial sums fit int64."""
    k = a.shape[-1]
    step = max(1, (2**63 - 1) // max(1, (p - 1) ** 2) - 1)
    if k <= step:
        return (a @ b) % p
    out = 0
    for s in range(0, k, step):
        out = (out + (a[..., s : s + step] @ b[s : s + step]) % p) % p
    return out


def inverse(mat: np.ndarray, p: int) -> np.ndarray:
    n = mat.shape[0]
    R, pivots = rref(np.hstack([mat, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]
