"""Dense exact linear algebra on numpy object arrays.

Every function takes the scalar field ``F`` explicitly; ``F`` only needs
``one`` and ``zero`` attributes whose elements support ``+ - * /``.
Matrices keep their shape even when a dimension is zero, which is the main
reason for using object arrays instead of nested lists.
"""

from __future__ import annotations

import numpy as np


def zeros(rows: int, cols: int, F) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(F.zero)
    return out


def identity(n: int, F) -> np.ndarray:
    out = zeros(n, n, F)
    for k in range(n):
        out[k, k] = F.one
    return out


def as_matrix(rows, F, shape=None) -> np.ndarray:
    """Coerce nested sequences to an object matrix of field scalars."""
    if isinstance(rows, np.ndarray) and rows.dtype == object and rows.ndim == 2:
        return rows
    rows = list(rows)
    if shape is None:
        ncols = len(rows[0]) if rows else 0
        shape = (len(rows), ncols)
    rows = [list(row) for row in rows]
    if len(rows) != shape[0] or any(len(row) != shape[1] for row in rows):
        raise ValueError(f"expected a {shape[0]}x{shape[1]} matrix")
    out = zeros(*shape, F)
    for r, row in enumerate(rows):
        for c, x in enumerate(row):
            out[r, c] = F.coerce(x)
    return out


def column(vec, F) -> np.ndarray:
    v = list(vec)
    out = zeros(len(v), 1, F)
    for k, x in enumerate(v):
        out[k, 0] = x
    return out


def vector(vec, F) -> np.ndarray:
    v = list(vec)
    out = np.empty(len(v), dtype=object)
    out.fill(F.zero)
    for k, x in enumerate(v):
        out[k] = x
    return out


def matmul(A: np.ndarray, B: np.ndarray, F) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[1] == 0 or A.shape[0] == 0 or B.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1], F)
    return A @ B


def chain(*mats, F) -> np.ndarray:
    out = mats[0]
    for M in mats[1:]:
        out = matmul(out, M, F)
    return out


def is_zero(A: np.ndarray) -> bool:
    return not any(bool(x) for x in A.flat)


def hstack(blocks, rows: int, F) -> np.ndarray:
    blocks = [b for b in blocks]
    if not blocks:
        return zeros(rows, 0, F)
    return np.concatenate(blocks, axis=1) if len(blocks) > 1 else blocks[0].copy()


def vstack(blocks, cols: int, F) -> np.ndarray:
    blocks = [b for b in blocks]
    if not blocks:
        return zeros(0, cols, F)
    return np.concatenate(blocks, axis=0) if len(blocks) > 1 else blocks[0].copy()


def block_diag(blocks, F) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols, F)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def kron(A: np.ndarray, B: np.ndarray, F) -> np.ndarray:
    ra, ca = A.shape
    rb, cb = B.shape
    out = zeros(ra * rb, ca * cb, F)
    for i in range(ra):
        for j in range(ca):
            a = A[i, j]
            if a:
                out[i * rb:(i + 1) * rb, j * cb:(j + 1) * cb] = a * B
    return out


def kron_eye(n: int, K: np.ndarray, F) -> np.ndarray:
    """I_n (x) K as an explicit block-diagonal matrix."""
    return block_diag([K] * n, F)


def mat_power(M: np.ndarray, k: int, F) -> np.ndarray:
    out = identity(M.shape[0], F)
    for _ in range(k):
        out = matmul(out, M, F)
    return out


def poly_eval(coeffs, M: np.ndarray, F) -> np.ndarray:
    """Evaluate sum_k coeffs[k] * M**k (constant term first), Horner style."""
    n = M.shape[0]
    out = zeros(n, n, F)
    for c in reversed(list(coeffs)):
        out = matmul(out, M, F)
        if c:
            for k in range(n):
                out[k, k] = out[k, k] + c
    return out


def rref(A: np.ndarray, F):
    """Reduced row echelon form. Returns (R, pivots) with R of shape (rank, ncols)."""
    R = np.array(A, dtype=object, copy=True)
    nrows, ncols = R.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = None
        for k in range(r, nrows):
            if R[k, c]:
                p = k
                break
        if p is None:
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        inv = F.one / R[r, c]
        R[r, c:] = R[r, c:] * inv
        prow = R[r, c:]
        for k in range(nrows):
            if k != r:
                f = R[k, c]
                if f:
                    R[k, c:] = R[k, c:] - f * prow
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(A: np.ndarray, F) -> int:
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    return len(rref(A, F)[1])


def nullspace(A: np.ndarray, F) -> np.ndarray:
    """Basis of {x : A x = 0} as the columns of the returned matrix."""
    ncols = A.shape[1]
    R, pivots = rref(A, F) if A.shape[0] else (zeros(0, ncols, F), [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = zeros(ncols, len(free), F)
    for t, fc in enumerate(free):
        out[fc, t] = F.one
        for r, pc in enumerate(pivots):
            v = R[r, fc]
            if v:
                out[pc, t] = -v
    return out


def inverse(A: np.ndarray, F) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, pivots = rref(np.concatenate([A, identity(n, F)], axis=1), F)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return R[:n, n:].copy()


def solve(A: np.ndarray, b: np.ndarray, F):
    """Solve A x = b for a matrix right-hand side.

    Returns (particular, kernel) or None if inconsistent; ``particular`` has
    the shape of ``x`` and ``kernel`` holds a nullspace basis in its columns.
    """
    nrows, ncols = A.shape
    rhs = b.shape[1]
    R, pivots = rref(np.concatenate([A, b], axis=1), F) if nrows else (zeros(0, ncols + rhs, F), [])
    if any(p >= ncols for p in pivots):
        return None
    x = zeros(ncols, rhs, F)
    for r, pc in enumerate(pivots):
        x[pc, :] = R[r, ncols:]
    return x, nullspace(A, F)


def left_inverse(A: np.ndarray, F) -> np.ndarray:
    """Some L with L A = I, for A of full column rank."""
    m, n = A.shape
    if n == 0:
        return zeros(0, m, F)
    # Rows of A indexed by the pivots of A^T form an invertible n x n block.
    _, pivots = rref(A.T.copy(), F)
    if len(pivots) != n:
        raise ZeroDivisionError("matrix does not have full column rank")
    sub = A[pivots, :]
    inv = inverse(sub, F)
    out = zeros(n, m, F)
    out[:, pivots] = inv
    return out


class EchelonSpace:
    """Incrementally grown subspace of F^n, kept in reduced echelon form."""

    def __init__(self, n: int, F):
        self.n = n
        self.F = F
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []
        self.basis: list[np.ndarray] = []  # the vectors as originally added

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v) -> np.ndarray:
        w = np.array(v, dtype=object, copy=True)
        for row, p in zip(self.rows, self.pivots):
            f = w[p]
            if f:
                w = w - f * row
        return w

    def contains(self, v) -> bool:
        return not any(bool(x) for x in self.reduce(v))

    def add(self, v) -> bool:
        w = self.reduce(v)
        nz = [k for k in range(self.n) if w[k]]
        if not nz:
            return False
        p = nz[0]
        w = w * (self.F.one / w[p])
        for k, row in enumerate(self.rows):
            f = row[p]
            if f:
                self.rows[k] = row - f * w
        self.rows.append(w)
        self.pivots.append(p)
        self.basis.append(np.array(v, dtype=object, copy=True))
        return True

    def basis_matrix(self) -> np.ndarray:
        """Original added vectors as columns."""
        out = zeros(self.n, len(self.basis), self.F)
        for k, v in enumerate(self.basis):
            out[:, k] = v
        return out
