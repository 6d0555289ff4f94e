"""Pivoted row reduction shared by span and nullspace computations."""
from __future__ import annotations

import numpy as np


def row_reduce(rows, threshold):
    """Reduced row echelon form with complete pivoting.

    At each step the largest remaining entry among unused columns becomes
    the pivot; elimination stops once it drops to ``threshold`` or below.
    Returns ``(basis_rows, pivot_columns)`` where each basis row carries a
    1 in its own pivot column and 0 in the other pivot columns.
    """
    A = np.array(rows, dtype=float)
    if A.ndim != 2:
        raise ValueError("row_reduce expects a 2-d array")
    m, k = A.shape
    free = np.ones(k, dtype=bool)
    pivots = []
    r = 0
    while r < m:
        block = np.abs(A[r:, free])
        if block.size == 0:
            break
        flat = int(np.argmax(block))
        i, jj = divmod(flat, block.shape[1])
        if block[i, jj] <= threshold:
            break
        col = int(np.flatnonzero(free)[jj])
        i += r
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] /= A[r, col]
        others = np.arange(m) != r
        A[others] -= np.outer(A[others, col], A[r])
        A[others, col] = 0.0
        free[col] = False
        pivots.append(col)
        r += 1
    return A[:r].copy(), pivots


def null_space(M, threshold):
    """Basis (as rows) of ``{v : M v = 0}`` from the same reduction."""
    M = np.asarray(M, dtype=float)
    k = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(k)
    R, pivots = row_reduce(M, threshold)
    free_cols = [c for c in range(k) if c not in set(pivots)]
    basis = np.zeros((len(free_cols), k))
    for row, f in enumerate(free_cols):
        basis[row, f] = 1.0
        for r, p in enumerate(pivots):
            basis[row, p] = -R[r, f]
    return basis
