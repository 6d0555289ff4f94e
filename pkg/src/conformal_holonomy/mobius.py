"""The flat model algebra so(1, n+1) and its |1|-grading.

Elements are plain ``(n+2, n+2)`` arrays.  Rows and columns are ordered
``x_0, x_1 .. x_n, x_{n+1}`` for the form ``2 x_0 x_{n+1} + sum x_i^2``.
The grading blocks are::

    m_{-1}:  [[0, 0, 0], [m, 0, 0], [0, -m^T, 0]]
    p_0:     [[-a, 0, 0], [0, A, 0], [0, 0, a]]
    m_1:     [[0, l, 0], [0, 0, -l^T], [0, 0, 0]]
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

MEMBERSHIP_TOL = 1e-12


def gram(n):
    J = np.zeros((n + 2, n + 2))
    J[0, -1] = J[-1, 0] = 1.0
    J[1:-1, 1:-1] = np.eye(n)
    return J


def tractor_norm(v):
    """``<v, v>_{1,n+1} = 2 v_0 v_{n+1} + sum v_i^2``."""
    v = np.asarray(v, dtype=float)
    return float(2.0 * v[0] * v[-1] + v[1:-1] @ v[1:-1])


def membership_residual(X):
    X = np.asarray(X, dtype=float)
    J = gram(X.shape[0] - 2)
    return float(np.abs(X.T @ J + J @ X).max())


def embed_m_minus1(m):
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    X = np.zeros((n + 2, n + 2))
    X[1:-1, 0] = m
    X[-1, 1:-1] = -m
    return X


def embed_p0(A, a=0.0):
    A = np.asarray(A, dtype=float)
    if not np.array_equal(A, -A.T):
        raise InputError("rotation block of a p_0 element must be antisymmetric")
    n = A.shape[0]
    X = np.zeros((n + 2, n + 2))
    X[0, 0] = -a
    X[1:-1, 1:-1] = A
    X[-1, -1] = a
    return X


def embed_m1(l):
    l = np.asarray(l, dtype=float)
    n = l.shape[0]
    X = np.zeros((n + 2, n + 2))
    X[0, 1:-1] = l
    X[1:-1, -1] = -l
    return X


def dual_star(a):
    """``(sum a_i e_i)* = sum a_i e_i*``: same coordinates in the dual basis."""
    return np.array(a, dtype=float)


@dataclass(frozen=True, eq=False)
class GradedParts:
    m_minus1: np.ndarray
    p0_rotation: np.ndarray
    p0_scale: float
    m_1: np.ndarray

    def embed(self):
        return (embed_m_minus1(self.m_minus1) + embed_p0(self.p0_rotation, self.p0_scale)
                + embed_m1(self.m_1))


def grade_project(X, tol=MEMBERSHIP_TOL) -> GradedParts:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] < 3:
        raise InputError(f"expected a square (n+2)x(n+2) matrix, got shape {X.shape}")
    res = membership_residual(X)
    if res > tol * max(1.0, float(np.abs(X).max())):
        raise InputError(f"matrix is not in so(1,n+1) (residual {res:.3e})")
    return GradedParts(X[1:-1, 0].copy(), X[1:-1, 1:-1].copy(), float(X[-1, -1]), X[0, 1:-1].copy())


def mobius_bracket(X, Y):
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.shape != Y.shape:
        raise InputError(f"bracket of elements of different size: {X.shape} vs {Y.shape}")
    return X @ Y - Y @ X


def m_minus1_part(X):
    return np.asarray(X)[..., 1:-1, 0]


def m1_part(X):
    return np.asarray(X)[..., 0, 1:-1]


def p0_rotation_part(X):
    return np.asarray(X)[..., 1:-1, 1:-1]


def p0_scale_part(X):
    return np.asarray(X)[..., -1, -1]


def p0_act(P, v):
    """Action of the p_0 part of ``P`` on ``v`` in m_{-1}: ``A v + a v``."""
    return p0_rotation_part(P) @ v + p0_scale_part(P) * v
