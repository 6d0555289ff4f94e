"""Metric curvature of a bi-invariant metric, in the orthonormal frame.

The metric is the identity, so vectors and covectors share coordinates.
Curvature operators are stored as ``R[i, j]`` = matrix of ``z -> R(e_i, e_j) z``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .lie_algebra import TransferredBracket

# The Schouten tensor L used here is minus the usual one, so in the operator
# convention of ``kulkarni_nomizu`` the trace-free part is R + g*L.  The sign
# was fixed once against kappa_0 (see ``weyl_cross_check``) and is frozen.
WEYL_KN_SIGN = 1.0


@dataclass(frozen=True, eq=False)
class CurvatureOperator:
    R: np.ndarray

    @property
    def n(self):
        return self.R.shape[0]

    def values(self):
        return [self.R[i, j] for i, j in itertools.combinations(range(self.n), 2)]

    def apply(self, x, y, z):
        return np.einsum("i,j,ijab,b->a", x, y, self.R, z)


@dataclass(frozen=True, eq=False)
class MetricTensors:
    ric: np.ndarray
    scal: float
    L: np.ndarray
    W: CurvatureOperator
    C: np.ndarray


def levi_civita(rho: TransferredBracket, x, y):
    return 0.5 * rho(x, y)


def riemann(rho: TransferredBracket) -> CurvatureOperator:
    """``R(x, y) z = -1/4 [[x, y], z]``."""
    ad = rho.ad_matrices()
    R = -0.25 * np.einsum("ijm,mab->ijab", rho.r, ad)
    return CurvatureOperator(R)


def sectional(rho: TransferredBracket, x, y, tol=1e-10) -> float:
    """Sectional curvature of the plane of orthonormal ``x, y``: ``1/4 |[x, y]|^2``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if max(abs(x @ x - 1.0), abs(y @ y - 1.0), abs(x @ y)) > tol:
        raise InputError("sectional curvature needs an orthonormal pair")
    v = rho(x, y)
    return 0.25 * float(v @ v)


def sectional_range(rho: TransferredBracket):
    """(min, max) sectional curvature over the coordinate planes."""
    eye = np.eye(rho.dim)
    vals = [sectional(rho, eye[i], eye[j]) for i, j in itertools.combinations(range(rho.dim), 2)]
    return min(vals), max(vals)


def ricci(R: CurvatureOperator):
    """``Ric(a, b) = sum_i <R(e_i, a) b, e_i>``."""
    return np.einsum("iaib->ab", R.R)


def kulkarni_nomizu(L):
    """Operator form of g*L: ``(x,y)z -> <y,z>Lx - <x,z>Ly + L(y,z)x - L(x,z)y``."""
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    eye = np.eye(n)
    # K[i, j, a, b] = component a of (g*L)(e_i, e_j) e_b
    K = (np.einsum("jb,ai->ijab", eye, L) - np.einsum("ib,aj->ijab", eye, L)
         + np.einsum("jb,ai->ijab", L, eye) - np.einsum("ib,aj->ijab", L, eye))
    return K


def schouten(ric, scal):
    n = ric.shape[0]
    if n < 3:
        raise InputError("the Schouten tensor needs n >= 3")
    return (scal / (2.0 * (n - 1)) * np.eye(n) - ric) / (n - 2)


def cotton_york(rho: TransferredBracket, L):
    """``C[i, j] = (nabla_{e_i} L)(e_j) - (nabla_{e_j} L)(e_i)`` for left-invariant fields."""
    n = rho.dim
    ad = rho.ad_matrices()
    # (nabla_x L)(y) = 1/2 rho(x, L y) - L(1/2 rho(x, y))
    nabla = 0.5 * (np.einsum("xab,bj->xja", ad, L) - np.einsum("ab,xjb->xja", L, rho.r))
    C = nabla - nabla.transpose(1, 0, 2)
    assert C.shape == (n, n, n)
    return C


def metric_tensors(rho: TransferredBracket) -> MetricTensors:
    R = riemann(rho)
    ric = ricci(R)
    scal = float(np.trace(ric))
    L = schouten(ric, scal)
    W = CurvatureOperator(R.R + WEYL_KN_SIGN * kulkarni_nomizu(L))
    C = cotton_york(rho, L)
    return MetricTensors(ric, scal, L, W, C)


def einstein_residual(ric, scal):
    n = ric.shape[0]
    return float(np.abs(ric - scal / n * np.eye(n)).max())


def weyl_trace_residual(W: CurvatureOperator) -> float:
    return float(np.abs(np.einsum("iaib->ab", W.R)).max())


def pair_antisymmetry_residual(op: CurvatureOperator) -> float:
    return float(np.abs(op.R + op.R.transpose(1, 0, 2, 3)).max())


def metric_antisymmetry_residual(op: CurvatureOperator) -> float:
    return float(np.abs(op.R + op.R.transpose(0, 1, 3, 2)).max())


def bianchi_residual(op: CurvatureOperator) -> float:
    """max |R(e_i,e_j)e_k + R(e_j,e_k)e_i + R(e_k,e_i)e_j|."""
    t = op.R.transpose(0, 1, 3, 2)  # t[i, j, k] = R(e_i, e_j) e_k
    cyc = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    return float(np.abs(cyc).max())


def weyl_cross_check(kappa, W: CurvatureOperator) -> float:
    """max |kappa_0 rotation block - W| over all pairs."""
    if kappa.n != W.n:
        raise InputError("curvature function and Weyl tensor of different dimension")
    return float(np.abs(kappa.rotation - W.R).max())
