"""Shared construction helpers and independent oracles for the test suite."""
import functools
import itertools
from types import SimpleNamespace

import numpy as np

from conformal_holonomy import cartan, holonomy, riemannian
from conformal_holonomy.lie_algebra import (assert_compact_semisimple, catalog,
                                            orthonormal_frame, transferred_bracket)

ACCEPTANCE_SET = ("so(3)", "so(4)", "so(5)", "su(3)", "so(3)+so(3)+so(3)")


def build(name, frame=None):
    alg = catalog(name)
    B = assert_compact_semisimple(alg)
    frame = frame or orthonormal_frame(B)
    rho = transferred_bracket(alg, frame)
    gamma = cartan.normal_connection(rho)
    kappa = cartan.connection_curvature(gamma, rho)
    return SimpleNamespace(name=name, alg=alg, B=B, frame=frame, rho=rho, gamma=gamma,
                           kappa=kappa, n=alg.dim)


@functools.lru_cache(maxsize=None)
def pipeline(name):
    p = build(name)
    p.metric = riemannian.metric_tensors(p.rho)
    p.R = riemannian.riemann(p.rho)
    p.hol = holonomy.conformal_holonomy(p.gamma, p.kappa)
    return p


def so_matrix(m, i, j):
    """E_ij = e_i e_j^T - e_j e_i^T with 1-based indices."""
    E = np.zeros((m, m))
    E[i - 1, j - 1], E[j - 1, i - 1] = 1.0, -1.0
    return E


def brute_force_closure(mats, tol=1e-9):
    """Lie algebra generated by ``mats``: add all pairwise brackets until stable.

    Uses an SVD rank test, independent of the pivoted reduction.
    """
    shape = mats[0].shape
    scale = max(1.0, max(float(np.abs(m).max()) for m in mats))

    def orth(ms):
        if not ms:
            return []
        A = np.stack([m.ravel() for m in ms])
        _, s, vt = np.linalg.svd(A, full_matrices=False)
        keep = s > tol * scale
        return [v.reshape(shape) for v in vt[keep]]

    basis = orth(list(mats))
    while True:
        brackets = [X @ Y - Y @ X for X, Y in itertools.combinations(basis, 2)]
        grown = orth(basis + brackets)
        if len(grown) == len(basis):
            return len(basis)
        basis = grown


def random_orthogonal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def su_matrix_killing(mats, m):
    """Killing form of su(m) from the trace formula B(X, Y) = 2m Re tr(XY)."""
    return np.array([[2 * m * np.trace(a @ b).real for b in mats] for a in mats])
