"""Normal conformal Cartan connection of a bi-invariant metric.

Everything is evaluated at one point of the trivialized parabolic bundle,
so a connection is a linear map ``gamma = gamma_0 + gamma_1`` from
``m_{-1}`` into ``p = co(n) + m_1``, stored per basis vector.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .lie_algebra import TransferredBracket
from .mobius import (embed_m1, embed_m_minus1, embed_p0, m1_part, m_minus1_part,
                     p0_rotation_part, p0_scale_part)


def normal_lambda(n):
    """Coefficient of ``gamma_1(a) = lambda a*`` for the normal connection."""
    return -1.0 / (8.0 * (n - 1))


@dataclass(frozen=True, eq=False)
class ConnectionForm:
    """``gamma0[i]`` is the so(n) matrix gamma_0(e_i); ``gamma1[i]`` the covector gamma_1(e_i)."""

    gamma0: np.ndarray
    gamma1: np.ndarray

    def __post_init__(self):
        g0 = np.array(self.gamma0, dtype=float)
        g1 = np.array(self.gamma1, dtype=float)
        n = g1.shape[0]
        if g0.shape != (n, n, n) or g1.shape != (n, n):
            raise InputError(f"inconsistent connection shapes {g0.shape}, {g1.shape}")
        if not np.array_equal(g0, -g0.transpose(0, 2, 1)):
            raise InputError("gamma_0 values must be antisymmetric matrices")
        g0.setflags(write=False)
        g1.setflags(write=False)
        object.__setattr__(self, "gamma0", g0)
        object.__setattr__(self, "gamma1", g1)

    @property
    def n(self):
        return self.gamma1.shape[0]

    def images(self):
        """``(id + gamma)(e_i)`` as so(1,n+1) matrices, shape ``(n, n+2, n+2)``."""
        eye = np.eye(self.n)
        return np.stack([embed_m_minus1(eye[i]) + embed_p0(self.gamma0[i]) + embed_m1(self.gamma1[i])
                         for i in range(self.n)])

    def with_gamma0(self, gamma0):
        return ConnectionForm(gamma0, self.gamma1)

    def with_gamma1(self, gamma1):
        return ConnectionForm(self.gamma0, gamma1)


def normal_connection(rho: TransferredBracket) -> ConnectionForm:
    """``gamma_nor(a) = 1/2 rho(a, .) - a* / (8(n-1))``."""
    n = rho.dim
    if n < 3:
        raise InputError(f"the conformal setting needs n >= 3, got n = {n}")
    ad = rho.ad_matrices()
    # ad is skew only up to roundoff in a non-diagonal frame; keep the so(n) part
    gamma0 = 0.25 * (ad - ad.transpose(0, 2, 1))
    gamma1 = normal_lambda(n) * np.eye(n)
    return ConnectionForm(gamma0, gamma1)


@dataclass(frozen=True, eq=False)
class CurvatureFunction:
    """``kappa[i, j]`` is the so(1,n+1) matrix kappa(e_i, e_j); antisymmetric in (i, j)."""

    kappa: np.ndarray

    @property
    def n(self):
        return self.kappa.shape[0]

    @property
    def minus1(self):
        return m_minus1_part(self.kappa)

    @property
    def rotation(self):
        return p0_rotation_part(self.kappa)

    @property
    def scale(self):
        return p0_scale_part(self.kappa)

    @property
    def plus1(self):
        return m1_part(self.kappa)

    def max_abs(self):
        return float(np.abs(self.kappa).max()) if self.kappa.size else 0.0

    def values(self):
        """The curvature values kappa(e_i, e_j) for ``i < j``."""
        return [self.kappa[i, j] for i, j in itertools.combinations(range(self.n), 2)]


def connection_curvature(gamma: ConnectionForm, rho: TransferredBracket) -> CurvatureFunction:
    """``kappa(a,b) = -(id+gamma)(rho(a,b)) + [(id+gamma)a, (id+gamma)b]``.

    Each pair is computed on its own (no accumulation across pairs), the
    lower triangle is the exact mirror.
    """
    n = gamma.n
    if rho.dim != n:
        raise InputError(f"connection on R^{n} but bracket on R^{rho.dim}")
    G = gamma.images()
    N = n + 2
    kappa = np.zeros((n, n, N, N))
    for i, j in itertools.combinations(range(n), 2):
        lifted = np.tensordot(rho.r[i, j], G, axes=1)
        k = -lifted + (G[i] @ G[j] - G[j] @ G[i])
        kappa[i, j] = k
        kappa[j, i] = -k
    return CurvatureFunction(kappa)


def torsion_residual(gamma: ConnectionForm, rho: TransferredBracket) -> float:
    """max over i<j of |rho(e_i,e_j) + gamma_0(e_j) e_i - gamma_0(e_i) e_j|."""
    g0 = gamma.gamma0
    # g0[i] @ e_j = g0[i][:, j]
    applied = g0.transpose(0, 2, 1)  # applied[i, j] = gamma_0(e_i) e_j
    T = rho.r + applied.transpose(1, 0, 2) - applied
    return float(np.abs(T).max())


def trace_free_defect(kappa: CurvatureFunction) -> np.ndarray:
    """``tr kappa_0 (a, b) = sum_i <kappa_0(e_i, a) b, e_i>``, shape ``(n, n)``.

    The p_0 part acts on m_{-1} by ``A b + s b`` (rotation plus scale).
    """
    rot = kappa.rotation  # rot[i, a] is an n x n matrix
    s = kappa.scale
    return np.einsum("iaib->ab", rot) + s.T


def trace_free_residual(kappa: CurvatureFunction) -> float:
    return float(np.abs(trace_free_defect(kappa)).max())


def _torsion_bracket(gamma0):
    """``rho_gamma(e_i, e_j) = -gamma_0(e_j) e_i + gamma_0(e_i) e_j`` as ``r[i, j, :]``."""
    applied = gamma0.transpose(0, 2, 1)
    return applied - applied.transpose(1, 0, 2)


def jacobi_gamma0_residual(gamma0) -> float:
    """Cyclic sum of ``(gamma_0(rho_gamma(e_i,e_j)) - [gamma_0 e_i, gamma_0 e_j]) e_k``."""
    g0 = np.asarray(gamma0, dtype=float)
    r = _torsion_bracket(g0)
    lifted = np.einsum("ijm,mab->ijab", r, g0)
    comm = np.einsum("iac,jcb->ijab", g0, g0)
    comm = comm - comm.transpose(1, 0, 2, 3)
    D = lifted - comm
    # t[i, j, k] = D[i, j] @ e_k
    t = D.transpose(0, 1, 3, 2)
    cyc = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    return float(np.abs(cyc).max())


def normal_extension_traces(gamma: ConnectionForm):
    """The three traces of the normal-extendibility condition, each ``(n, n)``.

    ``lhs(a,b) = sum_i ([e_i, gamma_1 a] + [gamma_1 e_i, a])(b)(e_i*)``,
    ``first(a,b) = sum_i gamma_0([e_i, gamma_0 a] + [gamma_0 e_i, a])(b)(e_i*)``,
    ``second(a,b) = sum_i [gamma_0 e_i, gamma_0 a](b)(e_i*)``; the condition
    reads ``lhs = first - second``.
    """
    n = gamma.n
    eye = np.eye(n)
    E = np.stack([embed_m_minus1(eye[i]) for i in range(n)])
    Ga1 = np.stack([embed_m1(gamma.gamma1[i]) for i in range(n)])
    P = np.zeros((n, n, n + 2, n + 2))
    for i in range(n):
        for a in range(n):
            P[i, a] = (E[i] @ Ga1[a] - Ga1[a] @ E[i]) + (Ga1[i] @ E[a] - E[a] @ Ga1[i])
    lhs = np.einsum("iaib->ab", p0_rotation_part(P)) + p0_scale_part(P).T

    g0 = gamma.gamma0
    r = _torsion_bracket(g0)  # r[i, a] = [e_i, g0 a] + [g0 e_i, a]
    first = np.einsum("iaib->ab", np.einsum("iam,mxy->iaxy", r, g0))
    cm = np.einsum("ixz,azy->iaxy", g0, g0) - np.einsum("axz,izy->iaxy", g0, g0)
    second = np.einsum("iaib->ab", cm)
    return lhs, first, second


def normal_extension_residual(gamma: ConnectionForm) -> float:
    lhs, first, second = normal_extension_traces(gamma)
    return float(np.abs(lhs - (first - second)).max())


def derivation_residual(gamma: ConnectionForm, rho: TransferredBracket) -> float:
    """max |gamma_0(x) rho(a,b) - rho(gamma_0(x) a, b) - rho(a, gamma_0(x) b)|."""
    g0 = gamma.gamma0
    r = rho.r
    lhs = np.einsum("xkm,abm->xabk", g0, r)
    ga = np.einsum("xma,mbk->xabk", g0, r)   # rho(g0(x) e_a, e_b)
    gb = np.einsum("xmb,amk->xabk", g0, r)   # rho(e_a, g0(x) e_b)
    return float(np.abs(lhs - ga - gb).max())


def gamma0_rank(gamma: ConnectionForm, tol=1e-9) -> int:
    flat = gamma.gamma0.reshape(gamma.n, -1)
    s = np.linalg.svd(flat, compute_uv=False)
    return int((s > tol * max(1.0, s.max())).sum())


def riemann_relation_residual(gamma: ConnectionForm, rho: TransferredBracket,
                              kappa: CurvatureFunction) -> float:
    """Compare ``kappa_0(a,b) - ([a, gamma_1 b] + [gamma_1 a, b])`` with
    ``-gamma_0(rho(a,b)) + [gamma_0 a, gamma_0 b]`` on the p_0 block."""
    n = gamma.n
    eye = np.eye(n)
    E = np.stack([embed_m_minus1(eye[i]) for i in range(n)])
    Ga1 = np.stack([embed_m1(gamma.gamma1[i]) for i in range(n)])
    g0 = gamma.gamma0
    worst = 0.0
    for a, b in itertools.combinations(range(n), 2):
        corr = (E[a] @ Ga1[b] - Ga1[b] @ E[a]) + (Ga1[a] @ E[b] - E[b] @ Ga1[a])
        left = kappa.kappa[a, b] - corr
        right = -np.tensordot(rho.r[a, b], g0, axes=1) + (g0[a] @ g0[b] - g0[b] @ g0[a])
        worst = max(worst,
                    float(np.abs(p0_rotation_part(left) - right).max()),
                    abs(float(p0_scale_part(left))))
    return worst
