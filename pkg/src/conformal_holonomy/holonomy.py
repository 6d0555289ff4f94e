"""Holonomy algebras by bracket closure of curvature values.

The conformal holonomy algebra is the fixed point of
``h -> h + [Lambda, h]`` seeded with the curvature values, where
``Lambda`` are the connection images ``(id + gamma)(e_i)``.  The same loop
with the Levi-Civita generators gives the Riemannian holonomy.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .cartan import ConnectionForm, CurvatureFunction
from .errors import ContractViolation, InputError, NoConvergence
from .lie_algebra import TransferredBracket
from .linalg import null_space, row_reduce
from .mobius import gram, membership_residual, tractor_norm
from .riemannian import CurvatureOperator

RANK_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MatrixSubspace:
    """Span of linearly independent square matrices.

    ``basis`` has shape ``(dim, N, N)``; ``history`` records the dimension
    after each closure round (empty for a plain span).
    """

    basis: np.ndarray
    shape: tuple
    threshold: float = 0.0
    history: tuple = field(default=())

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def size(self):
        return self.shape[0]

    @cached_property
    def _orthonormal(self):
        if self.dim == 0:
            return np.zeros((self.shape[0] * self.shape[1], 0))
        q, _ = np.linalg.qr(self.basis.reshape(self.dim, -1).T)
        return q

    def residuals(self, mats):
        """max-abs distance of each matrix in ``mats`` from the span."""
        X = np.asarray(mats, dtype=float).reshape(len(mats), -1).T
        Q = self._orthonormal
        return np.abs(X - Q @ (Q.T @ X)).max(axis=0)

    def residual(self, X):
        return float(self.residuals([X])[0])


def span_reduce(mats, tol=RANK_TOL, scale=None, shape=None) -> MatrixSubspace:
    """Independent basis of the span of ``mats``.

    A row survives when its pivot exceeds ``tol * scale``; ``scale``
    defaults to the largest absolute input entry.
    """
    mats = [np.asarray(m, dtype=float) for m in mats]
    if not mats:
        if shape is None:
            raise InputError("span of an empty list needs an explicit shape")
        return MatrixSubspace(np.zeros((0,) + tuple(shape)), tuple(shape))
    shape = mats[0].shape
    if any(m.shape != shape for m in mats):
        raise InputError("all matrices in a span must share one shape")
    rows = np.stack([m.ravel() for m in mats])
    if scale is None:
        scale = float(np.abs(rows).max())
    threshold = tol * scale
    basis, _ = row_reduce(rows, threshold)
    return MatrixSubspace(basis.reshape((-1,) + shape), shape, threshold)


def bracket_closure(seed, generators, tol=RANK_TOL, scale=None) -> MatrixSubspace:
    """Iterate ``h_{k+1} = span(h_k, [g, X] for g in generators, X in h_k)``.

    Only single brackets with the generators are added per round; closedness
    of the limit is checked separately (:func:`closure_residual`).
    """
    seed = [np.asarray(m, dtype=float) for m in seed]
    generators = [np.asarray(g, dtype=float) for g in generators]
    shape = (seed or generators)[0].shape
    if scale is None:
        entries = [np.abs(m).max() for m in seed + generators]
        scale = float(max(entries)) if entries else 1.0
    h = span_reduce(seed, tol, scale, shape)
    history = [h.dim]
    ambient = shape[0] * (shape[0] - 1) // 2
    for _ in range(ambient + 1):
        if h.dim == 0:
            break
        new = [g @ X - X @ g for g in generators for X in h.basis]
        nxt = span_reduce(list(h.basis) + new, tol, scale, shape)
        history.append(nxt.dim)
        if nxt.dim == h.dim:
            h = nxt
            break
        h = nxt
    else:
        raise NoConvergence(f"closure still growing after {ambient} rounds (dims {history})")
    return MatrixSubspace(h.basis, shape, h.threshold, tuple(history))


def closure_residual(sub: MatrixSubspace) -> float:
    """Largest distance of a basis bracket ``[X, Y]`` from the span."""
    if sub.dim < 2:
        return 0.0
    B = sub.basis
    i, j = np.triu_indices(sub.dim, k=1)
    comm = B[i] @ B[j] - B[j] @ B[i]
    return float(sub.residuals(comm).max())


def is_bracket_closed(sub: MatrixSubspace, tol=RANK_TOL) -> bool:
    return closure_residual(sub) <= tol * sub.size * max(1.0, float(np.abs(sub.basis).max(initial=0.0)))


def curvature_span(kappa: CurvatureFunction, tol=RANK_TOL, scale=1.0) -> MatrixSubspace:
    """The space q of curvature values."""
    N = kappa.n + 2
    return span_reduce(kappa.values(), tol, scale, (N, N))


def conformal_holonomy(gamma: ConnectionForm, kappa: CurvatureFunction, tol=RANK_TOL) -> MatrixSubspace:
    """hol(omega_nor) = q + [Lambda, q] + [Lambda, [Lambda, q]] + ..."""
    if gamma.n != kappa.n:
        raise InputError("connection and curvature of different dimension")
    Lam = list(gamma.images())
    scale = float(max(np.abs(Lam).max(), kappa.max_abs()))
    return bracket_closure(kappa.values(), Lam, tol, scale)


def riemannian_holonomy(rho: TransferredBracket, R: CurvatureOperator, tol=RANK_TOL) -> MatrixSubspace:
    """Same closure inside so(n), generators ``gamma_0(e_i) = 1/2 ad(e_i)``."""
    if rho.dim != R.n:
        raise InputError("bracket and curvature operator of different dimension")
    LC = list(0.5 * rho.ad_matrices())
    scale = float(max(np.abs(LC).max(), np.abs(R.R).max()))
    return bracket_closure(R.values(), LC, tol, scale)


def causal_type(v, tol=1e-9):
    v = np.asarray(v, dtype=float)
    q = tractor_norm(v / np.linalg.norm(v))
    if q < -tol:
        return "timelike"
    if q > tol:
        return "spacelike"
    return "null"


def stabilized_tractors(hol: MatrixSubspace, tol=RANK_TOL):
    """Vectors of R^{1,n+1} annihilated by every element of ``hol``.

    Returns ``(basis, types)``: basis rows span the common kernel, types
    classify each row by the sign of its Minkowski norm.
    """
    N = hol.size
    if hol.dim == 0:
        basis = np.eye(N)
    else:
        M = hol.basis.reshape(-1, N)
        basis = null_space(M, tol * max(1.0, float(np.abs(M).max())))
    return basis, [causal_type(v) for v in basis]


def trace_form_signature(hol: MatrixSubspace, tol=RANK_TOL):
    """(positive, negative, zero) counts of ``tr(XY)`` restricted to ``hol``."""
    if hol.dim == 0:
        return (0, 0, 0)
    B = hol.basis
    G = np.einsum("iab,jba->ij", B, B)
    ev = np.linalg.eigvalsh(0.5 * (G + G.T))
    cut = tol * max(1.0, float(np.abs(ev).max()))
    return (int((ev > cut).sum()), int((ev < -cut).sum()), int((np.abs(ev) <= cut).sum()))


@dataclass(frozen=True)
class HolonomyReport:
    algebra_dim: int
    closed_under_bracket: bool
    stabilized_tractor_dim: int
    tractor_causal_types: list
    killing_signature: tuple
    candidate_name: str | None

    def to_dict(self):
        return {
            "algebra_dim": self.algebra_dim,
            "closed_under_bracket": self.closed_under_bracket,
            "stabilized_tractor_dim": self.stabilized_tractor_dim,
            "tractor_causal_types": list(self.tractor_causal_types),
            "killing_signature": list(self.killing_signature),
            "candidate_name": self.candidate_name,
        }


def classify(hol: MatrixSubspace, tol=RANK_TOL) -> HolonomyReport:
    """Fill a :class:`HolonomyReport`; names come from a small rule table.

    dim 0 -> "trivial"; dim n(n+1)/2 with one timelike fixed tractor and a
    negative definite trace form -> "so(n+1)"; full dimension -> "so(1,n+1)".
    """
    closed = is_bracket_closed(hol, tol)
    if not closed:
        raise ContractViolation("classify needs a bracket-closed subspace")
    n = hol.size - 2
    if hol.dim and max(membership_residual(X) for X in hol.basis) > 1e-10:
        raise ContractViolation("subspace is not contained in so(1,n+1)")
    basis, types = stabilized_tractors(hol, tol)
    sig = trace_form_signature(hol, tol)
    name = None
    if hol.dim == 0:
        name = "trivial"
    elif hol.dim == (n + 2) * (n + 1) // 2:
        name = f"so(1,{n + 1})"
    elif hol.dim == n * (n + 1) // 2 and types == ["timelike"] and sig == (0, hol.dim, 0):
        name = f"so({n + 1})"
    return HolonomyReport(hol.dim, closed, len(basis), types, sig, name)


def full_mobius_algebra(n) -> MatrixSubspace:
    """so(1, n+1) itself, from the block embeddings of all graded pieces."""
    J = gram(n)
    N = n + 2
    mats = []
    for a, b in itertools.combinations(range(N), 2):
        E = np.zeros((N, N))
        E[a, b], E[b, a] = 1.0, -1.0
        mats.append(np.linalg.solve(J, E))  # J^{-1} * antisymmetric lies in so(J)
    return span_reduce(mats)
