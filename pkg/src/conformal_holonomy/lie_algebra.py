"""Real Lie algebras given by structure constants.

Conventions: ``structure[i, j, k]`` is the coefficient of ``b_k`` in
``[b_i, b_j]``.  Only the ``i < j`` entries carry information; the lower
half is always the exact mirror.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, InvalidAlgebra, NotSemisimple, UnknownAlgebra

DEFAULT_TOL = 1e-9


def _mirror_upper(tensor):
    """Antisymmetric tensor rebuilt from its ``i < j`` slices."""
    upper = np.triu(np.ones(tensor.shape[:2], dtype=bool), k=1)
    out = np.where(upper[:, :, None], tensor, 0.0)
    return out - out.transpose(1, 0, 2)


@dataclass(frozen=True, eq=False)
class LieAlgebraSpec:
    """A finite-dimensional real Lie algebra on an ordered abstract basis.

    ``structure`` must be exactly antisymmetric in its first two indices;
    use :meth:`from_upper` to build one from the ``i < j`` data only.
    """

    name: str
    structure: np.ndarray

    def __post_init__(self):
        c = np.array(self.structure, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise InputError(f"structure tensor must have shape (n, n, n), got {c.shape}")
        if not np.array_equal(c, -c.transpose(1, 0, 2)):
            raise InputError("structure tensor is not antisymmetric in its first two indices")
        c.setflags(write=False)
        object.__setattr__(self, "structure", c)

    @classmethod
    def from_upper(cls, name, tensor):
        return cls(name, _mirror_upper(np.asarray(tensor, dtype=float)))

    @property
    def dim(self):
        return self.structure.shape[0]

    def ad(self, x):
        """Matrix of ``y -> [x, y]``."""
        x = _as_vector(x, self.dim)
        return np.einsum("i,ijk->kj", x, self.structure)


def _as_vector(x, n):
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise InputError(f"expected a vector of length {n}, got shape {x.shape}")
    return x


def bracket(x, y, alg: LieAlgebraSpec) -> np.ndarray:
    x = _as_vector(x, alg.dim)
    y = _as_vector(y, alg.dim)
    return np.einsum("i,j,ijk->k", x, y, alg.structure)


def killing_form(alg: LieAlgebraSpec) -> np.ndarray:
    """``B_ij = tr(ad_i ad_j) = sum_ab c[i,a,b] c[j,b,a]``."""
    c = alg.structure
    B = np.einsum("iab,jba->ij", c, c)
    return 0.5 * (B + B.T)


def jacobi_defect(alg: LieAlgebraSpec):
    """Return ``(residual, (i, j, k))`` for the worst cyclic Jacobi sum."""
    c = alg.structure
    # [[b_i, b_j], b_k] = sum_m c[i,j,m] c[m,k,:]
    t = np.einsum("ijm,mkl->ijkl", c, c)
    cyc = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    per_triple = np.abs(cyc).max(axis=3)
    worst = np.unravel_index(np.argmax(per_triple), per_triple.shape)
    return float(per_triple[worst]), tuple(int(i) for i in worst)


def jacobi_residual(alg: LieAlgebraSpec) -> float:
    return jacobi_defect(alg)[0]


def ad_invariance_residual(alg: LieAlgebraSpec, B=None) -> float:
    """max |B([x,y],z) - B(x,[y,z])| over basis triples."""
    if B is None:
        B = killing_form(alg)
    c = alg.structure
    lhs = np.einsum("ijm,mk->ijk", c, B)
    rhs = np.einsum("im,jkm->ijk", B, c)
    return float(np.abs(lhs - rhs).max())


def assert_compact_semisimple(alg: LieAlgebraSpec, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate Jacobi and definiteness of ``-B``; return the Killing form.

    Definiteness is decided by the Cholesky pivots of ``-B``: every squared
    pivot has to exceed ``tol * max|B|``.
    """
    scale = max(1.0, float(np.abs(alg.structure).max())) ** 2
    residual, triple = jacobi_defect(alg)
    if residual > tol * scale:
        i, j, k = triple
        raise InvalidAlgebra(
            f"{alg.name}: Jacobi identity fails, worst triple (b_{i}, b_{j}, b_{k}) "
            f"with residual {residual:.3e}",
            worst_triple=triple, residual=residual)
    B = killing_form(alg)
    bmax = float(np.abs(B).max())
    if bmax == 0.0:
        raise NotSemisimple(f"{alg.name}: Killing form vanishes")
    try:
        L = np.linalg.cholesky(-B)
    except np.linalg.LinAlgError:
        raise NotSemisimple(f"{alg.name}: -B is not positive definite") from None
    pivots = np.diag(L) ** 2
    if pivots.min() <= tol * bmax:
        raise NotSemisimple(
            f"{alg.name}: -B is degenerate (smallest pivot {pivots.min():.3e})")
    return B


def direct_sum(a: LieAlgebraSpec, b: LieAlgebraSpec, name=None) -> LieAlgebraSpec:
    n, m = a.dim, b.dim
    c = np.zeros((n + m,) * 3)
    c[:n, :n, :n] = a.structure
    c[n:, n:, n:] = b.structure
    return LieAlgebraSpec(name or f"{a.name}+{b.name}", c)


def from_matrix_basis(name, mats) -> LieAlgebraSpec:
    """Structure constants of the span of ``mats`` under the commutator.

    Commutators are expanded in the basis by least squares over the real
    and imaginary parts; a nonzero residual means the span is not closed.
    """
    mats = np.asarray(mats)
    n = len(mats)
    design = np.concatenate([mats.real.reshape(n, -1), mats.imag.reshape(n, -1)], axis=1).T
    c = np.zeros((n, n, n))
    for i, j in itertools.combinations(range(n), 2):
        comm = mats[i] @ mats[j] - mats[j] @ mats[i]
        target = np.concatenate([comm.real.ravel(), comm.imag.ravel()])
        coef, *_ = np.linalg.lstsq(design, target, rcond=None)
        if np.abs(design @ coef - target).max() > 1e-10:
            raise InvalidAlgebra(f"{name}: matrix basis is not closed under the commutator")
        # least squares leaves roundoff on integer constants; snap those back
        near = np.abs(coef - np.rint(coef)) < 1e-12
        coef[near] = np.rint(coef[near])
        c[i, j] = coef
    return LieAlgebraSpec.from_upper(name, c)


def so_basis(m):
    """``E_ij = e_i e_j^T - e_j e_i^T`` for ``i < j``, lexicographic."""
    mats = []
    for i, j in itertools.combinations(range(m), 2):
        E = np.zeros((m, m))
        E[i, j], E[j, i] = 1.0, -1.0
        mats.append(E)
    return mats


def su_basis(m):
    """Generalized Gell-Mann basis of traceless anti-Hermitian matrices.

    Order: for each ``j < k`` the real antisymmetric and the imaginary
    symmetric pair, then the ``m - 1`` diagonal generators.
    """
    mats = []
    for j, k in itertools.combinations(range(m), 2):
        X = np.zeros((m, m), dtype=complex)
        X[j, k], X[k, j] = 1.0, -1.0
        Y = np.zeros((m, m), dtype=complex)
        Y[j, k] = Y[k, j] = 1j
        mats += [X, Y]
    for l in range(1, m):
        d = np.zeros(m)
        d[:l] = 1.0
        d[l] = -l
        d /= np.sqrt(l * (l + 1) / 2.0)
        mats.append(np.diag(1j * d))
    return mats


_SUMMAND = re.compile(r"^\s*(so|su)\s*\(\s*(\d+)\s*\)\s*$")

# Names listed by the ``catalog`` command; any so(m >= 3), su(m >= 2) and
# '+'-separated sums are accepted.
LISTED_NAMES = ("so(3)", "so(4)", "so(5)", "so(6)", "su(2)", "su(3)", "su(4)",
                "so(3)+so(3)", "so(3)+so(3)+so(3)")


def _simple(kind, m):
    if kind == "so":
        if m < 3:
            raise UnknownAlgebra(f"so({m}) is not compact semisimple; need m >= 3")
        return from_matrix_basis(f"so({m})", so_basis(m))
    if m < 2:
        raise UnknownAlgebra(f"su({m}) is not semisimple; need m >= 2")
    return from_matrix_basis(f"su({m})", su_basis(m))


def catalog(name: str) -> LieAlgebraSpec:
    """Build a catalog algebra, e.g. ``"so(5)"``, ``"su(3)"`` or ``"so(3)+so(3)"``."""
    parts = []
    for piece in name.split("+"):
        match = _SUMMAND.match(piece)
        if match is None:
            raise UnknownAlgebra(f"unknown algebra {name!r}; expected so(m), su(m) or sums thereof")
        parts.append(_simple(match.group(1), int(match.group(2))))
    alg = parts[0]
    for other in parts[1:]:
        alg = direct_sum(alg, other)
    return alg


@dataclass(frozen=True, eq=False)
class OrthonormalFrame:
    """Isometry ``theta`` from ``(n, -B)`` onto Euclidean ``R^n``."""

    theta: np.ndarray
    theta_inv: np.ndarray = field(default=None)

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        inv = np.linalg.inv(theta) if self.theta_inv is None else np.array(self.theta_inv, dtype=float)
        theta.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "theta_inv", inv)

    @property
    def dim(self):
        return self.theta.shape[0]

    def isometry_residual(self, B):
        Ti = self.theta_inv
        return float(np.abs(Ti.T @ (-B) @ Ti - np.eye(self.dim)).max())


def orthonormal_frame(B) -> OrthonormalFrame:
    """``theta = L^T`` with ``-B = L L^T`` the Cholesky factorization."""
    B = np.asarray(B, dtype=float)
    try:
        L = np.linalg.cholesky(-B)
    except np.linalg.LinAlgError:
        raise NotSemisimple("-B is not positive definite") from None
    theta = L.T + 0.0  # no negative zeros in reports
    # triangular inverse; deterministic for identical input
    inv = np.linalg.solve(theta, np.eye(len(B)))
    return OrthonormalFrame(theta, inv)


@dataclass(frozen=True, eq=False)
class TransferredBracket:
    """The bracket carried to ``m_{-1}``: ``rho(e_i, e_j) = sum_k r[i,j,k] e_k``."""

    r: np.ndarray

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        r.setflags(write=False)
        object.__setattr__(self, "r", r)

    @property
    def dim(self):
        return self.r.shape[0]

    def __call__(self, a, b):
        return np.einsum("i,j,ijk->k", a, b, self.r)

    def ad(self, a):
        """Matrix of ``b -> rho(a, b)``."""
        return np.einsum("i,ijk->kj", a, self.r)

    def ad_matrices(self):
        """``ad(e_i)`` for every basis vector, shape ``(n, n, n)``."""
        return self.r.transpose(0, 2, 1)


def transferred_bracket(alg: LieAlgebraSpec, frame: OrthonormalFrame) -> TransferredBracket:
    T, Ti = frame.theta, frame.theta_inv
    r = np.einsum("ai,bj,abc,kc->ijk", Ti, Ti, alg.structure, T)
    # exact antisymmetry from the upper half
    return TransferredBracket(_mirror_upper(r))


def skewness_residual(rho: TransferredBracket) -> float:
    """max |<rho(e_i,e_j),e_k> + <e_j,rho(e_i,e_k)>|."""
    r = rho.r
    return float(np.abs(r + r.transpose(0, 2, 1)).max())


def bracket_jacobi_residual(rho: TransferredBracket) -> float:
    return jacobi_residual(LieAlgebraSpec("rho", rho.r))
