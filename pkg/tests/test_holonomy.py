import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import brute_force_closure, build, pipeline, random_orthogonal, so_matrix
from conformal_holonomy.errors import ContractViolation, InputError, NoConvergence
from conformal_holonomy.holonomy import (MatrixSubspace, bracket_closure, causal_type, classify,
                                         closure_residual, conformal_holonomy, curvature_span,
                                         full_mobius_algebra, is_bracket_closed,
                                         riemannian_holonomy, span_reduce, stabilized_tractors,
                                         trace_form_signature)
from conformal_holonomy.lie_algebra import OrthonormalFrame
from conformal_holonomy.linalg import null_space, row_reduce
from conformal_holonomy.mobius import embed_m_minus1, gram
from conformal_holonomy.riemannian import riemann


def svd_rank(mats, tol=1e-9):
    A = np.stack([np.ravel(m) for m in mats])
    s = np.linalg.svd(A, compute_uv=False)
    return int((s > tol * max(1.0, s.max())).sum())


def test_span_reduce_duplicates():
    E12, E13 = so_matrix(3, 1, 2), so_matrix(3, 1, 3)
    assert span_reduce([E12, E12, E13]).dim == 2


def test_span_reduce_full_so6():
    mats = [so_matrix(6, i, j) for i in range(1, 7) for j in range(i + 1, 7)]
    assert span_reduce(mats).dim == 15


def test_span_reduce_below_threshold():
    A, B = so_matrix(4, 1, 2), so_matrix(4, 3, 4)
    assert span_reduce([A, A + 1e-15 * B]).dim == 1


def test_span_reduce_empty_needs_shape():
    with pytest.raises(InputError):
        span_reduce([])
    assert span_reduce([], shape=(3, 3)).dim == 0
    with pytest.raises(InputError):
        span_reduce([np.zeros((2, 2)), np.zeros((3, 3))])


@settings(max_examples=40)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_span_reduce_matches_svd_rank(rank, seed):
    rng = np.random.default_rng(seed)
    base = rng.standard_normal((rank, 4, 4))
    mix = rng.standard_normal((8, rank))
    mats = np.einsum("kr,rab->kab", mix, base)
    sub = span_reduce(mats)
    assert sub.dim == svd_rank(mats) == rank
    assert sub.residuals(mats).max() < 1e-9 * np.abs(mats).max() * 16


def test_row_reduce_and_null_space():
    rows = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 1.0]])
    basis, piv = row_reduce(rows, 1e-12)
    assert basis.shape == (2, 3)
    for r, p in zip(basis, piv):
        assert r[p] == 1.0
    ns = null_space(rows, 1e-12)
    assert ns.shape == (1, 3)
    assert np.abs(rows @ ns[0]).max() < 1e-12


def test_closure_history_monotone_and_converges():
    p = pipeline("so(3)+so(3)")
    h = p.hol.history
    assert h[0] == 15 and h[-1] == 21
    assert all(a <= b for a, b in zip(h, h[1:]))
    assert h[-1] == h[-2]


def test_closure_nonconvergence_reported(monkeypatch):
    import conformal_holonomy.holonomy as hol_mod
    p = build("so(3)+so(3)")
    real = hol_mod.span_reduce
    calls = {"n": 0}

    def growing(mats, tol=1e-9, scale=None, shape=None):
        # pretend every round adds one more dimension
        calls["n"] += 1
        sub = real(mats, tol, scale, shape)
        fake = np.concatenate([sub.basis, np.zeros((calls["n"],) + sub.shape)])
        return MatrixSubspace(fake, sub.shape, sub.threshold)

    monkeypatch.setattr(hol_mod, "span_reduce", growing)
    with pytest.raises(NoConvergence):
        bracket_closure(p.kappa.values(), list(p.gamma.images()))


def test_closure_order_independent():
    p = build("so(3)+so(3)")
    seed = p.kappa.values()
    gens = list(p.gamma.images())
    a = bracket_closure(seed, gens)
    b = bracket_closure(seed[::-1], gens[::-1])
    assert a.dim == b.dim == 21
    assert a.residuals(b.basis).max() < 1e-10
    assert b.residuals(a.basis).max() < 1e-10


def test_curvature_span_inside_holonomy():
    p = pipeline("so(3)+so(3)")
    q = curvature_span(p.kappa)
    assert q.dim == 15
    assert p.hol.residuals(q.basis).max() < 1e-10
    # q itself is so(6) acting on the middle block
    assert all(np.abs(X[[0, -1]]).max() < 1e-12 for X in q.basis)


@pytest.mark.parametrize("name,q,hol", [("so(3)", 0, 0), ("so(3)+so(3)", 15, 21), ("so(4)", 15, 21),
                                        ("su(3)", 28, 36)])
def test_holonomy_dimensions(name, q, hol):
    p = pipeline(name)
    assert curvature_span(p.kappa, scale=np.abs(p.gamma.images()).max()).dim == q
    assert p.hol.dim == hol
    assert is_bracket_closed(p.hol)


def test_holonomy_matches_brute_force():
    p = pipeline("so(3)+so(3)")
    # independent closure: curvature values, all brackets with Lambda and within
    gens = list(p.gamma.images())
    mats = list(p.kappa.values())
    dim = 0
    while True:
        mats = mats + [g @ X - X @ g for g in gens for X in mats]
        A = np.stack([m.ravel() for m in mats])
        _, s, vt = np.linalg.svd(A, full_matrices=False)
        keep = s > 1e-9 * s.max()
        mats = [v.reshape(8, 8) for v in vt[keep]]
        if len(mats) == dim:
            break
        dim = len(mats)
    assert dim == p.hol.dim
    assert brute_force_closure(mats) == dim


def test_frame_invariance():
    rng = np.random.default_rng(8)
    base = build("so(4)")
    for _ in range(3):
        Q = random_orthogonal(6, rng)
        frame = OrthonormalFrame(Q @ base.frame.theta, base.frame.theta_inv @ Q.T)
        p = build("so(4)", frame)
        hol = conformal_holonomy(p.gamma, p.kappa)
        basis, types = stabilized_tractors(hol)
        assert hol.dim == 21 and types == ["timelike"]


def test_einstein_tractor_consistency():
    for name in ("so(3)+so(3)", "su(3)", "so(3)+so(3)+so(3)"):
        p = pipeline(name)
        basis, types = stabilized_tractors(p.hol)
        assert types == ["timelike"]
        v = basis[0]
        assert max(np.abs(X @ v).max() for X in p.hol.basis) < 1e-10
        # positive scalar curvature Einstein scale: the fixed tractor is negative
        assert v @ gram(p.n) @ v < 0


def test_su3_by_direct_linear_algebra():
    p = pipeline("su(3)")
    M = p.hol.basis.reshape(-1, 10)
    _, s, vt = np.linalg.svd(M)
    kernel = vt[np.sum(s > 1e-9 * s.max()):]
    assert kernel.shape[0] == 1
    r = classify(p.hol)
    assert r.algebra_dim == 36 and r.candidate_name == "so(9)"
    assert r.killing_signature == (0, 36, 0)


def test_tractors_trivial_and_full():
    empty = span_reduce([], shape=(5, 5))
    basis, types = stabilized_tractors(empty)
    assert basis.shape[0] == 5
    full = full_mobius_algebra(3)
    assert full.dim == 10
    assert is_bracket_closed(full)
    assert stabilized_tractors(full)[0].shape[0] == 0


def test_null_tractor_of_translations():
    sub = span_reduce([embed_m_minus1(e) for e in np.eye(3)])
    assert is_bracket_closed(sub)
    basis, types = stabilized_tractors(sub)
    assert types == ["null"]


def test_causal_type():
    J = gram(3)
    assert causal_type([1.0, 0, 0, 0, -1.0]) == "timelike"
    assert causal_type([0, 1.0, 0, 0, 0]) == "spacelike"
    assert causal_type([1.0, 0, 0, 0, 0]) == "null"
    v = np.array([1.0, 0.2, 0, 0, -1.0])
    assert (v @ J @ v < 0) == (causal_type(v) == "timelike")


def test_classify_rules():
    assert classify(pipeline("so(3)").hol).candidate_name == "trivial"
    r = classify(pipeline("so(3)+so(3)").hol)
    assert (r.algebra_dim, r.stabilized_tractor_dim, r.candidate_name) == (21, 1, "so(7)")
    assert r.killing_signature == (0, 21, 0)
    assert classify(full_mobius_algebra(4)).candidate_name == "so(1,5)"
    assert classify(span_reduce([embed_m_minus1(e) for e in np.eye(3)])).candidate_name is None


def test_classify_rejects_open_subspace():
    X = so_matrix(5, 2, 3)
    Y = so_matrix(5, 3, 4)
    sub = span_reduce([X, Y])
    assert closure_residual(sub) > 0.1
    with pytest.raises(ContractViolation):
        classify(sub)


def test_trace_form_signature_full():
    pos, neg, zero = trace_form_signature(full_mobius_algebra(3))
    # so(1,4): 6 compact rotations and 4 boosts
    assert (pos, neg, zero) == (4, 6, 0)


@pytest.mark.parametrize("name,dim", [("so(3)", 3), ("so(3)+so(3)", 6), ("so(4)", 6)])
def test_riemannian_holonomy_brute_force(name, dim):
    p = build(name)
    R = riemann(p.rho)
    h = riemannian_holonomy(p.rho, R)
    assert h.dim == dim
    assert brute_force_closure(R.values()) == dim


def test_holonomy_dimension_mismatch():
    a, b = build("so(3)"), build("so(3)+so(3)")
    with pytest.raises(InputError):
        conformal_holonomy(a.gamma, b.kappa)
    with pytest.raises(InputError):
        riemannian_holonomy(a.rho, riemann(b.rho))
