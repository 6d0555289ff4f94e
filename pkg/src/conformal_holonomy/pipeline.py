"""End-to-end analysis of one compact semisimple algebra."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cartan, holonomy, riemannian
from .lie_algebra import (LieAlgebraSpec, assert_compact_semisimple, jacobi_residual,
                          orthonormal_frame, transferred_bracket)


@dataclass(frozen=True)
class AnalysisReport:
    algebra: dict
    frame: list
    lambda_: float
    residuals: dict
    riemannian: dict
    curvature: dict
    holonomy: holonomy.HolonomyReport
    riemannian_holonomy_dim: int

    def to_dict(self):
        return {
            "algebra": self.algebra,
            "frame": self.frame,
            "lambda": self.lambda_,
            "residuals": self.residuals,
            "riemannian": self.riemannian,
            "curvature": self.curvature,
            "holonomy": self.holonomy.to_dict(),
            "riemannian_holonomy_dim": self.riemannian_holonomy_dim,
        }

    def failed_residuals(self, tol):
        """Names of residual checks above ``tol`` (scaled by the algebra size).

        The Jacobi residual is not gated here: it was already validated,
        relative to the size of the structure constants, on input.
        """
        bound = tol * self.algebra["dim"]
        checks = {k: v for k, v in self.residuals.items() if k != "jacobi"}
        checks["einstein"] = self.riemannian["einstein_residual"]
        checks["kappa_minus1"] = self.curvature["kappa_minus1_max"]
        checks["kappa1"] = self.curvature["kappa1_max"]
        bad = [k for k, v in checks.items() if not np.isfinite(v) or v > bound]
        if not self.holonomy.closed_under_bracket:
            bad.append("holonomy_closed")
        return bad


def analyze(alg: LieAlgebraSpec, tol: float = holonomy.RANK_TOL, frame=None) -> AnalysisReport:
    """Run the whole pipeline; ``frame`` overrides the Cholesky frame."""
    B = assert_compact_semisimple(alg, tol)
    if frame is None:
        frame = orthonormal_frame(B)
    rho = transferred_bracket(alg, frame)
    gamma = cartan.normal_connection(rho)
    kappa = cartan.connection_curvature(gamma, rho)
    metric = riemannian.metric_tensors(rho)
    R = riemannian.riemann(rho)

    hol = holonomy.conformal_holonomy(gamma, kappa, tol)
    q = holonomy.curvature_span(kappa, tol, scale=float(np.abs(gamma.images()).max()))
    rhol = holonomy.riemannian_holonomy(rho, R, tol)
    smin, smax = riemannian.sectional_range(rho)

    residuals = {
        "jacobi": jacobi_residual(alg),
        "torsion": cartan.torsion_residual(gamma, rho),
        "trace_free": cartan.trace_free_residual(kappa),
        "gamma0_jacobi": cartan.jacobi_gamma0_residual(gamma.gamma0),
        "normal_extension": cartan.normal_extension_residual(gamma),
        "weyl_cross_check": riemannian.weyl_cross_check(kappa, metric.W),
    }
    return AnalysisReport(
        algebra={"name": alg.name, "dim": alg.dim},
        frame=frame.theta.tolist(),
        lambda_=float(gamma.gamma1[0, 0]),
        residuals=residuals,
        riemannian={
            "scal": metric.scal,
            "einstein_residual": riemannian.einstein_residual(metric.ric, metric.scal),
            "sectional_range": [smin, smax],
        },
        curvature={
            "dim_q": q.dim,
            "kappa_minus1_max": float(np.abs(kappa.minus1).max()),
            "kappa1_max": float(np.abs(kappa.plus1).max()),
        },
        holonomy=holonomy.classify(hol, tol),
        riemannian_holonomy_dim=rhol.dim,
    )
