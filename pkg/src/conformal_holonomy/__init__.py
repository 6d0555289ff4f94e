"""Conformal Cartan connections and conformal holonomy of bi-invariant metrics."""

from .cartan import ConnectionForm, CurvatureFunction, connection_curvature, normal_connection
from .errors import (AlgebraFileError, ContractViolation, InputError, InvalidAlgebra,
                     NoConvergence, NotSemisimple, UnknownAlgebra)
from .holonomy import (HolonomyReport, MatrixSubspace, classify, conformal_holonomy,
                       riemannian_holonomy, span_reduce, stabilized_tractors)
from .lie_algebra import (LieAlgebraSpec, OrthonormalFrame, TransferredBracket,
                          assert_compact_semisimple, catalog, direct_sum, killing_form,
                          orthonormal_frame, transferred_bracket)
from .pipeline import AnalysisReport, analyze

__version__ = "0.1.0"
