"""Direct and inverse spectral theory of banded Hermitian matrices.

Spectral map and its inverse via matrix orthogonal polynomials, block
Lanczos and Householder block reduction, and the Toda flow.
"""

from .errors import *  # noqa: F401,F403
from .linalg import (
    DEFAULT_TOL,
    HermitianEig,
    cholesky,
    echelon_qr,
    hermitian_eig,
    hermitian_expm,
    qr_positive,
    rank_with_tol,
    ref_factor,
    right_pseudoinverse,
)
from .measure import (
    MERGE_TOL,
    MatrixMeasure,
    MeasureClassReport,
    krylov_matrix,
    measure_distance,
    moment,
    normalize,
    quasi_inner,
    validate_measure,
    weight_factors,
)
from .orthopoly import (
    MonicData,
    OrthonormalFamily,
    last_polynomial,
    monic_sequence,
    null_dimension,
    orthonormal_family,
    orthonormal_sequence,
    poly_apply,
    poly_eval,
    residual_polynomials,
)
from .polynomial import MatrixPolynomial
from .spectral import (
    BandedHermitian,
    banded_distance,
    inverse_spectral_map,
    lanczos_polynomials,
    selection_block,
    spectral_map,
    spectral_measure,
    to_dense,
    validate_banded,
)
from .toda import (
    TodaSolution,
    evolve_measure,
    flow_generator,
    pi_decomposition,
    toda_qr_flow,
    toda_rk4_oracle,
    toda_spectral_flow,
)
from .tridiag import (
    EquivalenceReport,
    LanczosOutput,
    block_lanczos,
    equivalence_check,
    householder_blocktridiag,
)

__version__ = "0.1.0"
