"""Randomized preconditioned Cholesky-QR for tall-skinny matrices.

Library layout:

* :mod:`rpcqr.kernels` -- dense linear-algebra primitives
* :mod:`rpcqr.transforms` -- sign flip / DCT smoothing and row sampling
* :mod:`rpcqr.algorithms` -- the Cholesky-QR family of factorizations
* :mod:`rpcqr.bounds` -- closed-form accuracy bound evaluators
* :mod:`rpcqr.genmat` -- seeded test-matrix generators
* :mod:`rpcqr.metrics` -- measured accuracy quantities
* :mod:`rpcqr.harness` / :mod:`rpcqr.cli` -- experiment sweeps and CSV output
"""

from .algorithms import (
    PreconditionerInfo,
    build_preconditioner,
    cholesky_qr,
    cholesky_qr2,
    preconditioned_cholesky_qr,
    rp_cholesky_qr,
    sampled_frame_singular_values,
)
from .bounds import (
    BoundSet,
    GrowthFactors,
    PerturbationSet,
    SamplingBound,
    U,
    basic_bounds,
    first_order_bounds,
    growth_factors,
    ortho_estimate,
    preconditioned_bounds,
    sampling_lower_bound,
)
from .errors import (
    CholeskyBreakdown,
    DomainError,
    NoConvergenceError,
    NotOrthonormalError,
    RankDeficientSampleError,
    SingularTriangularError,
)
from .genmat import (
    SpectrumSpec,
    haar_frame,
    haar_rotated,
    load_matrix,
    randsvd,
    save_matrix,
    worst_coherence_stack,
)
from .kernels import (
    EPS,
    QRFactors,
    cholesky,
    gram,
    householder_qr,
    singular_values,
    spectral_norm,
    sym_eigenvalues,
    tri_solve_right,
)
from .harness import (
    CSV_COLUMNS,
    ConfigError,
    ExperimentConfig,
    compare_cqr2,
    emit_csv,
    format_summary,
    load_config,
    run_single,
    sweep_c,
    sweep_n,
)
from .metrics import TrialRecord, cond2, eta, ortho_deviation, rel_residual
from .transforms import (
    RowSample,
    SignDiagonal,
    coherence,
    dct_columns,
    dct_columns_reference,
    dct_matrix,
    rademacher_diag,
    sample_rows,
)

__version__ = "0.1.0"
