"""Numerical laboratory for the complex harmonic oscillator
H_c = -d^2/dx^2 + c x^2 with Re(c) > 0.

Resolvent norms and pseudospectra grids, JWKB quasi-mode lower-bound
certificates, the non-self-adjoint Mehler heat kernel and its
Hilbert-Schmidt/Nystrom machinery, Riesz spectral projectors with
instability indices, and inclusion-region certificates.
"""

from .discretization import (
    OperatorMatrix,
    TruncationDiagnostics,
    build_matrix,
    dump_matrix,
    eigenvalue_diagnostics,
    reliable_eigenvalues,
    truncated_eigenvalues,
    truncation_spectrum,
)
from .errors import (
    ContourError,
    ConvergenceError,
    DegenerateCouplingError,
    InvalidKernelError,
    NsolabError,
    OverflowGuardError,
    QuadratureError,
    RootFindError,
    SingularPointError,
    UnreliableTruncationError,
    ValidationError,
)
from .mehler import (
    DecayScan,
    MehlerKernel,
    NystromOperator,
    decay_to_csv,
    edge_decay_scan,
    hs_norm,
    kernel_coefficients,
    kernel_eval,
    nystrom_build,
    nystrom_node_estimate,
    random_sector_tau,
    semigroup_action_check,
    semigroup_law_check,
)
from .projectors import (
    InstabilityIndex,
    ProjectorData,
    decomposition_bound_check,
    index_table,
    index_table_to_csv,
    kappa_biorthogonal,
    kappa_contour,
    kappa_m_sum,
    projector,
    restricted_resolvent_norm,
)
from .quasimode import (
    EnvelopeData,
    PhasePolynomial,
    QuasimodeParams,
    QuasimodeReport,
    ResidualPolynomial,
    build_cutoff,
    domination_threshold,
    envelope_dominates,
    envelope_log_magnitude,
    evaluate_quasimode,
    quasimode_report,
    scaling_fit,
    sweep_to_csv,
)
from .regions import (
    Certificate,
    InclusionRegion,
    certificate_epsilon,
    certificate_to_json,
    inclusion_certificate,
    region_contains,
    sector_plus_disks,
    shifted_sector,
)
from .resolvent import (
    GridScan,
    ResolventSample,
    ScanResult,
    ScanSample,
    conjecture_scan,
    contour_to_json,
    edge_scan,
    grid_to_csv,
    growth_curve_scan,
    pseudospectra_grid,
    resolvent_norm,
    scan_to_csv,
    solve_conjecture_curve,
    symmetry_check,
)
from .spectral import (
    Coupling,
    EigenData,
    NumericalRangePoint,
    Sector,
    biorthogonal_pairing,
    eigenfunction_eval,
    eigenfunction_grid,
    eigenfunction_log_eval,
    eigenvalue,
    eigenvalues,
    maximal_sector,
    numerical_range_boundary,
    numerical_range_membership,
    numerical_range_point,
    pairing_normalization,
    reduce_coupling,
    symmetry_reflect,
)

__version__ = "0.1.0"
