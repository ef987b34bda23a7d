"""Principal loading analysis: dimension reduction by discarding original
variables whose covariance eigenvector loadings are uniformly small."""

from .analysis import (
    BlockCandidate,
    BlockDetection,
    PlaConfig,
    PlaReport,
    contribution_measure,
    detect_blocks,
    explained_variance,
    run_pla,
)
from .bounds import (
    BoundCheck,
    GapSpec,
    eigengap,
    gershgorin_condition,
    sufficient_discard_bound,
    weyl_eigenvalue_bound,
)
from .covariance import (
    BlockOrdering,
    DataMatrix,
    find_block_ordering,
    sample_covariance,
    to_correlation,
)
from .estimator import PrincipalLoadingAnalysis
from .exceptions import InvalidInputError, NumericalFailureError, PlaError
from .linalg import (
    EigenPairs,
    align_signs,
    check_symmetric,
    frobenius_norm,
    gershgorin_max,
    sup_norm,
    sym_eigen,
)
from .simulation import (
    ConvergenceStudy,
    DgpSpec,
    SimulationResult,
    convergence_study,
    generate_population,
    run_type1_study,
)

__version__ = "0.1.0"

__all__ = [
    "BlockCandidate",
    "BlockDetection",
    "BlockOrdering",
    "BoundCheck",
    "ConvergenceStudy",
    "DataMatrix",
    "DgpSpec",
    "EigenPairs",
    "GapSpec",
    "InvalidInputError",
    "NumericalFailureError",
    "PlaConfig",
    "PlaError",
    "PlaReport",
    "PrincipalLoadingAnalysis",
    "SimulationResult",
    "align_signs",
    "check_symmetric",
    "contribution_measure",
    "convergence_study",
    "detect_blocks",
    "eigengap",
    "explained_variance",
    "find_block_ordering",
    "frobenius_norm",
    "generate_population",
    "gershgorin_condition",
    "gershgorin_max",
    "run_pla",
    "run_type1_study",
    "sample_covariance",
    "sufficient_discard_bound",
    "sup_norm",
    "sym_eigen",
    "to_correlation",
    "weyl_eigenvalue_bound",
]
