"""bargwig: Wigner quasi-probability functions from Bargmann-representation
derivatives.

The core engine evaluates W as a Hermitian quadratic form over the stack of
Bargmann derivatives, with no integration; configuration-space and
phase-space quadrature oracles, Laguerre/Gaussian closed forms, and
basis-geometry identities validate it.
"""

__version__ = "0.1.0"

from .phase import BasisParams, PhasePoint, WirtingerCoefficients, qp_from_z, wirtinger_coefficients, z_from_qp
from .special import g_kernel, hermite_psi, hyp2f0_terminating, laguerre, log_factorial
from .states import (
    BargmannDerivatives,
    CoherentState,
    FockState,
    StateSpec,
    Superposition,
    bargmann,
    bargmann_of_coherent,
    bargmann_of_fock,
    cat_state,
    derivative_tower,
    exact_degree,
    norm_squared,
    overlap,
    position_wavefunction,
    state_from_json,
    state_to_json,
    superposition,
)
from .core import (
    KernelMatrix,
    TruncationError,
    TruncationPolicy,
    build_F,
    choose_truncation,
    wigner_closed_coherent_crossb,
    wigner_closed_coherent_gaussian,
    wigner_closed_fock,
    wigner_series,
)
from .oracles import (
    MarginalDensity,
    OracleConvergenceError,
    QuadratureSpec,
    marginal_position,
    normalization,
    quadrature_nodes,
    wigner_config_integral,
    wigner_phase_integral,
)
from .geometry import IdentityReport, check_b_independence, check_identity_crossb
from .grid import METHODS, GridAxis, WignerGrid, evaluate_grid, mix

__all__ = [
    "__version__",
    "BasisParams",
    "PhasePoint",
    "WirtingerCoefficients",
    "qp_from_z",
    "wirtinger_coefficients",
    "z_from_qp",
    "g_kernel",
    "hermite_psi",
    "hyp2f0_terminating",
    "laguerre",
    "log_factorial",
    "BargmannDerivatives",
    "CoherentState",
    "FockState",
    "StateSpec",
    "Superposition",
    "bargmann",
    "bargmann_of_coherent",
    "bargmann_of_fock",
    "cat_state",
    "derivative_tower",
    "exact_degree",
    "norm_squared",
    "overlap",
    "position_wavefunction",
    "state_from_json",
    "state_to_json",
    "superposition",
    "KernelMatrix",
    "TruncationError",
    "TruncationPolicy",
    "build_F",
    "choose_truncation",
    "wigner_closed_coherent_crossb",
    "wigner_closed_coherent_gaussian",
    "wigner_closed_fock",
    "wigner_series",
    "MarginalDensity",
    "OracleConvergenceError",
    "QuadratureSpec",
    "marginal_position",
    "normalization",
    "quadrature_nodes",
    "wigner_config_integral",
    "wigner_phase_integral",
    "IdentityReport",
    "check_b_independence",
    "check_identity_crossb",
    "METHODS",
    "GridAxis",
    "WignerGrid",
    "evaluate_grid",
    "mix",
]
