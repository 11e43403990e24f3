"""Detection and quantification of non-Markovian qubit dynamics via
uncertainty-relation violations on intermediate-interval Choi states."""

from .dynamics import (
    ChoiState,
    LindbladGenerator,
    PositivityBlowupError,
    constant_rate,
    intermediate_choi,
    lindblad_rhs,
    maximally_entangled,
    min_choi_eigenvalue,
    propagate_state,
    tabulated_rate,
    validate_density_matrix,
)
from .matrix_core import (
    SpectralDecomposition,
    anticommutator,
    commutator,
    hermitian_eig,
    hs_norm_sq,
    kron,
    sigma_minus,
    sigma_plus,
    sigma_x,
    sigma_y,
    sigma_z,
)
from .models import (
    DephasingParams,
    RatePoleError,
    SpinBathParams,
    choi_from_decoherence_factor,
    demo_spinbath_params,
    dephasing_choi_exact,
    dephasing_first_pole,
    dephasing_generator,
    dephasing_rate,
    load_rate_table,
    spinbath_generator,
)
from .quantifier import (
    NonUnitalError,
    TimeSeries,
    nm_quantifier,
    purity_quantifier,
    quantumness,
    rs_rate_analytic,
    rs_trajectory,
    unital_scan,
)
from .rate_expr import RateExpression, RateParseError, parse_rate_expr
from .uncertainty import (
    BlochDirections,
    bloch_state,
    direction_operator,
    expectation,
    linear_entropy,
    rs_factorized,
    rs_lhs,
    sum_uncertainty,
    variance,
    variance_convexity_gap,
)
from .witnesses import (
    PairNotConstructibleError,
    Verdict,
    WitnessReport,
    construct_rs_violating_pair,
    detect,
    negative_eigenspace,
    projective_witness_values,
    variance_witness,
)

__version__ = "0.1.0"
