"""Basis changes, entangled-pair statistics and their brute-force cross-checks."""
from .errors import DomainError, InvariantError, UnsupportedFormError
from .oracle import (
    DensityMatrix2,
    TwoQubitVector,
    empirical_visibility,
    expand_pair,
    joint_born,
    offdiag_magnitude,
    reduce,
)
from .pair import (
    CorrelationSign,
    JointProbabilities,
    PairAmplitudes,
    RatioParams,
    RotatedPairCoefficients,
    correlation_probs,
    local_probs,
    make_pair,
    rotated_coefficients,
    strength,
    visibilities_pair,
    weights_from_strength,
)
from .qubit import (
    BasisFrame,
    BasisTransform,
    BlochDirection,
    QubitState,
    adjoint_inverse,
    antipode_state,
    basis_matrix,
    components_in_frame,
    outcome_probs_single,
    state_from_bloch,
    visibility_single,
)

__version__ = "0.1.0"
