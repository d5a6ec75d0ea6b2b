"""Compound states, entangled mutual entropy and channel capacities at desk scale."""
from .capacity import (
    InfoReport,
    OptimizerConfig,
    info,
    info_d,
    info_o,
    info_q,
    sweep,
    verify_ordering,
)
from .channels import (
    KrausChannel,
    apply_state,
    apply_to_output_factor,
    apply_to_probe_factor,
    channel_zoo,
    dilate,
    make_channel,
)
from .entangle import (
    AmplitudeOperator,
    CompoundState,
    c_compound,
    compound_from_amplitude,
    d_compound,
    entangling_from_amplitude,
    marginals,
    o_compound,
    pi_eval,
    pi_star_eval,
    standard_compound,
)
from .entropy import (
    conditional_and_disentanglement,
    mutual_entropy,
    q_entropy,
    relative_entropy,
    von_neumann,
)
from .linalg import hermitian_eig, matrix_func_on_support, partial_trace
from .states import (
    DensityOperator,
    Ensemble,
    ensemble_mix,
    random_density,
    schatten_decompose,
    validate_density,
)

__version__ = "0.1.0"
