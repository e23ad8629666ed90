"""Capacity of classical-quantum channels via alternating maximization."""

from .capacity import CapacityResult, constrained_capacity, unconstrained_capacity
from .channel import (
    CqChannel,
    IndependenceReport,
    InputDistribution,
    channel_from_jsonable,
    channel_to_jsonable,
    holevo_quantity,
    independence_check,
    kl_divergence_bits,
    load_channel,
    output_state,
    random_channel,
    save_channel,
)
from .hermitian import (
    DEFAULT_TOLERANCES,
    DensityMatrix,
    Spectrum,
    Tolerances,
    log_on_support,
    quantum_relative_entropy,
    relative_entropy_nats,
    trace_product,
    validate_density,
    von_neumann_entropy,
)
from .oracle import GridResult, GridSpec, classical_ba, diagonal_transition_matrix, grid_capacity
from .solver import (
    FixedLambdaResult,
    IterationState,
    IterationTrace,
    RateDiagnostics,
    SolverConfig,
    TerminationReason,
    ba_step,
    make_iteration_state,
    rate_diagnostics,
    solve_fixed_lambda,
    surrogate_objective,
    upper_bound,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityResult",
    "CqChannel",
    "DEFAULT_TOLERANCES",
    "DensityMatrix",
    "FixedLambdaResult",
    "GridResult",
    "GridSpec",
    "IndependenceReport",
    "InputDistribution",
    "IterationState",
    "IterationTrace",
    "RateDiagnostics",
    "SolverConfig",
    "Spectrum",
    "TerminationReason",
    "Tolerances",
    "ba_step",
    "channel_from_jsonable",
    "channel_to_jsonable",
    "classical_ba",
    "constrained_capacity",
    "diagonal_transition_matrix",
    "grid_capacity",
    "holevo_quantity",
    "independence_check",
    "kl_divergence_bits",
    "load_channel",
    "log_on_support",
    "make_iteration_state",
    "output_state",
    "quantum_relative_entropy",
    "random_channel",
    "rate_diagnostics",
    "relative_entropy_nats",
    "save_channel",
    "solve_fixed_lambda",
    "surrogate_objective",
    "trace_product",
    "unconstrained_capacity",
    "upper_bound",
    "validate_density",
    "von_neumann_entropy",
]
