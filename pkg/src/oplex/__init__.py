"""Opinion dynamics on two-layer multiplex networks.

Library + CLI lab for the merged (blended weights) and switching (periodic
schedule) coordination models: transition matrices, stationary
distributions, SLEM bounds, perturbation stability, and a config-driven
experiment harness.
"""

from .netcore import (
    EdgeListError,
    GeneratorSpec,
    LayerGraph,
    build_layer,
    generate,
    load_edge_list,
    load_two_layer_dataset,
)
from .stochastic import (
    NotPrimitiveError,
    PrimitivityReport,
    StationaryDistribution,
    TransitionMatrix,
    consensus_value,
    is_primitive,
    matrix_power,
    max_norm,
    pi_norm,
    stationary_from_degrees,
    stationary_general,
    transition_matrix,
    wielandt_bound,
)
from .spectral import (
    SpectralSummary,
    eig_moduli_nonsymmetric,
    rayleigh_quotient,
    slem_reversible,
    symmetrize,
)
from .merged import (
    MergedBoundsReport,
    MergedModel,
    PrimitivityGuarantee,
    alpha_stability_sweep,
    consensus_interval,
    merge,
    merged_consensus,
    merged_perturbation_check,
    primitivity_guarantee,
    slem_bounds,
)
from .switching import (
    OscillationEvidence,
    SwitchingModel,
    SwitchingOutcome,
    analyze,
    cycle_matrix,
    k_stability_sweep,
    rho_star,
    schedule_matrix,
    switching_model,
    switching_perturbation_check,
)
from .perturb import (
    PerturbationReport,
    ShiftFamilyFit,
    fit_shift_family,
    fundamental_matrix,
    shift_bound_check,
    stationary_shift,
)
from .simlab import (
    DecayCheckResult,
    OpinionTrajectory,
    constant_schedule,
    decay_check,
    fit_rate,
    simulate,
)
from .harness import (
    ConfigError,
    ExperimentConfig,
    ExperimentResult,
    load_config,
    parse_config,
    run_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "EdgeListError",
    "GeneratorSpec",
    "LayerGraph",
    "build_layer",
    "generate",
    "load_edge_list",
    "load_two_layer_dataset",
    "NotPrimitiveError",
    "PrimitivityReport",
    "StationaryDistribution",
    "TransitionMatrix",
    "consensus_value",
    "is_primitive",
    "matrix_power",
    "max_norm",
    "pi_norm",
    "stationary_from_degrees",
    "stationary_general",
    "transition_matrix",
    "wielandt_bound",
    "SpectralSummary",
    "eig_moduli_nonsymmetric",
    "rayleigh_quotient",
    "slem_reversible",
    "symmetrize",
    "MergedBoundsReport",
    "MergedModel",
    "PrimitivityGuarantee",
    "alpha_stability_sweep",
    "consensus_interval",
    "merge",
    "merged_consensus",
    "merged_perturbation_check",
    "primitivity_guarantee",
    "slem_bounds",
    "OscillationEvidence",
    "SwitchingModel",
    "SwitchingOutcome",
    "analyze",
    "cycle_matrix",
    "k_stability_sweep",
    "rho_star",
    "schedule_matrix",
    "switching_model",
    "switching_perturbation_check",
    "PerturbationReport",
    "ShiftFamilyFit",
    "fit_shift_family",
    "fundamental_matrix",
    "shift_bound_check",
    "stationary_shift",
    "DecayCheckResult",
    "OpinionTrajectory",
    "constant_schedule",
    "decay_check",
    "fit_rate",
    "simulate",
    "ConfigError",
    "ExperimentConfig",
    "ExperimentResult",
    "load_config",
    "parse_config",
    "run_experiment",
]
