"""Quantum reference-system calculus and two-particle Bell-experiment simulator."""

from ._core import (
    ChshAngles,
    ConfigError,
    CorrelationTable,
    ExperimentConfig,
    NonDisjointSystems,
    NotNormalized,
    QrsError,
    ancilla_joint_distribution,
    chsh,
    correlation_entangled,
    correlation_factorized,
    correlation_postulate_c,
    device_marginal,
    evolve_experiment,
    intuitive_joint,
    joint_distribution,
    run_scenario,
)

__all__ = [
    "ChshAngles",
    "ConfigError",
    "CorrelationTable",
    "ExperimentConfig",
    "NonDisjointSystems",
    "NotNormalized",
    "QrsError",
    "ancilla_joint_distribution",
    "chsh",
    "correlation_entangled",
    "correlation_factorized",
    "correlation_postulate_c",
    "device_marginal",
    "evolve_experiment",
    "intuitive_joint",
    "joint_distribution",
    "run_scenario",
]
