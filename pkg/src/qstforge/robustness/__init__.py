from .noise import NoiseKind, NoiseSweepResult, coupling_noise_sweep, frequency_noise_sweep
from .thermal import (
    MAX_SITES,
    Measure,
    Protocol,
    ThermalSweepResult,
    case_fidelities,
    embed,
    evolve_full,
    full_space_hamiltonian,
    protocol_case,
    subsystem_fidelity,
    thermal_product_state,
    thermal_sweep,
)

__all__ = [
    "NoiseKind",
    "NoiseSweepResult",
    "coupling_noise_sweep",
    "frequency_noise_sweep",
    "MAX_SITES",
    "Measure",
    "Protocol",
    "ThermalSweepResult",
    "case_fidelities",
    "embed",
    "evolve_full",
    "full_space_hamiltonian",
    "protocol_case",
    "subsystem_fidelity",
    "thermal_product_state",
    "thermal_sweep",
]
