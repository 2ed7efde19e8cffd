from .evolution import (
    StateVector,
    bell_states,
    evolve,
    evolve_amplitudes,
    fock_state,
    peak_fidelity,
    transfer_amplitudes,
    transfer_fidelity,
)
from .qsl import QslCurve, QslReport, qsl_bounds_curve, qsl_report
from .spin import SPIN_LABELS, collective_spins, spin_expectations, large_spin_hamiltonian, spin_matrices, spin_trajectory

__all__ = [
    "StateVector",
    "bell_states",
    "evolve",
    "evolve_amplitudes",
    "fock_state",
    "peak_fidelity",
    "transfer_amplitudes",
    "transfer_fidelity",
    "QslCurve",
    "QslReport",
    "qsl_bounds_curve",
    "qsl_report",
    "SPIN_LABELS",
    "spin_expectations",
    "collective_spins",
    "large_spin_hamiltonian",
    "spin_matrices",
    "spin_trajectory",
]
