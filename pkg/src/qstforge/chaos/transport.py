"""Wave-packet centre of mass and spread in two-excitation Fock space."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..dynamics.evolution import StateVector, evolve_amplitudes
from ..fock import fock_distances
from ..hamiltonian import SubspaceHamiltonian
from ..lattice import LatticeSpec


@dataclass(frozen=True)
class TransportSeries:
    times: np.ndarray
    mean_distance: np.ndarray
    rms_spread: np.ndarray
    max_distance: float
    mean_over_states: float


def _reference(psi0: StateVector) -> tuple[int, ...]:
    pops = psi0.populations()
    k = int(np.argmax(pops))
    if not np.isclose(pops[k], 1.0, atol=1e-12):
        raise ValueError("transport needs a Fock-state initial condition")
    return psi0.basis.states[k]


def transport_series(
    H: SubspaceHamiltonian, psi0: StateVector, spec: LatticeSpec, times: Sequence[float]
) -> TransportSeries:
    """``<d(t)>`` and ``sqrt(sum d**2 |c_n|**2)`` relative to the initial Fock state."""
    ref = _reference(psi0)
    d = fock_distances(psi0.basis, spec, ref)
    times = np.asarray(times, dtype=float)
    probs = np.abs(evolve_amplitudes(H, psi0.amplitudes, times)) ** 2
    return TransportSeries(
        times,
        probs @ d,
        np.sqrt(probs @ d**2),
        float(d.max()),
        float(d.mean()),
    )


def spreading_exponent(series: TransportSeries, t_min: float, t_max: float) -> float:
    """Least-squares slope of log(sigma) vs log(t) over ``[t_min, t_max]``."""
    sel = (series.times >= t_min) & (series.times <= t_max) & (series.times > 0)
    sel &= series.rms_spread > 0
    if sel.sum() < 2:
        raise ValueError("need at least two positive samples inside the fit window")
    slope, _ = np.polyfit(np.log(series.times[sel]), np.log(series.rms_spread[sel]), 1)
    return float(slope)
