"""Quantum-speed-limit times and overlap bounds.

Mandelstam-Tamm: ``|<psi0|psi(t)>| >= cos(dE t)`` for ``dE t <= pi/2``.
Margolus-Levitin form: ``cos(sqrt(pi (E - E_g) t / 2))`` with the mean energy
measured from the ground state. Both bounds are set to zero past their first
zero, where they carry no information.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..hamiltonian import SubspaceHamiltonian
from .evolution import StateVector, _check


@dataclass(frozen=True)
class QslReport:
    mean_energy_gap: float      # E - E_g, rad/ns
    energy_uncertainty: float   # dE, rad/ns
    t_dE: float                 # ns, inf for stationary states
    t_E: float                  # ns, inf when E == E_g

    @property
    def t_qsl(self) -> float:
        return max(self.t_dE, self.t_E)


def _moments(H: SubspaceHamiltonian, psi0: StateVector) -> tuple[float, float, float]:
    _check(H, psi0)
    p = np.abs(H.eigenvectors.T @ psi0.amplitudes) ** 2
    lam = H.eigenvalues
    e = float(p @ lam)
    var = float(p @ (lam - e) ** 2)
    scale = max(float(np.max(np.abs(lam), initial=0.0)), 1e-300)
    gap = e - H.ground_energy
    d_e = math.sqrt(var) if var > (1e-12 * scale) ** 2 else 0.0
    gap = gap if gap > 1e-12 * scale else 0.0
    return e, d_e, gap


def qsl_report(H: SubspaceHamiltonian, psi0: StateVector) -> QslReport:
    _, d_e, gap = _moments(H, psi0)
    t_de = math.pi / (2 * d_e) if d_e > 0 else math.inf
    t_e = math.pi / (2 * gap) if gap > 0 else math.inf
    return QslReport(gap, d_e, t_de, t_e)


def mt_bound(d_e: float, times: np.ndarray) -> np.ndarray:
    arg = d_e * np.asarray(times, dtype=float)
    return np.where(arg <= np.pi / 2, np.cos(np.minimum(arg, np.pi / 2)), 0.0)


def ml_bound(gap: float, times: np.ndarray) -> np.ndarray:
    arg = np.sqrt(np.pi * gap * np.asarray(times, dtype=float) / 2)
    return np.where(arg <= np.pi / 2, np.cos(np.minimum(arg, np.pi / 2)), 0.0)


@dataclass(frozen=True)
class QslCurve:
    times: np.ndarray
    overlap: np.ndarray
    mt_bound: np.ndarray
    ml_bound: np.ndarray
    report: QslReport

    def mt_violation(self) -> float:
        """Largest ``mt_bound - overlap`` before the bound's first zero (<= 0 means respected)."""
        live = self.mt_bound > 0
        if not live.any():
            return -np.inf
        return float(np.max(self.mt_bound[live] - self.overlap[live]))

    def ml_violation(self) -> float:
        live = self.ml_bound > 0
        if not live.any():
            return -np.inf
        return float(np.max(self.ml_bound[live] - self.overlap[live]))


def qsl_bounds_curve(H: SubspaceHamiltonian, psi0: StateVector, times: Sequence[float]) -> QslCurve:
    """Survival amplitude ``|<psi0|psi(t)>|`` alongside both lower bounds."""
    from .evolution import transfer_amplitudes

    report = qsl_report(H, psi0)
    times = np.asarray(times, dtype=float)
    overlap = np.minimum(np.abs(transfer_amplitudes(H, psi0, psi0, times)), 1.0)
    return QslCurve(
        times,
        overlap,
        mt_bound(report.energy_uncertainty, times),
        ml_bound(report.mean_energy_gap, times),
        report,
    )
