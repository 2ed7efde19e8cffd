"""Unitary evolution and transfer fidelities in a fixed-excitation subspace."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..fock import FockBasis
from ..hamiltonian import SubspaceHamiltonian

NORM_TOL = 1e-10


@dataclass(frozen=True)
class StateVector:
    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dim,):
            raise ValueError(f"expected {self.basis.dim} amplitudes, got {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    def overlap(self, other: "StateVector") -> complex:
        _same_basis(self.basis, other.basis)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _same_basis(a: FockBasis, b: FockBasis) -> None:
    if a is not b and (a.n_sites, a.n_excitations) != (b.n_sites, b.n_excitations):
        raise ValueError("states live in different Fock bases")


def fock_state(basis: FockBasis, occupation: Iterable[int]) -> StateVector:
    return StateVector(basis, basis.basis_vector(occupation))


def bell_states(q_a: int, q_b: int, basis: FockBasis) -> StateVector:
    """``(|1_a> - |1_b>)/sqrt(2)`` in the single-excitation basis (site indices)."""
    if basis.n_excitations != 1:
        raise ValueError("Bell states live in the single-excitation sector")
    if q_a == q_b:
        raise ValueError("Bell state needs two distinct sites")
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.index([q_a])] = 1 / np.sqrt(2)
    amps[basis.index([q_b])] = -1 / np.sqrt(2)
    return StateVector(basis, amps)


def _check(H: SubspaceHamiltonian, psi: StateVector) -> None:
    if psi.basis is not H.basis and (
        psi.basis.n_sites != H.basis.n_sites or psi.basis.n_excitations != H.basis.n_excitations
    ):
        raise ValueError("state and Hamiltonian use different bases")


def evolve_amplitudes(H: SubspaceHamiltonian, psi0: np.ndarray, times: Sequence[float]) -> np.ndarray:
    """Rows are ``exp(-iHt) psi0`` for each ``t`` in ``times`` (ns)."""
    v, lam = H.eigenvectors, H.eigenvalues
    times = np.asarray(times, dtype=float)
    c0 = v.T @ psi0
    out = (np.exp(-1j * np.outer(times, lam)) * c0) @ v.T
    out[times == 0] = psi0  # exact at t = 0
    return out


def evolve(H: SubspaceHamiltonian, psi0: StateVector, t: float) -> StateVector:
    _check(H, psi0)
    if t == 0:
        return psi0
    amps = evolve_amplitudes(H, psi0.amplitudes, [t])[0]
    return StateVector(psi0.basis, amps)


def transfer_amplitudes(
    H: SubspaceHamiltonian, psi0: StateVector, target: StateVector, times: Sequence[float]
) -> np.ndarray:
    """Complex ``<target|psi(t)>`` over ``times``."""
    _check(H, psi0)
    _check(H, target)
    v, lam = H.eigenvectors, H.eigenvalues
    times = np.asarray(times, dtype=float)
    left = np.conj(target.amplitudes) @ v
    right = v.T @ psi0.amplitudes
    out = np.exp(-1j * np.outer(times, lam)) @ (left * right)
    out[times == 0] = np.vdot(target.amplitudes, psi0.amplitudes)
    return out


def transfer_fidelity(
    H: SubspaceHamiltonian, psi0: StateVector, target: StateVector, t: float, squared: bool = False
) -> float:
    """``|<target|exp(-iHt)|psi0>|``; the population form ``|.|**2`` with ``squared=True``."""
    f = float(abs(transfer_amplitudes(H, psi0, target, [t])[0]))
    f = min(f, 1.0)
    return f * f if squared else f


def peak_fidelity(
    H: SubspaceHamiltonian,
    psi0: StateVector,
    target: StateVector,
    t_max: float,
    n_points: int = 2001,
) -> tuple[float, float]:
    """Best ``(t, F)`` on a uniform grid over ``[0, t_max]`` refined by bounded search."""
    from scipy.optimize import minimize_scalar

    times = np.linspace(0.0, t_max, n_points)
    f = np.abs(transfer_amplitudes(H, psi0, target, times))
    k = int(np.argmax(f))
    lo, hi = times[max(k - 1, 0)], times[min(k + 1, n_points - 1)]
    if hi > lo:
        res = minimize_scalar(
            lambda t: -abs(transfer_amplitudes(H, psi0, target, [t])[0]),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-9 * max(t_max, 1.0)},
        )
        if -res.fun > f[k]:
            return float(res.x), float(min(-res.fun, 1.0))
    return float(times[k]), float(min(f[k], 1.0))
