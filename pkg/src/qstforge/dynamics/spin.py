"""Large-spin picture of single-excitation dynamics on an n1 x n2 grid.

A single excitation at (x, y) is the product state |m1> (x) |m2> of a
spin-(n1-1)/2 (columns, x direction) and a spin-(n2-1)/2 (rows, y direction),
with x = 1 (y = 1) the +s pole. With the row-major site index the amplitude
vector reshapes to (n2, n1), so the y-spin is the leading Kronecker factor.
"""
from __future__ import annotations

import numpy as np

from ..lattice import LatticeSpec
from .evolution import StateVector


def spin_matrices(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(Sx, Sy, Sz) for spin (n-1)/2, basis ordered m = +s, ..., -s."""
    if n < 1:
        raise ValueError("spin multiplicity must be >= 1")
    k = np.arange(1, n)
    ladder = np.sqrt(k * (n - k))                   # <k|S+|k+1>
    s_plus = np.diag(ladder, 1).astype(complex)
    sx = (s_plus + s_plus.conj().T) / 2
    sy = (s_plus - s_plus.conj().T) / 2j
    sz = np.diag((n - 1) / 2 - np.arange(n)).astype(complex)
    return sx, sy, sz


def collective_spins(n1: int, n2: int) -> dict[str, np.ndarray]:
    """``{"S1x": ..., "S2z": ...}`` acting on the row-major single-excitation basis."""
    s1 = spin_matrices(n1)
    s2 = spin_matrices(n2)
    i1, i2 = np.eye(n1), np.eye(n2)
    ops = {}
    for name, a, b in zip("xyz", s1, s2):
        ops[f"S1{name}"] = np.kron(i2, a)
        ops[f"S2{name}"] = np.kron(b, i1)
    return ops


SPIN_LABELS = ("S1x", "S1y", "S1z", "S2x", "S2y", "S2z")


def spin_expectations(amplitudes: np.ndarray, spec: LatticeSpec) -> np.ndarray:
    """Expectations for one state (shape (6,)) or a stack of states (shape (T, 6))."""
    amps = np.atleast_2d(amplitudes)
    if amps.shape[1] != spec.n_sites:
        raise ValueError("spin picture needs single-excitation amplitudes")
    ops = collective_spins(spec.n1, spec.n2)
    out = np.stack(
        [np.einsum("ti,ij,tj->t", amps.conj(), ops[k], amps).real for k in SPIN_LABELS], axis=1
    )
    return out[0] if np.ndim(amplitudes) == 1 else out


def spin_trajectory(psi_t: StateVector, spec: LatticeSpec) -> tuple[float, ...]:
    """(<S1x>, <S1y>, <S1z>, <S2x>, <S2y>, <S2z>) for a single-excitation state."""
    if psi_t.basis.n_excitations != 1:
        raise ValueError("spin trajectory is defined for single-excitation states only")
    return tuple(float(v) for v in spin_expectations(psi_t.amplitudes, spec))


def large_spin_hamiltonian(n1: int, n2: int, j_ang: float, jx_ang: float = 0.0) -> np.ndarray:
    """``2J(S1x + S2x) + 4Jx S1x S2x`` in the row-major site basis (same units as J)."""
    ops = collective_spins(n1, n2)
    h = 2 * j_ang * (ops["S1x"] + ops["S2x"]) + 4 * jx_ang * ops["S1x"] @ ops["S2x"]
    return h.real
