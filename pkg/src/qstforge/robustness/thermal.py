"""Residual thermal populations: full-Hilbert-space simulation and size extrapolation.

Site ``i`` is bit ``i`` of the computational-basis index (site 0 least significant).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .. import rng as rngmod
from ..errors import ResourceLimitError
from ..fock import FockBasis
from ..hamiltonian import MHZ, CouplingConfig, product_protocol_2d, tj_to_ns
from ..lattice import LatticeSpec, build_grid

MAX_SITES = 14


class Protocol(enum.Enum):
    SINGLE = "single"
    BELL = "bell"
    TWO = "two"


class Measure(enum.Enum):
    SUBSYSTEM = "subsystem"   # fidelity of the reduced state on the target qubits
    FULL = "full"             # overlap with the full target product state


def _check_size(n_sites: int) -> None:
    if n_sites > MAX_SITES:
        raise ResourceLimitError(f"full-space simulation limited to {MAX_SITES} sites, got {n_sites}")


def full_space_hamiltonian(spec: LatticeSpec, couplings: CouplingConfig,
                           onsite_mhz: Sequence[float] | None = None) -> sp.csr_matrix:
    """Sparse flip-flop Hamiltonian on all ``2**n`` states (rad/ns)."""
    n = spec.n_sites
    _check_size(n)
    dim = 1 << n
    states = np.arange(dim)
    rows, cols, vals = [], [], []
    for (i, j), value in zip(spec.bond_sites(), couplings.values):
        if value == 0:
            continue
        bi = (states >> i) & 1
        bj = (states >> j) & 1
        src = states[bi != bj]
        rows.append(src)
        cols.append(src ^ ((1 << i) | (1 << j)))
        vals.append(np.full(src.size, value * MHZ))
    if onsite_mhz is not None:
        bits = (states[:, None] >> np.arange(n)[None, :]) & 1
        rows.append(states)
        cols.append(states)
        vals.append(bits @ (np.asarray(onsite_mhz, dtype=float) * MHZ))
    if not rows:
        return sp.csr_matrix((dim, dim))
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
    )


def embed(basis: FockBasis, amplitudes: np.ndarray) -> np.ndarray:
    """Place fixed-excitation amplitudes into the full ``2**n`` space."""
    _check_size(basis.n_sites)
    out = np.zeros(1 << basis.n_sites, dtype=complex)
    idx = (1 << basis.occupied).sum(axis=1)
    out[idx] = amplitudes
    return out


def evolve_full(H: sp.spmatrix, states: np.ndarray, t: float) -> np.ndarray:
    """``exp(-iHt)`` applied to a vector or to the columns of a matrix."""
    return expm_multiply(-1j * t * H, states)


def _site_factors(excited: bool, gamma: np.ndarray, theta: np.ndarray) -> np.ndarray:
    g = gamma
    phase = np.exp(1j * theta)
    if excited:
        return np.stack([np.sqrt(g), phase * np.sqrt(1 - g)], axis=-1)
    return np.stack([np.sqrt(1 - g), phase * np.sqrt(g)], axis=-1)


def thermal_product_state(
    n_sites: int,
    excited_sites: Sequence[int],
    gamma: float,
    rng: np.random.Generator,
    bell_pair: tuple[int, int] | None = None,
) -> np.ndarray:
    """Random product state with per-qubit residual population ``gamma_i ~ N(gamma, 0.2 gamma)``.

    With ``bell_pair=(a, b)`` the two-qubit factor on (a, b) is replaced by the
    ideal ``(|1_a 0_b> - |0_a 1_b>)/sqrt(2)``.
    """
    _check_size(n_sites)
    if not 0 <= gamma <= 1:
        raise ValueError("gamma must lie in [0, 1]")
    gammas = np.clip(rng.normal(gamma, 0.2 * gamma, size=n_sites), 0.0, 1.0)
    thetas = rng.uniform(0.0, 2 * np.pi, size=n_sites)
    excited = set(int(s) for s in excited_sites)
    skip = set(bell_pair) if bell_pair else set()
    vec = np.ones(1, dtype=complex)
    for i in range(n_sites):
        if i in skip:
            continue
        factor = _site_factors(i in excited, gammas[i], thetas[i])
        vec = np.kron(factor, vec)
    if bell_pair:
        vec = _insert_pair(vec, n_sites, bell_pair)
    return vec


def _insert_pair(rest: np.ndarray, n_sites: int, pair: tuple[int, int]) -> np.ndarray:
    a, b = pair
    others = [i for i in range(n_sites) if i not in pair]
    out = np.zeros(1 << n_sites, dtype=complex)
    idx_rest = np.zeros(rest.size, dtype=np.int64)
    for k, site in enumerate(others):
        idx_rest |= ((np.arange(rest.size) >> k) & 1) << site
    out[idx_rest | (1 << a)] = rest / np.sqrt(2)
    out[idx_rest | (1 << b)] = -rest / np.sqrt(2)
    return out


def subsystem_fidelity(psi: np.ndarray, n_sites: int, sites: Sequence[int], local: np.ndarray) -> float:
    """``<local| rho_sites |local>`` where ``local`` is indexed by bits of ``sites`` in order."""
    sites = list(sites)
    others = [i for i in range(n_sites) if i not in sites]
    # tensor axes: bit i of the index is axis (n_sites - 1 - i)
    t = psi.reshape([2] * n_sites)
    axes = [n_sites - 1 - i for i in reversed(sites)] + [n_sites - 1 - i for i in reversed(others)]
    m = t.transpose(axes).reshape(1 << len(sites), -1)
    amp = np.conj(local) @ m
    return float(np.vdot(amp, amp).real)


@dataclass(frozen=True)
class ThermalCase:
    spec: LatticeSpec
    couplings: CouplingConfig
    initial: tuple[int, ...]
    target: tuple[int, ...]
    t_qst: float
    bell: bool = False


def protocol_case(n1: int, n2: int, protocol: Protocol | str, j_mhz: float = 2.0,
                  couplings: CouplingConfig | None = None) -> ThermalCase:
    """Ideal lattice (no cross bonds, no defect) running the chosen transfer at ``tJ = pi/2``."""
    protocol = Protocol(protocol)
    spec = build_grid(n1, n2)
    n = spec.n_sites
    if couplings is None:
        if protocol is Protocol.TWO:
            raise ValueError("two-excitation thermal runs need optimized couplings")
        couplings = product_protocol_2d(n1, n2, -abs(j_mhz), spec=spec)
    t = tj_to_ns(np.pi / 2, j_mhz)
    if protocol is Protocol.SINGLE:
        return ThermalCase(spec, couplings, (0,), (n - 1,), t)
    if protocol is Protocol.BELL:
        return ThermalCase(spec, couplings, (0, 1), (n - 1, n - 2), t, bell=True)
    return ThermalCase(spec, couplings, (0, 1), (n - 2, n - 1), t)


def _local_target(case: ThermalCase) -> tuple[list[int], np.ndarray]:
    sites = list(case.target)
    local = np.zeros(1 << len(sites), dtype=complex)
    if case.bell:
        # (|1_first> - |1_second>)/sqrt(2) on the target pair
        local[1] = 1 / np.sqrt(2)
        local[2] = -1 / np.sqrt(2)
    else:
        local[-1] = 1.0
    return sites, local


def _full_target(case: ThermalCase) -> np.ndarray:
    sites, local = _local_target(case)
    out = np.zeros(1 << case.spec.n_sites, dtype=complex)
    for k, amp in enumerate(local):
        if amp == 0:
            continue
        idx = sum(1 << s for j, s in enumerate(sites) if (k >> j) & 1)
        out[idx] = amp
    return out


def case_fidelities(case: ThermalCase, gamma: float, n_realizations: int, seed: int,
                    measure: Measure | str = Measure.SUBSYSTEM) -> np.ndarray:
    """Transfer fidelity for each thermal realization."""
    measure = Measure(measure)
    n = case.spec.n_sites
    H = full_space_hamiltonian(case.spec, case.couplings)
    states = []
    for i in range(n_realizations):
        rng = rngmod.stream(seed, f"thermal-{n}-{gamma!r}", i)
        if case.bell:
            psi = thermal_product_state(n, [], gamma, rng, bell_pair=case.initial)
        else:
            psi = thermal_product_state(n, case.initial, gamma, rng)
        states.append(psi)
    evolved = evolve_full(H, np.stack(states, axis=1), case.t_qst)
    if measure is Measure.FULL:
        target = _full_target(case)
        return np.abs(np.conj(target) @ evolved) ** 2
    sites, local = _local_target(case)
    return np.array([subsystem_fidelity(evolved[:, k], n, sites, local) for k in range(n_realizations)])


@dataclass(frozen=True)
class ThermalSweepResult:
    sizes: list[tuple[int, int]]
    gammas: np.ndarray
    infidelity_mean: np.ndarray     # (n_sizes, n_gammas)
    infidelity_std: np.ndarray
    fit: dict = field(default_factory=dict)           # gamma -> polynomial coefficients (highest first)
    extrapolated: dict = field(default_factory=dict)  # gamma -> infidelity at target_sites
    target_sites: int = 36

    @property
    def site_counts(self) -> np.ndarray:
        return np.array([a * b for a, b in self.sizes])


def thermal_sweep(
    sizes: Sequence[tuple[int, int]] = ((2, 2), (2, 3), (3, 3), (3, 4)),
    protocol: Protocol | str = Protocol.SINGLE,
    gamma_list: Sequence[float] = (0.0, 0.005, 0.01, 0.02),
    n_realizations: int = 25,
    seed: int = 0,
    target_sites: int = 36,
    j_mhz: float = 2.0,
    measure: Measure | str = Measure.SUBSYSTEM,
    couplings_for: Callable[[int, int], CouplingConfig] | None = None,
) -> ThermalSweepResult:
    """Infidelity ``(F_0 - F_gamma)/F_0`` versus size, fitted and extrapolated.

    Single/Bell use a linear fit in the number of sites, two-excitation a quadratic.
    """
    protocol = Protocol(protocol)
    sizes = [tuple(s) for s in sizes]
    for n1, n2 in sizes:
        _check_size(n1 * n2)
    gammas = np.asarray(gamma_list, dtype=float)
    mean = np.zeros((len(sizes), len(gammas)))
    std = np.zeros_like(mean)
    for a, (n1, n2) in enumerate(sizes):
        c = couplings_for(n1, n2) if couplings_for else None
        case = protocol_case(n1, n2, protocol, j_mhz, c)
        f0 = case_fidelities(case, 0.0, 1, seed, measure)[0]
        for g, gamma in enumerate(gammas):
            if gamma == 0:
                continue
            f = case_fidelities(case, gamma, n_realizations, seed, measure)
            inf = (f0 - f) / f0
            mean[a, g] = inf.mean()
            std[a, g] = inf.std(ddof=1) if n_realizations > 1 else 0.0
    deg = 2 if protocol is Protocol.TWO else 1
    x = np.array([a * b for a, b in sizes], dtype=float)
    fit, extrap = {}, {}
    if len(sizes) > deg:
        for g, gamma in enumerate(gammas):
            coef = np.polyfit(x, mean[:, g], deg)
            fit[float(gamma)] = coef
            extrap[float(gamma)] = float(np.polyval(coef, target_sites))
    return ThermalSweepResult(sizes, gammas, mean, std, fit, extrap, target_sites)
