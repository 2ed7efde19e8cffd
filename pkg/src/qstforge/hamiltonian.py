"""XY (flip-flop) Hamiltonians restricted to a fixed-excitation subspace.

Couplings are stored as J/2pi in MHz. Matrices are in angular units, rad/ns,
so that ``exp(-1j * H * t)`` takes ``t`` in ns.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .fock import FockBasis, parity_permutation
from .lattice import BondKind, LatticeSpec, build_grid, mirror_bond_indices

MHZ = 2 * np.pi * 1e-3  # MHz (J/2pi) -> rad/ns


def tj_to_ns(tj: float, j_mhz: float) -> float:
    """Convert dimensionless ``t*J`` to ns for a coupling scale ``J/2pi`` in MHz."""
    return tj / (abs(j_mhz) * MHZ)


class Symmetry(enum.Enum):
    FREE = "free"
    INVERSION = "inversion"


@dataclass(frozen=True)
class CouplingConfig:
    """Signed coupling (MHz) for every bond of ``spec``, in ``spec.bonds`` order."""

    spec: LatticeSpec
    values: np.ndarray
    symmetry: Symmetry = Symmetry.FREE

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (len(self.spec.bonds),):
            raise ValueError(
                f"expected {len(self.spec.bonds)} coupling values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("coupling values must be finite")
        for k, bond in enumerate(self.spec.bonds):
            if bond.fixed is not None and values[k] != bond.fixed:
                raise ValueError(f"bond {bond.a}-{bond.b} is pinned at {bond.fixed} MHz")
        sym = Symmetry(self.symmetry)
        if sym is Symmetry.INVERSION:
            bad = _asymmetric_bonds(self.spec, values)
            if bad:
                b = self.spec.bonds[bad[0]]
                raise ValueError(f"inversion symmetry violated at bond {b.a}-{b.b}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "symmetry", sym)

    def __getitem__(self, bond) -> float:
        if not isinstance(bond, tuple) or len(bond) != 2:
            bond = bond.key
        return float(self.values[self.spec.bond_index(*bond)])

    def with_values(self, values: np.ndarray) -> "CouplingConfig":
        return CouplingConfig(self.spec, values, self.symmetry)

    def nn_values(self) -> np.ndarray:
        mask = np.array([b.kind.is_nn for b in self.spec.bonds], dtype=bool)
        return self.values[mask]

    def to_dict(self) -> dict:
        nn, cross = [], []
        for b, v in zip(self.spec.bonds, self.values):
            entry = {"a": [b.a.x, b.a.y], "b": [b.b.x, b.b.y], "value_mhz": float(v)}
            (nn if b.kind.is_nn else cross).append(entry)
        out: dict = {"symmetry": self.symmetry.value, "nn": nn}
        if cross:
            vals = {c["value_mhz"] for c in cross}
            out["cross_mhz"] = vals.pop() if len(vals) == 1 else cross
        else:
            out["cross_mhz"] = 0.0
        return out

    @classmethod
    def from_dict(cls, spec: LatticeSpec, data: Mapping) -> "CouplingConfig":
        values = np.full(len(spec.bonds), np.nan)
        for entry in data.get("nn", []):
            k = spec.bond_index(entry["a"], entry["b"])
            if not spec.bonds[k].kind.is_nn:
                raise ValueError(f"bond {entry['a']}-{entry['b']} is not nearest-neighbour")
            values[k] = float(entry["value_mhz"])
        cross = data.get("cross_mhz", 0.0)
        cross_idx = [k for k, b in enumerate(spec.bonds) if b.kind is BondKind.CROSS]
        if isinstance(cross, (int, float)):
            values[cross_idx] = float(cross)
        else:
            for entry in cross:
                k = spec.bond_index(entry["a"], entry["b"])
                values[k] = float(entry["value_mhz"])
        for k, b in enumerate(spec.bonds):
            if b.fixed is not None:
                if not np.isnan(values[k]) and values[k] != b.fixed:
                    raise ValueError(f"bond {b.a}-{b.b} is pinned at {b.fixed} MHz")
                values[k] = b.fixed
        missing = np.flatnonzero(np.isnan(values))
        if missing.size:
            b = spec.bonds[missing[0]]
            raise ValueError(f"missing coupling value for bond {b.a}-{b.b}")
        return cls(spec, values, Symmetry(data.get("symmetry", "free")))


def _asymmetric_bonds(spec: LatticeSpec, values: np.ndarray) -> list[int]:
    mirror = mirror_bond_indices(spec)
    bad = []
    for k, b in enumerate(spec.bonds):
        m = mirror[k]
        if not b.kind.is_nn or b.fixed is not None or spec.bonds[m].fixed is not None:
            continue
        if values[k] != values[m]:
            bad.append(k)
    return bad


def uniform_couplings(
    spec: LatticeSpec, nn_mhz: float, cross_mhz: float = 0.0, symmetry=Symmetry.FREE
) -> CouplingConfig:
    values = np.array(
        [
            b.fixed if b.fixed is not None else (nn_mhz if b.kind.is_nn else cross_mhz)
            for b in spec.bonds
        ]
    )
    return CouplingConfig(spec, values, symmetry)


def standard_protocol(n: int, J: float) -> np.ndarray:
    """Chain couplings ``J*sqrt(k*(n-k))`` for k = 1..n-1 (perfect mirror transfer)."""
    if n < 2:
        raise ValueError(f"chain length must be >= 2, got {n}")
    k = np.arange(1, n)
    return J * np.sqrt(k * (n - k))


def product_protocol_2d(
    n1: int,
    n2: int,
    J: float,
    *,
    spec: LatticeSpec | None = None,
    cross_mhz: float = 0.0,
    cross_profile: str = "constant",
) -> CouplingConfig:
    """Standard protocol along every row and column.

    ``cross_profile="large_spin"`` scales the diagonal bonds of plaquette (m, m')
    by ``sqrt(m(n1-m)) * sqrt(m'(n2-m'))``, the form under which the single
    excitation problem reduces to two coupled large spins. Pinned bonds in
    ``spec`` keep their value.
    """
    if n1 < 2 and n2 < 2:
        raise ValueError("product protocol needs at least one direction of length >= 2")
    if spec is None:
        spec = build_grid(n1, n2, cross=cross_mhz != 0.0)
    elif (spec.n1, spec.n2) != (n1, n2):
        raise ValueError("spec dimensions do not match")
    if cross_profile not in ("constant", "large_spin"):
        raise ValueError(f"unknown cross profile {cross_profile!r}")
    row = standard_protocol(n1, J) if n1 >= 2 else np.zeros(0)
    col = standard_protocol(n2, J) if n2 >= 2 else np.zeros(0)
    values = np.empty(len(spec.bonds))
    for k, b in enumerate(spec.bonds):
        if b.fixed is not None:
            values[k] = b.fixed
        elif b.kind is BondKind.NN_X:
            values[k] = row[b.a.x - 1]
        elif b.kind is BondKind.NN_Y:
            values[k] = col[b.a.y - 1]
        else:
            m, mp = min(b.a.x, b.b.x), min(b.a.y, b.b.y)
            scale = 1.0
            if cross_profile == "large_spin":
                scale = np.sqrt(m * (n1 - m)) * np.sqrt(mp * (n2 - mp))
            values[k] = cross_mhz * scale
    return CouplingConfig(spec, values, Symmetry.INVERSION)


def large_spin_spectrum(n1: int, n2: int, J: float) -> np.ndarray:
    """Sorted ``2J(m1 + m2)`` over the spin-(n1-1)/2 x spin-(n2-1)/2 multiplets, in units of J."""
    if n1 < 1 or n2 < 1:
        raise ValueError("dimensions must be >= 1")
    m1 = np.arange(n1) - (n1 - 1) / 2
    m2 = np.arange(n2) - (n2 - 1) / 2
    return np.sort((2 * J * (m1[:, None] + m2[None, :])).ravel())


@dataclass(frozen=True)
class HoppingTable:
    """Upper-triangular nonzero pattern of H: entry ``(rows[k], cols[k])`` hops across ``bond[k]``."""

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    bond: np.ndarray
    occupied: np.ndarray = field(repr=False)

    def assemble(self, values_mhz: np.ndarray, onsite_mhz: np.ndarray | None = None) -> np.ndarray:
        h = np.zeros((self.dim, self.dim))
        amp = values_mhz[self.bond] * MHZ
        h[self.rows, self.cols] = amp
        h[self.cols, self.rows] = amp
        if onsite_mhz is not None:
            h[np.diag_indices(self.dim)] = np.asarray(onsite_mhz)[self.occupied].sum(axis=1) * MHZ
        return h


def hopping_table(spec: LatticeSpec, basis: FockBasis) -> HoppingTable:
    if basis.n_sites != spec.n_sites:
        raise ValueError(
            f"basis has {basis.n_sites} sites but lattice has {spec.n_sites}"
        )
    return _hopping_table(spec, basis.n_sites, basis.n_excitations)


@functools.lru_cache(maxsize=32)
def _hopping_table(spec: LatticeSpec, n_sites: int, n_exc: int) -> HoppingTable:
    from .fock import build_basis

    basis = build_basis(n_sites, n_exc)
    neighbours: list[list[tuple[int, int]]] = [[] for _ in range(n_sites)]
    for k, (i, j) in enumerate(spec.bond_sites()):
        neighbours[i].append((j, k))
        neighbours[j].append((i, k))
    rows, cols, bonds = [], [], []
    for m, state in enumerate(basis.states):
        occ = set(state)
        for i in state:
            for j, k in neighbours[i]:
                if j in occ:
                    continue  # hardcore constraint
                n = basis.index_of[tuple(sorted((occ - {i}) | {j}))]
                if m < n:
                    rows.append(m)
                    cols.append(n)
                    bonds.append(k)
    as_arr = lambda a: np.array(a, dtype=np.intp)
    return HoppingTable(basis.dim, as_arr(rows), as_arr(cols), as_arr(bonds), basis.occupied)


class SubspaceHamiltonian:
    """Dense real-symmetric H in a Fock basis, eigendecomposed on construction."""

    def __init__(self, basis: FockBasis, matrix: np.ndarray, spec: LatticeSpec | None = None):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (basis.dim, basis.dim):
            raise ValueError(f"matrix shape {matrix.shape} does not match basis dim {basis.dim}")
        if not np.array_equal(matrix, matrix.T):
            raise ValueError("Hamiltonian matrix must be exactly symmetric")
        self.basis = basis
        self.spec = spec
        self.matrix = matrix
        self.matrix.setflags(write=False)
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(matrix)

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    def commutes_with_parity(self, atol: float = 1e-12) -> bool:
        if self.spec is None:
            raise ValueError("parity check needs the lattice")
        perm = parity_permutation(self.basis, self.spec)
        return bool(np.max(np.abs(self.matrix - self.matrix[np.ix_(perm, perm)]), initial=0.0) <= atol)


def build_hamiltonian(
    spec: LatticeSpec,
    couplings: CouplingConfig,
    basis: FockBasis,
    onsite_mhz: Sequence[float] | None = None,
) -> SubspaceHamiltonian:
    """Flip-flop Hamiltonian for ``couplings`` in ``basis``; optional on-site shifts (MHz)."""
    if couplings.spec is not spec and couplings.spec != spec:
        raise ValueError("couplings were defined for a different lattice")
    table = hopping_table(spec, basis)
    onsite = None if onsite_mhz is None else np.asarray(onsite_mhz, dtype=float)
    if onsite is not None and onsite.shape != (spec.n_sites,):
        raise ValueError(f"onsite shifts need one value per site ({spec.n_sites})")
    return SubspaceHamiltonian(basis, table.assemble(couplings.values, onsite), spec)

