"""Fixed-excitation-number Fock bases, Fock-space distances and parity sectors."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .lattice import LatticeSpec, inversion_map


@dataclass(frozen=True)
class FockBasis:
    """Lexicographically ordered n-excitation states of ``n_sites`` hardcore bosons."""

    n_sites: int
    n_excitations: int
    states: tuple[tuple[int, ...], ...]
    index_of: dict = field(repr=False, compare=False)
    occupied: np.ndarray = field(repr=False, compare=False)  # (D, n_exc) site indices

    @property
    def dim(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def index(self, occupation: Iterable[int]) -> int:
        key = tuple(sorted(int(i) for i in occupation))
        try:
            return self.index_of[key]
        except KeyError:
            raise KeyError(f"{key} is not a state of this basis") from None

    def occupations(self) -> np.ndarray:
        """(D, n_sites) 0/1 occupation matrix."""
        occ = np.zeros((self.dim, self.n_sites), dtype=np.int8)
        rows = np.repeat(np.arange(self.dim), self.n_excitations)
        occ[rows, self.occupied.ravel()] = 1
        return occ

    def basis_vector(self, occupation: Iterable[int]) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(occupation)] = 1.0
        return v


def build_basis(n_sites: int, n_excitations: int) -> FockBasis:
    if n_excitations not in (1, 2):
        raise ValueError(f"only 1 or 2 excitations are supported, got {n_excitations}")
    if n_sites < n_excitations:
        raise ValueError(f"need at least {n_excitations} sites, got {n_sites}")
    states = tuple(itertools.combinations(range(n_sites), n_excitations))
    assert len(states) == comb(n_sites, n_excitations)
    index_of = {s: k for k, s in enumerate(states)}
    occupied = np.array(states, dtype=int).reshape(len(states), n_excitations)
    return FockBasis(n_sites, n_excitations, states, index_of, occupied)


def _check_pair_basis(basis: FockBasis, reference: Sequence[int]) -> None:
    if basis.n_excitations != 2:
        raise ValueError("Fock distance is defined for two-excitation bases only")
    if len(reference) != 2:
        raise ValueError("reference must hold exactly two occupied sites")


def fock_distances(basis: FockBasis, spec: LatticeSpec, reference: Sequence[int]) -> np.ndarray:
    """Distance from ``reference`` to every basis state.

    Pair-averaged L1 distance minus 1/2; the offset makes an adjacent reference
    pair sit at distance zero from itself (non-adjacent references do not).
    """
    _check_pair_basis(basis, reference)
    xy = spec.coords()
    ref = xy[list(reference)]                       # (2, 2)
    pts = xy[basis.occupied]                        # (D, 2, 2)
    l1 = np.abs(pts[:, :, None, :] - ref[None, None, :, :]).sum(axis=(1, 2, 3))
    return l1 / 4.0 - 0.5


def fock_distance(basis: FockBasis, spec: LatticeSpec, n: int, reference: Sequence[int]) -> float:
    _check_pair_basis(basis, reference)
    xy = spec.coords()
    total = 0
    for site in basis.states[n]:
        for r in reference:
            total += abs(xy[site, 0] - xy[r, 0]) + abs(xy[site, 1] - xy[r, 1])
    return total / 4.0 - 0.5


def mean_distance(basis: FockBasis, spec: LatticeSpec, reference: Sequence[int]) -> float:
    return float(fock_distances(basis, spec, reference).mean())


def parity_permutation(basis: FockBasis, spec: LatticeSpec) -> np.ndarray:
    """``perm[k]`` is the basis index of the inversion image of state ``k``."""
    if basis.n_sites != spec.n_sites:
        raise ValueError("basis and lattice disagree on the number of sites")
    site_perm = inversion_map(spec)
    return np.array([basis.index(site_perm[list(s)]) for s in basis.states])


@dataclass(frozen=True)
class ParitySectors:
    """Even/odd inversion sectors.

    ``even`` and ``odd`` list descriptors ``(n, Pn, sign)``; ``n == Pn`` marks an
    inversion-invariant Fock state. The columns of ``even_basis``/``odd_basis``
    are the corresponding normalized combinations in the Fock basis.
    """

    even: list[tuple[int, int, int]]
    odd: list[tuple[int, int, int]]
    even_basis: np.ndarray
    odd_basis: np.ndarray

    @property
    def dims(self) -> tuple[int, int]:
        return len(self.even), len(self.odd)

    @property
    def change_of_basis(self) -> np.ndarray:
        return np.hstack([self.even_basis, self.odd_basis])

    def blocks(self, matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Project a Fock-basis operator onto the even and odd sectors."""
        be, bo = self.even_basis, self.odd_basis
        return be.T @ matrix @ be, bo.T @ matrix @ bo


def parity_sectors(basis: FockBasis, spec: LatticeSpec) -> ParitySectors:
    perm = parity_permutation(basis, spec)
    even, odd = [], []
    for n in range(basis.dim):
        pn = int(perm[n])
        if pn == n:
            even.append((n, n, 1))
        elif n < pn:
            even.append((n, pn, 1))
            odd.append((n, pn, -1))

    def columns(descr):
        out = np.zeros((basis.dim, len(descr)))
        for c, (n, pn, sign) in enumerate(descr):
            if n == pn:
                out[n, c] = 1.0
            else:
                out[n, c] = 1 / np.sqrt(2)
                out[pn, c] = sign / np.sqrt(2)
        return out

    return ParitySectors(even, odd, columns(even), columns(odd))
