"""Rectangular qubit-grid topology.

Sites are 1-based ``(x, y)`` pairs with ``x`` the column and ``y`` the row.
The linear site index is row-major, ``(y - 1) * n1 + x - 1``, so ``Q1`` sits at
``(1, 1)`` and ``Q{n1*n2}`` at ``(n1, n2)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np


class BondKind(enum.Enum):
    NN_X = "nn_x"
    NN_Y = "nn_y"
    CROSS = "cross"

    @property
    def is_nn(self) -> bool:
        return self is not BondKind.CROSS


@dataclass(frozen=True, order=True)
class Site:
    x: int
    y: int

    def index(self, n1: int) -> int:
        return (self.y - 1) * n1 + self.x - 1

    def label(self, n1: int) -> str:
        return f"Q{self.index(n1) + 1}"


@dataclass(frozen=True)
class Bond:
    a: Site
    b: Site
    kind: BondKind
    fixed: float | None = None

    @property
    def key(self) -> tuple[Site, Site]:
        return (self.a, self.b)


@dataclass(frozen=True)
class LatticeSpec:
    """Immutable grid description: bonds in canonical order plus pinned defects."""

    n1: int
    n2: int
    cross: bool
    bonds: tuple[Bond, ...]
    _lookup: dict = field(repr=False, compare=False, hash=False, default_factory=dict)

    def __post_init__(self):
        lookup = {b.key: i for i, b in enumerate(self.bonds)}
        if len(lookup) != len(self.bonds):
            raise ValueError("duplicate bond in lattice")
        object.__setattr__(self, "_lookup", lookup)

    @property
    def n_sites(self) -> int:
        return self.n1 * self.n2

    @property
    def defects(self) -> list[tuple[Bond, float]]:
        return [(b, b.fixed) for b in self.bonds if b.fixed is not None]

    def site(self, index: int) -> Site:
        if not 0 <= index < self.n_sites:
            raise IndexError(f"site index {index} out of range")
        return Site(index % self.n1 + 1, index // self.n1 + 1)

    def index(self, site: Site | Sequence[int]) -> int:
        site = as_site(site)
        if not (1 <= site.x <= self.n1 and 1 <= site.y <= self.n2):
            raise ValueError(f"site {site} outside {self.n1}x{self.n2} grid")
        return site.index(self.n1)

    def coords(self) -> np.ndarray:
        """(n_sites, 2) integer array of 1-based (x, y)."""
        idx = np.arange(self.n_sites)
        return np.stack([idx % self.n1 + 1, idx // self.n1 + 1], axis=1)

    def bond_index(self, a: Site | Sequence[int], b: Site | Sequence[int]) -> int:
        a, b = as_site(a), as_site(b)
        if self.index(a) > self.index(b):
            a, b = b, a
        try:
            return self._lookup[(a, b)]
        except KeyError:
            raise KeyError(f"no bond between {a} and {b}") from None

    def bond(self, a, b) -> Bond:
        return self.bonds[self.bond_index(a, b)]

    def bond_sites(self) -> np.ndarray:
        """(n_bonds, 2) array of linear site indices."""
        if not self.bonds:
            return np.zeros((0, 2), dtype=int)
        return np.array([(self.index(b.a), self.index(b.b)) for b in self.bonds])

    def kinds(self) -> list[BondKind]:
        return [b.kind for b in self.bonds]

    def count(self, kind: BondKind) -> int:
        return sum(b.kind is kind for b in self.bonds)

    def with_defect(self, a, b, value: float) -> "LatticeSpec":
        """Return a copy with the bond ``a``-``b`` pinned to ``value`` (MHz)."""
        i = self.bond_index(a, b)
        bonds = list(self.bonds)
        bonds[i] = replace(bonds[i], fixed=float(value))
        return LatticeSpec(self.n1, self.n2, self.cross, tuple(bonds))

    def to_dict(self) -> dict:
        return {
            "n1": self.n1,
            "n2": self.n2,
            "cross": self.cross,
            "defects": [
                {"a": [b.a.x, b.a.y], "b": [b.b.x, b.b.y], "value_mhz": v}
                for b, v in self.defects
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LatticeSpec":
        spec = build_grid(int(data["n1"]), int(data["n2"]), bool(data.get("cross", False)))
        for d in data.get("defects", []):
            spec = spec.with_defect(d["a"], d["b"], d["value_mhz"])
        return spec


def as_site(site: Site | Sequence[int]) -> Site:
    if isinstance(site, Site):
        return site
    x, y = site
    return Site(int(x), int(y))


def build_grid(n1: int, n2: int, cross: bool = False) -> LatticeSpec:
    """Enumerate NN_X, NN_Y and (optionally) CROSS bonds of an ``n1 x n2`` grid."""
    if n1 < 1 or n2 < 1:
        raise ValueError(f"grid dimensions must be >= 1, got {n1}x{n2}")
    bonds: list[Bond] = []
    for y in range(1, n2 + 1):
        for x in range(1, n1):
            bonds.append(Bond(Site(x, y), Site(x + 1, y), BondKind.NN_X))
    for y in range(1, n2):
        for x in range(1, n1 + 1):
            bonds.append(Bond(Site(x, y), Site(x, y + 1), BondKind.NN_Y))
    if cross:
        for y in range(1, n2):
            for x in range(1, n1):
                bonds.append(Bond(Site(x, y), Site(x + 1, y + 1), BondKind.CROSS))
                bonds.append(Bond(Site(x + 1, y), Site(x, y + 1), BondKind.CROSS))
    return LatticeSpec(n1, n2, cross, tuple(bonds))


def inversion_map(spec: LatticeSpec) -> np.ndarray:
    """Site permutation for (x, y) -> (n1 + 1 - x, n2 + 1 - y), as linear indices."""
    c = spec.coords()
    return (spec.n2 - c[:, 1]) * spec.n1 + (spec.n1 - c[:, 0])


def mirror_site(spec: LatticeSpec, site: Site | Sequence[int]) -> Site:
    site = as_site(site)
    spec.index(site)
    return Site(spec.n1 + 1 - site.x, spec.n2 + 1 - site.y)


def mirror_bond(spec: LatticeSpec, bond: Bond) -> Bond:
    """Image of ``bond`` under the inversion map, as stored in ``spec``."""
    # raises KeyError when the bond is foreign to spec
    spec.bond_index(bond.a, bond.b)
    return spec.bond(mirror_site(spec, bond.a), mirror_site(spec, bond.b))


def mirror_bond_indices(spec: LatticeSpec) -> np.ndarray:
    """``out[i]`` is the index of the mirror image of ``spec.bonds[i]``."""
    perm = inversion_map(spec)
    lookup = {(int(i), int(j)): k for k, (i, j) in enumerate(spec.bond_sites())}
    out = np.empty(len(spec.bonds), dtype=int)
    for k, (i, j) in enumerate(spec.bond_sites()):
        pi, pj = sorted((int(perm[i]), int(perm[j])))
        out[k] = lookup[(pi, pj)]
    return out


def sites_from(spec: LatticeSpec, items: Iterable) -> list[int]:
    """Resolve a list of ``[x, y]`` pairs, ``Site`` objects or ``"Q<n>"`` labels."""
    out = []
    for item in items:
        if isinstance(item, str):
            if not item.upper().startswith("Q"):
                raise ValueError(f"bad site label {item!r}")
            k = int(item[1:]) - 1
            spec.site(k)
            out.append(k)
        else:
            out.append(spec.index(item))
    return out
