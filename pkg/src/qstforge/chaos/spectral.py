"""Level statistics (adjacent-gap ratios) and eigenstate participation ratios."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy import integrate

from ..errors import InsufficientDataError
from ..fock import ParitySectors
from ..hamiltonian import CouplingConfig, SubspaceHamiltonian
from .. import rng as rngmod

N_BINS = 20
MIN_SAMPLES = 100


class Sector(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    COMBINED = "combined"


class Surmise(enum.Enum):
    GOE = "goe"
    POISSON = "poisson"


def surmise_pdf(r, kind: Surmise | str):
    """Density of ``r = min(s1, s2)/max(s1, s2)`` on [0, 1].

    GOE: the 3x3 surmise folded onto [0, 1] (twice the density of s2/s1 on
    [0, inf)). Poisson: ``2/(1+r)**2``. Both integrate to one on [0, 1].
    """
    kind = Surmise(kind)
    r_arr = np.asarray(r, dtype=float)
    if np.any((r_arr < 0) | (r_arr > 1)):
        raise ValueError("gap ratio must lie in [0, 1]")
    if kind is Surmise.GOE:
        out = 27 / 4 * (r_arr + r_arr**2) / (1 + r_arr + r_arr**2) ** 2.5
    else:
        out = 2 / (1 + r_arr) ** 2
    return float(out) if np.ndim(r) == 0 else out


def surmise_cdf(r, kind: Surmise | str):
    kind = Surmise(kind)
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if kind is Surmise.POISSON:
        out = 2 * r_arr / (1 + r_arr)
    else:
        out = np.array([integrate.quad(surmise_pdf, 0.0, x, args=(kind,))[0] for x in r_arr])
    return float(out[0]) if np.ndim(r) == 0 else out


@lru_cache(maxsize=None)
def surmise_mean(kind: Surmise | str) -> float:
    """Mean gap ratio by quadrature of the surmise density."""
    return integrate.quad(lambda r: r * surmise_pdf(r, kind), 0.0, 1.0, epsabs=1e-13)[0]


def ratios_from_spectrum(levels: np.ndarray) -> tuple[np.ndarray, int]:
    """Adjacent-gap ratios of a spectrum and the number of exactly degenerate gaps.

    Both gaps zero gives r = 1; exactly one zero gives r = 0.
    """
    e = np.sort(np.asarray(levels, dtype=float))
    s = np.diff(e)
    if s.size < 2:
        return np.zeros(0), int(np.sum(s == 0))
    a, b = s[:-1], s[1:]
    hi = np.maximum(a, b)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(hi > 0, np.minimum(a, b) / hi, 1.0)
    return r, int(np.sum(s == 0))


@dataclass(frozen=True)
class GapRatioStats:
    sector: Sector
    ratios: np.ndarray
    degenerate_gaps: int = 0

    @property
    def mean_r(self) -> float:
        return float(np.mean(self.ratios)) if self.ratios.size else float("nan")

    @property
    def histogram(self) -> tuple[np.ndarray, np.ndarray]:
        """Counts in ``N_BINS`` uniform bins on [0, 1] and the bin edges."""
        return np.histogram(self.ratios, bins=N_BINS, range=(0.0, 1.0))

    def merged(self, other: "GapRatioStats") -> "GapRatioStats":
        return GapRatioStats(
            self.sector,
            np.concatenate([self.ratios, other.ratios]),
            self.degenerate_gaps + other.degenerate_gaps,
        )


def pool(stats: Iterable[GapRatioStats], sector: Sector | None = None) -> GapRatioStats:
    stats = list(stats)
    if not stats:
        raise InsufficientDataError("nothing to pool")
    sector = sector or stats[0].sector
    return GapRatioStats(
        sector,
        np.concatenate([s.ratios for s in stats]),
        sum(s.degenerate_gaps for s in stats),
    )


def _sector_blocks(H: SubspaceHamiltonian, sectors: ParitySectors, atol: float = 1e-10):
    be, bo = sectors.even_basis, sectors.odd_basis
    if be.shape[0] != H.dim:
        raise ValueError("sector basis does not match the Hamiltonian")
    m = H.matrix
    scale = max(float(np.max(np.abs(m), initial=0.0)), 1e-300)
    leak = be.T @ m @ bo
    if leak.size and np.max(np.abs(leak)) > atol * scale:
        raise ValueError("Hamiltonian is not inversion symmetric; sectors cannot be resolved")
    return be.T @ m @ be, bo.T @ m @ bo


def sector_spectra(H: SubspaceHamiltonian, sectors: ParitySectors) -> dict[Sector, tuple[np.ndarray, np.ndarray]]:
    """Eigenpairs of each parity block, eigenvectors expressed in the sector basis."""
    h_even, h_odd = _sector_blocks(H, sectors)
    return {Sector.EVEN: np.linalg.eigh(h_even), Sector.ODD: np.linalg.eigh(h_odd)}


def gap_ratios(H: SubspaceHamiltonian, sectors: ParitySectors | None = None) -> dict[Sector, GapRatioStats]:
    """Gap ratios per parity sector plus their pool; full spectrum when ``sectors`` is None."""
    if sectors is None:
        r, deg = ratios_from_spectrum(H.eigenvalues)
        return {Sector.COMBINED: GapRatioStats(Sector.COMBINED, r, deg)}
    out = {}
    for sector, (levels, _) in sector_spectra(H, sectors).items():
        r, deg = ratios_from_spectrum(levels)
        out[sector] = GapRatioStats(sector, r, deg)
    out[Sector.COMBINED] = pool([out[Sector.EVEN], out[Sector.ODD]], Sector.COMBINED)
    return out


def _binned(kind: Surmise) -> np.ndarray:
    edges = np.linspace(0.0, 1.0, N_BINS + 1)
    return np.diff(surmise_cdf(edges, kind))


def classify_ensemble(stats: GapRatioStats) -> tuple[float, float]:
    """Total-variation distance of the binned empirical P(r) to (GOE, Poisson)."""
    if stats.ratios.size < MIN_SAMPLES:
        raise InsufficientDataError(
            f"need at least {MIN_SAMPLES} gap ratios, got {stats.ratios.size}"
        )
    counts, _ = stats.histogram
    p = counts / counts.sum()
    return (
        0.5 * float(np.abs(p - _binned(Surmise.GOE)).sum()),
        0.5 * float(np.abs(p - _binned(Surmise.POISSON)).sum()),
    )


def goe_participation_ratio(dim: int) -> float:
    return (dim + 2) / 3


def participation_ratios(H: SubspaceHamiltonian, sectors: ParitySectors | None = None) -> dict[Sector, np.ndarray]:
    """``1/sum_n |c_n|**4`` per eigenstate, in the sector basis when resolved."""
    if sectors is None:
        return {Sector.COMBINED: 1.0 / np.sum(np.abs(H.eigenvectors) ** 4, axis=0)}
    return {
        sector: 1.0 / np.sum(np.abs(vecs) ** 4, axis=0)
        for sector, (_, vecs) in sector_spectra(H, sectors).items()
    }


def random_couplings(template: CouplingConfig, bounds: tuple[float, float], seed: int,
                     index: int) -> CouplingConfig:
    """One member of the random ensemble: free parameters i.i.d. uniform in ``bounds``."""
    from ..anneal import free_parameters

    params = free_parameters(template)
    rng = rngmod.stream(seed, "random-ensemble", index)
    return params.config(rng.uniform(bounds[0], bounds[1], size=params.size))
