"""Monte Carlo annealing of nearest-neighbour couplings for state transfer.

The decision variables are the free NN couplings. Pinned (defect) bonds and
cross bonds are held at their template values. Under inversion symmetry a bond
and its mirror image share one parameter; a bond whose mirror is pinned stays
a parameter of its own.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import rng as rngmod
from .dynamics.evolution import StateVector
from .fock import FockBasis
from .hamiltonian import CouplingConfig, Symmetry, build_hamiltonian, hopping_table
from .lattice import LatticeSpec, mirror_bond_indices

log = logging.getLogger(__name__)


class ScheduleShape(enum.Enum):
    GEOMETRIC = "geometric"
    LINEAR = "linear"


class MoveKind(enum.Enum):
    LOCAL = "local"
    GLOBAL = "global"


@dataclass(frozen=True)
class AnnealSchedule:
    t_high: float = 0.1
    t_low: float = 1e-5
    steps: int = 200_000
    shape: ScheduleShape = ScheduleShape.GEOMETRIC
    replicas: int = 5
    seed: int = 0
    bounds: tuple[float, float] = (-10.0, -0.3)
    move_sigma0: float = 0.5
    target_accept: float = 0.3
    global_every: int = 50
    adapt_every: int = 100
    trace_points: int = 200

    def __post_init__(self):
        object.__setattr__(self, "shape", ScheduleShape(self.shape))
        object.__setattr__(self, "bounds", (float(self.bounds[0]), float(self.bounds[1])))
        if not self.t_high > self.t_low > 0:
            raise ValueError("need t_high > t_low > 0")
        if self.steps < 1 or self.replicas < 1:
            raise ValueError("steps and replicas must be >= 1")
        if not self.bounds[0] < self.bounds[1]:
            raise ValueError("need J_min < J_max")
        if self.move_sigma0 <= 0:
            raise ValueError("move_sigma0 must be positive")
        if not 0 < self.target_accept < 1:
            raise ValueError("target_accept must lie in (0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def temperatures(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.t_high])
        s = np.arange(self.steps) / (self.steps - 1)
        if self.shape is ScheduleShape.GEOMETRIC:
            return self.t_high * (self.t_low / self.t_high) ** s
        return self.t_high + (self.t_low - self.t_high) * s

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["shape"] = self.shape.value
        d["bounds"] = list(self.bounds)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "AnnealSchedule":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown schedule field(s): {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class FreeParameters:
    """Map between a parameter vector and the full per-bond coupling array."""

    template: CouplingConfig
    groups: tuple[np.ndarray, ...]
    bonds: np.ndarray = field(repr=False)       # free bond indices
    owner: np.ndarray = field(repr=False)       # parameter index for each entry of ``bonds``

    @property
    def size(self) -> int:
        return len(self.groups)

    def values(self, theta: np.ndarray) -> np.ndarray:
        out = np.array(self.template.values)
        out[self.bonds] = theta[self.owner]
        return out

    def config(self, theta: np.ndarray) -> CouplingConfig:
        return self.template.with_values(self.values(theta))

    def theta(self, config: CouplingConfig) -> np.ndarray:
        return np.array([config.values[g[0]] for g in self.groups])


def free_parameters(template: CouplingConfig) -> FreeParameters:
    spec = template.spec
    mirror = mirror_bond_indices(spec)
    seen: set[int] = set()
    groups = []
    for k, b in enumerate(spec.bonds):
        if k in seen or not b.kind.is_nn or b.fixed is not None:
            continue
        group = [k]
        m = int(mirror[k])
        if template.symmetry is Symmetry.INVERSION and m != k and spec.bonds[m].fixed is None:
            group.append(m)
        seen.update(group)
        groups.append(np.array(group))
    bonds = np.concatenate(groups) if groups else np.zeros(0, dtype=int)
    owner = np.concatenate([np.full(len(g), i) for i, g in enumerate(groups)]) if groups else bonds
    return FreeParameters(template, tuple(groups), bonds, owner)


def infidelity(
    spec: LatticeSpec,
    couplings: CouplingConfig,
    basis: FockBasis,
    psi0: StateVector,
    target: StateVector,
    t_qst: float,
) -> float:
    """``1 - |<target|exp(-iHt)|psi0>|**2`` for the given couplings."""
    from .dynamics.evolution import transfer_fidelity

    H = build_hamiltonian(spec, couplings, basis)
    return 1.0 - transfer_fidelity(H, psi0, target, t_qst, squared=True)


class TransferObjective:
    """Infidelity as a function of the free-parameter vector (hot loop of the annealer)."""

    def __init__(self, params: FreeParameters, basis: FockBasis, psi0: StateVector,
                 target: StateVector, t_qst: float):
        self.params = params
        self.table = hopping_table(params.template.spec, basis)
        self.psi0 = np.asarray(psi0.amplitudes)
        self.target_conj = np.conj(target.amplitudes)
        self.t_qst = float(t_qst)
        self.calls = 0

    def __call__(self, theta: np.ndarray) -> float:
        self.calls += 1
        h = self.table.assemble(self.params.values(theta))
        lam, v = np.linalg.eigh(h)
        weights = (self.target_conj @ v) * (v.T @ self.psi0)
        amp = np.exp(-1j * self.t_qst * lam) @ weights
        return max(0.0, 1.0 - (amp.real**2 + amp.imag**2))


def _perturb(theta: np.ndarray, rng: np.random.Generator, sigma: float, kind: MoveKind,
             bounds: tuple[float, float]) -> np.ndarray:
    new = theta.copy()
    if kind is MoveKind.LOCAL:
        i = rng.integers(len(theta))
        new[i] += rng.normal(0.0, sigma)
    else:
        scale = float(np.sqrt(np.mean(theta**2))) or 1.0
        new *= 1.0 + rng.normal(0.0, sigma / scale)
    return np.clip(new, *bounds)


def propose_move(
    current: CouplingConfig,
    rng: np.random.Generator,
    sigma: float,
    kind: MoveKind | str = MoveKind.LOCAL,
    bounds: tuple[float, float] = (-10.0, -0.3),
) -> CouplingConfig:
    """LOCAL: Gaussian kick to one free parameter. GLOBAL: common rescale by (1 + eps)."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    params = free_parameters(current)
    theta = _perturb(params.theta(current), rng, sigma, MoveKind(kind), bounds)
    return params.config(theta)


def metropolis_step(current: float, candidate: float, temperature: float,
                    rng: np.random.Generator) -> bool:
    """Accept downhill always, uphill with probability ``exp(-delta/T)``."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    delta = candidate - current
    if delta <= 0:
        return True
    return bool(rng.random() < np.exp(-delta / temperature))


TRACE_DTYPE = np.dtype(
    [("step", "i8"), ("temperature", "f8"), ("current", "f8"), ("best", "f8"), ("accept_ratio", "f8")]
)


@dataclass
class AnnealRun:
    schedule: AnnealSchedule
    best_couplings: CouplingConfig
    best_infidelity: float
    trace: np.ndarray
    replica_index: int
    final_sigma: float = float("nan")
    evaluations: int = 0

    @property
    def best_fidelity(self) -> float:
        """Best population-style fidelity ``|<target|psi>|**2``."""
        return 1.0 - self.best_infidelity


@dataclass
class AnnealResult:
    best: AnnealRun
    runs: list[AnnealRun]

    @property
    def best_infidelity(self) -> float:
        return self.best.best_infidelity


@dataclass(frozen=True)
class TransferProblem:
    template: CouplingConfig
    basis: FockBasis
    psi0: StateVector
    target: StateVector
    t_qst: float


def run_replica(problem: TransferProblem, schedule: AnnealSchedule, replica_index: int) -> AnnealRun:
    rng = rngmod.stream(schedule.seed, "anneal", replica_index)
    params = free_parameters(problem.template)
    if params.size == 0:
        raise ValueError("no free coupling to optimize")
    cost = TransferObjective(params, problem.basis, problem.psi0, problem.target, problem.t_qst)
    lo, hi = schedule.bounds
    theta = rng.uniform(lo, hi, size=params.size)
    current = cost(theta)
    best_theta, best = theta.copy(), current
    sigma = schedule.move_sigma0
    sigma_max = hi - lo

    temps = schedule.temperatures()
    n_trace = min(schedule.trace_points, schedule.steps)
    trace_at = set(np.linspace(0, schedule.steps - 1, n_trace).astype(int).tolist())
    trace = []
    window_prop = window_acc = 0
    last_ratio = float("nan")

    for step in range(schedule.steps):
        temp = temps[step]
        kind = MoveKind.GLOBAL if (step + 1) % schedule.global_every == 0 else MoveKind.LOCAL
        cand = _perturb(theta, rng, sigma, kind, schedule.bounds)
        value = cost(cand)
        accepted = metropolis_step(current, value, temp, rng)
        if accepted:
            theta, current = cand, value
            if current < best:
                best, best_theta = current, theta.copy()
        window_prop += 1
        window_acc += accepted
        if window_prop == schedule.adapt_every:
            last_ratio = window_acc / window_prop
            sigma *= np.exp(last_ratio - schedule.target_accept)
            sigma = float(np.clip(sigma, 1e-6, sigma_max))
            window_prop = window_acc = 0
        if step in trace_at:
            trace.append((step, temp, current, best, last_ratio))

    log.info("replica %d: best infidelity %.3e after %d evaluations",
             replica_index, best, cost.calls)
    return AnnealRun(
        schedule=schedule,
        best_couplings=params.config(best_theta),
        best_infidelity=float(best),
        trace=np.array(trace, dtype=TRACE_DTYPE),
        replica_index=replica_index,
        final_sigma=sigma,
        evaluations=cost.calls,
    )


def run_annealing(
    spec: LatticeSpec,
    basis: FockBasis,
    psi0: StateVector,
    target: StateVector,
    t_qst: float,
    schedule: AnnealSchedule,
    template: CouplingConfig,
    n_jobs: int = 1,
    replica_indices: Sequence[int] | None = None,
) -> AnnealResult:
    """Run independent replicas and keep the one with the smallest infidelity.

    ``template`` fixes the symmetry, the cross-coupling values and the pinned
    bonds; its free NN values are ignored (replicas start uniformly in bounds).
    """
    if template.spec != spec:
        raise ValueError("template couplings belong to a different lattice")
    if free_parameters(template).size == 0:
        raise ValueError("no free coupling to optimize")
    problem = TransferProblem(template, basis, psi0, target, float(t_qst))
    indices = list(range(schedule.replicas)) if replica_indices is None else list(replica_indices)
    if n_jobs == 1 or len(indices) == 1:
        runs = [run_replica(problem, schedule, i) for i in indices]
    else:
        from joblib import Parallel, delayed

        runs = Parallel(n_jobs=n_jobs)(delayed(run_replica)(problem, schedule, i) for i in indices)
    best = min(runs, key=lambda r: (r.best_infidelity, r.replica_index))
    return AnnealResult(best, runs)


def with_schedule(schedule: AnnealSchedule, **changes) -> AnnealSchedule:
    return replace(schedule, **changes)
