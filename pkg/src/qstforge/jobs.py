"""JSON job files for the command-line front end.

A job is a JSON object. Unknown keys are rejected so typos surface early.
Every parse error is a :class:`SchemaError` carrying the offending field path.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .anneal import AnnealSchedule
from .dynamics import StateVector, bell_states, fock_state
from .fock import FockBasis, build_basis
from .hamiltonian import CouplingConfig, Symmetry, product_protocol_2d, tj_to_ns, uniform_couplings
from .lattice import LatticeSpec, sites_from

SCHEMA_VERSION = 1


class Command(enum.Enum):
    ANNEAL = "anneal"
    EVOLVE = "evolve"
    SPECTRUM = "spectrum"
    NOISE = "noise"
    THERMAL = "thermal"
    QSL = "qsl"
    TRANSPORT = "transport"


class SchemaError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


# per-command option blocks with their defaults
OPTION_DEFAULTS: dict[Command, dict[str, Any]] = {
    Command.ANNEAL: {},
    Command.EVOLVE: {"t_max_ns": None, "n_points": 501},
    Command.QSL: {"t_max_ns": None, "n_points": 501},
    Command.TRANSPORT: {"t_max_ns": None, "n_points": 501, "fit_window_ns": None},
    Command.SPECTRUM: {"ensemble": "single", "n_draws": 40, "bounds": [-10.0, -0.1],
                       "sectors": True},
    Command.NOISE: {"kind": "coupling", "sigmas": [0.0, 0.01, 0.02, 0.05, 0.1],
                    "n_instances": 200},
    Command.THERMAL: {"sizes": [[2, 2], [2, 3], [3, 3], [3, 4]], "protocol": "single",
                      "gammas": [0.0, 0.005, 0.01], "n_realizations": 25,
                      "measure": "subsystem", "target_sites": 36},
}

TOP_LEVEL = {"command", "lattice", "couplings", "symmetry", "j_mhz", "cross_mhz", "initial",
             "target", "n_excitations", "t_qst_ns", "t_qst_j", "schedule", "options", "seed",
             "schema"}
SYMMETRIC = {Command.ANNEAL, Command.SPECTRUM}
NEEDS_STATES = {Command.ANNEAL, Command.EVOLVE, Command.NOISE, Command.QSL, Command.TRANSPORT}


@dataclass
class JobSpec:
    command: Command
    lattice: LatticeSpec
    couplings: CouplingConfig | None
    basis: FockBasis | None
    initial: StateVector | None
    target: StateVector | None
    t_qst_ns: float | None
    schedule: AnnealSchedule | None
    options: dict
    seed: int
    j_mhz: float = 2.0
    resolved: dict = field(default_factory=dict)


def _require(data: dict, key: str, where: str = ""):
    if key not in data:
        raise SchemaError(where + key, "required field is missing")
    return data[key]


def _number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(name, f"expected a number, got {value!r}")
    return float(value)


def _sites(lattice: LatticeSpec, items, name: str) -> list[int]:
    if not isinstance(items, list) or not items:
        raise SchemaError(name, "expected a non-empty list of sites")
    norm = [f"Q{x}" if isinstance(x, int) and not isinstance(x, bool) else x for x in items]
    try:
        return sites_from(lattice, norm)
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        raise SchemaError(name, f"bad site list {items!r} ({exc})") from None


def _parse_state(lattice: LatticeSpec, value, name: str) -> tuple[str, list[int]]:
    """``("fock", sites)`` or ``("bell", [a, b])``; ints are 1-based qubit numbers."""
    if isinstance(value, str):
        if not value.startswith("bell:"):
            raise SchemaError(name, f"expected a site list or 'bell:[a,b]', got {value!r}")
        try:
            pair = json.loads(value[5:])
        except json.JSONDecodeError:
            raise SchemaError(name, f"cannot parse Bell pair in {value!r}") from None
        sites = _sites(lattice, pair, name)
        if len(sites) != 2 or sites[0] == sites[1]:
            raise SchemaError(name, "a Bell state needs two distinct sites")
        return "bell", sites
    sites = _sites(lattice, value, name)
    if len(set(sites)) != len(sites):
        raise SchemaError(name, "repeated site in occupation list")
    return "fock", sites


def _build_state(kind: str, sites: list[int], basis: FockBasis) -> StateVector:
    if kind == "bell":
        return bell_states(sites[0], sites[1], basis)
    return fock_state(basis, sites)


def _parse_couplings(data: dict, lattice: LatticeSpec, symmetry: Symmetry) -> CouplingConfig:
    raw = data.get("couplings", "protocol:standard")
    j_mhz = abs(_number(data.get("j_mhz", 2.0), "j_mhz"))
    default_cross = 0.45 if lattice.cross else 0.0
    cross = _number(data.get("cross_mhz", default_cross), "cross_mhz")
    try:
        if isinstance(raw, dict):
            return CouplingConfig.from_dict(lattice, raw)
        if raw == "protocol:standard":
            return product_protocol_2d(lattice.n1, lattice.n2, -j_mhz, spec=lattice,
                                       cross_mhz=cross if lattice.cross else 0.0)
        if isinstance(raw, str) and raw.startswith("uniform:"):
            return uniform_couplings(lattice, float(raw[8:]), cross if lattice.cross else 0.0, symmetry)
    except (ValueError, KeyError, TypeError) as exc:
        raise SchemaError("couplings", str(exc)) from None
    raise SchemaError("couplings", f"expected an object, 'protocol:standard' or 'uniform:<MHz>', got {raw!r}")


def _options(command: Command, given) -> dict:
    if given is None:
        given = {}
    if not isinstance(given, dict):
        raise SchemaError("options", "expected an object")
    defaults = OPTION_DEFAULTS[command]
    unknown = set(given) - set(defaults)
    if unknown:
        raise SchemaError(f"options.{sorted(unknown)[0]}", "unknown option")
    return {**defaults, **given}


def parse_job(data: Any, seed: int | None = None) -> JobSpec:
    """Validate a decoded JSON job and resolve every default."""
    if not isinstance(data, dict):
        raise SchemaError("$", "job must be a JSON object")
    unknown = set(data) - TOP_LEVEL
    if unknown:
        raise SchemaError(sorted(unknown)[0], "unknown field")
    if data.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise SchemaError("schema", f"unsupported schema version {data['schema']!r}")
    try:
        command = Command(_require(data, "command"))
    except ValueError:
        raise SchemaError("command", f"unknown command {data['command']!r}") from None

    lat = _require(data, "lattice")
    if not isinstance(lat, dict):
        raise SchemaError("lattice", "expected an object")
    for key in ("n1", "n2"):
        v = _require(lat, key, "lattice.")
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise SchemaError(f"lattice.{key}", f"expected a positive integer, got {v!r}")
    try:
        lattice = LatticeSpec.from_dict(lat)
    except (ValueError, KeyError, TypeError) as exc:
        raise SchemaError("lattice.defects", str(exc)) from None

    try:
        symmetry = Symmetry(data.get("symmetry", "inversion" if command in SYMMETRIC else "free"))
    except ValueError:
        raise SchemaError("symmetry", f"unknown symmetry {data.get('symmetry')!r}") from None

    job_seed = data.get("seed", 0) if seed is None else seed
    if isinstance(job_seed, bool) or not isinstance(job_seed, int) or job_seed < 0:
        raise SchemaError("seed", "expected a non-negative integer")

    j_mhz = abs(_number(data.get("j_mhz", 2.0), "j_mhz"))
    if j_mhz == 0:
        raise SchemaError("j_mhz", "coupling scale must be nonzero")
    options = _options(command, data.get("options"))
    couplings = None if command is Command.THERMAL else _parse_couplings(data, lattice, symmetry)

    basis = initial = target = None
    resolved_states = {}
    if command in NEEDS_STATES or "initial" in data:
        init_kind, init_sites = _parse_state(lattice, _require(data, "initial"), "initial")
        n_exc = 1 if init_kind == "bell" else len(init_sites)
        if n_exc > 2:
            raise SchemaError("initial", "at most two excitations are supported")
        basis = build_basis(lattice.n_sites, n_exc)
        initial = _build_state(init_kind, init_sites, basis)
        resolved_states["initial"] = _state_json(init_kind, init_sites)
        if "target" in data:
            tgt_kind, tgt_sites = _parse_state(lattice, data["target"], "target")
            if (1 if tgt_kind == "bell" else len(tgt_sites)) != n_exc:
                raise SchemaError("target", "target and initial carry different excitation numbers")
            target = _build_state(tgt_kind, tgt_sites, basis)
            resolved_states["target"] = _state_json(tgt_kind, tgt_sites)
        elif command in {Command.ANNEAL, Command.EVOLVE, Command.NOISE}:
            raise SchemaError("target", "required field is missing")
    elif command is Command.SPECTRUM:
        n_exc = data.get("n_excitations", 2)
        if n_exc not in (1, 2):
            raise SchemaError("n_excitations", "expected 1 or 2")
        basis = build_basis(lattice.n_sites, n_exc)

    t_qst = None
    if "t_qst_ns" in data and "t_qst_j" in data:
        raise SchemaError("t_qst_j", "give either t_qst_ns or t_qst_j, not both")
    if "t_qst_ns" in data:
        t_qst = _number(data["t_qst_ns"], "t_qst_ns")
    elif "t_qst_j" in data:
        t_qst = tj_to_ns(_number(data["t_qst_j"], "t_qst_j"), j_mhz)
    elif command in {Command.ANNEAL, Command.NOISE}:
        raise SchemaError("t_qst_ns", "required field is missing")
    if t_qst is not None and t_qst <= 0:
        raise SchemaError("t_qst_ns", "transfer time must be positive")

    schedule = None
    if command is Command.ANNEAL:
        sched = data.get("schedule", {})
        if not isinstance(sched, dict):
            raise SchemaError("schedule", "expected an object")
        try:
            schedule = AnnealSchedule.from_dict({**sched, "seed": job_seed})
        except (ValueError, TypeError) as exc:
            raise SchemaError("schedule", str(exc)) from None
        # the template carries the symmetry used by the search
        try:
            couplings = CouplingConfig(lattice, _symmetrized(couplings), symmetry)
        except ValueError as exc:
            raise SchemaError("couplings", str(exc)) from None

    resolved = {
        "schema": SCHEMA_VERSION,
        "command": command.value,
        "lattice": lattice.to_dict(),
        "seed": job_seed,
        "symmetry": symmetry.value,
        "options": options,
        **resolved_states,
    }
    if couplings is not None:
        resolved["couplings"] = couplings.to_dict()
    if basis is not None:
        resolved["n_excitations"] = basis.n_excitations
    if t_qst is not None:
        resolved["t_qst_ns"] = t_qst
    if schedule is not None:
        resolved["schedule"] = {k: v for k, v in schedule.to_dict().items() if k != "seed"}
    resolved["j_mhz"] = j_mhz
    return JobSpec(command, lattice, couplings, basis, initial, target, t_qst, schedule,
                   options, job_seed, j_mhz, resolved)


def _symmetrized(couplings: CouplingConfig) -> np.ndarray:
    """Template values for the annealer; the free NN entries are overwritten anyway."""
    values = np.array(couplings.values)
    for k, b in enumerate(couplings.spec.bonds):
        if b.kind.is_nn and b.fixed is None:
            values[k] = -1.0
    return values


def _state_json(kind: str, sites: list[int]):
    labels = [k + 1 for k in sites]
    return f"bell:{json.dumps(labels)}" if kind == "bell" else labels
