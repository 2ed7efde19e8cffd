"""``qstforge --job job.json --out results/``: run one job and write its artifacts.

Exit codes: 0 success, 2 invalid job, 3 resource limit, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .anneal import run_annealing
from .chaos import (
    Sector,
    Surmise,
    classify_ensemble,
    gap_ratios,
    goe_participation_ratio,
    participation_ratios,
    pool,
    random_couplings,
    spreading_exponent,
    surmise_mean,
    transport_series,
)
from .dynamics import (
    SPIN_LABELS,
    evolve_amplitudes,
    peak_fidelity,
    qsl_bounds_curve,
    spin_expectations,
    transfer_amplitudes,
    transfer_fidelity,
)
from .errors import InsufficientDataError, ResourceLimitError
from .fock import parity_sectors
from .hamiltonian import CouplingConfig, MHZ, build_hamiltonian, tj_to_ns
from .jobs import SCHEMA_VERSION, Command, JobSpec, SchemaError, _symmetrized, parse_job
from .robustness import coupling_noise_sweep, frequency_noise_sweep, thermal_sweep

log = logging.getLogger("qstforge")

EXIT_OK, EXIT_SCHEMA, EXIT_RESOURCE, EXIT_NUMERIC = 0, 2, 3, 4


class Artifacts:
    """Collects result fields and CSV tables before they are written atomically."""

    def __init__(self):
        self.result: dict = {}
        self.tables: dict[str, tuple[list[str], list]] = {}

    def table(self, name: str, header: list[str], rows) -> None:
        self.tables[name] = (header, rows)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _time_grid(job: JobSpec) -> np.ndarray:
    t_max = job.options["t_max_ns"]
    if t_max is None:
        t_max = 2 * (job.t_qst_ns or tj_to_ns(math.pi / 2, job.j_mhz))
    n = int(job.options["n_points"])
    if t_max <= 0 or n < 2:
        raise SchemaError("options.t_max_ns", "need t_max_ns > 0 and n_points >= 2")
    return np.linspace(0.0, float(t_max), n)


def _hamiltonian(job: JobSpec, couplings: CouplingConfig | None = None):
    return build_hamiltonian(job.lattice, couplings or job.couplings, job.basis)


def cmd_evolve(job: JobSpec, art: Artifacts, threads: int) -> None:
    H = _hamiltonian(job)
    times = _time_grid(job)
    amps = transfer_amplitudes(H, job.initial, job.target, times)
    header = ["t_ns", "tJ", "overlap", "fidelity"]
    cols = [times, times * job.j_mhz * MHZ, np.abs(amps), np.abs(amps) ** 2]
    if job.basis.n_excitations == 1:
        psi_t = evolve_amplitudes(H, job.initial.amplitudes, times)
        spins = np.array([spin_expectations(row, job.lattice) for row in psi_t])
        header += list(SPIN_LABELS)
        cols += [spins[:, k] for k in range(spins.shape[1])]
    art.table("evolve.csv", header, zip(*cols))
    t_peak, f_peak = peak_fidelity(H, job.initial, job.target, float(times[-1]))
    art.result.update(peak_t_ns=t_peak, peak_overlap=f_peak, peak_fidelity=f_peak**2)
    if job.t_qst_ns is not None:
        f = transfer_fidelity(H, job.initial, job.target, job.t_qst_ns)
        art.result.update(overlap_at_t_qst=f, fidelity_at_t_qst=f * f)


def cmd_anneal(job: JobSpec, art: Artifacts, threads: int) -> None:
    res = run_annealing(job.lattice, job.basis, job.initial, job.target, job.t_qst_ns,
                        job.schedule, job.couplings, n_jobs=threads)
    best = res.best
    art.result.update(
        best_replica=best.replica_index,
        best_infidelity=best.best_infidelity,
        fidelity=best.best_fidelity,
        overlap=math.sqrt(max(best.best_fidelity, 0.0)),
        best_couplings=best.best_couplings.to_dict(),
        replicas=[
            {"index": r.replica_index, "best_infidelity": r.best_infidelity,
             "evaluations": r.evaluations, "final_sigma": r.final_sigma}
            for r in res.runs
        ],
    )
    rows = [
        (r.replica_index, int(p["step"]), float(p["temperature"]), float(p["current"]),
         float(p["best"]), float(p["accept_ratio"]))
        for r in res.runs for p in r.trace
    ]
    art.table("trace.csv", ["replica", "step", "temperature", "current", "best", "accept_ratio"], rows)


def cmd_spectrum(job: JobSpec, art: Artifacts, threads: int) -> None:
    opts = job.options
    sectors = parity_sectors(job.basis, job.lattice) if opts["sectors"] else None
    if opts["ensemble"] == "single":
        members = [job.couplings]
    elif opts["ensemble"] == "random":
        # sector resolution needs inversion-symmetric draws
        symmetry = "inversion" if opts["sectors"] else job.couplings.symmetry
        template = CouplingConfig(job.lattice, _symmetrized(job.couplings), symmetry)
        bounds = tuple(float(b) for b in opts["bounds"])
        members = [random_couplings(template, bounds, job.seed, i) for i in range(int(opts["n_draws"]))]
    else:
        raise SchemaError("options.ensemble", "expected 'single' or 'random'")
    stats, ratio_rows, pr_rows = [], [], []
    for i, c in enumerate(members):
        H = _hamiltonian(job, c)
        g = gap_ratios(H, sectors)
        stats.append(g[Sector.COMBINED])
        for sec, st in g.items():
            if sectors is not None and sec is Sector.COMBINED:
                continue
            ratio_rows += [(i, sec.value, float(r)) for r in st.ratios]
        for sec, prs in participation_ratios(H, sectors).items():
            pr_rows += [(i, sec.value, k, float(p)) for k, p in enumerate(prs)]
    pooled = pool(stats)
    art.table("ratios.csv", ["draw", "sector", "r"], ratio_rows)
    art.table("pr.csv", ["draw", "sector", "state", "pr"], pr_rows)
    counts, edges = pooled.histogram
    art.table("histogram.csv", ["r_lo", "r_hi", "count"], zip(edges[:-1], edges[1:], counts))
    dims = sectors.dims if sectors is not None else (job.basis.dim,)
    art.result.update(
        n_members=len(members),
        n_ratios=int(pooled.ratios.size),
        mean_r=pooled.mean_r,
        degenerate_gaps=pooled.degenerate_gaps,
        goe_mean_r=surmise_mean(Surmise.GOE),
        poisson_mean_r=surmise_mean(Surmise.POISSON),
        sector_dims=list(dims),
        goe_pr=[goe_participation_ratio(d) for d in dims],
    )
    try:
        tv_goe, tv_poisson = classify_ensemble(pooled)
        art.result.update(tv_goe=tv_goe, tv_poisson=tv_poisson)
    except InsufficientDataError as exc:
        art.result["classification"] = str(exc)


def cmd_noise(job: JobSpec, art: Artifacts, threads: int) -> None:
    opts = job.options
    sweep = {"coupling": coupling_noise_sweep, "frequency": frequency_noise_sweep}.get(opts["kind"])
    if sweep is None:
        raise SchemaError("options.kind", "expected 'coupling' or 'frequency'")
    try:
        res = sweep(job.lattice, job.couplings, job.basis, job.initial, job.target, job.t_qst_ns,
                    opts["sigmas"], int(opts["n_instances"]), job.seed)
    except ValueError as exc:
        raise SchemaError("options.sigmas", str(exc)) from None
    art.table("noise.csv", ["sigma", "relative_fidelity", "stderr"], zip(res.sigmas, res.mean, res.stderr))
    art.result.update(kind=res.kind.value, clean_fidelity=res.clean_fidelity,
                      relative_fidelity=res.mean, stderr=res.stderr)


def cmd_thermal(job: JobSpec, art: Artifacts, threads: int) -> None:
    opts = job.options
    try:
        res = thermal_sweep(
            sizes=[tuple(s) for s in opts["sizes"]],
            protocol=opts["protocol"],
            gamma_list=opts["gammas"],
            n_realizations=int(opts["n_realizations"]),
            seed=job.seed,
            target_sites=int(opts["target_sites"]),
            j_mhz=job.j_mhz,
            measure=opts["measure"],
        )
    except ResourceLimitError:
        raise
    except ValueError as exc:
        raise SchemaError("options", str(exc)) from None
    rows = [
        (n1, n2, n1 * n2, float(g), float(res.infidelity_mean[a, b]), float(res.infidelity_std[a, b]))
        for a, (n1, n2) in enumerate(res.sizes) for b, g in enumerate(res.gammas)
    ]
    art.table("thermal.csv", ["n1", "n2", "sites", "gamma", "infidelity_mean", "infidelity_std"], rows)
    art.result.update(
        fit={repr(g): c for g, c in res.fit.items()},
        extrapolated={repr(g): v for g, v in res.extrapolated.items()},
        target_sites=res.target_sites,
    )


def cmd_qsl(job: JobSpec, art: Artifacts, threads: int) -> None:
    H = _hamiltonian(job)
    times = _time_grid(job)
    curve = qsl_bounds_curve(H, job.initial, times)
    rep = curve.report
    art.table("qsl.csv", ["t_ns", "overlap", "mt_bound", "ml_bound"],
              zip(times, curve.overlap, curve.mt_bound, curve.ml_bound))
    art.result.update(
        energy_uncertainty=rep.energy_uncertainty,
        mean_energy_gap=rep.mean_energy_gap,
        t_dE_ns=rep.t_dE,
        t_E_ns=rep.t_E,
        t_qsl_ns=rep.t_qsl,
        mt_violation=curve.mt_violation(),
        ml_violation=curve.ml_violation(),
    )
    if job.t_qst_ns is not None:
        art.result["t_qst_ns"] = job.t_qst_ns
        art.result["t_qst_above_t_dE"] = bool(job.t_qst_ns >= rep.t_dE)


def cmd_transport(job: JobSpec, art: Artifacts, threads: int) -> None:
    H = _hamiltonian(job)
    times = _time_grid(job)
    series = transport_series(H, job.initial, job.lattice, times)
    art.table("transport.csv", ["t_ns", "mean_distance", "rms_spread"],
              zip(series.times, series.mean_distance, series.rms_spread))
    art.result.update(mean_over_states=series.mean_over_states, max_distance=series.max_distance)
    window = job.options["fit_window_ns"]
    if window is not None:
        art.result["spreading_exponent"] = spreading_exponent(series, float(window[0]), float(window[1]))


HANDLERS: dict[Command, Callable[[JobSpec, Artifacts, int], None]] = {
    Command.EVOLVE: cmd_evolve,
    Command.ANNEAL: cmd_anneal,
    Command.SPECTRUM: cmd_spectrum,
    Command.NOISE: cmd_noise,
    Command.THERMAL: cmd_thermal,
    Command.QSL: cmd_qsl,
    Command.TRANSPORT: cmd_transport,
}


def run(job: JobSpec, out: Path, threads: int = 1) -> dict:
    """Execute ``job`` and write manifest, result and tables into ``out``."""
    out.mkdir(parents=True, exist_ok=True)
    write_atomic(out / "manifest.json", dumps(job.resolved))
    art = Artifacts()
    log.info("running %s on a %dx%d lattice", job.command.value, job.lattice.n1, job.lattice.n2)
    HANDLERS[job.command](job, art, threads)
    for name, (header, rows) in art.tables.items():
        write_atomic(out / name, _csv_text(header, rows))
    result = {"schema": SCHEMA_VERSION, "command": job.command.value, **art.result,
              "files": sorted(art.tables)}
    write_atomic(out / "result.json", dumps(result))
    return result


def _default_threads() -> int:
    env = os.environ.get("QSTFORGE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer QSTFORGE_THREADS=%r", env)
    return os.cpu_count() or 1


def _fail(out: Path | None, code: int, kind: str, message: str, field: str | None = None) -> int:
    payload = {"schema": SCHEMA_VERSION, "error": kind, "message": message}
    if field is not None:
        payload["field"] = field
    text = dumps(payload)
    sys.stderr.write(text)
    if out is not None:
        try:
            write_atomic(out / "error.json", text)
        except OSError:
            pass
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qstforge", description=__doc__.splitlines()[0])
    p.add_argument("--job", required=True, type=Path, help="JSON job file")
    p.add_argument("--out", type=Path, default=Path("qstforge-out"), help="output directory")
    p.add_argument("--seed", type=int, default=None, help="overrides the job seed")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: $QSTFORGE_THREADS or CPU count)")
    p.add_argument("--quiet", action="store_true", help="only log warnings")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    threads = args.threads if args.threads is not None else _default_threads()
    if threads < 1:
        return _fail(args.out, EXIT_SCHEMA, "schema", "--threads must be >= 1", "--threads")
    if args.seed is not None and args.seed < 0:
        return _fail(args.out, EXIT_SCHEMA, "schema", "--seed must be non-negative", "--seed")
    try:
        text = args.job.read_text()
    except OSError as exc:
        return _fail(args.out, EXIT_SCHEMA, "schema", f"cannot read job file: {exc}", "--job")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        return _fail(args.out, EXIT_SCHEMA, "schema",
                     f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", "$")
    try:
        job = parse_job(data, seed=args.seed)
        result = run(job, args.out, threads)
    except SchemaError as exc:
        return _fail(args.out, EXIT_SCHEMA, "schema", exc.message, exc.field)
    except ResourceLimitError as exc:
        return _fail(args.out, EXIT_RESOURCE, "resource_limit", str(exc))
    except np.linalg.LinAlgError as exc:
        return _fail(args.out, EXIT_NUMERIC, "numerical", str(exc))
    except ValueError as exc:
        return _fail(args.out, EXIT_SCHEMA, "invalid", str(exc), "$")
    log.info("wrote %s", ", ".join(["manifest.json", "result.json", *result["files"]]))
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
