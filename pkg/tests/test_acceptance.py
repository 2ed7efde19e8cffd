"""Acceptance suite: one [PASS]/[FAIL] line per criterion.

Fidelities are populations ``|<target|psi>|**2`` throughout.

Run standalone with ``python tests/test_acceptance.py``. The annealing criteria
take several minutes each; their results are cached so the speed-limit check
can reuse them.
"""

import subprocess
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from qstforge.anneal import AnnealSchedule, run_annealing
from qstforge.chaos import Sector, Surmise, gap_ratios, pool, random_couplings, surmise_mean
from qstforge.dynamics import fock_state, qsl_bounds_curve, qsl_report, transfer_fidelity
from qstforge.fock import build_basis, fock_distance, mean_distance, parity_sectors
from qstforge.hamiltonian import (
    CouplingConfig,
    Symmetry,
    build_hamiltonian,
    product_protocol_2d,
    standard_protocol,
    tj_to_ns,
    uniform_couplings,
)
from qstforge.lattice import build_grid
from qstforge.robustness import thermal_sweep

SEED = 0
BOUNDS = (-10.0, -0.3)
CROSS = 0.45
DEFECTS = {3: ((3, 2), (3, 3)), 6: ((6, 3), (6, 4))}
# J/2pi = 2 MHz on 3x3 grids and 1 MHz on 6x6
J_MHZ = {3: 2.0, 6: 1.0}


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def imperfect_grid(n):
    return build_grid(n, n, cross=True).with_defect(*DEFECTS[n], 0.3)


def transfer_problem(n, n_exc):
    spec = imperfect_grid(n)
    basis = build_basis(n * n, n_exc)
    last = n * n - 1
    src, dst = ([0], [last]) if n_exc == 1 else ([0, 1], [last - 1, last])
    return spec, basis, fock_state(basis, src), fock_state(basis, dst), tj_to_ns(np.pi / 2, J_MHZ[n])


@lru_cache(maxsize=None)
def optimized(n, n_exc, replicas, symmetry=Symmetry.INVERSION):
    spec, basis, a, b, t = transfer_problem(n, n_exc)
    template = uniform_couplings(spec, -1.0, CROSS, symmetry)
    schedule = AnnealSchedule(replicas=replicas, seed=SEED, bounds=BOUNDS)
    res, elapsed = _timed(run_annealing, spec, basis, a, b, t, schedule, template)
    return res, elapsed


def test_c1_chain_transfer(record):
    spec = build_grid(6, 1)
    basis = build_basis(6, 1)

    def run():
        H = build_hamiltonian(spec, CouplingConfig(spec, standard_protocol(6, -2.0)), basis)
        return transfer_fidelity(H, fock_state(basis, [0]), fock_state(basis, [5]), 125.0, squared=True)

    f, dt = _timed(run)
    ok = abs(f - 1) <= 1e-8 and dt < 1
    record("C1", ok, f"1D N=6 F(125 ns) = {f:.12f} (need 1 within 1e-8), {dt:.3f} s (< 1 s)")
    assert ok


def test_c2_product_protocol_6x6(record):
    spec = build_grid(6, 6)
    basis = build_basis(36, 1)

    def run():
        H = build_hamiltonian(spec, product_protocol_2d(6, 6, -1.0, spec=spec), basis)
        return transfer_fidelity(H, fock_state(basis, [0]), fock_state(basis, [35]), tj_to_ns(np.pi / 2, 1.0), squared=True)

    f, dt = _timed(run)
    ok = abs(f - 1) <= 1e-8 and dt < 5
    record("C2", ok, f"6x6 product protocol F(tJ=pi/2) = {f:.12f} (need 1 within 1e-8), {dt:.3f} s (< 5 s)")
    assert ok


def test_c3_broken_protocol(record):
    spec = imperfect_grid(3)
    basis = build_basis(9, 1)

    def run():
        c = product_protocol_2d(3, 3, -2.0, spec=spec, cross_mhz=CROSS)
        H = build_hamiltonian(spec, c, basis)
        return transfer_fidelity(H, fock_state(basis, [0]), fock_state(basis, [8]), 125.0, squared=True)

    f, dt = _timed(run)
    ok = f < 0.5 and dt < 1
    record("C3", ok, f"3x3 uniform NN + cross + defect F(tJ=pi/2) = {f:.4f} (need < 0.5; measured ~0.27), amplitude {np.sqrt(f):.4f}, {dt:.3f} s")
    assert ok


@pytest.mark.slow
def test_c4_anneal_3x3_single(record):
    res, dt = optimized(3, 1, 5)
    f = res.best.best_fidelity
    ok = f >= 0.98 and dt <= 600
    record("C4", ok, f"3x3 single-excitation annealed F = {f:.5f} (need >= 0.98, reference ~0.9902; "
                     f"amplitude {np.sqrt(f):.5f}), "
                     f"{dt:.0f} s (<= 600 s); see decisions ledger for the inversion-symmetric optimum")
    assert ok


@pytest.mark.slow
def test_c4_symmetry_released_variant(record):
    res, dt = optimized(3, 1, 5, Symmetry.FREE)
    f = res.best.best_fidelity
    record("C4-variant", None, f"same problem without the inversion constraint: F = {f:.5f}, {dt:.0f} s (not gating)")


@pytest.mark.slow
def test_c5_anneal_6x6_single(record):
    res, dt = optimized(6, 1, 5)
    f = res.best.best_fidelity
    ok = f >= 0.98 and dt <= 3600
    record("C5", ok, f"6x6 single-excitation annealed F = {f:.5f} at 250 ns (need >= 0.98, reference ~0.9979; "
                     f"amplitude {np.sqrt(f):.5f}), "
                     f"{dt:.0f} s (<= 3600 s)")
    assert ok


@pytest.mark.slow
def test_c6_anneal_3x3_two_excitations(record):
    res, dt = optimized(3, 2, 40)
    f = res.best.best_fidelity
    ok = f >= 0.91 and dt <= 3600
    record("C6", ok, f"3x3 two-excitation annealed F = {f:.5f} over k=40 (need >= 0.91, reference ~0.9388), "
                     f"{dt:.0f} s (<= 3600 s)")
    assert ok


def test_c6_extended_6x6_two_excitations(record):
    record("C6-extended", None, "6x6 two-excitation 6-hour benchmark not run in the test suite; "
                                "see demos/anneal_6x6_two_excitations.py")
    pytest.skip("6-hour benchmark, run on demand")


@pytest.mark.slow
def test_c7_ergodicity_contrast(record):
    spec = imperfect_grid(6)
    basis = build_basis(36, 2)
    template = uniform_couplings(spec, -1.0, CROSS, Symmetry.INVERSION)

    def random_side():
        stats = []
        for i in range(40):
            H = build_hamiltonian(spec, random_couplings(template, (-10.0, -0.1), SEED, i), basis)
            stats.append(gap_ratios(H)[Sector.COMBINED])
        return pool(stats).mean_r

    r_random, dt = _timed(random_side)
    goe = surmise_mean(Surmise.GOE)
    ok_random = abs(r_random - goe) <= 0.02 and dt <= 7200
    record("C7-random", ok_random, f"6x6 two-excitation random ensemble <r> = {r_random:.4f} "
                                   f"(GOE {goe:.4f} +- 0.02), {dt:.0f} s")

    # optimized side reuses the 3x3 two-excitation replicas
    res, _ = optimized(3, 2, 40)
    spec3, basis3, *_ = transfer_problem(3, 2)
    good = [r for r in res.runs if r.best_fidelity > 0.93]
    stats = [gap_ratios(build_hamiltonian(spec3, r.best_couplings, basis3))[Sector.COMBINED] for r in good]
    r_opt = pool(stats).mean_r if stats else float("nan")
    poisson = surmise_mean(Surmise.POISSON)
    ok_opt = len(good) > 0 and abs(r_opt - poisson) <= 0.03
    record("C7-optimized", ok_opt, f"3x3 optimized solutions with F > 0.93: {len(good)} of {len(res.runs)}, "
                                   f"<r> = {r_opt:.4f} (Poisson {poisson:.4f} +- 0.03)")
    assert ok_random and ok_opt


def test_c8_sector_dimensions(record):
    dims = parity_sectors(build_basis(36, 2), build_grid(6, 6)).dims
    ok = dims == (324, 306)
    record("C8", ok, f"6x6 two-excitation (even, odd) = {dims} (need (324, 306))")
    assert ok


def test_c9_fock_metric(record):
    s6, s3 = build_grid(6, 6), build_grid(3, 3)
    b6, b3 = build_basis(36, 2), build_basis(9, 2)
    d6 = fock_distance(b6, s6, b6.index([34, 35]), [0, 1])
    d3 = fock_distance(b3, s3, b3.index([7, 8]), [0, 1])
    m3 = mean_distance(b3, s3, [0, 1])
    ok = d6 == 8.5 and d3 == 2.5 and abs(m3 - 1.33) <= 0.01
    record("C9", ok, f"d(Q1Q2 -> Q35Q36) = {d6}, d(Q1Q2 -> Q8Q9) = {d3}, 3x3 mean = {m3:.4f}")
    assert ok


@pytest.mark.slow
def test_c10_speed_limits(record):
    worst_t, worst_mt, count = np.inf, -np.inf, 0
    for n, n_exc, k in [(3, 1, 5), (6, 1, 5), (3, 2, 40)]:
        res, _ = optimized(n, n_exc, k)
        spec, basis, a, _, t = transfer_problem(n, n_exc)
        for run in res.runs:
            H = build_hamiltonian(spec, run.best_couplings, basis)
            rep = qsl_report(H, a)
            curve = qsl_bounds_curve(H, a, np.linspace(0.0, t, 4001))
            worst_t = min(worst_t, t - rep.t_dE)
            worst_mt = max(worst_mt, curve.mt_violation())
            count += 1
    ok = worst_t >= 0 and worst_mt <= 1e-9
    record("C10", ok, f"{count} optimized solutions: min(t_QST - t_dE) = {worst_t:.2f} ns, "
                      f"max MT violation = {worst_mt:.2e} (need <= 1e-9)")
    assert ok


def test_c11_thermal_extrapolation(record):
    res, dt = _timed(thermal_sweep, ((2, 2), (2, 3), (3, 3), (3, 4)), "single", (0.0, 0.005), 25, SEED)
    g = list(res.gammas).index(0.005)
    at_9 = res.infidelity_mean[res.site_counts.tolist().index(9), g]
    at_36 = res.extrapolated[0.005]
    ok = 0.07 <= at_36 <= 0.13 and 0.015 <= at_9 <= 0.045 and dt <= 1800
    record("C11", ok, f"gamma = 0.5%: 3x3 infidelity {at_9:.2%} (need 1.5-4.5%), "
                      f"extrapolated 36 sites {at_36:.2%} (need 7-13%), {dt:.0f} s")
    assert ok


def test_c12_property_suites(record):
    here = Path(__file__).parent
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           str(here / "test_properties.py")], capture_output=True, text=True, cwd=here.parent)
    dt = time.perf_counter() - t0
    ok = proc.returncode == 0 and dt < 60
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    record("C12", ok, f"property suites: {summary} ({dt:.1f} s, < 60 s)")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
