"""Random couplings look chaotic; couplings tuned for transfer do not.

The gap ratio r = min(s_n, s_{n+1}) / max(s_n, s_{n+1}) needs no unfolding.
Its mean is about 0.536 for GOE-like spectra and 0.386 for Poisson ones.
"""
import argparse

import numpy as np

from qstforge.anneal import AnnealSchedule, run_annealing
from qstforge.chaos import Sector, Surmise, gap_ratios, pool, random_couplings, surmise_mean
from qstforge.dynamics import fock_state
from qstforge.fock import build_basis
from qstforge.hamiltonian import Symmetry, build_hamiltonian, tj_to_ns, uniform_couplings
from qstforge.lattice import build_grid


def mean_r(spec, basis, configs):
    return pool(gap_ratios(build_hamiltonian(spec, c, basis))[Sector.COMBINED] for c in configs).mean_r


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--draws", type=int, default=10)
    p.add_argument("--replicas", type=int, default=6)
    p.add_argument("--steps", type=int, default=30_000)
    args = p.parse_args()
    print(f"reference means: GOE {surmise_mean(Surmise.GOE):.4f}, Poisson {surmise_mean(Surmise.POISSON):.4f}")

    spec = build_grid(6, 6, cross=True).with_defect((6, 3), (6, 4), 0.3)
    basis = build_basis(36, 2)
    tmpl = uniform_couplings(spec, -1.0, 0.45, Symmetry.INVERSION)
    draws = [random_couplings(tmpl, (-10.0, -0.1), 0, i) for i in range(args.draws)]
    print(f"6x6, two excitations, {args.draws} random draws: <r> = {mean_r(spec, basis, draws):.4f}")

    spec3 = build_grid(3, 3, cross=True).with_defect((3, 2), (3, 3), 0.3)
    basis3 = build_basis(9, 2)
    tmpl3 = uniform_couplings(spec3, -1.0, 0.45, Symmetry.INVERSION)
    res = run_annealing(spec3, basis3, fock_state(basis3, [0, 1]), fock_state(basis3, [7, 8]),
                        tj_to_ns(np.pi / 2, 2.0), AnnealSchedule(steps=args.steps, replicas=args.replicas), tmpl3)
    good = [r.best_couplings for r in res.runs if r.best_fidelity > 0.9]
    print(f"3x3, two excitations, {len(good)} optimized solutions with F > 0.9: "
          f"<r> = {mean_r(spec3, basis3, good) if good else float('nan'):.4f}")
    rand3 = [random_couplings(tmpl3, (-10.0, -0.1), 0, i) for i in range(len(good) or 1)]
    print(f"3x3, same number of random draws: <r> = {mean_r(spec3, basis3, rand3):.4f}")


if __name__ == "__main__":
    main()
