"""How fragile is the 3x3 product-protocol transfer?

Coupling noise multiplies each tunable coupler by (1 + delta). Frequency noise
detunes each qubit by delta MHz. Thermal noise leaves every qubit with a small
residual excited population gamma, simulated in the full 2^N space.
"""
import numpy as np

from qstforge.dynamics import fock_state
from qstforge.fock import build_basis
from qstforge.hamiltonian import product_protocol_2d
from qstforge.lattice import build_grid
from qstforge.robustness import coupling_noise_sweep, frequency_noise_sweep, thermal_sweep


def main():
    spec, basis = build_grid(3, 3), build_basis(9, 1)
    c = product_protocol_2d(3, 3, -2.0, spec=spec)
    a, b = fock_state(basis, [0]), fock_state(basis, [8])
    sig = [0.0, 0.05, 0.1, 0.2]
    cn = coupling_noise_sweep(spec, c, basis, a, b, 125.0, sig, n_instances=200)
    fn = frequency_noise_sweep(spec, c, basis, a, b, 125.0, [0.0, 0.1, 0.2, 0.5], n_instances=200)
    print("relative coupling noise  F/F0")
    for s, m, e in zip(cn.sigmas, cn.mean, cn.stderr):
        print(f"  {s:5.2f}   {m:.4f} +- {e:.4f}")
    print("frequency noise (MHz)    F/F0")
    for s, m, e in zip(fn.sigmas, fn.mean, fn.stderr):
        print(f"  {s:5.2f}   {m:.4f} +- {e:.4f}")

    res = thermal_sweep(gamma_list=(0.0, 0.005, 0.01), n_realizations=25)
    print("thermal infidelity (F0 - F)/F0 versus number of qubits")
    for j, g in enumerate(res.gammas):
        row = "  ".join(f"{n:2d}: {v:6.2%}" for n, v in zip(res.site_counts, res.infidelity_mean[:, j]))
        print(f"  gamma = {g:.3f}  {row}  -> 36 qubits: {res.extrapolated[float(g)]:.2%}")


if __name__ == "__main__":
    np.set_printoptions(precision=4)
    main()
