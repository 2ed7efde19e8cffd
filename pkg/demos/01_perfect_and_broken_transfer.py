"""Perfect transfer on a chain and on a 6x6 grid, then what a real device breaks.

The mirror-symmetric couplings J*sqrt(n(N-n)) move an excitation end to end
at tJ = pi/2. On a grid the same profile along rows and columns factorizes
into two large spins precessing in step. Cross couplings inside each plaquette
plus one stuck coupler destroy that synchronization.
"""
import numpy as np

from qstforge.dynamics import evolve, fock_state, spin_trajectory, transfer_fidelity
from qstforge.fock import build_basis
from qstforge.hamiltonian import CouplingConfig, build_hamiltonian, product_protocol_2d, standard_protocol, tj_to_ns
from qstforge.lattice import build_grid


def chain():
    spec, basis = build_grid(6, 1), build_basis(6, 1)
    H = build_hamiltonian(spec, CouplingConfig(spec, standard_protocol(6, -2.0)), basis)
    print("1D chain, J/2pi = 2 MHz")
    for t in (0, 31.25, 62.5, 93.75, 125.0):
        f = transfer_fidelity(H, fock_state(basis, [0]), fock_state(basis, [5]), t, squared=True)
        print(f"  t = {t:6.2f} ns   F(Q1 -> Q6) = {f:.6f}")


def grid():
    spec, basis = build_grid(3, 3), build_basis(9, 1)
    H = build_hamiltonian(spec, product_protocol_2d(3, 3, -2.0, spec=spec), basis)
    print("3x3 product protocol: collective spins (S1x, S1y, S1z, S2x, S2y, S2z)")
    for frac in (0, 0.5, 1.0):
        t = frac * tj_to_ns(np.pi / 2, 2.0)
        s = spin_trajectory(evolve(H, fock_state(basis, [0]), t), spec)
        print(f"  tJ = {frac:.1f} pi/2   " + " ".join(f"{x:+.3f}" for x in s))


def imperfect():
    spec = build_grid(3, 3, cross=True).with_defect((3, 2), (3, 3), 0.3)
    basis = build_basis(9, 1)
    c = product_protocol_2d(3, 3, -2.0, spec=spec, cross_mhz=0.45)
    f = transfer_fidelity(build_hamiltonian(spec, c, basis), fock_state(basis, [0]), fock_state(basis, [8]),
                          125.0, squared=True)
    print(f"same couplings with 0.45 MHz cross bonds and a coupler stuck at +0.3 MHz: F = {f:.3f}")


if __name__ == "__main__":
    chain()
    grid()
    imperfect()
