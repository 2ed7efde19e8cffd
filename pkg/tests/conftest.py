import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qstforge.dynamics import fock_state
from qstforge.fock import build_basis
from qstforge.hamiltonian import CouplingConfig, build_hamiltonian, standard_protocol, tj_to_ns
from qstforge.lattice import build_grid

settings.register_profile(
    "qstforge", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("qstforge")


def chain_couplings(n, j_mhz=-2.0):
    spec = build_grid(n, 1)
    return spec, CouplingConfig(spec, standard_protocol(n, j_mhz))


@pytest.fixture
def chain6():
    """N=6 chain under the mirror-transfer protocol at J/2pi = 2 MHz."""
    spec, c = chain_couplings(6)
    basis = build_basis(6, 1)
    H = build_hamiltonian(spec, c, basis)
    return spec, basis, H, tj_to_ns(np.pi / 2, 2.0)


@pytest.fixture
def defect3x3():
    return build_grid(3, 3, cross=True).with_defect((3, 2), (3, 3), 0.3)


SHAPES = {4: (2, 2), 5: (5, 1), 6: (3, 2)}


def random_instance(rng, n_sites, n_exc=1):
    """Random couplings (cross bonds included) and detunings on a small grid."""
    spec = build_grid(*SHAPES[n_sites], cross=True)
    c = CouplingConfig(spec, rng.uniform(-5, 5, size=len(spec.bonds)))
    basis = build_basis(n_sites, n_exc)
    return spec, basis, build_hamiltonian(spec, c, basis, onsite_mhz=rng.normal(size=n_sites))


def start_state(basis):
    return fock_state(basis, list(range(basis.n_excitations)))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Append one acceptance line; the summary hook prints them all at the end."""

    def _record(cid, passed, detail):
        status = {True: "PASS", False: "FAIL", None: "INFO"}[passed]
        line = f"[{status}] {cid} {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
