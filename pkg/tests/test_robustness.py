import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qstforge.dynamics import evolve, fock_state
from qstforge.errors import ResourceLimitError
from qstforge.fock import build_basis
from qstforge.hamiltonian import build_hamiltonian, product_protocol_2d, tj_to_ns
from qstforge.lattice import build_grid
from qstforge.robustness import (
    MAX_SITES,
    Measure,
    NoiseKind,
    case_fidelities,
    coupling_noise_sweep,
    embed,
    evolve_full,
    frequency_noise_sweep,
    full_space_hamiltonian,
    protocol_case,
    subsystem_fidelity,
    thermal_product_state,
    thermal_sweep,
)


def _product(n1, n2, n_exc=1):
    spec = build_grid(n1, n2)
    basis = build_basis(n1 * n2, n_exc)
    return spec, product_protocol_2d(n1, n2, -2.0, spec=spec), basis


def _ends(basis, n):
    return fock_state(basis, [0]), fock_state(basis, [n - 1])


def test_zero_noise_is_perfect():
    spec, c, basis = _product(3, 3)
    a, b = _ends(basis, 9)
    for sweep in (coupling_noise_sweep, frequency_noise_sweep):
        res = sweep(spec, c, basis, a, b, 125.0, [0.0, 0.05], n_instances=20)
        assert res.mean[0] == 1.0 and res.stderr[0] == 0.0
        assert res.clean_fidelity == pytest.approx(1.0, abs=1e-10)
        assert res.mean[1] < 1.0


def test_noise_rejects_bad_arguments():
    spec, c, basis = _product(3, 3)
    a, b = _ends(basis, 9)
    with pytest.raises(ValueError):
        coupling_noise_sweep(spec, c, basis, a, b, 125.0, [-0.1])
    with pytest.raises(ValueError):
        frequency_noise_sweep(spec, c, basis, a, b, 125.0, [0.1], n_instances=0)


def test_noise_is_reproducible_and_declines():
    spec, c, basis = _product(3, 3)
    a, b = _ends(basis, 9)
    sig = [0.0, 0.02, 0.05, 0.1, 0.2]
    r1 = coupling_noise_sweep(spec, c, basis, a, b, 125.0, sig, n_instances=50, seed=3)
    r2 = coupling_noise_sweep(spec, c, basis, a, b, 125.0, sig, n_instances=50, seed=3)
    assert np.array_equal(r1.mean, r2.mean)
    assert r1.kind is NoiseKind.COUPLING
    # common random numbers keep the curve monotone
    assert np.all(np.diff(r1.mean) < 0)
    f = frequency_noise_sweep(spec, c, basis, a, b, 125.0, [0.0, 0.1, 0.3, 1.0], n_instances=50)
    assert np.all(np.diff(f.mean) < 0)


def test_uniform_frequency_shift_is_harmless():
    # a global detuning only adds a phase inside one excitation number sector
    spec, c, basis = _product(3, 3)
    a, b = _ends(basis, 9)
    H = build_hamiltonian(spec, c, basis, onsite_mhz=np.full(9, 0.7))
    assert abs(evolve(H, a, 125.0).overlap(b)) ** 2 == pytest.approx(1.0, abs=1e-10)


def test_full_space_hamiltonian_matches_subspace():
    spec, c, basis = _product(3, 2, 2)
    H = full_space_hamiltonian(spec, c).toarray()
    Hs = build_hamiltonian(spec, c, basis)
    idx = np.array([sum(1 << s for s in st_) for st_ in basis.states])
    assert np.allclose(H[np.ix_(idx, idx)], Hs.matrix, atol=1e-14)
    assert np.allclose(H, H.conj().T)


@given(st.integers(0, 2**31 - 1), st.sampled_from([1, 2]))
@settings(max_examples=15)
def test_full_space_evolution_agrees_with_subspace(seed, n_exc):
    rng = np.random.default_rng(seed)
    spec = build_grid(3, 2, cross=True)
    from qstforge.hamiltonian import CouplingConfig

    c = CouplingConfig(spec, rng.uniform(-5, 5, size=len(spec.bonds)))
    basis = build_basis(6, n_exc)
    a = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    a /= np.linalg.norm(a)
    from qstforge.dynamics import StateVector

    t = rng.uniform(0, 200)
    sub = evolve(build_hamiltonian(spec, c, basis), StateVector(basis, a), t).amplitudes
    full = evolve_full(full_space_hamiltonian(spec, c), embed(basis, a), t)
    assert np.allclose(full, embed(basis, sub), atol=1e-9)


def test_resource_limit():
    with pytest.raises(ResourceLimitError):
        full_space_hamiltonian(build_grid(5, 3), product_protocol_2d(5, 3, -1.0))
    with pytest.raises(ResourceLimitError):
        thermal_product_state(MAX_SITES + 1, [0], 0.01, np.random.default_rng(0))


def test_thermal_state_examples():
    rng = np.random.default_rng(0)
    psi = thermal_product_state(4, [0], 0.0, rng)
    assert abs(psi[1]) == pytest.approx(1.0)  # only qubit 0 excited
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    psi = thermal_product_state(4, [0], 0.05, rng)
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    bell = thermal_product_state(4, [], 0.0, rng, bell_pair=(0, 1))
    assert bell[1] == pytest.approx(1 / np.sqrt(2)) and bell[2] == pytest.approx(-1 / np.sqrt(2))
    with pytest.raises(ValueError):
        thermal_product_state(4, [0], 1.5, rng)


def test_residual_population_averages_to_gamma():
    rng = np.random.default_rng(2)
    pops = []
    for _ in range(2000):
        psi = thermal_product_state(2, [0], 0.05, rng)
        pops.append(abs(psi[0b10]) ** 2 + abs(psi[0b11]) ** 2)  # qubit 1 excited
    assert np.mean(pops) == pytest.approx(0.05, abs=0.002)


def test_subsystem_fidelity_examples():
    psi = np.zeros(8, dtype=complex)
    psi[0b101] = 1.0
    assert subsystem_fidelity(psi, 3, [2], np.array([0, 1.0])) == 1.0
    assert subsystem_fidelity(psi, 3, [1], np.array([0, 1.0])) == 0.0
    assert subsystem_fidelity(psi, 3, [0, 2], np.array([0, 0, 0, 1.0])) == 1.0
    assert subsystem_fidelity(psi, 3, [2, 1], np.array([0, 1.0, 0, 0])) == 1.0


@pytest.mark.parametrize("protocol", ["single", "bell"])
def test_clean_thermal_case_is_perfect(protocol):
    case = protocol_case(3, 3, protocol)
    for m in Measure:
        assert case_fidelities(case, 0.0, 1, 0, m)[0] == pytest.approx(1.0, abs=1e-9)


def test_two_excitation_needs_couplings():
    with pytest.raises(ValueError):
        protocol_case(3, 3, "two")


def test_thermal_sweep_zero_gamma_has_zero_infidelity():
    res = thermal_sweep(sizes=[(2, 2), (2, 3)], gamma_list=[0.0, 0.02], n_realizations=5)
    assert np.all(res.infidelity_mean[:, 0] == 0.0)
    assert np.all(res.infidelity_mean[:, 1] > 0.0)
    assert res.site_counts.tolist() == [4, 6]
    assert set(res.extrapolated) == {0.0, 0.02}
