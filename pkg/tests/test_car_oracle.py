"""Tests for the explicit Fock-space oracle (Jordan-Wigner density matrices)."""

import itertools

import numpy as np
import pytest

from quasifree import car, car_oracle, sampling
from quasifree.errors import SizeCapError


def test_jw_generators_clifford_relations():
    rep = car_oracle.jw_generators(3)
    gens = rep.generators
    assert len(gens) == 6 and rep.dim == 8
    eye = np.eye(8)
    for i, gi in enumerate(gens):
        # Hermitian, and {c_i, c_j} = 2 delta_ij -- exactly, the entries are
        # products of 0, +-1, +-i
        assert np.max(np.abs(gi - gi.conj().T)) == 0.0
        for j, gj in enumerate(gens):
            anti = gi @ gj + gj @ gi
            expect = 2.0 * eye if i == j else np.zeros((8, 8))
            assert np.max(np.abs(anti - expect)) == 0.0


def test_jw_generator_cap():
    with pytest.raises(SizeCapError):
        car_oracle.jw_generators(0)
    with pytest.raises(SizeCapError):
        car_oracle.jw_generators(car_oracle.MAX_MODES + 1)


def test_density_single_mode_is_diagonal_occupation():
    rho = car_oracle.density_from_covariance(car.mu_covariance(0.3))
    assert np.linalg.norm(rho - np.diag([0.2, 0.8])) <= 1e-12


def test_density_pure_state_is_projection():
    rho = car_oracle.density_from_covariance(car.mu_covariance(0.5))
    w = np.linalg.eigvalsh(rho)
    assert np.allclose(sorted(w), [0.0, 1.0], atol=1e-10)
    assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-10)


def test_density_reproduces_all_wick_moments(rng):
    """Every generator-monomial expectation of rho matches the covariance side."""
    n = 2
    d = 2 * n
    s = sampling.random_car_covariance(rng, d)
    rep = car_oracle.jw_generators(n)
    rho = car_oracle.density_from_covariance(s, rep)
    basis = np.eye(d)
    for k in range(0, d + 1):
        for idx in itertools.combinations(range(d), k):
            mono = np.eye(rep.dim, dtype=complex)
            for j in idx:
                mono = mono @ rep.generators[j]
            # generators are sqrt(2) times the orthonormal-basis elements
            got = np.trace(rho @ mono) / 2.0 ** (k / 2.0)
            want = car.wick_moment(s, [basis[j] for j in idx])
            assert abs(got - want) <= 1e-10


def test_density_is_even_parity(rng):
    s = sampling.random_car_covariance(rng, 4)
    rho = car_oracle.density_from_covariance(s)
    parity = np.kron(np.diag([1.0, -1.0]), np.diag([1.0, -1.0]))
    assert np.linalg.norm(rho @ parity - parity @ rho) <= 1e-12


def test_density_factorizes_over_modes():
    s1 = car.mu_covariance(0.3)
    s2 = car.mu_covariance(-0.2)
    block = np.zeros((4, 4), dtype=complex)
    block[:2, :2] = s1.matrix
    block[2:, 2:] = s2.matrix
    rho = car_oracle.density_from_covariance(car.validate_car(block))
    expect = np.kron(
        car_oracle.density_from_covariance(s1), car_oracle.density_from_covariance(s2)
    )
    assert np.linalg.norm(rho - expect) <= 1e-12


def test_density_caps():
    with pytest.raises(SizeCapError, match="even"):
        car_oracle.density_from_covariance(np.eye(3) * 0.5)  # odd dimension
    rep = car_oracle.jw_generators(1)
    with pytest.raises(ValueError, match="modes"):
        car_oracle.density_from_covariance(sampling.random_car_covariance(np.random.default_rng(1), 4), rep)


def test_overlap_commuting_densities():
    p = np.diag([0.2, 0.8])
    q = np.diag([0.5, 0.5])
    expect = np.sqrt(0.2 * 0.5) + np.sqrt(0.8 * 0.5)
    assert car_oracle.overlap(p, q) == pytest.approx(expect, abs=1e-12)
    assert car_oracle.fidelity_tr(p, q) == pytest.approx(expect, abs=1e-12)


def test_overlap_extremes():
    up = np.diag([1.0, 0.0])
    down = np.diag([0.0, 1.0])
    assert car_oracle.overlap(up, down) == 0.0
    assert car_oracle.fidelity_tr(up, down) == 0.0
    assert car_oracle.overlap(up, up) == pytest.approx(1.0)
    with pytest.raises(ValueError, match="shape"):
        car_oracle.overlap(up, np.eye(4) / 4.0)


def test_fidelity_dominates_overlap(rng):
    for _ in range(5):
        s, t = sampling.random_car_pair(rng, 4)
        rho = car_oracle.density_from_covariance(s)
        tau = car_oracle.density_from_covariance(t)
        a = car_oracle.overlap(rho, tau)
        f = car_oracle.fidelity_tr(rho, tau)
        assert a <= f + 1e-12
        assert f**2 <= a + 1e-12


def test_formula_matches_oracle_small_sweep(rng):
    """The determinant formula against literal density matrices (dual route)."""
    for n in (1, 2, 3):
        for _ in range(4):
            s, t = sampling.random_car_pair(rng, 2 * n)
            formula = car.trans_prob_car(s, t)
            oracle = car_oracle.overlap(
                car_oracle.density_from_covariance(s),
                car_oracle.density_from_covariance(t),
            )
            assert abs(formula - oracle) <= 1e-10
