import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photondfs.dfs import dark_state_check, decay_rate_probe, stationary_limit, subspace_check
from photondfs.lindblad import CouplingModel, build_generator, superoperator
from photondfs.observables import fidelity
from photondfs.operators import PauliAxis, embed, pauli
from photondfs.propagate import TimeGrid, propagate_expm
from photondfs.states import density_from_pure, named_state

SINGLET = named_state("singlet")
L0 = named_state("logical0_4q")
L1 = named_state("logical1_4q")


def test_singlet_dark_under_equal_weights():
    rep = dark_state_check(SINGLET, [1, 1])
    assert rep.is_df
    assert rep.max_residual < 1e-15


def test_singlet_not_dark_under_anticorrelated_weights():
    rep = dark_state_check(SINGLET, [1, -1])
    assert not rep.is_df
    assert np.abs(np.array(rep.residuals) - 2).max() < 1e-12
    assert abs(rep.total_residual - 2 * np.sqrt(3)) < 1e-12


def test_anticorrelated_residual_by_hand():
    # L_i singlet = 2 sigma_{i,1} singlet, whose norm is 2, and <L_i> = 0
    for axis in PauliAxis:
        l = embed(pauli(axis), 1, 2) - embed(pauli(axis), 2, 2)
        v = l @ SINGLET
        assert abs(np.vdot(SINGLET, v)) < 1e-15
        assert np.abs(v - 2 * embed(pauli(axis), 1, 2) @ SINGLET).max() < 1e-15


def test_logical0_dark_under_collective_noise():
    assert dark_state_check(L0, [1, 1, 1, 1]).max_residual <= 1e-12
    assert dark_state_check(L1, [1, 1, 1, 1]).max_residual <= 1e-12


def test_dark_state_scalar_but_nonzero_action_counts_as_dark():
    # |HH> is an eigenvector of Z-type collective operators only, not dark overall
    hh = named_state("product_HH")
    rep = dark_state_check(hh, [1, 1])
    assert rep.residuals[2] < 1e-15
    assert rep.residuals[0] > 1


def test_dark_state_dimension_mismatch():
    with pytest.raises(ValueError):
        dark_state_check(SINGLET, [1, 1, 1])


def test_subspace_examples():
    assert subspace_check([L0, L1], [1, 1, 1, 1]).max_residual <= 1e-12
    rep = subspace_check([L0, L1], [1, -1, 1, -1])
    assert rep.max_residual > 0.1
    assert not rep.is_df


def test_subspace_one_dim_reduces_to_dark_state():
    rng = np.random.default_rng(0)
    for _ in range(5):
        psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        psi /= np.linalg.norm(psi)
        w = rng.standard_normal(2)
        a = subspace_check([psi], w)
        b = dark_state_check(psi, w)
        assert np.abs(np.array(a.residuals) - np.array(b.residuals)).max() < 1e-12


def test_subspace_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        subspace_check([L0, L0], [1, 1, 1, 1])


@given(st.floats(0, 2 * np.pi), st.floats(0, np.pi), st.floats(0, 2 * np.pi))
@settings(max_examples=25, deadline=None)
def test_subspace_verdict_invariant_under_basis_mixing(phi, theta, chi):
    u = np.array(
        [
            [np.cos(theta / 2), -np.exp(1j * chi) * np.sin(theta / 2)],
            [np.exp(1j * phi) * np.sin(theta / 2), np.exp(1j * (phi + chi)) * np.cos(theta / 2)],
        ]
    )
    basis = np.column_stack([L0, L1]) @ u
    for w in ([1, 1, 1, 1], [1, -1, 1, -1], [0.3, 1.2, -0.4, 0.9]):
        ref = subspace_check([L0, L1], w).max_residual
        mixed = subspace_check([basis[:, 0], basis[:, 1]], w).max_residual
        assert abs(mixed - ref) <= 1e-10


@given(st.floats(0, 2 * np.pi), st.sampled_from([0.5, 2.0, 4.0]))
@settings(max_examples=25, deadline=None)
def test_dark_state_phase_and_scale(phase, s):
    rng = np.random.default_rng(1)
    psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    psi /= np.linalg.norm(psi)
    w = np.array([0.7, -1.3])
    base = np.array(dark_state_check(psi, w).residuals)
    rotated = np.array(dark_state_check(np.exp(1j * phase) * psi, w).residuals)
    assert np.abs(rotated - base).max() < 1e-14
    scaled = np.array(dark_state_check(psi, s * w).residuals)
    assert np.abs(scaled - s * base).max() < 1e-14


def test_dark_verdict_scale_invariant():
    for s in (1e-3, 1.0, 1e3):
        assert dark_state_check(SINGLET, [s, s], tol=1e-300).is_df
        assert not dark_state_check(SINGLET, [s, -s], tol=1e-300).is_df


def test_df_states_stay_put():
    for basis, w in (([SINGLET], [1, 1]), ([L0, L1], [1, 1, 1, 1])):
        assert subspace_check(basis, w).is_df
        g = build_generator(CouplingModel.from_weights(w, 1.0))
        for psi in basis:
            traj = propagate_expm(psi, g, TimeGrid(10.0, 0.5))
            f = [fidelity(r, psi) for r in traj.states]
            assert min(f) >= 1 - 1e-8


def test_stationary_limit_anticorrelated_is_maximally_mixed():
    g = build_generator(CouplingModel.from_weights([1, -1]))
    lim = stationary_limit(density_from_pure(SINGLET), superoperator(g))
    assert np.abs(lim - np.eye(4) / 4).max() < 1e-12


def test_stationary_limit_matches_long_propagation():
    g = build_generator(CouplingModel.from_weights([1, 0.5]))
    rho0 = density_from_pure(named_state("product_HH"))
    lim = stationary_limit(rho0, superoperator(g))
    late = propagate_expm(rho0, g, TimeGrid(200.0, 10.0)).final()
    assert np.abs(lim - late).max() < 1e-9


def test_decay_rate_probe_examples():
    assert decay_rate_probe(SINGLET, [1, -1], 1.0) == pytest.approx(8.0, rel=1e-2)
    assert decay_rate_probe(SINGLET, [1, 1], 1.0) == 0.0
    assert decay_rate_probe(named_state("product_H"), [1], 1.0) == pytest.approx(2.0, rel=1e-2)


def test_decay_rate_probe_scales_with_gamma():
    assert decay_rate_probe(SINGLET, [1, -1], 3.0) == pytest.approx(24.0, rel=1e-2)


def test_decay_rate_probe_logical_states_under_anticorrelation():
    for psi in (L0, L1):
        assert decay_rate_probe(psi, [1, -1, 1, -1]) > 1.0
