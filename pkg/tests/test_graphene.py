import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcorr.errors import InvalidArgument, UnsupportedParameters
from qcorr.graphene import (
    ELEMENT_INDEX,
    GrapheneParams,
    analytic_eigensystem,
    build_hamiltonian,
    ground_state,
    thermal_closed_elements,
    thermal_state,
)
from qcorr.measures import concurrence_pure, tmin_oracle, uin_oracle
from qcorr.qmat import eigvalsh, hermitian_eig, trace_norm

from conftest import random_params

S5 = math.sqrt(5)
params = st.builds(
    GrapheneParams,
    st.floats(-5, 5),
    st.floats(-5, 5),
    st.floats(-5, 5),
    st.floats(0.05, 3).flatmap(lambda x: st.sampled_from([x, -x])),
    st.floats(0, 2 * math.pi),
)


def test_params_validation():
    with pytest.raises(InvalidArgument):
        GrapheneParams(eta=float("nan"))
    p = GrapheneParams(lam=0.0)
    build_hamiltonian(p)
    with pytest.raises(UnsupportedParameters):
        p.eta11
    with pytest.raises(UnsupportedParameters):
        analytic_eigensystem(p)
    with pytest.raises(UnsupportedParameters):
        ground_state(p)
    with pytest.raises(UnsupportedParameters):
        thermal_closed_elements(p, 1.0)


def test_hamiltonian_examples():
    np.testing.assert_allclose(eigvalsh(build_hamiltonian(GrapheneParams(0, 1, 1, 1, 0))), [0, 0, 2, 2], atol=1e-14)
    np.testing.assert_allclose(
        eigvalsh(build_hamiltonian(GrapheneParams(1, 1, 1, 1, 0))), [1 - S5, 0, 2, 1 + S5], atol=1e-12
    )


@settings(max_examples=50, deadline=None)
@given(params)
def test_hamiltonian_hermitian(p):
    h = build_hamiltonian(p)
    assert np.abs(h - h.conj().T).max() <= 1e-14


def test_analytic_unit_example():
    es = analytic_eigensystem(GrapheneParams(1, 1, 1, 1, 0))
    np.testing.assert_allclose(es.energies, [1 - S5, 1 + S5, 0, 2], atol=1e-14)


@settings(max_examples=100, deadline=None)
@given(params)
def test_analytic_matches_numeric(p):
    h = build_hamiltonian(p)
    es = analytic_eigensystem(p)
    num = hermitian_eig(h).values
    scale = max(1.0, np.abs(num).max())
    np.testing.assert_allclose(np.sort(es.energies), num, atol=1e-9 * scale)
    assert es.residual(h).max() <= 1e-9 * scale
    np.testing.assert_allclose(np.linalg.norm(es.states, axis=0), 1, atol=1e-12)
    from qcorr.graphene import n_coefficients

    _, _, bp, bm = n_coefficients(p)
    assert abs(abs(bp) - 0.5) < 1e-12 and abs(abs(bm) - 0.5) < 1e-12


@settings(max_examples=30, deadline=None)
@given(params, st.floats(0, 2 * math.pi))
def test_spectrum_alpha_independent(p, alpha2):
    q = GrapheneParams(p.eta, p.eta_x, p.eta_y, p.lam, alpha2)
    scale = max(1.0, np.abs(eigvalsh(build_hamiltonian(p))).max())
    np.testing.assert_allclose(
        eigvalsh(build_hamiltonian(p)), eigvalsh(build_hamiltonian(q)), atol=1e-10 * scale
    )


def test_ground_state_phi1():
    p = GrapheneParams(1, 1, 1, 1, 0)
    g = ground_state(p)
    assert g.kind == "unique" and g.label == "phi1"
    assert g.energy == pytest.approx(1 - S5)
    np.testing.assert_allclose(g.state, analytic_eigensystem(p).states[:, 0])


def test_ground_state_sign_table():
    assert ground_state(GrapheneParams(1, -1, 1, 1, 0)).label == "phi3"
    assert ground_state(GrapheneParams(1, 1, 1, -1, 0)).label == "phi4"  # eta11 < 0 for lambda < 0
    assert ground_state(GrapheneParams(1, -1, 1, -1, 0)).label == "phi2"


def test_ground_state_lambda_flip_swaps_branch_pair():
    for ex in (1.0, -1.0):
        up = ground_state(GrapheneParams(1, ex, 1, 1, 0)).label
        down = ground_state(GrapheneParams(-1, ex, 1, -1, 0)).label  # same eta11
        assert {up, down} in ({"phi1", "phi2"}, {"phi3", "phi4"})


def test_degenerate_ground_concurrence():
    g = ground_state(GrapheneParams(1, 0, 1, 1, 0), beta_phase=0.0)
    assert g.kind == "degenerate-superposition" and g.label == "phi_g+"
    assert concurrence_pure(g.state) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert ground_state(GrapheneParams(1, 0, 1, -1, 0)).label == "phi_g-"


@settings(max_examples=60, deadline=None)
@given(params, st.floats(0, 2 * math.pi))
def test_ground_state_invariants(p, beta):
    g = ground_state(p, beta)
    h = build_hamiltonian(p)
    scale = max(1.0, abs(g.energy))
    assert abs(np.linalg.norm(g.state) - 1) < 1e-12
    assert np.abs(h @ g.state - g.energy * g.state).max() < 1e-9 * scale
    assert abs(g.energy - eigvalsh(h)[0]) < 1e-9 * scale


@pytest.mark.parametrize("eta_y", [0.3, 1.0, 4.0])
@pytest.mark.parametrize("beta", [0.0, 1.1])
def test_degenerate_branches_share_measures(eta_y, beta):
    plus = ground_state(GrapheneParams(1, 0, eta_y, 1, 0.4), beta).state
    minus = ground_state(GrapheneParams(1, 0, eta_y, -1, 0.4), beta).state
    rp, rm = np.outer(plus, plus.conj()), np.outer(minus, minus.conj())
    assert abs(concurrence_pure(plus) - concurrence_pure(minus)) < 1e-8
    assert abs(tmin_oracle(rp) - tmin_oracle(rm)) < 1e-8
    assert abs(uin_oracle(rp) - uin_oracle(rm)) < 1e-8


def test_thermal_rejects_nonpositive_temperature():
    for t in (0.0, -1.0, float("nan")):
        with pytest.raises(InvalidArgument):
            thermal_state(GrapheneParams(), t)


def test_thermal_limits(rng):
    for _ in range(20):
        p = random_params(rng)
        hot = thermal_state(p, 1e6)
        assert trace_norm(hot - np.eye(4) / 4) <= 1e-4
        e = eigvalsh(build_hamiltonian(p))
        if e[1] - e[0] > 0.05:
            cold = thermal_state(p, 1e-3)
            g = ground_state(p).state
            assert (g.conj() @ cold @ g).real >= 1 - 1e-6


def test_thermal_small_temperature_no_overflow():
    rho = thermal_state(GrapheneParams(5, 5, 5, 0.05, 0), 1e-4)
    assert np.all(np.isfinite(rho))


@settings(max_examples=40, deadline=None)
@given(params, st.floats(0.01, 100))
def test_thermal_state_is_density_matrix(p, t):
    rho = thermal_state(p, t)
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.abs(rho - rho.conj().T).max() < 1e-14
    assert eigvalsh(rho)[0] > -1e-12


def test_thermal_monotone_towards_identity(rng):
    temps = np.geomspace(0.05, 50, 60)
    for _ in range(10):
        p = random_params(rng)
        d = [trace_norm(thermal_state(p, t) - np.eye(4) / 4) for t in temps]
        assert np.all(np.diff(d) <= 1e-10)


def test_closed_partition_function(rng):
    for _ in range(30):
        p = random_params(rng)
        t = float(rng.uniform(0.2, 5))
        cf = thermal_closed_elements(p, t)
        z = np.exp(-eigvalsh(build_hamiltonian(p)) / t).sum()
        assert cf.Z > 0
        assert cf.Z == pytest.approx(z, rel=1e-10)
        assert 4 * cf.elements["rho11"] == pytest.approx(cf.Z, rel=1e-10)
        assert set(cf.elements) == set(ELEMENT_INDEX)


def test_closed_diagonal_matches_numeric(rng):
    for _ in range(20):
        p = random_params(rng)
        t = float(rng.uniform(0.2, 5))
        m = thermal_closed_elements(p, t).matrix()
        np.testing.assert_allclose(np.diag(m).real, np.diag(thermal_state(p, t)).real, atol=1e-10)


@pytest.mark.parametrize("eta_x", [1.0, -1.0])
@pytest.mark.parametrize("alpha", [0.0, 2.2])
def test_analytic_degenerate_branch_pair(eta_x, alpha):
    # eta11 = +-1 with eta22 = 0 makes one normalization 0/0
    p = GrapheneParams(1.0, eta_x, 0.0, 1.0, alpha)
    es = analytic_eigensystem(p)
    assert es.residual(build_hamiltonian(p)).max() < 1e-14
    np.testing.assert_allclose(es.states.conj().T @ es.states, np.eye(4), atol=1e-14)
