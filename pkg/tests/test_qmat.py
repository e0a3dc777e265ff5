import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qcorr.errors import DomainError, InvalidArgument
from qcorr.graphene import GrapheneParams, build_hamiltonian, thermal_state
from qcorr.measures import concurrence_mixed, tmin_oracle
from qcorr.qmat import (
    I2,
    SX,
    SY,
    SZ,
    FanoForm,
    canonicalize_fano,
    eigvalsh,
    hermitian_eig,
    hermitian_function,
    kron,
    partial_trace,
    pauli_decompose,
    sqrtm_psd,
    trace_norm,
)

from conftest import random_state, random_unitary

PHI_PLUS = np.array([1, 0, 0, 1]) / math.sqrt(2)

finite = st.floats(-10, 10, allow_nan=False)


def herm(a):
    m = a[:, :4] + 1j * a[:, 4:]
    return 0.5 * (m + m.conj().T)


# kron

def test_kron_examples():
    np.testing.assert_array_equal(kron(I2, I2), np.eye(4))
    np.testing.assert_array_equal(kron(SZ, SZ), np.diag([1, -1, -1, 1]))
    sx1 = kron(SX, I2)
    np.testing.assert_array_equal(sx1[:2, 2:], np.eye(2))
    np.testing.assert_array_equal(sx1[2:, :2], np.eye(2))
    assert not sx1[:2, :2].any()


def test_kron_index_convention(rng):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    k = kron(a, b)
    for i in range(2):
        for j in range(2):
            for p in range(2):
                for q in range(2):
                    assert abs(k[2 * i + p, 2 * j + q] - a[i, j] * b[p, q]) < 1e-15


def test_kron_rejects_wrong_dims():
    with pytest.raises(InvalidArgument):
        kron(np.eye(4), I2)


# hermitian_eig

def test_eig_diagonal():
    es = hermitian_eig(np.diag([4.0, 1.0, 3.0, 2.0]))
    np.testing.assert_array_equal(es.values, [1, 2, 3, 4])
    np.testing.assert_allclose(np.abs(es.vectors), np.eye(4)[:, [1, 3, 2, 0]])


def test_eig_pauli_x():
    es = hermitian_eig(SX)
    np.testing.assert_allclose(es.values, [-1, 1], atol=1e-15)
    v0, v1 = es.vectors[:, 0], es.vectors[:, 1]
    assert abs(abs(v0 @ np.array([1, -1]) / math.sqrt(2)) - 1) < 1e-12
    assert abs(abs(v1 @ np.array([1, 1]) / math.sqrt(2)) - 1) < 1e-12


def test_eig_unit_hamiltonian():
    h = build_hamiltonian(GrapheneParams(1, 1, 1, 1, 0))
    s5 = math.sqrt(5)
    np.testing.assert_allclose(hermitian_eig(h).values, [1 - s5, 0, 2, 1 + s5], atol=1e-12)


def test_eig_rejects_non_hermitian():
    with pytest.raises(InvalidArgument):
        hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


def test_eig_deterministic(rng):
    m = herm(rng.normal(size=(4, 8)))
    a, b = hermitian_eig(m), hermitian_eig(m.copy())
    np.testing.assert_array_equal(a.values, b.values)
    np.testing.assert_array_equal(a.vectors, b.vectors)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (4, 8), elements=finite))
def test_eig_invariants(a):
    m = herm(a)
    es = hermitian_eig(m)
    scale = max(1.0, np.abs(es.values).max())
    assert np.all(np.diff(es.values) >= 0)
    assert es.residual(m) <= 1e-10 * scale
    assert np.abs(es.vectors.conj().T @ es.vectors - np.eye(4)).max() <= 1e-10
    assert abs(es.values.sum() - np.trace(m).real) <= 1e-10 * 4 * scale


# hermitian_function

def test_sqrt_examples():
    np.testing.assert_allclose(sqrtm_psd(np.eye(4)), np.eye(4), atol=1e-15)
    np.testing.assert_allclose(sqrtm_psd(np.diag([4.0, 9.0, 0.0, 1.0])), np.diag([2, 3, 0, 1]), atol=1e-15)
    proj = np.outer(PHI_PLUS, PHI_PLUS)
    np.testing.assert_allclose(sqrtm_psd(proj), proj, atol=1e-12)


def test_sqrt_clamps_tiny_negative():
    out = sqrtm_psd(np.diag([1.0, -5e-13, 0.25, 0.0]))
    np.testing.assert_allclose(out, np.diag([1.0, 0.0, 0.5, 0.0]), atol=1e-15)


def test_sqrt_domain_error_names_eigenvalue():
    with pytest.raises(DomainError, match="-0.5"):
        sqrtm_psd(np.diag([1.0, -0.5, 0.0, 0.0]))


def test_function_domain_error():
    with pytest.raises(DomainError):
        hermitian_function(np.diag([1.0, 0.0]), math.log)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (4, 8), elements=finite))
def test_function_identity_roundtrip(a):
    m = herm(a)
    out = hermitian_function(m, lambda x: x)
    assert np.abs(out - m).max() <= 1e-12 * max(1.0, np.abs(m).max())
    assert np.abs(out - out.conj().T).max() == 0


# trace_norm

def test_trace_norm_examples():
    assert trace_norm(np.diag([1.0, -2.0, 0.0, 0.0])) == pytest.approx(3.0, abs=1e-14)
    assert trace_norm(np.zeros((4, 4))) == 0.0
    m = np.outer(PHI_PLUS, PHI_PLUS) - np.eye(4) / 4
    assert trace_norm(m) == pytest.approx(1.5, abs=1e-12)


def test_trace_norm_general_matches_singular_values(rng):
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert trace_norm(m) == pytest.approx(np.linalg.svd(m, compute_uv=False).sum(), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (4, 8), elements=finite), st.integers(0, 2**32 - 1))
def test_trace_norm_unitary_invariance(a, seed):
    m = herm(a)
    r = np.random.default_rng(seed)
    u = random_unitary(r, 4)
    assert trace_norm(m) >= 0
    assert abs(trace_norm(u @ m @ u.conj().T) - trace_norm(m)) <= 1e-10 * max(1.0, trace_norm(m))


# partial_trace

def test_partial_trace_examples():
    prod = np.diag([0.0, 1.0, 0.0, 0.0])
    np.testing.assert_array_equal(partial_trace(prod, "A"), np.diag([1.0, 0.0]))
    np.testing.assert_array_equal(partial_trace(prod, "B"), np.diag([0.0, 1.0]))
    bell = np.outer(PHI_PLUS, PHI_PLUS)
    np.testing.assert_allclose(partial_trace(bell, "A"), I2 / 2, atol=1e-15)
    np.testing.assert_allclose(partial_trace(bell, 1), I2 / 2, atol=1e-15)


def test_partial_trace_thermal(rng):
    from conftest import random_params

    for _ in range(10):
        rho = thermal_state(random_params(rng), float(rng.uniform(0.1, 5)))
        for keep in ("A", "B"):
            r = partial_trace(rho, keep)
            assert abs(np.trace(r) - 1) < 1e-10
            assert np.abs(r - r.conj().T).max() < 1e-12


def test_partial_trace_bad_id():
    with pytest.raises(InvalidArgument):
        partial_trace(np.eye(4) / 4, "C")


# Fano form

def test_pauli_decompose_examples():
    f = pauli_decompose(np.eye(4) / 4)
    assert not f.s.any() and not f.r.any() and not f.T.any()
    assert not f.canonical
    f = pauli_decompose(np.outer(PHI_PLUS, PHI_PLUS))
    np.testing.assert_allclose(f.s, 0, atol=1e-15)
    np.testing.assert_allclose(f.T, np.diag([1, -1, 1]), atol=1e-15)
    f = pauli_decompose(np.diag([1.0, 0, 0, 0]))
    np.testing.assert_array_equal(f.s, [0, 0, 1])
    np.testing.assert_array_equal(f.r, [0, 0, 1])
    np.testing.assert_array_equal(f.T, np.diag([0, 0, 1]))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_fano_reconstruction(seed, rank):
    rho = random_state(np.random.default_rng(seed), rank)
    f = pauli_decompose(rho)
    assert np.linalg.norm(f.s) <= 1 + 1e-12 and np.linalg.norm(f.r) <= 1 + 1e-12
    assert np.abs(f.density_matrix() - rho).max() <= 1e-12


def test_canonical_diagonal_input():
    f = FanoForm(np.zeros(3), np.zeros(3), np.diag([0.5, -0.3, 0.1]))
    g = canonicalize_fano(f)
    assert g.canonical
    np.testing.assert_allclose(np.abs(g.c), [0.5, 0.3, 0.1])
    np.testing.assert_allclose(g.c, [0.5, 0.3, -0.1])
    assert np.linalg.det(g.rot_a) == pytest.approx(1) and np.linalg.det(g.rot_b) == pytest.approx(1)
    np.testing.assert_allclose(g.rot_a.T @ np.diag(g.c) @ g.rot_b, f.T, atol=1e-15)


def test_canonical_bell():
    g = canonicalize_fano(pauli_decompose(np.outer(PHI_PLUS, PHI_PLUS)))
    np.testing.assert_allclose(np.abs(g.c), [1, 1, 1], atol=1e-12)


def test_canonical_twice_rejected():
    g = canonicalize_fano(pauli_decompose(np.eye(4) / 4))
    with pytest.raises(InvalidArgument):
        canonicalize_fano(g)


def test_canonical_degenerate_prefers_identity():
    g = canonicalize_fano(FanoForm(np.zeros(3), np.zeros(3), np.diag([0.2, 0.2, 0.2])))
    np.testing.assert_array_equal(g.rot_a, np.eye(3))
    np.testing.assert_array_equal(g.rot_b, np.eye(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_canonical_local_unitary_invariance(seed):
    r = np.random.default_rng(seed)
    rho = random_state(r)
    u = np.kron(random_unitary(r), random_unitary(r))
    c1 = canonicalize_fano(pauli_decompose(rho)).c
    c2 = canonicalize_fano(pauli_decompose(u @ rho @ u.conj().T)).c
    np.testing.assert_allclose(np.abs(c1), np.abs(c2), atol=1e-10)
    assert np.all(np.diff(np.abs(c1)) <= 1e-15)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_canonical_preserves_measures(seed):
    rho = random_state(np.random.default_rng(seed))
    g = canonicalize_fano(pauli_decompose(rho))
    rebuilt = FanoForm(g.s, g.r, g.T).density_matrix()
    assert eigvalsh(rebuilt)[0] > -1e-12
    assert abs(concurrence_mixed(rebuilt) - concurrence_mixed(rho)) < 1e-8
    assert abs(tmin_oracle(rebuilt) - tmin_oracle(rho)) < 1e-8
