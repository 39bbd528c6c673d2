# tests/test_matcore.py
import logging
import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings as hypothesis_settings, strategies as st

import hamlim.services.matcore as matcore_module
from hamlim.core.config import Settings
from hamlim.core.errors import (
    DimensionMismatchError,
    DomainError,
    EigensolverError,
    HermitianError,
)
from hamlim.services.matcore import (
    HermitianMatrix,
    abs_entrywise,
    basis_state,
    eigh,
    evolve,
    expm_unitary,
    hermitian,
    kron,
    random_hermitian,
    spectral_norm,
    state,
    uniform_state,
)

PAULI_X = [[0, 1], [1, 0]]


def test_hermitian_rejects_asymmetric_input():
    with pytest.raises(HermitianError):
        hermitian([[0, 1], [0, 0]])


def test_hermitian_rejects_non_square_and_non_finite():
    with pytest.raises(HermitianError):
        hermitian([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(HermitianError):
        hermitian([[float("nan"), 0], [0, 1]])


def test_hermitian_symmetrizes_tiny_asymmetry_exactly():
    h = hermitian([[1.0, 1.0 + 1e-14], [1.0, 2.0 + 1e-15j]])

    assert np.array_equal(h.data, h.data.conj().T)
    assert np.all(np.imag(np.diag(h.data)) == 0)


def test_hermitian_tolerance_comes_from_settings(monkeypatch):
    monkeypatch.setattr(
        matcore_module,
        "get_settings",
        lambda: Settings(HERMITIAN_ASYMMETRY_TOL=1e-3),
    )

    h = hermitian([[0.0, 1.0], [1.0005, 0.0]])

    assert h.data[0, 1] == pytest.approx(1.00025)


def test_hermitian_matrix_is_read_only():
    h = hermitian(PAULI_X)

    with pytest.raises(ValueError):
        h.data[0, 0] = 5.0


def test_eigh_identity_and_pauli_x():
    ones = eigh(np.eye(3))
    assert np.allclose(ones.eigenvalues, [1.0, 1.0, 1.0], atol=1e-14)

    flip = eigh(hermitian(PAULI_X))
    assert np.allclose(flip.eigenvalues, [-1.0, 1.0], atol=1e-14)


def test_eigh_residual_and_unitarity_on_random_input(rng):
    h = random_hermitian(16, rng)
    spectrum = eigh(h)
    v = spectrum.eigenvectors

    assert np.all(np.diff(spectrum.eigenvalues) >= 0)
    assert np.max(np.abs(h.data - spectrum.reconstruct())) <= 1e-10 * 16 * spectrum.spectral_norm
    assert np.max(np.abs(v.conj().T @ v - np.eye(16))) <= 1e-10


def test_eigh_falls_back_to_next_driver(monkeypatch, rng):
    original = scipy.linalg.eigh
    calls = []

    def flaky_eigh(a, driver=None, check_finite=True):
        calls.append(driver)
        if driver == "evr":
            raise np.linalg.LinAlgError("did not converge")
        return original(a, driver=driver, check_finite=check_finite)

    monkeypatch.setattr(scipy.linalg, "eigh", flaky_eigh)

    spectrum = eigh(random_hermitian(6, rng))

    assert calls == ["evr", "evd"]
    assert spectrum.n == 6


def test_eigh_raises_when_budget_is_exhausted(monkeypatch):
    def broken_eigh(a, driver=None, check_finite=True):
        raise np.linalg.LinAlgError("did not converge")

    monkeypatch.setattr(scipy.linalg, "eigh", broken_eigh)

    with pytest.raises(EigensolverError):
        eigh(hermitian(PAULI_X))


def test_evolve_at_zero_time_returns_the_input():
    psi = uniform_state(4)
    out = evolve(random_hermitian(4, np.random.default_rng(1)), 0.0, psi)

    assert np.array_equal(out, psi)


def test_evolve_pauli_x_flips_the_qubit():
    out = evolve(hermitian(PAULI_X), math.pi / 2, basis_state(2, 0))

    assert abs(out[1]) == pytest.approx(1.0, abs=1e-12)
    assert out[1] == pytest.approx(-1j, abs=1e-12)


def test_evolve_composes_in_time(rng):
    h = random_hermitian(8, rng)
    psi = uniform_state(8)

    once = evolve(h, 0.7, psi)
    twice = evolve(h, 0.4, evolve(h, 0.3, psi))

    assert np.max(np.abs(once - twice)) <= 1e-10
    assert np.linalg.norm(once) == pytest.approx(1.0, abs=1e-12)


def test_evolve_validates_the_state():
    h = hermitian(PAULI_X)

    with pytest.raises(DimensionMismatchError):
        evolve(h, 1.0, uniform_state(3))
    with pytest.raises(DomainError):
        evolve(h, 1.0, [1.0, 1.0])


def test_state_accepts_unit_vectors_only():
    assert state([0.6, 0.8j]).shape == (2,)
    with pytest.raises(DomainError):
        state([0.5, 0.5])


def test_expm_unitary_matches_closed_form_and_evolve(rng):
    diag = hermitian(np.diag([1.0, 2.0]))
    u = expm_unitary(diag, math.pi)
    assert np.allclose(u, np.diag([-1.0, 1.0]), atol=1e-12)

    h = random_hermitian(5, rng)
    full = expm_unitary(h, 1.3)
    for j in range(5):
        assert np.max(np.abs(full[:, j] - evolve(h, 1.3, basis_state(5, j)))) <= 1e-12

    assert np.array_equal(expm_unitary(h, 0.0), np.eye(5))


def test_kron_index_convention_and_norms(rng):
    a = random_hermitian(2, rng)
    b = random_hermitian(3, rng)
    product = kron(a, b)

    assert isinstance(product, HermitianMatrix)
    assert product.data[1 * 3 + 2, 0 * 3 + 1] == a.data[1, 0] * b.data[2, 1]
    assert spectral_norm(product) == pytest.approx(spectral_norm(a) * spectral_norm(b), rel=1e-10)
    assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))


def test_abs_entrywise_is_hermitian_and_nonnegative(rng):
    h = random_hermitian(6, rng)
    absolute = abs_entrywise(h)

    assert np.all(absolute.data.real >= 0)
    assert np.all(absolute.data.imag == 0)
    assert np.array_equal(absolute.data, np.abs(h.data))


def test_random_hermitian_respects_density(rng):
    sparse = random_hermitian(40, rng, real=True, density=0.1)
    off_diagonal = sparse.data - np.diag(np.diag(sparse.data))

    assert np.all(sparse.data.imag == 0)
    assert np.count_nonzero(off_diagonal) < 40 * 39 * 0.3

    with pytest.raises(DomainError):
        random_hermitian(4, rng, density=0.0)


def test_symmetrization_is_logged_as_a_warning(caplog):
    with caplog.at_level(logging.DEBUG, logger="hamlim.services.matcore"):
        hermitian(PAULI_X)
    assert not [r for r in caplog.records if r.levelno >= logging.WARNING]

    with caplog.at_level(logging.WARNING, logger="hamlim.services.matcore"):
        hermitian([[1.0, 1.0 + 1e-14], [1.0, 2.0]])
    warnings = [r for r in caplog.records if r.levelno == logging.WARNING]

    assert len(warnings) == 1
    assert "symmetrizing" in warnings[0].getMessage()


@hypothesis_settings(max_examples=200, derandomize=True, deadline=None)
@given(
    n=st.integers(min_value=2, max_value=64),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    real=st.booleans(),
)
def test_eigh_reconstructs_random_hermitian_matrices(n, seed, real):
    h = random_hermitian(n, np.random.default_rng(seed), real=real)
    spectrum = eigh(h)
    v = spectrum.eigenvectors

    assert np.all(np.diff(spectrum.eigenvalues) >= 0)
    assert np.max(np.abs(h.data - spectrum.reconstruct())) <= 1e-10 * n * spectrum.spectral_norm
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-10


@hypothesis_settings(max_examples=100, derandomize=True, deadline=None)
@given(
    n=st.integers(min_value=2, max_value=32),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    t=st.floats(min_value=-1e3, max_value=1e3, allow_nan=False),
    s=st.floats(min_value=-1e3, max_value=1e3, allow_nan=False),
)
def test_evolution_is_unitary_and_composes(n, seed, t, s):
    generator = np.random.default_rng(seed)
    h = random_hermitian(n, generator)
    psi = generator.standard_normal(n) + 1j * generator.standard_normal(n)
    psi = psi / np.linalg.norm(psi)

    u = expm_unitary(h, t)
    assert np.max(np.abs(u.conj().T @ u - np.eye(n))) <= 1e-9

    out = evolve(h, t, psi)
    assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-9)
    assert np.max(np.abs(evolve(h, s, out) - evolve(h, s + t, psi))) <= 1e-8


@hypothesis_settings(max_examples=100, derandomize=True, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=32),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    density=st.sampled_from([1.0, 0.3]),
)
def test_abs_entrywise_is_idempotent(n, seed, density):
    h = random_hermitian(n, np.random.default_rng(seed), density=density)
    absolute = abs_entrywise(h)

    assert np.array_equal(abs_entrywise(absolute).data, absolute.data)
