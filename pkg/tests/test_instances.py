# tests/test_instances.py
import math

import numpy as np
import pytest

import hamlim.services.instances as instances_module
from hamlim.core.config import Settings
from hamlim.core.errors import DimensionCapError, DomainError
from hamlim.services.graphdecomp import classify_graph, graph_of
from hamlim.services.instances import (
    BitString,
    SignString,
    circulant_from_string,
    circulant_spectrum,
    dense_parity_hamiltonian,
    hadamard_tensor,
    line_hamiltonian,
    parity_hamiltonian,
    parity_index,
    random_sign_string,
    saturating_witness,
    sign_string,
)
from hamlim.services.matcore import eigh, spectral_norm
from hamlim.services.norms import max_norm, mcn


def test_line_hamiltonian_weights():
    h = line_hamiltonian(3)

    assert h.n == 4
    assert h.data[0, 1] == pytest.approx(math.sqrt(3) / 3)
    assert h.data[1, 2] == pytest.approx(2 / 3)
    assert h.data[2, 3] == pytest.approx(math.sqrt(3) / 3)
    assert h.data[0, 2] == 0


@pytest.mark.parametrize("n", [1, 2, 3, 6, 11, 16, 25, 32])
def test_line_hamiltonian_spectrum_is_evenly_spaced(n):
    eigenvalues = eigh(line_hamiltonian(n)).eigenvalues

    assert np.allclose(eigenvalues, [-1 + 2 * k / n for k in range(n + 1)], atol=1e-10)


def test_parity_hamiltonian_joins_start_to_parity_end():
    s = BitString.parse("1101")
    classification = classify_graph(graph_of(parity_hamiltonian(s)))

    assert classification.is_forest
    assert len(classification.components) == 2
    start = next(c for c in classification.components if parity_index(0, 0) in c)
    assert parity_index(len(s), s.parity) in start
    assert parity_index(len(s), 1 - s.parity) not in start


def test_dense_parity_is_scaled_tensor_with_all_ones():
    s = BitString.parse("011")
    n = len(s)
    dense = dense_parity_hamiltonian(s)

    expected = np.kron(parity_hamiltonian(s).data, np.ones((n, n))) / n
    assert dense.n == 2 * n * (n + 1)
    assert np.array_equal(dense.data, expected)


def test_dense_parity_with_one_bit_is_the_line_pair():
    s = BitString.parse("1")

    assert dense_parity_hamiltonian(s) == parity_hamiltonian(s)


def test_dense_parity_respects_the_dimension_cap(monkeypatch):
    with pytest.raises(DimensionCapError):
        dense_parity_hamiltonian(BitString.parse("0101"), cap=10)

    monkeypatch.setattr(instances_module, "get_settings", lambda: Settings(DENSE_DIMENSION_CAP=11))
    with pytest.raises(DimensionCapError):
        dense_parity_hamiltonian(BitString.parse("01"))


def test_dense_parity_norm_scaling_at_sixteen_bits(rng):
    bits = BitString(tuple(int(b) for b in rng.integers(0, 2, size=16)))
    h = dense_parity_hamiltonian(bits)

    assert spectral_norm(h) == pytest.approx(1.0, abs=1e-9)
    assert 0.4 <= max_norm(h) * 16 <= 0.7
    assert 0.5 <= mcn(h) * 4 <= 1.0


def test_circulant_structure():
    s = SignString.parse("+-+")
    h = circulant_from_string(s)

    assert h.n == 7
    assert list(h.data[0].real) == [0, 1, -1, 1, 1, -1, 1]
    assert np.array_equal(h.data, h.data.T)
    assert np.array_equal(np.roll(h.data[0], 2), h.data[2])


def test_circulant_spectrum_matches_eigendecomposition(rng):
    for _ in range(20):
        s = random_sign_string(int(rng.integers(1, 61)), rng)
        closed = np.sort(circulant_spectrum(s).lambdas)
        numeric = eigh(circulant_from_string(s)).eigenvalues

        assert np.max(np.abs(closed - numeric)) <= 1e-9


def test_circulant_spectrum_symmetry_and_uniform_eigenvalue():
    s = sign_string([1, 1, -1, 1, -1, -1, 1])
    spectrum = circulant_spectrum(s)
    lambdas = spectrum.lambdas

    assert spectrum.n == 15
    assert spectrum.lambda0 == 2 * s.total
    for r in range(1, spectrum.n):
        assert lambdas[r] == lambdas[spectrum.n - r]


def test_hadamard_tensor_cap_and_values():
    r = hadamard_tensor(2)

    assert np.allclose(np.abs(r.data), 0.5)
    assert r.data[3, 3] == pytest.approx(0.5)
    with pytest.raises(DimensionCapError):
        hadamard_tensor(13)
    with pytest.raises(DomainError):
        hadamard_tensor(0)


def test_saturating_witness_kinds():
    assert np.array_equal(saturating_witness("identity", 3).data, np.eye(3))
    assert np.array_equal(saturating_witness("all_ones", 2).data, np.ones((2, 2)))
    assert saturating_witness("hadamard", 3).n == 8
    with pytest.raises(DomainError):
        saturating_witness("zeros", 3)


def test_string_parsing():
    assert BitString.parse("0,1,1").bits == (0, 1, 1)
    assert BitString.parse("0110").parity == 0
    assert SignString.parse("+-+").signs == (1, -1, 1)
    assert SignString.parse("1,-1,-1").total == -1
    assert str(SignString.parse("+-").negated()) == "-+"

    with pytest.raises(DomainError):
        BitString.parse("012")
    with pytest.raises(DomainError):
        SignString.parse("+0-")
    with pytest.raises(DomainError):
        SignString.parse("")
