# hamlim/services/instances.py
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.linalg

from hamlim.core.config import get_settings
from hamlim.core.errors import DimensionCapError, DomainError
from hamlim.services.matcore import HermitianMatrix, kron

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BitString:
    """
    0/1 string S_0 ... S_{N-1} that generates the parity Hamiltonians.
    """

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.bits:
            raise DomainError("bit string must be nonempty")
        if any(b not in (0, 1) for b in self.bits):
            raise DomainError("bit string entries must be 0 or 1")

    @classmethod
    def parse(cls, text: str) -> "BitString":
        """Accepts '0110' or '0,1,1,0'."""
        cleaned = text.replace(",", "").replace(" ", "")
        if not cleaned or any(ch not in "01" for ch in cleaned):
            raise DomainError(f"invalid bit string: {text!r}")
        return cls(tuple(int(ch) for ch in cleaned))

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    @property
    def parity(self) -> int:
        return sum(self.bits) % 2


@dataclass(frozen=True)
class SignString:
    """
    +-1 string s_1 ... s_M that generates a symmetric circulant.
    """

    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.signs:
            raise DomainError("sign string must be nonempty")
        if any(s not in (-1, 1) for s in self.signs):
            raise DomainError("sign string entries must be -1 or +1")

    @classmethod
    def parse(cls, text: str) -> "SignString":
        """Accepts '+-+', '++--' or '1,-1,1'."""
        cleaned = text.replace(" ", "")
        if cleaned and set(cleaned) <= {"+", "-"}:
            return cls(tuple(1 if ch == "+" else -1 for ch in cleaned))
        try:
            return cls(tuple(int(part) for part in cleaned.split(",")))
        except ValueError as exc:
            raise DomainError(f"invalid sign string: {text!r}") from exc

    def __len__(self) -> int:
        return len(self.signs)

    def __str__(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)

    @property
    def total(self) -> int:
        return int(sum(self.signs))

    def negated(self) -> "SignString":
        return SignString(tuple(-s for s in self.signs))


@dataclass(frozen=True)
class CirculantSpectrum:
    """
    Closed-form eigenvalues lambda_r = 2 sum_j s_j cos(2 pi j r / N), r = 0..N-1.
    """

    lambdas: np.ndarray

    @property
    def lambda0(self) -> float:
        return float(self.lambdas[0])

    @property
    def n(self) -> int:
        return int(self.lambdas.shape[0])

    @property
    def spectral_norm(self) -> float:
        return float(np.max(np.abs(self.lambdas)))


class WitnessKind(str, Enum):
    IDENTITY = "identity"
    ALL_ONES = "all_ones"
    HADAMARD = "hadamard"


def _edge_weights(n_steps: int) -> np.ndarray:
    i = np.arange(n_steps, dtype=float)
    return np.sqrt((n_steps - i) * (i + 1)) / n_steps


def line_hamiltonian(n: int) -> HermitianMatrix:
    """
    Path on N+1 vertices with <i|H1|i+1> = sqrt((N-i)(i+1))/N.

    This is a rescaled spin-N/2 x-rotation generator: its spectrum is
    -1, -1 + 2/N, ..., 1, and evolving |0> for time pi N / 2 reaches |N>.
    """
    if n < 1:
        raise DomainError("N must be at least 1")
    weights = _edge_weights(n)
    h = np.diag(weights, 1) + np.diag(weights, -1)
    return HermitianMatrix(h, tol=0.0)


def parity_index(i: int, j: int) -> int:
    """Basis index of |i, j>."""
    return 2 * i + j


def dense_index(i: int, j: int, k: int, n: int) -> int:
    """Basis index of |i, j, k> in the dense instance with N copies."""
    return (2 * i + j) * n + k


def parity_hamiltonian(s: BitString) -> HermitianMatrix:
    """
    Two disjoint lines on |i, j>, i = 0..N, j in {0, 1}, with
    <i, j|H2|i+1, j xor S_i> = sqrt((N-i)(i+1))/N.

    |0, 0> lies on the same line as |N, parity(S)>.
    """
    n = len(s)
    weights = _edge_weights(n)
    h = np.zeros((2 * (n + 1), 2 * (n + 1)), dtype=np.complex128)
    for i, bit in enumerate(s.bits):
        for j in (0, 1):
            a = parity_index(i, j)
            b = parity_index(i + 1, j ^ bit)
            h[a, b] = weights[i]
            h[b, a] = weights[i]
    return HermitianMatrix(h, tol=0.0)


def all_ones(n: int) -> HermitianMatrix:
    if n < 1:
        raise DomainError("size must be positive")
    return HermitianMatrix(np.ones((n, n)), tol=0.0)


def identity(n: int) -> HermitianMatrix:
    if n < 1:
        raise DomainError("size must be positive")
    return HermitianMatrix(np.eye(n), tol=0.0)


def dense_parity_hamiltonian(s: BitString, *, cap: int | None = None) -> HermitianMatrix:
    """
    Dense blow-up H = H2 (x) J / N on |i, j, k>, k = 0..N-1.

    Every vertex of H2 gets N copies, each joined to all N copies of its
    neighbours with weight sqrt((N-i)(i+1))/N^2. N = 1 degenerates to H2.

    Raises
    ------
    DimensionCapError
        If 2N(N+1) exceeds the cap (default: settings DENSE_DIMENSION_CAP).
    """
    n = len(s)
    if cap is None:
        cap = get_settings().DENSE_DIMENSION_CAP
    dim = 2 * n * (n + 1)
    if dim > cap:
        raise DimensionCapError(f"dense parity dimension {dim} exceeds cap {cap}")

    blown_up = kron(parity_hamiltonian(s), all_ones(n))
    logger.debug("dense parity instance N=%d dim=%d", n, dim)
    return HermitianMatrix(blown_up.data / n, tol=0.0)


def _first_row(s: SignString) -> np.ndarray:
    signs = np.array(s.signs, dtype=float)
    return np.concatenate(([0.0], signs, signs[::-1]))


def circulant_from_string(s: SignString) -> HermitianMatrix:
    """
    Symmetric circulant of size N = 2M+1 with first row
    (0, s_1, ..., s_M, s_M, ..., s_1); row r is row 0 rotated right by r.
    """
    row = _first_row(s)
    # the first row equals the first column because the row is palindromic
    # after its leading zero
    return HermitianMatrix(scipy.linalg.circulant(row), tol=0.0)


@lru_cache(maxsize=8)
def cosine_table(m: int) -> np.ndarray:
    """
    Read-only (M+1) x M table 2 cos(2 pi j r / N), r = 0..M, j = 1..M.

    Row r dotted with the signs gives lambda_r.
    """
    n = 2 * m + 1
    j = np.arange(1, m + 1)
    r = np.arange(m + 1)
    # reduce j*r mod N before scaling so the cosine argument stays in [0, 2pi)
    angles = 2.0 * math.pi * (np.outer(r, j) % n) / n
    table = 2.0 * np.cos(angles)
    table.setflags(write=False)
    return table


def circulant_spectrum(s: SignString) -> CirculantSpectrum:
    """
    Eigenvalues of the symmetric circulant in closed form,
    lambda_r = 2 sum_{j=1}^M s_j cos(2 pi j r / N), indexed r = 0..N-1.
    """
    signs = np.array(s.signs, dtype=float)
    half = cosine_table(len(s)) @ signs
    half[0] = 2.0 * float(np.sum(signs))

    # lambda_r = lambda_{N-r}
    lambdas = np.concatenate((half, half[:0:-1]))
    lambdas.setflags(write=False)
    return CirculantSpectrum(lambdas=lambdas)


_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


def hadamard_tensor(n: int) -> HermitianMatrix:
    """
    R^{(x)n} with R = [[1, 1], [1, -1]] / sqrt(2).

    Spectral norm 1 while ||abs(R^{(x)n})|| = 2^{n/2}.
    """
    max_qubits = get_settings().HADAMARD_MAX_QUBITS
    if n < 1:
        raise DomainError("n must be at least 1")
    if n > max_qubits:
        raise DimensionCapError(f"R^(x){n} exceeds the cap of {max_qubits} factors")

    result = _HADAMARD
    for _ in range(n - 1):
        result = np.kron(result, _HADAMARD)
    return HermitianMatrix(result, tol=0.0)


def saturating_witness(kind: WitnessKind | str, size: int) -> HermitianMatrix:
    """
    Matrices that make the norm inequalities tight: the identity (first four
    links), the all-ones matrix (last two links) and R^{(x)n} (the
    abs-spectral vs spectral gap). For `hadamard`, `size` is the number n of
    tensor factors.
    """
    try:
        kind = WitnessKind(kind)
    except ValueError as exc:
        raise DomainError(f"unknown witness kind: {kind!r}") from exc

    if kind is WitnessKind.IDENTITY:
        return identity(size)
    if kind is WitnessKind.ALL_ONES:
        return all_ones(size)
    return hadamard_tensor(size)


def random_bitstring(n: int, rng: np.random.Generator) -> BitString:
    if n < 1:
        raise DomainError("N must be at least 1")
    return BitString(tuple(int(b) for b in rng.integers(0, 2, size=n)))


def random_sign_string(m: int, rng: np.random.Generator) -> SignString:
    if m < 1:
        raise DomainError("M must be at least 1")
    return SignString(tuple(int(x) for x in 2 * rng.integers(0, 2, size=m) - 1))


def bitstring(bits: Sequence[int]) -> BitString:
    return BitString(tuple(int(b) for b in bits))


def sign_string(signs: Sequence[int]) -> SignString:
    return SignString(tuple(int(s) for s in signs))
