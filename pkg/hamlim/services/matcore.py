# hamlim/services/matcore.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.linalg

from hamlim.core.config import get_settings
from hamlim.core.errors import (
    DimensionMismatchError,
    DomainError,
    EigensolverError,
    HermitianError,
)

logger = logging.getLogger(__name__)

# LAPACK drivers tried in order; each result must pass the Spectrum checks.
EIGH_DRIVERS: tuple[str, ...] = ("evr", "evd", "ev")

STATE_NORM_TOL = 1e-10


class HermitianMatrix:
    """
    Dense N x N complex Hermitian matrix, the carrier of every Hamiltonian.

    The constructor accepts any square array-like. Inputs whose largest
    asymmetry max|A - A^dagger| is within `tol` (default: settings
    HERMITIAN_ASYMMETRY_TOL) are replaced by (A + A^dagger)/2, which makes
    the stored entries exactly conjugate-symmetric with a real diagonal.
    Anything else is rejected with HermitianError.

    The stored array is read-only; operations always return new matrices.
    """

    __slots__ = ("_data",)

    def __init__(self, data: ArrayLike, *, tol: float | None = None) -> None:
        arr = np.array(data, dtype=np.complex128, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise HermitianError(f"expected a nonempty square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise HermitianError("matrix contains NaN or Inf entries")

        if tol is None:
            tol = get_settings().HERMITIAN_ASYMMETRY_TOL

        asymmetry = float(np.max(np.abs(arr - arr.conj().T)))
        if asymmetry > tol:
            raise HermitianError(
                f"matrix is not Hermitian: max asymmetry {asymmetry:.3e} exceeds {tol:.1e}"
            )
        if asymmetry > 0.0:
            logger.warning("symmetrizing input with asymmetry %.3e", asymmetry)
        arr = (arr + arr.conj().T) / 2.0

        arr.setflags(write=False)
        self._data = arr

    @property
    def data(self) -> np.ndarray:
        """Read-only complex128 view of the entries."""
        return self._data

    @property
    def n(self) -> int:
        return int(self._data.shape[0])

    def to_array(self) -> np.ndarray:
        """Writable copy of the entries."""
        return np.array(self._data, copy=True)

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        if dtype is None:
            return self.to_array()
        return self.to_array().astype(dtype)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._data, other._data))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"HermitianMatrix(n={self.n})"


ArrayLike = Union[np.ndarray, HermitianMatrix, list]


@dataclass(frozen=True)
class Spectrum:
    """
    Eigendecomposition H = V diag(eigenvalues) V^dagger.

    eigenvalues are ascending; eigenvectors are the columns of a unitary
    matrix. All evolution in the toolkit goes through this object.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def spectral_norm(self) -> float:
        return float(np.max(np.abs(self.eigenvalues)))

    def phases(self, t: float) -> np.ndarray:
        return np.exp(-1j * self.eigenvalues * t)

    def evolve(self, t: float, psi: np.ndarray) -> np.ndarray:
        """e^{-iHt} psi as V diag(e^{-i lambda t}) V^dagger psi."""
        v = self.eigenvectors
        return v @ (self.phases(t) * (v.conj().T @ psi))

    def unitary(self, t: float) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.phases(t)) @ v.conj().T

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian(data: ArrayLike, *, tol: float | None = None) -> HermitianMatrix:
    """
    Checked constructor; returns `data` unchanged if it already is a HermitianMatrix.
    """
    if isinstance(data, HermitianMatrix):
        return data
    return HermitianMatrix(data, tol=tol)


def _as_array(m: ArrayLike) -> np.ndarray:
    if isinstance(m, HermitianMatrix):
        return m.data
    return np.asarray(m, dtype=np.complex128)


def _spectrum_errors(a: np.ndarray, w: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    n = a.shape[0]
    residual = float(np.max(np.abs(a - (v * w) @ v.conj().T)))
    unitarity = float(np.max(np.abs(v.conj().T @ v - np.eye(n))))
    return residual, unitarity


def eigh(h: HermitianMatrix) -> Spectrum:
    """
    Eigendecomposition of a Hermitian matrix.

    Budget
    ------
    The LAPACK drivers in EIGH_DRIVERS are tried in order. A result is
    accepted only if

        max|H - V diag(w) V^dagger| <= EIGH_RESIDUAL_FACTOR * n * ||H||
        max|V^dagger V - I|         <= EIGH_UNITARITY_TOL

    Eigenvalues are returned ascending with a stable sort, so ties keep the
    order in which the driver produced the vectors.

    Raises
    ------
    EigensolverError
        If no driver in the budget meets both tolerances.
    """
    h = hermitian(h)
    settings = get_settings()
    a = h.data
    n = h.n

    failures: list[str] = []
    for driver in EIGH_DRIVERS:
        try:
            w, v = scipy.linalg.eigh(a, driver=driver, check_finite=False)
        except (np.linalg.LinAlgError, ValueError) as exc:
            failures.append(f"{driver}: {exc}")
            logger.warning("eigh driver %s failed: %s", driver, exc)
            continue

        order = np.argsort(w, kind="stable")
        w = np.ascontiguousarray(w[order])
        v = np.ascontiguousarray(v[:, order])

        norm = float(np.max(np.abs(w))) if n else 0.0
        bound = settings.EIGH_RESIDUAL_FACTOR * n * max(norm, settings.SLACK_FLOOR)
        residual, unitarity = _spectrum_errors(a, w, v)
        if residual <= bound and unitarity <= settings.EIGH_UNITARITY_TOL:
            w.setflags(write=False)
            v.setflags(write=False)
            return Spectrum(eigenvalues=w, eigenvectors=v)

        failures.append(f"{driver}: residual={residual:.3e} unitarity={unitarity:.3e}")
        logger.warning(
            "eigh driver %s missed tolerance (residual=%.3e, bound=%.3e, unitarity=%.3e)",
            driver,
            residual,
            bound,
            unitarity,
        )

    raise EigensolverError(
        f"no eigensolver driver converged for n={n}: " + "; ".join(failures)
    )


def spectral_norm(h: HermitianMatrix) -> float:
    return eigh(h).spectral_norm


def check_state(n: int, psi: np.ndarray | list) -> np.ndarray:
    vec = np.asarray(psi, dtype=np.complex128)
    if vec.ndim != 1 or vec.shape[0] != n:
        raise DimensionMismatchError(
            f"state of shape {vec.shape} does not match matrix dimension {n}"
        )
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > STATE_NORM_TOL:
        raise DomainError(f"state must be unit-norm, got norm {norm:.12f}")
    return vec


def state(amplitudes: np.ndarray | list) -> np.ndarray:
    """
    Checked unit-norm state vector.
    """
    vec = np.asarray(amplitudes, dtype=np.complex128)
    return check_state(vec.shape[0] if vec.ndim == 1 else -1, vec)


def basis_state(n: int, index: int) -> np.ndarray:
    if not 0 <= index < n:
        raise DimensionMismatchError(f"basis index {index} outside 0..{n - 1}")
    vec = np.zeros(n, dtype=np.complex128)
    vec[index] = 1.0
    return vec


def uniform_state(n: int) -> np.ndarray:
    return np.full(n, 1.0 / np.sqrt(n), dtype=np.complex128)


def evolve(h: HermitianMatrix, t: float, psi: np.ndarray | list) -> np.ndarray:
    """
    Exact time evolution e^{-iHt} psi via the eigendecomposition of H.

    Raises
    ------
    DimensionMismatchError
        If psi does not have dimension n.
    DomainError
        If psi is not unit-norm within 1e-10.
    """
    h = hermitian(h)
    vec = check_state(h.n, psi)
    if t == 0:
        return vec.copy()
    return eigh(h).evolve(t, vec)


def expm_unitary(h: HermitianMatrix, t: float) -> np.ndarray:
    """
    The full unitary e^{-iHt}; column j equals evolve(H, t, e_j).
    """
    h = hermitian(h)
    if t == 0:
        return np.eye(h.n, dtype=np.complex128)
    return eigh(h).unitary(t)


def kron(a: ArrayLike, b: ArrayLike) -> HermitianMatrix | np.ndarray:
    """
    Tensor product with (A (x) B)[i*nB + k, j*nB + l] = A[i, j] * B[k, l].

    Two HermitianMatrix operands give a HermitianMatrix; anything else
    gives a plain ndarray.
    """
    product = np.kron(_as_array(a), _as_array(b))
    if isinstance(a, HermitianMatrix) and isinstance(b, HermitianMatrix):
        return HermitianMatrix(product, tol=0.0)
    return product


def abs_entrywise(h: HermitianMatrix) -> HermitianMatrix:
    """abs(H)_jk = |H_jk|."""
    h = hermitian(h)
    return HermitianMatrix(np.abs(h.data), tol=0.0)


def random_hermitian(
    n: int,
    rng: np.random.Generator,
    *,
    real: bool = False,
    density: float = 1.0,
) -> HermitianMatrix:
    """
    Random Hermitian matrix with standard-normal entries.

    `density` < 1 zeroes each off-diagonal pair independently, which gives
    structurally sparse inputs for the sparse norm chain.
    """
    if n < 1:
        raise DomainError("n must be positive")
    if not 0.0 < density <= 1.0:
        raise DomainError("density must lie in (0, 1]")

    a = rng.standard_normal((n, n))
    if not real:
        a = a + 1j * rng.standard_normal((n, n))
    if density < 1.0:
        keep = rng.random((n, n)) < density
        keep = np.triu(keep, 1)
        keep = keep | keep.T | np.eye(n, dtype=bool)
        a = np.where(keep, a, 0.0)
    upper = np.triu(a, 1)
    diag = np.real(np.diag(a))
    return HermitianMatrix(upper + upper.conj().T + np.diag(diag), tol=0.0)
