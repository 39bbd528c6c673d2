# hamlim/core/errors.py
from __future__ import annotations


class HamlimError(Exception):
    """
    Base class for every error raised deliberately by the toolkit.
    """


class HermitianError(HamlimError, ValueError):
    """
    Raised when an input cannot be accepted as a Hermitian matrix
    (non-square, non-finite, or asymmetric beyond the configured tolerance).
    """


class DimensionMismatchError(HamlimError, ValueError):
    """
    Raised when a state and a matrix (or two operands) disagree in dimension.
    """


class DimensionCapError(HamlimError, ValueError):
    """
    Raised when a generator would exceed its configured dimension cap.
    """


class EigensolverError(HamlimError, RuntimeError):
    """
    Raised when no eigensolver driver in the budget reaches the residual
    and unitarity tolerances.
    """


class DomainError(HamlimError, ValueError):
    """
    Raised for numeric arguments outside their mathematical domain.
    """


class PromiseViolationError(DomainError):
    """
    Raised when a sign string does not satisfy |sum(s)| = B, or when (M, B)
    cannot describe a nonempty promise set.
    """


class NotAForestError(HamlimError, ValueError):
    """
    Raised when a forest-only algorithm receives a graph with a cycle.

    The offending cycle is kept on `cycle` as a list of (u, v) edges.
    """

    def __init__(self, message: str, cycle: list[tuple[int, int]] | None = None) -> None:
        super().__init__(message)
        self.cycle = cycle or []


class DiagonalError(HamlimError, ValueError):
    """
    Raised when a matrix diagonal violates an algorithm's precondition.
    """


class DecompositionError(HamlimError, ValueError):
    """
    Raised for invalid star decompositions (overlapping or missing edges,
    zero-weight stars).
    """


class MatrixFormatError(HamlimError, ValueError):
    """
    Raised when a densecomplex-v1 document is malformed.
    """
