"""Dense complex linear-algebra kernel.

Operators are plain numpy arrays of shape (dim, dim), dtype complex128,
with dim capped at 64: this is a desk-scale verification tool, not a
large-scale eigensolver.  Everything here is a pure function; the dense
eigendecomposition is the independent oracle against which all
Bethe-ansatz results are certified.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, OracleError

MAX_DIM = 64

# Backward-error bound for the eigendecomposition oracle:
# ||M v - lam v||_2 <= ORACLE_TOL * ||M||_F for every returned pair.
ORACLE_TOL = 1e-10


def as_operator(m) -> np.ndarray:
    """Coerce to a square complex128 matrix, validating shape and size."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not 1 <= a.shape[0] <= MAX_DIM:
        raise DimensionError(f"dimension {a.shape[0]} outside [1, {MAX_DIM}]")
    return a


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")


def commutator(a, b) -> np.ndarray:
    """[a, b] = ab - ba."""
    a = as_operator(a)
    b = as_operator(b)
    _same_dim(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    """{a, b} = ab + ba."""
    a = as_operator(a)
    b = as_operator(b)
    _same_dim(a, b)
    return a @ b + b @ a


def residual_norm(lhs, rhs) -> float:
    """Relative Frobenius residual ||lhs - rhs||_F / max(1, ||lhs||_F).

    The max(1, .) floor makes the value an absolute residual when lhs is
    near zero, so identities of the form expr == 0 are still meaningful.
    """
    lhs = as_operator(lhs)
    rhs = as_operator(rhs)
    _same_dim(lhs, rhs)
    return float(np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(lhs)))


def vector_residual(lhs, rhs) -> float:
    """Same scaling as residual_norm, for vectors."""
    lhs = np.asarray(lhs, dtype=np.complex128)
    rhs = np.asarray(rhs, dtype=np.complex128)
    if lhs.shape != rhs.shape:
        raise DimensionError(f"vector shape mismatch: {lhs.shape} vs {rhs.shape}")
    return float(np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(lhs)))


@dataclass(frozen=True)
class SpectrumResult:
    """Eigendecomposition sorted by (Re, Im) of the eigenvalues.

    eigenvectors holds unit-norm right eigenvectors as columns when
    requested, and residuals the per-pair backward errors ||M v - lam v||_2.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residuals: np.ndarray | None


def dense_spectrum(m, want_vectors: bool = False) -> SpectrumResult:
    """Full eigendecomposition of a general (non-Hermitian) complex matrix.

    Raises OracleError if the QR iteration fails to converge or any
    returned eigenpair misses the backward-error contract; results are
    never silently truncated.
    """
    a = as_operator(m)
    if not np.all(np.isfinite(a)):
        raise OracleError("matrix has non-finite entries; eigensolver input invalid")
    scale = float(np.linalg.norm(a))
    try:
        if want_vectors:
            vals, vecs = np.linalg.eig(a)
        else:
            vals = np.linalg.eigvals(a)
            vecs = None
    except np.linalg.LinAlgError as exc:
        raise OracleError(f"eigensolver did not converge: {exc}") from exc

    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    residuals = None
    if vecs is not None:
        vecs = vecs[:, order]
        vecs = vecs / np.linalg.norm(vecs, axis=0)
        residuals = np.linalg.norm(a @ vecs - vecs * vals, axis=0)
        worst = float(residuals.max())
        if worst > ORACLE_TOL * max(scale, np.finfo(float).tiny):
            raise OracleError(
                f"eigenpair backward error {worst:.3e} exceeds "
                f"{ORACLE_TOL:.1e} * ||M||_F = {ORACLE_TOL * scale:.3e}"
            )
    return SpectrumResult(eigenvalues=vals, eigenvectors=vecs, residuals=residuals)
