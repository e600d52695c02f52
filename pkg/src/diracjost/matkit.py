"""Dense complex m-by-m matrix primitives used by every other module.

Thin contract-checking wrappers around numpy/LAPACK.  Conventions fixed
here once and used everywhere:

* the Frobenius norm is the default norm for validation sums; the
  spectral norm is available for diagnostics,
* invertibility floor: smallest singular value must exceed
  ``1e-12 * ||a||_F``,
* Hermiticity gate: ``||a - a*||_F <= 1e-10 * ||a||_F``,
* complex numbers serialize as two-element arrays ``[re, im]``,
  matrices as row-major arrays of rows.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NotHermitian, SingularMatrix

Matrix = np.ndarray

SINGULAR_RTOL = 1e-12
HERMITIAN_RTOL = 1e-10


def as_matrix(entries, dim: int | None = None) -> Matrix:
    """Coerce to a square complex128 array, checking shape and finiteness."""
    a = np.asarray(entries, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {a.shape[0]}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite")
    return a


def identity(m: int) -> Matrix:
    return np.eye(m, dtype=np.complex128)


def zero(m: int) -> Matrix:
    return np.zeros((m, m), dtype=np.complex128)


def _check_dims(a: Matrix, b: Matrix) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"operand shapes differ: {a.shape} vs {b.shape}")


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    _check_dims(a, b)
    return a + b


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    _check_dims(a, b)
    return a - b


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    _check_dims(a, b)
    return a @ b


def mat_scale(a: Matrix, c: complex) -> Matrix:
    return a * c


def fro_norm(a: Matrix) -> float:
    return float(np.linalg.norm(a))


def spectral_norm(a: Matrix) -> float:
    """Largest singular value, computed through the Hermitian solver on a*a."""
    w = np.linalg.eigvalsh(a.conj().T @ a)
    return float(np.sqrt(max(float(w[-1]), 0.0)))


def mat_norm(a: Matrix, kind: str = "frobenius") -> float:
    if kind == "frobenius":
        return fro_norm(a)
    if kind == "spectral":
        return spectral_norm(a)
    raise ValueError(f"unknown norm kind {kind!r}")


def mat_det(a: Matrix) -> complex:
    """Determinant via pivoted LU elimination."""
    return complex(np.linalg.det(a))


def mat_inverse(a: Matrix) -> Matrix:
    """Inverse, guarded by the singular-value floor ``1e-12 * ||a||_F``."""
    s = np.linalg.svd(a, compute_uv=False)
    if s[-1] <= SINGULAR_RTOL * fro_norm(a):
        raise SingularMatrix(
            f"smallest singular value {s[-1]:.3e} below floor "
            f"{SINGULAR_RTOL * fro_norm(a):.3e}"
        )
    return np.linalg.inv(a)


def _require_hermitian(a: Matrix) -> None:
    dev = fro_norm(a - a.conj().T)
    if dev > HERMITIAN_RTOL * max(fro_norm(a), 1e-300):
        raise NotHermitian(f"||a - a*||_F = {dev:.3e} exceeds gate")


def herm_eig(a: Matrix) -> tuple[np.ndarray, Matrix]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ascending real eigenvalues and a unitary matrix of column
    eigenvectors.  Output is deterministic for identical input; each
    eigenvector is phase-normalized so its largest-magnitude component
    is real and positive.
    """
    _require_hermitian(a)
    w, v = np.linalg.eigh(a)
    for k in range(v.shape[1]):
        idx = int(np.argmax(np.abs(v[:, k])))
        pivot = v[idx, k]
        mag = abs(pivot)
        if mag > 0.0:
            v[:, k] *= pivot.conjugate() / mag
    return w.astype(np.float64), v


def herm_eigvalues(a: Matrix) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (no eigenvectors).

    Same Hermiticity gate and determinism contract as :func:`herm_eig`;
    skips the eigenvector accumulation, which dominates the cost for
    the large finite-section solves.
    """
    _require_hermitian(a)
    return np.linalg.eigvalsh(a).astype(np.float64)


def complex_to_pair(c: complex) -> list[float]:
    return [float(c.real), float(c.imag)]


def pair_to_complex(pair) -> complex:
    if (
        not isinstance(pair, (list, tuple))
        or len(pair) != 2
        or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in pair)
    ):
        raise ValueError(f"complex entries must be [re, im] pairs, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def matrix_to_pairs(a: Matrix) -> list[list[list[float]]]:
    """Row-major nested lists with [re, im] entries."""
    return [[complex_to_pair(x) for x in row] for row in np.asarray(a)]


def matrix_from_pairs(rows, dim: int | None = None) -> Matrix:
    if not isinstance(rows, list) or not rows:
        raise ValueError("matrix must be a non-empty array of rows")
    out = []
    for row in rows:
        if not isinstance(row, list):
            raise ValueError("matrix rows must be arrays")
        out.append([pair_to_complex(x) for x in row])
    return as_matrix(out, dim=dim)
