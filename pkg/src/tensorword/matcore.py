"""Dense complex matrix kernels.

Matrices are plain ``numpy`` complex128 arrays. Every public function
returns a fresh read-only array, so results can be shared freely between
trials. Kronecker products use the lexicographic index convention with the
left factor most significant: row ``(i_A, i_B)`` of ``kron(A, B)`` is
``i_A * rows(B) + i_B``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce
from pathlib import Path

import numpy as np

from .config import HERM_TOL, PSD_TOL, resolve_max_dim
from .errors import DimensionError, NotHermitianError, NumericalFailure, SizeLimitError


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex array (a copy, read-only)."""
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or 0 in arr.shape:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    return _frozen(arr)


def hermitian_defect(a: np.ndarray) -> float:
    """max |a_ij - conj(a_ji)| relative to max(1, max |a_ij|)."""
    scale = max(1.0, float(np.max(np.abs(a))))
    return float(np.max(np.abs(a - a.conj().T))) / scale


def as_hermitian(a, tol: float = HERM_TOL) -> np.ndarray:
    """Validate that ``a`` is square and Hermitian within ``tol * scale``."""
    arr = as_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"Hermitian matrix must be square, got {arr.shape}")
    defect = hermitian_defect(arr)
    if defect > tol:
        raise NotHermitianError(f"matrix is not Hermitian (relative defect {defect:.3e} > {tol:.1e})")
    return arr


def hermitize(a: np.ndarray) -> np.ndarray:
    return _frozen((a + a.conj().T) / 2)


def _check_size(rows: int, cols: int, max_dim: int | None) -> None:
    limit = resolve_max_dim(max_dim)
    if max(rows, cols) > limit:
        raise SizeLimitError(f"result of size {rows}x{cols} exceeds max_dim={limit}")


def kron(a, b, max_dim: int | None = None) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError("kron expects 2-D matrices")
    _check_size(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1], max_dim)
    # np.kron already uses the left-factor-most-significant convention
    return _frozen(np.kron(a, b))


def kron_all(factors, max_dim: int | None = None) -> np.ndarray:
    """Left-associated Kronecker product of a non-empty sequence."""
    factors = [np.asarray(f, dtype=np.complex128) for f in factors]
    if not factors:
        raise DimensionError("kron_all needs at least one factor")
    rows = int(np.prod([f.shape[0] for f in factors], dtype=object))
    cols = int(np.prod([f.shape[1] for f in factors], dtype=object))
    _check_size(rows, cols, max_dim)
    out = reduce(np.kron, factors)
    return _frozen(np.array(out, dtype=np.complex128))


def kron_power(a, m: int, max_dim: int | None = None) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"kron_power expects a square matrix, got shape {a.shape}")
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    return kron_all([a] * m, max_dim=max_dim)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a Hermitian matrix, ascending."""

    eigenvalues: tuple
    source_dim: int

    @property
    def min(self) -> float:
        return self.eigenvalues[0]

    @property
    def max(self) -> float:
        return self.eigenvalues[-1]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.eigenvalues, dtype=dtype)

    def __len__(self):
        return len(self.eigenvalues)


def _eigh(a: np.ndarray, vectors: bool):
    try:
        return np.linalg.eigh(a) if vectors else np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"Hermitian eigensolver did not converge: {exc}") from exc


def hermitian_eigenvalues(a, tol: float = HERM_TOL) -> Spectrum:
    a = as_hermitian(a, tol)
    w = _eigh(a, vectors=False)
    return Spectrum(tuple(float(x) for x in np.sort(w)), a.shape[0])


@dataclass(frozen=True)
class PSDCheck:
    """Outcome of :func:`is_psd`. Truthy iff the matrix passed.

    ``direction`` is a unit eigenvector for ``lambda_min``, populated only
    on failure.
    """

    ok: bool
    lambda_min: float
    lambda_max: float
    threshold: float
    direction: np.ndarray | None = None

    def __bool__(self):
        return self.ok


def is_psd(a, tol: float = PSD_TOL, herm_tol: float = HERM_TOL) -> PSDCheck:
    """PSD iff lambda_min >= -tol * max(1, |lambda_max|)."""
    a = as_hermitian(a, herm_tol)
    w, v = _eigh(a, vectors=True)
    lmin, lmax = float(w[0]), float(w[-1])
    threshold = -tol * max(1.0, abs(lmax))
    ok = lmin >= threshold
    direction = None if ok else _frozen(v[:, 0].copy())
    return PSDCheck(ok, lmin, lmax, threshold, direction)


def random_psd(n: int, rank: int, seed: int) -> np.ndarray:
    """``B @ B^H`` with ``B`` an ``n x rank`` standard complex Gaussian matrix."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0 <= rank <= n:
        raise ValueError(f"rank must lie in [0, {n}], got {rank}")
    rng = np.random.default_rng(seed)
    b = (rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))) / np.sqrt(2)
    return hermitize(b @ b.conj().T)


def random_complex(shape, rng: np.random.Generator) -> np.ndarray:
    return _frozen((rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2))


# -- JSON ---------------------------------------------------------------

def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in a],
    }


def matrix_from_json(obj, hermitian: bool = False) -> np.ndarray:
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionError(f"malformed matrix JSON: {exc}") from exc
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise DimensionError(f"entries do not match declared shape {rows}x{cols}")
    try:
        arr = np.array([[complex(re, im) for re, im in row] for row in entries], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise DimensionError(f"entries must be [re, im] pairs: {exc}") from exc
    arr = arr.reshape(rows, cols)
    return as_hermitian(arr) if hermitian else as_matrix(arr)


def load_matrix(path, hermitian: bool = False) -> np.ndarray:
    with open(Path(path)) as fh:
        return matrix_from_json(json.load(fh), hermitian=hermitian)


def save_matrix(a, path) -> None:
    with open(Path(path), "w") as fh:
        json.dump(matrix_to_json(a), fh)
