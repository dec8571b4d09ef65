"""Symmetry classes of tensors and induced operators.

``P(s)`` permutes tensor slots, ``P(s)(x_1 (x) ... (x) x_m) =
x_{s^-1(1)} (x) ... (x) x_{s^-1(m)}``, which makes ``s -> P(s)`` a
homomorphism under :func:`~tensorword.symgroup.compose`. The symmetrizer
``T = (chi(e)/|G|) sum_s chi(s) P(s)`` projects onto the symmetry class;
the induced operator ``K(A)`` is the compression of ``kron_power(A, m)``
to an orthonormal basis of that range.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRankError, DimensionError
from .gmf import gmf_evaluate
from .matcore import _check_size, _frozen, as_matrix, kron_all, kron_power
from .symgroup import Character, Permutation, PermutationGroup, inverse

RANK_TOL = 1e-9
RANK_GAP = 1e3


def _multi_indices(n: int, m: int) -> np.ndarray:
    """``(n**m, m)`` digits of each flat index, most significant slot first."""
    return np.stack(np.unravel_index(np.arange(n**m), (n,) * m), axis=1)


def permutation_operator(s: Permutation, n: int, max_dim: int | None = None) -> np.ndarray:
    m = s.degree
    _check_size(n**m, n**m, max_dim)
    src = _multi_indices(n, m)
    # output slot j holds input slot s^-1(j)
    dst = src[:, list(inverse(s).image)]
    rows = np.ravel_multi_index(tuple(dst.T), (n,) * m)
    p = np.zeros((n**m, n**m), dtype=np.complex128)
    p[rows, np.arange(n**m)] = 1
    return _frozen(p)


def symmetrizer(group: PermutationGroup, chi: Character, n: int, max_dim: int | None = None) -> np.ndarray:
    if chi.group.elements != group.elements:
        raise DimensionError("character is defined on a different group")
    m = group.degree
    _check_size(n**m, n**m, max_dim)
    t = np.zeros((n**m, n**m), dtype=np.complex128)
    for s, c in zip(group, chi.values):
        if c != 0:
            t += c * permutation_operator(s, n, max_dim)
    return _frozen(t * (chi.degree / group.order))


@dataclass(frozen=True, eq=False)
class SymmetryClass:
    n: int
    m: int
    basis: np.ndarray  # (n**m, d), orthonormal columns
    singular_values: tuple
    group: PermutationGroup | None = None
    character: Character | None = None

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def symmetry_class_basis(t, rank_tol: float = RANK_TOL, gap: float = RANK_GAP,
                         n: int | None = None, m: int = 1) -> SymmetryClass:
    """Orthonormal basis of ``range(t)`` from an SVD.

    Singular values below ``rank_tol * s_max`` are dropped; the last kept one
    must exceed the first dropped one by ``gap``, otherwise the rank is
    ambiguous and :class:`DegenerateRankError` is raised. Pass ``n`` and
    ``m`` when ``t`` acts on ``m`` tensor slots of C^n.
    """
    t = as_matrix(t)
    if t.shape[0] != t.shape[1]:
        raise DimensionError(f"symmetrizer must be square, got {t.shape}")
    n = t.shape[0] if n is None else n
    if n**m != t.shape[0]:
        raise DimensionError(f"{t.shape[0]}x{t.shape[0]} matrix does not act on C^{n} ^(x){m}")
    u, sv, _ = np.linalg.svd(t)
    d = 0
    if sv[0] > 0:
        d = int(np.count_nonzero(sv > rank_tol * sv[0]))
        if d < sv.size and sv[d] > 0 and sv[d - 1] / sv[d] <= gap:
            raise DegenerateRankError(
                f"no singular value gap at rank {d}: {sv[d - 1]:.3e} vs {sv[d]:.3e}", sv)
    basis = _frozen(np.ascontiguousarray(u[:, :d]))
    return SymmetryClass(n, m, basis, tuple(float(x) for x in sv))


def symmetry_class(group: PermutationGroup, chi: Character, n: int, max_dim: int | None = None,
                   rank_tol: float = RANK_TOL) -> SymmetryClass:
    t = symmetrizer(group, chi, n, max_dim)
    v = symmetry_class_basis(t, rank_tol, n=n, m=group.degree)
    return SymmetryClass(n, group.degree, v.basis, v.singular_values, group, chi)


def induced_operator(a, v: SymmetryClass, max_dim: int | None = None) -> np.ndarray:
    """``basis^H @ kron_power(A, m) @ basis``."""
    a = as_matrix(a)
    if a.shape != (v.n, v.n):
        raise DimensionError(f"operator of shape {a.shape} on a class over C^{v.n}")
    if v.dim == 0:
        raise DimensionError("symmetry class is zero-dimensional")
    big = kron_power(a, v.m, max_dim)
    return _frozen(v.basis.conj().T @ big @ v.basis)


def star_tensor(vectors, group: PermutationGroup, chi: Character, max_dim: int | None = None) -> np.ndarray:
    """``T(G, chi) (x_1 (x) ... (x) x_m)``, unnormalized."""
    vecs = [np.asarray(x, dtype=np.complex128).reshape(-1, 1) for x in vectors]
    if len(vecs) != group.degree:
        raise DimensionError(f"need {group.degree} vectors, got {len(vecs)}")
    n = vecs[0].shape[0]
    if any(x.shape[0] != n for x in vecs):
        raise DimensionError("vectors must share one length")
    decomposable = kron_all(vecs, max_dim=max_dim)[:, 0]
    return _frozen(symmetrizer(group, chi, n, max_dim) @ decomposable)


@dataclass(frozen=True)
class BridgingReport:
    lhs: complex
    rhs: complex
    residual: float  # |lhs - rhs| / max(1, |lhs|)
    class_dim: int
    degenerate: bool

    def ok(self, tol: float = 1e-8) -> bool:
        return not self.degenerate and self.residual <= tol


def bridging_identity_check(mat, group: PermutationGroup, chi: Character,
                            max_dim: int | None = None) -> BridgingReport:
    """Compare ``d(M^T)`` with ``(|G| / chi(e)) <kron_power(M, m) e*, e*>``.

    ``e*`` is the unnormalized star tensor of the standard basis of C^m and
    ``<u, v> = sum u_i conj(v_i)``.
    """
    mat = as_matrix(mat)
    m = group.degree
    if mat.shape != (m, m):
        raise DimensionError(f"need an {m}x{m} matrix for a degree-{m} group, got {mat.shape}")
    lhs = gmf_evaluate(mat.T, group, chi)
    e_star = star_tensor(list(np.eye(m)), group, chi, max_dim)
    if not np.any(e_star):
        return BridgingReport(lhs, 0j, abs(lhs) / max(1.0, abs(lhs)), 0, True)
    inner = np.vdot(e_star, kron_power(mat, m, max_dim) @ e_star)
    rhs = complex(group.order / chi.degree * inner)
    residual = abs(lhs - rhs) / max(1.0, abs(lhs))
    dim = symmetry_class(group, chi, m, max_dim).dim
    return BridgingReport(lhs, rhs, residual, dim, dim == 0)
