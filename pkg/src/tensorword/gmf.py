"""Generalized matrix functions and superadditivity gaps.

``d(X) = sum_{s in G} chi(s) * prod_t X[t, s(t)]`` for a permutation group
``G`` of degree m and a character ``chi``. The naive group sum is the
reference; ``det`` and ``per`` also have fast paths (pivoted LU and Ryser's
formula with Gray-code subset order).
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .config import ORDER_CAP, PSD_TOL
from .errors import DimensionError, NotPSDError, SpecError
from .matcore import as_matrix, is_psd
from .symgroup import (Character, PermutationGroup, builtin_character, builtin_group,
                       parse_character, parse_group, validate_character)


def _square(x) -> np.ndarray:
    x = as_matrix(x)
    if x.shape[0] != x.shape[1]:
        raise DimensionError(f"expected a square matrix, got {x.shape}")
    return x


def gmf_evaluate(x, group: PermutationGroup, chi: Character) -> complex:
    """Naive group sum; cost ``|G| * m``."""
    x = _square(x)
    m = x.shape[0]
    if m != group.degree:
        raise DimensionError(f"{m}x{m} matrix for a group of degree {group.degree}")
    images = group.images()
    terms = np.prod(x[np.arange(m), images], axis=1)
    return complex(np.dot(chi.values, terms))


def term_scale(x, group: PermutationGroup) -> float:
    """max(1, sum_s prod_t |X[t, s(t)]|): magnitude of the terms before cancellation."""
    x = np.abs(_square(x))
    m = x.shape[0]
    return max(1.0, float(np.sum(np.prod(x[np.arange(m), group.images()], axis=1))))


def det(x) -> complex:
    # LAPACK getrf: LU with partial pivoting
    return complex(np.linalg.det(_square(x)))


def per(x) -> complex:
    """Ryser's formula, visiting column subsets in Gray-code order.

    per(X) = (-1)^m sum_{S} (-1)^{|S|} prod_i sum_{j in S} X[i, j]
    """
    x = _square(x)
    m = x.shape[0]
    row_sums = np.zeros(m, dtype=np.complex128)
    total = 0j
    size = 0
    gray = 0
    for step in range(1, 2**m):
        # bit flipped between consecutive Gray codes
        j = (step & -step).bit_length() - 1
        gray ^= 1 << j
        if gray >> j & 1:
            row_sums += x[:, j]
            size += 1
        else:
            row_sums -= x[:, j]
            size -= 1
        prod = np.prod(row_sums)
        total += -prod if size % 2 else prod
    return complex(total if m % 2 == 0 else -total)


@dataclass(frozen=True)
class MatrixFunctional:
    """``det``, ``per`` or ``gmf`` over a fixed (group, character)."""

    kind: str
    group: PermutationGroup | None = None
    character: Character | None = None

    def __post_init__(self):
        if self.kind not in ("det", "per", "gmf"):
            raise SpecError(f"unknown functional kind {self.kind!r}")
        if self.kind == "gmf" and (self.group is None or self.character is None):
            raise SpecError("gmf needs a group and a character")

    @property
    def arity(self) -> int | None:
        return self.group.degree if self.kind == "gmf" else None

    @property
    def irreducible(self) -> bool:
        return self.kind != "gmf" or self.character.irreducible

    def __call__(self, x) -> complex:
        if self.kind == "det":
            return det(x)
        if self.kind == "per":
            return per(x)
        return gmf_evaluate(x, self.group, self.character)

    def naive(self, x) -> complex:
        """Reference group sum, also for ``det``/``per``."""
        if self.kind == "gmf":
            return gmf_evaluate(x, self.group, self.character)
        g = builtin_group(f"sym:{_square(x).shape[0]}")
        return gmf_evaluate(x, g, builtin_character(g, "sign" if self.kind == "det" else "trivial"))

    def __str__(self):
        if self.kind == "gmf":
            return f"gmf:{self.group.name}:{self.character.name}"
        return self.kind


_GMF_RE = re.compile(r"gmf:(gens:[^:]*|\w+:\d+):(.+)")


def parse_functional(spec: str, allow_reducible: bool = False, order_cap: int = ORDER_CAP) -> MatrixFunctional:
    """``det | per | gmf:GROUPSPEC:CHARSPEC``.

    Table characters are irreducible unless ``allow_reducible``; either way
    they must pass :func:`validate_character`.
    """
    spec = spec.strip()
    if spec in ("det", "per"):
        return MatrixFunctional(spec)
    match = _GMF_RE.fullmatch(spec)
    if not match:
        raise SpecError(f"bad functional spec {spec!r}; expected det | per | gmf:GROUP:CHAR")
    group = parse_group(match.group(1), order_cap)
    chi = parse_character(group, match.group(2), irreducible=not allow_reducible)
    report = validate_character(chi, group, tol=1e-9)
    if not report.ok:
        failed = {k: v[1] for k, v in report.checks.items() if not v[0]}
        raise SpecError(f"character {match.group(2)!r} failed validation: {failed}")
    return MatrixFunctional("gmf", group, chi)


@dataclass(frozen=True)
class GapResult:
    """Real part of a superadditivity gap plus its diagnostics."""

    value: float
    imag: float
    scale: float
    values: tuple

    def ok(self, tol: float = PSD_TOL, imag_tol: float = 1e-9) -> bool:
        return self.value >= -tol * self.scale and abs(self.imag) <= imag_tol * self.scale


def _require_psd(mats, tol):
    for i, a in enumerate(mats, 1):
        check = is_psd(a, tol)
        if not check:
            raise NotPSDError(f"input {i} is not PSD (lambda_min = {check.lambda_min:.3e})", check)


def _arity_check(f, mats):
    shapes = {np.shape(a) for a in mats}
    if len(shapes) != 1:
        raise DimensionError(f"inputs have different shapes: {sorted(shapes)}")
    (shape,) = shapes
    if len(shape) != 2 or shape[0] != shape[1]:
        raise DimensionError(f"inputs must be square, got {shape}")
    if f.arity is not None and shape[0] != f.arity:
        raise DimensionError(f"{f} needs {f.arity}x{f.arity} inputs, got {shape}")


def superadditivity_gap3(f: MatrixFunctional, a1, a2, a3, psd_tol: float = PSD_TOL) -> GapResult:
    """F(A1+A2+A3) + sum F(Ai) - sum_{i<j} F(Ai+Aj)."""
    mats = [as_matrix(a) for a in (a1, a2, a3)]
    _arity_check(f, mats)
    _require_psd(mats, psd_tol)
    a1, a2, a3 = mats
    plus = [f(a1 + a2 + a3), f(a1), f(a2), f(a3)]
    minus = [f(a1 + a2), f(a1 + a3), f(a2 + a3)]
    gap = sum(plus) - sum(minus)
    vals = tuple(plus + minus)
    scale = max(1.0, max(abs(v) for v in vals))
    return GapResult(gap.real, gap.imag, scale, vals)


def superadditivity_gap2(f: MatrixFunctional, a, b, psd_tol: float = PSD_TOL) -> GapResult:
    """F(A+B) - F(A) - F(B)."""
    mats = [as_matrix(a), as_matrix(b)]
    _arity_check(f, mats)
    _require_psd(mats, psd_tol)
    a, b = mats
    vals = (f(a + b), f(a), f(b))
    gap = vals[0] - vals[1] - vals[2]
    scale = max(1.0, max(abs(v) for v in vals))
    return GapResult(gap.real, gap.imag, scale, vals)
