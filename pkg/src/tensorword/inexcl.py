"""The alternating subset-sum operator on tensor powers and its checks.

For PSD ``A_1..A_k`` the operator

    L = sum over nonempty S of (-1)^(k-|S|) * kron_power(sum_{i in S} A_i, m)

equals the sum of all surjective word tensors and is therefore PSD. The
``k = 3`` case has a closed-form word count and eigenvalue bracket.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .config import ENUM_CAP, Tolerances
from .errors import CapExceededError, TensorWordError
from .matcore import _eigh, _frozen, hermitian_eigenvalues, kron_power, random_psd
from .words import _check_mats, surjective_count, surjective_word_sum


def _accumulate(mats, m, max_dim=None):
    """Return ``(L, scale)``; scale is max(1, largest |entry| of any subset tensor)."""
    mats = _check_mats(mats)
    k, n = len(mats), mats[0].shape[0]
    total = np.zeros((n**m, n**m), dtype=np.complex128)
    scale = 1.0
    for t in range(1, k + 1):
        sign = (-1) ** (k - t)
        for subset in combinations(range(k), t):
            term = kron_power(sum(mats[i] for i in subset), m, max_dim=max_dim)
            scale = max(scale, float(np.max(np.abs(term))))
            total += sign * term
    return _frozen((total + total.conj().T) / 2), scale


def theorem2_operator(mats: Sequence, m: int, max_dim: int | None = None) -> np.ndarray:
    """The alternating subset sum of tensor powers, re-Hermitized."""
    return _accumulate(mats, m, max_dim)[0]


def theorem1_difference(a1, a2, a3, m: int, max_dim: int | None = None) -> np.ndarray:
    return theorem2_operator([a1, a2, a3], m, max_dim)


def theorem1_count(m: int) -> int:
    """Distinct surjective words of length m over three letters, closed form."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    return 3 * (3 ** (m - 1) - 2**m + 1)


def theorem1_bounds(a1, a2, a3, m: int) -> tuple:
    """``(lower, upper, count)`` bracketing the spectrum of the k=3 difference."""
    count = theorem1_count(m)
    spectra = [hermitian_eigenvalues(a) for a in (a1, a2, a3)]
    lo = min(s.min for s in spectra)
    hi = max(s.max for s in spectra)
    return count * lo**m, count * hi**m, count


def surjective_bounds(mats: Sequence, m: int) -> tuple:
    """Experimental k-letter analogue of :func:`theorem1_bounds`.

    Uses the surjective word count in place of the k=3 closed form. Reported
    only; campaigns never gate on it.
    """
    count = surjective_count(len(mats), m)
    spectra = [hermitian_eigenvalues(a) for a in mats]
    lo = min(s.min for s in spectra)
    hi = max(s.max for s in spectra)
    return count * lo**m, count * hi**m, count


@dataclass(frozen=True)
class BoundCheck:
    lower: float
    upper: float
    count: int
    lambda_min: float
    lambda_max: float
    slack: float
    status: str  # "pass" | "marginal" | "violation"

    @property
    def ok(self) -> bool:
        return self.status != "violation"


def _classify(lmin, lmax, lower, upper, slack):
    excess = max(lower - lmin, lmax - upper)
    if excess <= 0:
        return "pass"
    if excess <= slack:
        return "marginal"
    return "violation"


def check_theorem1_bounds(a1, a2, a3, m: int, psd_tol: float = Tolerances.psd,
                          max_dim: int | None = None) -> BoundCheck:
    """Check every eigenvalue of the k=3 difference against its bracket.

    Slack is ``psd_tol * scale`` with the cancellation-aware scale of the
    subset tensors. Excursions inside the slack are ``"marginal"``.
    """
    diff, scale = _accumulate([a1, a2, a3], m, max_dim)
    w = _eigh(diff, vectors=False)
    lower, upper, count = theorem1_bounds(a1, a2, a3, m)
    slack = psd_tol * scale
    lmin, lmax = float(w[0]), float(w[-1])
    return BoundCheck(lower, upper, count, lmin, lmax, slack,
                      _classify(lmin, lmax, lower, upper, slack))


# -- randomized verification --------------------------------------------

@dataclass
class InExReport:
    n: int
    k: int
    m: int
    seed: int
    trial: int
    lambda_min: float | None = None
    lambda_max: float | None = None
    scale: float | None = None
    oracle_residual: float | None = None
    max_entry: float | None = None
    psd_pass: bool = False
    oracle_pass: bool | None = None
    zero_pass: bool | None = None
    oracle_skipped: bool = False
    error: str | None = None

    @property
    def passed(self) -> bool:
        return (self.error is None and self.psd_pass
                and self.oracle_pass is not False and self.zero_pass is not False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Generator for one trial; depends only on ``(seed, trial)``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def draw_psd_family(rng: np.random.Generator, count: int, n: int) -> list:
    """``count`` random PSD n x n matrices with ranks drawn from 1..n."""
    mats = []
    for _ in range(count):
        rank = int(rng.integers(1, n + 1))
        sub_seed = int(rng.integers(0, 2**63 - 1))
        mats.append(random_psd(n, rank, sub_seed))
    return mats


def theorem2_trial(n: int, k: int, m: int, seed: int, trial: int,
                   tol: Tolerances = Tolerances(), max_dim: int | None = None,
                   enum_cap: int = ENUM_CAP, mats: Sequence | None = None) -> InExReport:
    report = InExReport(n, k, m, seed, trial)
    try:
        if mats is None:
            mats = draw_psd_family(trial_rng(seed, trial), k, n)
        L, scale = _accumulate(mats, m, max_dim)
        w = _eigh(L, vectors=False)
        report.scale = scale
        report.lambda_min, report.lambda_max = float(w[0]), float(w[-1])
        report.psd_pass = report.lambda_min >= -tol.psd * scale
        report.max_entry = float(np.max(np.abs(L)))
        if m < k:
            report.zero_pass = report.max_entry <= tol.zero * scale
        try:
            oracle = surjective_word_sum(mats, m, max_dim=max_dim, cap=enum_cap)
        except CapExceededError:
            report.oracle_skipped = True
        else:
            report.oracle_residual = float(np.max(np.abs(L - oracle))) / scale
            report.oracle_pass = report.oracle_residual <= tol.oracle
    except TensorWordError as exc:
        report.error = f"{type(exc).__name__}: {exc}"
    return report


def theorem2_verify(n: int, k: int, m: int, trials: int, seed: int,
                    tol: Tolerances = Tolerances(), max_dim: int | None = None,
                    enum_cap: int = ENUM_CAP, workers: int = 1) -> list:
    """Run ``trials`` independent random trials of the subset-sum checks.

    Each trial draws ``k`` PSD matrices from ``trial_rng(seed, i)``, so the
    reports do not depend on ``workers``.
    """
    args = [(n, k, m, seed, i, tol, max_dim, enum_cap) for i in range(trials)]
    if workers <= 1 or trials <= 1:
        return [theorem2_trial(*a) for a in args]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_star_trial, args))


def _star_trial(a):
    return theorem2_trial(*a)
