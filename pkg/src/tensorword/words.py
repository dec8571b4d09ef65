"""Tensor words over the alphabet {1..k}.

A word ``(s_1, ..., s_m)`` stands for the Kronecker product
``A_{s_1} (x) ... (x) A_{s_m}``. The number of distinct letters is its
representative count ``t``. Only surjective words (``t == k``) survive the
alternating subset sum built in :mod:`tensorword.inexcl`.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .config import ENUM_CAP
from .errors import CapExceededError, DimensionError
from .matcore import _check_size, _frozen, kron_all


@dataclass(frozen=True)
class Word:
    letters: tuple
    k: int

    def __post_init__(self):
        letters = tuple(int(s) for s in self.letters)
        object.__setattr__(self, "letters", letters)
        if self.k < 1:
            raise ValueError(f"alphabet size must be positive, got {self.k}")
        if not letters:
            raise ValueError("a word has length m >= 1")
        bad = [s for s in letters if not 1 <= s <= self.k]
        if bad:
            raise ValueError(f"letters {bad} outside alphabet 1..{self.k}")

    @property
    def m(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)


def representatives(w: Word) -> frozenset:
    return frozenset(w.letters)


def enumerate_words(k: int, m: int, filter: str = "all", cap: int = ENUM_CAP) -> Iterator[Word]:
    """Yield words of length ``m`` over ``{1..k}`` in lexicographic order.

    ``filter="surjective"`` keeps only words that use every letter.
    """
    if k < 1 or m < 1:
        raise ValueError(f"need k >= 1 and m >= 1, got k={k}, m={m}")
    if filter not in ("all", "surjective"):
        raise ValueError(f"unknown filter {filter!r}")
    if k**m > cap:
        raise CapExceededError(f"{k}^{m} = {k**m} words exceeds enumeration cap {cap}")
    return _stream(k, m, filter == "surjective")


def _stream(k, m, surjective):
    for letters in product(range(1, k + 1), repeat=m):
        if surjective and len(set(letters)) != k:
            continue
        yield Word(letters, k)


def surjective_count(k: int, m: int) -> int:
    """Number of onto maps {1..m} -> {1..k}, by inclusion-exclusion (exact)."""
    if k < 1 or m < 1:
        raise ValueError(f"need k >= 1 and m >= 1, got k={k}, m={m}")
    return sum((-1) ** j * comb(k, j) * (k - j) ** m for j in range(k + 1))


def _check_mats(mats: Sequence) -> list:
    mats = [np.asarray(a, dtype=np.complex128) for a in mats]
    if not mats:
        raise DimensionError("need at least one matrix")
    shape = mats[0].shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise DimensionError(f"matrices must be square, got {shape}")
    if any(a.shape != shape for a in mats):
        raise DimensionError("all matrices must share one square shape")
    return mats


def word_tensor(w: Word, mats: Sequence, max_dim: int | None = None) -> np.ndarray:
    mats = _check_mats(mats)
    if len(mats) != w.k:
        raise DimensionError(f"word over {w.k} letters needs {w.k} matrices, got {len(mats)}")
    return kron_all([mats[s - 1] for s in w.letters], max_dim=max_dim)


def surjective_word_sum(mats: Sequence, m: int, max_dim: int | None = None,
                        cap: int = ENUM_CAP) -> np.ndarray:
    """Sum of ``word_tensor(w, mats)`` over all surjective words of length ``m``."""
    mats = _check_mats(mats)
    k, n = len(mats), mats[0].shape[0]
    _check_size(n**m, n**m, max_dim)
    words = enumerate_words(k, m, "surjective", cap=cap)
    total = np.zeros((n**m, n**m), dtype=np.complex128)
    for w in words:
        total += word_tensor(w, mats, max_dim=max_dim)
    return _frozen(total)


def inclusion_exclusion_coefficient(w: Word, k: int | None = None) -> int:
    """Net coefficient of ``w``'s tensor in the alternating subset sum.

    A word with letter set ``R`` occurs once in the expansion of every
    subset tensor indexed by ``S`` with ``R <= S``; that term carries sign
    ``(-1)^(k - |S|)``. The supersets are summed directly and checked
    against the binomial collapse ``(1 - 1)^(k - t)``.
    """
    k = w.k if k is None else k
    reps = representatives(w)
    if max(reps) > k:
        raise ValueError(f"word uses letters beyond alphabet 1..{k}")
    rest = [x for x in range(1, k + 1) if x not in reps]
    total = 0
    for extra in range(len(rest) + 1):
        size = len(reps) + extra
        total += (-1) ** (k - size) * sum(1 for _ in combinations(rest, extra))
    closed = (1 - 1) ** (k - len(reps))
    assert total == closed, (total, closed)
    return total
