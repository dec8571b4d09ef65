import itertools
import math

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20141013)


def gram(rng, n, rank=None):
    rank = n if rank is None else rank
    b = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return b @ b.conj().T


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def brute_kron(a, b):
    """Entry-by-entry Kronecker product, no numpy.kron."""
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def brute_gmf(x, chi_of_perm, m):
    """sum over permutations p of {0..m-1} of chi(p) * prod x[t, p[t]]."""
    total = 0j
    for p in itertools.permutations(range(m)):
        c = chi_of_perm(p)
        if c:
            total += c * math.prod(x[t, p[t]] for t in range(m))
    return total


def perm_sign(p):
    inversions = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inversions % 2 else 1


def scalar_surjective_sum(values, m):
    """Polynomial oracle: sum over onto words of the product of letters."""
    k = len(values)
    total = 0
    for word in itertools.product(range(k), repeat=m):
        if len(set(word)) == k:
            total += math.prod(values[i] for i in word)
    return total


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    """Record one pass/fail summary line for an acceptance criterion."""
    def record(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
