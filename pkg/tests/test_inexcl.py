import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensorword.config import Tolerances
from tensorword.inexcl import (check_theorem1_bounds, surjective_bounds, theorem1_bounds, theorem1_count,
                               theorem1_difference, theorem2_operator, theorem2_trial, theorem2_verify,
                               trial_rng, draw_psd_family)
from tensorword.matcore import hermitian_eigenvalues, kron_power, random_psd
from tensorword.words import surjective_count, surjective_word_sum

from conftest import scalar_surjective_sum


def test_single_matrix_is_plain_power(rng):
    a = random_psd(2, 2, 3)
    np.testing.assert_allclose(theorem2_operator([a], 3), kron_power(a, 3), atol=1e-12)


def test_vanishes_below_k():
    mats = [random_psd(2, 2, s) for s in (1, 2, 3)]
    out = theorem2_operator(mats, 2)
    assert np.max(np.abs(out)) <= 1e-10 * max(1, np.max(np.abs(kron_power(sum(mats), 2))))


def test_scalar_example():
    # (1+2+3)^3 + 1 + 8 + 27 - 3^3 - 4^3 - 5^3 = 36 = 6 * 1 * 2 * 3
    assert theorem2_operator([[[1]], [[2]], [[3]]], 3)[0, 0] == pytest.approx(36)


def test_scalar_polynomial_oracle(rng):
    for k in range(1, 5):
        for m in range(1, 7):
            vals = list(rng.uniform(0, 3, k))
            got = theorem2_operator([[[v]] for v in vals], m)[0, 0]
            expected = scalar_surjective_sum(vals, m)
            assert got.real == pytest.approx(expected, abs=1e-10 * max(1, sum(vals) ** m))
            assert abs(got.imag) < 1e-12


def test_result_is_exactly_hermitian(rng):
    out = theorem2_operator([random_psd(2, 2, s) for s in (4, 5, 6)], 3)
    np.testing.assert_array_equal(out, out.conj().T)


def test_theorem1_difference_examples():
    np.testing.assert_allclose(theorem1_difference(np.eye(2), 2 * np.eye(2), np.eye(2), 1), np.zeros((2, 2)), atol=1e-12)
    n = 2
    eye = np.eye(n)
    np.testing.assert_allclose(theorem1_difference(eye, eye, eye, 3), 6 * np.eye(n**3), atol=1e-12)
    # 4^3 + 1 + 1 + 8 - 2^3 - 3^3 - 3^3 = 12 = 6 permutations of 1*1*2
    assert theorem1_difference([[1]], [[1]], [[2]], 3)[0, 0] == pytest.approx(12)
    assert scalar_surjective_sum([1, 1, 2], 3) == 12


def test_theorem1_count():
    for m in range(1, 9):
        assert theorem1_count(m) == surjective_count(3, m)


def test_theorem1_bounds_examples():
    eye = np.eye(2)
    lower, upper, count = theorem1_bounds(eye, eye, eye, 3)
    assert (lower, upper, count) == pytest.approx((6, 6, 6))
    assert theorem1_bounds(eye, eye, eye, 2) == pytest.approx((0, 0, 0))
    d = np.diag([1.0, 2.0])
    lower, upper, count = theorem1_bounds(d, d, d, 3)
    assert (lower, upper, count) == pytest.approx((6, 48, 6))
    spec = np.array(hermitian_eigenvalues(theorem1_difference(d, d, d, 3)))
    np.testing.assert_allclose(spec, [6, 12, 12, 12, 24, 24, 24, 48], atol=1e-9)


def test_bound_check_statuses():
    d = np.diag([1.0, 2.0])
    check = check_theorem1_bounds(d, d, d, 3)
    assert check.ok and check.status in ("pass", "marginal")
    eye = np.eye(2)
    assert check_theorem1_bounds(eye, eye, eye, 3).ok


def test_bounds_bracket_random_spectra(rng):
    for trial in range(30):
        n, m = 1 + trial % 3, 3 + trial % 3
        mats = draw_psd_family(trial_rng(11, trial), 3, n)
        assert check_theorem1_bounds(*mats, m).ok


def test_surjective_bounds_reduce_to_theorem1_at_k3():
    mats = [random_psd(2, 2, s) for s in (7, 8, 9)]
    assert surjective_bounds(mats, 4) == pytest.approx(theorem1_bounds(*mats, 4))


def test_homogeneity(rng):
    mats = [random_psd(2, 2, s) for s in (1, 2, 3)]
    c = 1.7
    lhs = theorem2_operator([c * a for a in mats], 3)
    rhs = c**3 * theorem2_operator(mats, 3)
    np.testing.assert_allclose(lhs, rhs, atol=1e-10 * np.max(np.abs(rhs)))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(1, 5), st.integers(0, 2**32))
def test_positivity_and_oracle_property(n, k, m, seed):
    if n**m > 243:
        return
    mats = draw_psd_family(np.random.default_rng(seed), k, n)
    report = theorem2_trial(n, k, m, seed, 0, mats=mats)
    assert report.error is None
    assert report.psd_pass
    assert report.oracle_pass
    if m < k:
        assert report.zero_pass


def test_verify_examples():
    (rep,) = theorem2_verify(1, 3, 3, 1, seed=5)
    assert rep.psd_pass and rep.oracle_pass and rep.passed
    mats = draw_psd_family(trial_rng(5, 0), 3, 1)
    expected = 6 * math.prod(a[0, 0].real for a in mats)
    assert rep.lambda_min == pytest.approx(expected, rel=1e-12)
    for rep in theorem2_verify(2, 3, 2, 3, seed=1):
        assert rep.zero_pass
    for rep in theorem2_verify(2, 4, 3, 3, seed=1):
        assert rep.zero_pass and rep.max_entry <= 1e-10 * rep.scale


def test_verify_oracle_skipped_over_cap():
    (rep,) = theorem2_verify(1, 3, 3, 1, seed=0, enum_cap=10)
    assert rep.oracle_skipped and rep.oracle_pass is None and rep.passed


def test_verify_reports_size_errors_instead_of_raising():
    (rep,) = theorem2_verify(3, 2, 3, 1, seed=0, max_dim=8)
    assert rep.error and "SizeLimitError" in rep.error
    assert not rep.passed


def test_verify_worker_invariance():
    one = [r.to_dict() for r in theorem2_verify(2, 3, 3, 4, seed=42, workers=1)]
    two = [r.to_dict() for r in theorem2_verify(2, 3, 3, 4, seed=42, workers=2)]
    assert one == two


def test_oracle_residual_uses_intermediate_scale():
    mats = [random_psd(2, 2, s) for s in (1, 2, 3)]
    rep = theorem2_trial(2, 3, 3, 0, 0, mats=mats)
    assert rep.scale == pytest.approx(max(1, np.max(np.abs(kron_power(sum(mats), 3)))))
    direct = np.max(np.abs(theorem2_operator(mats, 3) - surjective_word_sum(mats, 3))) / rep.scale
    assert rep.oracle_residual == pytest.approx(direct, abs=1e-18)
    assert rep.oracle_residual <= Tolerances().oracle
