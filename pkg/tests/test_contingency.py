import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from phikcorr.contingency import (
    chi2_stat,
    dependent_estimates,
    g_stat,
    independent_estimates,
    theoretical_ndof,
)

tables = arrays(np.int64, st.tuples(st.integers(2, 6), st.integers(2, 6)), elements=st.integers(0, 30)).filter(
    lambda a: a.sum() > 0
)


def test_dependent_estimates_examples():
    assert np.array_equal(dependent_estimates([[1, 1], [1, 1]]).expected, np.ones((2, 2)))
    assert np.array_equal(dependent_estimates([[2, 0], [0, 2]]).expected, np.ones((2, 2)))
    assert np.allclose(dependent_estimates([[5, 2], [3, 4]]).expected, [[4, 3], [4, 3]])
    with pytest.raises(ValueError):
        dependent_estimates([[0, 0], [0, 0]])


@given(tables)
def test_dependent_estimates_preserve_margins(o):
    e = dependent_estimates(o).expected
    assert np.allclose(e.sum(axis=1), o.sum(axis=1), rtol=0, atol=1e-9)
    assert np.allclose(e.sum(axis=0), o.sum(axis=0), rtol=0, atol=1e-9)
    assert abs(e.sum() - o.sum()) <= 1e-9


def test_independent_estimates_hand_values():
    est = independent_estimates([[5, 2], [3, 4]])
    assert est.expected[0, 0] == pytest.approx(1.5, abs=1e-15)
    # sqrt(2*9/16 + 3*4/16 + 4*1.5**2/16) = sqrt(39/16)
    assert est.sigma[0, 0] == pytest.approx(math.sqrt(39 / 16), abs=1e-12)
    assert est.sigma[0, 0] == pytest.approx(1.5612, abs=1e-4)


def test_independent_estimates_zero_b_and_c():
    # cell (0,0) is alone in its row and column: B = C = 0
    est = independent_estimates([[3, 0, 0], [0, 2, 1], [0, 1, 4]])
    assert est.expected[0, 0] == 0.0
    assert est.sigma[0, 0] == 0.0


def test_independent_estimates_undefined_denominator():
    est = independent_estimates([[1, 1], [1, 0]])
    assert not est.defined[0, 0]
    assert math.isnan(est.expected[0, 0]) and math.isnan(est.sigma[0, 0])
    assert est.defined[1, 1]


def test_independent_estimates_needs_2x2():
    with pytest.raises(ValueError, match="ABCD needs >=2x2"):
        independent_estimates([[1, 2, 3]])


@given(tables)
def test_abcd_sigma_zero_only_when_b_and_c_zero(o):
    est = independent_estimates(o)
    b = o.sum(axis=1, keepdims=True) - o
    c = o.sum(axis=0, keepdims=True) - o
    zero = est.defined & (est.sigma == 0)
    assert np.array_equal(zero, est.defined & (b == 0) & (c == 0))


def test_chi2_examples():
    assert chi2_stat([[2, 2], [2, 2]], np.full((2, 2), 2.0)) == 0.0
    assert chi2_stat([[2, 0], [0, 2]], np.ones((2, 2))) == 4.0
    o = [[5, 2], [3, 4]]
    assert chi2_stat(o, dependent_estimates(o)) == pytest.approx(1 / 4 + 1 / 3 + 1 / 4 + 1 / 3, abs=1e-12)
    with pytest.raises(ValueError, match="incompatible expectation"):
        chi2_stat([[1, 0]], [[0.0, 1.0]])
    # empty expectation with empty observation contributes nothing
    assert chi2_stat([[0, 1]], [[0.0, 1.0]]) == 0.0


def test_g_examples():
    assert g_stat([[2, 0], [0, 2]], np.ones((2, 2))) == pytest.approx(8 * math.log(2), abs=1e-12)
    assert g_stat([[1, 1], [1, 1]], np.ones((2, 2))) == 0.0
    with pytest.raises(ValueError, match="incompatible expectation"):
        g_stat([[1, 0]], [[0.0, 1.0]])


@given(tables, st.data())
def test_statistics_permutation_invariant(o, data):
    pr = data.draw(st.permutations(range(o.shape[0])))
    pc = data.draw(st.permutations(range(o.shape[1])))
    op = o[np.ix_(pr, pc)]
    assert chi2_stat(op, dependent_estimates(op)) == chi2_stat(o, dependent_estimates(o))
    assert g_stat(op, dependent_estimates(op)) == g_stat(o, dependent_estimates(o))


@given(tables, st.integers(2, 5))
def test_chi2_scales_with_counts(o, m):
    base = chi2_stat(o, dependent_estimates(o))
    assert chi2_stat(o * m, dependent_estimates(o * m)) == pytest.approx(m * base, rel=1e-12, abs=1e-9)


@settings(max_examples=50)
@given(tables)
def test_g_nonnegative_zero_iff_factorizable(o):
    g = g_stat(o, dependent_estimates(o))
    assert g >= -1e-9
    rows, cols = o.sum(axis=1), o.sum(axis=0)
    factorizable = np.array_equal(o * o.sum(), np.outer(rows, cols))
    if factorizable:
        assert abs(g) < 1e-9
    else:
        assert g > 0


def test_factorizable_table_has_zero_g():
    o = np.outer([1, 2, 3], [2, 1, 1])
    assert g_stat(o, dependent_estimates(o)) == pytest.approx(0.0, abs=1e-12)


def test_theoretical_ndof():
    assert theoretical_ndof((20, 20)) == 361
    assert theoretical_ndof((2, 2)) == 1
    assert theoretical_ndof((3, 3, 3)) == 20
    with pytest.raises(ValueError):
        theoretical_ndof(())
