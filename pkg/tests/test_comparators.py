import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phikcorr.comparators import cramers_phi, pearson_rho


def test_pearson_examples():
    x = np.arange(10.0)
    assert pearson_rho(x, x) == pytest.approx(1.0)
    assert pearson_rho(x, -x) == pytest.approx(-1.0)
    # hand evaluation: cov = 1.5, sx = 1, sy = sqrt(7/3)
    assert pearson_rho([1, 2, 3], [1, 2, 4]) == pytest.approx(1.5 / np.sqrt(7 / 3), abs=1e-12)
    assert pearson_rho([1, 2, 3], [1, 2, 4]) == pytest.approx(0.98198, abs=1e-5)
    with pytest.raises(ValueError, match="undefined correlation"):
        pearson_rho([1, 1, 1], [1, 2, 3])


@given(
    st.lists(st.floats(-100, 100), min_size=3, max_size=30).filter(lambda v: np.ptp(v) > 1e-3),
    st.floats(0.1, 10),
    st.floats(-10, 10),
)
def test_pearson_affine_invariant(x, a, b):
    y = [v**2 for v in x]
    if np.ptp(y) < 1e-3:
        return
    ref = pearson_rho(x, y)
    assert pearson_rho([a * v + b for v in x], y) == pytest.approx(ref, abs=1e-9)
    assert pearson_rho(y, x) == pytest.approx(ref, abs=1e-12)


def test_cramers_phi_examples():
    assert cramers_phi([[7, 0], [0, 7]]) == 1.0
    assert cramers_phi(np.outer([1, 2], [3, 1])) == pytest.approx(0.0, abs=1e-12)
    assert cramers_phi([[5, 2], [3, 4]]) == pytest.approx(np.sqrt((7 / 6) / 14), abs=1e-12)
    assert cramers_phi([[5, 2], [3, 4]]) == pytest.approx(0.2887, abs=1e-4)


def test_cramers_phi_permutation_matrix():
    t = np.eye(4, dtype=int)[[2, 0, 3, 1]] * 5
    assert cramers_phi(t) == pytest.approx(1.0, abs=1e-12)


def test_cramers_phi_errors():
    with pytest.raises(ValueError):
        cramers_phi([[1, 2, 3]])
