import pytest

from phikcorr.datamodel import (
    BinningSpec,
    Column,
    ContingencyTable,
    VariableKind,
    bin_interval,
    build_table,
    discretize,
    infer_kind,
    is_missing,
)


@pytest.mark.parametrize("cell", [None, "", "NA", "nan", " null ", float("nan")])
def test_missing_tokens(cell):
    assert is_missing(cell)


def test_present_values_not_missing():
    assert not is_missing("0")
    assert not is_missing(0.0)


def test_infer_kind():
    assert infer_kind(["1", "2.5", "", "-3e2"]) is VariableKind.INTERVAL
    assert infer_kind(["red", "1", "blue"]) is VariableKind.CATEGORICAL
    with pytest.raises(ValueError, match="empty column"):
        infer_kind(["", "NA"])


def test_ordinal_needs_order_and_known_values():
    with pytest.raises(ValueError):
        Column("s", VariableKind.ORDINAL, ("S", "M"))
    with pytest.raises(ValueError, match="outside its order"):
        Column("s", VariableKind.ORDINAL, ("S", "XL"), ("S", "M"))


def test_from_cells_parses_and_normalises_missing():
    col = Column.from_cells("x", ["1", "", "2.5"])
    assert col.kind is VariableKind.INTERVAL
    assert col.values == (1.0, None, 2.5)
    with pytest.raises(ValueError, match="cannot parse"):
        Column.from_cells("x", ["1", "a"], kind=VariableKind.INTERVAL)


def test_binning_edges_and_assignment():
    codes, spec = bin_interval([0.0, 1.0, 2.0, 10.0, None], 5)
    assert spec.edges == pytest.approx((0, 2, 4, 6, 8, 10))
    # right-open bins; the maximum lands in the last bin
    assert codes.tolist() == [0, 0, 1, 4, -1]


def test_constant_column_collapses_to_one_bin():
    codes, spec = bin_interval([3.0, 3.0, 3.0], 10)
    assert spec.n_bins == 1
    assert codes.tolist() == [0, 0, 0]


def test_binning_spec_validation():
    with pytest.raises(ValueError):
        BinningSpec(2, (0.0, 1.0))
    with pytest.raises(ValueError):
        BinningSpec(2, (0.0, 1.0, 1.0))
    assert BinningSpec(2, (0.0, 1.0, 2.0)).assign([-1.0, 2.0, 2.1]).tolist() == [-1, 1, -1]


def test_discretize_levels():
    cat = discretize(Column.from_cells("c", ["b", "a", "b", ""]))
    assert cat.levels == ("a", "b")
    assert cat.codes.tolist() == [1, 0, 1, -1]
    ordi = discretize(Column.from_cells("o", ["L", "S"], order=["S", "M", "L"]))
    assert ordi.levels == ("S", "M", "L")
    assert ordi.codes.tolist() == [2, 0]


def test_build_table_pairwise_deletion():
    a = Column.from_cells("a", ["x", "y", "x", "", "y"])
    b = Column.from_cells("b", ["u", "u", "v", "v", ""])
    t = build_table(a, b)
    assert t.counts.tolist() == [[1, 1], [1, 0]]
    assert t.n_total == 3
    assert t.row_labels == ("x", "y")


def test_build_table_errors():
    with pytest.raises(ValueError, match="empty table"):
        build_table(["a", None], [None, "b"])
    with pytest.raises(ValueError, match="equal length"):
        build_table(["a"], ["b", "c"])


def test_contingency_table_is_immutable_and_validated():
    t = ContingencyTable.from_counts([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        t.counts[0, 0] = 5
    with pytest.raises(ValueError):
        ContingencyTable.from_counts([[-1, 2]])
    with pytest.raises(ValueError):
        ContingencyTable([[1, 2]], ("r",), ("c", "c"))
    assert t.transpose().counts.tolist() == [[1, 3], [2, 4]]
    assert t.transpose().transpose() == t


def test_build_table_examples():
    assert build_table(["x", "x", "y"], ["p", "q", "p"]).counts.tolist() == [[1, 1], [1, 0]]
    single = build_table(["x", "x"], ["p", "p"])
    assert single.counts.tolist() == [[2]] and single.n_total == 2
    t = build_table(["x", None, "y"], ["p", "q", "p"])
    # levels are per column, so "q" stays as an empty column after deletion
    assert t.counts.tolist() == [[1, 0], [1, 0]] and t.n_total == 2


def test_build_table_transpose_property():
    a = Column.from_cells("a", list("abcabcaab"))
    b = Column.from_cells("b", ["1", "2", "2", "1", "", "3", "1", "2", "3"])
    assert build_table(a, b).transpose() == build_table(b, a)


def test_binning_depends_only_on_value():
    import numpy as np

    v = np.random.default_rng(1).normal(size=200)
    perm = np.random.default_rng(2).permutation(200)
    codes, _ = bin_interval(list(v), 7)
    codes_p, _ = bin_interval(list(v[perm]), 7)
    assert np.array_equal(codes[perm], codes_p)
