import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modeclust.errors import InvalidInput
from modeclust.evaluation import adjusted_rand, confusion
from oracles import pair_count_ari, set_partitions


def labels_from_table(rows):
    true, pred = [], []
    for name, counts in rows:
        for j, c in enumerate(counts):
            true += [name] * c
            pred += [j] * c
    return true, pred


SEEDS_TABLE = [("Kama", (58, 3, 9)), ("Rosa", (3, 67, 0)), ("Canadian", (3, 0, 67))]


def test_confusion_reproduces_table():
    true, pred = labels_from_table(SEEDS_TABLE)
    tab = confusion(true, pred)
    assert tab.row_labels == ("Kama", "Rosa", "Canadian")
    np.testing.assert_array_equal(tab.counts, [c for _, c in SEEDS_TABLE])
    assert tab.n == 210
    assert tab.row_totals.tolist() == [70, 70, 70]
    assert "Kama" in tab.to_text()
    assert tab.to_csv().splitlines()[1] == "Kama,58,3,9"


def test_seeds_table_ari():
    true, pred = labels_from_table(SEEDS_TABLE)
    assert adjusted_rand(true, pred) == pytest.approx(0.765, abs=0.005)
    assert adjusted_rand(true, pred) == float(pair_count_ari(true, pred))


def test_identical_and_trivial():
    assert adjusted_rand([0, 0, 1, 1], ["a", "a", "b", "b"]) == 1.0
    assert adjusted_rand([0, 0, 0], [1, 1, 1]) == 1.0
    assert adjusted_rand([0, 1, 2], [0, 1, 2]) == 1.0


def test_brute_force_small():
    parts = list(set_partitions(5, 5))
    assert len(parts) == 52  # Bell(5)
    for a in parts[::3]:
        for b in parts[::4]:
            assert adjusted_rand(a, b) == float(pair_count_ari(a, b))


def test_bad_input():
    with pytest.raises(InvalidInput):
        adjusted_rand([0], [0])
    with pytest.raises(InvalidInput):
        adjusted_rand([0, 1], [0, 1, 1])


label_lists = st.integers(2, 30).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 4), min_size=n, max_size=n), st.lists(st.integers(0, 4), min_size=n, max_size=n))
)


@settings(max_examples=200, deadline=None)
@given(label_lists)
def test_symmetric(pair):
    a, b = pair
    assert adjusted_rand(a, b) == adjusted_rand(b, a)


@settings(max_examples=200, deadline=None)
@given(label_lists, st.permutations(range(5)))
def test_relabel_invariant(pair, perm):
    a, b = pair
    assert adjusted_rand(a, b) == adjusted_rand([perm[v] for v in a], b)
    assert adjusted_rand(a, b) <= 1.0
