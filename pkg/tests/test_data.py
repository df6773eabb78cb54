import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from cumcal.data import (DataError, PairedSample, SortedDataset, ingest,
                         read_table, sort_with_tie_randomization, tie_order,
                         write_table)

samples_strategy = st.lists(
    st.tuples(st.floats(0, 1, allow_nan=False), st.integers(0, 1)),
    min_size=1, max_size=60)


def _write(tmp_path, body, name="d.csv"):
    path = tmp_path / name
    path.write_text(body, encoding="utf-8")
    return path


def test_ingest_basic(tmp_path):
    path = _write(tmp_path, "score,outcome\n0.3,1\n0.7,0\n")
    assert ingest(path) == [PairedSample(0.3, 1), PairedSample(0.7, 0)]


def test_ingest_skips_comments_and_blank_lines(tmp_path):
    path = _write(tmp_path, "# made by hand\nscore,outcome\n0.3,1\n\n# x\n0,0\n")
    assert ingest(path) == [(0.3, 1), (0.0, 0)]


def test_ingest_score_out_of_range_names_line(tmp_path):
    path = _write(tmp_path, "score,outcome\n1.2,1\n")
    with pytest.raises(DataError, match=r"line 2.*1\.2"):
        ingest(path)


def test_ingest_reports_file_line_number(tmp_path):
    # Data line 1 is file line 2; the message gives the file line.
    path = _write(tmp_path, "score,outcome\n0.5,1\n-0.1,0\n")
    with pytest.raises(DataError, match="line 3"):
        ingest(path)


@pytest.mark.parametrize("value", ["2", "0.5", "yes", ""])
def test_ingest_bad_outcome(tmp_path, value):
    path = _write(tmp_path, f"score,outcome\n0.5,{value}\n")
    with pytest.raises(DataError, match="line 2"):
        ingest(path)


def test_ingest_nan_score_rejected(tmp_path):
    with pytest.raises(DataError):
        ingest(_write(tmp_path, "score,outcome\nnan,1\n"))


def test_ingest_header_only_is_fatal(tmp_path):
    with pytest.raises(DataError, match="no observations"):
        ingest(_write(tmp_path, "score,outcome\n"))


def test_ingest_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError, match="nope.csv"):
        ingest(tmp_path / "nope.csv")


def test_ingest_bad_header(tmp_path):
    with pytest.raises(DataError, match="header"):
        ingest(_write(tmp_path, "p,c\n0.1,1\n"))


def test_ingest_endpoints_accepted(tmp_path):
    assert ingest(_write(tmp_path, "score,outcome\n0,0\n1,1\n")) == [(0, 0),
                                                                    (1, 1)]


def test_read_table_true_prob_column(tmp_path):
    path = _write(tmp_path, "score,outcome,true_prob\n0.2,1,0.25\n")
    samples, truths = read_table(path)
    assert samples == [(0.2, 1)] and truths == [0.25]


@settings(max_examples=100, deadline=None)
@given(samples_strategy)
def test_serialize_round_trip_bit_exact(tmp_path_factory, samples):
    path = tmp_path_factory.mktemp("rt") / "d.csv"
    write_table(path, samples)
    back = ingest(path)
    assert [(s.score, s.outcome) for s in back] == [(float(a), b)
                                                   for a, b in samples]


def test_sort_no_ties():
    ds = sort_with_tie_randomization([(0.5, 1), (0.2, 0), (0.9, 1)], 123)
    assert ds.samples == [(0.2, 0), (0.5, 1), (0.9, 1)]


def test_sort_single():
    assert sort_with_tie_randomization([(0.4, 1)], 0).samples == [(0.4, 1)]


def test_sort_empty_rejected():
    with pytest.raises(DataError):
        sort_with_tie_randomization([], 0)


def test_tie_orders_depend_on_seed_and_are_deterministic():
    pairs = [(0.5, 1), (0.5, 0)]
    seen = set()
    for seed in range(32):
        first = tuple(sort_with_tie_randomization(pairs, seed).outcomes)
        again = tuple(sort_with_tie_randomization(pairs, seed).outcomes)
        assert first == again
        seen.add(first)
    assert seen == {(1, 0), (0, 1)}


@pytest.mark.parametrize("r", [2, 3])
def test_tie_orders_uniform(r):
    # Each tied item is identified by its input position.
    scores = np.full(r, 0.5)
    perms = Counter()
    trials = 1000 * math.factorial(r)
    for seed in range(trials):
        perms[tuple(tie_order(scores, seed))] += 1
    assert set(perms) == set(itertools.permutations(range(r)))
    _, p = stats.chisquare(list(perms.values()))
    assert p > 0.01


@settings(max_examples=200, deadline=None)
@given(samples_strategy, st.integers(0, 2**32))
def test_sort_preserves_pairs_and_orders(samples, seed):
    ds = sort_with_tie_randomization(samples, seed)
    assert np.all(np.diff(ds.scores) >= 0)
    assert Counter(ds.samples) == Counter((float(a), b) for a, b in samples)
    assert ds.samples == sort_with_tie_randomization(samples, seed).samples


def test_sorted_dataset_is_read_only():
    ds = SortedDataset([0.1, 0.2], [0, 1])
    with pytest.raises(ValueError):
        ds.scores[0] = 0.5


def test_sorted_dataset_rejects_unsorted():
    with pytest.raises(DataError):
        SortedDataset([0.3, 0.2], [0, 1])
