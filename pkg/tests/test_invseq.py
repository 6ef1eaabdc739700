import itertools
import json
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invseq_lab.invseq import (
    P000,
    P102,
    CountTable,
    avoids,
    contains,
    count_table,
    enumerate_avoiding,
    parse_pattern,
    parse_patterns,
    prmx,
    reduction,
    remark_dedup,
    sequence_from_json,
    sequence_to_json,
    stats,
)


def all_inversion_sequences(n):
    return itertools.product(*[range(j + 1) for j in range(n)])


def brute_contains(e, w):
    return any(reduction([e[i] for i in idx]) == tuple(w) for idx in itertools.combinations(range(len(e)), len(w)))


inversion_sequences = st.integers(0, 9).flatmap(
    lambda n: st.tuples(*[st.integers(0, j) for j in range(n)])
)
small_patterns = st.lists(st.integers(0, 3), min_size=1, max_size=4).map(reduction)


@pytest.mark.parametrize(
    "word, expected",
    [((5, 5, 5), (0, 0, 0)), ((3, 1, 3), (1, 0, 1)), ((2, 0, 3), (1, 0, 2))],
)
def test_reduction_examples(word, expected):
    assert reduction(word) == expected


def test_reduction_rejects_empty():
    with pytest.raises(ValueError, match="empty word"):
        reduction(())


@given(st.lists(st.integers(-5, 20), min_size=1, max_size=8))
def test_reduction_idempotent(word):
    assert reduction(reduction(word)) == reduction(word)


@pytest.mark.parametrize(
    "e, w, expected",
    [((0, 1, 0, 3), P102, True), ((0, 0, 0), P000, True), ((0, 0, 2, 2), P102, False), ((0, 1), P102, False)],
)
def test_contains_examples(e, w, expected):
    assert contains(e, w) is expected
    assert brute_contains(e, w) is expected


@pytest.mark.parametrize("w", [(0,), (0, 0), (1, 0), (1, 0, 2), (0, 0, 0), (0, 1, 0), (2, 0, 1, 1), (0, 1, 2, 3)])
def test_contains_matches_brute_force_exhaustively(w):
    for n in range(7):
        for e in all_inversion_sequences(n):
            assert contains(e, w) == brute_contains(e, w), (e, w)


@given(inversion_sequences, small_patterns)
def test_contains_matches_brute_force_random(e, w):
    assert contains(e, w) == brute_contains(e, w)


@given(inversion_sequences, small_patterns, st.integers(0, 9))
def test_containment_is_monotone_under_extension(e, w, v):
    extended = e + (min(v, len(e)),)
    if contains(e, w):
        assert contains(extended, w)


@pytest.mark.parametrize(
    "e, dist, mx, p, rank",
    [((0, 1, 1, 0), 2, 1, 3, 1), ((0,), 1, 0, 1, 0), ((0, 0, 2, 2), 2, 2, 4, 1)],
)
def test_stats_examples(e, dist, mx, p, rank):
    s = stats(e)
    assert (s.dist, s.maxval, s.prmx, s.rank) == (dist, mx, p, rank)


def test_stats_empty_sequence():
    s = stats(())
    assert (s.dist, s.maxval, s.prmx, s.rank) == (0, -1, 0, 0)


def test_rank_undefined_on_102_containing():
    with pytest.raises(ValueError, match="rank undefined"):
        stats((0, 1, 0, 3))
    assert stats((0, 1, 0, 3), with_rank=False).rank is None


def test_prmx_entry_is_maximum_for_102_avoiders():
    for n in range(1, 8):
        for e in enumerate_avoiding(n, [P102]):
            assert e[prmx(e) - 1] == max(e)
            assert stats(e).rank >= 0


def test_enumerate_examples():
    seqs = list(enumerate_avoiding(3, [P102, P000]))
    assert len(seqs) == 5
    assert (0, 0, 0) not in seqs
    assert set(seqs) == set(all_inversion_sequences(3)) - {(0, 0, 0)}
    assert list(enumerate_avoiding(2, [P102, P000])) == [(0, 0), (0, 1)]
    assert len(list(enumerate_avoiding(5, [P102, P000], dist=3))) == 23
    assert list(enumerate_avoiding(0, [P102, P000])) == [()]


def test_enumerate_is_lexicographic_and_matches_brute_force():
    for n in range(8):
        got = list(enumerate_avoiding(n, [P102, P000]))
        assert got == sorted(got)
        brute = [e for e in all_inversion_sequences(n) if not brute_contains(e, P102) and not brute_contains(e, P000)]
        assert got == brute


def test_enumerate_filters_match_post_filtering():
    for n in range(1, 9):
        every = list(enumerate_avoiding(n, [P102, P000]))
        for m in range(n + 1):
            for t in range(n):
                want = [e for e in every if len(set(e)) == m and stats(e).rank == t]
                assert list(enumerate_avoiding(n, [P102, P000], dist=m, rank=t)) == want


def test_dist_bounds_length():
    for n in range(1, 10):
        for e in enumerate_avoiding(n, [P102, P000]):
            m = len(set(e))
            assert m <= n <= 2 * m


def test_row_sums():
    # row sums of the (length, dist) table for n <= 8
    assert [sum(1 for _ in enumerate_avoiding(n, [P102, P000])) for n in range(9)] == [1, 1, 2, 5, 14, 40, 121, 373, 1181]


def test_non_reduced_patterns_rejected():
    with pytest.raises(ValueError):
        list(enumerate_avoiding(3, [(1, 1, 2)]))
    with pytest.raises(ValueError):
        parse_pattern("113")
    assert parse_patterns("102,000") == (P102, P000)
    assert parse_pattern("1,0,2") == P102


def test_rank_filter_requires_102():
    with pytest.raises(ValueError):
        list(enumerate_avoiding(3, [P000], rank=0))


def test_count_table_examples():
    table = count_table(8, [P102, P000])
    assert table.get(n=6, m=4) == 76
    assert table.get(n=8, m=5) == 630
    only_102 = count_table(3, [P102])
    assert only_102.get(n=3, t=0) == 3
    assert only_102.get(n=3) == 6
    # rank split of IS_3(102): 3, 2, 1
    assert [only_102.get(n=3, t=t) for t in range(3)] == [3, 2, 1]


def test_count_table_without_102_has_no_rank():
    table = count_table(4, [P000])
    assert all(key[2] is None for key in table.counts)
    assert table.get(n=4) == sum(1 for e in all_inversion_sequences(4) if not brute_contains(e, P000))


def test_count_table_parallel_is_identical():
    assert count_table(9, [P102, P000], workers=2).counts == count_table(9, [P102, P000]).counts


def test_count_table_json():
    table = count_table(3, [P102, P000])
    records = json.loads(table.to_json())
    assert {"n": 3, "m": 2, "t": 0, "count": "2"} in records
    assert all(isinstance(r["count"], str) for r in records)
    assert CountTable.from_records(records).counts == table.counts


def test_remark_dedup_examples():
    assert remark_dedup((0, 1)) == (0, 1)
    assert remark_dedup((0, 0, 2)) == (0, 0, 2)
    with pytest.raises(ValueError, match="rank 0"):
        remark_dedup((0, 1, 1))
    with pytest.raises(ValueError, match="rank 0"):
        remark_dedup((0, 0, 2, 2))


def test_remark_dedup_removes_doubled_maximum():
    e = (0, 1, 2, 1, 0)
    assert avoids(e, [P102, P000])
    assert stats(e).rank == 0
    assert remark_dedup(e) == e
    e = (0, 1, 1, 0)  # rank 1
    with pytest.raises(ValueError):
        remark_dedup(e)
    hits = 0
    for n in range(1, 9):
        for e in enumerate_avoiding(n, [P102, P000], rank=0):
            out = remark_dedup(e)
            if e.count(max(e)) == 2:
                hits += 1
                q = prmx(e)
                assert out == e[: q - 1] + e[q:]
                assert out.count(max(out)) == 1
            assert len(set(out)) == len(set(e))
    assert hits > 0


def test_remark_dedup_bijection_small():
    for m in range(5):
        src = [e for n in range(m, 2 * m + 1) for e in enumerate_avoiding(n, [P102, P000], dist=m, rank=0)]
        dst = {e for n in range(m, 2 * m + 1) for e in enumerate_avoiding(n, [P102, P000], dist=m)
               if not e or e.count(max(e)) == 1}
        image = [remark_dedup(e) for e in src]
        assert len(set(image)) == len(image)
        assert set(image) == dst


def test_sequence_json_round_trip():
    assert sequence_from_json(sequence_to_json((0, 1, 0, 3))) == (0, 1, 0, 3)
    with pytest.raises(ValueError):
        sequence_from_json("[0, 2]")


@settings(max_examples=50)
@given(inversion_sequences)
def test_rank_distribution_consistent(e):
    if not contains(e, P102) and e:
        s = stats(e)
        assert s.rank == s.prmx - s.maxval - 1 >= 0
        assert Counter(e)[s.maxval] >= 1
