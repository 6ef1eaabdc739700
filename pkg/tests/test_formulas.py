from math import comb

import pytest

from invseq_lab.formulas import (
    b_closed,
    binom,
    count_dist_closed,
    dist_rank_count,
    dist_rank_count_lagrange,
    dist_total,
    exact_div,
    fuss3,
)
from invseq_lab.invseq import P000, P102, count_table
from invseq_lab.series import solve_B


def test_binom():
    assert binom(8, 2) == 28
    assert binom(2, 5) == 0
    assert binom(4, -1) == 0
    assert binom(-1, 0) == 0


def test_exact_div():
    assert exact_div(28, 7) == 4
    with pytest.raises(ArithmeticError):
        exact_div(28, 5)


def test_b_closed_examples():
    assert b_closed(2, 1) == 1
    assert b_closed(4, 2) == 3
    assert b_closed(0, 0) == 1
    assert b_closed(0, 3) == 0
    assert b_closed(5, 0) == 0
    assert sum(b_closed(n, 2) for n in range(2, 5)) == 4


def test_b_closed_matches_fixed_point():
    B = solve_B(17, 8)
    for n in range(18):
        for m in range(9):
            assert b_closed(n, m) == B[n, m, 0], (n, m)


@pytest.mark.parametrize("m", range(13))
def test_b_row_sums_are_fuss_catalan(m):
    assert sum(b_closed(n, m) for n in range(m, 2 * m + 1)) == comb(4 * m, m) // (3 * m + 1)


def test_count_dist_examples():
    assert count_dist_closed(5, 3) == 23
    assert count_dist_closed(8, 6) == 400
    assert count_dist_closed(1, 1) == 1


def test_count_dist_matches_brute_force():
    table = count_table(11, [P102, P000])
    for n in range(1, 12):
        for m in range(1, n + 1):
            assert count_dist_closed(n, m) == table.get(n=n, m=m), (n, m)


def test_fuss_family_examples():
    assert fuss3(3) == 22
    assert fuss3(2) == 4
    assert dist_rank_count(2, 1) == 4
    assert sum(dist_rank_count(2, t) for t in range(3)) == 9 == dist_total(2)
    assert dist_total(1) == 2


@pytest.mark.parametrize("m", range(21))
def test_fuss_family_identities(m):
    assert sum(dist_rank_count(m, t) for t in range(m + 1)) == dist_total(m)
    assert dist_rank_count(m, 0) == fuss3(m)
    for t in range(m + 1):
        assert dist_rank_count(m, t) == dist_rank_count_lagrange(m, t)


@pytest.mark.parametrize("m", range(1, 9))
def test_column_sums_are_dist_total(m):
    assert sum(count_dist_closed(n, m) for n in range(m, 2 * m + 1)) == dist_total(m)


def test_dist_rank_matches_brute_force():
    table = count_table(10, [P102, P000])
    for m in range(6):
        for t in range(m + 1):
            assert dist_rank_count(m, t) == table.get(m=m, t=t)
