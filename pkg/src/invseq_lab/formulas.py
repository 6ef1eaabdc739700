"""Closed-form counts, all in exact integer arithmetic."""

from __future__ import annotations

import math
from functools import lru_cache


def binom(n: int, k: int) -> int:
    """C(n, k), taken as 0 whenever k < 0, k > n or n < 0."""
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"{num} is not divisible by {den}")
    return q


@lru_cache(maxsize=None)
def b_closed(n: int, m: int) -> int:
    """[x^n y^m] B(x, y).

    For n >= 1, m >= 1 this is (1/m) C(m, n-m) sum_j C(n-m, j) C(n+m-j, 2m+j+1).
    b_0^(m) is 1 only for m = 0, and B(x, 0) = 1 gives 0 for n >= 1, m = 0.
    """
    if n < 0 or m < 0:
        raise ValueError("n and m must be nonnegative")
    if n == 0:
        return int(m == 0)
    if m == 0:
        return 0
    total = sum(binom(n - m, j) * binom(n + m - j, 2 * m + j + 1) for j in range(n - m + 1))
    return exact_div(binom(m, n - m) * total, m)


def count_dist_closed(n: int, m: int) -> int:
    """Number of (102,000)-avoiding inversion sequences of length n with m
    distinct entries, via b_{n+1}^(m) + sum_{k,l} b_k^(l) b_{n-k}^(m-l)."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    conv = sum(b_closed(k, l) * b_closed(n - k, m - l) for k in range(1, n + 1) for l in range(m + 1))
    return b_closed(n + 1, m) + conv


def fuss3(m: int) -> int:
    """3-Fuss-Catalan number C(4m, m) / (3m + 1)."""
    return exact_div(binom(4 * m, m), 3 * m + 1)


def dist_rank_count(m: int, t: int) -> int:
    """(3t+1)/(3m+1) C(4m-t, m-t): avoiders with dist m and rank t."""
    if not 0 <= t <= m:
        raise ValueError("need 0 <= t <= m")
    return exact_div((3 * t + 1) * binom(4 * m - t, m - t), 3 * m + 1)


def dist_rank_count_lagrange(m: int, t: int) -> int:
    """Same count in the form (3t+1)/(4m-t+1) C(4m-t+1, m-t) = [y^(m-t)] b^(3t+1)."""
    if not 0 <= t <= m:
        raise ValueError("need 0 <= t <= m")
    return exact_div((3 * t + 1) * binom(4 * m - t + 1, m - t), 4 * m - t + 1)


def dist_total(m: int) -> int:
    """C(4m+2, m) / (2m+1): avoiders with m distinct entries, any length."""
    return exact_div(binom(4 * m + 2, m), 2 * m + 1)
