"""Inversion sequences, pattern containment and pruned enumeration.

An inversion sequence of length n is a tuple ``(e_1, ..., e_n)`` with
``0 <= e_j <= j - 1``.  Patterns are reduced words such as ``(1, 0, 2)``.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

Word = tuple[int, ...]

P102: Word = (1, 0, 2)
P000: Word = (0, 0, 0)


def reduction(word: Sequence[int]) -> Word:
    """Relabel ``word`` so its i-th smallest distinct value becomes i - 1."""
    if len(word) == 0:
        raise ValueError("empty word")
    ranks = {v: i for i, v in enumerate(sorted(set(word)))}
    return tuple(ranks[v] for v in word)


def is_reduced(word: Sequence[int]) -> bool:
    return len(word) > 0 and tuple(word) == reduction(word)


def parse_pattern(text: str | Sequence[int]) -> Word:
    """Parse ``"102"`` or ``"1,0,2"`` style input into a reduced word.

    Non-reduced words are rejected rather than silently reduced.
    """
    if isinstance(text, str):
        text = text.strip()
        parts = text.split(",") if "," in text or " " in text.strip() else list(text)
        parts = [p for chunk in parts for p in chunk.split()]
        try:
            word = tuple(int(p) for p in parts)
        except ValueError:
            raise ValueError(f"invalid pattern word: {text!r}") from None
    else:
        word = tuple(int(v) for v in text)
    if not word or any(v < 0 for v in word):
        raise ValueError(f"invalid pattern word: {text!r}")
    if not is_reduced(word):
        raise ValueError(f"pattern {word} is not a reduced word")
    return word


def parse_patterns(text: str) -> tuple[Word, ...]:
    """Parse a comma separated list of digit words, e.g. ``"102,000"``."""
    return tuple(parse_pattern(p) for p in text.split(",") if p.strip())


def is_inversion_sequence(e: Sequence[int]) -> bool:
    return all(0 <= v <= j for j, v in enumerate(e))


def validate(e: Sequence[int]) -> Word:
    e = tuple(int(v) for v in e)
    if not is_inversion_sequence(e):
        raise ValueError(f"{e} is not an inversion sequence")
    return e


# -- containment -----------------------------------------------------------

def _sign(a: int, b: int) -> int:
    return (a > b) - (a < b)


class _Matcher:
    """Occurrence test for one pattern, restricted to occurrences ending at
    the last position of a sequence.

    The first pattern letter is resolved against a bitmask of the values
    present before the second chosen index, so length-3 patterns cost O(n)
    per test.
    """

    def __init__(self, w: Word):
        self.w = w
        self.k = len(w)
        self.rel = [[_sign(a, b) for b in w] for a in w]

    def _first_letter_mask(self, vals: dict[int, int]) -> int:
        lo, hi = 0, None
        for q, val in vals.items():
            r = self.rel[0][q]
            if r == 0:
                if val < lo or (hi is not None and val > hi):
                    return 0
                lo = hi = val
            elif r < 0:
                hi = val - 1 if hi is None else min(hi, val - 1)
            else:
                lo = max(lo, val + 1)
        if hi is None:
            return -1 << lo
        if hi < lo:
            return 0
        return ((1 << (hi + 1)) - 1) & (-1 << lo)

    def ends_at_last(self, seq: Sequence[int], masks: Sequence[int]) -> bool:
        """``masks[i]`` is the OR of ``1 << seq[j]`` over ``j < i``."""
        k = self.k
        j = len(seq) - 1
        if j + 1 < k:
            return False
        if k == 1:
            return True
        vals = {k - 1: seq[j]}
        return self._search(seq, masks, k - 2, j, vals)

    def _search(self, seq, masks, p, upper, vals) -> bool:
        # choose an index < upper for pattern position p (p >= 1), or test the
        # first letter against the prefix mask when p == 0
        if p == 0:
            return bool(masks[upper] & self._first_letter_mask(vals))
        rel_p = self.rel[p]
        for i in range(upper - 1, p - 1, -1):
            v = seq[i]
            if all(_sign(v, val) == rel_p[q] for q, val in vals.items()):
                vals[p] = v
                if self._search(seq, masks, p - 1, i, vals):
                    del vals[p]
                    return True
                del vals[p]
        return False


def _prefix_masks(e: Sequence[int]) -> list[int]:
    masks = [0]
    for v in e:
        masks.append(masks[-1] | (1 << v))
    return masks


def contains(e: Sequence[int], w: Sequence[int]) -> bool:
    """True iff some subsequence of ``e`` reduces to the pattern ``w``."""
    w = tuple(w)
    if len(e) < len(w):
        return False
    m = _Matcher(w)
    masks = _prefix_masks(e)
    return any(m.ends_at_last(e[: j + 1], masks) for j in range(len(w) - 1, len(e)))


def avoids(e: Sequence[int], patterns: Iterable[Sequence[int]]) -> bool:
    return not any(contains(e, w) for w in patterns)


# -- statistics ------------------------------------------------------------

@dataclass(frozen=True)
class StatRecord:
    dist: int
    maxval: int
    prmx: int
    rank: Optional[int]


def prmx(e: Sequence[int]) -> int:
    """Position (1-based) of the first descent, with sentinel e_{n+1} = -1."""
    for p in range(len(e)):
        nxt = e[p + 1] if p + 1 < len(e) else -1
        if e[p] > nxt:
            return p + 1
    return 0


def stats(e: Sequence[int], with_rank: bool = True) -> StatRecord:
    """dist, max, prmx and (optionally) rank of ``e``.

    The empty sequence gets dist = rank = 0, max = -1 and prmx = 0.  rank is
    only defined for 102-avoiding sequences.
    """
    e = tuple(e)
    if not e:
        return StatRecord(dist=0, maxval=-1, prmx=0, rank=0 if with_rank else None)
    p = prmx(e)
    mx = max(e)
    rank = None
    if with_rank:
        if contains(e, P102):
            raise ValueError("rank undefined")
        rank = p - mx - 1
    return StatRecord(dist=len(set(e)), maxval=mx, prmx=p, rank=rank)


def rank(e: Sequence[int]) -> int:
    return stats(e).rank


# -- enumeration -----------------------------------------------------------

def _check_patterns(patterns: Iterable[Sequence[int]]) -> tuple[Word, ...]:
    out = []
    for w in patterns:
        w = tuple(w)
        if not is_reduced(w):
            raise ValueError(f"pattern {w} is not a reduced word")
        out.append(w)
    return tuple(sorted(set(out)))


def enumerate_avoiding(
    n: int,
    patterns: Iterable[Sequence[int]],
    dist: Optional[int] = None,
    rank: Optional[int] = None,
    prefix: Sequence[int] = (),
) -> Iterator[Word]:
    """Yield the inversion sequences of length ``n`` avoiding every pattern,
    in lexicographic order.

    Prefixes that already contain a pattern are pruned; only occurrences
    ending at the newly placed entry are tested.  ``dist`` additionally
    prunes prefixes that can no longer reach the requested value.  A
    ``rank`` filter requires 102 among the patterns.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    pats = _check_patterns(patterns)
    if rank is not None and P102 not in pats:
        raise ValueError("rank filter requires the pattern 102")
    matchers = [_Matcher(w) for w in pats]

    seq = list(prefix)
    if not is_inversion_sequence(seq) or len(seq) > n:
        raise ValueError(f"invalid prefix {tuple(prefix)}")
    masks = _prefix_masks(seq)
    counts = Counter(seq)
    for j in range(len(seq)):
        if any(m.ends_at_last(seq[: j + 1], masks) for m in matchers):
            return

    def accept() -> bool:
        if dist is not None and len(counts) != dist:
            return False
        if rank is not None:
            return (prmx(seq) - max(seq) - 1 if seq else 0) == rank
        return True

    def rec() -> Iterator[Word]:
        j = len(seq)
        if j == n:
            if accept():
                yield tuple(seq)
            return
        remaining = n - j - 1
        for v in range(j + 1):
            new_value = counts[v] == 0
            if dist is not None:
                d = len(counts) + new_value
                if d > dist or d + remaining < dist:
                    continue
            seq.append(v)
            masks.append(masks[-1] | (1 << v))
            if not any(m.ends_at_last(seq, masks) for m in matchers):
                counts[v] += 1
                yield from rec()
                counts[v] -= 1
                if not counts[v]:
                    del counts[v]
            seq.pop()
            masks.pop()

    yield from rec()


@dataclass
class CountTable:
    """Exact counts keyed by tuples over named axes, e.g. ``("n", "m", "t")``.

    An axis value of ``None`` in a key means the statistic is undefined for
    that entry (rank without 102-avoidance).
    """

    axes: tuple[str, ...]
    counts: dict[tuple, int] = field(default_factory=dict)

    def add(self, key: tuple, amount: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + amount

    def get(self, **fixed) -> int:
        """Sum of counts over entries matching the given axis values."""
        unknown = set(fixed) - set(self.axes)
        if unknown:
            raise KeyError(f"unknown axes {sorted(unknown)}")
        idx = [(self.axes.index(a), v) for a, v in fixed.items()]
        return sum(c for key, c in self.counts.items() if all(key[i] == v for i, v in idx))

    def marginal(self, *keep: str) -> "CountTable":
        idx = [self.axes.index(a) for a in keep]
        out = CountTable(tuple(keep))
        for key, c in self.counts.items():
            out.add(tuple(key[i] for i in idx), c)
        return out

    def items(self):
        return sorted(self.counts.items(), key=lambda kv: tuple(-1 if v is None else v for v in kv[0]))

    def to_records(self) -> list[dict]:
        return [dict(zip(self.axes, key), count=str(c)) for key, c in self.items()]

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @classmethod
    def from_records(cls, records: Sequence[dict], axes: Sequence[str] = ("n", "m", "t")) -> "CountTable":
        out = cls(tuple(axes))
        for r in records:
            out.add(tuple(r.get(a) for a in axes), int(r["count"]))
        return out


def _count_length(args) -> list[tuple[tuple, int]]:
    n, pats, with_rank = args
    c: Counter = Counter()
    for e in enumerate_avoiding(n, pats):
        r = (prmx(e) - max(e) - 1 if e else 0) if with_rank else None
        c[(n, len(set(e)), r)] += 1
    return sorted(c.items(), key=lambda kv: (kv[0][1], -1 if kv[0][2] is None else kv[0][2]))


def count_table(
    n_max: int, patterns: Iterable[Sequence[int]], workers: int = 1, n_min: int = 0
) -> CountTable:
    """Exact counts of avoiders for every (n, dist, rank) with n_min <= n <= n_max.

    The rank axis is None unless 102 is among the patterns.  ``workers > 1``
    distributes lengths over processes; the result is identical either way.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    pats = _check_patterns(patterns)
    with_rank = P102 in pats
    jobs = [(n, pats, with_rank) for n in range(n_min, n_max + 1)]
    if workers > 1 and n_max > 6:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_count_length, jobs))
    else:
        parts = [_count_length(j) for j in jobs]
    table = CountTable(("n", "m", "t"))
    for part in parts:
        for key, c in part:
            table.add(key, c)
    return table


def remark_dedup(e: Sequence[int]) -> Word:
    """Map a rank-0 (102,000)-avoider to one whose maximum occurs once.

    A doubled maximum is removed at position prmx(e); other sequences are
    returned unchanged.
    """
    e = tuple(e)
    st = stats(e)
    if st.rank != 0:
        raise ValueError("remark map requires rank 0")
    if not e:
        return e
    occurrences = e.count(st.maxval)
    if occurrences == 1:
        return e
    if occurrences == 2:
        q = st.prmx
        return e[: q - 1] + e[q:]
    raise AssertionError(f"maximum of {e} occurs {occurrences} times; 000 is not avoided")


def sequence_to_json(e: Sequence[int]) -> str:
    return json.dumps(list(e))


def sequence_from_json(text: str) -> Word:
    data = json.loads(text)
    if not isinstance(data, list) or not all(isinstance(v, int) for v in data):
        raise ValueError("expected a JSON array of integers")
    return validate(data)
