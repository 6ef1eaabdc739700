"""Cross-route reconciliation of every count, identity and polynomial.

Each check compares independent computations (closed form, series
coefficients, brute-force enumeration, bundled OEIS data) and records a
pass/fail entry.  Reports are deterministic apart from timings.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from . import formulas, oeis
from .invseq import P000, P102, count_table, enumerate_avoiding, remark_dedup, stats
from .lattice import enumerate_paths, eta, eta_inv
from .series import (
    MINPOLYS,
    TruncatedSeries,
    build,
    minpoly_residual,
    rank_gf_coeffs,
    solve_B,
    solve_b,
    specialize,
)

# |IS_n^(m)(102,000)| for n = 1..16 (rows) and m = 1..8 (columns)
COUNTS_BY_DIST = {
    1: (1, 0, 0, 0, 0, 0, 0, 0),
    2: (1, 1, 0, 0, 0, 0, 0, 0),
    3: (0, 4, 1, 0, 0, 0, 0, 0),
    4: (0, 4, 9, 1, 0, 0, 0, 0),
    5: (0, 0, 23, 16, 1, 0, 0, 0),
    6: (0, 0, 19, 76, 25, 1, 0, 0),
    7: (0, 0, 0, 146, 190, 36, 1, 0),
    8: (0, 0, 0, 101, 630, 400, 49, 1),
    9: (0, 0, 0, 0, 972, 2010, 749, 64),
    10: (0, 0, 0, 0, 576, 5160, 5285, 1288),
    11: (0, 0, 0, 0, 0, 6658, 19943, 12124),
    12: (0, 0, 0, 0, 0, 3445, 41895, 62650),
    13: (0, 0, 0, 0, 0, 0, 46475, 189784),
    14: (0, 0, 0, 0, 0, 0, 21323, 337876),
    15: (0, 0, 0, 0, 0, 0, 0, 328786),
    16: (0, 0, 0, 0, 0, 0, 0, 135439),
}
# |IS^(m)(102,000)| summed over all lengths, m = 1..8
COUNT_TOTALS = (2, 9, 52, 340, 2394, 17710, 135720, 1068012)

PATTERNS = (P102, P000)


@dataclass
class Check:
    name: str
    ref: str
    status: str
    lhs_summary: str
    rhs_summary: str
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.checks.extend(other.checks)
        return self

    def to_dict(self, timings: bool = True) -> dict:
        checks = []
        for c in self.checks:
            d = asdict(c)
            if not timings:
                d.pop("elapsed")
            checks.append(d)
        return {"status": "pass" if self.ok else "fail", "checks": checks}

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2)

    def lines(self) -> list[str]:
        return [f"{c.status.upper():4}  {c.name}  [{c.ref}]  {c.lhs_summary} | {c.rhs_summary}" for c in self.checks]


def _summ(values, limit: int = 12) -> str:
    values = list(values)
    head = ", ".join(str(v) for v in values[:limit])
    return f"[{head}{', ...' if len(values) > limit else ''}] ({len(values)} terms)"


def _run(report: VerificationReport, name: str, ref: str, fn: Callable[[], tuple[bool, str, str]]) -> None:
    start = time.perf_counter()
    try:
        ok, lhs, rhs = fn()
    except Exception as exc:  # a crashing route is a failed check
        ok, lhs, rhs = False, f"error: {type(exc).__name__}: {exc}", "-"
    report.checks.append(Check(name, ref, "pass" if ok else "fail", lhs, rhs, round(time.perf_counter() - start, 4)))


def _diff(lhs: dict, rhs: dict) -> Optional[tuple]:
    for key in sorted(set(lhs) | set(rhs), key=lambda k: tuple(-1 if v is None else v for v in k)):
        if lhs.get(key, 0) != rhs.get(key, 0):
            return key, lhs.get(key, 0), rhs.get(key, 0)
    return None


def _mismatch_text(d) -> str:
    return "all equal" if d is None else f"first mismatch at {d[0]}: {d[1]} vs {d[2]}"


# -- table of counts by length and dist --------------------------------------

def verify_table1(n_max: int = 16, brute_max: int = 11, workers: int = 1) -> VerificationReport:
    """Every (n, m) cell by closed form, by series coefficients and, for
    n <= brute_max, by enumeration; all must equal the embedded table."""
    report = VerificationReport()
    n_max = min(n_max, 16)
    brute_max = min(brute_max, n_max)
    # y and z bounds of 11 cover every dist and rank seen by enumeration
    series = build((16, 11, 11))
    E = series["E"]
    brute = count_table(brute_max, PATTERNS, workers=workers) if brute_max >= 1 else None

    for n in range(1, n_max + 1):
        def row(n=n):
            fixture = list(COUNTS_BY_DIST[n])
            closed = [formulas.count_dist_closed(n, m) for m in range(1, 9)]
            coeffs = [sum(E[n, m, t] for t in range(9)) for m in range(1, 9)]
            routes = [closed, coeffs]
            names = "closed, series"
            if n <= brute_max:
                routes.append([brute.get(n=n, m=m) for m in range(1, 9)])
                names += ", enumeration"
            ok = all(r == fixture for r in routes)
            return ok, f"{names}: " + " / ".join(_summ(r, 8) for r in routes), f"table: {_summ(fixture, 8)}"

        _run(report, f"table row n={n}", "counts by length and dist", row)

    def totals():
        closed = [formulas.dist_total(m) for m in range(1, 9)]
        g = series["g"]
        coeffs = [g[0, m, 0] for m in range(1, 9)]
        sums = [sum(formulas.count_dist_closed(n, m) for n in range(m, 2 * m + 1)) for m in range(1, 9)]
        ok = closed == coeffs == sums == list(COUNT_TOTALS)
        return ok, f"closed/[y^m]g/column sums: {_summ(closed, 8)} {_summ(coeffs, 8)} {_summ(sums, 8)}", f"table: {_summ(COUNT_TOTALS, 8)}"

    _run(report, "table last row", "avoiders with dist m, all lengths", totals)

    if brute is not None:
        def concord():
            lhs = {k: v for k, v in brute.counts.items()}
            rhs = {}
            for n in range(brute_max + 1):
                for m in range(0, n + 1):
                    for t in range(0, m + 1):
                        c = E[n, m, t]
                        if c:
                            rhs[(n, m, t)] = c
            d = _diff(lhs, rhs)
            return d is None, f"enumeration: {sum(lhs.values())} sequences in {len(lhs)} cells", _mismatch_text(d)

        _run(report, f"enumeration vs [x^n y^m z^t]E, n<={brute_max}", "trivariate generating function", concord)
    return report


# -- bijections ----------------------------------------------------------------

def verify_bijections(
    n_max: int = 9,
    walk_max: int = 7,
    round_trip_max: int = 5,
    b_max: int = 8,
    dedup_max: int = 6,
) -> VerificationReport:
    report = VerificationReport()

    def round_trip():
        total = 0
        for n in range(round_trip_max + 1):
            walks = set()
            for q in enumerate_paths("labeled-f", n):
                r = eta(q)
                if (r.semilength, r.height) != (q.semilength, q.height):
                    return False, f"eta changes stats of {q}", "-"
                if eta_inv(r) != q:
                    return False, f"eta_inv(eta(q)) != q for {q}", "-"
                walks.add(r)
                total += 1
            for r in enumerate_paths("weighted-h", n):
                if eta(eta_inv(r)) != r:
                    return False, f"eta(eta_inv(r)) != r for {r}", "-"
                if r not in walks:
                    return False, f"walk {r} is not hit by eta", "-"
        return True, f"{total} labeled F-paths, semilength <= {round_trip_max}", "round trips are identities"

    _run(report, "eta round trip", "substitution of long steps", round_trip)

    def walks_vs_is():
        lhs, rhs = {}, {}
        for n in range(walk_max + 1):
            for r in enumerate_paths("weighted-h", n):
                lhs[(n, r.height)] = lhs.get((n, r.height), 0) + 1
            for e in enumerate_avoiding(n + 1, [P102]):
                t = stats(e).rank
                rhs[(n, t)] = rhs.get((n, t), 0) + 1
        d = _diff(lhs, rhs)
        return d is None, f"|WH_(n,t)|, n <= {walk_max}: {sum(lhs.values())} walks", _mismatch_text(d)

    _run(report, "weighted H-walks vs 102-avoiders", "walks of semilength n, height t <-> IS_(n+1) rank t", walks_vs_is)

    def simple_vs_is():
        lhs, rhs = Counter(), Counter()
        for n in range(n_max + 1):
            for p in enumerate_paths("simple-h", n):
                lhs[(n, p.height, p.ud)] += 1
            for e in enumerate_avoiding(n + 1, PATTERNS):
                st = stats(e)
                rhs[(n, st.rank, st.dist - 1)] += 1
        d = _diff(dict(lhs), dict(rhs))
        return d is None, f"|H_(n,t)^(m)|, n <= {n_max}: {sum(lhs.values())} paths", _mismatch_text(d)

    _run(report, "simple H-paths vs (102,000)-avoiders", "height t, ud m <-> rank t, dist m+1", simple_vs_is)

    def image():
        count = 0
        for n in range(min(n_max, 7) + 1):
            simple = set(enumerate_paths("simple-h", n))
            hit = set()
            for q in enumerate_paths("labeled-f", n):
                steps = q.steps
                kinds = ["north" if (s.dx, s.dy) == (0, 1) else "other" for s in steps]
                good = all(s.semilength <= 2 for s in steps)
                good = good and not any(a == b == "north" for a, b in zip(kinds, kinds[1:]))
                good = good and not any(a.is_long and kinds[i + 1] == "north" for i, a in enumerate(steps[:-1]))
                if good:
                    r = eta(q)
                    if not r.is_simple():
                        return False, f"eta({q}) is not simple", "-"
                    hit.add(r.steps)
                    count += 1
            if hit != {p.steps for p in simple}:
                return False, f"semilength {n}: image has {len(hit)} paths", f"{len(simple)} simple H-paths"
        return True, f"{count} restricted labeled F-paths", "image is exactly the simple H-paths"

    _run(report, "eta image of restricted F-paths", "simple H-paths as an eta image", image)

    def b_class():
        lhs, rhs = {}, {}
        for n in range(1, b_max + 1):
            for p in enumerate_paths("simple-h", n, cls="B"):
                lhs[(n, p.ud)] = lhs.get((n, p.ud), 0) + 1
            for m in range(0, n + 1):
                v = formulas.b_closed(n, m)
                if v:
                    rhs[(n, m)] = v
        d = _diff(lhs, rhs)
        return d is None, f"|B_n^(m)|, 1 <= n <= {b_max}: {sum(lhs.values())} paths", _mismatch_text(d)

    _run(report, "B-class paths vs closed form", "simple H-paths ending north", b_class)

    def dedup():
        for m in range(dedup_max + 1):
            src, dst = [], set()
            for n in range(m, 2 * m + 1):
                for e in enumerate_avoiding(n, PATTERNS, dist=m, rank=0):
                    src.append(e)
                for e in enumerate_avoiding(n, PATTERNS, dist=m):
                    if e.count(max(e, default=-1)) == 1 or not e:
                        dst.add(e)
            image = [remark_dedup(e) for e in src]
            if len(set(image)) != len(image):
                return False, f"m={m}: map is not injective", "-"
            if set(image) != dst:
                return False, f"m={m}: image has {len(set(image))} sequences", f"{len(dst)} with unique maximum"
            if len(src) != formulas.fuss3(m):
                return False, f"m={m}: {len(src)} rank-0 sequences", f"fuss3 = {formulas.fuss3(m)}"
        return True, f"dist m <= {dedup_max}", "bijection onto unique-maximum sequences"

    _run(report, "rank-0 to unique-maximum map", "deleting the doubled maximum", dedup)
    return report


# -- minimal polynomials ---------------------------------------------------

def verify_minpolys(bounds=(14, 8, 8)) -> VerificationReport:
    report = VerificationReport()
    E = build(bounds)["E"]
    for name, (make, subs) in MINPOLYS.items():
        def check(make=make, subs=subs):
            s = specialize(E, **subs)
            res = minpoly_residual(make(s.bounds), s)
            nz = sorted(res.coeffs.items())[:3]
            return res.is_zero(), f"residual at bounds {s.bounds}", "identically zero" if not nz else f"nonzero terms {nz}"

        _run(report, f"minimal polynomial of {name}", "algebraic relation for " + name, check)
    return report


# -- closed-form and series identities ---------------------------------------

def verify_identities(m_max: int = 20, b_sum_max: int = 12, bounds=(17, 9, 9)) -> VerificationReport:
    report = VerificationReport()
    F = formulas

    def fuss_sum():
        lhs = [sum(F.b_closed(n, m) for n in range(m, 2 * m + 1)) for m in range(b_sum_max + 1)]
        rhs = [F.fuss3(m) for m in range(b_sum_max + 1)]
        return lhs == rhs, f"sum_n b_n^(m): {_summ(lhs)}", f"fuss3: {_summ(rhs)}"

    _run(report, "sum of b over n is 3-Fuss-Catalan", "[y^m] b(y)", fuss_sum)

    def rank_sum():
        lhs = [sum(F.dist_rank_count(m, t) for t in range(m + 1)) for m in range(m_max + 1)]
        rhs = [F.dist_total(m) for m in range(m_max + 1)]
        return lhs == rhs, _summ(lhs), _summ(rhs)

    _run(report, "rank counts sum to dist totals", "sum over rank", rank_sum)

    def rank0():
        lhs = [F.dist_rank_count(m, 0) for m in range(m_max + 1)]
        rhs = [F.fuss3(m) for m in range(m_max + 1)]
        return lhs == rhs, _summ(lhs), _summ(rhs)

    _run(report, "rank 0 count is 3-Fuss-Catalan", "rank-0 specialization", rank0)

    def two_forms():
        lhs = [F.dist_rank_count(m, t) for m in range(m_max + 1) for t in range(m + 1)]
        rhs = [F.dist_rank_count_lagrange(m, t) for m in range(m_max + 1) for t in range(m + 1)]
        return lhs == rhs, _summ(lhs), _summ(rhs)

    _run(report, "two closed forms of the rank count agree", "Lagrange inversion form", two_forms)

    def rank_series():
        tab = rank_gf_coeffs(min(m_max, 12))
        bad = [(k, v) for k, v in tab.items() if v != F.dist_rank_count(*k)]
        return not bad, f"[y^m z^t]G two ways, m <= {min(m_max, 12)}", "equals closed form" if not bad else f"mismatch {bad[:3]}"

    _run(report, "G(y,z) coefficients vs closed form", "G = b/(1 - y b^3 z)", rank_series)

    nx, ny, nz = bounds
    S = build(bounds)
    B, A, E, D = S["B"], S["A"], S["E"], S["D"]

    def b_vs_series():
        Bs = solve_B(nx, ny)
        bad = [(n, m) for n in range(nx + 1) for m in range(ny + 1) if Bs[n, m, 0] != F.b_closed(n, m)]
        return not bad, f"[x^n y^m]B, n <= {nx}, m <= {ny}", "equals closed form" if not bad else f"mismatch at {bad[:3]}"

    _run(report, "B coefficients vs closed form", "coefficients of B", b_vs_series)

    Ab = A.truncate((nx, ny, 0))

    def geometric():
        xa = Ab.shift((1, 0, 0)).truncate(B.bounds)
        one_minus = B * (1 - xa)
        total = TruncatedSeries.constant(1, B.bounds)
        term = TruncatedSeries.constant(1, B.bounds)
        for _ in range(nx):
            term = term * xa
            total = total + term
        ok = (one_minus - 1).is_zero() and (total - B).is_zero()
        return ok, "B(1 - xA) and sum_t (xA)^t", "1 and B"

    _run(report, "B = 1/(1 - xA)", "geometric series in xA", geometric)

    def e_equals_d():
        return E.agrees_with(D), f"E at {E.bounds}", f"D0/(1 - xzA) at {D.bounds}"

    _run(report, "E equals the z-refined D-series", "E = D", e_equals_d)

    def e_z1():
        E1 = specialize(E, z=1)
        bb = B.truncate((nx, E1.bounds[1], 0))
        X = TruncatedSeries.variables(bb.bounds)[0]
        rhs = ((bb - 1) * (X * bb + 1)).div_exact_by_x_power(1) + 1
        return E1.agrees_with(rhs), f"E(x,y,1) at {E1.bounds}", "x^-1 (B-1)(xB+1) + 1"

    _run(report, "E(x,y,1) in terms of B", "z = 1 specialization", e_z1)

    def b_quartic():
        b = S["b"]
        _, Y, _ = TruncatedSeries.variables(b.bounds)
        ok = (b - (1 + Y * b ** 4)).is_zero() and b.agrees_with(solve_b(b.bounds[1]))
        return ok, f"b(y) = B(1,y) at {b.bounds}", "1 + y b^4"

    _run(report, "b = 1 + y b^4", "x = 1 specialization of B", b_quartic)

    def g_square():
        g, b = S["g"], S["b"]
        return g.agrees_with(b * b), "g(y) = E(1,y,1)", "b(y)^2"

    _run(report, "g = b^2", "x = z = 1 specialization", g_square)

    def nonneg():
        bad = [k for k, s in S.items() if any(c < 0 for c in s.coeffs.values())]
        return not bad, "all derived series", "nonnegative" if not bad else f"negative coefficients in {bad}"

    _run(report, "derived series count objects", "nonnegative coefficients", nonneg)
    return report


# -- OEIS ------------------------------------------------------------------------

def _full_rows(n_terms: int) -> int:
    rows = 0
    while (rows + 1) * (rows + 2) // 2 <= n_terms:
        rows += 1
    return rows


def verify_oeis(offline: bool = True, terms: int = 12, rows: Optional[int] = None) -> VerificationReport:
    """Compare closed forms with b-files.  ``rows=None`` checks every
    complete row of the A355174 triangle present in the b-file."""
    report = VerificationReport()
    F = formulas
    cases = [
        ("A002293", lambda seq: [F.fuss3(m) for m in range(terms)], "by-index from 0"),
        ("A069271", lambda seq: [F.dist_total(m) for m in range(terms)], "by-index from 0"),
        ("A355174",
         lambda seq: oeis.triangle_rows(rows if rows is not None else _full_rows(len(seq.entries)), F.dist_rank_count),
         "rows m >= 0, t = 0..m ascending"),
    ]
    for seq_id, produce, alignment in cases:
        def check(seq_id=seq_id, produce=produce, alignment=alignment):
            seq = oeis.fetch(seq_id, offline=offline)
            cmp = oeis.compare(seq, produce(seq), alignment=alignment)
            detail = f"{cmp.matched}/{cmp.produced} terms match ({alignment})"
            return cmp.passed, detail, "ok" if cmp.passed else f"mismatch {cmp.mismatch}"

        _run(report, f"OEIS {seq_id}", f"b-file {seq_id}", check)
    return report


SUITES = {
    "table1": verify_table1,
    "bijections": verify_bijections,
    "minpoly": verify_minpolys,
    "identities": verify_identities,
    "oeis": verify_oeis,
}


def verify_all(offline: bool = True, workers: int = 1) -> VerificationReport:
    report = VerificationReport()
    report.extend(verify_table1(workers=workers))
    report.extend(verify_bijections())
    report.extend(verify_minpolys())
    report.extend(verify_identities())
    report.extend(verify_oeis(offline=offline))
    return report
