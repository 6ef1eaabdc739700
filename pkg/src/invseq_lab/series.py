"""Exact truncated power series in x, y, z with integer coefficients.

A :class:`TruncatedSeries` is known exactly for exponents up to its
per-variable bounds.  Products and sums are truncated to the smaller bounds
of the operands, and exact division by a power of x lowers the x bound, so
every stored coefficient is always correct.  Coefficients live in a dense
numpy array of Python ints.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .invseq import CountTable

Bounds = tuple[int, int, int]
DEFAULT_BOUNDS: Bounds = (17, 9, 9)


class InsufficientTruncation(ValueError):
    pass


def _zeros(bounds: Bounds) -> np.ndarray:
    arr = np.empty(tuple(b + 1 for b in bounds), dtype=object)
    arr.fill(0)
    return arr


class TruncatedSeries:
    __slots__ = ("bounds", "_c")

    def __init__(self, bounds: Sequence[int], coeffs: Union[Mapping, np.ndarray, None] = None):
        bounds = tuple(int(b) for b in bounds)
        if len(bounds) != 3 or min(bounds) < 0:
            raise ValueError(f"bad bounds {bounds}")
        self.bounds: Bounds = bounds
        if isinstance(coeffs, np.ndarray):
            self._c = _zeros(bounds)
            src = coeffs[: bounds[0] + 1, : bounds[1] + 1, : bounds[2] + 1]
            self._c[: src.shape[0], : src.shape[1], : src.shape[2]] = src
        else:
            self._c = _zeros(bounds)
            for (i, j, k), c in (coeffs or {}).items():
                if i <= bounds[0] and j <= bounds[1] and k <= bounds[2] and c:
                    self._c[i, j, k] += int(c)

    # -- construction -----------------------------------------------------

    @classmethod
    def constant(cls, c: int, bounds: Sequence[int]) -> "TruncatedSeries":
        return cls(bounds, {(0, 0, 0): c})

    @classmethod
    def monomial(cls, exps: Sequence[int], bounds: Sequence[int], c: int = 1) -> "TruncatedSeries":
        return cls(bounds, {tuple(exps): c})

    @classmethod
    def variables(cls, bounds: Sequence[int]):
        """The series x, y, z at the given bounds."""
        return tuple(cls.monomial(e, bounds) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    # -- access -----------------------------------------------------------

    def __getitem__(self, exps) -> int:
        i, j, k = exps
        if i > self.bounds[0] or j > self.bounds[1] or k > self.bounds[2]:
            raise InsufficientTruncation(f"coefficient {exps} lies outside bounds {self.bounds}")
        if min(exps) < 0:
            return 0
        return int(self._c[i, j, k])

    @property
    def coeffs(self) -> dict[tuple[int, int, int], int]:
        """Nonzero coefficients only."""
        return {tuple(int(v) for v in idx): int(self._c[idx]) for idx in zip(*np.nonzero(self._c != 0))}

    def is_zero(self) -> bool:
        return not np.any(self._c != 0)

    def truncate(self, bounds: Sequence[int]) -> "TruncatedSeries":
        b = tuple(min(a, c) for a, c in zip(self.bounds, bounds))
        return TruncatedSeries(b, self._c)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, np.integer)):
            return TruncatedSeries.constant(int(other), self.bounds)
        return NotImplemented

    def _common(self, other: "TruncatedSeries") -> Bounds:
        return tuple(min(a, b) for a, b in zip(self.bounds, other.bounds))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        b = self._common(other)
        sl = tuple(slice(0, v + 1) for v in b)
        out = TruncatedSeries(b)
        out._c = self._c[sl] + other._c[sl]
        return out

    __radd__ = __add__

    def __neg__(self):
        out = TruncatedSeries(self.bounds)
        out._c = -self._c
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            out = TruncatedSeries(self.bounds)
            out._c = self._c * int(other)
            return out
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        b = self._common(other)
        nx, ny, nz = b
        a = self._c[: nx + 1, : ny + 1, : nz + 1]
        c = other._c[: nx + 1, : ny + 1, : nz + 1]
        # loop over the sparser factor, shifting the other one
        if np.count_nonzero(a != 0) > np.count_nonzero(c != 0):
            a, c = c, a
        out = _zeros(b)
        for i, j, k in zip(*np.nonzero(a != 0)):
            coef = a[i, j, k]
            out[i:, j:, k:] += coef * c[: nx + 1 - i, : ny + 1 - j, : nz + 1 - k]
        res = TruncatedSeries(b)
        res._c = out
        return res

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TruncatedSeries":
        if e < 0:
            return self.invert() ** (-e)
        result = TruncatedSeries.constant(1, self.bounds)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def invert(self) -> "TruncatedSeries":
        """Multiplicative inverse; the constant term must be 1 or -1."""
        c0 = self[0, 0, 0]
        if c0 not in (1, -1):
            raise ArithmeticError(f"cannot invert: constant term {c0} is not a unit")
        # Newton iteration doubles the number of correct total degrees
        inv = TruncatedSeries.constant(c0, self.bounds)
        correct = 1
        total = sum(self.bounds) + 1
        while correct < total:
            inv = inv * (2 - self * inv)
            correct *= 2
        return inv

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.invert()

    def div_exact_by_x_power(self, p: int) -> "TruncatedSeries":
        """Divide by x**p; the x bound drops by p."""
        if p < 0 or p > self.bounds[0] + 1:
            raise ValueError(f"bad power {p}")
        if np.any(self._c[:p] != 0):
            raise ArithmeticError(f"series is not divisible by x^{p}")
        nx, ny, nz = self.bounds
        if p > nx:
            raise InsufficientTruncation("nothing left after division")
        out = TruncatedSeries((nx - p, ny, nz))
        out._c = self._c[p:].copy()
        return out

    def shift(self, exps: Sequence[int]) -> "TruncatedSeries":
        """Multiply by a monomial; bounds grow by its exponents."""
        di, dj, dk = exps
        nx, ny, nz = self.bounds
        out = TruncatedSeries((nx + di, ny + dj, nz + dk))
        out._c[di:, dj:, dk:] = self._c
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.bounds == other.bounds and bool(np.all(self._c == other._c))

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Equality on the common bounds."""
        return (self - other).is_zero()

    def __repr__(self) -> str:
        terms = sorted(self.coeffs.items())
        shown = " + ".join(f"{c}*x^{i}y^{j}z^{k}" for (i, j, k), c in terms[:8])
        more = " + ..." if len(terms) > 8 else ""
        return f"TruncatedSeries({self.bounds}: {shown or '0'}{more})"

    # -- serialization ----------------------------------------------------

    def to_records(self) -> list[dict]:
        return [{"x": i, "y": j, "z": k, "c": str(c)} for (i, j, k), c in sorted(self.coeffs.items())]

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @classmethod
    def from_records(cls, records: Iterable[dict], bounds: Sequence[int]) -> "TruncatedSeries":
        return cls(bounds, {(r["x"], r["y"], r["z"]): int(r["c"]) for r in records})


# -- specialization --------------------------------------------------------

def specialize(
    s: TruncatedSeries,
    x: Optional[int] = None,
    y: Optional[int] = None,
    z: Optional[int] = None,
) -> TruncatedSeries:
    """Substitute 0 or 1 for some variables.

    Substituting 1 sums over a variable, which is exact only for families
    with rank <= dist <= length <= 2*dist (every series built here).  The
    bounds of the result are cut down to the coefficients that are certified
    exact under that structure.
    """
    for name, v in (("x", x), ("y", y), ("z", z)):
        if v not in (None, 0, 1):
            raise ValueError(f"{name} may only be set to 0 or 1")
    c = s._c
    nx, ny, nz = s.bounds
    if z == 0:
        c, nz = c[:, :, :1], 0
    elif z == 1:
        ny = min(ny, nz)
        c, nz = c[:, : ny + 1, :].sum(axis=2, keepdims=True), 0
    if y == 0:
        c, ny = c[:, :1, :], 0
    elif y == 1:
        # m <= n: a fixed x-exponent i needs y up to i
        nx = min(nx, ny)
        c, ny = c[: nx + 1].sum(axis=1, keepdims=True), 0
    if x == 0:
        c, nx = c[:1], 0
    elif x == 1:
        if y == 1:
            raise InsufficientTruncation("x:=1 after y:=1 sums an infinite family")
        # n <= 2m: a fixed y-exponent j needs x up to 2j
        ny = min(ny, nx // 2)
        c, nx = c[:, : ny + 1].sum(axis=0, keepdims=True), 0
    out = TruncatedSeries((nx, ny, nz))
    out._c = np.ascontiguousarray(c[: nx + 1, : ny + 1, : nz + 1]).copy()
    return out


# -- functional equations --------------------------------------------------

def solve_B(n_x: int, n_y: int, n_z: int = 0) -> TruncatedSeries:
    """Fixed point of B = 1 + x*y*B^2*(x*B^2 - (x - 1)*(B - 1)).

    Iterates from B = 1; each round fixes one more power of x.  The residual
    is checked afterwards.
    """
    bounds = (n_x, n_y, n_z)
    x, y, _ = TruncatedSeries.variables(bounds)
    one = TruncatedSeries.constant(1, bounds)

    def rhs(b):
        b2 = b * b
        return one + x * y * b2 * (x * b2 - (x - 1) * (b - 1))

    b = one
    for _ in range(n_x + 1):
        b = rhs(b)
    if not (b - rhs(b)).is_zero():
        raise ArithmeticError("fixed-point iteration did not converge")
    return b


class Chain:
    """A, D0, D, E (and intermediate checks) derived from B."""

    def __init__(self, B: TruncatedSeries, n_z: Optional[int] = None):
        if n_z is not None:
            B = TruncatedSeries((B.bounds[0], B.bounds[1], n_z), B._c[:, :, :1])
        self.B = B
        bx = B.bounds
        x, y, z = TruncatedSeries.variables(bx)
        Bm1 = B - 1
        self.A = Bm1.div_exact_by_x_power(1) * B.invert()
        xA = self.A.shift((1, 0, 0)).truncate(bx)
        self.D0 = 1 + self.A + xA * xA * B
        self.D = self.D0 * (1 - z * xA).invert()
        num = (x * B * B - (x - 1) * Bm1).div_exact_by_x_power(1)
        self.E = num * (B - z * Bm1).invert()


def derive_chain(B: TruncatedSeries, n_z: Optional[int] = None) -> dict[str, TruncatedSeries]:
    """A, D0, D (the z-refined D-series) and E computed from B."""
    ch = Chain(B, n_z)
    return {"A": ch.A, "D0": ch.D0, "D": ch.D, "E": ch.E}


def build(bounds: Sequence[int] = DEFAULT_BOUNDS) -> dict[str, TruncatedSeries]:
    """Every named series at the requested bounds.

    Keys: B, A, D0, D, E and the specializations F = E(x,1,1),
    g = E(1,y,1), G = E(1,y,z), G0 = E(1,y,0), b = B(1,y).  Specialized
    series carry reduced (certified) bounds.
    """
    nx, ny, nz = bounds
    B = solve_B(nx + 1, ny)
    ch = Chain(B, nz)
    out = {
        "B": B.truncate((nx, ny, 0)),
        "A": ch.A.truncate(bounds),
        "D0": ch.D0.truncate(bounds),
        "D": ch.D.truncate(bounds),
        "E": ch.E.truncate(bounds),
    }
    E = out["E"]
    out["F"] = specialize(E, y=1, z=1)
    out["g"] = specialize(E, x=1, z=1)
    out["G"] = specialize(E, x=1)
    out["G0"] = specialize(E, x=1, z=0)
    out["b"] = specialize(out["B"], x=1)
    return out


# -- minimal polynomials ---------------------------------------------------

class PolyInSeries:
    """c_0 + c_1*E + ... + c_d*E^d with series coefficients."""

    def __init__(self, coeffs: Sequence[TruncatedSeries], name: str = ""):
        if len(coeffs) < 2 or coeffs[-1].is_zero():
            raise ValueError("polynomial must have degree >= 1 with a nonzero leading coefficient")
        self.coeffs = list(coeffs)
        self.name = name

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def minpoly_residual(p: PolyInSeries, s: TruncatedSeries) -> TruncatedSeries:
    """Evaluate p at s by Horner's rule, truncated to the bounds of s."""
    bounds = s.bounds
    acc = p.coeffs[-1].truncate(bounds)
    for c in reversed(p.coeffs[:-1]):
        acc = acc * s + c.truncate(bounds)
    return acc


def _xyz(bounds):
    return TruncatedSeries.variables(bounds)


def poly_E_xyz(bounds) -> PolyInSeries:
    x, y, z = _xyz(bounds)
    one = TruncatedSeries.constant(1, bounds)
    u, w = 1 - x, 1 - z
    c0 = one
    c1 = -(1 - 2 * y * x * u * z + y * u * u * w)
    c2 = y * (
        2 * x * x * z * z
        + x * u * (2 * z * z - 6 * z + 3)
        + y * x * x * u * u * z * z
        + u * u * w
        - y * x * u ** 3 * w
    )
    c3 = y * x * (
        2 * y * x * x * u * z ** 3
        + x * z * w * (4 - z)
        - 2 * y * x * u * u * z * w
        - 2 * u * w * w
    )
    c4 = y * x * x * (y * x * x * z ** 4 - y * x * u * z * z * w + w ** 3)
    return PolyInSeries([c0, c1, c2, c3, c4], "E(x,y,z)")


def poly_E_xy1(bounds) -> PolyInSeries:
    x, y, _ = _xyz(bounds)
    one = TruncatedSeries.constant(1, bounds)
    u = 1 - x
    return PolyInSeries(
        [
            one,
            -(1 - 2 * y * x * u),
            y * x * (-1 + 3 * x + y * x * u * u),
            2 * y * y * x ** 3 * u,
            y * y * x ** 4,
        ],
        "E(x,y,1)",
    )


def poly_E_x1z(bounds) -> PolyInSeries:
    x, _, z = _xyz(bounds)
    one = TruncatedSeries.constant(1, bounds)
    u, w = 1 - x, 1 - z
    return PolyInSeries(
        [
            one,
            -(1 - 2 * x * u * z + u * u * w),
            2 * x * x * z * z + x * u * (2 * z * z - 6 * z + 3) + x * x * u * u * z * z + u * u * w - x * u ** 3 * w,
            x * (2 * x * x * u * z ** 3 + x * z * w * (4 - z) - 2 * x * u * u * z * w - 2 * u * w * w),
            x * x * (x * x * z ** 4 - x * u * z * z * w + w ** 3),
        ],
        "E(x,1,z)",
    )


def poly_E_x11(bounds) -> PolyInSeries:
    x, _, _ = _xyz(bounds)
    one = TruncatedSeries.constant(1, bounds)
    return PolyInSeries(
        [
            one,
            -(1 - 2 * x + 2 * x * x),
            x * (-1 + 4 * x - 2 * x * x + x ** 3),
            2 * x ** 3 * (1 - x),
            x ** 4,
        ],
        "E(x,1,1)",
    )


def poly_E_xy0(bounds) -> PolyInSeries:
    x, y, _ = _xyz(bounds)
    one = TruncatedSeries.constant(1, bounds)
    u = 1 - x
    return PolyInSeries(
        [
            one,
            -(1 + y * u * u),
            y * u * (1 + 2 * x - y * x * u * u),
            -2 * y * x * u,
            y * x * x,
        ],
        "E(x,y,0)",
    )


def poly_E_x10(bounds, printed_sign: bool = False) -> PolyInSeries:
    """Minimal polynomial of E(x,1,0).

    The quadratic coefficient is +(1-x)(1+x+2x^2-x^3), which is what
    substituting y=1, z=0 into the E(x,y,z) quartic gives.  ``printed_sign``
    builds the variant with that coefficient negated, which does not vanish.
    """
    x, _, _ = _xyz(bounds)
    one = TruncatedSeries.constant(1, bounds)
    u = 1 - x
    c2 = u * (1 + x + 2 * x * x - x ** 3)
    return PolyInSeries(
        [one, -(2 - 2 * x + x * x), -c2 if printed_sign else c2, -2 * x * u, x * x],
        "E(x,1,0)",
    )


def poly_G(bounds) -> PolyInSeries:
    _, y, z = _xyz(bounds)
    one = TruncatedSeries.constant(1, bounds)
    w = 1 - z
    return PolyInSeries(
        [one, -one, 2 * y * z * z, y * z * w * (4 - z), y * (y * z ** 4 + w ** 3)],
        "E(1,y,z)",
    )


def poly_G0(bounds) -> PolyInSeries:
    _, y, _ = _xyz(bounds)
    one = TruncatedSeries.constant(1, bounds)
    zero = TruncatedSeries(bounds)
    return PolyInSeries([one, -one, zero, zero, y], "E(1,y,0)")


def poly_g(bounds) -> PolyInSeries:
    _, y, _ = _xyz(bounds)
    one = TruncatedSeries.constant(1, bounds)
    zero = TruncatedSeries(bounds)
    return PolyInSeries([one, -one, 2 * y, zero, y * y], "E(1,y,1)")


# name -> (polynomial builder, substitution applied to E)
MINPOLYS = {
    "E(x,y,z)": (poly_E_xyz, {}),
    "E(x,y,1)": (poly_E_xy1, {"z": 1}),
    "E(x,1,z)": (poly_E_x1z, {"y": 1}),
    "E(x,1,1)": (poly_E_x11, {"y": 1, "z": 1}),
    "E(x,y,0)": (poly_E_xy0, {"z": 0}),
    "E(x,1,0)": (poly_E_x10, {"y": 1, "z": 0}),
    "E(1,y,z)": (poly_G, {"x": 1}),
    "E(1,y,0)": (poly_G0, {"x": 1, "z": 0}),
    "E(1,y,1)": (poly_g, {"x": 1, "z": 1}),
}


def minpoly_residuals(bounds: Sequence[int] = (14, 8, 8), E: Optional[TruncatedSeries] = None) -> dict[str, TruncatedSeries]:
    """Residual of each built-in polynomial at the matching specialization of E."""
    if E is None:
        E = build(bounds)["E"]
    out = {}
    for name, (make, subs) in MINPOLYS.items():
        s = specialize(E, **subs)
        out[name] = minpoly_residual(make(s.bounds), s)
    return out


# -- rank generating function ----------------------------------------------

def solve_b(n_y: int) -> TruncatedSeries:
    """b(y) = 1 + y*b^4, as a series in y alone."""
    bounds = (0, n_y, 0)
    _, y, _ = TruncatedSeries.variables(bounds)
    b = TruncatedSeries.constant(1, bounds)
    for _ in range(n_y + 1):
        b = 1 + y * b ** 4
    return b


def rank_gf_coeffs(n_m: int, n_t: Optional[int] = None) -> CountTable:
    """[y^m z^t] G for m <= n_m, t <= n_t, computed two ways.

    Route one expands G = b/(1 - y*b^3*z); route two reads [y^(m-t)] b^(3t+1).
    A disagreement raises.
    """
    if n_t is None:
        n_t = n_m
    b = solve_b(n_m)
    bounds = (0, n_m, n_t)
    bz = TruncatedSeries((0, n_m, n_t), b._c)
    _, y, z = TruncatedSeries.variables(bounds)
    G = bz * (1 - y * bz ** 3 * z).invert()
    table = CountTable(("m", "t"))
    for t in range(n_t + 1):
        power = b ** (3 * t + 1)
        for m in range(t, n_m + 1):
            via_g = G[0, m, t]
            via_power = power[0, m - t, 0]
            if via_g != via_power:
                raise ArithmeticError(f"[y^{m} z^{t}]G mismatch: {via_g} != {via_power}")
            table.add((m, t), via_g)
    return table
