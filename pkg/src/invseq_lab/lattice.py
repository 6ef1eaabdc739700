"""Labeled F-paths, weighted H-walks and simple H-paths.

Paths are stored as tuples of steps; lattice points are recomputed when
needed.  ``eta`` replaces every long labeled step by an ordinary step
followed by weighted south steps, and ``eta_inv`` undoes it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

NORTH, UP, DOWN, SOUTH = "north", "up", "down", "south"

KINDS = ("labeled-f", "weighted-h", "simple-h")
CLASSES = ("A", "D", "B")


@dataclass(frozen=True)
class FStep:
    dx: int
    dy: int
    label: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "label", tuple(self.label))
        if self.dy == 1:
            if self.dx < 0 or self.label != (1,):
                raise ValueError(f"invalid F-step {self}")
        else:
            if self.dx < 1 or self.dy > 1:
                raise ValueError(f"({self.dx},{self.dy}) is not in F")
            if not self.label or any(b > 0 for b in self.label) or sum(self.label) != self.dy:
                raise ValueError(f"invalid label {self.label} for step ({self.dx},{self.dy})")

    @property
    def semilength(self) -> int:
        return len(self.label)

    @property
    def is_long(self) -> bool:
        return len(self.label) >= 2


@dataclass(frozen=True)
class WStep:
    dx: int
    dy: int
    weight: int = 1

    def __post_init__(self):
        south = self.dx == 0 and self.dy <= -1
        in_f = (self.dx == 0 and self.dy == 1) or (self.dx >= 1 and self.dy <= 1)
        if south:
            if self.weight < 1:
                raise ValueError(f"south step weight must be positive: {self}")
        elif not in_f or self.weight != 1:
            raise ValueError(f"invalid H-step {self}")

    @property
    def kind(self) -> str:
        return classify(self)


def classify(step: Union[WStep, FStep]) -> str:
    if step.dx == 0:
        return NORTH if step.dy == 1 else SOUTH
    return UP if step.dy == 1 else DOWN


def _check_above_diagonal(steps) -> None:
    x = y = 0
    for s in steps:
        x += s.dx
        y += s.dy
        if y < x:
            raise ValueError("path goes below the line y = x")


@dataclass(frozen=True)
class LabeledFPath:
    steps: tuple[FStep, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        _check_above_diagonal(self.steps)

    @property
    def semilength(self) -> int:
        return sum(s.semilength for s in self.steps)

    @property
    def height(self) -> int:
        return sum(s.dy - s.dx for s in self.steps)


@dataclass(frozen=True)
class WeightedHWalk:
    steps: tuple[WStep, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        _check_above_diagonal(self.steps)
        for a, b in zip(self.steps, self.steps[1:]):
            if classify(a) == NORTH and classify(b) == SOUTH:
                raise ValueError("a north step is followed by a south step")

    @property
    def semilength(self) -> int:
        return sum(s.weight for s in self.steps)

    @property
    def height(self) -> int:
        return sum(s.dy - s.dx for s in self.steps)

    def is_simple(self) -> bool:
        kinds = [classify(s) for s in self.steps]
        if any(k == SOUTH and s.weight != 1 for k, s in zip(kinds, self.steps)):
            return False
        for a, b in zip(kinds, kinds[1:]):
            if b == NORTH and a in (NORTH, SOUTH):
                return False
            if a == SOUTH and b == SOUTH:
                return False
        return True


class SimpleHPath(WeightedHWalk):
    """Weighted H-walk with unit south weights, no north or south step
    directly before a north step, and no two consecutive south steps."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_simple():
            raise ValueError("not a simple H-path")

    @property
    def ud(self) -> int:
        return sum(classify(s) in (UP, DOWN) for s in self.steps)


Path = Union[LabeledFPath, WeightedHWalk]


@dataclass(frozen=True)
class PathStats:
    semilength: int
    height: int
    ud: Optional[int]


def path_stats(p: Path) -> PathStats:
    ud = None
    if isinstance(p, SimpleHPath):
        ud = p.ud
    elif isinstance(p, WeightedHWalk) and p.is_simple():
        ud = SimpleHPath(p.steps).ud
    return PathStats(p.semilength, p.height, ud)


# -- eta -------------------------------------------------------------------

def _substitute(step: FStep) -> list[WStep]:
    if not step.is_long:
        return [WStep(step.dx, step.dy)]
    b = step.label
    k = len(b)
    out = [WStep(step.dx, b[k - 1] + 1)]
    interior = [i for i in range(2, k) if b[i - 1] != 0]
    # souths run from the largest interior index down to b_1
    upper = k
    for i in reversed(interior):
        out.append(WStep(0, b[i - 1], upper - i))
        upper = i
    out.append(WStep(0, b[0] - 1, upper - 1))
    return out


def substitute_steps(steps: Sequence[FStep]) -> tuple[WStep, ...]:
    """Step-wise substitution behind ``eta``; no path constraints checked."""
    out: list[WStep] = []
    for s in steps:
        out.extend(_substitute(s))
    return tuple(out)


def absorb_steps(steps: Sequence[WStep]) -> tuple[FStep, ...]:
    """Step-wise inverse of :func:`substitute_steps`."""
    out: list[FStep] = []
    items = list(steps)
    i = 0
    while i < len(items):
        head = items[i]
        if classify(head) in (SOUTH, NORTH) and i + 1 < len(items) and classify(items[i + 1]) == SOUTH:
            raise ValueError("south steps must follow an up or down step")
        if classify(head) == SOUTH:
            raise ValueError("south step without a preceding up or down step")
        j = i + 1
        while j < len(items) and classify(items[j]) == SOUTH:
            j += 1
        run = items[i + 1:j]
        if not run:
            label = (1,) if head.dy == 1 else (head.dy,)
            out.append(FStep(head.dx, head.dy, label))
        else:
            k = 1 + sum(s.weight for s in run)
            b = [0] * k
            b[k - 1] = head.dy - 1
            last = run[-1]
            b[0] = last.dy + 1
            # interior indices are recovered from cumulative weights, from b_1 up
            idx = last.weight + 1
            for s in reversed(run[:-1]):
                b[idx - 1] = s.dy
                idx += s.weight
            out.append(FStep(head.dx, sum(b), tuple(b)))
        i = j
    return tuple(out)


def eta(q: LabeledFPath) -> WeightedHWalk:
    """Substitute each long step; semilength and height are preserved."""
    return WeightedHWalk(substitute_steps(q.steps))


def eta_inv(r: WeightedHWalk) -> LabeledFPath:
    """Absorb every maximal run of south steps into the step before it."""
    return LabeledFPath(absorb_steps(r.steps))


# -- enumeration -----------------------------------------------------------

def _weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Tuples of ``parts`` nonpositive integers summing to ``-total``,
    in lexicographic order."""
    if parts == 1:
        yield (-total,)
        return
    for first in range(-total, 1):
        for rest in _weak_compositions(total + first, parts - 1):
            yield (first,) + rest


def _labeled_f(n: int) -> Iterator[tuple[FStep, ...]]:
    path: list[FStep] = []

    def rec(h: int, left: int) -> Iterator[tuple[FStep, ...]]:
        if left == 0:
            yield tuple(path)
            return
        # ordered by (dx, dy, label)
        for dx in range(0, h + 2):
            if dx == 0:
                candidates = [(1, (1,))]
            else:
                candidates = [(dy, None) for dy in range(dx - h, 2)]
            for dy, label in candidates:
                if label is not None or dy == 1:
                    labels = [(1,)]
                else:
                    labels = [lab for k in range(1, left + 1) for lab in _weak_compositions(-dy, k)]
                    labels.sort()
                for lab in labels:
                    path.append(FStep(dx, dy, lab))
                    yield from rec(h + dy - dx, left - len(lab))
                    path.pop()

    yield from rec(0, n)


def _weighted_h(n: int, simple: bool) -> Iterator[tuple[WStep, ...]]:
    path: list[WStep] = []

    def rec(h: int, left: int, prev: Optional[str]) -> Iterator[tuple[WStep, ...]]:
        if left == 0:
            yield tuple(path)
            return
        for dx in range(0, h + 2):
            if dx == 0:
                options = [(dy, w) for dy in range(-h, 0) for w in range(1, left + 1)]
                options.append((1, 1))
            else:
                options = [(dy, 1) for dy in range(dx - h, 2)]
            for dy, w in sorted(options):
                kind = classify(WStep(dx, dy, w))
                if kind == SOUTH:
                    if prev in (None, NORTH):
                        continue
                    if simple and (w != 1 or prev == SOUTH):
                        continue
                elif kind == NORTH and simple and prev in (NORTH, SOUTH):
                    continue
                path.append(WStep(dx, dy, w))
                yield from rec(h + dy - dx, left - w, kind)
                path.pop()

    yield from rec(0, n, None)


def _in_class(steps: Sequence[WStep], cls: str) -> bool:
    if cls == "A":
        return (
            bool(steps)
            and (steps[0].dx, steps[0].dy) == (1, 1)
            and classify(steps[-1]) in (UP, DOWN)
            and sum(s.dy - s.dx for s in steps) == 0
        )
    if cls == "D":
        return not steps or classify(steps[0]) != NORTH
    if cls == "B":
        return bool(steps) and classify(steps[0]) != NORTH and classify(steps[-1]) == NORTH
    raise ValueError(f"unknown class {cls!r}")


def enumerate_paths(
    kind: str,
    n: int,
    height: Optional[int] = None,
    ud: Optional[int] = None,
    cls: Optional[str] = None,
) -> Iterator[Path]:
    """Yield every path of the given kind and semilength matching the filters.

    ``ud`` and ``cls`` (``"A"``, ``"D"`` for not-starting-north, ``"B"`` for
    not-starting-north and ending-north) apply to simple H-paths only.
    """
    if n < 0:
        raise ValueError("semilength must be >= 0")
    if kind not in KINDS:
        raise ValueError(f"unknown path kind {kind!r}")
    if kind != "simple-h" and (ud is not None or cls is not None):
        raise ValueError("ud and class filters apply to simple H-paths only")
    if kind == "labeled-f":
        for steps in _labeled_f(n):
            p = LabeledFPath(steps)
            if height is None or p.height == height:
                yield p
        return
    simple = kind == "simple-h"
    for steps in _weighted_h(n, simple):
        if height is not None and sum(s.dy - s.dx for s in steps) != height:
            continue
        if cls is not None and not _in_class(steps, cls):
            continue
        if simple:
            p = SimpleHPath(steps)
            if ud is not None and p.ud != ud:
                continue
            yield p
        else:
            yield WeightedHWalk(steps)


# -- JSON ------------------------------------------------------------------

def step_to_dict(s: Union[FStep, WStep]) -> dict:
    if isinstance(s, FStep):
        return {"dx": s.dx, "dy": s.dy, "label": list(s.label)}
    return {"dx": s.dx, "dy": s.dy, "weight": s.weight}


def path_to_json(p: Path) -> str:
    return json.dumps({"steps": [step_to_dict(s) for s in p.steps]})


def steps_from_json(text: str) -> tuple:
    """Decode ``{"steps": [...]}`` into FSteps (when every step has a
    ``label``) or WSteps; step invariants are checked, path ones are not."""
    data = json.loads(text)
    if not isinstance(data, dict) or not isinstance(data.get("steps"), list):
        raise ValueError('expected an object {"steps": [...]}')
    raw = data["steps"]
    if raw and all("label" in s for s in raw):
        return tuple(FStep(int(s["dx"]), int(s["dy"]), tuple(int(v) for v in s["label"])) for s in raw)
    if any("label" in s for s in raw):
        raise ValueError("mixed labeled and weighted steps")
    return tuple(WStep(int(s["dx"]), int(s["dy"]), int(s.get("weight", 1))) for s in raw)


def path_from_json(text: str) -> Path:
    """Decode a path; labeled steps make a labeled F-path, otherwise a
    weighted H-walk."""
    steps = steps_from_json(text)
    if steps and isinstance(steps[0], FStep):
        return LabeledFPath(steps)
    return WeightedHWalk(steps)
