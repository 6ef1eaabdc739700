import json
from collections import Counter

import pytest

from invseq_lab.invseq import P000, P102, count_table
from invseq_lab.lattice import (
    DOWN,
    NORTH,
    SOUTH,
    FStep,
    LabeledFPath,
    SimpleHPath,
    WeightedHWalk,
    WStep,
    absorb_steps,
    classify,
    enumerate_paths,
    eta,
    eta_inv,
    path_from_json,
    path_stats,
    path_to_json,
    steps_from_json,
)


def F(dx, dy, *label):
    return FStep(dx, dy, label or ((1,) if dy == 1 else (dy,)))


def W(dx, dy, w=1):
    return WStep(dx, dy, w)


def figure_path():
    north = F(0, 1)
    steps = [north, F(1, 1), F(1, 1), F(2, 1)] + [north] * 6 + [F(2, -1), F(1, 1)] + [north] * 5
    steps += [F(1, 0, 0, 0, 0), F(1, -3, -1, 0, 0, -1, -1), north]
    return LabeledFPath(steps)


def figure_walk():
    n = W(0, 1)
    steps = [n, W(1, 1), W(1, 1), W(2, 1)] + [n] * 6 + [W(2, -1), W(1, 1)] + [n] * 5
    steps += [W(1, 1), W(0, -1, 2), W(1, 0), W(0, -1), W(0, -2, 3), n]
    return WeightedHWalk(steps)


def test_classify_examples():
    assert classify(W(0, 1)) == NORTH
    assert classify(W(2, 0)) == DOWN
    assert classify(W(0, -2, 3)) == SOUTH


@pytest.mark.parametrize("bad", [(0, 0, (0,)), (1, 2, (2,)), (1, 1, (0, 1)), (1, -1, (0, 0)), (1, 0, (1, -1))])
def test_invalid_fsteps(bad):
    with pytest.raises(ValueError):
        FStep(*bad)


@pytest.mark.parametrize("bad", [(0, 0, 1), (1, 2, 1), (1, 0, 2), (0, -1, 0), (0, 1, 2)])
def test_invalid_wsteps(bad):
    with pytest.raises(ValueError):
        WStep(*bad)


def test_figure_path_stats():
    q = figure_path()
    assert len(q.steps) == 20
    s = path_stats(q)
    assert (s.semilength, s.height) == (26, 4)


def test_figure_path_eta():
    assert eta(figure_path()) == figure_walk()
    assert eta_inv(figure_walk()) == figure_path()


def test_path_stats_small_examples():
    s = path_stats(SimpleHPath(()))
    assert (s.semilength, s.height, s.ud) == (0, 0, 0)
    s = path_stats(SimpleHPath((W(0, 1), W(2, 1))))
    assert (s.semilength, s.height, s.ud) == (2, 0, 1)


def test_eta_long_step_examples():
    assert eta(LabeledFPath([F(0, 1), F(1, 0, 0, 0, 0)])).steps == (W(0, 1), W(1, 1), W(0, -1, 2))
    q = LabeledFPath([F(0, 1)] * 4 + [F(1, -3, -1, 0, 0, -1, -1)])
    assert eta(q).steps[4:] == (W(1, 0), W(0, -1), W(0, -2, 3))
    assert eta(LabeledFPath([F(0, 1)])).steps == (W(0, 1),)


def test_eta_inv_examples():
    assert absorb_steps([W(1, 1), W(0, -1, 2)]) == (F(1, 0, 0, 0, 0),)
    assert absorb_steps([W(1, 0), W(0, -1), W(0, -2, 3)]) == (F(1, -3, -1, 0, 0, -1, -1),)
    r = WeightedHWalk([W(0, 1), W(1, 1), W(1, 0)])
    assert eta_inv(r).steps == (F(0, 1), F(1, 1), F(1, 0))


def test_walk_validation():
    with pytest.raises(ValueError):
        WeightedHWalk([W(0, 1), W(0, -1)])
    with pytest.raises(ValueError):
        WeightedHWalk([W(2, 1)])  # below the diagonal
    with pytest.raises(ValueError):
        SimpleHPath([W(0, 1), W(0, 1)])
    with pytest.raises(ValueError):
        SimpleHPath([W(0, 1), W(0, 1), W(1, 1), W(0, -1, 2)])


def test_absorb_rejects_leading_south():
    with pytest.raises(ValueError):
        absorb_steps([W(0, -1)])


@pytest.mark.parametrize("n", range(7))
def test_eta_round_trip_and_stats(n):
    for q in enumerate_paths("labeled-f", n):
        r = eta(q)
        assert (r.semilength, r.height) == (q.semilength, q.height)
        assert eta_inv(r) == q
    for r in enumerate_paths("weighted-h", n):
        assert eta(eta_inv(r)) == r


def test_eta_is_a_bijection_per_height():
    for n in range(6):
        lf = Counter(q.height for q in enumerate_paths("labeled-f", n))
        images = {eta(q) for q in enumerate_paths("labeled-f", n)}
        wh = list(enumerate_paths("weighted-h", n))
        assert images == set(wh)
        assert lf == Counter(r.height for r in wh)


def test_simple_h_semilength_two():
    paths = list(enumerate_paths("simple-h", 2))
    assert len(paths) == 5
    by_height = {}
    for p in paths:
        by_height.setdefault(p.height, set()).add(p.steps)
    n = W(0, 1)
    assert by_height[0] == {(n, W(2, 1)), (n, W(1, 0)), (W(1, 1), W(1, 1))}
    assert by_height[1] == {(n, W(1, 1)), (W(1, 1), n)}
    assert 2 not in by_height


def test_weighted_h_semilength_two():
    walks = list(enumerate_paths("weighted-h", 2))
    assert len(walks) == 6
    assert Counter(w.height for w in walks) == {0: 3, 1: 2, 2: 1}


def test_empty_path_only_at_zero():
    for kind in ("labeled-f", "weighted-h", "simple-h"):
        assert [p.steps for p in enumerate_paths(kind, 0)] == [()]


def test_enumeration_is_deterministic_and_duplicate_free():
    a = list(enumerate_paths("weighted-h", 4))
    assert a == list(enumerate_paths("weighted-h", 4))
    assert len(set(a)) == len(a)


def test_walks_match_102_avoiders():
    table = count_table(8, [P102])
    for n in range(7):
        heights = Counter(r.height for r in enumerate_paths("weighted-h", n))
        for t in range(n + 1):
            assert heights[t] == table.get(n=n + 1, t=t)


def test_simple_paths_match_102_000_avoiders():
    table = count_table(10, [P102, P000])
    for n in range(8):
        c = Counter((p.ud, p.height) for p in enumerate_paths("simple-h", n))
        for m in range(n + 1):
            for t in range(n + 1):
                assert c[(m, t)] == table.get(n=n + 1, m=m + 1, t=t)


def test_filters():
    assert all(p.height == 1 for p in enumerate_paths("simple-h", 4, height=1))
    assert all(p.ud == 2 for p in enumerate_paths("simple-h", 4, ud=2))
    with pytest.raises(ValueError):
        list(enumerate_paths("weighted-h", 2, ud=1))
    with pytest.raises(ValueError):
        list(enumerate_paths("labeled-f", 2, cls="A"))
    with pytest.raises(ValueError):
        list(enumerate_paths("bogus", 2))


def test_classes_at_zero():
    assert [p.steps for p in enumerate_paths("simple-h", 0, cls="D")] == [()]
    assert list(enumerate_paths("simple-h", 0, cls="A")) == []
    for p in enumerate_paths("simple-h", 4, cls="A"):
        assert p.steps[0] == W(1, 1) and p.height == 0


def test_json_round_trip():
    q = figure_path()
    assert path_from_json(path_to_json(q)) == q
    r = figure_walk()
    assert path_from_json(path_to_json(r)) == r
    q = LabeledFPath([F(0, 1)] * 4 + [F(1, -3, -1, 0, 0, -1, -1)])
    assert json.loads(path_to_json(q))["steps"][4] == {"dx": 1, "dy": -3, "label": [-1, 0, 0, -1, -1]}
    assert json.loads(path_to_json(WeightedHWalk([W(0, 1), W(1, 1), W(0, -1, 2)])))["steps"][2] == {"dx": 0, "dy": -1, "weight": 2}


def test_json_rejects_mixed_steps():
    with pytest.raises(ValueError):
        steps_from_json('{"steps": [{"dx": 0, "dy": 1, "label": [1]}, {"dx": 1, "dy": 1}]}')
    with pytest.raises(ValueError):
        steps_from_json("[1, 2]")
