"""Exact enumeration of (102,000)-avoiding inversion sequences, their
lattice-path companions and generating functions."""

from .formulas import (
    b_closed,
    binom,
    count_dist_closed,
    dist_rank_count,
    dist_rank_count_lagrange,
    dist_total,
    fuss3,
)
from .invseq import (
    CountTable,
    StatRecord,
    contains,
    count_table,
    enumerate_avoiding,
    reduction,
    remark_dedup,
    stats,
)
from .lattice import (
    FStep,
    LabeledFPath,
    SimpleHPath,
    WeightedHWalk,
    WStep,
    classify,
    enumerate_paths,
    eta,
    eta_inv,
    path_stats,
)
from .series import PolyInSeries, TruncatedSeries, build, minpoly_residual, rank_gf_coeffs, solve_B, specialize

__version__ = "0.1.0"
