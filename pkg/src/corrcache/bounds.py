"""Converse coefficients, memory-sharing envelopes and the round-division baseline.

All arithmetic is exact (``fractions.Fraction``). Corner t sits at memory
M = N t / (K r), i.e. t = K M r / N.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence, Union

from .model import (
    ModelError,
    ProblemInstance,
    blocks_of_file,
    check_demand,
    count_demands_with_s_distinct,
    new_instance,
)

AVERAGE = "avg"


def _check(N: int, K: int, r: int, t: int, s=None) -> None:
    if not (N >= 1 and K >= 1 and 1 <= r <= N):
        raise ModelError(f"invalid (N,K,r)=({N},{K},{r})")
    if not 0 <= t <= K:
        raise ModelError(f"t={t} outside [0:{K}]")
    if s is not None and not 1 <= s <= min(K, N):
        raise ModelError(f"s={s} outside [1, {min(K, N)}]")


def corner_memory(N: int, K: int, r: int, t: int) -> Fraction:
    return Fraction(N * t, K * r)


def load_coefficient(N: int, K: int, r: int, t: int, s: int) -> Fraction:
    """c^s_t = sum_j C(N-j,r-1) C(K-j,t) / (C(N-1,r-1) C(K,t)), j up to min(N-r+1, K-t, s)."""
    _check(N, K, r, t, s)
    top = sum(comb(N - j, r - 1) * comb(K - j, t) for j in range(1, min(N - r + 1, K - t, s) + 1))
    return Fraction(top, comb(N - 1, r - 1) * comb(K, t))


def average_coefficient(N: int, K: int, r: int, t: int) -> Fraction:
    """Expectation of c^{N_e(d)}_t over uniform d in [N]^K."""
    _check(N, K, r, t)
    total = sum(
        count_demands_with_s_distinct(N, K, s) * load_coefficient(N, K, r, t, s)
        for s in range(1, min(K, N) + 1)
    )
    return total / N**K


@dataclass(frozen=True)
class LoadPoint:
    memory: Fraction
    load: Fraction
    t: int
    s: Union[int, str]


@dataclass(frozen=True)
class Envelope:
    points: tuple
    hull: tuple

    def __call__(self, M) -> Fraction:
        return envelope_eval(self, M)


def _cross(o: LoadPoint, a: LoadPoint, b: LoadPoint) -> Fraction:
    return (a.memory - o.memory) * (b.load - o.load) - (a.load - o.load) * (b.memory - o.memory)


def lower_convex_hull(points: Sequence[LoadPoint]) -> tuple:
    """Lower hull by Andrew's monotone chain; collinear middle points dropped."""
    pts = sorted(points, key=lambda p: (p.memory, p.load))
    # keep only the lowest load per memory value
    dedup: list[LoadPoint] = []
    for p in pts:
        if dedup and dedup[-1].memory == p.memory:
            continue
        dedup.append(p)
    hull: list[LoadPoint] = []
    for p in dedup:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    return tuple(hull)


def make_envelope(points: Sequence[LoadPoint]) -> Envelope:
    points = tuple(sorted(points, key=lambda p: p.memory))
    return Envelope(points, lower_convex_hull(points))


def converse_envelope_type(N: int, K: int, r: int, s: int) -> Envelope:
    return make_envelope(
        [LoadPoint(corner_memory(N, K, r, t), load_coefficient(N, K, r, t, s), t, s) for t in range(K + 1)]
    )


def converse_envelope_average(N: int, K: int, r: int) -> Envelope:
    return make_envelope(
        [LoadPoint(corner_memory(N, K, r, t), average_coefficient(N, K, r, t), t, AVERAGE) for t in range(K + 1)]
    )


def envelope_eval(env: Envelope, M) -> Fraction:
    """Piecewise-linear interpolation along the hull."""
    M = Fraction(M)
    hull = env.hull
    if M < hull[0].memory or M > hull[-1].memory:
        raise ModelError(f"M={M} outside [{hull[0].memory}, {hull[-1].memory}]")
    for a, b in zip(hull, hull[1:]):
        if a.memory <= M <= b.memory:
            w = (M - a.memory) / (b.memory - a.memory)
            return a.load + w * (b.load - a.load)
    return hull[0].load


def _round_load(K: int, t: int, b: int) -> Fraction:
    """MAN-with-repeats load of one round, in block units, for b distinct requested blocks."""
    return Fraction(comb(K, t + 1) - comb(K - b, t + 1), comb(K, t))


def baseline_round_division_load(inst: ProblemInstance, d: Sequence[int]) -> Fraction:
    """Load of the round-division scheme: each round is an independent MAN problem.

    Round i asks every user for the i-th block (lexicographic) of its file.
    """
    t = inst.require_integral_t()
    d = check_demand(inst, d)
    per_file = {f: blocks_of_file(inst, f) for f in set(d)}
    n_rounds = comb(inst.n_files - 1, inst.overlap - 1)
    total = Fraction(0)
    for i in range(n_rounds):
        b = len({per_file[f][i] for f in d})
        total += _round_load(inst.n_users, t, b)
    return total / n_rounds


def baseline_type_average(N: int, K: int, r: int, t: int, s: int) -> Fraction:
    """Round-division load averaged over type-s demands.

    The load depends only on the set of demanded files, and every s-subset
    is equally likely under uniform demands of type s.
    """
    _check(N, K, r, t, s)
    inst = new_instance(N, K, corner_memory(N, K, r, t), r)
    loads = []
    for files in combinations(range(1, N + 1), s):
        d = list(files) + [files[0]] * (K - s)
        loads.append(baseline_round_division_load(inst, d))
    return sum(loads, Fraction(0)) / len(loads)
