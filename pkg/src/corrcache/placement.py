"""Uncoded MAN-style placement of correlated-file sub-blocks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet

from .model import ProblemInstance, SubBlock, enumerate_blocks


def subblock_universe(inst: ProblemInstance) -> list[SubBlock]:
    """All W_{S,V} with |V| = t, ordered by block then caching set."""
    t = inst.require_integral_t()
    user_sets = list(combinations(range(1, inst.n_users + 1), t))
    return [SubBlock(S, V) for S in enumerate_blocks(inst) for V in user_sets]


@dataclass(frozen=True)
class CacheAssignment:
    instance: ProblemInstance
    t: int
    per_user: Dict[int, FrozenSet[SubBlock]]

    def cache_size(self, user: int) -> Fraction:
        """Cache occupancy of ``user`` in file units."""
        return Fraction(len(self.per_user[user]), self.instance.file_size_units)


def man_placement(inst: ProblemInstance) -> CacheAssignment:
    t = inst.require_integral_t()
    per_user: dict[int, set] = {k: set() for k in range(1, inst.n_users + 1)}
    for sb in subblock_universe(inst):
        for k in sb.cached_by:
            per_user[k].add(sb)
    return CacheAssignment(inst, t, {k: frozenset(z) for k, z in per_user.items()})


def expected_cache_count(inst: ProblemInstance) -> int:
    """|Z_k| = C(N,r) C(K-1,t-1) under MAN placement."""
    t = inst.require_integral_t()
    if t == 0:
        return 0
    return comb(inst.n_files, inst.overlap) * comb(inst.n_users - 1, t - 1)
