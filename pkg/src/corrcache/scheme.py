"""Multi-step interference-alignment delivery for correlated files.

Each step j serves leader u_j. For every user set J of size t+1 that holds
u_j and none of the earlier leaders, the candidate blocks are split into
groups by residue (block files not demanded inside J). A group whose first n
blocks are demanded by u_j yields n XOR rows; every other block of the group
is folded into each row whose block shares r-1 files with it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple

from .model import (
    BlockId,
    LeaderPermutation,
    ModelError,
    ProblemInstance,
    SubBlock,
    blocks_of_file,
    check_demand,
    choose_leaders,
    demand_distinct_count,
    enumerate_blocks,
)


@dataclass(frozen=True, order=True)
class GroupTag:
    step: int
    user_set: Tuple[int, ...]
    residue: Tuple[int, ...]
    leader: int = field(compare=False, default=0)


@dataclass(frozen=True)
class LinearCombination:
    terms: FrozenSet[SubBlock]
    origin: GroupTag
    row_index: int

    def labels(self) -> list[str]:
        return sorted(str(sb) for sb in self.terms)


@dataclass(frozen=True)
class Transmission:
    instance: ProblemInstance
    demand: Tuple[int, ...]
    leaders: LeaderPermutation
    combinations: Tuple[LinearCombination, ...]

    def __len__(self) -> int:
        return len(self.combinations)

    def term_sets(self) -> list[FrozenSet[SubBlock]]:
        return [c.terms for c in self.combinations]

    def count_by_step(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.combinations:
            out[c.origin.step] = out.get(c.origin.step, 0) + 1
        return out

    def to_records(self) -> list[dict]:
        """Group-wise records ``{step, J, B, rows}`` in emission order."""
        records: list[dict] = []
        for c in self.combinations:
            tag = c.origin
            if not records or records[-1]["_tag"] != tag:
                records.append(
                    {"_tag": tag, "step": tag.step, "J": list(tag.user_set),
                     "B": list(tag.residue), "rows": []}
                )
            records[-1]["rows"].append(c.labels())
        for rec in records:
            del rec["_tag"]
        return records

    def to_json(self) -> str:
        return json.dumps(self.to_records(), sort_keys=True)


def _demanded(d: Sequence[int], users: Iterable[int]) -> set[int]:
    return {d[k - 1] for k in users}


def union_blocks(inst: ProblemInstance, users: Iterable[int], d: Sequence[int]) -> set[BlockId]:
    users = list(users)
    if not users:
        raise ModelError("union of blocks needs a non-empty user set")
    out: set[BlockId] = set()
    for f in _demanded(d, users):
        out.update(blocks_of_file(inst, f))
    return out


def intersection_blocks(inst: ProblemInstance, users: Iterable[int], d: Sequence[int]) -> set[BlockId]:
    users = list(users)
    if not users:
        raise ModelError("intersection of blocks needs a non-empty user set")
    files = _demanded(d, users)
    return {S for S in enumerate_blocks(inst) if files.issubset(S)}


def _check_step(j: int, J: Sequence[int], u: Sequence[int], t: Optional[int] = None) -> None:
    if not 1 <= j <= len(u):
        raise ModelError(f"step {j} outside [1, {len(u)}]")
    if u[j - 1] not in J:
        raise ModelError(f"leader u_{j}={u[j - 1]} not in J={tuple(J)}")
    if set(J) & set(u[: j - 1]):
        raise ModelError(f"J={tuple(J)} contains an earlier leader from {tuple(u[:j - 1])}")
    if t is not None and len(set(J)) != t + 1:
        raise ModelError(f"|J| must be t+1={t + 1}, got {len(set(J))}")


def _leaders(u) -> Tuple[int, ...]:
    return u.leaders if isinstance(u, LeaderPermutation) else tuple(u)


def candidate_blocks(inst, j: int, J: Sequence[int], u, d: Sequence[int]) -> set[BlockId]:
    """U_J minus every block holding two of the files of leaders u_1..u_j."""
    u = _leaders(u)
    _check_step(j, J, u)
    served = {d[k - 1] for k in u[:j]}
    return {S for S in union_blocks(inst, J, d) if len(served.intersection(S)) < 2}


def partition_groups(inst, j: int, J: Sequence[int], u, d: Sequence[int]) -> dict[GroupTag, list[BlockId]]:
    """Split the step-j candidates for J by residue.

    Within a group, blocks demanded by u_j come first; each segment is sorted.
    Groups are returned in residue order.
    """
    u = _leaders(u)
    J = tuple(sorted(J))
    leader = u[j - 1]
    f_lead = d[leader - 1]
    demanded = _demanded(d, J)
    groups: dict[Tuple[int, ...], list[BlockId]] = {}
    for S in candidate_blocks(inst, j, J, u, d):
        residue = tuple(x for x in S if x not in demanded)
        groups.setdefault(residue, []).append(S)
    out = {}
    for residue in sorted(groups):
        blocks = groups[residue]
        own = sorted(S for S in blocks if f_lead in S)
        rest = sorted(S for S in blocks if f_lead not in S)
        out[GroupTag(j, J, residue, leader)] = own + rest
    return out


def group_combination_count(inst, j: int, J: Sequence[int], residue: Sequence[int], d: Sequence[int], u) -> int:
    """Number of rows emitted for group (j, J, residue).

    This is the number of group blocks demanded by u_j; it coincides with
    :func:`closed_form_count` whenever the residue avoids the files of the
    earlier leaders and those files are all demanded inside J.
    """
    u = _leaders(u)
    tag = GroupTag(j, tuple(sorted(J)), tuple(sorted(residue)), u[j - 1])
    blocks = partition_groups(inst, j, J, u, d).get(tag, [])
    f_lead = d[u[j - 1] - 1]
    return sum(1 for S in blocks if f_lead in S)


def closed_form_count(inst, j: int, J: Sequence[int], residue: Sequence[int], d: Sequence[int]) -> int:
    """C(|files demanded in J| - j, r - |residue| - 1)."""
    n_dem = len(_demanded(d, J))
    top, bottom = n_dem - j, inst.overlap - len(residue) - 1
    if top < 0 or bottom < 0:
        return 0
    return comb(top, bottom)


def _xor_terms(S: BlockId, J: Tuple[int, ...], d: Sequence[int]) -> FrozenSet[SubBlock]:
    return frozenset(
        SubBlock(S, tuple(x for x in J if x != k)) for k in J if d[k - 1] in S
    )


def emit_group_combinations(inst, group: GroupTag, blocks: Sequence[BlockId], d: Sequence[int]) -> list[LinearCombination]:
    f_lead = d[group.leader - 1]
    n = sum(1 for S in blocks if f_lead in S)
    if any(f_lead not in S for S in blocks[:n]):
        raise ModelError(f"blocks of {group} not ordered with u_j-demanded blocks first")
    J = group.user_set
    r = inst.overlap
    heads = blocks[:n]
    tails = [(set(S), _xor_terms(S, J, d)) for S in blocks[n:]]
    out = []
    for p, Sp in enumerate(heads, start=1):
        row = set(_xor_terms(Sp, J, d))
        sp = set(Sp)
        for sq, terms in tails:
            if len(sp & sq) == r - 1:
                row ^= terms
        out.append(LinearCombination(frozenset(row), group, p))
    return out


def n_steps(inst: ProblemInstance, d: Sequence[int]) -> int:
    t = inst.require_integral_t()
    return min(inst.n_files - inst.overlap + 1, inst.n_users - t, demand_distinct_count(d))


def build_delivery(inst: ProblemInstance, d: Sequence[int], leaders: Optional[LeaderPermutation] = None) -> Transmission:
    """Concatenate the group rows over steps, user sets J and residues.

    t = 0 needs no special handling (every J is {u_j} and each group holds a
    single block, sent uncoded); t = K yields zero steps.
    """
    t = inst.require_integral_t()
    d = check_demand(inst, d)
    if leaders is None:
        leaders = choose_leaders(d)
    else:
        choose_leaders(d, "explicit", leaders.leaders)
    u = leaders.leaders
    combos: list[LinearCombination] = []
    for j in range(1, n_steps(inst, d) + 1):
        lead = u[j - 1]
        others = [k for k in range(1, inst.n_users + 1) if k not in u[:j]]
        user_sets = sorted(tuple(sorted(rest + (lead,))) for rest in combinations(others, t))
        for J in user_sets:
            for tag, blocks in partition_groups(inst, j, J, u, d).items():
                combos.extend(emit_group_combinations(inst, tag, blocks, d))
    return Transmission(inst, d, leaders, tuple(combos))


def step_load(inst: ProblemInstance, j: int) -> Fraction:
    """Normalized length of step j: C(N-j,r-1) C(K-j,t) / (C(N-1,r-1) C(K,t))."""
    t = inst.require_integral_t()
    N, K, r = inst.n_files, inst.n_users, inst.overlap
    return Fraction(comb(N - j, r - 1) * comb(K - j, t), comb(N - 1, r - 1) * comb(K, t))
