"""Explicit two-request delivery codes for the K <= 4, M = N/K cases.

Each user asks for two independent files. Placement is MAN with t = 1, so
the subfile F_{i,{w}} is cached only by user w. The codes below are literal
transcriptions: each pair (i, w) stands for F_{i,{w}}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Tuple

from .model import ModelError, enumerate_blocks, instance_at_t
from .verify import (
    DecodeReport,
    VerificationResult,
    decode_symbols,
    knowledge_matrix,
)


class Subfile(NamedTuple):
    file: int
    cached_by: int

    def __str__(self) -> str:
        return f"F{self.file}|W{{{self.cached_by}}}"


@dataclass(frozen=True)
class MultiRequestCase:
    case_id: str
    n_files: int
    n_users: int
    demands: Tuple[Tuple[int, ...], ...]
    leader_perm: Tuple[int, ...]
    combos: Tuple[Tuple[Subfile, ...], ...]
    paper_load: Fraction
    prior_load: Fraction  # cited for reference only, not reconstructed

    @property
    def t(self) -> int:
        return 1

    @property
    def memory(self) -> Fraction:
        return Fraction(self.n_files, self.n_users)


def _code(*pairs):
    return tuple(tuple(Subfile(i, w) for i, w in combo) for combo in pairs)


_CASES = {
    "D7": MultiRequestCase(
        "D7", 3, 3,
        ((1, 2), (1, 3), (2, 3)),
        (1, 2, 3),
        _code(
            [(1, 2), (1, 1)], [(1, 3), (3, 1)], [(2, 2), (3, 1)],
            [(2, 3), (2, 1)], [(3, 3), (3, 2)],
        ),
        Fraction(5, 3), Fraction(2),
    ),
    "D15p": MultiRequestCase(
        "D15p", 5, 4,
        ((1, 2), (1, 3), (2, 3), (4, 5)),
        (4, 1, 2, 3),
        _code(
            [(4, 1), (1, 4)], [(4, 2), (1, 4)], [(4, 3), (3, 4)],
            [(5, 1), (2, 4)], [(5, 2), (3, 4)], [(5, 3), (2, 4)],
            [(1, 2), (1, 1)], [(1, 3), (3, 1)], [(2, 2), (3, 1)],
            [(2, 3), (2, 1)], [(3, 3), (3, 2)],
        ),
        Fraction(11, 4), Fraction(3),
    ),
    "D17p": MultiRequestCase(
        "D17p", 4, 4,
        ((1, 2), (1, 3), (1, 4), (2, 3)),
        (3, 4, 1, 2),
        _code(
            [(1, 1), (1, 3)], [(1, 2), (1, 3)], [(1, 4), (3, 3)],
            [(4, 1), (2, 3)], [(4, 2), (3, 3)], [(4, 4), (2, 3)],
            [(3, 1), (1, 4)], [(3, 2), (3, 4)], [(2, 1), (2, 4)],
            [(2, 2), (1, 4)],
        ),
        Fraction(10, 4), Fraction(11, 4),
    ),
    "D20p": MultiRequestCase(
        "D20p", 3, 4,
        ((1, 2), (1, 2), (1, 3), (2, 3)),
        (1, 3, 4),
        _code(
            [(1, 2), (1, 1)], [(1, 3), (1, 1)], [(1, 4), (3, 1)],
            [(2, 2), (2, 1)], [(2, 3), (3, 1)], [(2, 4), (2, 1)],
            [(3, 2), (2, 3)], [(3, 4), (3, 3)],
        ),
        Fraction(2), Fraction(9, 4),
    ),
}

CASE_IDS = tuple(_CASES)


def multirequest_code(case_id: str) -> MultiRequestCase:
    try:
        return _CASES[case_id]
    except KeyError:
        raise ModelError(f"unknown multi-request case {case_id!r}; known: {', '.join(CASE_IDS)}") from None


def subfile_universe(case: MultiRequestCase) -> list[Subfile]:
    return [Subfile(i, w) for i in range(1, case.n_files + 1) for w in range(1, case.n_users + 1)]


def verify_multirequest(case_id: str, combos: Optional[Sequence[Sequence[Subfile]]] = None) -> VerificationResult:
    """Oracle check that every user recovers both of its files.

    ``combos`` overrides the transcribed code (used for mutation tests).
    """
    case = multirequest_code(case_id)
    rows = case.combos if combos is None else tuple(tuple(c) for c in combos)
    universe = subfile_universe(case)
    for combo in rows:
        for sf in combo:
            if sf not in universe:
                raise ModelError(f"{sf} outside the subfile universe of {case_id}")
    per_user = {}
    for k in range(1, case.n_users + 1):
        cached = [sf for sf in universe if sf.cached_by == k]
        m = knowledge_matrix(universe, cached, rows)
        desired = [sf for sf in universe if sf.file in case.demands[k - 1]]
        per_user[k] = decode_symbols(m, desired)
    report = DecodeReport(per_user)
    load = Fraction(len(rows), case.n_users)
    return VerificationResult(report.all_decodable, load, load == case.paper_load, report)


def correlated_equivalent(case_id: str):
    """Correlated-file instance and demand for a case that is a pure relabeling.

    Blocks of the r=2, N=3 library play the role of the three requested
    files (lexicographic block i <-> file i); each user's two requested
    files are then exactly the two blocks of one correlated file.
    """
    case = multirequest_code(case_id)
    if case.n_files != 3:
        raise ModelError(f"{case_id} has no pure correlated-file equivalent")
    inst = instance_at_t(3, case.n_users, 2, 1)
    blocks = enumerate_blocks(inst)
    file_of_pair = {}
    for f in range(1, 4):
        idx = tuple(sorted(blocks.index(S) + 1 for S in blocks if f in S))
        file_of_pair[idx] = f
    d = tuple(file_of_pair[tuple(sorted(req))] for req in case.demands)
    return inst, d, blocks


def subblock_to_subfile(sb, blocks) -> Subfile:
    return Subfile(blocks.index(sb.block) + 1, sb.cached_by[0])
