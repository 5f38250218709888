"""Exact GF(2) decoding oracle and load accounting.

A user decodes a sub-block iff its unit vector lies in the span of the
user's cached unit rows and every received combination. This is necessary
and sufficient for linear decoding and ignores how the recovery happens.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Hashable, Iterable, Optional, Sequence

from .bounds import load_coefficient
from .gf2 import Gf2Matrix
from .model import (
    LeaderPermutation,
    ProblemInstance,
    check_demand,
    choose_leaders,
    demand_distinct_count,
    instance_at_t,
)
from .placement import CacheAssignment, man_placement, subblock_universe
from .scheme import Transmission, build_delivery


@dataclass(frozen=True)
class UserOutcome:
    desired: frozenset
    recovered: frozenset
    missing: frozenset


@dataclass(frozen=True)
class DecodeReport:
    per_user: dict

    @property
    def all_decodable(self) -> bool:
        return all(not o.missing for o in self.per_user.values())

    def missing_lists(self) -> dict[int, list[str]]:
        return {k: sorted(str(s) for s in o.missing) for k, o in self.per_user.items()}


def knowledge_matrix(
    universe: Sequence[Hashable], cached: Iterable[Hashable], rows: Iterable[Iterable[Hashable]]
) -> Gf2Matrix:
    m = Gf2Matrix(universe)
    for s in cached:
        m.add_symbols([s])
    for terms in rows:
        m.add_symbols(terms)
    return m


def user_knowledge_matrix(user: int, cache: CacheAssignment, tx: Transmission) -> Gf2Matrix:
    universe = subblock_universe(cache.instance)
    return knowledge_matrix(universe, sorted(cache.per_user[user]), tx.term_sets())


def decode_symbols(matrix: Gf2Matrix, desired: Iterable[Hashable]) -> UserOutcome:
    desired = frozenset(desired)
    recovered = frozenset(s for s in desired if matrix.knows(s))
    return UserOutcome(desired, recovered, desired - recovered)


def decode_check(inst: ProblemInstance, d: Sequence[int], cache: CacheAssignment, tx: Transmission) -> DecodeReport:
    d = check_demand(inst, d)
    universe = subblock_universe(inst)
    rows = tx.term_sets()
    per_user = {}
    for k in range(1, inst.n_users + 1):
        m = knowledge_matrix(universe, sorted(cache.per_user[k]), rows)
        desired = [sb for sb in universe if d[k - 1] in sb.block]
        per_user[k] = decode_symbols(m, desired)
    return DecodeReport(per_user)


def measured_load(inst: ProblemInstance, tx) -> Fraction:
    """Number of combinations times the sub-block size, in file units."""
    n = len(tx)
    if n == 0:
        return Fraction(0)
    return Fraction(n, inst.file_size_units)


@dataclass(frozen=True)
class VerificationResult:
    decodable: bool
    load: Fraction
    matches_coefficient: bool
    report: Optional[DecodeReport] = field(default=None, compare=False, repr=False)
    leaders: Optional[LeaderPermutation] = field(default=None, compare=False, repr=False)


def verify_demand(
    inst: ProblemInstance,
    d: Sequence[int],
    leaders: Optional[LeaderPermutation] = None,
) -> VerificationResult:
    d = check_demand(inst, d)
    leaders = leaders or choose_leaders(d)
    cache = man_placement(inst)
    tx = build_delivery(inst, d, leaders)
    report = decode_check(inst, d, cache, tx)
    load = measured_load(inst, tx)
    t = int(inst.t)
    target = load_coefficient(inst.n_files, inst.n_users, inst.overlap, t, demand_distinct_count(d))
    return VerificationResult(report.all_decodable, load, load == target, report, leaders)


def report_json(inst: ProblemInstance, d: Sequence[int], result: VerificationResult) -> str:
    payload = {
        "instance": inst.params,
        "demand": list(d),
        "leaders": list(result.leaders.leaders) if result.leaders else None,
        "load": str(result.load),
        "decodable": result.decodable,
        "matches_coefficient": result.matches_coefficient,
        "missing": {str(k): v for k, v in result.report.missing_lists().items()} if result.report else {},
    }
    return json.dumps(payload, sort_keys=True, indent=2)


def theorem2_case(N: int, K: int, r: int, t: int, d: Sequence[int]) -> tuple[int, ...]:
    """Optimality cases covering (N,K,r,t,d); empty when none applies."""
    cases = []
    if N >= K and demand_distinct_count(d) == K:
        cases.append(1)
    if r in {1, 2, N - 1, N}:
        cases.append(2)
    if t in {0, 1, 2, K - 1, K}:
        cases.append(3)
    return tuple(cases)


@dataclass(frozen=True)
class SweepRecord:
    N: int
    K: int
    r: int
    t: int
    demand: tuple
    cases: tuple
    decodable: bool
    load: Fraction
    coefficient: Fraction

    @property
    def must_pass(self) -> bool:
        return bool(self.cases)

    @property
    def passed(self) -> bool:
        return self.decodable and self.load == self.coefficient


@dataclass
class SweepReport:
    records: list

    @property
    def failures(self) -> list:
        return [rec for rec in self.records if rec.must_pass and not rec.passed]

    @property
    def unclaimed(self) -> list:
        return [rec for rec in self.records if not rec.must_pass]

    def worst_case(self) -> dict:
        """Max load over demands per instance, keyed by (N,K,r,t)."""
        out: dict = {}
        for rec in self.records:
            key = (rec.N, rec.K, rec.r, rec.t)
            out[key] = max(out.get(key, Fraction(0)), rec.load)
        return out

    def to_csv(self) -> str:
        lines = ["N,K,r,t,demand,cases,decodable,load,coefficient,status"]
        for rec in self.records:
            status = "PASS" if rec.passed else ("FAIL" if rec.must_pass else "UNVERIFIED")
            lines.append(
                f"{rec.N},{rec.K},{rec.r},{rec.t},{'-'.join(map(str, rec.demand))},"
                f"{'|'.join(map(str, rec.cases))},{int(rec.decodable)},{rec.load},{rec.coefficient},{status}"
            )
        return "\n".join(lines) + "\n"


def _demands(N: int, K: int, demand_filter: str):
    for d in product(range(1, N + 1), repeat=K):
        if demand_filter == "distinct" and len(set(d)) != K:
            continue
        yield d


def sweep_instance(N: int, K: int, r: int, t: int, demand_filter: str = "theorem2") -> list[SweepRecord]:
    """Run the oracle on every demand of one instance.

    ``demand_filter`` is ``all``, ``distinct`` or ``theorem2`` (only demands
    inside an optimality case).
    """
    inst = instance_at_t(N, K, r, t)
    cache = man_placement(inst)
    universe = subblock_universe(inst)
    base = {k: knowledge_matrix(universe, sorted(cache.per_user[k]), ()) for k in range(1, K + 1)}
    wanted = {f: [sb for sb in universe if f in sb.block] for f in range(1, N + 1)}
    coeff = {s: load_coefficient(N, K, r, t, s) for s in range(1, min(K, N) + 1)}
    out = []
    for d in _demands(N, K, demand_filter):
        cases = theorem2_case(N, K, r, t, d)
        if demand_filter == "theorem2" and not cases:
            continue
        tx = build_delivery(inst, d)
        rows = [base[1].vector(terms) for terms in tx.term_sets()]
        ok = True
        for k in range(1, K + 1):
            m = base[k].copy()
            for v in rows:
                m.add_row(v)
            if not all(m.knows(sb) for sb in wanted[d[k - 1]]):
                ok = False
                break
        out.append(
            SweepRecord(N, K, r, t, d, cases, ok, measured_load(inst, tx), coeff[len(set(d))])
        )
    return out


def _sweep_cell(args):
    return sweep_instance(*args)


def sweep_verify(
    n_range: Iterable[int],
    k_range: Iterable[int],
    r_range: Optional[Iterable[int]] = None,
    t_range: Optional[Iterable[int]] = None,
    demand_filter: str = "theorem2",
    workers: int = 1,
) -> SweepReport:
    cells = []
    for N in n_range:
        for K in k_range:
            for r in (r_range if r_range is not None else range(1, N + 1)):
                if not 1 <= r <= N:
                    continue
                for t in (t_range if t_range is not None else range(0, K + 1)):
                    if 0 <= t <= K:
                        cells.append((N, K, r, t, demand_filter))
    records: list = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_sweep_cell, cells):
                records.extend(chunk)
    else:
        for cell in cells:
            records.extend(_sweep_cell(cell))
    return SweepReport(records)
