"""Problem instances, correlated-file blocks, demands and leaders.

Files and users are 1-based everywhere, including serialized output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import NamedTuple, Optional, Sequence, Tuple, Union

Rational = Union[int, Fraction, str]
BlockId = Tuple[int, ...]


class ModelError(ValueError):
    """Raised when instance parameters or demands violate the model."""


def parse_rational(value: Rational) -> Fraction:
    """Parse an exact rational; floats are refused to keep arithmetic exact."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ModelError(f"memory must be an exact rational, got float {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ModelError(f"memory must be given as p/q, got {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"cannot parse rational {value!r}") from exc
    raise ModelError(f"unsupported rational type {type(value).__name__}")


class SubBlock(NamedTuple):
    """Sub-block W_{S,V}: the part of block S cached exactly by users V."""

    block: BlockId
    cached_by: Tuple[int, ...]

    def __str__(self) -> str:
        s = ",".join(map(str, self.block))
        v = ",".join(map(str, self.cached_by))
        return f"S{{{s}}}|V{{{v}}}"

    @classmethod
    def parse(cls, text: str) -> "SubBlock":
        try:
            s_part, v_part = text.split("|")
            assert s_part.startswith("S{") and s_part.endswith("}")
            assert v_part.startswith("V{") and v_part.endswith("}")
            s = tuple(int(x) for x in s_part[2:-1].split(",") if x)
            v = tuple(int(x) for x in v_part[2:-1].split(",") if x)
        except (ValueError, AssertionError) as exc:
            raise ModelError(f"malformed sub-block id {text!r}") from exc
        return cls(tuple(sorted(s)), tuple(sorted(v)))


@dataclass(frozen=True)
class ProblemInstance:
    n_files: int
    n_users: int
    memory: Fraction
    overlap: int

    @property
    def t(self) -> Fraction:
        return self.n_users * self.memory * self.overlap / self.n_files

    @property
    def integral_t(self) -> bool:
        t = self.t
        return t.denominator == 1 and 0 <= t <= self.n_users

    def require_integral_t(self) -> int:
        if not self.integral_t:
            raise ModelError(
                f"scheme construction needs integral t = KMr/N in [0:K], got t = {self.t}"
            )
        return int(self.t)

    @property
    def file_size_units(self) -> Optional[int]:
        """Number of sub-blocks per file, i.e. C(N-1,r-1)*C(K,t); None if t is fractional."""
        if not self.integral_t:
            return None
        return comb(self.n_files - 1, self.overlap - 1) * comb(self.n_users, int(self.t))

    @property
    def params(self) -> dict:
        return {
            "N": self.n_files,
            "K": self.n_users,
            "M": str(self.memory),
            "r": self.overlap,
            "t": str(self.t),
        }


def new_instance(N: int, K: int, M: Rational, r: int) -> ProblemInstance:
    memory = parse_rational(M)
    if N < 1:
        raise ModelError(f"need at least one file, got N={N}")
    if K < 1:
        raise ModelError(f"need at least one user, got K={K}")
    if r < 1:
        raise ModelError(f"overlap r must be >= 1, got r={r}")
    if r > N:
        raise ModelError(f"overlap r={r} exceeds the number of files N={N}")
    if memory < 0:
        raise ModelError(f"memory must be non-negative, got M={memory}")
    if memory > Fraction(N, r):
        raise ModelError(f"memory M={memory} exceeds the library size N/r={Fraction(N, r)}")
    return ProblemInstance(N, K, memory, r)


def instance_at_t(N: int, K: int, r: int, t: int) -> ProblemInstance:
    """Instance whose memory sits on the corner point t = KMr/N."""
    return new_instance(N, K, Fraction(N * t, K * r), r)


def enumerate_blocks(inst: ProblemInstance) -> list[BlockId]:
    return list(combinations(range(1, inst.n_files + 1), inst.overlap))


def blocks_of_file(inst: ProblemInstance, i: int) -> list[BlockId]:
    if not 1 <= i <= inst.n_files:
        raise ModelError(f"file index {i} outside [1, {inst.n_files}]")
    return [S for S in enumerate_blocks(inst) if i in S]


def check_demand(inst: ProblemInstance, d: Sequence[int]) -> Tuple[int, ...]:
    d = tuple(int(x) for x in d)
    if len(d) != inst.n_users:
        raise ModelError(f"demand has {len(d)} entries, expected K={inst.n_users}")
    for k, f in enumerate(d, start=1):
        if not 1 <= f <= inst.n_files:
            raise ModelError(f"user {k} demands file {f} outside [1, {inst.n_files}]")
    return d


def demand_distinct_count(d: Sequence[int]) -> int:
    return len(set(d))


@dataclass(frozen=True)
class LeaderPermutation:
    leaders: Tuple[int, ...]
    policy: str = "first-occurrence-ascending"


def choose_leaders(
    d: Sequence[int],
    policy: str = "first-occurrence-ascending",
    explicit: Optional[Sequence[int]] = None,
) -> LeaderPermutation:
    """Pick one leader per distinct demanded file.

    The default takes the lowest-indexed user for each file, ordered by the
    first occurrence of that file in ``d``. ``policy="explicit"`` validates
    and returns the caller's ordering instead.
    """
    d = tuple(d)
    if policy == "first-occurrence-ascending":
        seen: dict[int, int] = {}
        for k, f in enumerate(d, start=1):
            seen.setdefault(f, k)
        return LeaderPermutation(tuple(seen.values()), policy)
    if policy != "explicit":
        raise ModelError(f"unknown leader policy {policy!r}")
    if explicit is None:
        raise ModelError("explicit leader policy needs a permutation")
    leaders = tuple(int(k) for k in explicit)
    if any(not 1 <= k <= len(d) for k in leaders):
        raise ModelError(f"leader outside [1, {len(d)}]: {leaders}")
    files = [d[k - 1] for k in leaders]
    if len(set(files)) != len(files) or set(files) != set(d):
        raise ModelError(f"leaders {leaders} are not one user per demanded file")
    return LeaderPermutation(leaders, policy)


def all_leader_permutations(d: Sequence[int]):
    """Yield every valid leader permutation (any leader per file, any order)."""
    from itertools import permutations, product

    d = tuple(d)
    by_file: dict[int, list[int]] = {}
    for k, f in enumerate(d, start=1):
        by_file.setdefault(f, []).append(k)
    for pick in product(*by_file.values()):
        for perm in permutations(pick):
            yield LeaderPermutation(tuple(perm), "explicit")


def surjections(n: int, s: int) -> int:
    """Number of onto maps from an n-set to an s-set (inclusion-exclusion)."""
    return sum((-1) ** i * comb(s, i) * (s - i) ** n for i in range(s + 1))


def count_demands_with_s_distinct(N: int, K: int, s: int) -> int:
    if not 1 <= s <= min(K, N):
        raise ModelError(f"s={s} outside [1, min(K,N)={min(K, N)}]")
    return comb(N, s) * surjections(K, s)
