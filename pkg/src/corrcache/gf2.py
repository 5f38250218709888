"""Incremental GF(2) row echelon form over int bitsets."""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence


class Gf2Matrix:
    """Rows over a fixed symbol universe, kept in echelon form.

    Each stored row is keyed by its highest set bit, so reducing a vector
    only ever clears bits from the top down.
    """

    def __init__(self, columns: Sequence[Hashable]):
        self.columns = list(columns)
        self.column_index: Mapping[Hashable, int] = {c: i for i, c in enumerate(self.columns)}
        if len(self.column_index) != len(self.columns):
            raise ValueError("duplicate symbols in column universe")
        self._pivots: dict[int, int] = {}

    @property
    def width(self) -> int:
        return len(self.columns)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def vector(self, symbols: Iterable[Hashable]) -> int:
        v = 0
        for s in symbols:
            try:
                v ^= 1 << self.column_index[s]
            except KeyError:
                raise ValueError(f"symbol {s} outside the column universe") from None
        return v

    def reduce(self, v: int) -> int:
        pivots = self._pivots
        while v:
            h = v.bit_length() - 1
            row = pivots.get(h)
            if row is None:
                return v
            v ^= row
        return 0

    def add_row(self, v: int) -> bool:
        """Insert a row; returns True when it raised the rank."""
        v = self.reduce(v)
        if v:
            self._pivots[v.bit_length() - 1] = v
            return True
        return False

    def add_symbols(self, symbols: Iterable[Hashable]) -> bool:
        return self.add_row(self.vector(symbols))

    def in_span(self, v: int) -> bool:
        return self.reduce(v) == 0

    def knows(self, symbol: Hashable) -> bool:
        return self.in_span(1 << self.column_index[symbol])

    def copy(self) -> "Gf2Matrix":
        other = Gf2Matrix.__new__(Gf2Matrix)
        other.columns = self.columns
        other.column_index = self.column_index
        other._pivots = dict(self._pivots)
        return other


def gf2_rank(rows: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in rows:
        while v:
            h = v.bit_length() - 1
            if h not in pivots:
                pivots[h] = v
                break
            v ^= pivots[h]
    return len(pivots)
