"""Finite-window functions and sliding block codes on eventually periodic points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .sft import BiPoint, SftError, SftMatrix, Word, admissible_words, is_admissible


class MissingBlock(SftError):
    pass


def _blocks(matrix: SftMatrix, lo: int, hi: int) -> list[Word]:
    return list(admissible_words(matrix, hi - lo + 1))


@dataclass(frozen=True)
class WindowFunction:
    """An integer function of the coordinates ``x_lo .. x_hi`` (inclusive).

    ``lo = -m`` and ``hi = a`` for a window ``[-m, a]``.  Every continuous
    integer-valued function on a shift space has this form.
    """

    lo: int
    hi: int
    table: Mapping[Word, int]

    def __post_init__(self):
        if self.lo > self.hi:
            raise SftError("empty window")
        object.__setattr__(self, "table", {tuple(k): int(v) for k, v in self.table.items()})

    @classmethod
    def constant(cls, matrix: SftMatrix, value: int) -> "WindowFunction":
        return cls(0, 0, {(s,): value for s in range(1, matrix.n + 1)})

    @classmethod
    def from_function(cls, matrix: SftMatrix, lo: int, hi: int,
                      f: Callable[[Word], int]) -> "WindowFunction":
        return cls(lo, hi, {b: f(b) for b in _blocks(matrix, lo, hi)})

    def __call__(self, x: BiPoint) -> int:
        block = x.window(self.lo, self.hi + 1)
        try:
            return self.table[block]
        except KeyError:
            raise MissingBlock(f"no value for block {block}") from None

    def values(self) -> set[int]:
        return set(self.table.values())

    def is_constant(self) -> bool:
        return len(self.values()) == 1

    def sign_definite(self) -> int:
        """+1 if every value is positive, -1 if every value is negative, else 0."""
        vals = self.values()
        if vals and all(v > 0 for v in vals):
            return 1
        if vals and all(v < 0 for v in vals):
            return -1
        return 0

    def is_total_on(self, matrix: SftMatrix) -> bool:
        return all(b in self.table for b in _blocks(matrix, self.lo, self.hi))

    def to_json(self) -> dict:
        return {"window": [self.lo, self.hi],
                "table": [[list(k), v] for k, v in sorted(self.table.items())]}

    @classmethod
    def from_json(cls, data) -> "WindowFunction":
        if isinstance(data, dict) and "constant" in data:
            n = int(data["n"])
            return cls(0, 0, {(s,): int(data["constant"]) for s in range(1, n + 1)})
        lo, hi = data["window"]
        return cls(lo, hi, {tuple(k): v for k, v in data["table"]})


@dataclass(frozen=True)
class SlidingBlockCode:
    """``h(x)_i = table[x_{i+lo} .. x_{i+hi}]``."""

    lo: int
    hi: int
    table: Mapping[Word, int]

    def __post_init__(self):
        if self.lo > self.hi:
            raise SftError("empty window")
        object.__setattr__(self, "table", {tuple(k): int(v) for k, v in self.table.items()})

    @classmethod
    def identity(cls, matrix: SftMatrix) -> "SlidingBlockCode":
        return cls(0, 0, {(s,): s for s in range(1, matrix.n + 1)})

    @classmethod
    def from_function(cls, matrix: SftMatrix, lo: int, hi: int,
                      f: Callable[[Word], int]) -> "SlidingBlockCode":
        return cls(lo, hi, {b: f(b) for b in _blocks(matrix, lo, hi)})

    def symbol(self, block: Word) -> int:
        try:
            return self.table[block]
        except KeyError:
            raise MissingBlock(f"no image for block {block}") from None

    def __call__(self, x: BiPoint) -> BiPoint:
        lo, hi = self.lo, self.hi

        def coord(i: int) -> int:
            return self.symbol(x.window(i + lo, i + hi + 1))

        # below x.offset - hi only the left tail is read, from x.end - lo on only the right tail
        return BiPoint.from_coords(coord, x.offset - hi, x.end - lo, len(x.left), len(x.right))

    def is_identity(self) -> bool:
        return self.lo == 0 and self.hi == 0 and all(k == (v,) for k, v in self.table.items())

    def maps_into(self, source: SftMatrix, target: SftMatrix) -> bool:
        """Images of all admissible (width+1)-blocks are admissible 2-words of the target."""
        width = self.hi - self.lo + 1
        for w in admissible_words(source, width + 1):
            a, b = self.table.get(w[:-1]), self.table.get(w[1:])
            if a is None or b is None or not is_admissible(target, (a, b)):
                return False
        return True

    def to_json(self) -> dict:
        return {"window": [self.lo, self.hi],
                "table": [[list(k), v] for k, v in sorted(self.table.items())]}

    @classmethod
    def from_json(cls, data) -> "SlidingBlockCode":
        if isinstance(data, dict) and data.get("identity"):
            n = int(data["n"])
            return cls(0, 0, {(s,): s for s in range(1, n + 1)})
        lo, hi = data["window"]
        return cls(lo, hi, {tuple(k): v for k, v in data["table"]})
