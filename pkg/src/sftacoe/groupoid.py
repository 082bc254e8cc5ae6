"""Elements of the groupoids ``G^a x| Z`` and ``G^{s,u} x| Z^2`` of a Markov shift.

Elements carry depth witnesses that are recomputed on construction, so an
element that exists is a valid element.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .sft import (BiPoint, SftError, SftMatrix, Word, asymptotic_pair, check_point,
                  is_admissible, left_tail_match, periodic_orbits, right_tail_match, shift)


class NotInGroupoid(SftError):
    pass


class NotComposable(SftError):
    pass


@dataclass(frozen=True)
class AElement:
    """``(x, n, z)`` with ``(phi^n x, z)`` asymptotic, ``phi = sigma^direction``."""

    x: BiPoint
    n: int
    z: BiPoint
    direction: int = 1
    witness: tuple[int, int] = field(init=False, compare=False)

    def __post_init__(self):
        w = asymptotic_pair(shift(self.x, self.direction * self.n), self.z)
        if w is None:
            raise NotInGroupoid(f"({self.x}, {self.n}, {self.z}) is not in G^a x| Z")
        object.__setattr__(self, "witness", w)

    @classmethod
    def unit(cls, x: BiPoint, direction: int = 1) -> "AElement":
        return cls(x, 0, x, direction)

    def is_unit(self) -> bool:
        return self.n == 0 and self.x == self.z


def a_compose(g1: AElement, g2: AElement) -> AElement:
    """``(x, n, y) . (y, m, w) = (x, n + m, w)``."""
    if g1.z != g2.x or g1.direction != g2.direction:
        raise NotComposable("range of the second element is not the source of the first")
    return AElement(g1.x, g1.n + g2.n, g2.z, g1.direction)


def a_inverse(g: AElement) -> AElement:
    return AElement(g.z, -g.n, g.x, g.direction)


@dataclass(frozen=True)
class SUElement:
    """``(x, p, q, y)`` with ``(sigma^p x, y)`` stable and ``(sigma^q x, y)`` unstable."""

    x: BiPoint
    p: int
    q: int
    y: BiPoint
    witness: tuple[int, int] = field(init=False, compare=False)

    def __post_init__(self):
        ws = right_tail_match(shift(self.x, self.p), self.y)
        wu = left_tail_match(shift(self.x, self.q), self.y)
        if ws is None or wu is None:
            raise NotInGroupoid(f"({self.x}, {self.p}, {self.q}, {self.y}) is not in G^(s,u) x| Z^2")
        object.__setattr__(self, "witness", (ws, wu))

    @classmethod
    def unit(cls, x: BiPoint) -> "SUElement":
        return cls(x, 0, 0, x)


def su_compose(g1: SUElement, g2: SUElement) -> SUElement:
    """``(x, p, q, y) . (y, p', q', y') = (x, p + p', q + q', y')``."""
    if g1.y != g2.x:
        raise NotComposable("range of the second element is not the source of the first")
    return SUElement(g1.x, g1.p + g2.p, g1.q + g2.q, g2.y)


def su_inverse(g: SUElement) -> SUElement:
    return SUElement(g.y, -g.p, -g.q, g.x)


def diagonal_part(g: SUElement) -> AElement | None:
    """The element ``(x, p, y)`` of ``G^a x| Z`` when ``p == q``."""
    if g.p != g.q:
        return None
    return AElement(g.x, g.p, g.y)


def _shortest_path(matrix: SftMatrix, a: int, b: int) -> Word | None:
    """Shortest admissible word of length >= 2 from a to b."""
    parent: dict[int, int | None] = {s: None for s in matrix.successors(a)}
    queue = deque(parent)
    while queue:
        v = queue.popleft()
        if v == b:
            path = [v]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return (a,) + tuple(reversed(path))
        for s in matrix.successors(v):
            if s not in parent:
                parent[s] = v
                queue.append(s)
    return None


def cylinder_point(matrix: SftMatrix, word: Word, left_cycle: Word, right_cycle: Word) -> BiPoint | None:
    """A point with ``x_0 .. x_{k-1} = word`` whose tails are the given cycles."""
    for j, s in enumerate(right_cycle):
        to_right = _shortest_path(matrix, word[-1], s)
        if to_right is not None:
            right = right_cycle[j:] + right_cycle[:j]
            break
    else:
        return None
    for j, t in enumerate(left_cycle):
        from_left = _shortest_path(matrix, t, word[0])
        if from_left is not None:
            left = left_cycle[j + 1:] + left_cycle[:j + 1]
            break
    else:
        return None
    prefix = from_left[1:-1]
    core = prefix + tuple(word) + to_right[1:-1]
    return check_point(matrix, BiPoint(left, core, right, -len(prefix)))


def essential_freeness_evidence(matrix: SftMatrix, n: int, word: Word, search_depth: int = 6) -> bool:
    """Look for a point in the cylinder ``[word]`` that is not n-asymptotically periodic.

    A ``True`` answer comes with a certificate (a point ``x`` in the
    cylinder with ``(sigma^n x, x)`` not asymptotic), so the cylinder is
    not contained in the n-asymptotic periodic set.  ``False`` only means
    no certificate was found among tails of period ``<= search_depth``.
    """
    return freeness_certificate(matrix, n, word, search_depth) is not None


def freeness_certificate(matrix: SftMatrix, n: int, word: Word, search_depth: int = 6) -> BiPoint | None:
    if n == 0:
        raise SftError("every point is 0-asymptotically periodic; n must be nonzero")
    word = tuple(word)
    if not word or not is_admissible(matrix, word):
        raise SftError(f"{word} is not a nonempty admissible word")
    orbits = periodic_orbits(matrix, search_depth)
    if not orbits:
        return None
    left_cycle = orbits[0].word
    for orbit in orbits:
        if n % orbit.length == 0:
            continue  # sigma^n fixes a tail of this period
        x = cylinder_point(matrix, word, left_cycle, orbit.word)
        if x is not None and asymptotic_pair(shift(x, n), x) is None:
            return x
    return None
