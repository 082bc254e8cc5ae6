"""Two-sided topological Markov shifts on eventually periodic points.

A point of the shift space is a bi-infinite sequence ``(x_n)`` over the
symbols ``1..N`` with ``A(x_n, x_{n+1}) = 1`` everywhere.  Only eventually
periodic points are representable; they are dense and closed under the
shift, the bracket and sliding block codes, which is all the finite-depth
checks in this package need.

The literal syntax for points is ``"1^inf.(2 1).1^inf@0"``: a left period,
a core word and a right period, with ``@k`` giving the coordinate of the
first core symbol.  Multi-symbol periods are parenthesised, as in
``"(1 2)^inf.().2^inf"``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Iterator, Sequence

from . import _intmat

Word = tuple[int, ...]


class SftError(ValueError):
    """Base class for errors raised by this package."""


class NonSquare(SftError):
    pass


class ZeroRowOrCol(SftError):
    pass


class NotZeroOne(SftError):
    pass


class PermutationMatrix(SftError):
    pass


class Reducible(SftError):
    pass


class NegativeEntry(SftError):
    pass


class BracketUndefined(SftError):
    pass


class InadmissiblePoint(SftError):
    pass


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class SftMatrix:
    """A validated square nonnegative integer matrix.

    Symbols are ``1..n``; use :meth:`allows` rather than indexing
    ``entries`` directly to avoid off-by-one mistakes.
    """

    entries: tuple[tuple[int, ...], ...]
    irreducible: bool
    permutation: bool
    zero_row_or_col: bool

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def zero_one(self) -> bool:
        return all(v in (0, 1) for row in self.entries for v in row)

    def allows(self, i: int, j: int) -> bool:
        return self.entries[i - 1][j - 1] > 0

    def successors(self, i: int) -> list[int]:
        return [j + 1 for j, v in enumerate(self.entries[i - 1]) if v]

    def predecessors(self, j: int) -> list[int]:
        return [i + 1 for i in range(self.n) if self.entries[i][j - 1]]

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "SftMatrix":
        return _build(_intmat.transpose(self.entries))

    def is_full_shift(self) -> bool:
        """True for the all-ones matrix (or a 1x1 matrix ``[N]``, N >= 2)."""
        if self.n == 1:
            return self.entries[0][0] >= 2
        return all(v == 1 for row in self.entries for v in row)

    def full_shift_size(self) -> int | None:
        if not self.is_full_shift():
            return None
        return self.entries[0][0] if self.n == 1 else self.n

    def to_json(self) -> dict:
        return {"n": self.n, "rows": self.rows()}

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.entries)


def _reachability(rows: Sequence[Sequence[int]]) -> list[set[int]]:
    n = len(rows)
    reach = []
    for s in range(n):
        seen: set[int] = set()
        stack = [j for j in range(n) if rows[s][j]]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(j for j in range(n) if rows[v][j] and j not in seen)
        reach.append(seen)
    return reach


def _build(rows: Sequence[Sequence[int]]) -> SftMatrix:
    n = len(rows)
    reach = _reachability(rows)
    irreducible = all(len(r) == n for r in reach)
    row_sums = [sum(r) for r in rows]
    col_sums = [sum(rows[i][j] for i in range(n)) for j in range(n)]
    permutation = all(s == 1 for s in row_sums) and all(s == 1 for s in col_sums)
    zero = any(s == 0 for s in row_sums) or any(s == 0 for s in col_sums)
    return SftMatrix(tuple(tuple(int(v) for v in r) for r in rows), irreducible, permutation, zero)


def validate(matrix, *, sft: bool = True) -> SftMatrix:
    """Check a matrix and compute its flags.

    With ``sft=True`` (the default) the matrix must be a 0-1 matrix with no
    zero row or column that is irreducible and not a permutation matrix,
    i.e. it must define an infinite irreducible shift of finite type.
    With ``sft=False`` any square nonnegative integer matrix without zero
    rows or columns is accepted (use :func:`edge_shift` to get a 0-1
    presentation).
    """
    if isinstance(matrix, SftMatrix):
        rows = matrix.rows()
    else:
        rows = [[int(v) for v in row] for row in matrix]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NonSquare(f"matrix is not square: {rows!r}")
    if any(v < 0 for r in rows for v in r):
        raise NegativeEntry("matrix has negative entries")
    m = _build(rows)
    if m.zero_row_or_col:
        raise ZeroRowOrCol("matrix has a zero row or column")
    if sft:
        if not m.zero_one:
            raise NotZeroOne("SFT mode needs a 0-1 matrix; see edge_shift()")
        if m.permutation:
            raise PermutationMatrix("permutation matrices give finite shift spaces")
        if not m.irreducible:
            raise Reducible("matrix is not irreducible")
    return m


def edge_shift(matrix) -> tuple[SftMatrix, list[tuple[int, int, int]]]:
    """0-1 presentation of a nonnegative integer matrix as an edge shift.

    Returns the edge adjacency matrix and the list of edges ``(i, j, k)``
    (the k-th parallel edge from i to j); symbol ``e`` of the new shift is
    ``edges[e - 1]``.
    """
    m = validate(matrix, sft=False)
    edges = [(i, j, k) for i in range(1, m.n + 1) for j in range(1, m.n + 1)
             for k in range(m.entries[i - 1][j - 1])]
    rows = [[int(e[1] == f[0]) for f in edges] for e in edges]
    return validate(rows, sft=True), edges


def parse_matrix(text: str) -> SftMatrix:
    """Parse whitespace rows or JSON ``{"n": .., "rows": [[..]]}`` / ``[[..]]``.

    The result is validated with ``sft=False``; call :func:`validate` again
    for SFT-mode checks.
    """
    text = text.strip()
    if text.startswith("{") or text.startswith("["):
        data = json.loads(text)
        rows = data["rows"] if isinstance(data, dict) else data
        if isinstance(data, dict) and "n" in data and data["n"] != len(rows):
            raise NonSquare("declared n does not match the number of rows")
    else:
        rows = [[int(tok) for tok in line.replace(",", " ").split()]
                for line in text.splitlines() if line.strip()]
    return validate(rows, sft=False)


def is_admissible(matrix: SftMatrix, word: Sequence[int]) -> bool:
    if any(not 1 <= s <= matrix.n for s in word):
        return False
    return all(matrix.allows(a, b) for a, b in zip(word, word[1:]))


def is_cyclically_admissible(matrix: SftMatrix, word: Sequence[int]) -> bool:
    return bool(word) and is_admissible(matrix, word) and matrix.allows(word[-1], word[0])


def admissible_words(matrix: SftMatrix, length: int) -> Iterator[Word]:
    """All admissible words of the given length, in lexicographic order."""
    if length == 0:
        yield ()
        return

    def extend(word: Word) -> Iterator[Word]:
        if len(word) == length:
            yield word
            return
        for s in matrix.successors(word[-1]):
            yield from extend(word + (s,))

    for s in range(1, matrix.n + 1):
        yield from extend((s,))


# ---------------------------------------------------------------------------
# points


def primitive_root(word: Word) -> Word:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def least_rotation(word: Word) -> Word:
    return min(word[i:] + word[:i] for i in range(len(word))) if word else word


def _coord(left: Word, core: Word, right: Word, offset: int, i: int) -> int:
    end = offset + len(core)
    if i >= end:
        return right[(i - end) % len(right)]
    if i >= offset:
        return core[i - offset]
    return left[(i - offset) % len(left)]


def _canonical(left: Word, core: Word, right: Word, offset: int) -> tuple[Word, Word, Word, int]:
    left, right = primitive_root(left), primitive_root(right)
    q, p = len(left), len(right)
    end = offset + len(core)

    def x(i: int) -> int:
        return _coord(left, core, right, offset, i)

    if p == q and all(x(i) == x(i + p) for i in range(offset - p, end)):
        word = tuple(x(i) for i in range(p))
        return word, (), word, 0

    # earliest start of the right-periodic region
    r = end
    floor = offset - (p + q) - 1
    while r > floor and x(r - 1) == x(r - 1 + p):
        r -= 1
    # latest end of the left-periodic region
    ell = offset - 1
    ceil = end + p + q
    while ell < ceil and x(ell + 1) == x(ell + 1 - q):
        ell += 1
    if r <= floor or ell >= ceil:  # pragma: no cover - excluded by the periodicity test
        raise AssertionError("tail scan overran; point should be purely periodic")

    if ell + 1 <= r - 1:
        new_offset = ell + 1
        new_core = tuple(x(i) for i in range(ell + 1, r))
    else:
        new_offset = r
        new_core = ()
    new_left = tuple(x(i) for i in range(new_offset - q, new_offset))
    new_right = tuple(x(i) for i in range(r, r + p))
    return new_left, new_core, new_right, new_offset


_TAIL = r"(\d+|\(\s*\d+(?:\s+\d+)*\s*\))\s*\^\s*inf"
_POINT_RE = re.compile(
    rf"^\s*{_TAIL}\s*\.\s*\(\s*([\d\s]*)\)\s*\.\s*{_TAIL}\s*(?:@\s*(-?\d+))?\s*$")


def _parse_word(text: str) -> Word:
    return tuple(int(t) for t in text.strip("() \t").split())


def _format_tail(word: Word) -> str:
    if len(word) == 1:
        return f"{word[0]}^inf"
    return "(" + " ".join(map(str, word)) + ")^inf"


@dataclass(frozen=True)
class BiPoint:
    """An eventually periodic bi-infinite sequence, always in canonical form.

    Coordinates ``offset .. offset+len(core)-1`` hold ``core``; to the right
    the word ``right`` repeats starting at ``offset+len(core)``; to the left
    ``left`` repeats, its last symbol sitting at ``offset-1``.

    Canonical form: both periods primitive, the right-periodic region starts
    as early as possible and the left-periodic region ends as late as
    possible.  A purely periodic point is stored with an empty core,
    ``left == right`` and ``offset == 0``.  Equality of points is therefore
    plain field equality.
    """

    left: Word
    core: Word
    right: Word
    offset: int = 0

    def __post_init__(self):
        left = tuple(int(s) for s in self.left)
        core = tuple(int(s) for s in self.core)
        right = tuple(int(s) for s in self.right)
        if not left or not right:
            raise SftError("periodic tails must be nonempty")
        canon = _canonical(left, core, right, int(self.offset))
        for name, value in zip(("left", "core", "right", "offset"), canon):
            object.__setattr__(self, name, value)

    @classmethod
    def periodic(cls, word: Sequence[int]) -> "BiPoint":
        """The purely periodic point with ``x_0 .. x_{p-1} = word``."""
        word = tuple(word)
        return cls(word, (), word, 0)

    @classmethod
    def from_coords(cls, f: Callable[[int], int], lo: int, hi: int,
                    left_period: int, right_period: int) -> "BiPoint":
        """Build a point from a coordinate function.

        ``f`` must be ``left_period``-periodic on ``(-inf, lo)`` and
        ``right_period``-periodic on ``[hi, inf)``.
        """
        lo = min(lo, hi)  # f is then left-periodic below hi as well
        left = tuple(f(i) for i in range(lo - left_period, lo))
        core = tuple(f(i) for i in range(lo, hi))
        right = tuple(f(i) for i in range(hi, hi + right_period))
        return cls(left, core, right, lo)

    @classmethod
    def parse(cls, text: str) -> "BiPoint":
        m = _POINT_RE.match(text)
        if not m:
            raise SftError(f"cannot parse point literal {text!r}")
        left, core, right, off = m.groups()
        return cls(_parse_word(left), _parse_word(core), _parse_word(right),
                   int(off) if off is not None else 0)

    @property
    def end(self) -> int:
        return self.offset + len(self.core)

    def __getitem__(self, i: int) -> int:
        return _coord(self.left, self.core, self.right, self.offset, i)

    def window(self, lo: int, hi: int) -> Word:
        """Coordinates ``lo .. hi-1``."""
        return tuple(self[i] for i in range(lo, hi))

    def is_purely_periodic(self) -> bool:
        return not self.core and self.left == self.right and self.offset == 0

    def least_period(self) -> int | None:
        return len(self.right) if self.is_purely_periodic() else None

    def __str__(self) -> str:
        core = " ".join(map(str, self.core))
        return f"{_format_tail(self.left)}.({core}).{_format_tail(self.right)}@{self.offset}"


def check_point(matrix: SftMatrix, p: BiPoint) -> BiPoint:
    """Raise :class:`InadmissiblePoint` unless ``p`` lies in the shift space."""
    lo = p.offset - len(p.left)
    hi = p.end + len(p.right) + 1
    word = p.window(lo, hi)
    if not is_admissible(matrix, word):
        raise InadmissiblePoint(f"{p} is not admissible for the matrix")
    return p


@dataclass(frozen=True)
class SftSpace:
    """A shift space with the metric constants; ``epsilon0`` is fixed to 1."""

    matrix: SftMatrix
    lambda0: Fraction = Fraction(1, 2)
    epsilon0: Fraction = field(default=Fraction(1), init=False)

    def __post_init__(self):
        lam = Fraction(self.lambda0)
        if not 0 < lam < 1:
            raise SftError("lambda0 must lie strictly between 0 and 1")
        object.__setattr__(self, "lambda0", lam)


def shift(p: BiPoint, k: int = 1) -> BiPoint:
    """``sigma^k``: ``shift(p, k)[i] == p[i + k]``."""
    if k == 0:
        return p
    return BiPoint(p.left, p.core, p.right, p.offset - k)


def splice(x: BiPoint, y: BiPoint, cut: int) -> BiPoint:
    """The point equal to ``x`` below ``cut`` and to ``y`` from ``cut`` on."""
    lo = min(x.offset, cut)
    hi = max(y.end, cut)
    return BiPoint.from_coords(lambda i: x[i] if i < cut else y[i], lo, hi,
                               len(x.left), len(y.right))


def bracket(x: BiPoint, y: BiPoint) -> BiPoint:
    """``[x, y]``: coordinates of ``x`` for ``n <= 0`` and of ``y`` for ``n >= 0``."""
    if x[0] != y[0]:
        raise BracketUndefined(f"x_0 = {x[0]} differs from y_0 = {y[0]}")
    return splice(x, y, 1)


def _right_bound(x: BiPoint, y: BiPoint) -> tuple[int, int]:
    return max(x.end, y.end), lcm(len(x.right), len(y.right))


def _left_bound(x: BiPoint, y: BiPoint) -> tuple[int, int]:
    return min(x.offset, y.offset), lcm(len(x.left), len(y.left))


def right_tail_match(x: BiPoint, y: BiPoint) -> int | None:
    """Least ``n >= 0`` with ``x_i == y_i`` for all ``i >= n``, or None."""
    start, per = _right_bound(x, y)
    if any(x[i] != y[i] for i in range(start, start + per)):
        return None
    for i in range(start - 1, -1, -1):
        if x[i] != y[i]:
            return i + 1
    return 0


def left_tail_match(x: BiPoint, y: BiPoint) -> int | None:
    """Least ``n >= 0`` with ``x_i == y_i`` for all ``i <= -n``, or None."""
    stop, per = _left_bound(x, y)
    if any(x[i] != y[i] for i in range(stop - per, stop)):
        return None
    for i in range(stop, 1):
        if x[i] != y[i]:
            return 1 - i
    return 0


def asymptotic_pair(x: BiPoint, y: BiPoint) -> tuple[int, int] | None:
    """Depth witnesses ``(ns, nu)`` when x and y are asymptotic, else None."""
    ns = right_tail_match(x, y)
    if ns is None:
        return None
    nu = left_tail_match(x, y)
    if nu is None:
        return None
    return ns, nu


def agreement_radius(x: BiPoint, y: BiPoint) -> int | None:
    """Largest k with ``x_i == y_i`` for ``|i| <= k``; None if ``x == y``, -1 if ``x_0 != y_0``."""
    if x == y:
        return None
    if x[0] != y[0]:
        return -1
    start, per_r = _right_bound(x, y)
    stop, per_l = _left_bound(x, y)
    bound = max(start, -stop, 0) + max(per_r, per_l) + 1
    for i in range(1, bound + 1):
        if x[i] != y[i] or x[-i] != y[-i]:
            return i - 1
    raise AssertionError("distinct canonical points must differ within the bound")  # pragma: no cover


def metric(x: BiPoint, y: BiPoint, space: SftSpace | None = None) -> Fraction:
    lam = space.lambda0 if space is not None else Fraction(1, 2)
    k = agreement_radius(x, y)
    if k is None:
        return Fraction(0)
    if k < 0:
        return Fraction(1)
    return lam ** (k + 1)


@dataclass(frozen=True)
class System:
    """A shift space together with the direction of its dynamics.

    ``direction=-1`` models the inverse system ``(X_A, sigma^{-1})`` on the
    same points, so a witness between a shift and its inverse can use the
    identity map verbatim.
    """

    matrix: SftMatrix
    direction: int = 1

    def __post_init__(self):
        if self.direction not in (1, -1):
            raise SftError("direction must be +1 or -1")

    def step(self, p: BiPoint, k: int = 1) -> BiPoint:
        return shift(p, self.direction * k)

    def inverse(self) -> "System":
        return System(self.matrix, -self.direction)


# ---------------------------------------------------------------------------
# periodic data


def periodic_count(matrix, n: int) -> int:
    """Number of points of period n (not necessarily least): ``tr(A^n)``."""
    if n < 1:
        raise SftError("n must be positive")
    rows = matrix.rows() if isinstance(matrix, SftMatrix) else matrix
    return _intmat.trace(_intmat.matpow(rows, n))


@dataclass(frozen=True)
class Orbit:
    """A periodic orbit, represented by the point whose period word is a Lyndon word."""

    representative: BiPoint
    length: int

    @classmethod
    def of(cls, p: BiPoint) -> "Orbit":
        if not p.is_purely_periodic():
            raise SftError(f"{p} is not purely periodic")
        word = least_rotation(p.right)
        return cls(BiPoint.periodic(word), len(word))

    @property
    def word(self) -> Word:
        return self.representative.right

    def points(self) -> list[BiPoint]:
        w = self.word
        return [BiPoint.periodic(w[i:] + w[:i]) for i in range(len(w))]


def _is_lyndon(word: Word) -> bool:
    return all(word < word[i:] + word[:i] for i in range(1, len(word)))


def periodic_orbits(matrix: SftMatrix, max_length: int) -> list[Orbit]:
    """All periodic orbits of least period ``<= max_length``, sorted by (length, word)."""
    if max_length < 1:
        raise SftError("max_length must be positive")
    words: list[Word] = []

    def dfs(word: Word) -> None:
        if matrix.allows(word[-1], word[0]) and _is_lyndon(word):
            words.append(word)
        if len(word) == max_length:
            return
        for s in matrix.successors(word[-1]):
            if s >= word[0]:
                dfs(word + (s,))

    for s in range(1, matrix.n + 1):
        dfs((s,))
    words.sort(key=lambda w: (len(w), w))
    return [Orbit(BiPoint.periodic(w), len(w)) for w in words]


def periodic_points(matrix: SftMatrix, max_length: int) -> list[BiPoint]:
    """Every point of least period ``<= max_length``, orbit by orbit."""
    return [p for orbit in periodic_orbits(matrix, max_length) for p in orbit.points()]


def iter_cycles(matrix: SftMatrix, n: int) -> Iterable[Word]:
    """Brute force: every cyclically admissible word of length n (one per period-n point)."""
    for w in admissible_words(matrix, n):
        if matrix.allows(w[-1], w[0]):
            yield w
