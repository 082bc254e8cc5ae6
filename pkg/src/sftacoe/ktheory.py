"""Integer homological algebra for Markov shift invariants.

Smith normal form, Bowen-Franks groups, the dimension-group stages
``H_k(A) = M_n(Z)`` with ``iota(T) = ATA`` and ``alpha(T) = A^2 T``, the
full-shift answer ``Z[1/N]`` and Perron data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

import numpy as np
import sympy

from . import _intmat
from .sft import SftError, SftMatrix, validate

IntMatrix = list[list[int]]


class ShapeMismatch(SftError):
    pass


class NotFullShift(SftError):
    pass


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``, ``U`` and ``V`` unimodular.

    ``D`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``.  Pivots
    are chosen by least absolute value.
    """
    d = [list(map(int, row)) for row in m]
    rows = len(d)
    cols = len(d[0]) if rows else 0
    u = _intmat.identity(rows)
    v = _intmat.identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        d[dst] = [a + f * b for a, b in zip(d[dst], d[src])]
        u[dst] = [a + f * b for a, b in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in d:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(d[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if d[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = d[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                # a smaller remainder appeared in the pivot row or column
                cands = [(abs(d[i][t]), i, t) for i in range(t, rows) if d[i][t]]
                cands += [(abs(d[t][j]), t, j) for j in range(t, cols) if d[t][j]]
                _, pi, pj = min(cands)
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            # divisibility: fold any entry not divisible by the pivot into row t
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if d[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if d[t][t] < 0:
            d[t] = [-a for a in d[t]]
            u[t] = [-a for a in u[t]]
        t += 1
    return u, d, v


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


@dataclass(frozen=True)
class FinGenAbGroup:
    """``Z^free_rank + Z/d_1 + ... + Z/d_r`` with ``d_1 | d_2 | ...`` and ``d_i >= 2``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        tors = tuple(int(t) for t in self.torsion)
        if any(t < 2 for t in tors) or any(b % a for a, b in zip(tors, tors[1:])):
            raise SftError(f"bad invariant factors {tors}")
        object.__setattr__(self, "torsion", tors)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> int | None:
        if self.free_rank:
            return None
        return reduce(lambda a, b: a * b, self.torsion, 1)

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) or "0"


def cokernel(m: Sequence[Sequence[int]]) -> FinGenAbGroup:
    """``Z^rows / M Z^cols``."""
    rows = len(m)
    factors = invariant_factors(m) if rows and len(m[0]) else []
    return FinGenAbGroup(rows - len(factors), tuple(f for f in factors if f != 1))


def kernel_rank(m: Sequence[Sequence[int]]) -> int:
    cols = len(m[0]) if m else 0
    return cols - _intmat.rank(m)


def kernel_basis(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Columns of ``V`` past the rank: a Z-basis of the integer kernel (as rows)."""
    cols = len(m[0]) if m else 0
    if not m:
        return _intmat.identity(cols)
    _, d, v = smith_normal_form(m)
    r = sum(1 for i in range(min(len(d), cols)) if d[i][i])
    return [[v[i][j] for i in range(cols)] for j in range(r, cols)]


def _nonneg_square(matrix) -> IntMatrix:
    if isinstance(matrix, SftMatrix):
        return matrix.rows()
    return validate(matrix, sft=False).rows()


def bowen_franks(matrix) -> FinGenAbGroup:
    """``Z^n / (I - A^t) Z^n``."""
    a = _nonneg_square(matrix)
    return cokernel(_intmat.sub(_intmat.identity(len(a)), _intmat.transpose(a)))


# ---------------------------------------------------------------------------
# dimension-group stages


@dataclass(frozen=True)
class HAStageElement:
    """``[T, k]`` with ``T`` in ``M_n(Z)`` at stage ``k >= 1``."""

    T: tuple[tuple[int, ...], ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "T", tuple(tuple(int(v) for v in row) for row in self.T))
        if self.k < 1:
            raise SftError("stages start at 1")


def _check_shape(t, a) -> None:
    n = len(a)
    if len(t) != n or any(len(row) != n for row in t):
        raise ShapeMismatch(f"stage matrix is not {n}x{n}")


def ha_iota(T, k: int, matrix) -> HAStageElement:
    a = _nonneg_square(matrix)
    _check_shape(T, a)
    return HAStageElement(_intmat.matmul(_intmat.matmul(a, T), a), k + 1)


def ha_alpha(T, k: int, matrix) -> HAStageElement:
    a = _nonneg_square(matrix)
    _check_shape(T, a)
    return HAStageElement(_intmat.matmul(_intmat.matpow(a, 2), T), k + 1)


def _full_shift_size(matrix) -> int:
    if isinstance(matrix, int):
        return matrix
    a = _nonneg_square(matrix)
    if len(a) < 2 or any(v != 1 for row in a for v in row):
        raise NotFullShift("expected the all-ones matrix")
    return len(a)


def xi_full_shift(T, k: int, N) -> Fraction:
    """``s(T) / N^(2k-2)`` where ``s`` is the entry sum; ``N`` may be a matrix."""
    n = _full_shift_size(N)
    if len(T) != n or any(len(row) != n for row in T):
        raise ShapeMismatch(f"stage matrix is not {n}x{n}")
    return Fraction(sum(map(sum, T)), n ** (2 * k - 2))


def prime_factors(n: int) -> tuple[int, ...]:
    if n < 1:
        raise SftError("need a positive integer")
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@dataclass(frozen=True)
class LocalizedSubgroup:
    """The subgroup ``Z[1/(p_1 ... p_r)]`` of the rationals."""

    primes: tuple[int, ...]

    def __post_init__(self):
        ps = tuple(sorted(set(int(p) for p in self.primes)))
        if any(prime_factors(p) != (p,) for p in ps):
            raise SftError(f"{ps} are not all prime")
        object.__setattr__(self, "primes", ps)

    @classmethod
    def of(cls, n: int) -> "LocalizedSubgroup":
        return cls(prime_factors(n))

    def contains(self, q: Fraction) -> bool:
        den = Fraction(q).denominator
        for p in self.primes:
            while den % p == 0:
                den //= p
        return den == 1

    def to_json(self) -> dict:
        return {"primes": list(self.primes)}

    def __str__(self) -> str:
        return f"Z[1/{'*'.join(map(str, self.primes))}]" if self.primes else "Z"


def localized_equal(a: LocalizedSubgroup, b: LocalizedSubgroup) -> bool:
    return a.primes == b.primes


def ruelle_k_groups_full_shift(N: int) -> tuple[LocalizedSubgroup, LocalizedSubgroup]:
    if N < 2:
        raise SftError("full shifts need N >= 2")
    g = LocalizedSubgroup.of(N)
    return g, g


def trace_value_group_full_shift(N: int) -> LocalizedSubgroup:
    if N < 2:
        raise SftError("full shifts need N >= 2")
    return LocalizedSubgroup.of(N)


@dataclass(frozen=True)
class StagewiseGroup:
    stage_groups: tuple[FinGenAbGroup, ...]
    stabilized: bool
    kernel_depth: int

    def to_json(self) -> dict:
        return {"stage_groups": [g.to_json() for g in self.stage_groups],
                "stabilized": self.stabilized, "kernel_depth": self.kernel_depth}


def _iota_matrix(a: IntMatrix) -> IntMatrix:
    """Matrix of ``T -> ATA`` on row-major ``vec(T)``."""
    n = len(a)
    cols = []
    for i in range(n):
        for j in range(n):
            # A E_ij A = (column i of A) (row j of A)
            cols.append([a[r][i] * a[j][c] for r in range(n) for c in range(n)])
    return _intmat.transpose(cols)


def _alpha_matrix(a: IntMatrix) -> IntMatrix:
    n = len(a)
    a2 = _intmat.matpow(a, 2)
    cols = []
    for i in range(n):
        for j in range(n):
            cols.append([a2[r][i] if c == j else 0 for r in range(n) for c in range(n)])
    return _intmat.transpose(cols)


def _kernel_depth(m: IntMatrix) -> int:
    """Least j with ``rank(M^j) == rank(M^(j+1))``; then ``ker M^j`` is the eventual kernel."""
    j, power = 0, _intmat.identity(len(m))
    r = len(m)
    while True:
        nxt = _intmat.matmul(m, power)
        r2 = _intmat.rank(nxt)
        if r2 == r:
            return j
        j, power, r = j + 1, nxt, r2


def _truncation(iota: IntMatrix, alpha: IntMatrix, stages: int, depth: int) -> FinGenAbGroup:
    """``Coker(id - alpha)`` on the direct system truncated at ``stages``.

    Every stage ``k`` is pushed to stage ``stages + depth``, far enough that
    elements vanishing in the limit already vanish there.
    """
    size = len(iota)
    pushes = [_intmat.identity(size)]
    for _ in range(stages + depth):
        pushes.append(_intmat.matmul(iota, pushes[-1]))
    # generator map: block k sends vec(T) to iota^(stages + depth - k) vec(T)
    gen = [[0] * (size * stages) for _ in range(size)]
    for k in range(1, stages + 1):
        p = pushes[stages + depth - k]
        for r in range(size):
            gen[r][(k - 1) * size:k * size] = p[r]
    relations = kernel_basis(gen)
    for k in range(1, stages):
        for e in range(size):
            vec = [0] * (size * stages)
            vec[(k - 1) * size + e] += 1
            for r in range(size):
                vec[k * size + r] -= alpha[r][e]
            relations.append(vec)
    if not relations:
        return FinGenAbGroup(size * stages)
    return cokernel(_intmat.transpose(relations))


def ruelle_k0_stagewise(matrix, max_stage: int = 4) -> StagewiseGroup:
    """Truncations ``1 .. max_stage`` of ``Coker(id - alpha: H(A) -> H(A))``."""
    if max_stage < 2:
        raise SftError("max_stage must be at least 2")
    a = _nonneg_square(matrix)
    iota, alpha = _iota_matrix(a), _alpha_matrix(a)
    depth = _kernel_depth(iota)
    groups = tuple(_truncation(iota, alpha, k, depth) for k in range(1, max_stage + 1))
    return StagewiseGroup(groups, groups[-1] == groups[-2], depth)


# ---------------------------------------------------------------------------
# Perron data


@dataclass(frozen=True)
class PerronData:
    """Perron eigenvalue with left (``uA = lam u``) and right (``Av = lam v``) eigenvectors.

    In exact mode (integer eigenvalue) the vectors are positive ``Fraction`` s.
    """

    lam: float | int
    u: tuple
    v: tuple
    char_poly: tuple[int, ...]
    lambda_is_integer: bool
    rows: tuple[tuple[int, ...], ...]

    @property
    def exact(self) -> bool:
        return self.lambda_is_integer

    def cylinder_measure(self, word):
        """Parry measure of the cylinder ``[w_0 .. w_r]``."""
        if not word:
            return Fraction(1) if self.exact else 1.0
        n = len(self.rows)
        ok = all(1 <= s <= n for s in word) and all(
            self.rows[a - 1][b - 1] for a, b in zip(word, word[1:]))
        if not ok:
            return Fraction(0) if self.exact else 0.0
        norm = sum(x * y for x, y in zip(self.u, self.v))
        r = len(word) - 1
        if self.exact:
            return self.u[word[0] - 1] * self.v[word[-1] - 1] / (Fraction(self.lam) ** r * norm)
        return self.u[word[0] - 1] * self.v[word[-1] - 1] / (self.lam ** r * norm)

    def to_json(self) -> dict:
        return {"lambda": float(self.lam), "lambda_is_integer": self.lambda_is_integer,
                "char_poly": list(self.char_poly),
                "u": [float(x) for x in self.u], "v": [float(x) for x in self.v]}


def _refine(a: np.ndarray, vec: np.ndarray, tol: float, iters: int = 200) -> tuple[float, np.ndarray]:
    """Rayleigh-quotient refinement of a positive eigenvector by power steps."""
    vec = np.abs(vec) / np.abs(vec).sum()
    lam = float(vec @ a @ vec / (vec @ vec))
    for _ in range(iters):
        lam = float(vec @ (a @ vec) / (vec @ vec))
        if np.linalg.norm(a @ vec - lam * vec) < tol:
            break
        # one step of inverse iteration at the current estimate
        try:
            w = np.linalg.solve(a - (lam + 1e-13) * np.eye(len(a)), vec)
        except np.linalg.LinAlgError:
            break
        vec = np.abs(w) / np.abs(w).sum()
    return lam, vec


def _exact_eigvec(rows: IntMatrix, lam: int) -> tuple[Fraction, ...]:
    ns = (sympy.Matrix(rows) - lam * sympy.eye(len(rows))).nullspace()
    vec = [Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in ns[0]]
    if vec[0] < 0 or any(x < 0 for x in vec):
        vec = [-x for x in vec]
    total = sum(vec)
    return tuple(x / total for x in vec)


def perron_data(matrix, tol: float = 1e-10) -> PerronData:
    a = _nonneg_square(matrix)
    n = len(a)
    cp = tuple(int(c) for c in sympy.Matrix(a).charpoly().all_coeffs())
    arr = np.array(a, dtype=float)
    vals, vecs = np.linalg.eig(arr)
    i = int(np.argmax(vals.real))
    lam, v = _refine(arr, vecs[:, i].real, tol)
    lvals, lvecs = np.linalg.eig(arr.T)
    _, u = _refine(arr.T, lvecs[:, int(np.argmax(lvals.real))].real, tol)
    # integer roots of a monic integer polynomial are integers near lam
    cand = int(round(lam))
    if sum(c * cand ** (n - k) for k, c in enumerate(cp)) == 0 and abs(cand - lam) < 1e-6:
        return PerronData(cand, _exact_eigvec(_intmat.transpose(a), cand), _exact_eigvec(a, cand),
                          cp, True, tuple(map(tuple, a)))
    return PerronData(lam, tuple(float(x) for x in u), tuple(float(x) for x in v),
                      cp, False, tuple(map(tuple, a)))


def perron_residual(data: PerronData) -> float:
    a = np.array(data.rows, dtype=float)
    v = np.array([float(x) for x in data.v])
    return float(np.linalg.norm(a @ v - float(data.lam) * v))


def period(matrix) -> int:
    """gcd of cycle lengths through symbol 1 (the period of an irreducible matrix)."""
    a = _nonneg_square(matrix)
    n = len(a)
    g, power = 0, _intmat.identity(n)
    for k in range(1, 2 * n * n + 1):
        power = _intmat.matmul(power, a)
        if power[0][0]:
            g = gcd(g, k)
            if g == 1:
                break
    return g


def perron_is_integer(matrix) -> bool:
    return perron_data(matrix).lambda_is_integer
