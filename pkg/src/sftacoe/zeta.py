"""Dynamical zeta functions of shifts of finite type.

All arithmetic is exact.  The Artin-Mazur zeta function
``exp(sum_n |Per_n| t^n / n)`` of a shift with matrix ``A`` is the
rational function ``1 / det(I - tA)``; truncated power series are used for
orbit products and for zeta functions weighted by an integer cocycle.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import sympy

from . import _intmat
from .codes import WindowFunction
from .sft import BiPoint, SftError, SftMatrix, admissible_words, iter_cycles, validate

DEFAULT_ORDER = 12


class CutoffTooSmall(SftError):
    pass


class ZeroWeightPeriodicPoint(SftError):
    pass


def _rows(matrix) -> list[list[int]]:
    if isinstance(matrix, SftMatrix):
        return matrix.rows()
    return validate(matrix, sft=False).rows()


@dataclass(frozen=True)
class PowerSeries:
    """Truncated power series ``c_0 + c_1 t + ... + c_order t^order``."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls((Fraction(1),) + (Fraction(0),) * order)

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        order = min(self.order, other.order)
        a, b = self.coefficients, other.coefficients
        return PowerSeries(tuple(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0))
                                 for k in range(order + 1)))

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coefficients[:order + 1])

    def log_derivative(self) -> tuple[Fraction, ...]:
        """Coefficients ``a_1 .. a_order`` of ``t * d/dt log(self)``; needs ``c_0 = 1``."""
        c = self.coefficients
        if c[0] != 1:
            raise SftError("log needs constant term 1")
        # t f' = f * L  =>  n c_n = sum_{k=1}^{n} L_k c_{n-k}
        out: list[Fraction] = []
        for n in range(1, self.order + 1):
            out.append(n * c[n] - sum((out[k - 1] * c[n - k] for k in range(1, n)), Fraction(0)))
        return tuple(out)

    def as_strings(self) -> list[str]:
        return [str(c) for c in self.coefficients]


def series_exp(g: Sequence[Fraction], order: int) -> PowerSeries:
    """``exp(sum_{n>=1} g[n] t^n)`` truncated; ``g[0]`` must be zero."""
    g = [Fraction(v) for v in g] + [Fraction(0)] * (order + 1 - len(g))
    if g[0] != 0:
        raise SftError("exp needs a series without constant term")
    f = [Fraction(1)] + [Fraction(0)] * order
    for n in range(1, order + 1):
        f[n] = sum((k * g[k] * f[n - k] for k in range(1, n + 1)), Fraction(0)) / n
    return PowerSeries(tuple(f))


@dataclass(frozen=True)
class RationalFunction:
    """``numerator(t) / denominator(t)``, integer coefficients listed from ``t^0`` up."""

    numerator: tuple[int, ...]
    denominator: tuple[int, ...]

    def __post_init__(self):
        t = sympy.Symbol("t")
        num = sympy.Poly(list(reversed(self.numerator)) or [0], t, domain="QQ")
        den = sympy.Poly(list(reversed(self.denominator)), t, domain="QQ")
        if den.is_zero:
            raise SftError("zero denominator")
        g = sympy.gcd(num, den)
        num, den = sympy.div(num, g)[0], sympy.div(den, g)[0]
        d0 = den.eval(0)
        if d0 == 0:
            raise SftError("denominator vanishes at t = 0")
        num, den = num * (1 / d0), den * (1 / d0)

        def coeffs(p: sympy.Poly) -> tuple[int, ...]:
            cs = [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]
            if any(c.denominator != 1 for c in cs):
                raise SftError("normalised rational function has non-integer coefficients")
            out = [int(c) for c in cs]
            while len(out) > 1 and out[-1] == 0:
                out.pop()
            return tuple(out)

        object.__setattr__(self, "numerator", coeffs(num))
        object.__setattr__(self, "denominator", coeffs(den))

    def expand(self, order: int) -> PowerSeries:
        """Taylor coefficients by long division (the denominator has constant term 1)."""
        num = list(self.numerator) + [0] * (order + 1)
        den = self.denominator
        out: list[int] = []
        for n in range(order + 1):
            out.append(num[n] - sum(den[k] * out[n - k] for k in range(1, min(n, len(den) - 1) + 1)))
        return PowerSeries(tuple(Fraction(v) for v in out))

    def to_json(self) -> dict:
        return {"num": list(self.numerator), "den": list(self.denominator)}


def det_one_minus_tA(matrix) -> tuple[int, ...]:
    """Coefficients of ``det(I - tA)`` from the characteristic polynomial."""
    rows = _rows(matrix)
    cp = sympy.Matrix(rows).charpoly()
    # det(xI - A) = sum c_k x^{n-k}  =>  det(I - tA) = sum c_k t^k
    return tuple(int(c) for c in cp.all_coeffs())


def zeta_rational(matrix) -> RationalFunction:
    return RationalFunction((1,), det_one_minus_tA(matrix))


def zeta_series(matrix, order: int = DEFAULT_ORDER) -> PowerSeries:
    """``exp(sum_{n=1}^{order} tr(A^n) t^n / n)`` truncated at ``t^order``."""
    if order < 0:
        raise SftError("order must be nonnegative")
    rows = _rows(matrix)
    g = [Fraction(0)]
    power = _intmat.identity(len(rows))
    for n in range(1, order + 1):
        power = _intmat.matmul(power, rows)
        g.append(Fraction(_intmat.trace(power), n))
    return series_exp(g, order)


def orbit_product_series(lengths: Iterable[int], order: int, cutoff: int) -> PowerSeries:
    """``prod_gamma (1 - t^{|gamma|})^{-1}`` truncated at ``t^order``.

    ``cutoff`` certifies that ``lengths`` contains every orbit of length
    ``<= cutoff``; it must be at least ``order`` or factors may be missing.
    """
    if cutoff < order:
        raise CutoffTooSmall(f"orbit list complete only up to {cutoff} < order {order}")
    counts = Counter(int(L) for L in lengths)
    if any(L < 1 for L in counts):
        raise SftError("orbit lengths must be positive")
    coeffs = [Fraction(0)] * (order + 1)
    coeffs[0] = Fraction(1)
    for L, mult in sorted(counts.items()):
        if L > order:
            continue
        for _ in range(mult):
            # multiply by 1/(1 - t^L) in place
            for k in range(L, order + 1):
                coeffs[k] += coeffs[k - L]
    return PowerSeries(tuple(coeffs))


def _weighted_traces(matrix: SftMatrix, c: WindowFunction, order: int, sign: int) -> list[list[int]]:
    """``T[n][m]`` = number of period-n points x with ``sign * c^n(x) == m``.

    Transfer matrix on the block graph of the window; needs ``sign * c >= 1``.
    """
    width = c.hi - c.lo + 1
    blocks = list(admissible_words(matrix, width))
    index = {b: i for i, b in enumerate(blocks)}
    size = len(blocks)
    by_value: dict[int, np.ndarray] = {}
    for b in blocks:
        v = sign * c.table[b]
        mat = by_value.setdefault(v, np.zeros((size, size), dtype=object))
        for s in matrix.successors(b[-1]):
            nxt = b[1:] + (s,)
            mat[index[b], index[nxt]] = 1
    zero = np.zeros((size, size), dtype=object)
    # powers[d] = degree-d coefficient matrix of M(t)^n
    powers = [zero] * (order + 1)
    for v, mat in by_value.items():
        if v <= order:
            powers[v] = powers[v] + mat
    traces = [[0] * (order + 1) for _ in range(order + 1)]
    for n in range(1, order + 1):
        for d in range(order + 1):
            traces[n][d] = int(np.trace(powers[d])) if size else 0
        if n == order:
            break
        nxt = [zero] * (order + 1)
        for v, mat in by_value.items():
            for d in range(order + 1 - v):
                if powers[d] is not zero:
                    nxt[d + v] = nxt[d + v] + mat.dot(powers[d])
        powers = nxt
    return traces


def weighted_zeta_series(matrix: SftMatrix, c: WindowFunction, order: int = DEFAULT_ORDER,
                         max_period: int | None = None) -> PowerSeries:
    """``exp(sum_n (1/n) sum_{x in Per_n} t^{|c^n(x)|})`` truncated at ``t^order``.

    When ``c`` has constant sign every term with ``n > order`` has
    ``|c^n(x)| > order`` and the result is exact; it is computed with a
    transfer matrix on the block graph of the window.  Otherwise periodic
    points are enumerated up to ``max_period`` (required) and the result
    covers exactly those points.
    """
    if order < 0:
        raise SftError("order must be nonnegative")
    g = [Fraction(0)] * (order + 1)
    sign = c.sign_definite()
    if sign and max_period is None:
        traces = _weighted_traces(matrix, c, order, sign)
        for n in range(1, order + 1):
            for m in range(1, order + 1):
                if traces[n][m]:
                    g[m] += Fraction(traces[n][m], n)
        return series_exp(g, order)
    if max_period is None:
        raise SftError("c changes sign or vanishes; pass max_period to enumerate periodic points")
    from .acoe import f_power

    for n in range(1, max_period + 1):
        for word in iter_cycles(matrix, n):
            x = BiPoint.periodic(word)
            s = f_power(c, x, n)
            if s == 0:
                raise ZeroWeightPeriodicPoint(f"c^{n} vanishes at {x}")
            if abs(s) <= order:
                g[abs(s)] += Fraction(1, n)
    return series_exp(g, order)
