"""Exact symbolic computation in Cuntz-Krieger algebras and in ``O_{A^t} (x) O_A``.

A basis monomial ``S_mu S_nu^*`` is the pair of words ``(mu, nu)``; the
empty word stands for the unit.  Monomials satisfy

    S_mu S_nu^* = sum_j S_{mu j} S_{nu j}^*      (inadmissible words vanish)

so an element has many presentations.  Within a degree class
``|mu| - |nu| = d`` the nonzero monomials with a fixed ``|nu|`` are
linearly independent, so we store every degree class at the smallest
uniform ``|nu|`` from which it can be expanded.  That makes the canonical
form unique and equality of elements is equality of coefficient maps.

Tensor monomials ``T_xi T_eta^* (x) S_mu S_nu^*`` pair a monomial over
``A^t`` (written with the reversed words ``xi``, ``eta`` as sequences
admissible for ``A^t``) with one over ``A``; both factors are levelled
independently.
"""

from __future__ import annotations

import re
from collections import defaultdict
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .sft import BiPoint, SftError, SftMatrix, Word, is_admissible, validate

Term = tuple[Word, Word]
TensorTerm = tuple[Term, Term]


class MatrixMismatch(SftError):
    pass


class NotGaugeFixed(SftError):
    pass


class NotFullShift(SftError):
    pass


class NotInCorner(SftError):
    pass


class CompressionCriterionFails(SftError):
    pass


# ---------------------------------------------------------------------------
# word calculus for one factor


class _Words:
    """Memoised word primitives for one matrix."""

    def __init__(self, m: SftMatrix):
        self.n = m.n
        self.succ = {i: frozenset(m.successors(i)) for i in range(1, m.n + 1)}
        self.kids: dict[Term, list[Term]] = {}
        self.nonzero: dict[Term, bool] = {}


_WORDS: dict[int, tuple[SftMatrix, _Words]] = {}


def _words(m: SftMatrix) -> _Words:
    hit = _WORDS.get(id(m))
    if hit is None or hit[0] is not m:
        hit = _WORDS[id(m)] = (m, _Words(m))
    return hit[1]


def _extends(m: SftMatrix, word: Word, j: int) -> bool:
    return not word or j in _words(m).succ[word[-1]]


def _children(m: SftMatrix, term: Term) -> list[Term]:
    w = _words(m)
    kids = w.kids.get(term)
    if kids is None:
        mu, nu = term
        a = w.succ[mu[-1]] if mu else None
        b = w.succ[nu[-1]] if nu else None
        kids = w.kids[term] = [(mu + (j,), nu + (j,)) for j in range(1, w.n + 1)
                               if (a is None or j in a) and (b is None or j in b)]
    return kids


def _is_nonzero(m: SftMatrix, term: Term) -> bool:
    w = _words(m)
    hit = w.nonzero.get(term)
    if hit is None:
        mu, nu = term
        hit = w.nonzero[term] = (is_admissible(m, mu) and is_admissible(m, nu)
                                 and bool(_children(m, term)))
    return hit


def _level(m: SftMatrix, term: Term, length: int) -> list[Term]:
    """Expand a monomial until its second word has the given length."""
    terms = [term]
    for _ in range(length - len(term[1])):
        terms = [c for t in terms for c in _children(m, t)]
    return terms


def _mul_terms(m: SftMatrix, a: Term, b: Term) -> list[Term]:
    """``(S_mu S_nu^*)(S_al S_be^*)`` as a sum of monomials (all coefficients 1)."""
    length = max(len(a[1]), len(b[0]), 1)
    left = _level(m, a, length)
    right_by_first: dict[Word, list[Word]] = defaultdict(list)
    for al, be in (_swap(t) for t in _level(m, _swap(b), length)):
        right_by_first[al].append(be)
    out: list[Term] = []
    for mu, nu in left:
        for be in right_by_first.get(nu, ()):
            # S_mu S_nu^* S_nu S_be^* = S_mu Q_last S_be^*, Q_b = sum_j A(b, j) S_j S_j^*
            last = nu[-1]
            for j in m.successors(last):
                if _extends(m, mu, j) and _extends(m, be, j):
                    out.append((mu + (j,), be + (j,)))
    return out


def _swap(t: Term) -> Term:
    return t[1], t[0]


# canonicalisation ---------------------------------------------------------


def _q(c) -> int | Fraction:
    """Exact rational, kept as an int when integral (ints are much faster)."""
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _contract_once(m: SftMatrix, terms: dict[Term, Fraction]) -> dict[Term, Fraction] | None:
    """Contract a uniform-level degree class by one level, or None if impossible."""
    parents: dict[Term, Fraction] = {}
    for (mu, nu), c in terms.items():
        if not mu or not nu:
            return None
        parent = (mu[:-1], nu[:-1])
        if parent in parents:
            if parents[parent] != c:
                return None
        else:
            parents[parent] = c
    for parent, c in parents.items():
        kids = _children(m, parent)
        if len(kids) == 0 or any(k not in terms for k in kids):
            return None
    if sum(len(_children(m, p)) for p in parents) != len(terms):
        return None  # pragma: no cover - every term has exactly one parent
    return parents


def _canonical_class(m: SftMatrix, terms: dict[Term, Fraction]) -> dict[Term, Fraction]:
    length = max(len(nu) for _, nu in terms)
    levelled: dict[Term, Fraction] = defaultdict(int)
    for t, c in terms.items():
        for u in _level(m, t, length):
            levelled[u] += c
    current = {t: c for t, c in levelled.items() if c}
    while current:
        smaller = _contract_once(m, current)
        if smaller is None:
            break
        current = smaller
    return current


def _canonical(m: SftMatrix, terms: Mapping[Term, Fraction]) -> dict[Term, Fraction]:
    classes: dict[int, dict[Term, Fraction]] = defaultdict(dict)
    for t, c in terms.items():
        if c and _is_nonzero(m, t):
            cls = classes[len(t[0]) - len(t[1])]
            cls[t] = cls.get(t, 0) + c
    out: dict[Term, Fraction] = {}
    for d in sorted(classes):
        out.update(_canonical_class(m, classes[d]))
    return dict(sorted(out.items(), key=lambda kv: _term_key(kv[0])))


def _term_key(t: Term):
    return (len(t[0]) - len(t[1]), len(t[1]), t)


def _word_str(w: Word) -> str:
    return " ".join(map(str, w))


# ---------------------------------------------------------------------------
# single Cuntz-Krieger algebra


@dataclass(frozen=True, eq=False)
class CkElement:
    """Exact element of the dense *-subalgebra of ``O_A`` spanned by ``S_mu S_nu^*``."""

    matrix: SftMatrix
    terms: Mapping[Term, Fraction]

    def __post_init__(self):
        raw = {(tuple(mu), tuple(nu)): _q(c) for (mu, nu), c in dict(self.terms).items()}
        object.__setattr__(self, "terms", _canonical(self.matrix, raw))

    @classmethod
    def monomial(cls, matrix: SftMatrix, mu: Word = (), nu: Word = (), coeff=1) -> "CkElement":
        return cls(matrix, {(tuple(mu), tuple(nu)): Fraction(coeff)})

    @classmethod
    def unit(cls, matrix: SftMatrix) -> "CkElement":
        return cls.monomial(matrix)

    @classmethod
    def zero(cls, matrix: SftMatrix) -> "CkElement":
        return cls(matrix, {})

    @classmethod
    def generator(cls, matrix: SftMatrix, i: int) -> "CkElement":
        """``S_i``."""
        return cls.monomial(matrix, (i,), ())

    def _check(self, other: "CkElement") -> None:
        if self.matrix != other.matrix:
            raise MatrixMismatch("elements live over different matrices")

    def __add__(self, other: "CkElement") -> "CkElement":
        self._check(other)
        terms = dict(self.terms)
        for t, c in other.terms.items():
            terms[t] = terms.get(t, 0) + c
        return CkElement(self.matrix, terms)

    def __neg__(self) -> "CkElement":
        return CkElement(self.matrix, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "CkElement") -> "CkElement":
        return self + (-other)

    def scale(self, c) -> "CkElement":
        return CkElement(self.matrix, {t: Fraction(c) * v for t, v in self.terms.items()})

    def __mul__(self, other: "CkElement") -> "CkElement":
        return ck_mul(self, other)

    def adjoint(self) -> "CkElement":
        return ck_adjoint(self)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, CkElement):
            return NotImplemented
        return self.matrix == other.matrix and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*S[{_word_str(mu)}]S[{_word_str(nu)}]*"
                          for (mu, nu), c in self.terms.items())


def ck_mul(a: CkElement, b: CkElement) -> CkElement:
    a._check(b)
    m = a.matrix
    out: dict[Term, Fraction] = defaultdict(int)
    for ta, ca in a.terms.items():
        for tb, cb in b.terms.items():
            for t in _mul_terms(m, ta, tb):
                out[t] += ca * cb
    return CkElement(m, out)


def ck_adjoint(a: CkElement) -> CkElement:
    return CkElement(a.matrix, {(nu, mu): c for (mu, nu), c in a.terms.items()})


# ---------------------------------------------------------------------------
# tensor product O_{A^t} (x) O_A


def _canonical_tensor(a: SftMatrix, at: SftMatrix,
                      terms: Mapping[TensorTerm, Fraction]) -> dict[TensorTerm, Fraction]:
    classes: dict[tuple[int, int], dict[TensorTerm, Fraction]] = defaultdict(dict)
    for (lt, rt), c in terms.items():
        if c and _is_nonzero(at, lt) and _is_nonzero(a, rt):
            key = (len(lt[0]) - len(lt[1]), len(rt[0]) - len(rt[1]))
            cls = classes[key]
            cls[(lt, rt)] = cls.get((lt, rt), 0) + c
    out: dict[TensorTerm, Fraction] = {}
    for key in sorted(classes):
        out.update(_canonical_tensor_class(a, at, classes[key]))
    return dict(sorted(out.items(), key=lambda kv: (_term_key(kv[0][0]), _term_key(kv[0][1]))))


def _regroup(terms: Mapping[TensorTerm, Fraction], side: int) -> dict[Term, dict[Term, Fraction]]:
    """Split tensor terms into ``{other-side term: {this-side term: coeff}}``."""
    groups: dict[Term, dict[Term, Fraction]] = defaultdict(dict)
    for tt, c in terms.items():
        groups[tt[1 - side]][tt[side]] = c
    return groups


def _canonical_tensor_class(a: SftMatrix, at: SftMatrix,
                            terms: dict[TensorTerm, Fraction]) -> dict[TensorTerm, Fraction]:
    lmax = max(len(lt[1]) for lt, _ in terms)
    rmax = max(len(rt[1]) for _, rt in terms)
    levelled: dict[TensorTerm, Fraction] = defaultdict(int)
    for (lt, rt), c in terms.items():
        for u in _level(at, lt, lmax):
            for v in _level(a, rt, rmax):
                levelled[(u, v)] += c
    current = {t: c for t, c in levelled.items() if c}
    for side, m in ((0, at), (1, a)):
        while current:
            groups = _regroup(current, side)
            contracted = {}
            for other, part in groups.items():
                smaller = _contract_once(m, part)
                if smaller is None:
                    break
                contracted[other] = smaller
            else:
                current = {((t, o) if side == 0 else (o, t)): c
                           for o, part in contracted.items() for t, c in part.items()}
                continue
            break
    return current


@dataclass(frozen=True, eq=False)
class TensorElement:
    """Exact element of ``P_{A^t} (x) P_A`` in canonical form."""

    matrix: SftMatrix
    terms: Mapping[TensorTerm, Fraction]

    def __post_init__(self):
        raw = {((tuple(x), tuple(y)), (tuple(mu), tuple(nu))): _q(c)
               for ((x, y), (mu, nu)), c in dict(self.terms).items()}
        object.__setattr__(self, "terms", _canonical_tensor(self.matrix, self.matrix_t, raw))

    @property
    def matrix_t(self) -> SftMatrix:
        return _transpose(self.matrix)

    @classmethod
    def monomial(cls, matrix: SftMatrix, xi: Word = (), eta: Word = (), mu: Word = (),
                 nu: Word = (), coeff=1) -> "TensorElement":
        """``coeff * T_xi T_eta^* (x) S_mu S_nu^*``; xi and eta are words for ``A^t``."""
        return cls(matrix, {((tuple(xi), tuple(eta)), (tuple(mu), tuple(nu))): Fraction(coeff)})

    @classmethod
    def unit(cls, matrix: SftMatrix) -> "TensorElement":
        return cls.monomial(matrix)

    @classmethod
    def zero(cls, matrix: SftMatrix) -> "TensorElement":
        return cls(matrix, {})

    @classmethod
    def parse(cls, matrix: SftMatrix, text: str) -> "TensorElement":
        return cls(matrix, {parse_term(text): Fraction(1)})

    def _check(self, other: "TensorElement") -> None:
        if self.matrix != other.matrix:
            raise MatrixMismatch("elements live over different matrices")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        terms = dict(self.terms)
        for t, c in other.terms.items():
            terms[t] = terms.get(t, 0) + c
        return TensorElement(self.matrix, terms)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.matrix, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        return TensorElement(self.matrix, {t: Fraction(c) * v for t, v in self.terms.items()})

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        return tensor_mul(self, other)

    def adjoint(self) -> "TensorElement":
        return TensorElement(self.matrix, {((y, x), (nu, mu)): c
                                           for ((x, y), (mu, nu)), c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.matrix == other.matrix and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def to_json(self) -> list:
        return [{"xi": list(x), "eta": list(y), "mu": list(mu), "nu": list(nu), "coeff": str(c)}
                for ((x, y), (mu, nu)), c in self.terms.items()]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{format_term(t)}" for t, c in self.terms.items())


@lru_cache(maxsize=64)
def _transpose(m: SftMatrix) -> SftMatrix:
    return m.transpose()


def tensor_mul(a: TensorElement, b: TensorElement) -> TensorElement:
    a._check(b)
    return TensorElement(a.matrix, _mul_raw(a.matrix, a.terms, b.terms))


def _mul_raw(m: SftMatrix, a: Mapping[TensorTerm, Fraction],
             b: Mapping[TensorTerm, Fraction]) -> dict[TensorTerm, Fraction]:
    mt = _transpose(m)
    out: dict[TensorTerm, Fraction] = defaultdict(int)
    left_cache: dict[tuple[Term, Term], list[Term]] = {}
    right_cache: dict[tuple[Term, Term], list[Term]] = {}
    for (la, ra), ca in a.items():
        for (lb, rb), cb in b.items():
            lefts = left_cache.get((la, lb))
            if lefts is None:
                lefts = left_cache[(la, lb)] = _mul_terms(mt, la, lb)
            if not lefts:
                continue
            rights = right_cache.get((ra, rb))
            if rights is None:
                rights = right_cache[(ra, rb)] = _mul_terms(m, ra, rb)
            c = ca * cb
            for lt in lefts:
                for rt in rights:
                    out[(lt, rt)] += c
    return out


_FACTOR_RE = re.compile(r"([TS])\[([\d\s]*)\](\*?)")


def _parse_factor(text: str, letter: str) -> Term:
    text = text.strip()
    if text in ("1", ""):
        return (), ()
    pos, mu, nu = 0, None, None
    for mt in _FACTOR_RE.finditer(text):
        if text[pos:mt.start()].strip() or mt.group(1) != letter:
            raise SftError(f"cannot parse factor {text!r}")
        word = tuple(int(s) for s in mt.group(2).split())
        if mt.group(3):
            if nu is not None:
                raise SftError(f"two adjoint words in {text!r}")
            nu = word
        else:
            if mu is not None or nu is not None:
                raise SftError(f"factor {text!r} is not of the form X[w]X[v]*")
            mu = word
        pos = mt.end()
    if text[pos:].strip():
        raise SftError(f"cannot parse factor {text!r}")
    return (mu or (), nu or ())


def parse_term(text: str) -> TensorTerm:
    """Parse ``"T[xi]T[eta]* x S[mu]S[nu]*"``; either side may be ``1``.

    Abbreviations such as ``"T[2 1]* x S[1 2]"`` are accepted.
    """
    parts = re.split(r"\s+x\s+|⊗", text)
    if len(parts) != 2:
        raise SftError(f"expected 'left x right' in {text!r}")
    return _parse_factor(parts[0], "T"), _parse_factor(parts[1], "S")


def format_term(t: TensorTerm) -> str:
    (x, y), (mu, nu) = t
    return f"T[{_word_str(x)}]T[{_word_str(y)}]* x S[{_word_str(mu)}]S[{_word_str(nu)}]*"


# ---------------------------------------------------------------------------
# E_A, U_A and friends


def _t(matrix: SftMatrix, xi: Word = (), eta: Word = ()) -> TensorElement:
    return TensorElement.monomial(matrix, xi, eta, (), ())


def _s(matrix: SftMatrix, mu: Word = (), nu: Word = ()) -> TensorElement:
    return TensorElement.monomial(matrix, (), (), mu, nu)


@lru_cache(maxsize=64)
def projection_EA(matrix: SftMatrix) -> TensorElement:
    """``E_A = sum_j T_j T_j^* (x) S_j^* S_j``."""
    total = TensorElement.zero(matrix)
    for j in range(1, matrix.n + 1):
        sj_star_sj = _s(matrix, (), (j,)) * _s(matrix, (j,), ())
        total = total + _t(matrix, (j,), (j,)) * sj_star_sj
    return total


def projection_EAt(matrix: SftMatrix) -> TensorElement:
    """``E_{A^t} = sum_j T_j^* T_j (x) S_j S_j^*``."""
    total = TensorElement.zero(matrix)
    for j in range(1, matrix.n + 1):
        tj_star_tj = _t(matrix, (), (j,)) * _t(matrix, (j,), ())
        total = total + tj_star_tj * _s(matrix, (j,), (j,))
    return total


def compress(elt: TensorElement, matrix: SftMatrix | None = None) -> TensorElement:
    """``E_A elt E_A``."""
    m = matrix or elt.matrix
    e = projection_EA(m).terms
    # one canonicalisation at the end; intermediate sums need not be canonical
    return TensorElement(m, _mul_raw(m, _mul_raw(m, e, elt.terms), e))


def compression_criterion(matrix: SftMatrix, term: TensorTerm) -> bool:
    """``A(xi_k, mu_1) == A(eta_l, nu_1) == 1`` for nonempty words.

    ``xi`` is stored reversed, so ``xi_k`` is its first entry.
    """
    (x, y), (mu, nu) = term
    if not (x and y and mu and nu):
        raise SftError("the criterion is stated for nonempty words")
    return matrix.allows(x[0], mu[0]) and matrix.allows(y[0], nu[0])


def unitary_parts(matrix: SftMatrix) -> list[TensorElement]:
    """``U_i = T_i^* (x) S_i``."""
    return [TensorElement.monomial(matrix, (), (i,), (i,), ()) for i in range(1, matrix.n + 1)]


def unitary_UA(matrix: SftMatrix) -> TensorElement:
    total = TensorElement.zero(matrix)
    for u in unitary_parts(matrix):
        total = total + u
    return total


def in_corner(elt: TensorElement) -> bool:
    return compress(elt) == elt


def alpha_A(elt: TensorElement, matrix: SftMatrix | None = None, power: int = 1) -> TensorElement:
    """``Ad(U_A)^power`` on the corner ``E_A (...) E_A``."""
    m = matrix or elt.matrix
    if not in_corner(elt):
        raise NotInCorner("alpha_A acts on compressed elements only")
    u = unitary_UA(m)
    if power < 0:
        u, power = u.adjoint(), -power
    ustar = u.adjoint()
    out = elt
    for _ in range(power):
        out = u * out * ustar
    return out


def alpha_A_inverse(elt: TensorElement, matrix: SftMatrix | None = None) -> TensorElement:
    return alpha_A(elt, matrix, power=-1)


@dataclass(frozen=True)
class Bidegree:
    left_deg: int
    right_deg: int

    @property
    def total(self) -> int:
        return self.left_deg + self.right_deg


def bidegree(term: TensorTerm) -> Bidegree:
    (x, y), (mu, nu) = term
    return Bidegree(len(x) - len(y), len(mu) - len(nu))


def is_fixed_by_diagonal(term: TensorTerm) -> bool:
    """Fixed by the diagonal gauge action iff ``k + m == l + n``."""
    return bidegree(term).total == 0


def is_gauge_fixed(elt: TensorElement) -> bool:
    return all(is_fixed_by_diagonal(t) for t in elt.terms)


def diagonal_expectation(elt: TensorElement) -> TensorElement:
    """Projection onto the terms fixed by the diagonal gauge action."""
    return TensorElement(elt.matrix, {t: c for t, c in elt.terms.items() if is_fixed_by_diagonal(t)})


def diagonal_generator(matrix: SftMatrix, xi: Word, mu: Word) -> TensorElement:
    """``T_xibar T_xibar^* (x) S_mu S_mu^*`` for a word ``xi = (xi_1 .. xi_k)`` of ``A``."""
    xbar = tuple(reversed(xi))
    return TensorElement.monomial(matrix, xbar, xbar, mu, mu)


def trace_full_shift(elt: TensorElement, matrix: SftMatrix | None = None) -> Fraction:
    """The unique trace on the gauge-fixed corner of the full N-shift.

    A monomial with ``xi == eta`` and ``mu == nu`` has trace ``N^-(k+m)``,
    every other gauge-fixed monomial has trace 0.
    """
    m = matrix or elt.matrix
    if m.n < 2 or not m.is_full_shift():
        raise NotFullShift("trace_full_shift needs the all-ones matrix")
    if not is_gauge_fixed(elt):
        raise NotGaugeFixed("element has terms moved by the diagonal gauge action")
    n = m.n
    total = Fraction(0)
    for ((x, y), (mu, nu)), c in elt.terms.items():
        if x == y and mu == nu:
            total += c / Fraction(n) ** (len(x) + len(mu))
    return total


def trace_parry(elt: TensorElement, matrix: SftMatrix | None = None, tol: float = 1e-10):
    """Trace from the Parry measure: diagonal monomials go to cylinder measures.

    Exact (a ``Fraction``) when the Perron eigenvalue is an integer,
    otherwise a float computed from refined Perron data.
    """
    from .ktheory import perron_data

    m = matrix or elt.matrix
    if not is_gauge_fixed(elt):
        raise NotGaugeFixed("element has terms moved by the diagonal gauge action")
    data = perron_data(m, tol=tol)
    compressed = compress(elt, m)
    total = Fraction(0) if data.exact else 0.0
    for ((x, y), (mu, nu)), c in compressed.terms.items():
        if x == y and mu == nu:
            word = tuple(reversed(x)) + mu
            total += (c if data.exact else float(c)) * data.cylinder_measure(word)
    return total


# ---------------------------------------------------------------------------
# generator map to groupoid cylinder data


@dataclass(frozen=True)
class GroupoidCylinder:
    """The clopen set ``U_{xi mu, eta nu}`` of ``G^{s,u} x| Z^2``.

    ``source_word`` sits at coordinates ``source_offset ..`` of x and
    ``target_word`` at ``target_offset ..`` of y; the exponents are
    ``p = m - n`` and ``q = l - k``.
    """

    source_word: Word
    source_offset: int
    target_word: Word
    target_offset: int
    p: int
    q: int
    k: int
    m: int
    l: int
    n: int

    def source_contains(self, x: BiPoint) -> bool:
        return x.window(self.source_offset, self.source_offset + len(self.source_word)) == self.source_word

    def target_contains(self, y: BiPoint) -> bool:
        return y.window(self.target_offset, self.target_offset + len(self.target_word)) == self.target_word

    def contains(self, x: BiPoint, y: BiPoint) -> bool:
        """Is ``(x, p, q, y)`` in the set?"""
        from .sft import left_tail_match, right_tail_match, shift

        if not (self.source_contains(x) and self.target_contains(y)):
            return False
        # (sigma^m x, sigma^n y) in G^{s,0} and (sigma^-k x, sigma^-l y) in G^{u,0}
        return (right_tail_match(shift(x, self.m), shift(y, self.n)) == 0
                and left_tail_match(shift(x, -self.k), shift(y, -self.l)) == 0)


def phi_generator_map(matrix: SftMatrix, term: TensorTerm) -> GroupoidCylinder:
    """Send a corner monomial ``T_xi T_eta^* (x) S_mu S_nu^*`` to its cylinder set."""
    elt = TensorElement(matrix, {term: Fraction(1)})
    if elt.is_zero() or compress(elt, matrix) != elt:
        raise CompressionCriterionFails(f"{format_term(term)} is not fixed by E_A")
    (x, y), (mu, nu) = term
    k, l, m, n = len(x), len(y), len(mu), len(nu)
    return GroupoidCylinder(tuple(reversed(x)) + tuple(mu), 1 - k,
                            tuple(reversed(y)) + tuple(nu), 1 - l,
                            m - n, l - k, k, m, l, n)


def ck_matrices(matrix) -> SftMatrix:
    return validate(matrix)


def sum_elements(elts: Iterable[TensorElement], matrix: SftMatrix) -> TensorElement:
    total = TensorElement.zero(matrix)
    for e in elts:
        total = total + e
    return total


# ---------------------------------------------------------------------------
# lemma suite


@dataclass
class LemmaReport:
    ea_equals_eat: bool
    unitary: bool
    compression_checked: int
    compression_failures: list[str]
    shift_checked: int
    shift_failures: list[str]

    @property
    def passed(self) -> bool:
        return (self.ea_equals_eat and self.unitary and not self.compression_failures
                and not self.shift_failures)

    def to_json(self) -> dict:
        return {"passed": self.passed, "E_A == E_At": self.ea_equals_eat,
                "U U* == U* U == E_A": self.unitary,
                "compression": {"checked": self.compression_checked,
                                "failures": self.compression_failures[:10]},
                "shift_action": {"checked": self.shift_checked,
                                 "failures": self.shift_failures[:10]}}


def _words_up_to(m: SftMatrix, max_len: int) -> list[Word]:
    from .sft import admissible_words

    return [w for k in range(1, max_len + 1) for w in admissible_words(m, k)]


def compression_monomials(matrix: SftMatrix, max_len: int = 3, sample: int | None = None,
                          seed: int = 0) -> list[TensorTerm]:
    """Monomials with all four words nonempty and of length ``<= max_len``.

    All of them, or ``sample`` drawn uniformly with a fixed seed.
    """
    import random

    sw = _words_up_to(matrix, max_len)
    tw = _words_up_to(_transpose(matrix), max_len)
    total = len(tw) ** 2 * len(sw) ** 2
    if sample is None or sample >= total:
        return [((x, y), (mu, nu)) for x in tw for y in tw for mu in sw for nu in sw]
    rng = random.Random(seed)
    return [((rng.choice(tw), rng.choice(tw)), (rng.choice(sw), rng.choice(sw)))
            for _ in range(sample)]


def verify_lemmas(matrix, max_len: int = 3, sample: int | None = None, shift_len: int = 4,
                  seed: int = 0) -> LemmaReport:
    """Check the projection, unitary, compression and shift-action identities exactly."""
    m = validate(matrix)
    e = projection_EA(m)
    u = unitary_UA(m)
    ea_eq = e == projection_EAt(m)
    unitary = u * u.adjoint() == e and u.adjoint() * u == e

    comp_fail = []
    terms = compression_monomials(m, max_len, sample, seed)
    for t in terms:
        elt = TensorElement(m, {t: Fraction(1)})
        expected = elt if compression_criterion(m, t) else TensorElement.zero(m)
        if compress(elt, m) != expected:
            comp_fail.append(format_term(t))

    shift_fail, shift_n = [], 0
    sw = _words_up_to(m, shift_len - 1)
    for xi in sw:
        for mu in sw:
            if len(xi) + len(mu) > shift_len or not m.allows(xi[-1], mu[0]):
                continue
            shift_n += 1
            g = diagonal_generator(m, xi, mu)
            # for |xi| = 1 the left factor is the unit, which needs compressing
            want = compress(diagonal_generator(m, xi[:-1], (xi[-1],) + mu), m)
            got = alpha_A(g, m)
            if got != want or alpha_A_inverse(got, m) != g:
                shift_fail.append(f"xi={xi} mu={mu}")
    return LemmaReport(ea_eq, unitary, len(terms), comp_fail, shift_n, shift_fail)
