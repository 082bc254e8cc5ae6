"""Cocycles, orbit-equivalence witnesses and their exact verification.

A witness consists of a sliding block code ``h`` with inverse ``h_inv``,
integer window functions ``c1``, ``c2`` and two-cocycles ``d1``, ``d2`` on
the asymptotic relations.  :func:`check_acoe` evaluates every defining
identity on a finite set of eventually periodic test points and asymptotic
pairs.  On such points all tail comparisons are exact, so a failure comes
with an explicit counterexample.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .codes import SlidingBlockCode, WindowFunction
from .groupoid import AElement
from .sft import (BiPoint, Orbit, SftError, SftMatrix, System, asymptotic_pair, check_point,
                  periodic_orbits, periodic_points, shift)
from .zeta import PowerSeries, weighted_zeta_series, zeta_series


class NotAsymptotic(SftError):
    pass


class ZeroAsymptoticPeriod(SftError):
    pass


class DepthExceeded(SftError):
    pass


def f_power(c: WindowFunction, x: BiPoint, n: int, direction: int = 1) -> int:
    """``c^n(x)``: the sum of ``c`` along ``x, phi(x), ..., phi^(n-1)(x)``.

    ``phi = sigma^direction``; ``c^0 = 0`` and ``c^-n(x) = -c^n(phi^-n(x))``.
    """
    if n >= 0:
        return sum(c(shift(x, direction * i)) for i in range(n))
    return -sum(c(shift(x, -direction * i)) for i in range(1, -n + 1))


@dataclass(frozen=True)
class TwoCocycle:
    """An integer two-cocycle on the asymptotic relation.

    ``kind`` is ``"zero"``, ``"coboundary"`` (of the window function ``g``:
    ``d(x, z) = sum_n g(sigma^n x) - g(sigma^n z)``) or ``"custom"``.
    Custom evaluators are only checked on samples.
    """

    kind: str = "zero"
    g: WindowFunction | None = None
    evaluator: Callable[[BiPoint, BiPoint], int] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("zero", "coboundary", "custom"):
            raise SftError(f"unknown cocycle kind {self.kind!r}")
        if self.kind == "coboundary" and self.g is None:
            raise SftError("a coboundary needs its window function g")
        if self.kind == "custom" and self.evaluator is None:
            raise SftError("a custom cocycle needs an evaluator")

    @classmethod
    def zero(cls) -> "TwoCocycle":
        return cls("zero")

    @classmethod
    def coboundary(cls, g: WindowFunction) -> "TwoCocycle":
        return cls("coboundary", g=g)

    @classmethod
    def custom(cls, evaluator: Callable[[BiPoint, BiPoint], int]) -> "TwoCocycle":
        return cls("custom", evaluator=evaluator)

    @property
    def sample_verified_only(self) -> bool:
        return self.kind == "custom"

    def __call__(self, x: BiPoint, z: BiPoint) -> int:
        w = asymptotic_pair(x, z)
        if w is None:
            raise NotAsymptotic(f"({x}, {z}) is not an asymptotic pair")
        if self.kind == "zero":
            return 0
        if self.kind == "custom":
            return int(self.evaluator(x, z))
        g = self.g
        ns, nu = w
        # outside this range the windows of sigma^n x and sigma^n z coincide
        return sum(g(shift(x, n)) - g(shift(z, n)) for n in range(1 - nu - g.hi, ns - g.lo))

    def to_json(self) -> dict:
        if self.kind == "coboundary":
            return {"kind": "coboundary", "g": self.g.to_json()}
        if self.kind == "custom":
            raise SftError("custom cocycles cannot be serialised")
        return {"kind": "zero"}

    @classmethod
    def from_json(cls, data) -> "TwoCocycle":
        kind = data.get("kind", "zero")
        if kind == "coboundary":
            return cls.coboundary(WindowFunction.from_json(data["g"]))
        if kind == "zero":
            return cls.zero()
        raise SftError(f"cannot load a cocycle of kind {kind!r}")


@dataclass(frozen=True)
class CocycleWitness:
    """Data ``(h, c1, c2, d1, d2)`` between ``(X_A, phi)`` and ``(X_B, psi)``.

    ``source_direction`` and ``target_direction`` say whether ``phi`` and
    ``psi`` are the shift or its inverse.
    """

    h: SlidingBlockCode
    h_inv: SlidingBlockCode
    c1: WindowFunction
    c2: WindowFunction
    d1: TwoCocycle = TwoCocycle()
    d2: TwoCocycle = TwoCocycle()
    depth: int = 6
    source_direction: int = 1
    target_direction: int = 1

    def to_json(self) -> dict:
        return {"h": self.h.to_json(), "h_inv": self.h_inv.to_json(),
                "c1": self.c1.to_json(), "c2": self.c2.to_json(),
                "d1": self.d1.to_json(), "d2": self.d2.to_json(), "depth": self.depth,
                "source_direction": self.source_direction,
                "target_direction": self.target_direction}

    @classmethod
    def from_json(cls, data) -> "CocycleWitness":
        return cls(SlidingBlockCode.from_json(data["h"]), SlidingBlockCode.from_json(data["h_inv"]),
                   WindowFunction.from_json(data["c1"]), WindowFunction.from_json(data["c2"]),
                   TwoCocycle.from_json(data.get("d1", {"kind": "zero"})),
                   TwoCocycle.from_json(data.get("d2", {"kind": "zero"})),
                   int(data.get("depth", 6)), int(data.get("source_direction", 1)),
                   int(data.get("target_direction", 1)))


def load_witness(path) -> CocycleWitness:
    with open(path) as fh:
        return CocycleWitness.from_json(json.load(fh))


def save_witness(witness: CocycleWitness, path) -> None:
    with open(path, "w") as fh:
        json.dump(witness.to_json(), fh, indent=2)


def identity_witness(matrix: SftMatrix, depth: int = 6) -> CocycleWitness:
    """``h = id``, ``c1 = c2 = 1``, ``d1 = d2 = 0``: the conjugacy case."""
    one = WindowFunction.constant(matrix, 1)
    h = SlidingBlockCode.identity(matrix)
    return CocycleWitness(h, h, one, one, depth=depth)


def inverse_witness(matrix: SftMatrix, depth: int = 6) -> CocycleWitness:
    """Witness between ``(X_A, sigma)`` and ``(X_A, sigma^-1)``.

    ``h = id``, ``c1 = c2 = -1`` and ``d1 = d2 = 0``.
    """
    minus = WindowFunction.constant(matrix, -1)
    h = SlidingBlockCode.identity(matrix)
    return CocycleWitness(h, h, minus, minus, depth=depth, target_direction=-1)


def conjugacy_witness(h: SlidingBlockCode, h_inv: SlidingBlockCode, source: SftMatrix,
                      target: SftMatrix, depth: int = 6) -> CocycleWitness:
    return CocycleWitness(h, h_inv, WindowFunction.constant(source, 1),
                          WindowFunction.constant(target, 1), depth=depth)


# ---------------------------------------------------------------------------
# groupoid maps


def c_phi(witness: CocycleWitness, g: AElement) -> int:
    """``c1^n(x) + d1(phi^n x, z)`` for ``g = (x, n, z)``."""
    return (f_power(witness.c1, g.x, g.n, g.direction)
            + witness.d1(shift(g.x, g.direction * g.n), g.z))


def c_psi(witness: CocycleWitness, g: AElement) -> int:
    return (f_power(witness.c2, g.x, g.n, g.direction)
            + witness.d2(shift(g.x, g.direction * g.n), g.z))


def phi_h(witness: CocycleWitness, g: AElement) -> AElement:
    """``(x, n, z) -> (h(x), c_phi(x, n, z), h(z))``."""
    return AElement(witness.h(g.x), c_phi(witness, g), witness.h(g.z), witness.target_direction)


def phi_h_inv(witness: CocycleWitness, g: AElement) -> AElement:
    return AElement(witness.h_inv(g.x), c_psi(witness, g), witness.h_inv(g.z),
                    witness.source_direction)


# ---------------------------------------------------------------------------
# the checker


@dataclass
class ConditionResult:
    verdict: str = "pass"  # pass | fail | depth_exceeded | skipped
    checked: int = 0
    max_witness: int | None = None
    counterexample: str | None = None

    def record_witness(self, k: int) -> None:
        self.max_witness = k if self.max_witness is None else max(self.max_witness, k)

    def fail(self, message: str) -> None:
        if self.verdict != "fail":
            self.verdict = "fail"
            self.counterexample = message

    def exceed(self, message: str) -> None:
        if self.verdict == "pass":
            self.verdict = "depth_exceeded"
            self.counterexample = message

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "checked": self.checked,
                "max_witness": self.max_witness, "counterexample": self.counterexample}


CONDITIONS = ("h_inverse", "(1)", "(2)", "(i)", "(ii)", "(iii)", "(iv)",
              "(v)", "(vi)", "(vii)", "(viii)")


@dataclass
class CheckReport:
    conditions: dict[str, ConditionResult]
    n_range: tuple[int, int]
    points: int
    pairs: int
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.verdict == "pass" for r in self.conditions.values())

    @property
    def failed(self) -> list[str]:
        return [k for k, r in self.conditions.items() if r.verdict == "fail"]

    def first_counterexample(self) -> tuple[str, str] | None:
        for k, r in self.conditions.items():
            if r.verdict == "fail":
                return k, r.counterexample
        return None

    def to_json(self) -> dict:
        return {"passed": self.passed, "n_range": list(self.n_range), "points": self.points,
                "pairs": self.pairs, "notes": self.notes,
                "conditions": {k: r.to_json() for k, r in self.conditions.items()}}


@dataclass(frozen=True)
class TestSet:
    points: tuple[BiPoint, ...]
    pairs: tuple[tuple[BiPoint, BiPoint], ...]


def _perturbations(matrix: SftMatrix, x: BiPoint) -> list[BiPoint]:
    """Points differing from x exactly at coordinate 0."""
    out = []
    before, after = x[-1], x[1]
    for s in range(1, matrix.n + 1):
        if s != x[0] and matrix.allows(before, s) and matrix.allows(s, after):
            out.append(BiPoint.from_coords(lambda i, s=s: s if i == 0 else x[i],
                                           -1, 2, len(x.left), len(x.right)))
    return out


def default_test_set(matrix: SftMatrix, max_period: int = 4, cap: int = 200) -> TestSet:
    """Periodic points of period ``<= max_period`` and their one-coordinate perturbations.

    Both lists are cut at ``cap`` entries (in canonical order), which only
    matters for large alphabets.
    """
    periodic = periodic_points(matrix, max_period)[:cap]
    perturbed: list[BiPoint] = []
    pairs: list[tuple[BiPoint, BiPoint]] = []
    for x in periodic:
        for y in _perturbations(matrix, x):
            if len(pairs) >= cap:
                break
            perturbed.append(y)
            pairs.append((x, y))
    pairs.extend((x, x) for x in periodic[:max(0, cap - len(pairs))])
    points = tuple(dict.fromkeys(periodic + perturbed))[:cap]
    return TestSet(points, tuple(pairs))


def _asym_witness(x: BiPoint, y: BiPoint) -> int | None:
    w = asymptotic_pair(x, y)
    return None if w is None else max(w)


def check_acoe(witness: CocycleWitness, a: SftMatrix | System, b: SftMatrix | System,
               test_points: Sequence[BiPoint] | None = None,
               test_pairs: Sequence[tuple[BiPoint, BiPoint]] | None = None) -> CheckReport:
    """Evaluate every condition of the witness on a finite test set.

    Points and pairs of ``B`` are the images under ``h`` of those of ``A``.
    Integer identities are checked for ``|n| <= witness.depth``; a tail
    witness larger than ``depth`` gives ``depth_exceeded`` rather than a
    pass.
    """
    sa = a if isinstance(a, System) else System(a, witness.source_direction)
    sb = b if isinstance(b, System) else System(b, witness.target_direction)
    if test_points is None or test_pairs is None:
        ts = default_test_set(sa.matrix)
        test_points = ts.points if test_points is None else test_points
        test_pairs = ts.pairs if test_pairs is None else test_pairs
    depth = witness.depth
    h, hi = witness.h, witness.h_inv
    c1, c2, d1, d2 = witness.c1, witness.c2, witness.d1, witness.d2
    res = {k: ConditionResult() for k in CONDITIONS}
    ns = range(-depth, depth + 1)

    def guard(cond: str, label: str, fn: Callable[[], None]) -> None:
        res[cond].checked += 1
        try:
            fn()
        except SftError as err:
            res[cond].fail(f"{label}: {type(err).__name__}: {err}")

    # images of the test data in B
    b_points: list[BiPoint] = []
    for x in test_points:
        def inv(x=x):
            y = check_point(sb.matrix, h(x))
            b_points.append(y)
            if hi(y) != x:
                res["h_inverse"].fail(f"h_inv(h(x)) != x for x = {x}")
            if h(hi(y)) != y:
                res["h_inverse"].fail(f"h(h_inv(y)) != y for y = {y}")
        guard("h_inverse", f"x = {x}", inv)
    b_pairs = []
    for x, z in test_pairs:
        try:
            b_pairs.append((h(x), h(z)))
        except SftError:
            pass

    def tails(cond: str, label: str, u: BiPoint, v: BiPoint) -> None:
        k = _asym_witness(u, v)
        if k is None:
            res[cond].fail(f"{label}: {u} and {v} are not asymptotic")
            return
        res[cond].record_witness(k)
        if k > depth:
            res[cond].exceed(f"{label}: witness {k} exceeds depth {depth}")

    def cocycle_identity(cond: str, sys: System, c: WindowFunction, d: TwoCocycle, pairs) -> None:
        for x, z in pairs:
            for m in ns:
                def run(x=x, z=z, m=m):
                    lhs = f_power(c, x, m, sys.direction) + d(sys.step(x, m), sys.step(z, m))
                    rhs = f_power(c, z, m, sys.direction) + d(x, z)
                    if lhs != rhs:
                        res[cond].fail(f"(x, z) = ({x}, {z}), m = {m}: {lhs} != {rhs}")
                guard(cond, f"(x, z) = ({x}, {z}), m = {m}", run)

    cocycle_identity("(1)", sa, c1, d1, test_pairs)
    cocycle_identity("(2)", sb, c2, d2, b_pairs)

    for x in test_points:
        guard("(i)", f"x = {x}", lambda x=x: tails(
            "(i)", f"x = {x}", sb.step(h(x), c1(x)), h(sa.step(x))))
    for y in b_points:
        guard("(ii)", f"y = {y}", lambda y=y: tails(
            "(ii)", f"y = {y}", sa.step(hi(y), c2(y)), hi(sb.step(y))))
    for x, z in test_pairs:
        guard("(iii)", f"(x, z) = ({x}, {z})", lambda x=x, z=z: tails(
            "(iii)", f"(x, z) = ({x}, {z})", sb.step(h(x), d1(x, z)), h(z)))
    for y, w in b_pairs:
        guard("(iv)", f"(y, w) = ({y}, {w})", lambda y=y, w=w: tails(
            "(iv)", f"(y, w) = ({y}, {w})", sa.step(hi(y), d2(y, w)), hi(w)))

    def orbit_identity(cond, pts, src, dst, cs, cd, dd, hmap):
        for x in pts:
            for n in ns:
                def run(x=x, n=n):
                    k = f_power(cs, x, n, src.direction)
                    hx = hmap(x)
                    val = f_power(cd, hx, k, dst.direction) + dd(dst.step(hx, k), hmap(src.step(x, n)))
                    if val != n:
                        res[cond].fail(f"x = {x}, n = {n}: value {val} != {n}")
                guard(cond, f"x = {x}, n = {n}", run)

    orbit_identity("(v)", test_points, sa, sb, c1, c2, d2, h)
    orbit_identity("(vi)", b_points, sb, sa, c2, c1, d1, hi)

    def pair_identity(cond, pairs, src, dst, cd, ds, dd, hmap):
        for x, z in pairs:
            def run(x=x, z=z):
                k = ds(x, z)
                hx = hmap(x)
                val = f_power(cd, hx, k, dst.direction) + dd(dst.step(hx, k), hmap(z))
                if val != 0:
                    res[cond].fail(f"(x, z) = ({x}, {z}): value {val} != 0")
            guard(cond, f"(x, z) = ({x}, {z})", run)

    pair_identity("(vii)", test_pairs, sa, sb, c2, d1, d2, h)
    pair_identity("(viii)", b_pairs, sb, sa, c1, d2, d1, hi)

    notes = []
    for name, d in (("d1", d1), ("d2", d2)):
        if d.sample_verified_only:
            notes.append(f"{name} is a custom cocycle: sample-verified only")
    return CheckReport(res, (-depth, depth), len(test_points), len(test_pairs), notes)


def check_cocycle_identity(d: TwoCocycle, triples: Iterable[tuple[BiPoint, BiPoint, BiPoint]]) -> bool:
    """``d(x, z) + d(z, w) == d(x, w)`` on the given triples."""
    return all(d(x, z) + d(z, w) == d(x, w) for x, z, w in triples)


# ---------------------------------------------------------------------------
# periodic orbits


def eta_h(witness: CocycleWitness, x: BiPoint) -> BiPoint:
    """The purely periodic limit of ``psi^(q k)(h(x))`` with ``q = |c1^p(x)|``."""
    if not x.is_purely_periodic():
        raise SftError(f"{x} is not purely periodic")
    p = x.least_period()
    q = abs(f_power(witness.c1, x, p, witness.source_direction))
    if q == 0:
        raise ZeroAsymptoticPeriod(f"c1^{p} vanishes at {x}")
    y = witness.h(x)
    # psi^(qk) with psi = sigma^dir reads the tail in direction dir
    forward = witness.target_direction == 1
    tail = y.right if forward else y.left
    if q % len(tail):
        raise SftError(f"h(x) = {y} has no q-periodic limit for q = {q}")
    big = q * (abs(y.offset) + len(y.core) + len(y.left) + len(y.right) + 1)
    base = big if forward else -big
    return BiPoint.periodic(tuple(y[base + i] for i in range(q)))


@dataclass(frozen=True)
class OrbitPairing:
    pairs: tuple[tuple[Orbit, Orbit], ...]
    lengths_ok: bool
    injective: bool

    @property
    def ok(self) -> bool:
        return self.lengths_ok and self.injective


def xi_h_orbit_map(witness: CocycleWitness, matrix: SftMatrix, max_length: int) -> OrbitPairing:
    """Pair each orbit of length ``<= max_length`` with the orbit of ``eta_h``."""
    pairs = []
    lengths_ok = True
    for orbit in periodic_orbits(matrix, max_length):
        x = orbit.representative
        image = Orbit.of(eta_h(witness, x))
        expected = abs(f_power(witness.c1, x, orbit.length, witness.source_direction))
        lengths_ok = lengths_ok and image.length == expected
        pairs.append((orbit, image))
    images = [b for _, b in pairs]
    return OrbitPairing(tuple(pairs), lengths_ok, len(set(images)) == len(images))


@dataclass(frozen=True)
class ZetaTransferReport:
    forward: tuple[PowerSeries, PowerSeries]
    backward: tuple[PowerSeries, PowerSeries]
    first_mismatch: tuple[str, int] | None

    @property
    def passed(self) -> bool:
        return self.first_mismatch is None

    def __bool__(self) -> bool:
        return self.passed


def _first_difference(a: PowerSeries, b: PowerSeries) -> int | None:
    for k, (u, v) in enumerate(zip(a.coefficients, b.coefficients)):
        if u != v:
            return k
    return None


def zeta_transfer_check(witness: CocycleWitness, a: SftMatrix, b: SftMatrix,
                        order: int = 12, max_period: int | None = None) -> ZetaTransferReport:
    """Compare the ``c1``-weighted zeta function of A with the zeta function of B, and back."""
    fwd = (weighted_zeta_series(a, witness.c1, order, max_period), zeta_series(b, order))
    bwd = (weighted_zeta_series(b, witness.c2, order, max_period), zeta_series(a, order))
    mismatch = None
    for label, (u, v) in (("forward", fwd), ("backward", bwd)):
        k = _first_difference(u, v)
        if k is not None:
            mismatch = (label, k)
            break
    return ZetaTransferReport(fwd, bwd, mismatch)
