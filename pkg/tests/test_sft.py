from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftacoe.sft import (BiPoint, BracketUndefined, InadmissiblePoint, NegativeEntry, NonSquare,
                         NotZeroOne, Orbit, PermutationMatrix, Reducible, SftSpace, System,
                         ZeroRowOrCol, agreement_radius, asymptotic_pair, bracket, check_point,
                         edge_shift, iter_cycles, left_tail_match, metric, parse_matrix,
                         periodic_count, periodic_orbits, periodic_points, right_tail_match, shift,
                         splice, validate)

from conftest import BIG, FULL2, GOLDEN, accepted_matrix, bipoint_on

R = 200


def dense_right_match(x, y):
    """Oracle: scan a long window instead of using the canonical form."""
    if any(x[i] != y[i] for i in range(R, 2 * R)):
        return None
    for i in range(R - 1, -1, -1):
        if x[i] != y[i]:
            return i + 1
    return 0


def dense_left_match(x, y):
    if any(x[i] != y[i] for i in range(-2 * R, -R)):
        return None
    for i in range(-R, 1):
        if x[i] != y[i]:
            return -i + 1
    return 0


def mobius(n):
    out, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


class TestValidate:
    def test_accepts_full_and_golden(self):
        assert validate(FULL2).is_full_shift()
        g = validate(GOLDEN)
        assert g.irreducible and not g.permutation and g.zero_one

    @pytest.mark.parametrize("rows, err", [
        ([[1, 1]], NonSquare),
        ([[1, 0], [1, 0]], ZeroRowOrCol),
        ([[2, 1], [1, 1]], NotZeroOne),
        ([[0, 1], [1, 0]], PermutationMatrix),
        ([[1, 1], [0, 1]], Reducible),
        ([[1, -1], [1, 1]], NegativeEntry),
    ])
    def test_rejections(self, rows, err):
        with pytest.raises(err):
            validate(rows)

    def test_integer_mode(self):
        m = validate(BIG, sft=False)
        assert not m.zero_one and m.n == 2

    def test_parse_forms(self):
        assert parse_matrix("1 1\n1 0") == parse_matrix("[[1,1],[1,0]]")
        assert parse_matrix('{"n": 2, "rows": [[1,1],[1,0]]}').rows() == GOLDEN
        with pytest.raises(NonSquare):
            parse_matrix('{"n": 3, "rows": [[1,1],[1,0]]}')

    def test_edge_shift_counts(self):
        e, edges = edge_shift(BIG)
        assert e.n == 29 == len(edges)
        for n in range(1, 5):
            assert periodic_count(e, n) == periodic_count(validate(BIG, sft=False), n)


class TestBiPoint:
    def test_parse_and_print(self):
        p = BiPoint.parse("1^inf.(2 1).1^inf@0")
        assert [p[i] for i in range(-2, 3)] == [1, 1, 2, 1, 1]
        assert BiPoint.parse(str(p)) == p

    def test_canonical_periodic(self):
        p = BiPoint((1, 2), (1, 2, 1, 2), (1, 2, 1, 2), 0)
        assert p.is_purely_periodic() and p.least_period() == 2
        assert p == BiPoint.periodic((1, 2))

    def test_shift_moves_coordinates(self):
        p = BiPoint.parse("1^inf.(2 3).1^inf@0")
        q = shift(p, 2)
        assert all(q[i] == p[i + 2] for i in range(-10, 10))

    def test_check_point(self, golden):
        check_point(golden, BiPoint.parse("1^inf.(2).1^inf"))
        with pytest.raises(InadmissiblePoint):
            check_point(golden, BiPoint.parse("1^inf.(2 2).1^inf"))

    def test_bracket(self):
        x = BiPoint.parse("1^inf.(2).2^inf@0")
        y = BiPoint.parse("2^inf.(2 1).1^inf@0")
        z = bracket(x, y)
        assert [z[i] for i in range(-3, 4)] == [1, 1, 1, 2, 1, 1, 1]
        with pytest.raises(BracketUndefined):
            bracket(x, BiPoint.periodic((1,)))

    def test_metric_values(self):
        x = BiPoint.periodic((1,))
        assert metric(x, x) == 0
        assert metric(x, BiPoint.periodic((2,))) == 1
        y = BiPoint.parse("1^inf.(2).1^inf@3")
        assert metric(x, y) == Fraction(1, 2) ** 3
        assert metric(x, y, SftSpace(validate(FULL2), Fraction(1, 3))) == Fraction(1, 27)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_canonical_form_is_unique(self, data):
        m = data.draw(accepted_matrix())
        p = data.draw(bipoint_on(m))
        # rebuild from a wider, redundant window
        q = BiPoint.from_coords(lambda i: p[i], p.offset - 7, p.end + 5,
                                3 * len(p.left), 2 * len(p.right))
        assert q == p and str(q) == str(p)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_tail_matches_agree_with_dense_scan(self, data):
        m = data.draw(accepted_matrix())
        x = data.draw(bipoint_on(m))
        y = data.draw(bipoint_on(m))
        cut = data.draw(st.integers(-6, 6))
        z = splice(x, y, cut)
        for a, b in ((x, y), (z, y), (x, z)):
            assert right_tail_match(a, b) == dense_right_match(a, b)
            assert left_tail_match(a, b) == dense_left_match(a, b)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_asymptotic_is_symmetric_and_shift_invariant(self, data):
        m = data.draw(accepted_matrix())
        x = data.draw(bipoint_on(m))
        k = data.draw(st.integers(-5, 5))
        y = splice(x, data.draw(bipoint_on(m)), k)
        z = splice(y, x, k + 3)
        assert (asymptotic_pair(x, z) is None) == (asymptotic_pair(z, x) is None)
        assert (asymptotic_pair(shift(x, k), shift(z, k)) is None) == (asymptotic_pair(x, z) is None)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_agreement_radius_dense(self, data):
        m = data.draw(accepted_matrix())
        x, y = data.draw(bipoint_on(m)), data.draw(bipoint_on(m))
        k = agreement_radius(x, y)
        if k is None:
            assert x == y
        elif k < 0:
            assert x[0] != y[0]
        else:
            assert all(x[i] == y[i] for i in range(-k, k + 1))
            assert x[k + 1] != y[k + 1] or x[-k - 1] != y[-k - 1]

    def test_system_direction(self):
        s = System(validate(FULL2), -1)
        p = BiPoint.parse("1^inf.(2).1^inf@0")
        assert s.step(p) == shift(p, -1)
        assert s.inverse().step(p) == shift(p, 1)


class TestPeriodic:
    @pytest.mark.parametrize("rows", [FULL2, GOLDEN, [[1, 1, 0], [0, 0, 1], [1, 1, 1]]])
    def test_count_matches_cycle_enumeration(self, rows):
        m = validate(rows)
        for n in range(1, 9):
            assert periodic_count(m, n) == sum(1 for _ in iter_cycles(m, n))

    def test_golden_counts_are_lucas(self):
        # tr(B^n) for B = [[1,1],[1,0]]: 1, 3, 4, 7, 11, 18, ...
        assert [periodic_count(validate(GOLDEN), n) for n in range(1, 9)] == [1, 3, 4, 7, 11, 18, 29, 47]

    @settings(max_examples=25, deadline=None)
    @given(accepted_matrix(max_n=3))
    def test_orbit_counts_mobius(self, m):
        orbits = periodic_orbits(m, 7)
        for n in range(1, 8):
            expected = sum(mobius(n // d) * periodic_count(m, d)
                           for d in range(1, n + 1) if n % d == 0) // n
            assert sum(1 for o in orbits if o.length == n) == expected

    def test_points_are_orbit_closed(self, golden):
        pts = periodic_points(golden, 5)
        assert len(pts) == len(set(pts))
        for p in pts:
            assert Orbit.of(p) in periodic_orbits(golden, 5)
            assert shift(p, p.least_period()) == p
