import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftacoe.acoe import (CocycleWitness, NotAsymptotic, TwoCocycle, ZeroAsymptoticPeriod,
                          c_phi, c_psi, check_acoe, check_cocycle_identity, conjugacy_witness,
                          default_test_set, eta_h, f_power, identity_witness, inverse_witness,
                          load_witness, phi_h, phi_h_inv, save_witness, xi_h_orbit_map,
                          zeta_transfer_check)
from sftacoe.codes import SlidingBlockCode, WindowFunction
from sftacoe.groupoid import AElement, a_compose
from sftacoe.sft import (BiPoint, InadmissiblePoint, asymptotic_pair, check_point, periodic_points,
                         shift, splice, validate)

from conftest import FULL2, GOLDEN, accepted_matrix, bipoint_on


def window_functions(m):
    return st.tuples(st.integers(-2, 0), st.integers(0, 2), st.integers(0, 10 ** 6)).map(
        lambda t: WindowFunction.from_function(
            m, t[0], t[1], lambda b, s=t[2]: (hash((b, s)) % 7) - 3))


def broken_witness(m):
    two = WindowFunction.constant(m, 2)
    w = identity_witness(m)
    return CocycleWitness(w.h, w.h_inv, two, w.c2, depth=w.depth)


@st.composite
def asymptotic_to(draw, m, x, n=0):
    """A point asymptotic to sigma^n x: splice other material into a window."""
    y = shift(x, n)
    other = draw(bipoint_on(m))
    a = draw(st.integers(-5, 0))
    b = draw(st.integers(1, 6))
    z = splice(splice(y, other, a), y, b)
    try:
        check_point(m, z)
    except InadmissiblePoint:
        return y
    return z


class TestOneCocycles:
    def test_trivial_values(self, golden):
        x = BiPoint.parse("1^inf.(2).1^inf")
        c = WindowFunction.constant(golden, 1)
        assert f_power(c, x, 0) == 0
        assert [f_power(c, x, n) for n in (-3, 5)] == [-3, 5]

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_cocycle_identity(self, data):
        m = data.draw(accepted_matrix(max_n=3))
        c = data.draw(window_functions(m))
        x = data.draw(bipoint_on(m))
        n, k = data.draw(st.integers(-6, 6)), data.draw(st.integers(-6, 6))
        d = data.draw(st.sampled_from([1, -1]))
        assert f_power(c, x, n, d) + f_power(c, shift(x, d * n), k, d) == f_power(c, x, n + k, d)


class TestTwoCocycles:
    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_coboundary_matches_dense_sum(self, data):
        m = data.draw(accepted_matrix(max_n=3))
        g = data.draw(window_functions(m))
        x = data.draw(bipoint_on(m))
        z = data.draw(asymptotic_to(m, x))
        d = TwoCocycle.coboundary(g)
        assert d(x, z) == sum(g(shift(x, n)) - g(shift(z, n)) for n in range(-12, 12))

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_coboundary_identity(self, data):
        m = data.draw(accepted_matrix(max_n=3))
        d = TwoCocycle.coboundary(data.draw(window_functions(m)))
        x = data.draw(bipoint_on(m))
        z = data.draw(asymptotic_to(m, x))
        w = data.draw(asymptotic_to(m, z))
        assert check_cocycle_identity(d, [(x, z, w)])
        assert check_cocycle_identity(TwoCocycle.zero(), [(x, z, w)])

    def test_rejects_non_asymptotic(self):
        with pytest.raises(NotAsymptotic):
            TwoCocycle.zero()(BiPoint.periodic((1,)), BiPoint.periodic((2,)))

    def test_custom_is_flagged(self, golden):
        d = TwoCocycle.custom(lambda x, z: 0)
        assert d.sample_verified_only
        w = identity_witness(golden)
        w = CocycleWitness(w.h, w.h_inv, w.c1, w.c2, d, d, depth=w.depth)
        report = check_acoe(w, golden, golden)
        assert report.passed and any("custom" in n for n in report.notes)


class TestChecker:
    @pytest.mark.parametrize("rows", [FULL2, GOLDEN])
    def test_identity_and_inverse_pass(self, rows):
        m = validate(rows)
        for w in (identity_witness(m), inverse_witness(m)):
            report = check_acoe(w, m, m)
            assert report.passed, report.to_json()
            assert report.conditions["(v)"].checked > 0

    def test_broken_witness_fails_with_point(self, full2):
        report = check_acoe(broken_witness(full2), full2, full2)
        assert not report.passed
        assert "(v)" in report.failed
        cond, where = report.first_counterexample()
        assert "x =" in where

    def test_hand_value_on_fixed_point(self, full2):
        # c1 = 2 at the fixed point 1^inf: c1^n = 2n and c2^(2n) = 2n != n
        x = BiPoint.periodic((1,))
        report = check_acoe(broken_witness(full2), full2, full2, [x], [(x, x)])
        assert report.conditions["(v)"].verdict == "fail"
        assert report.conditions["(v)"].counterexample.startswith(f"x = {x}, n = -6")

    def test_symbol_flip_is_a_conjugacy(self, full2):
        flip = SlidingBlockCode(0, 0, {(1,): 2, (2,): 1})
        report = check_acoe(conjugacy_witness(flip, flip, full2, full2), full2, full2)
        assert report.passed

    def test_shift_map_is_a_conjugacy(self, golden):
        fwd = SlidingBlockCode(1, 1, {(1,): 1, (2,): 2})
        back = SlidingBlockCode(-1, -1, {(1,): 1, (2,): 2})
        assert check_acoe(conjugacy_witness(fwd, back, golden, golden), golden, golden).passed

    def test_wrong_inverse_is_caught(self, full2):
        flip = SlidingBlockCode(0, 0, {(1,): 2, (2,): 1})
        ident = SlidingBlockCode.identity(full2)
        report = check_acoe(conjugacy_witness(flip, ident, full2, full2), full2, full2)
        assert report.conditions["h_inverse"].verdict == "fail"

    def test_nonzero_two_cocycle_fails(self, golden):
        g = WindowFunction(0, 0, {(1,): 0, (2,): 1})
        w = identity_witness(golden)
        w = CocycleWitness(w.h, w.h_inv, w.c1, w.c2, TwoCocycle.coboundary(g), w.d2,
                           depth=w.depth)
        assert "(iii)" in check_acoe(w, golden, golden).failed

    def test_depth_exceeded_is_not_failure(self, golden):
        w = identity_witness(golden, depth=0)
        report = check_acoe(w, golden, golden)
        assert report.conditions["(iii)"].verdict == "depth_exceeded"
        assert not report.failed and not report.passed

    def test_default_test_set(self, golden):
        ts = default_test_set(golden)
        assert set(periodic_points(golden, 4)) <= set(ts.points)
        assert all(asymptotic_pair(x, z) is not None for x, z in ts.pairs)
        assert any(x != z for x, z in ts.pairs)


class TestGroupoidMaps:
    @pytest.mark.parametrize("make", [identity_witness, inverse_witness])
    @settings(max_examples=25, deadline=None)
    @given(data=st.data())
    def test_round_trip_identities(self, make, data):
        m = validate(GOLDEN)
        w = make(m)
        x = data.draw(bipoint_on(m))
        n = data.draw(st.integers(-5, 5))
        g = AElement(x, n, data.draw(asymptotic_to(m, x, n)))
        img = phi_h(w, g)
        assert c_psi(w, img) == n
        assert phi_h_inv(w, img) == g
        assert c_phi(w, g) == (n if w.target_direction == 1 else -n)

    @settings(max_examples=25, deadline=None)
    @given(st.data())
    def test_c_phi_is_additive(self, data):
        m = validate(GOLDEN)
        # a constant c1 with a shift-invariant d1 satisfies condition (1)
        w = identity_witness(m)
        c1 = WindowFunction.constant(m, data.draw(st.integers(-3, 3)))
        w = CocycleWitness(w.h, w.h_inv, c1, w.c2,
                           TwoCocycle.coboundary(data.draw(window_functions(m))), w.d2)
        x = data.draw(bipoint_on(m))
        n1, n2 = data.draw(st.integers(-4, 4)), data.draw(st.integers(-4, 4))
        y = data.draw(asymptotic_to(m, x, n1))
        g1 = AElement(x, n1, y)
        g2 = AElement(y, n2, data.draw(asymptotic_to(m, y, n2)))
        assert c_phi(w, a_compose(g1, g2)) == c_phi(w, g1) + c_phi(w, g2)


class TestPeriodicTransfer:
    def test_eta_identity_and_inverse(self, golden):
        for x in periodic_points(golden, 5):
            assert eta_h(identity_witness(golden), x) == x
            assert eta_h(inverse_witness(golden), x) == x

    def test_eta_of_block_conjugacy(self, full2):
        flip = SlidingBlockCode(0, 0, {(1,): 2, (2,): 1})
        w = conjugacy_witness(flip, flip, full2, full2)
        for x in periodic_points(full2, 4):
            assert eta_h(w, x) == flip(x)

    def test_eta_least_period(self, full2):
        w = identity_witness(full2)
        for x in periodic_points(full2, 4):
            assert eta_h(w, x).least_period() == abs(f_power(w.c1, x, x.least_period()))

    def test_zero_period(self, full2):
        zero = WindowFunction.constant(full2, 0)
        w = identity_witness(full2)
        w = CocycleWitness(w.h, w.h_inv, zero, zero)
        with pytest.raises(ZeroAsymptoticPeriod):
            eta_h(w, BiPoint.periodic((1,)))

    @pytest.mark.parametrize("make", [identity_witness, inverse_witness])
    def test_orbit_pairing(self, golden, make):
        pairing = xi_h_orbit_map(make(golden), golden, 7)
        assert pairing.ok
        assert all(a.length == b.length for a, b in pairing.pairs)
        if make is identity_witness:
            assert all(a == b for a, b in pairing.pairs)

    @pytest.mark.parametrize("rows", [FULL2, GOLDEN])
    def test_zeta_transfer(self, rows):
        m = validate(rows)
        assert zeta_transfer_check(identity_witness(m), m, m, order=12)
        assert zeta_transfer_check(inverse_witness(m), m, m, order=12)
        bad = zeta_transfer_check(broken_witness(m), m, m, order=12)
        assert not bad and bad.first_mismatch[0] == "forward"


def test_witness_json_roundtrip(tmp_path, golden):
    g = WindowFunction(0, 1, {(1, 1): 1, (1, 2): 0, (2, 1): -1})
    w = identity_witness(golden)
    w = CocycleWitness(w.h, w.h_inv, w.c1, w.c2, TwoCocycle.coboundary(g), w.d2, depth=4)
    for wit in (w, inverse_witness(golden)):
        path = tmp_path / "w.json"
        save_witness(wit, path)
        assert load_witness(path) == wit
