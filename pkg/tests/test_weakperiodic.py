"""Four-component boundary-law system on the index-4 subgroup classes."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from hctree.core import DomainError, ModelParams
from hctree.solvers import (
    solve_translation_invariant,
    solve_two_periodic_k2_closed,
    solve_two_periodic_k3_closed,
)
from hctree.weakperiodic import (
    SOLVE_SETS,
    WeakPeriodicParams,
    invariant_set_check,
    lambda_pm,
    s_pm,
    solve_weak_periodic,
    weak_system_map,
)

positives = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


class TestParams:
    def test_valid(self):
        wp = WeakPeriodicParams(3, 2, 1.5)
        assert wp.model() == ModelParams(3, 1.5)

    @pytest.mark.parametrize("i", [0, 4, -1, 1.0])
    def test_i_range(self, i):
        with pytest.raises(DomainError):
            WeakPeriodicParams(2, i, 1.0)

    def test_i_upper_is_k_plus_one(self):
        WeakPeriodicParams(2, 3, 1.0)  # allowed
        with pytest.raises(DomainError):
            WeakPeriodicParams(2, 4, 1.0)

    def test_rejects_bad_lam(self):
        with pytest.raises(DomainError):
            WeakPeriodicParams(2, 1, 0.0)


class TestSystemMap:
    def test_rejects_nonpositive(self):
        wp = WeakPeriodicParams(2, 1, 1.0)
        with pytest.raises(DomainError):
            weak_system_map(wp, (1.0, 0.0, 1.0, 1.0))

    @given(
        st.integers(min_value=2, max_value=6),
        st.floats(min_value=0.1, max_value=20.0),
        positives,
        positives,
    )
    @settings(max_examples=60)
    def test_invariant_planes_preserved(self, k, lam, a, b):
        # each named plane maps into itself under W for every generator count
        for i in range(1, k + 2):
            wp = WeakPeriodicParams(k, i, lam)
            assert invariant_set_check(wp, "I2", (a, b, a, b), tol=1e-7)
            assert invariant_set_check(wp, "I3", (a, a, b, b), tol=1e-7)
            assert invariant_set_check(wp, "I4", (a, b, b, a), tol=1e-7)

    @given(
        st.integers(min_value=2, max_value=5),
        st.floats(min_value=0.1, max_value=10.0),
        positives,
        positives,
        positives,
        positives,
    )
    @settings(max_examples=60)
    def test_swap_commutation(self, k, lam, z1, z2, z3, z4):
        # W commutes with the simultaneous swap (1<->4)(2<->3)
        wp = WeakPeriodicParams(k, 1, lam)
        w = weak_system_map(wp, (z1, z2, z3, z4))
        ws = weak_system_map(wp, (z4, z3, z2, z1))
        swapped = (w[3], w[2], w[1], w[0])
        for x, y in zip(ws, swapped):
            assert x == pytest.approx(y, rel=1e-12)

    @given(
        st.integers(min_value=2, max_value=6),
        st.floats(min_value=0.1, max_value=10.0),
        positives,
        positives,
    )
    @settings(max_examples=60)
    def test_top_generator_count_reduces(self, k, lam, za, zb):
        # at i = k the middle factor simplifies; recompute it from scratch
        wp = WeakPeriodicParams(k, k, lam)
        z = (za, zb, za, zb)
        got = weak_system_map(wp, z)

        def local(za_, zb_):
            # the plain divisor drops out because its exponent k - i is 0
            base = 1.0 + lam * za_
            mid = base + lam * zb_ ** ((k - 1.0) / k)
            return (base / mid) ** k

        expect = (local(z[2], z[3]), local(z[3], z[2]),
                  local(z[0], z[1]), local(z[1], z[0]))
        for g, e in zip(got, expect):
            assert g == pytest.approx(e, rel=1e-10)

    @pytest.mark.parametrize("k,i,lam", [(2, 1, 3.0), (2, 2, 6.0), (3, 1, 2.0), (3, 4, 1.0), (6, 1, 10.0)])
    def test_diagonal_fixed_point(self, k, i, lam):
        # the homogeneous fixed point, copied to all four components, is
        # fixed by W for every i
        z_star = solve_translation_invariant(ModelParams(k, lam))
        wp = WeakPeriodicParams(k, i, lam)
        image = weak_system_map(wp, (z_star,) * 4)
        for v in image:
            assert v == pytest.approx(z_star, rel=1e-9)

    @pytest.mark.parametrize(
        "k,lam,closed",
        [(2, 6.0, solve_two_periodic_k2_closed), (3, 3.0, solve_two_periodic_k3_closed)],
    )
    def test_alternating_pair_sits_in_first_plane(self, k, lam, closed):
        # for i = 1 the plane I2 contains the alternating two-periodic pair
        z1, z2 = closed(lam)
        wp = WeakPeriodicParams(k, 1, lam)
        image = weak_system_map(wp, (z1, z2, z1, z2))
        assert image[0] == pytest.approx(z1, abs=1e-10)
        assert image[1] == pytest.approx(z2, abs=1e-10)
        assert image[2] == pytest.approx(z1, abs=1e-10)
        assert image[3] == pytest.approx(z2, abs=1e-10)


class TestSolver:
    def test_rejects_unknown_set(self):
        with pytest.raises(DomainError):
            solve_weak_periodic(WeakPeriodicParams(2, 1, 1.0), "I1")

    def test_solve_sets_constant(self):
        assert SOLVE_SETS == ("I2", "I3", "I4")

    def test_subcritical_single_constant_point(self):
        rep = solve_weak_periodic(WeakPeriodicParams(2, 1, 3.0), "I2")
        assert rep.count == 1
        assert rep.ti_flags == (True,)
        assert rep.non_ti_count == 0

    def test_supercritical_three_points(self):
        rep = solve_weak_periodic(WeakPeriodicParams(2, 1, 6.0), "I2")
        assert rep.count == 3
        assert rep.non_ti_count == 2
        z1, z2 = solve_two_periodic_k2_closed(6.0)
        non_ti = [fp.values for fp, flag in zip(rep.fixed_points, rep.ti_flags) if not flag]
        assert sorted(v[0] for v in non_ti) == pytest.approx([z1, z2], rel=1e-9)

    def test_k3_counts(self):
        assert solve_weak_periodic(WeakPeriodicParams(3, 1, 1.5), "I2").count == 1
        rep = solve_weak_periodic(WeakPeriodicParams(3, 1, 3.0), "I2")
        assert rep.count == 3
        assert rep.non_ti_count == 2

    def test_bifurcation_point_merges_to_one(self):
        # exactly at the threshold the pair collapses onto the diagonal;
        # the cluster merge must report a single constant point
        rep = solve_weak_periodic(WeakPeriodicParams(2, 1, 4.0), "I2")
        assert rep.count == 1
        assert rep.ti_flags == (True,)

    @pytest.mark.parametrize("lam", [4.0000001, 4.001])
    def test_just_past_bifurcation_resolves_three(self, lam):
        rep = solve_weak_periodic(WeakPeriodicParams(2, 1, lam), "I2")
        assert rep.count == 3

    def test_second_plane_holds_only_diagonal(self):
        # on I3 the alternating pair is not available; only the constant
        # point survives even far above the threshold
        rep = solve_weak_periodic(WeakPeriodicParams(2, 1, 6.0), "I3")
        assert rep.count == 1
        assert rep.ti_flags == (True,)

    def test_i4_window_interior_has_non_constant_points(self):
        rep = solve_weak_periodic(WeakPeriodicParams(6, 1, 10.0), "I4")
        assert rep.count >= 3
        assert rep.non_ti_count >= 2
        lo, hi = 0.045462982429944688, 0.074697540058191295
        non_ti = [fp.values for fp, flag in zip(rep.fixed_points, rep.ti_flags) if not flag]
        firsts = sorted(v[0] for v in non_ti)
        assert firsts[0] == pytest.approx(lo, rel=1e-9)
        assert firsts[-1] == pytest.approx(hi, rel=1e-9)

    def test_i4_fixed_points_verify_against_map(self):
        wp = WeakPeriodicParams(6, 1, 10.0)
        rep = solve_weak_periodic(wp, "I4")
        for fp in rep.fixed_points:
            image = weak_system_map(wp, fp.values)
            for z, w in zip(fp.values, image):
                assert w == pytest.approx(z, abs=1e-10)

    @pytest.mark.parametrize("lam,expected", [(5.0, 1), (5.8, 3), (63.0, 3), (70.0, 1)])
    def test_i4_window_boundaries(self, lam, expected):
        rep = solve_weak_periodic(WeakPeriodicParams(6, 1, lam), "I4")
        assert rep.count == expected

    def test_report_is_sorted(self):
        rep = solve_weak_periodic(WeakPeriodicParams(2, 1, 6.0), "I2")
        firsts = [fp.values[0] for fp in rep.fixed_points]
        assert firsts == sorted(firsts)


class TestWindowEndpoints:
    def test_s_pm_k6(self):
        sm, sp = s_pm(6)
        assert sm == pytest.approx(0.5, rel=1e-14)
        assert sp == pytest.approx(1.0, rel=1e-14)

    @pytest.mark.parametrize("k", range(6, 13))
    def test_vieta_product(self, k):
        sm, sp = s_pm(k)
        assert sm * sp == pytest.approx(0.5, rel=1e-12)
        assert sm + sp == pytest.approx((k - 3) / 2.0, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            s_pm(5)
        with pytest.raises(DomainError):
            lambda_pm(4)

    def test_lambda_window_k6(self):
        lo, hi = lambda_pm(6)
        assert lo == pytest.approx(5.6953125, rel=1e-14)
        assert hi == pytest.approx(64.0, rel=1e-14)

    @pytest.mark.parametrize("k", [6, 7, 9])
    def test_endpoints_touch_diagonal(self, k):
        # at either window endpoint the scaled constant solution lam*z equals
        # the corresponding root, so the extra branch merges into the diagonal
        sm, sp = s_pm(k)
        lo, hi = lambda_pm(k)
        for lam, s in ((lo, sm), (hi, sp)):
            z = solve_translation_invariant(ModelParams(k, lam))
            assert lam * z == pytest.approx(s, rel=1e-10)
