import math

import numpy as np
import pytest

from inflowshock import (
    DegenerateShockError,
    DomainError,
    EndState,
    FlowRegion,
    GasParams,
    bl_line,
    char_speeds,
    classify_state,
    dpressure,
    entropy_check,
    pressure,
    r_curve,
    rh_closure,
    s2_curve,
    shock_speed,
    sonic_intersection,
    sound_speed,
)

G2 = GasParams(gamma=2.0, mu=1.0)
G1 = GasParams(gamma=1.0, mu=1.0)
W_SUB = EndState(1.0, 0.5)


class TestPressure:
    def test_identity_at_unit_volume(self):
        assert pressure(1.0, G2) == 1.0

    def test_direct_values(self):
        assert pressure(2.0, G2) == pytest.approx(0.25, abs=1e-15)
        assert pressure(0.5, G1) == pytest.approx(2.0, abs=1e-15)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            pressure(0.0, G2)
        with pytest.raises(DomainError):
            pressure(-1.0, G2)

    def test_strictly_decreasing_and_convex(self):
        rng = np.random.default_rng(7)
        v = np.sort(rng.uniform(0.05, 10.0, size=300))
        p = pressure(v, G2)
        assert np.all(np.diff(p) < 0)
        assert np.all(dpressure(v, G2) < 0)
        # second difference on uniform triples stays positive
        vv = np.linspace(0.1, 5.0, 400)
        pp = pressure(vv, GasParams(gamma=1.4, mu=1.0))
        assert np.all(np.diff(pp, 2) > 0)


class TestDerivativesAndSpeeds:
    def test_dpressure_values(self):
        assert dpressure(1.0, G2) == pytest.approx(-2.0, abs=1e-15)
        assert dpressure(2.0, G2) == pytest.approx(-0.25, abs=1e-15)
        assert dpressure(1.0, G1) == pytest.approx(-1.0, abs=1e-15)

    def test_sound_speed(self):
        assert sound_speed(3.7, G1) == pytest.approx(1.0, abs=1e-15)
        assert sound_speed(1.0, G2) == pytest.approx(math.sqrt(2.0), abs=1e-15)
        assert sound_speed(2.0, G2) == pytest.approx(1.0, abs=1e-15)

    def test_char_speeds_antisymmetric(self):
        lam1, lam2 = char_speeds(1.0, G2)
        assert lam2 == pytest.approx(math.sqrt(2.0), abs=1e-15)
        assert lam1 == -lam2
        rng = np.random.default_rng(3)
        v = rng.uniform(0.1, 8.0, size=50)
        l1, l2 = char_speeds(v, G2)
        assert np.allclose(l1 + l2, 0.0, atol=1e-15)

    def test_char_speeds_gamma1(self):
        lam1, lam2 = char_speeds(1.0, G1)
        assert (lam1, lam2) == (pytest.approx(-1.0), pytest.approx(1.0))


class TestClassify:
    def test_three_regions(self):
        assert classify_state(EndState(1.0, 0.5), G2, tol=0.0) is FlowRegion.SUBSONIC
        assert classify_state(EndState(1.0, 2.0), G2, tol=0.0) is FlowRegion.SUPERSONIC
        assert classify_state(EndState(2.0, 1.0), G2, tol=0.0) is FlowRegion.TRANSONIC

    def test_rejects_nonpositive_velocity(self):
        with pytest.raises(DomainError):
            classify_state(EndState(1.0, -0.5), G2)
        with pytest.raises(DomainError):
            classify_state(EndState(1.0, 0.0), G2)

    def test_stable_under_small_tolerance(self):
        # perturbing tol below the classification margin leaves the verdict fixed
        w = EndState(1.0, 0.5)
        for tol in (0.0, 1e-12, 1e-9, 1e-6):
            assert classify_state(w, G2, tol=tol) is FlowRegion.SUBSONIC


class TestShockSpeedAndClosure:
    def test_family2_value(self):
        s = shock_speed(1.0, 2.0, 2, G2)
        assert s == pytest.approx(math.sqrt(0.75), abs=1e-15)

    def test_family1_sign_flip(self):
        assert shock_speed(1.0, 2.0, 1, G2) == pytest.approx(-math.sqrt(0.75), abs=1e-15)

    def test_swap_symmetry(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            a, b = rng.uniform(0.1, 5.0, size=2)
            if a == b:
                continue
            assert shock_speed(a, b, 2, G2) == pytest.approx(shock_speed(b, a, 2, G2), rel=1e-14)

    def test_radicand_positive(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            vl, vr = rng.uniform(0.05, 10.0, size=2)
            if vl == vr:
                continue
            rad = (pressure(vr, G2) - pressure(vl, G2)) / (vl - vr)
            assert rad > 0

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateShockError):
            shock_speed(1.0, 1.0, 2, G2)

    def test_rh_closure_example(self):
        w_plus, s = rh_closure(W_SUB, 2.0, G2)
        assert s == pytest.approx(0.8660254037844386, abs=1e-15)
        assert w_plus.u == pytest.approx(-0.3660254037844386, abs=1e-15)
        assert entropy_check(W_SUB.u, w_plus.u)

    def test_rh_both_relations(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            vm, vp = rng.uniform(0.2, 4.0, size=2)
            if abs(vm - vp) < 1e-6:
                continue
            w_minus = EndState(vm, rng.uniform(-1, 1))
            w_plus, s = rh_closure(w_minus, vp, G2)
            r1 = s * (w_plus.v - w_minus.v) - (w_minus.u - w_plus.u)
            r2 = s * (w_plus.u - w_minus.u) - (pressure(vp, G2) - pressure(vm, G2))
            scale = max(1.0, abs(s), abs(w_plus.u))
            assert abs(r1) < 1e-12 * scale
            assert abs(r2) < 1e-12 * scale

    def test_lax_ordering_along_s2(self):
        # lambda_2(v_plus) < s_2 < lambda_2(v_minus) for v_plus > v_minus
        rng = np.random.default_rng(17)
        for _ in range(100):
            vm = rng.uniform(0.2, 3.0)
            vp = vm + rng.uniform(1e-3, 3.0)
            s = shock_speed(vm, vp, 2, G2)
            _, lam2_m = char_speeds(vm, G2)
            _, lam2_p = char_speeds(vp, G2)
            assert lam2_p < s < lam2_m


class TestEntropy:
    def test_cases(self):
        assert entropy_check(0.5, -0.366)
        assert not entropy_check(1.0, 1.0)
        assert not entropy_check(0.0, 1.0)


class TestBLLineAndSonic:
    def test_bl_line_values(self):
        assert bl_line(W_SUB, 2.0) == pytest.approx(1.0, abs=1e-15)
        assert bl_line(W_SUB, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_bl_line_slope_is_minus_s_minus(self):
        s_minus = -W_SUB.u / W_SUB.v
        assert bl_line(W_SUB, 3.0) - bl_line(W_SUB, 2.0) == pytest.approx(-s_minus, abs=1e-15)

    def test_sonic_intersection_exact(self):
        w_star = sonic_intersection(W_SUB, G2)
        assert w_star.v == pytest.approx(2.0, abs=1e-12)
        assert w_star.u == pytest.approx(1.0, abs=1e-12)

    def test_sonic_point_is_transonic_and_on_line(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            v = rng.uniform(0.3, 3.0)
            c = sound_speed(v, G2)
            w = EndState(v, rng.uniform(0.05, 0.95) * c)
            w_star = sonic_intersection(w, G2)
            assert classify_state(w_star, G2, tol=1e-9) is FlowRegion.TRANSONIC
            assert abs(w_star.u - bl_line(w, w_star.v)) < 1e-10
            assert abs(w_star.u - sound_speed(w_star.v, G2)) < 1e-10

    def test_transonic_fixed_point(self):
        w = EndState(2.0, 1.0)  # exactly sonic for gamma=2
        w_star = sonic_intersection(w, G2)
        assert w_star.v == pytest.approx(w.v, rel=1e-12)
        assert w_star.u == pytest.approx(w.u, rel=1e-12)

    def test_rejects_nonpositive_u(self):
        with pytest.raises(DomainError):
            sonic_intersection(EndState(1.0, 0.0), G2)


class TestWaveCurves:
    def test_s2_matches_rh(self):
        u = s2_curve(W_SUB, 2.0, G2)
        w_plus, _ = rh_closure(W_SUB, 2.0, G2)
        assert u == pytest.approx(w_plus.u, abs=1e-15)

    def test_s2_continuity_at_anchor(self):
        u_close = s2_curve(W_SUB, 1.0 + 1e-10, G2)
        assert u_close == pytest.approx(W_SUB.u, abs=1e-9)

    def test_s2_entropy_along_curve(self):
        v = np.linspace(1.01, 6.0, 40)
        u = s2_curve(W_SUB, v, G2)
        assert np.all(u < W_SUB.u)

    def test_s2_domain(self):
        with pytest.raises(DomainError):
            s2_curve(W_SUB, 0.5, G2)

    def test_r1_closed_form(self):
        anchor = EndState(1.0, 1.0)
        assert r_curve(anchor, 1.0, 1, G2) == pytest.approx(1.0, abs=1e-15)
        assert r_curve(anchor, 4.0, 1, G2) == pytest.approx(1.0 + math.sqrt(2.0), abs=1e-13)

    def test_r1_increasing(self):
        v = np.linspace(1.0, 5.0, 60)
        u = r_curve(EndState(1.0, 1.0), v, 1, G2)
        assert np.all(np.diff(u) > 0)

    def test_r_curve_matches_quadrature(self):
        from scipy.integrate import quad

        rng = np.random.default_rng(31)
        for gas in (G2, GasParams(gamma=1.4, mu=1.0), G1):
            for _ in range(20):
                va = rng.uniform(0.3, 3.0)
                anchor = EndState(va, rng.uniform(-1, 1))
                vb = va * rng.uniform(1.05, 3.0)
                lam2 = lambda s: math.sqrt(gas.gamma) * s ** (-(gas.gamma + 1.0) / 2.0)
                expect1 = anchor.u + quad(lam2, va, vb)[0]
                assert r_curve(anchor, vb, 1, gas) == pytest.approx(expect1, abs=1e-8)
                vc = va * rng.uniform(0.3, 0.95)
                expect2 = anchor.u - quad(lam2, va, vc)[0]
                assert r_curve(anchor, vc, 2, gas) == pytest.approx(expect2, abs=1e-8)

    def test_r_domain_violations(self):
        anchor = EndState(1.0, 1.0)
        with pytest.raises(DomainError):
            r_curve(anchor, 0.5, 1, G2)
        with pytest.raises(DomainError):
            r_curve(anchor, 2.0, 2, G2)


class TestParams:
    def test_gas_validation(self):
        with pytest.raises(DomainError):
            GasParams(gamma=0.9, mu=1.0)
        with pytest.raises(DomainError):
            GasParams(gamma=2.0, mu=0.0)

    def test_state_validation(self):
        with pytest.raises(DomainError):
            EndState(0.0, 1.0)
