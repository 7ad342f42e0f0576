import json
import math
import time

import numpy as np
import pytest

from inflowshock import (
    DegenerateShockError,
    DomainError,
    GasParams,
    InconsistentDataError,
    ProfileOptions,
    bl_line,
    build_bl_profile,
    build_shock_profile,
    decay_rates,
    evaluate_profile,
    h_function,
    profile_ode_rhs,
)

G2 = GasParams(gamma=2.0, mu=1.0)
S = math.sqrt(0.75)


@pytest.fixture(scope="module")
def standard_profile():
    return build_shock_profile(1.0, 0.5, 2.0, G2)


class TestHFunction:
    def test_vanishes_at_reference(self):
        assert h_function(1.0, 1.0, S, G2) == 0.0

    def test_vanishes_at_opposite_endpoint(self):
        # Rankine-Hugoniot makes v_plus the second root of h
        assert abs(h_function(2.0, 1.0, S, G2)) < 1e-14

    def test_interior_value(self):
        assert h_function(1.5, 1.0, S, G2) == pytest.approx(0.18055555555555564, abs=1e-15)

    def test_rhs_interior(self):
        val = profile_ode_rhs(1.5, 1.0, 2.0, S, G2)
        assert val == pytest.approx(0.3127313958110475, abs=1e-13)

    def test_rhs_vanishes_at_left_endpoint(self):
        assert profile_ode_rhs(1.0, 1.0, 2.0, S, G2) == 0.0

    def test_rhs_positive_in_interior(self):
        rng = np.random.default_rng(2)
        V = rng.uniform(1.0 + 1e-9, 2.0 - 1e-9, size=1000)
        assert np.all(profile_ode_rhs(V, 1.0, 2.0, S, G2) > 0.0)

    def test_rhs_domain(self):
        with pytest.raises(DomainError):
            profile_ode_rhs(2.5, 1.0, 2.0, S, G2)


class TestDecayRates:
    def test_standard_values(self):
        cm, cp = decay_rates(1.0, 2.0, S, G2)
        assert cm == pytest.approx(1.4433756729740645, abs=1e-14)
        assert cp == pytest.approx(1.1547005383792512, abs=1e-14)

    def test_small_strength_scaling(self):
        # c_minus ~ O(1)*delta: the ratio c_minus/delta is stable under halving
        from inflowshock import rh_closure, EndState

        ratios = []
        for delta in (1e-3, 5e-4):
            _, s = rh_closure(EndState(1.0, 0.5), 1.0 + delta, G2)
            cm, _ = decay_rates(1.0, 1.0 + delta, s, G2)
            ratios.append(cm / delta)
        assert abs(ratios[1] / ratios[0] - 1.0) < 0.05


class TestShockProfileConstruction:
    def test_anchor_and_bounds(self, standard_profile):
        p = standard_profile
        assert p.v_at(0.0) == pytest.approx(1.5, abs=1e-12)
        assert np.all(np.diff(p.V) > 0)
        assert np.all((p.V > 1.0) & (p.V < 2.0))

    def test_u_slaved_to_v(self, standard_profile):
        p = standard_profile
        U = p.U
        assert np.allclose(U, 0.5 - p.s * (p.V - 1.0), atol=1e-15)
        assert np.all((U > p.u_plus) & (U < p.u_minus))
        assert np.all(np.diff(U) < 0)

    def test_endpoints_reached(self, standard_profile):
        p = standard_profile
        tail_eps = 1e-8 * p.delta
        assert p.V[0] - p.v_minus <= tail_eps * 1.01
        assert p.v_plus - p.V[-1] <= tail_eps * 1.01

    def test_ode_residual(self, standard_profile):
        # centered 4th-order FD against the ODE right side, 10x the contract tol
        assert standard_profile.ode_residual_fd() < 10 * 1e-10

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateShockError):
            build_shock_profile(1.0, 0.5, 1.0 + 1e-13, G2)
        with pytest.raises(DomainError):
            build_shock_profile(2.0, 0.5, 1.0, G2)

    def test_tail_rates_recovered(self, standard_profile):
        cm_fit = standard_profile.tail_fit("left")
        cp_fit = standard_profile.tail_fit("right")
        assert cm_fit == pytest.approx(standard_profile.c_minus, rel=0.05)
        assert cp_fit == pytest.approx(standard_profile.c_plus, rel=0.05)

    def test_build_under_one_second(self):
        t0 = time.perf_counter()
        build_shock_profile(1.0, 0.5, 2.0, G2)
        assert time.perf_counter() - t0 < 1.0

    def test_derivative_magnitude_scales_like_delta_squared(self):
        # max |V'| = O(delta^2): ratio varies < 25% across halvings
        ratios = []
        for delta in (0.1, 0.05, 0.025):
            p = build_shock_profile(1.0, 0.5, 1.0 + delta, G2)
            dv = p.dv_at(np.linspace(p.xi_left, p.xi_right, 2001))
            ratios.append(np.max(dv) / delta**2)
        base = ratios[0]
        for r in ratios[1:]:
            assert abs(r / base - 1.0) < 0.25


class TestEvaluate:
    def test_reproduces_samples(self, standard_profile):
        p = standard_profile
        idx = np.arange(0, p.xi.size, 97)
        V, U = p.evaluate(p.xi[idx])
        assert np.allclose(V, p.V[idx], rtol=0, atol=1e-14)
        assert np.allclose(U, p.U[idx], rtol=0, atol=1e-14)

    def test_far_tail_limits(self, standard_profile):
        p = standard_profile
        V, _ = p.evaluate(p.xi_right + 100.0)
        assert abs(V - p.v_plus) < 1e-8 * p.delta
        V, _ = p.evaluate(p.xi_left - 100.0)
        assert abs(V - p.v_minus) < 1e-8 * p.delta

    def test_always_inside_open_interval(self, standard_profile):
        p = standard_profile
        xi = np.linspace(p.xi_left - 50, p.xi_right + 50, 4001)
        V, _ = evaluate_profile(p, xi)
        assert np.all((V > p.v_minus) & (V < p.v_plus))

    def test_tail_continuity_at_truncation(self, standard_profile):
        p = standard_profile
        for x in (p.xi_left, p.xi_right):
            below = p.v_at(x - 1e-9)
            above = p.v_at(x + 1e-9)
            assert abs(above - below) < 1e-8

    def test_shift_covariance(self):
        # anchoring at a different volume equals a translation of the profile
        pa = build_shock_profile(1.0, 0.5, 2.0, G2)
        pb = build_shock_profile(1.0, 0.5, 2.0, G2, ProfileOptions(v_at_zero=1.25))
        # find Delta with V_a(Delta) = 1.25, then V_b(xi) = V_a(xi + Delta)
        from scipy.optimize import brentq

        delta_shift = brentq(lambda x: pa.v_at(x) - 1.25, pa.xi_left, pa.xi_right, xtol=1e-14)
        xi = np.linspace(-4.0, 4.0, 801)
        assert np.allclose(pb.v_at(xi), pa.v_at(xi + delta_shift), atol=1e-8)


class TestIntegralHelpers:
    def test_integral_below_matches_quadrature(self, standard_profile):
        p = standard_profile
        from scipy.integrate import quad

        for x in (-6.0, -1.0, 0.0, 2.0, p.xi_right + 3.0):
            direct = quad(lambda y: p.v_at(y) - p.v_minus, -60.0, x, limit=400)[0]
            assert p.integral_below(x) == pytest.approx(direct, rel=1e-6, abs=1e-9)

    def test_integral_below_monotone(self, standard_profile):
        x = np.linspace(-20, 20, 101)
        m = standard_profile.integral_below(x)
        assert np.all(np.diff(m) > 0)


class TestCSVExport:
    def test_roundtrip_header(self, standard_profile, tmp_path):
        path = tmp_path / "profile.csv"
        standard_profile.to_csv(path)
        lines = path.read_text().splitlines()
        meta = json.loads(lines[0][2:])
        assert meta["s"] == pytest.approx(S)
        assert meta["c_minus"] == pytest.approx(1.4433756729740645)
        assert lines[1] == "xi,V,U"
        row = [float(x) for x in lines[2].split(",")]
        assert row[1] == pytest.approx(standard_profile.V[0])


class TestBLProfile:
    def test_expanding_branch_monotone(self):
        bl = build_bl_profile(1.0, 0.5, 1.5, G2)
        assert bl.V[0] == 1.0
        assert np.all(np.diff(bl.V) > 0)
        assert abs(bl.V[-1] - 1.5) <= 1e-8 * 0.5 * 1.01
        assert np.allclose(bl.U, -bl.s_minus * bl.V, atol=1e-15)

    def test_u_plus_implied_by_line(self):
        w_minus_u = 0.5
        assert bl_line(type("W", (), {"v": 1.0, "u": w_minus_u})(), 1.5) == pytest.approx(0.75)
        bl = build_bl_profile(1.0, 0.5, 1.5, G2, u_plus=0.75)
        assert -bl.s_minus * 1.5 == pytest.approx(0.75)

    def test_constant_profile(self):
        bl = build_bl_profile(1.0, 0.5, 1.0, G2)
        assert np.all(bl.V == 1.0)

    def test_compressing_branch(self):
        bl = build_bl_profile(1.0, 0.5, 0.6, G2)
        assert np.all(np.diff(bl.V) < 0)
        assert abs(bl.V[-1] - 0.6) < 1e-8 * 0.4 * 1.01

    def test_beyond_sonic_rejected(self):
        # v* = 2 for (1, 0.5); the expanding branch stops there
        with pytest.raises(InconsistentDataError):
            build_bl_profile(1.0, 0.5, 2.2, G2)

    def test_off_line_u_plus_rejected(self):
        with pytest.raises(InconsistentDataError):
            build_bl_profile(1.0, 0.5, 1.5, G2, u_plus=0.9)

    def test_supersonic_boundary_rejected(self):
        with pytest.raises(DomainError):
            build_bl_profile(1.0, 2.0, 1.5, G2)
