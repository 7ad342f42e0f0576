import math

import numpy as np
import pytest

from inflowshock import (
    DiagnosticsCollector,
    GasParams,
    Grid,
    antiderivative_fields,
    boundary_datum_A,
    boundary_integral_monitor,
    build_shock_profile,
    energy_series,
    phi_potential,
    phi_potential_factored,
    phi_tilde,
    run,
    sobolev_norms,
    stability_report,
)
from inflowshock.diagnostics import DIAG_COLUMNS, write_diagnostics_csv, write_report_json
from inflowshock.solver import SimState

G2 = GasParams(2.0, 1.0)


@pytest.fixture(scope="module")
def profile():
    return build_shock_profile(1.0, 0.5, 2.0, G2)


@pytest.fixture(scope="module")
def short_run(profile):
    beta = 10.0 / profile.c_minus
    grid = Grid(L=32.0, N=800)
    xi = grid.nodes()
    state = SimState(
        0.0,
        profile.v_at(xi - beta),
        profile.u_at(xi - beta),
        grid,
        G2,
        -0.5,
        profile,
        0.0,
        beta,
    )
    collector = DiagnosticsCollector(profile, 0.0, beta, -0.5)
    run(state, 1.0, snapshot_cadence=0.05, hooks=[collector])
    return collector.records


class TestPhiPotential:
    def test_zero_at_equal_arguments(self):
        assert phi_potential(1.7, 1.7, G2) == 0.0

    def test_closed_form_value(self):
        assert phi_potential(2.0, 1.0, G2) == pytest.approx(0.5, abs=1e-15)

    def test_factorized_agrees_at_example(self):
        assert phi_potential_factored(2.0, 1.0, G2) == pytest.approx(0.5, abs=1e-15)
        assert phi_tilde(2.0, G2) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("gamma", [1.4, 5.0 / 3.0, 2.0, 3.0])
    def test_randomized_nonnegativity_and_factorization(self, gamma):
        gas = GasParams(gamma, 1.0)
        rng = np.random.default_rng(101)
        v = rng.uniform(0.1, 10.0, size=2500)
        V = rng.uniform(0.1, 10.0, size=2500)
        a = phi_potential(v, V, gas)
        b = phi_potential_factored(v, V, gas)
        keep = np.abs(v - V) > 1e-3
        assert np.all(a[keep] > 0.0)
        assert np.all(np.abs(a - b) <= 1e-12 * np.maximum(1.0, a))

    def test_gamma_one_branch(self):
        g1 = GasParams(1.0, 1.0)
        v, V = 2.0, 1.0
        expect = (v - V) / V - math.log(v / V)
        assert phi_potential(v, V, g1) == pytest.approx(expect, abs=1e-15)
        assert phi_potential_factored(v, V, g1) == pytest.approx(expect, abs=1e-15)


class TestSobolevNorms:
    def test_constant(self):
        L, c = 3.0, 1.3
        f = np.full(301, c)
        out = sobolev_norms(f, L / 300)
        assert out["l2"] == pytest.approx(c * math.sqrt(L), rel=1e-12)
        assert out["l2_d1"] == pytest.approx(0.0, abs=1e-12)

    def test_sine_derivative_ratio(self):
        k = 4.0
        L = 8.0 * math.pi / k  # several periods
        x = np.linspace(0, L, 6001)
        f = np.sin(k * x)
        out = sobolev_norms(f, x[1] - x[0])
        assert out["l2_d1"] / out["l2"] == pytest.approx(k, rel=0.01)

    def test_refinement_consistency(self):
        vals = []
        for n in (2000, 4000):
            x = np.linspace(0, 2.0, n + 1)
            f = np.exp(-((x - 1.0) ** 2) * 4) * np.sin(5 * x)
            vals.append(sobolev_norms(f, x[1] - x[0])["h2"])
        assert abs(vals[1] / vals[0] - 1.0) < 0.005


class TestAntiderivatives:
    def test_exact_profile_gives_zero(self, profile):
        grid = Grid(L=30.0, N=600)
        xi = grid.nodes()
        beta = 8.0
        v = profile.v_at(xi - beta)
        u = profile.u_at(xi - beta)
        phi, psi, truncated = antiderivative_fields(v, u, xi, profile, 0.0, beta, -0.5, 0.0)
        assert np.all(phi == 0.0) and np.all(psi == 0.0)
        assert not truncated

    def test_gradient_recovers_integrand(self, profile):
        grid = Grid(L=30.0, N=3000)
        xi = grid.nodes()
        beta = 8.0
        v = profile.v_at(xi - beta) + 0.05 * np.exp(-((xi - 10) ** 2))
        u = profile.u_at(xi - beta)
        phi, _, _ = antiderivative_fields(v, u, xi, profile, 0.0, beta, -0.5, 0.0)
        w = v - profile.v_at(xi - beta)
        rec = np.gradient(phi, xi[1] - xi[0])
        assert np.max(np.abs(rec - w)[2:-2]) < 1e-4 * np.max(np.abs(w))

    def test_truncation_flag(self, profile):
        grid = Grid(L=20.0, N=200)
        xi = grid.nodes()
        v = profile.v_at(xi - 5.0) + 0.01  # offset does not decay
        u = profile.u_at(xi - 5.0)
        _, _, truncated = antiderivative_fields(v, u, xi, profile, 0.0, 5.0, -0.5, 0.0)
        assert truncated


class TestCollectorAndMonitors:
    def test_records_cover_snapshots(self, short_run):
        assert len(short_run) == 21
        assert short_run[0].t == 0.0
        assert short_run[-1].t == pytest.approx(1.0)

    def test_cumulative_integrals_start_at_zero(self, short_run):
        r0 = short_run[0]
        for key in ("cum_phi", "cum_phi_xi", "cum_psi_xi", "cum_phi_t", "cum_phi_txi", "cum_psi_txi"):
            assert getattr(r0, key) == 0.0

    def test_cumulative_integrals_nondecreasing(self, short_run):
        for key in ("cum_phi", "cum_phi_xi", "cum_psi_xi", "cum_phi_t", "cum_phi_txi", "cum_psi_txi"):
            vals = [getattr(r, key) for r in short_run]
            assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_triangle_inequality_for_phi_t(self, short_run):
        # phi_t(.,0) = s_minus phi_xi + psi_xi pointwise, so the integrals obey
        # the triangle inequality
        last = short_run[-1]
        assert last.cum_phi_t <= 0.5 * last.cum_phi_xi + last.cum_psi_xi + 1e-15

    def test_phi_trace_matches_A(self, short_run):
        # unperturbed run: |phi(t,0) - A(t)| stays at scheme-error level
        worst = max(abs(r.phi_at_0 - r.A_t) for r in short_run)
        assert worst < 5e-4

    def test_dissipation_nondecreasing(self, short_run):
        d = [r.dissipation_cum for r in short_run]
        assert all(b >= a for a, b in zip(d, d[1:]))

    def test_energy_small_for_zero_perturbation(self, short_run):
        es = energy_series(short_run, 1.0, 1.4433756729740645, short_run[0].t + 10.0 / 1.4433756729740645)
        assert es["max_E"] < 1e-5

    def test_boundary_monitor_shapes(self, short_run, profile):
        beta = 10.0 / profile.c_minus
        report = boundary_integral_monitor(short_run, profile.delta, profile.c_minus, beta)
        assert report["decay_factor"] == pytest.approx(math.exp(-10.0))
        for key in ("cum_phi", "cum_phi_xi", "cum_psi_txi"):
            assert report[key]["value"] >= 0.0
            assert report[key]["bound"] > 0.0

    def test_stability_report_zero_perturbation(self, short_run):
        rep = stability_report(short_run, G2)
        assert rep["v_min_global"] > 0.0
        assert rep["verdict"] in ("decaying", "flat")


class TestReportIO:
    def test_diagnostics_csv_layout(self, short_run, tmp_path):
        path = tmp_path / "diagnostics.csv"
        write_diagnostics_csv(short_run, path)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# diagnostics")
        assert lines[1] == ",".join(DIAG_COLUMNS)
        assert len(lines) == 2 + len(short_run)

    def test_report_json(self, short_run, tmp_path):
        import json

        rep = stability_report(short_run, G2)
        path = tmp_path / "report.json"
        write_report_json(rep, path)
        back = json.loads(path.read_text())
        assert back["verdict"] == rep["verdict"]
