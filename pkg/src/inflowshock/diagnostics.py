"""Per-snapshot diagnostics tracking every quantity the stability analysis uses.

The deviation from the shifted profile is measured through the
antiderivative pair

    phi(t, xi) = -int_xi^inf (v - V(. - (s-s_minus) t + sigma - beta)),
    psi(t, xi) = -int_xi^inf (u - U(...)),

the convex pressure potential

    Phi(v, V) = p(V)(v - V) - int_V^v p(eta) d eta  >= 0,

discrete Sobolev norms, the six cumulative boundary-trace integrals, the
energy ||(phi, psi, sqrt(Phi), psi_xi)||^2 with its dissipation integral,
and the density extrema against the theta-power bound templates.

Time-derivative boundary traces are evaluated from the governing equations
(phi_t = s_minus phi_xi + psi_xi at the boundary, and the profile-slope
formulas for the mixed traces), never by differencing snapshots.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields as dc_fields

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import DomainError
from .gas import GasParams, pressure
from .perturbation import boundary_datum_A
from .profiles import ShockProfile
from .solver import SimState, Trajectory

__all__ = [
    "DiagnosticsRecord",
    "DiagnosticsCollector",
    "antiderivative_fields",
    "phi_potential",
    "phi_tilde",
    "phi_potential_factored",
    "sobolev_norms",
    "boundary_integral_monitor",
    "energy_series",
    "stability_report",
    "write_diagnostics_csv",
    "write_report_json",
]


def phi_potential(v, V, gas: GasParams):
    """Phi(v, V) = p(V)(v - V) + (v**(1-g) - V**(1-g))/(g-1) for g > 1.

    Nonnegative by convexity of p, vanishing exactly at v = V.  The g = 1
    limit replaces the power term by -log(v/V).
    """
    v = np.asarray(v, dtype=float)
    V = np.asarray(V, dtype=float)
    if np.any(v <= 0.0) or np.any(V <= 0.0):
        raise DomainError("phi_potential requires positive volumes")
    g = gas.gamma
    if g == 1.0:
        out = (v - V) / V - np.log(v / V)
    else:
        out = pressure(V, gas) * (v - V) + (np.power(v, 1.0 - g) - np.power(V, 1.0 - g)) / (g - 1.0)
    return float(out) if out.ndim == 0 else out


def phi_tilde(vt, gas: GasParams):
    """Phi on the volume ratio: Phi_tilde(vt) = vt - 1 + (vt**(1-g) - 1)/(g-1)."""
    vt = np.asarray(vt, dtype=float)
    if np.any(vt <= 0.0):
        raise DomainError("phi_tilde requires a positive volume ratio")
    g = gas.gamma
    if g == 1.0:
        out = vt - 1.0 - np.log(vt)
    else:
        out = vt - 1.0 + (np.power(vt, 1.0 - g) - 1.0) / (g - 1.0)
    return float(out) if out.ndim == 0 else out


def phi_potential_factored(v, V, gas: GasParams):
    """Factorized form Phi(v, V) = V**(1-gamma) * Phi_tilde(v/V)."""
    V = np.asarray(V, dtype=float)
    return np.power(V, 1.0 - gas.gamma) * phi_tilde(np.asarray(v, dtype=float) / V, gas)


def antiderivative_fields(
    v,
    u,
    xi,
    profile: ShockProfile,
    sigma: float,
    beta: float,
    s_minus: float,
    t: float,
    trunc_tol: float = 1e-6,
):
    """(phi, psi, truncated) by right-to-left cumulative quadrature.

    The far-field closure follows the same shifted profile, so the tail
    integrand beyond the right truncation vanishes identically; a residual
    above trunc_tol (relative to delta) raises the truncation flag instead
    of silently corrupting the antiderivatives.
    """
    xi = np.asarray(xi, dtype=float)
    arg = xi - (profile.s - s_minus) * t + sigma - beta
    w = np.asarray(v, dtype=float) - profile.v_at(arg)
    z = np.asarray(u, dtype=float) - profile.u_at(arg)
    cw = cumulative_trapezoid(w, xi, initial=0.0)
    cz = cumulative_trapezoid(z, xi, initial=0.0)
    phi = cw - cw[-1]
    psi = cz - cz[-1]
    truncated = bool(max(abs(w[-1]), abs(z[-1])) > trunc_tol * max(1.0, profile.delta))
    return phi, psi, truncated


def sobolev_norms(f, dxi: float, order: int = 2) -> dict:
    """Discrete L2/H1/H2 norms: trapezoid in space, centered differences.

    One-sided differences at the ends, matching numpy.gradient.
    """
    f = np.asarray(f, dtype=float)
    out = {"l2": float(np.sqrt(np.trapezoid(f * f, dx=dxi)))}
    if order >= 1:
        d1 = np.gradient(f, dxi)
        out["l2_d1"] = float(np.sqrt(np.trapezoid(d1 * d1, dx=dxi)))
        out["h1"] = math.hypot(out["l2"], out["l2_d1"])
    if order >= 2:
        d2 = np.gradient(np.gradient(f, dxi), dxi)
        out["l2_d2"] = float(np.sqrt(np.trapezoid(d2 * d2, dx=dxi)))
        out["h2"] = math.sqrt(out["l2"] ** 2 + out["l2_d1"] ** 2 + out["l2_d2"] ** 2)
    return out


def _l2(f, dxi):
    f = np.asarray(f, dtype=float)
    return float(np.sqrt(np.trapezoid(f * f, dx=dxi)))


@dataclass
class DiagnosticsRecord:
    t: float
    sup_norm: float
    l2_phi: float
    l2_psi: float
    l2_phi_xi: float
    l2_psi_xi: float
    l2_psi_xixi: float
    sqrt_phi_potential: float
    v_min: float
    v_max: float
    sup_dev: float
    phi_at_0: float
    A_t: float
    b_phi: float
    b_phi_xi: float
    b_psi_xi: float
    b_phi_t: float
    b_phi_txi: float
    b_psi_txi: float
    cum_phi: float
    cum_phi_xi: float
    cum_psi_xi: float
    cum_phi_t: float
    cum_phi_txi: float
    cum_psi_txi: float
    energy_E: float
    dissipation_inst: float
    dissipation_cum: float
    truncated: bool


DIAG_COLUMNS = [f.name for f in dc_fields(DiagnosticsRecord)]


class DiagnosticsCollector:
    """Per-snapshot record computation, usable directly as a run() hook.

    Cumulative time integrals are accumulated by the trapezoid rule over
    the snapshot cadence, so the snapshot stream must be dense enough for
    the quantities being integrated.
    """

    def __init__(self, profile: ShockProfile, sigma: float, beta: float, s_minus: float,
                 trunc_tol: float = 1e-6):
        self.profile = profile
        self.sigma = sigma
        self.beta = beta
        self.s_minus = s_minus
        self.trunc_tol = trunc_tol
        self.records: list[DiagnosticsRecord] = []

    def _boundary_traces(self, t: float, phi0: float):
        pr = self.profile
        a = pr.s - self.s_minus
        y = -a * t + self.sigma - self.beta
        Vb, Ub = pr.evaluate(y)
        phi_xi = pr.v_minus - Vb
        psi_xi = pr.u_minus - Ub
        phi_t = self.s_minus * phi_xi + psi_xi
        dV = float(pr.dv_at(y))
        return {
            "b_phi": abs(phi0),
            "b_phi_xi": abs(phi_xi),
            "b_psi_xi": abs(psi_xi),
            "b_phi_t": abs(phi_t),
            "b_phi_txi": abs(a * dV),
            "b_psi_txi": abs(a * pr.s * dV),
        }

    def __call__(self, state: SimState) -> DiagnosticsRecord:
        pr = self.profile
        xi = state.xi
        dxi = state.grid.dxi
        phi, psi, truncated = antiderivative_fields(
            state.v, state.u, xi, pr, self.sigma, self.beta, self.s_minus, state.t, self.trunc_tol
        )
        arg = state.shift_arg()
        w = state.v - pr.v_at(arg)   # = phi_xi
        z = state.u - pr.u_at(arg)   # = psi_xi
        dz = np.gradient(z, dxi)     # = psi_xixi
        Phi = phi_potential(state.v, np.clip(pr.v_at(arg), 1e-300, None), state.gas)
        int_phi_pot = max(float(np.trapezoid(Phi, dx=dxi)), 0.0)

        l2_phi = _l2(phi, dxi)
        l2_psi = _l2(psi, dxi)
        l2_z = _l2(z, dxi)
        energy = l2_phi**2 + l2_psi**2 + int_phi_pot + l2_z**2
        diss_inst = float(np.trapezoid(z * z + dz * dz / state.v, dx=dxi))
        traces = self._boundary_traces(state.t, phi[0])

        prev = self.records[-1] if self.records else None
        cums = {}
        for key in ("phi", "phi_xi", "psi_xi", "phi_t", "phi_txi", "psi_txi"):
            b = traces[f"b_{key}"]
            if prev is None:
                cums[f"cum_{key}"] = 0.0
            else:
                dt = state.t - prev.t
                cums[f"cum_{key}"] = getattr(prev, f"cum_{key}") + 0.5 * dt * (
                    getattr(prev, f"b_{key}") + b
                )
        diss_cum = 0.0
        if prev is not None:
            diss_cum = prev.dissipation_cum + 0.5 * (state.t - prev.t) * (
                prev.dissipation_inst + diss_inst
            )

        rec = DiagnosticsRecord(
            t=state.t,
            sup_norm=float(np.max(np.hypot(phi, psi))),
            l2_phi=l2_phi,
            l2_psi=l2_psi,
            l2_phi_xi=_l2(w, dxi),
            l2_psi_xi=l2_z,
            l2_psi_xixi=_l2(dz, dxi),
            sqrt_phi_potential=math.sqrt(int_phi_pot),
            v_min=float(np.min(state.v)),
            v_max=float(np.max(state.v)),
            sup_dev=float(np.max(np.hypot(w, z))),
            phi_at_0=float(phi[0]),
            A_t=boundary_datum_A(state.t, pr, self.sigma, self.beta, self.s_minus),
            **traces,
            **cums,
            energy_E=energy,
            dissipation_inst=diss_inst,
            dissipation_cum=diss_cum,
            truncated=truncated,
        )
        self.records.append(rec)
        return rec

    def collect(self, traj: Trajectory) -> list[DiagnosticsRecord]:
        """Compute records for an already-run trajectory."""
        for k in range(len(traj)):
            self(traj.state_at(k))
        return self.records


#: bound-shape exponent table for the six boundary integrals: each bound is
#: constant * delta**power * exp(-c_minus * beta)
BOUNDARY_BOUND_POWERS = {
    "cum_phi": -1.0,
    "cum_phi_xi": 0.0,
    "cum_psi_xi": 0.0,
    "cum_phi_t": 0.0,
    "cum_phi_txi": 1.0,
    "cum_psi_txi": 1.0,
}


def boundary_integral_monitor(
    records: list[DiagnosticsRecord],
    delta: float,
    c_minus: float,
    beta: float,
    constant: float = 1.0,
) -> dict:
    """Saturated boundary integrals and their ratios to the bound shapes."""
    if not records:
        raise DomainError("no records to monitor")
    last = records[-1]
    decay = math.exp(-c_minus * beta)
    report = {"t_final": last.t, "beta": beta, "c_minus": c_minus, "decay_factor": decay}
    for key, power in BOUNDARY_BOUND_POWERS.items():
        value = getattr(last, key)
        bound = constant * delta**power * decay
        report[key] = {"value": value, "bound": bound, "ratio": value / bound if bound > 0 else math.inf}
    return report


def energy_series(records: list[DiagnosticsRecord], delta: float, c_minus: float, beta: float) -> dict:
    """E(t), cumulative dissipation, and the empirical boundedness constant."""
    t = np.array([r.t for r in records])
    E = np.array([r.energy_E for r in records])
    D = np.array([r.dissipation_cum for r in records])
    denom = E[0] + math.exp(-c_minus * beta) / delta
    return {
        "t": t,
        "E": E,
        "dissipation": D,
        "max_E": float(np.max(E)),
        "denominator": denom,
        "e_ratio": float(np.max(E) / denom),
    }


def stability_report(
    records: list[DiagnosticsRecord],
    gas: GasParams,
    exponents=None,
    tol_slope: float = 1e-3,
    transient_frac: float = 0.1,
    transient_time: float | None = None,
) -> dict:
    """Density bounds and sup-norm decay verdict over a completed run.

    Fits the smallest constant C2 putting the global volume extrema inside
    the theta-power templates (when exponents are available), and fits the
    log of sup_dev over the last half of the run; the verdict is
    ``decaying`` when the slope is below -tol_slope, ``growing`` when above
    +tol_slope, ``flat`` otherwise.
    """
    t = np.array([r.t for r in records])
    sup_dev = np.array([r.sup_dev for r in records])
    v_min = float(np.min([r.v_min for r in records]))
    v_max = float(np.max([r.v_max for r in records]))

    report = {
        "t_final": float(t[-1]),
        "v_min_global": v_min,
        "v_max_global": v_max,
        "truncation_flagged": bool(any(r.truncated for r in records)),
    }
    if exponents is not None:
        theta = exponents.theta_for(gas)
        lower_tpl = exponents.delta ** (2.0 * theta / (gas.gamma - 1.0))
        upper_tpl = exponents.delta ** (-2.0 * theta)
        c2 = max(v_max / upper_tpl, lower_tpl / v_min)
        report.update(
            theta=theta,
            bound_lower_template=lower_tpl,
            bound_upper_template=upper_tpl,
            C2_fit=float(c2),
            bounds_hold_with_C2=bool(v_min >= lower_tpl / c2 - 1e-300 and v_max <= c2 * upper_tpl + 1e-300),
        )

    # decay trend of sup_dev: post-transient peak and log-slope on the tail
    if len(t) >= 4 and t[-1] > t[0]:
        if transient_time is not None:
            t_transient = t[0] + transient_time
        else:
            t_transient = t[0] + transient_frac * (t[-1] - t[0])
        post = t >= t_transient
        peak = float(np.max(sup_dev[post]))
        final = float(sup_dev[-1])
        half = t >= t[0] + 0.5 * (t[-1] - t[0])
        y = np.log(np.maximum(sup_dev[half], 1e-300))
        slope = float(np.polyfit(t[half], y, 1)[0])
        if slope < -tol_slope:
            verdict = "decaying"
        elif slope > tol_slope:
            verdict = "growing"
        else:
            verdict = "flat"
        report.update(
            sup_dev_initial=float(sup_dev[0]),
            sup_dev_peak_post_transient=peak,
            sup_dev_final=final,
            reduction_factor=peak / final if final > 0 else math.inf,
            log_slope=slope,
            verdict=verdict,
        )
    else:
        report.update(verdict="too-short")
    return report


def write_diagnostics_csv(records: list[DiagnosticsRecord], path):
    """One row per snapshot, fixed column order, documented header comment."""
    with open(path, "w") as f:
        f.write("# diagnostics: one row per snapshot; columns: " + ",".join(DIAG_COLUMNS) + "\n")
        f.write(",".join(DIAG_COLUMNS) + "\n")
        for r in records:
            vals = []
            for name in DIAG_COLUMNS:
                x = getattr(r, name)
                vals.append(str(int(x)) if isinstance(x, bool) else f"{x:.17g}")
            f.write(",".join(vals) + "\n")


def write_report_json(report: dict, path):
    def _default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (np.floating, np.integer)):
            return o.item()
        raise TypeError(f"not JSON serializable: {type(o)}")

    with open(path, "w") as f:
        json.dump(report, f, indent=2, sort_keys=True, default=_default)
        f.write("\n")
