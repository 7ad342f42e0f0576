"""Viscous shock wave and boundary-layer profiles.

A 2-shock profile (V(xi), U(xi)) connecting 0 < v_minus < v_plus solves the
autonomous ODE

    s*mu/V * dV/dxi = h(V),   h(V) = -s**2 (V - v_ref) - (p(V) - p(v_ref)),

with U = u_minus - s (V - v_minus).  Both endpoints are hyperbolic fixed
points, so direct integration stalls there; profiles are integrated
adaptively from a midpoint anchor in both directions and matched to the
linearized exponential tails (rates c_minus, c_plus) beyond truncation.

The boundary-layer profile attached to the inflow boundary solves

    mu dV/dxi = (V / s_minus) * h_bl(V),  h_bl(V) = -s_minus**2 (V - v_plus)
                                                   - (p(V) - p(v_plus)),
    V(0) = v_minus,  V(+inf) = v_plus,    U = -s_minus V.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, solve_ivp
from scipy.interpolate import PchipInterpolator

from .errors import (
    DegenerateShockError,
    DomainError,
    InconsistentDataError,
    IntegrationError,
)
from .gas import (
    EndState,
    FlowRegion,
    GasParams,
    classify_state,
    dpressure,
    pressure,
    rh_closure,
    sonic_intersection,
)

__all__ = [
    "ProfileOptions",
    "ShockProfile",
    "BLProfile",
    "h_function",
    "profile_ode_rhs",
    "decay_rates",
    "build_shock_profile",
    "build_bl_profile",
    "evaluate_profile",
]

#: strengths below this are rejected; downstream formulas divide by delta
MIN_STRENGTH = 1e-12


@dataclass(frozen=True)
class ProfileOptions:
    """Tolerances and sampling controls for profile construction.

    ode_tol is the contract tolerance on the pointwise ODE residual at the
    samples; the integrator itself runs tighter so that finite-difference
    residual checks are not noise-limited.  tail_tol is relative to the
    strength delta: integration stops once |V - v_pm| < tail_tol*delta and
    the exponential tail model takes over.
    """

    ode_tol: float = 1e-10
    tail_tol: float = 1e-8
    v_at_zero: float | None = None
    sample_spacing: float | None = None
    max_samples: int = 200_000


def h_function(V, v_ref: float, s: float, gas: GasParams):
    """h(V) = -s**2 (V - v_ref) - (p(V) - p(v_ref)).

    Vanishes at V = v_ref and, when (v_minus, v_plus, s) satisfy the jump
    relations, at the opposite endpoint as well.
    """
    if np.any(np.asarray(V) <= 0.0) or v_ref <= 0.0:
        raise DomainError("h_function requires positive volumes")
    return -s * s * (np.asarray(V, dtype=float) - v_ref) - (pressure(V, gas) - pressure(v_ref, gas))


def profile_ode_rhs(V, v_minus: float, v_plus: float, s: float, gas: GasParams):
    """dV/dxi = V*h(V) / (s*mu), strictly positive on (v_minus, v_plus)."""
    varr = np.asarray(V, dtype=float)
    if np.any(varr < v_minus) or np.any(varr > v_plus):
        raise DomainError("profile ODE evaluated outside [v_minus, v_plus]")
    out = varr * h_function(varr, v_minus, s, gas) / (s * gas.mu)
    return float(out) if np.ndim(V) == 0 else out


def decay_rates(v_minus: float, v_plus: float, s: float, gas: GasParams):
    """Exponential tail rates c_pm = v_pm |p'(v_pm) + s**2| / (s*mu)."""
    c_minus = v_minus * abs(float(dpressure(v_minus, gas)) + s * s) / (s * gas.mu)
    c_plus = v_plus * abs(float(dpressure(v_plus, gas)) + s * s) / (s * gas.mu)
    return c_minus, c_plus


def _fd4_derivative(y: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order centered first derivative on the interior of a uniform grid."""
    return (y[:-4] - 8.0 * y[1:-3] + 8.0 * y[3:-1] - y[4:]) / (12.0 * h)


@dataclass
class ShockProfile:
    """A sampled 2-viscous-shock profile with exponential tail models.

    Samples are strictly increasing in xi and in V; U is slaved to V through
    the first jump relation.  Outside [xi_left, xi_right] evaluation switches
    to v_pm -/+ A_pm*exp(-c_pm|xi|) matched continuously at the truncation
    abscissae.
    """

    v_minus: float
    u_minus: float
    v_plus: float
    u_plus: float
    s: float
    delta: float
    gas: GasParams
    c_minus: float
    c_plus: float
    xi: np.ndarray
    V: np.ndarray
    xi_left: float
    xi_right: float
    normalization: float
    n_anchor: int = 0
    _interp: PchipInterpolator = field(repr=False, default=None)
    _cum: PchipInterpolator = field(repr=False, default=None)

    def __post_init__(self):
        if self._interp is None:
            self._interp = PchipInterpolator(self.xi, self.V, extrapolate=False)
        # left/right tail amplitudes matched at the truncation points
        self.A_minus = (self.V[0] - self.v_minus) * math.exp(-self.c_minus * self.xi_left)
        self.A_plus = (self.v_plus - self.V[-1]) * math.exp(self.c_plus * self.xi_right)
        if self._cum is None:
            cum = cumulative_simpson(self.V - self.v_minus, x=self.xi, initial=0.0)
            self._cum = PchipInterpolator(self.xi, cum, extrapolate=False)

    @property
    def U(self) -> np.ndarray:
        return self.u_minus - self.s * (self.V - self.v_minus)

    def v_at(self, xi):
        xi = np.asarray(xi, dtype=float)
        scalar = xi.ndim == 0
        xi = np.atleast_1d(xi)
        out = np.empty_like(xi)
        left = xi < self.xi_left
        right = xi > self.xi_right
        mid = ~(left | right)
        out[left] = self.v_minus + self.A_minus * np.exp(self.c_minus * xi[left])
        out[right] = self.v_plus - self.A_plus * np.exp(-self.c_plus * xi[right])
        out[mid] = self._interp(xi[mid])
        # keep the open-interval contract even where the tails underflow
        np.clip(out, np.nextafter(self.v_minus, np.inf), np.nextafter(self.v_plus, -np.inf), out=out)
        return float(out[0]) if scalar else out

    def u_at(self, xi):
        return self.u_minus - self.s * (self.v_at(xi) - self.v_minus)

    def dv_at(self, xi):
        """dV/dxi from the ODE itself (exact given V, continuous across tails)."""
        V = np.clip(self.v_at(xi), self.v_minus, self.v_plus)
        return V * h_function(V, self.v_minus, self.s, self.gas) / (self.s * self.gas.mu)

    def du_at(self, xi):
        return -self.s * self.dv_at(xi)

    def evaluate(self, xi):
        """Return (V, U) at arbitrary xi."""
        V = self.v_at(xi)
        return V, self.u_minus - self.s * (V - self.v_minus)

    def integral_below(self, x):
        """M(x) = int_{-inf}^{x} (V(y) - v_minus) dy, tails handled analytically."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.empty_like(x)
        m_left_edge = (self.A_minus / self.c_minus) * math.exp(self.c_minus * self.xi_left)
        cum_right_edge = float(self._cum(self.xi_right))
        left = x <= self.xi_left
        right = x >= self.xi_right
        mid = ~(left | right)
        out[left] = (self.A_minus / self.c_minus) * np.exp(self.c_minus * x[left])
        out[mid] = m_left_edge + self._cum(x[mid])
        out[right] = (
            m_left_edge
            + cum_right_edge
            + self.delta * (x[right] - self.xi_right)
            - (self.A_plus / self.c_plus)
            * (math.exp(-self.c_plus * self.xi_right) - np.exp(-self.c_plus * x[right]))
        )
        return float(out[0]) if scalar else out

    def ode_residual_fd(self) -> float:
        """Max |s*mu*V' - V*h(V)| at interior samples, V' by 4th-order centered FD.

        The grid is uniform on each side of the anchor, so the difference is
        taken segment by segment.
        """
        worst = 0.0
        segments = ((self.xi[: self.n_anchor + 1], self.V[: self.n_anchor + 1]),
                    (self.xi[self.n_anchor :], self.V[self.n_anchor :]))
        for xs, vs in segments:
            if xs.size < 5:
                continue
            dv = _fd4_derivative(vs, xs[1] - xs[0])
            vi = vs[2:-2]
            rhs = vi * h_function(vi, self.v_minus, self.s, self.gas)
            worst = max(worst, float(np.max(np.abs(self.s * self.gas.mu * dv - rhs))))
        return worst

    def tail_fit(self, side: str, lo: float = 1e-6, hi: float = 1e-3):
        """Log-linear fit of the tail decay rate.

        Fits ln|V - v_pm| against xi over the window where the residual
        distance to the endpoint lies in [lo, hi] relative to delta, and
        returns the fitted positive rate.
        """
        if side == "right":
            resid = self.v_plus - self.V
        elif side == "left":
            resid = self.V - self.v_minus
        else:
            raise DomainError("side must be 'left' or 'right'")
        mask = (resid > lo * self.delta) & (resid < hi * self.delta)
        if np.count_nonzero(mask) < 8:
            raise IntegrationError("tail window too short for a rate fit")
        coef = np.polyfit(self.xi[mask], np.log(resid[mask]), 1)
        return abs(float(coef[0]))

    def to_csv(self, path):
        """Write samples as CSV (xi,V,U) with a JSON metadata header line."""
        meta = {
            "v_minus": self.v_minus,
            "u_minus": self.u_minus,
            "v_plus": self.v_plus,
            "u_plus": self.u_plus,
            "s": self.s,
            "delta": self.delta,
            "gamma": self.gas.gamma,
            "mu": self.gas.mu,
            "c_minus": self.c_minus,
            "c_plus": self.c_plus,
            "xi_left": self.xi_left,
            "xi_right": self.xi_right,
            "normalization": self.normalization,
        }
        U = self.U
        with open(path, "w") as f:
            f.write("# " + json.dumps(meta, sort_keys=True) + "\n")
            f.write("xi,V,U\n")
            for x, v, u in zip(self.xi, self.V, U):
                f.write(f"{x:.17g},{v:.17g},{u:.17g}\n")


def evaluate_profile(profile: ShockProfile, xi):
    """Functional alias for ShockProfile.evaluate."""
    return profile.evaluate(xi)


def _integrate_to_endpoint(rhs, v0, target, tail_eps, rate, direction, rtol, atol):
    """Integrate dV/dxi = rhs(V) from V(0)=v0 until |V-target| < tail_eps.

    direction=+1 integrates to the right, -1 to the left (via reversal).
    Returns (xi_array, V_array) on the solver's adaptive points, xi signed.
    """
    gap0 = abs(target - v0)
    span = (math.log(gap0 / tail_eps) + 10.0) / rate * 3.0

    def f(_, y):
        return direction * rhs(y[0])

    def event(_, y):
        return abs(target - y[0]) - tail_eps

    event.terminal = True
    event.direction = -1
    sol = solve_ivp(
        f,
        (0.0, span),
        [v0],
        method="DOP853",
        rtol=rtol,
        atol=atol,
        events=event,
        dense_output=True,
    )
    if not sol.success or sol.t_events[0].size == 0:
        raise IntegrationError(
            f"profile integration did not reach the endpoint within span {span:.3g} "
            f"(last gap {abs(target - sol.y[0, -1]):.3e}, target gap {tail_eps:.3e})"
        )
    return sol, float(sol.t_events[0][0])


def build_shock_profile(
    v_minus: float,
    u_minus: float,
    v_plus: float,
    gas: GasParams,
    opts: ProfileOptions | None = None,
) -> ShockProfile:
    """Construct the unique (up to shift) 2-shock profile from v_minus to v_plus.

    The translation is fixed by the anchor V(0) = (v_minus + v_plus)/2
    (overridable through opts.v_at_zero).  Integration uses an adaptive
    embedded Runge-Kutta pair from the anchor in both directions, stopping
    at |V - v_pm| < tail_tol*delta; beyond that the exponential tails with
    rates c_pm apply.
    """
    opts = opts or ProfileOptions()
    if not 0.0 < v_minus < v_plus:
        raise DomainError(f"need 0 < v_minus < v_plus, got ({v_minus}, {v_plus})")
    delta = v_plus - v_minus
    if delta < MIN_STRENGTH:
        raise DegenerateShockError(f"shock strength {delta:.3e} below minimum {MIN_STRENGTH:.0e}")
    w_plus, s = rh_closure(EndState(v_minus, u_minus), v_plus, gas)
    c_minus, c_plus = decay_rates(v_minus, v_plus, s, gas)

    anchor = opts.v_at_zero if opts.v_at_zero is not None else 0.5 * (v_minus + v_plus)
    if not v_minus < anchor < v_plus:
        raise DomainError("normalization anchor must lie strictly inside (v_minus, v_plus)")

    def rhs(V):
        return V * float(h_function(V, v_minus, s, gas)) / (s * gas.mu)

    tail_eps = opts.tail_tol * delta
    rtol = min(1e-12, opts.ode_tol / 100.0)
    atol = tail_eps * 1e-4
    sol_r, xi_right = _integrate_to_endpoint(rhs, anchor, v_plus, tail_eps, c_plus, +1.0, rtol, atol)
    sol_l, xi_left_pos = _integrate_to_endpoint(rhs, anchor, v_minus, tail_eps, c_minus, -1.0, rtol, atol)
    xi_left = -xi_left_pos

    cmax = max(c_minus, c_plus)
    if opts.sample_spacing is not None:
        h_s = opts.sample_spacing
    else:
        h_s = 1.0 / (100.0 * cmax)
        h_s = max(h_s, (xi_right - xi_left) / opts.max_samples)
    # the anchor xi = 0 must be a knot so the normalization is exact
    n_l = max(200, int(math.ceil(-xi_left / h_s)))
    n_r = max(200, int(math.ceil(xi_right / h_s)))
    xi = np.concatenate([np.linspace(xi_left, 0.0, n_l + 1)[:-1], np.linspace(0.0, xi_right, n_r + 1)])
    V = np.empty_like(xi)
    left_mask = xi < 0.0
    V[left_mask] = sol_l.sol(-xi[left_mask])[0]
    V[~left_mask] = sol_r.sol(xi[~left_mask])[0]
    # event/anchor abscissae evaluated exactly
    V[0] = sol_l.sol(xi_left_pos)[0]
    V[n_l] = anchor
    V[-1] = sol_r.sol(xi_right)[0]

    if np.any(np.diff(V) <= 0.0):
        raise IntegrationError("integrated shock profile is not strictly increasing")
    if V[0] <= v_minus or V[-1] >= v_plus:
        raise IntegrationError("integrated shock profile left (v_minus, v_plus)")

    return ShockProfile(
        v_minus=v_minus,
        u_minus=u_minus,
        v_plus=v_plus,
        u_plus=w_plus.u,
        s=s,
        delta=delta,
        gas=gas,
        c_minus=c_minus,
        c_plus=c_plus,
        xi=xi,
        V=V,
        xi_left=xi_left,
        xi_right=xi_right,
        normalization=anchor,
        n_anchor=n_l,
    )


@dataclass
class BLProfile:
    """A boundary-layer profile: V_BL(0) = v_minus exactly, V_BL -> v_plus.

    U_BL = -s_minus * V_BL pointwise.  The expanding branch (v_plus > v_minus,
    admissible up to the sonic volume) increases monotonically; the
    compressing branch decreases.
    """

    v_minus: float
    u_minus: float
    v_plus: float
    s_minus: float
    gas: GasParams
    xi: np.ndarray
    V: np.ndarray
    xi_right: float
    rate: float
    _interp: PchipInterpolator = field(repr=False, default=None)

    def __post_init__(self):
        if self._interp is None:
            self._interp = PchipInterpolator(self.xi, self.V, extrapolate=False)
        self.A = self.V[-1] - self.v_plus  # signed tail amplitude at xi_right

    @property
    def U(self) -> np.ndarray:
        return -self.s_minus * self.V

    def v_at(self, xi):
        xi = np.asarray(xi, dtype=float)
        scalar = xi.ndim == 0
        xi = np.atleast_1d(xi)
        if np.any(xi < 0.0):
            raise DomainError("BL profile is defined on xi >= 0")
        out = np.empty_like(xi)
        right = xi > self.xi_right
        out[right] = self.v_plus + self.A * np.exp(-self.rate * (xi[right] - self.xi_right))
        out[~right] = self._interp(xi[~right])
        return float(out[0]) if scalar else out

    def evaluate(self, xi):
        V = self.v_at(xi)
        return V, -self.s_minus * V

    def to_csv(self, path):
        meta = {
            "v_minus": self.v_minus,
            "u_minus": self.u_minus,
            "v_plus": self.v_plus,
            "s_minus": self.s_minus,
            "gamma": self.gas.gamma,
            "mu": self.gas.mu,
            "xi_right": self.xi_right,
            "rate": self.rate,
        }
        with open(path, "w") as f:
            f.write("# " + json.dumps(meta, sort_keys=True) + "\n")
            f.write("xi,V,U\n")
            for x, v, u in zip(self.xi, self.V, self.U):
                f.write(f"{x:.17g},{v:.17g},{u:.17g}\n")


def build_bl_profile(
    v_minus: float,
    u_minus: float,
    v_plus: float,
    gas: GasParams,
    opts: ProfileOptions | None = None,
    u_plus: float | None = None,
) -> BLProfile:
    """Construct the boundary-layer profile from (v_minus, u_minus) to v_plus.

    The branch is selected from sign(v_plus - v_minus): expanding profiles
    must stop at or before the sonic volume v*; compressing profiles accept
    any 0 < v_plus < v_minus.  If u_plus is supplied it must sit on the BL
    line within tolerance.
    """
    opts = opts or ProfileOptions()
    w_minus = EndState(v_minus, u_minus)
    if classify_state(w_minus, gas) is not FlowRegion.SUBSONIC:
        raise DomainError("BL profiles require a subsonic boundary state")
    if v_plus <= 0.0:
        raise DomainError("v_plus must be positive")
    s_minus = -u_minus / v_minus
    if u_plus is not None:
        expected = -s_minus * v_plus
        if abs(u_plus - expected) > 1e-8 * max(1.0, abs(expected)):
            raise InconsistentDataError(
                f"(v_plus, u_plus) not on the BL line: expected u = {expected:.12g}, got {u_plus:.12g}"
            )

    delta = v_plus - v_minus
    if abs(delta) < MIN_STRENGTH:
        # constant profile: the data already sit at the far-field state
        xi = np.linspace(0.0, 1.0, 401)
        V = np.full_like(xi, v_minus)
        return BLProfile(v_minus, u_minus, v_plus, s_minus, gas, xi, V, 1.0, 1.0)

    if delta > 0.0:
        vstar = sonic_intersection(w_minus, gas).v
        if v_plus > vstar * (1.0 + 1e-12):
            raise InconsistentDataError(
                f"expanding BL branch requires v_plus <= v* = {vstar:.12g}, got {v_plus}"
            )

    rate = v_plus * abs(float(dpressure(v_plus, gas)) + s_minus * s_minus) / (gas.mu * abs(s_minus))
    if rate <= 0.0:
        raise IntegrationError("degenerate BL attraction rate (sonic far field)")

    def rhs(V):
        hbl = float(h_function(V, v_plus, abs(s_minus), gas))
        return V * hbl / (gas.mu * s_minus)

    tail_eps = opts.tail_tol * abs(delta)
    rtol = min(1e-12, opts.ode_tol / 100.0)
    sol, xi_right = _integrate_to_endpoint(
        rhs, v_minus, v_plus, tail_eps, rate, +1.0, rtol, tail_eps * 1e-4
    )
    h_s = min(1.0 / (100.0 * rate), xi_right / 400.0)
    n = max(401, int(math.ceil(xi_right / h_s)) + 1)
    xi = np.linspace(0.0, xi_right, n)
    V = sol.sol(xi)[0]
    V[0] = v_minus  # initial condition is exact
    dV = np.diff(V)
    if delta > 0 and np.any(dV <= 0.0):
        raise IntegrationError("expanding BL profile lost monotonicity")
    if delta < 0 and np.any(dV >= 0.0):
        raise IntegrationError("compressing BL profile lost monotonicity")
    return BLProfile(v_minus, u_minus, v_plus, s_minus, gas, xi, V, xi_right, rate)
