"""Explicit finite-difference integrator for the moving-frame inflow system.

    v_t = s_minus v_xi + u_xi
    u_t = s_minus u_xi - p(v)_xi + mu (u_xi / v)_xi          on xi in [0, L]

with Dirichlet inflow data (v_minus, u_minus) at xi = 0 and far-field
closure at xi = L following the time-shifted shock profile.  Interior
stencils are second order and centered (u_xi, p(v)_xi, and the frame
advection terms), with the viscous flux in conservative face-centered form;
centered advection keeps the discrete mass balance at the inflow boundary
second-order accurate, which the antiderivative boundary identity tests
depend on.  Time stepping is the explicit midpoint Runge-Kutta scheme,
stabilized by the physical viscosity.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BlowupError, DomainError, PositivityError, SimulationTimeout
from .gas import GasParams, pressure
from .profiles import ShockProfile

__all__ = [
    "Grid",
    "SolverOptions",
    "SimState",
    "Trajectory",
    "initial_state",
    "spatial_residual",
    "stable_dt",
    "step",
    "run",
    "write_snapshot_csv",
]


@dataclass(frozen=True)
class Grid:
    """Uniform node grid on [0, L]; node 0 is the inflow boundary."""

    L: float
    N: int

    def __post_init__(self):
        if self.L <= 0 or self.N < 8:
            raise DomainError("grid needs L > 0 and N >= 8")

    @property
    def dxi(self) -> float:
        return self.L / self.N

    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.N + 1)


@dataclass(frozen=True)
class SolverOptions:
    cfl: float = 0.4
    positivity_retries: int = 10


@dataclass
class SimState:
    """Fields on the grid at one instant, plus the frame/profile context."""

    t: float
    v: np.ndarray
    u: np.ndarray
    grid: Grid
    gas: GasParams
    s_minus: float
    profile: ShockProfile
    sigma: float
    beta: float
    boundary_mode: str = "inflow"  # or "profile": shifted profile at both ends
    xi: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.xi is None:
            self.xi = self.grid.nodes()

    @property
    def v_minus(self) -> float:
        return self.profile.v_minus

    @property
    def u_minus(self) -> float:
        return self.profile.u_minus

    def shift_arg(self, xi=None):
        """Profile argument xi - (s - s_minus) t + sigma - beta."""
        x = self.xi if xi is None else xi
        return x - (self.profile.s - self.s_minus) * self.t + self.sigma - self.beta

    def copy(self) -> "SimState":
        return replace(self, v=self.v.copy(), u=self.u.copy())


def initial_state(grid: Grid, gas: GasParams, profile: ShockProfile, setup) -> SimState:
    """State at t = 0 from a PerturbationSetup built on this grid."""
    xi = grid.nodes()
    if setup.xi.shape != xi.shape or not np.allclose(setup.xi, xi, atol=1e-12):
        raise DomainError("perturbation setup was built on a different grid")
    s_minus = -profile.u_minus / profile.v_minus
    return SimState(
        t=0.0,
        v=setup.v0.copy(),
        u=setup.u0.copy(),
        grid=grid,
        gas=gas,
        s_minus=s_minus,
        profile=profile,
        sigma=setup.sigma,
        beta=setup.beta,
        xi=xi,
    )


def _centered_dx(f: np.ndarray, h: float) -> np.ndarray:
    D = np.zeros_like(f)
    D[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    return D


def spatial_residual(state: SimState):
    """(dv/dt, du/dt) on the interior nodes; boundary rows are zero (Dirichlet)."""
    v, u = state.v, state.u
    if np.any(v <= 0.0):
        raise PositivityError("non-positive specific volume in residual", t=state.t)
    h = state.grid.dxi
    mu = state.gas.mu
    s_minus = state.s_minus

    p = pressure(v, state.gas)
    du_face = np.diff(u) / h
    v_face = 0.5 * (v[:-1] + v[1:])
    flux = du_face / v_face

    dv = s_minus * _centered_dx(v, h) + _centered_dx(u, h)
    du = s_minus * _centered_dx(u, h) - _centered_dx(p, h)
    du[1:-1] += mu * (flux[1:] - flux[:-1]) / h
    dv[0] = dv[-1] = 0.0
    du[0] = du[-1] = 0.0
    return dv, du


def stable_dt(state: SimState, cfl: float) -> float:
    """cfl * min(advective, diffusive) explicit step bound."""
    if not 0.0 < cfl <= 1.0:
        raise DomainError("cfl must lie in (0, 1]")
    v = state.v
    if np.any(v <= 0.0):
        raise PositivityError("non-positive specific volume in stable_dt", t=state.t)
    g = state.gas
    lam2 = math.sqrt(g.gamma) * float(np.min(v)) ** (-(g.gamma + 1.0) / 2.0)
    adv = state.grid.dxi / (abs(state.s_minus) + lam2)
    diff = state.grid.dxi**2 * float(np.min(v)) / (2.0 * g.mu)
    return cfl * min(adv, diff)


def _impose_bc(state: SimState, v: np.ndarray, u: np.ndarray, t: float):
    a = state.profile.s - state.s_minus
    if state.boundary_mode == "profile":
        V0, U0 = state.profile.evaluate(0.0 - a * t + state.sigma - state.beta)
        v[0] = V0
        u[0] = U0
    else:
        v[0] = state.v_minus
        u[0] = state.u_minus
    V, U = state.profile.evaluate(state.grid.L - a * t + state.sigma - state.beta)
    v[-1] = V
    u[-1] = U


def step(state: SimState, dt: float) -> SimState:
    """One explicit midpoint step; Dirichlet rows reimposed after each stage."""
    if dt < 0.0:
        raise DomainError("dt must be >= 0")
    if dt == 0.0:
        return state.copy()
    k1v, k1u = spatial_residual(state)
    vh = state.v + 0.5 * dt * k1v
    uh = state.u + 0.5 * dt * k1u
    _impose_bc(state, vh, uh, state.t + 0.5 * dt)
    if np.any(vh <= 0.0):
        raise PositivityError("positivity lost at the half step", t=state.t)
    half = replace(state, t=state.t + 0.5 * dt, v=vh, u=uh)
    k2v, k2u = spatial_residual(half)
    v1 = state.v + dt * k2v
    u1 = state.u + dt * k2u
    t1 = state.t + dt
    _impose_bc(state, v1, u1, t1)
    if not (np.all(np.isfinite(v1)) and np.all(np.isfinite(u1))):
        raise BlowupError(f"NaN/Inf detected at t = {t1:.6g}", t=t1)
    if np.any(v1 <= 0.0):
        raise PositivityError("positivity lost at the full step", t=t1)
    return replace(state, t=t1, v=v1, u=u1)


@dataclass
class Trajectory:
    """Snapshots at the requested cadence plus step statistics."""

    times: list
    v: list
    u: list
    final: SimState
    n_steps: int = 0
    n_rejected: int = 0
    dt_min: float = float("inf")
    dt_max: float = 0.0

    def state_at(self, k: int) -> SimState:
        return replace(self.final, t=self.times[k], v=self.v[k], u=self.u[k])

    def __len__(self):
        return len(self.times)


def run(
    state: SimState,
    t_end: float,
    snapshot_cadence: float | None = None,
    hooks=(),
    opts: SolverOptions | None = None,
    wall_budget: float | None = None,
) -> Trajectory:
    """March to t_end, snapshotting (and invoking hooks) at the cadence.

    Steps are clamped so snapshot instants are hit exactly.  A positivity
    failure triggers step halving, up to opts.positivity_retries times;
    NaN blow-up propagates immediately.  Exceeding wall_budget seconds
    raises SimulationTimeout with the partial trajectory attached.
    """
    opts = opts or SolverOptions()
    if t_end < state.t:
        raise DomainError("t_end must be >= state.t")
    cad = snapshot_cadence if snapshot_cadence else (t_end - state.t)
    t0 = state.t
    traj = Trajectory(times=[state.t], v=[state.v.copy()], u=[state.u.copy()], final=state)
    for hook in hooks:
        hook(state)
    if t_end == state.t:
        return traj

    started = _time.monotonic()
    k_snap = 1
    eps = 1e-9 * max(1.0, abs(t_end))
    while state.t < t_end - eps:
        target = min(t_end, t0 + k_snap * cad) if cad > 0 else t_end
        dt = min(stable_dt(state, opts.cfl), target - state.t)
        for attempt in range(opts.positivity_retries + 1):
            try:
                state = step(state, dt)
                break
            except PositivityError:
                if attempt == opts.positivity_retries:
                    raise
                traj.n_rejected += 1
                dt *= 0.5
        traj.n_steps += 1
        traj.dt_min = min(traj.dt_min, dt)
        traj.dt_max = max(traj.dt_max, dt)
        if wall_budget is not None and _time.monotonic() - started > wall_budget:
            traj.final = state
            raise SimulationTimeout(
                f"wall budget {wall_budget:.1f}s exceeded at t = {state.t:.6g}", partial=traj
            )
        if state.t >= target - eps:
            traj.times.append(state.t)
            traj.v.append(state.v.copy())
            traj.u.append(state.u.copy())
            for hook in hooks:
                hook(state)
            if target < t_end:
                k_snap += 1
    traj.final = state
    return traj


def write_snapshot_csv(path, xi, v, u):
    with open(path, "w") as f:
        f.write("xi,v,u\n")
        for row in zip(xi, v, u):
            f.write(",".join(f"{x:.17g}" for x in row) + "\n")
