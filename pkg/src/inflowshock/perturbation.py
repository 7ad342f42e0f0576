"""Large-oscillation initial data for the inflow problem.

The perturbation family scales a fixed template pair (f, g) as

    phi0(xi) = delta**((3*alpha+kappa)/2) * f(delta**(-kappa-alpha) * xi)

(and the same for psi0 with g), so that the antiderivative perturbations are
small in H1 while their second derivatives, and hence the oscillation of the
physical fields v0 = phi0' + V, u0 = psi0' + U, stay large relative to the
shock strength delta.

The profile shift sigma is fixed by a mass balance over the half-line: with

    sigma = [ int_0^inf (v0 - V(.-beta)) - M(-beta) ] / (v_plus - v_minus),
    M(x)  = int_{-inf}^x (V - v_minus),

the antiderivative boundary trace phi(t, 0) coincides with the explicit
datum A(t) = -M(-(s - s_minus) t + sigma - beta) at t = 0 and, by the mass
balance of the governing equations, for all later times up to scheme error.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from .errors import (
    CompatibilityError,
    DomainError,
    InadmissibleDataError,
    InconsistentDataError,
    IntegrationError,
    ResolutionError,
)
from .gas import GasParams
from .profiles import ShockProfile

__all__ = [
    "ExponentSet",
    "ExponentReport",
    "check_exponents",
    "BumpTemplate",
    "RandomFourierTemplate",
    "TabulatedTemplate",
    "PerturbationFields",
    "PerturbationOptions",
    "PerturbationSetup",
    "family_phi_psi",
    "oscillation",
    "compute_sigma",
    "boundary_datum_A",
    "assemble_initial_data",
    "build_perturbation_setup",
    "load_initial_data",
]


@dataclass(frozen=True)
class ExponentSet:
    """Scaling exponents (l, alpha, kappa, h) and the shock strength delta."""

    l: float
    alpha: float
    kappa: float
    h: float
    delta: float

    def __post_init__(self):
        if self.l < 0:
            raise DomainError("l must be >= 0")
        for name in ("alpha", "kappa", "h"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be > 0")
        if not 0.0 < self.delta < 1.0:
            raise DomainError("delta must lie in (0, 1)")

    def theta_for(self, gas: GasParams) -> float:
        """theta = kappa + l - (alpha - (gamma+1)l/2), recomputed on demand."""
        return self.kappa + self.l - (self.alpha - (gas.gamma + 1.0) * self.l / 2.0)


@dataclass
class ExponentReport:
    checks: list  # (name, lhs, relation, rhs, passed)
    theta: float
    valid: bool

    def __str__(self):
        lines = [f"theta = {self.theta:.6g}  ({'valid' if self.valid else 'INVALID'})"]
        for name, lhs, rel, rhs, ok in self.checks:
            lines.append(f"  [{'ok' if ok else 'FAIL'}] {name}: {lhs:.6g} {rel} {rhs:.6g}")
        return "\n".join(lines)


def check_exponents(e: ExponentSet, gas: GasParams) -> ExponentReport:
    """Evaluate every admissibility inequality on (l, alpha, kappa, h).

    Report-style: each inequality is listed with its two sides and a
    pass flag; the overall verdict is their conjunction.  For l = 0 the
    system reduces to the two-line condition on (alpha, kappa, h) alone.
    """
    g = gas.gamma
    l, a, k, h = e.l, e.alpha, e.kappa, e.h
    theta = e.theta_for(gas)
    a_eff = a - (g + 1.0) * l / 2.0
    checks = [
        ("(gamma+2)*l < 1", (g + 2.0) * l, "<", 1.0),
        ("(6*gamma+4)*l < alpha", (6.0 * g + 4.0) * l, "<", a),
        ("alpha < kappa", a, "<", k),
        ("(gamma+2)*l/2 < h", (g + 2.0) * l / 2.0, "<", h),
        ("h < 7/4*(alpha-(gamma+1)*l/2)", h, "<", 1.75 * a_eff),
        ("theta > 0", 0.0, "<", theta),
        (
            "theta < (gamma-1)/(4(gamma^2+3gamma-2))*(alpha-(gamma+1)l/2)",
            theta,
            "<",
            (g - 1.0) / (4.0 * (g * g + 3.0 * g - 2.0)) * a_eff,
        ),
        ("theta < (gamma-1)/(gamma^2+gamma+2)", theta, "<", (g - 1.0) / (g * g + g + 2.0)),
        ("theta < (gamma-1)/gamma^2*h", theta, "<", (g - 1.0) / (g * g) * h),
    ]
    results = [(name, lhs, rel, rhs, bool(lhs < rhs)) for name, lhs, rel, rhs in checks]
    return ExponentReport(results, theta, all(ok for *_, ok in results))


# ---------------------------------------------------------------------------
# templates: compactly supported H^2 functions with oscillating derivative


class _EnvelopedTemplate:
    """Template of the form A * osc(rho) * (1-rho^2)^3 on a finite support.

    rho maps the support linearly onto [-1, 1]; the sextic envelope keeps
    the template C^2 at the support edges.  Subclasses supply the carrier
    and its first two rho-derivatives.
    """

    def __init__(self, amplitude: float, support: tuple[float, float]):
        e0, e1 = support
        if not e1 > e0:
            raise DomainError("template support must be a nonempty interval")
        self.amplitude = amplitude
        self.support = (float(e0), float(e1))

    def _rho(self, eta):
        e0, e1 = self.support
        return 2.0 * (np.asarray(eta, dtype=float) - e0) / (e1 - e0) - 1.0

    def _osc(self, rho):
        raise NotImplementedError

    def _eval(self, eta, order):
        rho = self._rho(eta)
        inside = np.abs(rho) < 1.0
        r = np.where(inside, rho, 0.0)
        w, dw, d2w = self._osc(r)
        env = (1.0 - r * r) ** 3
        denv = -6.0 * r * (1.0 - r * r) ** 2
        d2env = 6.0 * (1.0 - r * r) * (5.0 * r * r - 1.0)
        if order == 0:
            out = env * w
        elif order == 1:
            out = denv * w + env * dw
        else:
            out = d2env * w + 2.0 * denv * dw + env * d2w
        scale = (2.0 / (self.support[1] - self.support[0])) ** order
        out = self.amplitude * scale * np.where(inside, out, 0.0)
        return float(out) if np.ndim(eta) == 0 else out

    def value(self, eta):
        return self._eval(eta, 0)

    def deriv1(self, eta):
        return self._eval(eta, 1)

    def deriv2(self, eta):
        return self._eval(eta, 2)


class BumpTemplate(_EnvelopedTemplate):
    """sin carrier: A * sin(pi*q*rho) * (1-rho^2)^3 with q full periods."""

    def __init__(self, amplitude: float = 1.0, support=(1.0, 5.0), cycles: int = 2):
        super().__init__(amplitude, support)
        if cycles < 1:
            raise DomainError("cycles must be >= 1")
        self.cycles = int(cycles)

    @property
    def wavelength(self) -> float:
        return (self.support[1] - self.support[0]) / self.cycles

    def _osc(self, rho):
        wq = math.pi * self.cycles
        s = np.sin(wq * rho)
        c = np.cos(wq * rho)
        return s, wq * c, -wq * wq * s


class RandomFourierTemplate(_EnvelopedTemplate):
    """Seeded random superposition of sin modes under the bump envelope."""

    def __init__(self, amplitude=1.0, support=(1.0, 5.0), modes: int = 3, seed: int = 0):
        super().__init__(amplitude, support)
        if modes < 1:
            raise DomainError("modes must be >= 1")
        rng = np.random.default_rng(seed)
        self.modes = int(modes)
        self._coef = rng.uniform(0.3, 1.0, size=self.modes)
        self._phase = rng.uniform(0.0, 2.0 * math.pi, size=self.modes)
        self._coef /= np.sum(self._coef)

    @property
    def wavelength(self) -> float:
        return (self.support[1] - self.support[0]) / self.modes

    def _osc(self, rho):
        r = np.asarray(rho)
        w = np.zeros_like(r, dtype=float)
        dw = np.zeros_like(w)
        d2w = np.zeros_like(w)
        for k in range(1, self.modes + 1):
            wq = math.pi * k
            arg = wq * r + self._phase[k - 1]
            a = self._coef[k - 1]
            w += a * np.sin(arg)
            dw += a * wq * np.cos(arg)
            d2w -= a * wq * wq * np.sin(arg)
        return w, dw, d2w


class TabulatedTemplate:
    """User-supplied samples (eta, values), interpolated by a cubic spline."""

    def __init__(self, eta, values, wavelength: float | None = None):
        from scipy.interpolate import CubicSpline

        eta = np.asarray(eta, dtype=float)
        values = np.asarray(values, dtype=float)
        if eta.ndim != 1 or eta.size < 8 or eta.shape != values.shape:
            raise DomainError("tabulated template needs matching 1-d arrays, >= 8 points")
        self.support = (float(eta[0]), float(eta[-1]))
        self.wavelength = wavelength if wavelength is not None else self.support[1] - self.support[0]
        self._spl = CubicSpline(eta, values, bc_type="clamped")
        self._d1 = self._spl.derivative(1)
        self._d2 = self._spl.derivative(2)

    def _masked(self, fn, eta):
        eta_arr = np.asarray(eta, dtype=float)
        inside = (eta_arr >= self.support[0]) & (eta_arr <= self.support[1])
        out = np.where(inside, fn(np.clip(eta_arr, *self.support)), 0.0)
        return float(out) if np.ndim(eta) == 0 else out

    def value(self, eta):
        return self._masked(self._spl, eta)

    def deriv1(self, eta):
        return self._masked(self._d1, eta)

    def deriv2(self, eta):
        return self._masked(self._d2, eta)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PerturbationOptions:
    min_points_per_wavelength: int = 8
    blend_cells: int = 3
    compat_tol: float = 0.1       # relative, pre-blend boundary mismatch
    sigma_tail_tol: float = 1e-5  # decay required of v0 - V at the right truncation
    beta_epsilon: float = 0.1     # default beta = delta**(-1+beta_epsilon)


@dataclass
class PerturbationFields:
    """Sampled antiderivative perturbations and their analytic derivatives."""

    xi: np.ndarray
    phi0: np.ndarray
    psi0: np.ndarray
    dphi0: np.ndarray
    dpsi0: np.ndarray

    @classmethod
    def zeros(cls, xi):
        z = np.zeros_like(np.asarray(xi, dtype=float))
        return cls(np.asarray(xi, dtype=float), z.copy(), z.copy(), z.copy(), z.copy())


def family_phi_psi(
    f,
    g,
    exponents: ExponentSet,
    xi,
    opts: PerturbationOptions | None = None,
) -> PerturbationFields:
    """Sample the scaled template pair on the grid.

    phi0 = delta**((3a+k)/2) f(xi/scale) with scale = delta**(kappa+alpha);
    the discrete norms then satisfy ||phi0'|| = delta**alpha ||f'|| and
    ||phi0''|| = delta**(-kappa) ||f''|| up to quadrature error.  Raises
    ResolutionError when the grid has fewer than
    opts.min_points_per_wavelength points across the template's finest
    scaled wavelength.
    """
    opts = opts or PerturbationOptions()
    xi = np.asarray(xi, dtype=float)
    dxi = xi[1] - xi[0]
    d = exponents.delta
    scale = d ** (exponents.kappa + exponents.alpha)
    amp = d ** ((3.0 * exponents.alpha + exponents.kappa) / 2.0)
    out = PerturbationFields.zeros(xi)
    for tpl, target, dtarget in ((f, out.phi0, out.dphi0), (g, out.psi0, out.dpsi0)):
        if tpl is None:
            continue
        ppw = scale * tpl.wavelength / dxi
        if ppw < opts.min_points_per_wavelength:
            raise ResolutionError(
                f"grid spacing {dxi:.3g} gives {ppw:.1f} points per scaled template "
                f"wavelength {scale * tpl.wavelength:.3g}; need >= {opts.min_points_per_wavelength}"
            )
        eta = xi / scale
        target[:] = amp * tpl.value(eta)
        dtarget[:] = (amp / scale) * tpl.deriv1(eta)
    return out


def oscillation(fieldvals) -> float:
    """max - min over the sampled field."""
    arr = np.asarray(fieldvals, dtype=float)
    if arr.size == 0:
        raise DomainError("oscillation of an empty field is undefined")
    return float(np.max(arr) - np.min(arr))


def compute_sigma(
    v0,
    xi,
    profile: ShockProfile,
    beta: float,
    s_minus: float,
    tail_tol: float = 1e-5,
    warn_constant: float = 10.0,
    reference_shift: float = 0.0,
) -> float:
    """Mass-balance shift for the given initial volume field.

    Composite Simpson quadrature of v0 - V(. + reference_shift - beta) over
    the truncated domain plus an exponential tail correction with rate
    c_plus, closed with the analytic half-line term M(reference_shift-beta).
    The translation identity

        int_0^inf (V(.+c-beta) - V(.-beta)) = c*delta - M(c-beta) + M(-beta)

    makes the result independent of the reference shift c in exact
    arithmetic; passing the shift the data were actually built with keeps
    the numeric integrand compactly supported.  Emits a warning when
    |sigma| exceeds warn_constant/delta, the sanity envelope the analysis
    guarantees.
    """
    if beta <= 0.0:
        raise DomainError("beta must be positive")
    v0 = np.asarray(v0, dtype=float)
    xi = np.asarray(xi, dtype=float)
    c = reference_shift
    w = v0 - profile.v_at(xi + c - beta)
    if abs(w[-1]) > tail_tol * max(1.0, profile.delta):
        raise IntegrationError(
            f"initial data have not decayed at the right truncation "
            f"(residual {w[-1]:.3e}); sigma quadrature would diverge"
        )
    i1 = float(simpson(w, x=xi)) + w[-1] / profile.c_plus
    sigma = c + (i1 - profile.integral_below(c - beta)) / profile.delta
    if abs(sigma) > warn_constant / profile.delta:
        warnings.warn(
            f"|sigma| = {abs(sigma):.4g} exceeds the {warn_constant}/delta sanity bound",
            RuntimeWarning,
            stacklevel=2,
        )
    return sigma


def boundary_datum_A(t, profile: ShockProfile, sigma: float, beta: float, s_minus: float):
    """A(t) = -M(-(s - s_minus) t + sigma - beta): negative, increasing to 0."""
    a = profile.s - s_minus
    y = -a * np.asarray(t, dtype=float) + sigma - beta
    out = -profile.integral_below(y)
    return float(out) if np.ndim(t) == 0 else out


@dataclass
class AssemblyInfo:
    compat_residual_v: float
    compat_residual_u: float
    c0_fit: float
    osc_v0: float
    osc_u0: float
    v0_min: float
    v0_max: float


def assemble_initial_data(
    fields: PerturbationFields,
    profile: ShockProfile,
    sigma: float,
    beta: float,
    opts: PerturbationOptions | None = None,
    exponents: ExponentSet | None = None,
):
    """Physical initial data v0 = phi0' + V(.+sigma-beta), u0 = psi0' + U(...).

    The boundary node is blended to (v_minus, u_minus) over
    opts.blend_cells cells so the compatibility condition holds exactly;
    a pre-blend mismatch above opts.compat_tol (relative) is an error, as
    is any non-positive v0.
    """
    opts = opts or PerturbationOptions()
    xi = fields.xi
    shift = xi + sigma - beta
    v0 = fields.dphi0 + profile.v_at(shift)
    u0 = fields.dpsi0 + profile.u_at(shift)

    r_v = abs(v0[0] - profile.v_minus)
    r_u = abs(u0[0] - profile.u_minus)
    if r_v > opts.compat_tol * profile.v_minus or r_u > opts.compat_tol * max(1.0, abs(profile.u_minus)):
        raise CompatibilityError(
            f"initial data mismatch boundary values beyond tolerance "
            f"(|v0(0)-v_minus| = {r_v:.3e}, |u0(0)-u_minus| = {r_u:.3e})"
        )
    width = opts.blend_cells * (xi[1] - xi[0])
    chi = np.where(xi < width, 0.5 * (1.0 + np.cos(np.pi * np.minimum(xi, width) / width)), 0.0)
    v0 = v0 + chi * (profile.v_minus - v0)
    u0 = u0 + chi * (profile.u_minus - u0)
    v0[0] = profile.v_minus
    u0[0] = profile.u_minus

    if np.any(v0 <= 0.0):
        raise InadmissibleDataError(
            f"assembled v0 reaches {float(np.min(v0)):.3e} <= 0; reduce the template amplitude"
        )
    l = exponents.l if exponents is not None else 0.0
    d = exponents.delta if exponents is not None else profile.delta
    c0_fit = max(float(np.max(v0)) / (1.0 + d ** (-l)), d**l / float(np.min(v0)))
    info = AssemblyInfo(
        compat_residual_v=r_v,
        compat_residual_u=r_u,
        c0_fit=c0_fit,
        osc_v0=oscillation(v0),
        osc_u0=oscillation(u0),
        v0_min=float(np.min(v0)),
        v0_max=float(np.max(v0)),
    )
    return v0, u0, info


@dataclass
class PerturbationSetup:
    """Everything the solver and the diagnostics need about the initial data."""

    xi: np.ndarray
    phi0: np.ndarray
    psi0: np.ndarray
    v0: np.ndarray
    u0: np.ndarray
    sigma: float
    beta: float
    exponents: ExponentSet | None
    info: AssemblyInfo = None
    h_implied: float = float("nan")

    def to_csv(self, path):
        meta = {
            "sigma": self.sigma,
            "beta": self.beta,
            "delta": self.exponents.delta if self.exponents else None,
            "exponents": (
                {
                    "l": self.exponents.l,
                    "alpha": self.exponents.alpha,
                    "kappa": self.exponents.kappa,
                    "h": self.exponents.h,
                    "delta": self.exponents.delta,
                }
                if self.exponents
                else None
            ),
        }
        with open(path, "w") as f:
            f.write("# " + json.dumps(meta, sort_keys=True) + "\n")
            f.write("xi,v0,u0,phi0,psi0\n")
            for row in zip(self.xi, self.v0, self.u0, self.phi0, self.psi0):
                f.write(",".join(f"{x:.17g}" for x in row) + "\n")


def load_initial_data(path):
    """Read back a CSV written by PerturbationSetup.to_csv."""
    with open(path) as f:
        first = f.readline()
        if not first.startswith("# "):
            raise InconsistentDataError("missing JSON metadata header line")
        meta = json.loads(first[2:])
        header = f.readline().strip().split(",")
        if header != ["xi", "v0", "u0", "phi0", "psi0"]:
            raise InconsistentDataError(f"unexpected columns {header}")
        data = np.loadtxt(f, delimiter=",")
    return {
        "xi": data[:, 0],
        "v0": data[:, 1],
        "u0": data[:, 2],
        "phi0": data[:, 3],
        "psi0": data[:, 4],
        "meta": meta,
    }


def default_beta(delta: float, opts: PerturbationOptions | None = None) -> float:
    opts = opts or PerturbationOptions()
    return delta ** (-1.0 + opts.beta_epsilon)


def build_perturbation_setup(
    profile: ShockProfile,
    xi,
    exponents: ExponentSet | None = None,
    f=None,
    g=None,
    beta: float | None = None,
    opts: PerturbationOptions | None = None,
) -> PerturbationSetup:
    """Full initial-data pipeline.

    Builds the scaled template fields, assembles provisional data with a
    zero shift, computes sigma from the mass balance, reassembles with the
    shifted profile (enforcing boundary compatibility), and finally
    recomputes sigma on the data actually handed to the solver, so that
    phi(0, 0) = A(0) holds exactly at the quadrature level.
    """
    opts = opts or PerturbationOptions()
    xi = np.asarray(xi, dtype=float)
    if exponents is not None and abs(exponents.delta - profile.delta) > 1e-12:
        raise InconsistentDataError(
            f"exponents.delta = {exponents.delta} but the profile strength is {profile.delta}"
        )
    delta = profile.delta
    if beta is None:
        beta = default_beta(delta, opts)
    s_minus = -profile.u_minus / profile.v_minus

    if exponents is not None and (f is not None or g is not None):
        fields = family_phi_psi(f, g, exponents, xi, opts)
    else:
        fields = PerturbationFields.zeros(xi)

    v0_prov = fields.dphi0 + profile.v_at(xi - beta)
    sigma_c = compute_sigma(v0_prov, xi, profile, beta, s_minus, opts.sigma_tail_tol)
    v0, u0, info = assemble_initial_data(fields, profile, sigma_c, beta, opts, exponents)
    sigma = compute_sigma(
        v0, xi, profile, beta, s_minus, opts.sigma_tail_tol, reference_shift=sigma_c
    )
    if abs(sigma) > beta:
        raise InconsistentDataError(
            f"|sigma| = {abs(sigma):.4g} exceeds beta = {beta:.4g}; increase beta"
        )
    h_implied = math.log(profile.u_minus) / math.log(delta) if 0 < delta < 1 and profile.u_minus > 0 else float("nan")
    return PerturbationSetup(
        xi=xi,
        phi0=fields.phi0,
        psi0=fields.psi0,
        v0=v0,
        u0=u0,
        sigma=sigma,
        beta=beta,
        exponents=exponents,
        info=info,
        h_implied=h_implied,
    )
