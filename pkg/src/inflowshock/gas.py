"""Thermodynamics and wave-curve algebra of the gamma-law gas.

Everything here is a pure function of its arguments, in the Lagrangian
description where the unknowns are specific volume v = 1/rho and velocity u.
The pressure law is p(v) = v**(-gamma).  Scalar and array arguments are both
accepted where broadcasting makes sense.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateShockError, DomainError

__all__ = [
    "GasParams",
    "EndState",
    "FlowRegion",
    "pressure",
    "dpressure",
    "sound_speed",
    "char_speeds",
    "classify_state",
    "shock_speed",
    "rh_closure",
    "entropy_check",
    "bl_line",
    "sonic_intersection",
    "s2_curve",
    "r_curve",
]


@dataclass(frozen=True)
class GasParams:
    """Dimensionless gas constants: adiabatic exponent and viscosity.

    gamma = 1 is accepted for the isothermal limit of the algebraic
    operations; the stability machinery elsewhere requires gamma > 1.
    """

    gamma: float = 2.0
    mu: float = 1.0

    def __post_init__(self):
        if not self.gamma >= 1.0:
            raise DomainError(f"gamma must be >= 1, got {self.gamma}")
        if not self.mu > 0.0:
            raise DomainError(f"mu must be > 0, got {self.mu}")


@dataclass(frozen=True)
class EndState:
    """A phase-space point (v, u) with strictly positive specific volume."""

    v: float
    u: float

    def __post_init__(self):
        if not self.v > 0.0:
            raise DomainError(f"specific volume must be > 0, got {self.v}")


class FlowRegion(Enum):
    SUBSONIC = "subsonic"
    TRANSONIC = "transonic"
    SUPERSONIC = "supersonic"


def _check_positive(v, name="v"):
    if np.any(np.asarray(v) <= 0.0):
        raise DomainError(f"{name} must be strictly positive")


def pressure(v, gas: GasParams):
    """p(v) = v**(-gamma)."""
    _check_positive(v)
    return np.power(v, -gas.gamma)


def dpressure(v, gas: GasParams):
    """p'(v) = -gamma * v**(-gamma-1), strictly negative."""
    _check_positive(v)
    return -gas.gamma * np.power(v, -gas.gamma - 1.0)


def sound_speed(v, gas: GasParams):
    """c(v) = v*sqrt(-p'(v)) = sqrt(gamma) * v**(-(gamma-1)/2).

    Evaluated under a single square root to keep exact algebraic cases
    (e.g. c(2) = 1 for gamma = 2) exact in floating point.
    """
    _check_positive(v)
    return np.sqrt(gas.gamma * np.power(v, 1.0 - gas.gamma))


def char_speeds(v, gas: GasParams):
    """Characteristic speeds (lambda_1, lambda_2) = (-sqrt(-p'), +sqrt(-p'))."""
    lam2 = np.sqrt(-dpressure(v, gas))
    return -lam2, lam2


def classify_state(w: EndState, gas: GasParams, tol: float = 1e-9) -> FlowRegion:
    """Compare |u| against the sound speed c(v) for a state with u > 0.

    ``tol`` is a relative band around c(v): states with
    ``| |u| - c | <= tol*c`` are reported transonic, which makes the
    measure-zero equality case testable.
    """
    if tol < 0.0:
        raise DomainError("tol must be >= 0")
    if not w.u > 0.0:
        raise DomainError("flow regions are defined for u > 0")
    c = float(sound_speed(w.v, gas))
    margin = abs(w.u) - c
    if margin < -tol * c:
        return FlowRegion.SUBSONIC
    if margin > tol * c:
        return FlowRegion.SUPERSONIC
    return FlowRegion.TRANSONIC


def shock_speed(v_l: float, v_r: float, family: int, gas: GasParams) -> float:
    """Hugoniot speed s_i = (-1)**i * sqrt((p(v_r)-p(v_l)) / (v_l-v_r)).

    The radicand is positive for every v_l != v_r because p is strictly
    decreasing.
    """
    _check_positive(v_l, "v_l")
    _check_positive(v_r, "v_r")
    if family not in (1, 2):
        raise DomainError(f"family must be 1 or 2, got {family}")
    if v_l == v_r:
        raise DegenerateShockError("shock speed undefined for v_l == v_r")
    rad = (pressure(v_r, gas) - pressure(v_l, gas)) / (v_l - v_r)
    sign = -1.0 if family == 1 else 1.0
    return sign * math.sqrt(rad)


def rh_closure(w_minus: EndState, v_plus: float, gas: GasParams):
    """Close the Rankine-Hugoniot relations for a 2-shock.

    Given the left state and the downstream specific volume, returns
    ``(w_plus, s)`` with s = s_2(v_minus, v_plus) and
    u_plus = u_minus - s*(v_plus - v_minus).  The second jump relation
    s*(u_plus - u_minus) = p(v_plus) - p(v_minus) then holds identically.
    """
    _check_positive(v_plus, "v_plus")
    if v_plus == w_minus.v:
        raise DegenerateShockError("degenerate shock: v_plus == v_minus")
    s = shock_speed(w_minus.v, v_plus, 2, gas)
    u_plus = w_minus.u - s * (v_plus - w_minus.v)
    return EndState(v_plus, u_plus), s


def entropy_check(u_l: float, u_r: float) -> bool:
    """Admissibility of a shock: u_r < u_l strictly."""
    return u_r < u_l


def bl_line(w_minus: EndState, v):
    """Boundary-layer line through w_minus: u = (u_minus/v_minus) * v.

    Its slope equals -s_minus where s_minus = -u_minus/v_minus.
    """
    _check_positive(v)
    out = (w_minus.u / w_minus.v) * np.asarray(v, dtype=float)
    return float(out) if np.ndim(v) == 0 else out


def sonic_intersection(w_minus: EndState, gas: GasParams, tol: float = 1e-10) -> EndState:
    """Intersection (v*, u*) of the BL line with the sonic curve |u| = c(v).

    Solves (u_minus/v_minus) v = sqrt(gamma) v**(-(gamma-1)/2), i.e.
    v* = (sqrt(gamma) v_minus / u_minus)**(2/(gamma+1)).
    """
    if not w_minus.u > 0.0:
        raise DomainError("sonic intersection requires u_minus > 0")
    vstar = (math.sqrt(gas.gamma) * w_minus.v / w_minus.u) ** (2.0 / (gas.gamma + 1.0))
    ustar = (w_minus.u / w_minus.v) * vstar
    cstar = float(sound_speed(vstar, gas))
    if abs(ustar - cstar) > tol * max(1.0, cstar):
        raise DomainError(
            f"sonic intersection failed self-check: |u*-c(v*)| = {abs(ustar - cstar):.3e}"
        )
    return EndState(vstar, ustar)


def s2_curve(w_anchor: EndState, v, gas: GasParams):
    """2-shock curve through the anchor: u = u_a - s_2(v_a, v)*(v - v_a), v > v_a."""
    varr = np.asarray(v, dtype=float)
    _check_positive(varr)
    if np.any(varr <= w_anchor.v):
        raise DomainError("S2 curve is defined for v > anchor.v")
    rad = (pressure(varr, gas) - pressure(w_anchor.v, gas)) / (w_anchor.v - varr)
    u = w_anchor.u - np.sqrt(rad) * (varr - w_anchor.v)
    return float(u) if np.ndim(v) == 0 else u


def _lambda2_antiderivative(v, gas: GasParams):
    # integral of lambda_2(v) = sqrt(gamma) v**(-(gamma+1)/2)
    g = gas.gamma
    if g == 1.0:
        return np.log(v)
    return -(2.0 * math.sqrt(g) / (g - 1.0)) * np.power(v, -(g - 1.0) / 2.0)


def r_curve(w_anchor: EndState, v, family: int, gas: GasParams):
    """Rarefaction curve u = u_a - int_{v_a}^{v} lambda_family(s) ds, in closed form.

    Family 1 is defined for v > anchor.v (u increasing), family 2 for
    v < anchor.v.
    """
    if family not in (1, 2):
        raise DomainError(f"family must be 1 or 2, got {family}")
    varr = np.asarray(v, dtype=float)
    _check_positive(varr)
    if family == 1 and np.any(varr < w_anchor.v):
        raise DomainError("R1 curve is defined for v >= anchor.v")
    if family == 2 and np.any(varr > w_anchor.v):
        raise DomainError("R2 curve is defined for v <= anchor.v")
    integral = _lambda2_antiderivative(varr, gas) - _lambda2_antiderivative(w_anchor.v, gas)
    if family == 1:
        integral = -integral
    u = w_anchor.u - integral
    return float(u) if np.ndim(v) == 0 else u
