"""Viscous shock waves for the 1-D compressible Navier-Stokes inflow problem.

Library layout:

- ``gas``          thermodynamics and wave-curve algebra of the gamma-law gas
- ``profiles``     viscous shock / boundary-layer profile construction
- ``perturbation`` large-oscillation initial data, shift sigma, boundary datum
- ``solver``       explicit finite-difference integrator in the moving frame
- ``diagnostics``  energy, boundary-integral, and density-bound monitors
- ``acceptance``   the end-to-end verification suite
- ``cli``          the ``inflowshock`` command-line front end
"""

from .errors import (
    BlowupError,
    CompatibilityError,
    ConfigError,
    ConstructionError,
    DegenerateShockError,
    DomainError,
    InadmissibleDataError,
    InconsistentDataError,
    InflowShockError,
    IntegrationError,
    PositivityError,
    ResolutionError,
    SimulationTimeout,
)
from .gas import (
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
from .perturbation import (
    BumpTemplate,
    ExponentSet,
    PerturbationOptions,
    PerturbationSetup,
    RandomFourierTemplate,
    TabulatedTemplate,
    assemble_initial_data,
    boundary_datum_A,
    build_perturbation_setup,
    check_exponents,
    compute_sigma,
    family_phi_psi,
    oscillation,
)
from .profiles import (
    BLProfile,
    ProfileOptions,
    ShockProfile,
    build_bl_profile,
    build_shock_profile,
    decay_rates,
    evaluate_profile,
    h_function,
    profile_ode_rhs,
)
from .solver import Grid, SimState, SolverOptions, Trajectory, initial_state, run, spatial_residual, stable_dt, step
from .diagnostics import (
    DiagnosticsCollector,
    DiagnosticsRecord,
    antiderivative_fields,
    boundary_integral_monitor,
    energy_series,
    phi_potential,
    phi_potential_factored,
    phi_tilde,
    sobolev_norms,
    stability_report,
)

__version__ = "0.1.0"
