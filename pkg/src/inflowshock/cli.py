"""Command-line front end: config-driven experiments with provenance.

Commands: profile, classify, simulate, sweep, verify.  Exit codes:
0 success, 2 config error, 3 construction error, 4 runtime blow-up,
5 wall-clock timeout.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .diagnostics import (
    DiagnosticsCollector,
    boundary_integral_monitor,
    energy_series,
    stability_report,
    write_diagnostics_csv,
    write_report_json,
)
from .errors import (
    BlowupError,
    ConfigError,
    ConstructionError,
    DomainError,
    InflowShockError,
    PositivityError,
    SimulationTimeout,
)
from .gas import EndState, FlowRegion, GasParams, bl_line, classify_state, r_curve, rh_closure, s2_curve, sonic_intersection
from .perturbation import (
    BumpTemplate,
    ExponentSet,
    PerturbationOptions,
    RandomFourierTemplate,
    build_perturbation_setup,
    check_exponents,
    default_beta,
)
from .profiles import ProfileOptions, build_shock_profile
from .solver import Grid, SolverOptions, initial_state, run, write_snapshot_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONSTRUCTION = 3
EXIT_RUNTIME = 4
EXIT_TIMEOUT = 5

MEMBERSHIP_TOL = 1e-6


@dataclass
class RunConfig:
    raw: dict
    gas: GasParams
    v_minus: float
    u_minus: float
    v_plus: float
    u_plus: float | None
    exponents: ExponentSet | None
    beta: float | None
    template_spec: dict | None
    grid_L: float | None  # None = auto
    grid_N: int
    cfl: float
    t_end: float
    snapshot_cadence: float | None
    seed: int
    wall_budget: float | None
    out_dir: str
    formats: tuple

    @property
    def tag(self) -> str:
        return hashlib.sha256(json.dumps(self.raw, sort_keys=True).encode()).hexdigest()[:12]


def _req(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"missing key '{key}' in section '{where}'")
    return section[key]


def load_config(path) -> RunConfig:
    try:
        with open(path) as f:
            raw = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except yaml.YAMLError as e:
        raise ConfigError(f"config is not valid YAML: {e}")
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")

    for section in ("gas", "states", "grid", "run"):
        if section not in raw or not isinstance(raw[section], dict):
            raise ConfigError(f"missing section '{section}'")

    gas_sec = raw["gas"]
    try:
        gas = GasParams(float(_req(gas_sec, "gamma", "gas")), float(_req(gas_sec, "mu", "gas")))
    except DomainError as e:
        raise ConfigError(str(e))

    st = raw["states"]
    v_minus = float(_req(st, "v_minus", "states"))
    u_minus = float(_req(st, "u_minus", "states"))
    v_plus = float(_req(st, "v_plus", "states"))
    u_plus = float(st["u_plus"]) if "u_plus" in st and st["u_plus"] is not None else None
    if v_minus <= 0 or v_plus <= 0:
        raise ConfigError("specific volumes must be positive")
    if u_minus <= 0:
        raise ConfigError("the inflow problem requires u_minus > 0")

    exponents = None
    if raw.get("exponents"):
        e = raw["exponents"]
        try:
            exponents = ExponentSet(
                l=float(e.get("l", 0.0)),
                alpha=float(_req(e, "alpha", "exponents")),
                kappa=float(_req(e, "kappa", "exponents")),
                h=float(_req(e, "h", "exponents")),
                delta=float(_req(e, "delta", "exponents")),
            )
        except DomainError as err:
            raise ConfigError(f"exponents invalid: {err}")
        report = check_exponents(exponents, gas)
        if not report.valid:
            failing = [name for name, *_, ok in report.checks if not ok]
            raise ConfigError("exponent set violates: " + "; ".join(failing))
        if abs(exponents.delta - (v_plus - v_minus)) > 1e-12:
            raise ConfigError(
                f"exponents.delta = {exponents.delta} must equal v_plus - v_minus = {v_plus - v_minus}"
            )

    pert = raw.get("perturbation") or {}
    beta = float(pert["beta"]) if "beta" in pert and pert["beta"] is not None else None
    template_spec = pert.get("template")
    if template_spec is not None and template_spec.get("kind", "bump") not in ("bump", "random_fourier", "none"):
        raise ConfigError(f"unknown template kind '{template_spec.get('kind')}'")

    gr = raw["grid"]
    L_raw = gr.get("L", "auto")
    grid_L = None if (L_raw in (None, "auto")) else float(L_raw)
    if grid_L is not None and grid_L <= 0:
        raise ConfigError("grid.L must be positive or 'auto'")
    grid_N = int(_req(gr, "N", "grid"))
    if grid_N < 8:
        raise ConfigError("grid.N must be at least 8")
    cfl = float(gr.get("cfl", 0.4))
    if not 0.0 < cfl <= 1.0:
        raise ConfigError("grid.cfl must lie in (0, 1]")

    rn = raw["run"]
    t_end = float(_req(rn, "t_end", "run"))
    if t_end < 0:
        raise ConfigError("run.t_end must be >= 0")
    cadence = rn.get("snapshot_cadence")
    cadence = float(cadence) if cadence is not None else None
    if cadence is not None and cadence <= 0:
        raise ConfigError("run.snapshot_cadence must be positive")
    seed = int(rn.get("seed", 0))
    wall_budget = rn.get("wall_budget")
    wall_budget = float(wall_budget) if wall_budget is not None else None

    out = raw.get("output") or {}
    out_dir = str(out.get("directory", "runs"))
    formats = tuple(out.get("formats", ["csv", "json"]))
    for fmt in formats:
        if fmt not in ("csv", "json"):
            raise ConfigError(f"unsupported output format '{fmt}'")

    return RunConfig(
        raw=raw,
        gas=gas,
        v_minus=v_minus,
        u_minus=u_minus,
        v_plus=v_plus,
        u_plus=u_plus,
        exponents=exponents,
        beta=beta,
        template_spec=template_spec,
        grid_L=grid_L,
        grid_N=grid_N,
        cfl=cfl,
        t_end=t_end,
        snapshot_cadence=cadence,
        seed=seed,
        wall_budget=wall_budget,
        out_dir=out_dir,
        formats=formats,
    )


def _make_template(spec: dict | None, seed: int):
    if spec is None or spec.get("kind", "bump") == "none":
        return None
    kind = spec.get("kind", "bump")
    amplitude = float(spec.get("amplitude", 1.0))
    support = tuple(float(x) for x in spec.get("support", (1.0, 5.0)))
    if kind == "bump":
        return BumpTemplate(amplitude=amplitude, support=support, cycles=int(spec.get("cycles", 2)))
    return RandomFourierTemplate(
        amplitude=amplitude, support=support, modes=int(spec.get("modes", 3)), seed=seed
    )


def _auto_length(cfg: RunConfig, profile, beta: float, support_width: float) -> float:
    return beta + max(40.0 / profile.c_minus, 40.0 / profile.c_plus) + support_width


def _validate_simulation_geometry(cfg: RunConfig, profile, beta, L):
    """Grid-resolution and support checks that need the built profile."""
    if cfg.exponents is not None and cfg.template_spec is not None:
        tpl = _make_template(cfg.template_spec, cfg.seed)
        if tpl is not None:
            scale = cfg.exponents.delta ** (cfg.exponents.kappa + cfg.exponents.alpha)
            support_hi = scale * tpl.support[1]
            if support_hi >= 0.8 * L:
                raise ConfigError(
                    f"perturbation support extends to {support_hi:.3g}, beyond 0.8*L = {0.8 * L:.3g}"
                )
            dxi = L / cfg.grid_N
            ppw = scale * tpl.wavelength / dxi
            min_ppw = PerturbationOptions().min_points_per_wavelength
            if ppw < min_ppw:
                raise ConfigError(
                    f"grid does not resolve the perturbation scale: {ppw:.1f} points per "
                    f"wavelength, need >= {min_ppw} (increase N or decrease L)"
                )


# ---------------------------------------------------------------------------
# commands


def cmd_profile(cfg: RunConfig, out_dir: Path, quiet: bool) -> int:
    import time

    t0 = time.perf_counter()
    profile = build_shock_profile(cfg.v_minus, cfg.u_minus, cfg.v_plus, cfg.gas)
    elapsed = time.perf_counter() - t0
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "profile.csv"
    profile.to_csv(path)
    fit_m = profile.tail_fit("left")
    fit_p = profile.tail_fit("right")
    summary = {
        "delta": profile.delta,
        "s": profile.s,
        "c_minus": profile.c_minus,
        "c_plus": profile.c_plus,
        "monotone": bool(np.all(np.diff(profile.V) > 0)),
        "ode_residual_fd": profile.ode_residual_fd(),
        "tail_rate_fit_left": fit_m,
        "tail_rate_fit_right": fit_p,
        "tail_fit_rel_dev_left": abs(fit_m / profile.c_minus - 1.0),
        "tail_fit_rel_dev_right": abs(fit_p / profile.c_plus - 1.0),
        "build_seconds": elapsed,
        "samples": int(profile.xi.size),
        "file": str(path),
    }
    if "json" in cfg.formats:
        write_report_json(summary, out_dir / "profile_summary.json")
    if not quiet:
        print(f"profile: delta={profile.delta:.6g} s={profile.s:.6g} "
              f"c-={profile.c_minus:.6g} c+={profile.c_plus:.6g}")
        print(f"verification: monotone={summary['monotone']} "
              f"ode_residual={summary['ode_residual_fd']:.3e} "
              f"tail fits c-={fit_m:.5g} c+={fit_p:.5g}")
        print(f"wrote {path}")
    return EXIT_OK


def _curve_membership(cfg: RunConfig, w_minus: EndState, w_plus: EndState) -> dict:
    gas = cfg.gas
    out = {}
    if abs(w_plus.v - w_minus.v) < 1e-14 and abs(w_plus.u - w_minus.u) < 1e-14:
        out["anchor_coincident"] = True
        return out
    out["anchor_coincident"] = False
    if w_plus.v > w_minus.v:
        d = abs(w_plus.u - s2_curve(w_minus, w_plus.v, gas))
        out["S2(w-)"] = {"distance": d, "member": bool(d < MEMBERSHIP_TOL)}
    d_bl = abs(w_plus.u - bl_line(w_minus, w_plus.v))
    w_star = sonic_intersection(w_minus, gas)
    branch = None
    if d_bl < MEMBERSHIP_TOL:
        if w_minus.v < w_plus.v <= w_star.v * (1 + 1e-12):
            branch = "BL+"
        elif 0 < w_plus.v < w_minus.v:
            branch = "BL-"
        else:
            branch = "beyond-sonic"
    out["BL(w-)"] = {"distance": d_bl, "member": bool(d_bl < MEMBERSHIP_TOL), "branch": branch}
    if w_plus.v > w_star.v:
        d = abs(w_plus.u - r_curve(w_star, w_plus.v, 1, gas))
        out["R1(w*)"] = {"distance": d, "member": bool(d < MEMBERSHIP_TOL)}
        d = abs(w_plus.u - s2_curve(w_star, w_plus.v, gas))
        out["S2(w*)"] = {"distance": d, "member": bool(d < MEMBERSHIP_TOL)}
    elif w_plus.v < w_star.v:
        d = abs(w_plus.u - r_curve(w_star, w_plus.v, 2, gas))
        out["R2(w*)"] = {"distance": d, "member": bool(d < MEMBERSHIP_TOL)}
    out["sonic_point"] = {"v": w_star.v, "u": w_star.u}
    return out


def cmd_classify(cfg: RunConfig, out_dir: Path | None, quiet: bool) -> int:
    if cfg.u_plus is None:
        raise ConfigError("classify needs states.u_plus")
    w_minus = EndState(cfg.v_minus, cfg.u_minus)
    w_plus = EndState(cfg.v_plus, cfg.u_plus)
    report = {
        "w_minus": {"v": w_minus.v, "u": w_minus.u, "region": classify_state(w_minus, cfg.gas).value},
        "w_plus": {"v": w_plus.v, "u": w_plus.u},
        "gamma": cfg.gas.gamma,
    }
    if w_plus.u > 0:
        report["w_plus"]["region"] = classify_state(w_plus, cfg.gas).value
    report["curves"] = _curve_membership(cfg, w_minus, w_plus)
    if not quiet:
        print(json.dumps(report, indent=2, sort_keys=True))
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        write_report_json(report, out_dir / "classify.json")
    return EXIT_OK


def _simulate(cfg: RunConfig, out_root: Path, quiet: bool) -> dict:
    """Shared pipeline for simulate and sweep; returns the summary row."""
    profile = build_shock_profile(cfg.v_minus, cfg.u_minus, cfg.v_plus, cfg.gas)
    delta = profile.delta
    beta = cfg.beta if cfg.beta is not None else default_beta(delta)
    tpl = _make_template(cfg.template_spec, cfg.seed)
    support_width = 0.0
    if tpl is not None and cfg.exponents is not None:
        scale = cfg.exponents.delta ** (cfg.exponents.kappa + cfg.exponents.alpha)
        support_width = scale * tpl.support[1]
    L = cfg.grid_L if cfg.grid_L is not None else _auto_length(cfg, profile, beta, support_width)
    _validate_simulation_geometry(cfg, profile, beta, L)
    grid = Grid(L=L, N=cfg.grid_N)

    setup = build_perturbation_setup(
        profile, grid.nodes(), exponents=cfg.exponents, f=tpl, g=tpl, beta=beta
    )
    state = initial_state(grid, cfg.gas, profile, setup)
    collector = DiagnosticsCollector(profile, setup.sigma, setup.beta, state.s_minus)
    traj = run(
        state,
        cfg.t_end,
        snapshot_cadence=cfg.snapshot_cadence,
        hooks=[collector],
        opts=SolverOptions(cfl=cfg.cfl),
        wall_budget=cfg.wall_budget,
    )

    run_dir = out_root / f"run_{cfg.tag}"
    run_dir.mkdir(parents=True, exist_ok=True)
    if "csv" in cfg.formats:
        for k in range(len(traj)):
            write_snapshot_csv(run_dir / f"snap_{k:04d}.csv", grid.nodes(), traj.v[k], traj.u[k])
        write_diagnostics_csv(collector.records, run_dir / "diagnostics.csv")
    monitor = boundary_integral_monitor(collector.records, delta, profile.c_minus, beta)
    energy = energy_series(collector.records, delta, profile.c_minus, beta)
    stab = stability_report(collector.records, cfg.gas, cfg.exponents)
    report = {
        "stability": stab,
        "boundary_integrals": monitor,
        "energy": {"max_E": energy["max_E"], "e_ratio": energy["e_ratio"], "denominator": energy["denominator"]},
        "phi_vs_A_max": float(max(abs(r.phi_at_0 - r.A_t) for r in collector.records)),
    }
    manifest = {
        "config": cfg.raw,
        "config_hash": cfg.tag,
        "package_version": __version__,
        "grid": {"L": L, "N": cfg.grid_N, "dxi": grid.dxi},
        "profile": {
            "s": profile.s,
            "delta": delta,
            "c_minus": profile.c_minus,
            "c_plus": profile.c_plus,
            "xi_left": profile.xi_left,
            "xi_right": profile.xi_right,
            "normalization": profile.normalization,
        },
        "sigma": setup.sigma,
        "beta": setup.beta,
        "h_implied": setup.h_implied,
        "tolerances": {
            "ode_tol": ProfileOptions().ode_tol,
            "tail_tol": ProfileOptions().tail_tol,
            "cfl": cfg.cfl,
            "blend_cells": PerturbationOptions().blend_cells,
            "min_points_per_wavelength": PerturbationOptions().min_points_per_wavelength,
            "compat_tol": PerturbationOptions().compat_tol,
        },
        "far_field_closure": "dirichlet to (V,U)(L - (s-s_minus) t + sigma - beta)",
        "advection_stencil": "second-order centered",
        "steps": {"n": traj.n_steps, "rejected": traj.n_rejected, "dt_min": traj.dt_min, "dt_max": traj.dt_max},
        "snapshots": len(traj),
    }
    if "json" in cfg.formats:
        write_report_json(report, run_dir / "report.json")
        write_report_json(manifest, run_dir / "manifest.json")
    if not quiet:
        print(f"run dir: {run_dir}")
        print(f"verdict: {stab.get('verdict')}  sup_dev final: {stab.get('sup_dev_final', float('nan')):.4g}")
    last = collector.records[-1]
    return {
        "run_dir": str(run_dir),
        "verdict": stab.get("verdict"),
        "sup_dev_final": stab.get("sup_dev_final"),
        "e_ratio": energy["e_ratio"],
        "v_min": stab["v_min_global"],
        "v_max": stab["v_max_global"],
        "cum_phi": last.cum_phi,
        "cum_phi_xi": last.cum_phi_xi,
        "cum_psi_xi": last.cum_psi_xi,
        "cum_phi_t": last.cum_phi_t,
        "cum_phi_txi": last.cum_phi_txi,
        "cum_psi_txi": last.cum_psi_txi,
        "c_minus": profile.c_minus,
        "beta": setup.beta,
        "sigma": setup.sigma,
    }


def cmd_simulate(cfg: RunConfig, out_dir: Path, quiet: bool) -> int:
    _simulate(cfg, out_dir, quiet)
    return EXIT_OK


def _sweep_one(args):
    raw, axis, value, out_root, quiet = args
    import copy

    raw = copy.deepcopy(raw)
    if axis == "beta":
        raw.setdefault("perturbation", {})["beta"] = float(value)
    elif axis == "delta":
        raw["states"]["v_plus"] = raw["states"]["v_minus"] + float(value)
        if raw.get("exponents"):
            raw["exponents"]["delta"] = float(value)
    elif axis == "grid":
        raw["grid"]["N"] = int(value)
    else:
        raise ConfigError(f"unknown sweep axis '{axis}'")
    import tempfile

    with tempfile.NamedTemporaryFile("w", suffix=".yaml", delete=False) as f:
        yaml.safe_dump(raw, f)
        tmp = f.name
    try:
        cfg = load_config(tmp)
        row = _simulate(cfg, Path(out_root), quiet=True)
        row.update(axis=axis, value=value, status="ok")
    except InflowShockError as e:
        row = {"axis": axis, "value": value, "status": f"error:{type(e).__name__}", "message": str(e)}
    finally:
        Path(tmp).unlink(missing_ok=True)
    return row


SWEEP_COLUMNS = [
    "value", "status", "sup_dev_final", "e_ratio", "v_min", "v_max",
    "cum_phi", "cum_phi_xi", "cum_psi_xi", "cum_phi_t", "cum_phi_txi", "cum_psi_txi",
]


def cmd_sweep(cfg: RunConfig, axis: str, values: list, out_dir: Path, jobs: int, quiet: bool) -> int:
    if axis not in ("beta", "delta", "grid"):
        raise ConfigError(f"sweep axis must be beta, delta, or grid, not '{axis}'")
    if len(values) < 2:
        raise ConfigError("sweep needs >= 2 values")
    out_root = out_dir / f"sweep_{axis}_{cfg.tag}"
    out_root.mkdir(parents=True, exist_ok=True)
    tasks = [(cfg.raw, axis, v, str(out_root / f"value_{i}"), True) for i, v in enumerate(values)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_one, tasks))
    else:
        rows = [_sweep_one(t) for t in tasks]

    summary_path = out_root / "summary.csv"
    with open(summary_path, "w") as f:
        f.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in rows:
            f.write(",".join(_fmt_cell(row.get(c)) for c in SWEEP_COLUMNS) + "\n")

    extra = {}
    ok_rows = [r for r in rows if r.get("status") == "ok"]
    if axis == "beta" and len(ok_rows) >= 2:
        # fitted decay rate of the saturated boundary integrals vs c_minus
        b = np.array([float(r["value"]) for r in ok_rows])
        i_sat = np.array([max(r["cum_phi_xi"], 1e-300) for r in ok_rows])
        rate = -float(np.polyfit(b, np.log(i_sat), 1)[0])
        extra = {"fitted_rate": rate, "c_minus": ok_rows[0]["c_minus"],
                 "rate_over_c_minus": rate / ok_rows[0]["c_minus"]}
    if axis == "grid" and len(ok_rows) >= 2:
        errs = [r["sup_dev_final"] for r in ok_rows]
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)
                  if errs[i + 1] and errs[i]]
        extra = {"empirical_orders": orders}
    if extra and "json" in cfg.formats:
        write_report_json(extra, out_root / "sweep_fit.json")
    if not quiet:
        print(f"sweep summary: {summary_path}")
        if extra:
            print(json.dumps(extra, indent=2, default=float))
    failed = [r for r in rows if r.get("status") != "ok"]
    if failed and not quiet:
        for r in failed:
            print(f"value {r['value']}: {r['status']} ({r.get('message', '')})", file=sys.stderr)
    return EXIT_OK


def _fmt_cell(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def cmd_verify(criteria: list[int] | None, quiet: bool) -> int:
    from .acceptance import run_all

    results = run_all(criteria)
    all_pass = True
    for res in results:
        all_pass &= res.passed
        print(f"{'PASS' if res.passed else 'FAIL'}  criterion {res.number}: {res.name}"
              + ("" if quiet else f"  [{res.elapsed:.1f}s]"))
        if not res.passed and not quiet:
            print(f"      {res.details}")
    return EXIT_OK if all_pass else 1


# ---------------------------------------------------------------------------


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="path to the YAML run configuration")
    common.add_argument("--out", type=str, default=None, help="output directory override")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--quiet", action="store_true", help="suppress non-essential output")

    parser = argparse.ArgumentParser(
        prog="inflowshock",
        description="Viscous shock waves for the 1-D compressible Navier-Stokes inflow problem",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command")
    sub.add_parser("profile", parents=[common], help="build and verify a shock profile")
    sub.add_parser("classify", parents=[common], help="classify states and wave-curve membership")
    sub.add_parser("simulate", parents=[common], help="run a full inflow simulation")
    p_sweep = sub.add_parser("sweep", parents=[common], help="run a parameter sweep")
    p_sweep.add_argument("--axis", required=True, choices=("beta", "delta", "grid"))
    p_sweep.add_argument("--values", required=True, help="comma-separated axis values")
    p_verify = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    p_verify.add_argument("--criteria", default=None, help="comma-separated criterion numbers")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage()
        return EXIT_CONFIG
    try:
        if args.command == "verify":
            criteria = [int(x) for x in args.criteria.split(",")] if args.criteria else None
            return cmd_verify(criteria, args.quiet)
        if not args.config:
            raise ConfigError(f"'{args.command}' needs --config PATH")
        cfg = load_config(args.config)
        out_dir = Path(args.out) if args.out else Path(cfg.out_dir)
        if args.command == "profile":
            return cmd_profile(cfg, out_dir, args.quiet)
        if args.command == "classify":
            return cmd_classify(cfg, Path(args.out) if args.out else None, args.quiet)
        if args.command == "simulate":
            return cmd_simulate(cfg, out_dir, args.quiet)
        if args.command == "sweep":
            values = [float(x) for x in args.values.split(",") if x.strip()]
            return cmd_sweep(cfg, args.axis, values, out_dir, args.jobs, args.quiet)
        parser.print_usage()
        return EXIT_CONFIG
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SimulationTimeout as e:
        print(f"timeout: {e}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (PositivityError, BlowupError) as e:
        print(f"runtime failure: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ConstructionError, DomainError) as e:
        print(f"construction error: {e}", file=sys.stderr)
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
