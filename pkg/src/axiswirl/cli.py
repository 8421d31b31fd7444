"""Command-line driver: profile / verify / norms / oracle / all.

Configuration is a flat key=value file with command-line flags taking
precedence; OUT_DIR in the environment overrides the output directory.
Every run writes a manifest echoing the effective configuration next to
its outputs, and a machine-parseable summary is emitted even on failure.
Exit status is 0 iff every enabled check passed.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, asdict

import numpy as np

from . import __version__
from ._csvio import write_csv, write_json
from .errors import AxiswirlError, ConfigError
from .fields import FIELD_SLICE_HEADER, SolutionFamily, field_slice_rows
from .norms import (NORM_SERIES_HEADER, classify_LqtL1x, energy_series,
                    l1_series, norm_series_rows)
from .numerics import make_radial_grid, make_time_ladder
from .oracle import (OracleConfig, TRAJECTORY_HEADER, convergence_study,
                     default_levels, solve_swirl, trajectory_rows)
from .profiles import (build_profile, forcing_from_samples, ode_residual,
                       profile_table, reference_k)
from .verify import (check_bound, check_boundary, check_radial_momentum,
                     check_swirl_pde, report_to_dict)

PROFILE_HEADER = ["r", "phi0", "phi0_prime", "phi0_second", "ode_residual"]
ODE_RESIDUAL_TOL = 1e-8


@dataclass
class RunConfig:
    T: float = 0.5
    part: int = 1
    k_spec: str = "bump"
    grid_n: int = 128
    grading: str = "uniform"
    ladder_J: int = 12
    out_dir: str = "axiswirl-out"
    formats: tuple = ("csv", "json")
    oracle_n_r: int = 128
    oracle_theta: float = 0.5
    oracle_levels: int = 3

    def validate(self):
        if not (0.0 < self.T <= 0.5):
            raise ConfigError("T must lie in (0, 1/2]")
        if self.part not in (1, 2):
            raise ConfigError("part must be 1 or 2")
        if self.ladder_J < 4:
            raise ConfigError("ladder_J must be at least 4")
        if self.grid_n < 8:
            raise ConfigError("grid_n must be at least 8")
        bad = set(self.formats) - {"csv", "json"}
        if bad:
            raise ConfigError(f"unknown formats: {sorted(bad)}")


_CONFIG_KEYS = {
    "T": float, "part": int, "k_spec": str, "grid_n": int, "grading": str,
    "ladder_J": int, "out_dir": str,
    "oracle_n_r": int, "oracle_theta": float, "oracle_levels": int,
}


def load_config(path: str) -> dict:
    """Flat key = value file; '#' starts a comment."""
    values = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            key = key.strip()
            if key == "formats":
                values[key] = tuple(v.strip() for v in val.split(",") if v.strip())
                continue
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = _CONFIG_KEYS[key](val.strip())
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return values


def load_k_table(path: str):
    """Two-column CSV (r, k); cubic interpolation, endpoints forced to zero."""
    radii, kvals = [], []
    with open(path) as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if lineno == 1 and not _is_number(parts[0]):
                continue  # header row
            if len(parts) != 2 or not all(_is_number(p) for p in parts):
                raise ConfigError(f"{path}:{lineno}: expected 'r,k' numbers")
            radii.append(float(parts[0]))
            kvals.append(float(parts[1]))
    if len(radii) < 4:
        raise ConfigError(f"{path}: need at least four samples")
    try:
        return forcing_from_samples(np.asarray(radii), np.asarray(kvals))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def build_family(cfg: RunConfig) -> SolutionFamily:
    if cfg.k_spec == "bump":
        k = reference_k()
    else:
        k = load_k_table(cfg.k_spec)
        if cfg.part == 2 and not k.nonpositive:
            raise ConfigError("part 2 requires a nonpositive forcing table")
    return SolutionFamily(profile=build_profile(k), T=cfg.T, part=cfg.part)


def _out_path(cfg: RunConfig, name: str) -> str:
    os.makedirs(cfg.out_dir, exist_ok=True)
    return os.path.join(cfg.out_dir, name)


def write_manifest(cfg: RunConfig, command: str) -> None:
    payload = {
        "command": command,
        "config": asdict(cfg),
        "versions": {
            "axiswirl": __version__,
            "numpy": np.__version__,
            "python": sys.version.split()[0],
        },
        "seeds": "deterministic (nothing is random)",
    }
    write_json(_out_path(cfg, f"manifest_{command}.json"), payload)


def cmd_profile(cfg: RunConfig) -> int:
    fam = build_family(cfg)
    prof = fam.profile
    radii = np.geomspace(1e-3, 1.0, 201)
    table = profile_table(prof, radii)
    if "csv" in cfg.formats:
        write_csv(_out_path(cfg, "profile.csv"), PROFILE_HEADER, table)
    res_max = float(np.max(np.abs(table[:, 4])))
    passed = res_max < ODE_RESIDUAL_TOL
    summary = {
        "alpha": prof.alpha,
        "I0": prof.I0,
        "max_ode_residual": res_max,
        "residual_tolerance": ODE_RESIDUAL_TOL,
        "passed": passed,
    }
    write_json(_out_path(cfg, "profile_summary.json"), summary)
    print(f"profile: alpha = {prof.alpha:.6e}, max |ode residual| = "
          f"{res_max:.3e} -> {'pass' if passed else 'FAIL'}")
    return 0 if passed else 1


def cmd_verify(cfg: RunConfig) -> int:
    fam = build_family(cfg)
    grid = make_radial_grid(cfg.grid_n, cfg.grading)
    ladder = make_time_ladder(cfg.T, cfg.ladder_J)
    checks = []
    fields_to_check = ["v"] if cfg.part == 1 else ["eta", "vbar"]
    for which in fields_to_check:
        checks.append(check_swirl_pde(fam, which, grid, ladder))
    checks.append(check_radial_momentum(fam, "v", grid, ladder))
    if cfg.part == 2:
        checks.append(check_radial_momentum(fam, "vbar", grid, ladder))
    checks.append(check_boundary(fam, make_time_ladder(cfg.T, max(cfg.ladder_J, 20))))
    bounds = [check_bound(fam, "u_upper", grid, ladder),
              check_bound(fam, "grad_u_upper", grid, ladder)]
    if cfg.part == 2:
        bounds.append(check_bound(fam, "phi_lower", grid, ladder))

    report = {"checks": [report_to_dict(c) for c in checks + bounds]}
    report["passed"] = all(c["passed"] for c in report["checks"])
    write_json(_out_path(cfg, "verify_report.json"), report)
    if "csv" in cfg.formats:
        slice_r = grid.nodes[1:-1:max(1, len(grid) // 32)]
        slice_t = ladder.levels[:: max(1, len(ladder) // 6)]
        write_csv(_out_path(cfg, "field_slice.csv"), FIELD_SLICE_HEADER,
                  field_slice_rows(fam, slice_r, slice_t))
    for c in report["checks"]:
        name = c.get("equation", c.get("name"))
        print(f"verify: {name}: {'pass' if c['passed'] else 'FAIL'}")
    return 0 if report["passed"] else 1


def _classification_depth(fam: SolutionFamily, floor: int) -> int:
    # The log-transformed family saturates once sqrt(T - t) falls below the
    # wall constant; the tail fit needs a window of saturated levels.
    alpha = abs(fam.alpha)
    if alpha == 0.0:
        return max(floor, 28)
    depth = int(np.ceil(np.log2(fam.T / alpha**2))) + 14
    return int(np.clip(depth, max(floor, 28), 40))


def cmd_norms(cfg: RunConfig) -> int:
    fam = build_family(cfg)
    ladder = make_time_ladder(cfg.T, max(cfg.ladder_J, 20))
    deep = make_time_ladder(cfg.T, _classification_depth(fam, cfg.ladder_J))
    series = [energy_series(fam, "v", ladder)]
    if cfg.part == 2:
        series.append(energy_series(fam, "vbar", ladder))
    f_deep = l1_series(fam, "f", deep)
    series.append(f_deep)
    classify_targets = {"L1_f": f_deep}
    if cfg.part == 2:
        for q in ("Y1", "Y2", "Y3", "Y4", "Y"):
            s = l1_series(fam, q, deep)
            series.append(s)
            if q == "Y":
                classify_targets["L1_Y"] = s

    if "csv" in cfg.formats:
        for s in series:
            write_csv(_out_path(cfg, f"norms_{s.quantity}.csv"),
                      NORM_SERIES_HEADER, norm_series_rows(s))

    classification = []
    inconclusive = False
    for name, s in classify_targets.items():
        for q in (1.5, 1.9, 2.1, 3.0, 4.0):
            c = classify_LqtL1x(s, q)
            classification.append({
                "series": name, "q": q, "finite": c.finite,
                "estimate": c.estimate if np.isfinite(c.estimate) else None,
                "model": c.model, "tail_exponent": c.tail_exponent,
            })
            inconclusive = inconclusive or c.finite is None
    summary = {
        "ratios": {s.quantity: float(np.max(np.abs(s.ratios))) for s in series},
        "classification": classification,
    }
    write_json(_out_path(cfg, "norms_summary.json"), summary)
    for row in classification:
        verdict = {True: "finite", False: "infinite", None: "inconclusive"}[row["finite"]]
        print(f"norms: {row['series']} q={row['q']}: {verdict} ({row['model']})")
    if inconclusive:
        print("norms: warning: at least one classification was inconclusive")
    return 0


ORACLE_ERROR_BUDGET = 1e-5


def cmd_oracle(cfg: RunConfig) -> int:
    fam = build_family(cfg)
    levels = default_levels(fam, theta=cfg.oracle_theta, base_n=cfg.oracle_n_r,
                            base_steps=cfg.oracle_n_r * 8,
                            n_levels=cfg.oracle_levels)
    run = convergence_study(fam, levels)
    band = (1.7, 2.3) if cfg.oracle_theta == 0.5 else (0.7, 1.3)
    order_ok = band[0] <= run.convergence_order <= band[1]
    passed = (run.study_valid and order_ok
              and run.final_error_Linf < ORACLE_ERROR_BUDGET)

    # Second probe closer to the blow-up time: quarter the cutoff, refine
    # the grid with the shrinking solution scale sqrt(2 delta).
    finest = levels[-1]
    probe_cfg = OracleConfig(
        n_r=2 * finest.n_r - 1,
        dt=(fam.T - fam.T / 32.0) / (8 * (2 * finest.n_r - 1)),
        delta=fam.T / 32.0, theta=cfg.oracle_theta)
    probe = solve_swirl(fam, probe_cfg)

    payload = {
        "theta": cfg.oracle_theta,
        "levels": [{"n_r": l.n_r, "dt": l.dt, "delta": l.delta} for l in levels],
        "errors_Linf": run.errors_per_level,
        "orders": run.orders_per_pair,
        "convergence_order": run.convergence_order,
        "final_error_Linf": run.final_error_Linf,
        "final_error_L2": run.final_error_L2,
        "order_band": band,
        "error_budget": ORACLE_ERROR_BUDGET,
        "study_valid": run.study_valid,
        "near_blowup_probe": {
            "n_r": probe_cfg.n_r, "delta": probe_cfg.delta,
            "error_Linf": probe.error_Linf, "error_L2": probe.error_L2,
        },
        "passed": passed,
    }
    write_json(_out_path(cfg, "oracle_study.json"), payload)
    if "csv" in cfg.formats:
        sol = solve_swirl(fam, levels[-1])
        write_csv(_out_path(cfg, "oracle_trajectory.csv"), TRAJECTORY_HEADER,
                  trajectory_rows(fam, sol))
    print(f"oracle: order = {run.convergence_order:.2f} "
          f"(band {band}), final Linf = {run.final_error_Linf:.3e} "
          f"-> {'pass' if passed else 'FAIL'}")
    return 0 if passed else 1


COMMANDS = {
    "profile": cmd_profile,
    "verify": cmd_verify,
    "norms": cmd_norms,
    "oracle": cmd_oracle,
}


def _parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="axiswirl",
        description="Construct the cylinder blow-up swirl fields and run "
                    "their verification suite.")
    parser.add_argument("command", choices=[*COMMANDS, "all"])
    parser.add_argument("--config", help="flat key = value configuration file")
    parser.add_argument("--part", type=int, choices=(1, 2))
    parser.add_argument("--T", type=float)
    parser.add_argument("--k", dest="k_spec",
                        help="'bump' or path to a two-column (r,k) CSV table")
    parser.add_argument("--grid-n", type=int, dest="grid_n")
    parser.add_argument("--ladder-J", type=int, dest="ladder_J")
    parser.add_argument("--out", dest="out_dir")
    parser.add_argument("--format", dest="formats",
                        help="comma-separated subset of csv,json")
    parser.add_argument("--oracle-n-r", type=int, dest="oracle_n_r")
    parser.add_argument("--oracle-theta", type=float, dest="oracle_theta")
    return parser.parse_args(argv)


def build_run_config(args) -> RunConfig:
    values = {}
    if args.config:
        values.update(load_config(args.config))
    for key in ("part", "T", "k_spec", "grid_n", "ladder_J", "out_dir",
                "oracle_n_r", "oracle_theta"):
        val = getattr(args, key, None)
        if val is not None:
            values[key] = val
    if getattr(args, "formats", None):
        values["formats"] = tuple(v.strip() for v in args.formats.split(","))
    if "OUT_DIR" in os.environ:
        values["out_dir"] = os.environ["OUT_DIR"]
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    args = _parse_args(argv if argv is not None else sys.argv[1:])
    try:
        cfg = build_run_config(args)
    except (ConfigError, TypeError) as exc:
        print(f"axiswirl: configuration error: {exc}", file=sys.stderr)
        return 2

    commands = list(COMMANDS) if args.command == "all" else [args.command]
    status = 0
    summary = {"command": args.command, "results": {}}
    try:
        for command in commands:
            write_manifest(cfg, command)
            rc = COMMANDS[command](cfg)
            summary["results"][command] = rc
            status = max(status, rc)
    except ConfigError as exc:
        print(f"axiswirl: {exc}", file=sys.stderr)
        summary["error"] = str(exc)
        status = 2
    except AxiswirlError as exc:
        print(f"axiswirl: {exc}", file=sys.stderr)
        summary["error"] = str(exc)
        status = 1
    except OSError as exc:
        print(f"axiswirl: i/o failure: {exc}", file=sys.stderr)
        summary["error"] = str(exc)
        status = 2
    summary["exit_status"] = status
    try:
        write_json(_out_path(cfg, "run_summary.json"), summary)
    except OSError as exc:
        print(f"axiswirl: could not write summary: {exc}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
