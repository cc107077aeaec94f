"""Command-line entry point: ``helix-sturm <solve|scan|density|converge|preset>``.

Exit status: 0 on success, 1 on a pipeline failure (or, with ``--strict``,
on any failed or unconverged point), 2 on a configuration error.  Data goes
to files under ``--out``; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import output
from .config import RunConfig, config_from_dict, reject_constant
from .exceptions import HelixSturmError, SchemaError
from .presets import PRESETS
from .scan import scan_density, scan_spectrum
from .solve import converge, solve_bound_states

log = logging.getLogger("helix_sturm")

COMMANDS = ("solve", "scan", "density", "converge", "preset")
EXIT_OK, EXIT_FAILURE, EXIT_CONFIG = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helix-sturm",
        description="Bound states of the radial problem in a twisted background with magnetic and AB flux.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument(
        "target",
        nargs="*",
        help="for 'preset': the preset name; for other commands optionally 'preset NAME'",
    )
    parser.add_argument("--config", type=Path, help="JSON config document")
    parser.add_argument("--preset", help="named parameter set merged under the config")
    parser.add_argument("--out", type=Path, help="output directory (overrides output.dir)")
    parser.add_argument("--workers", type=int, help="scan worker processes (overrides config and environment)")
    parser.add_argument("--strict", action="store_true", help="exit 1 if any point fails or is unconverged")
    parser.add_argument("--plots", action="store_true", help="also write SVG plots")
    parser.add_argument("--list", action="store_true", help="with 'preset': list preset names and exit")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _resolve_preset(args) -> str | None:
    names = [args.preset] if args.preset else []
    if args.command == "preset":
        if len(args.target) != 1:
            raise SchemaError("preset", "expected exactly one preset name")
        names.append(args.target[0])
    elif args.target:
        if len(args.target) != 2 or args.target[0] != "preset":
            raise SchemaError("<command line>", f"unexpected arguments {args.target}; use 'preset NAME'")
        names.append(args.target[1])
    if len(set(names)) > 1:
        raise SchemaError("preset", f"conflicting presets {names}")
    return names[0] if names else None


def load_run_config(args) -> RunConfig:
    doc = {}
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            raise SchemaError(str(args.config), exc.strerror or str(exc)) from None
        try:
            doc = json.loads(text, parse_constant=reject_constant)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{args.config}:{exc.lineno}:{exc.colno}", exc.msg) from None
        if not isinstance(doc, dict):
            raise SchemaError("<root>", "config must be a JSON object")
    preset = _resolve_preset(args)
    if preset is not None:
        doc["preset"] = preset
    if args.workers is not None:
        doc["workers"] = args.workers
    if args.strict:
        doc["strict"] = True
    if args.out is not None or args.plots:
        out = dict(doc.get("output", {}))
        if args.out is not None:
            out["dir"] = str(args.out)
        if args.plots:
            out["plots"] = True
        doc["output"] = out
    return config_from_dict(doc)


# --------------------------------------------------------------------------
# tasks; each returns (files, manifest extras, failure count)
# --------------------------------------------------------------------------


def _task_solve(cfg: RunConfig, out: Path):
    spectrum = solve_bound_states(cfg.problem_spec())
    output.write_table(out / "spectrum.csv", "spectrum", output.spectrum_rows(spectrum))
    files = [("spectrum.csv", "spectrum")]
    extra = {
        "m": cfg.m,
        "node_counts": spectrum.node_counts(),
        "max_residual": spectrum.provenance["max_residual"],
    }
    for n, (lam, e) in enumerate(zip(spectrum.lambdas, spectrum.energies)):
        log.info("n_r=%d lambda=%r energy=%r", n, float(lam), float(e))
    return files, extra, 0


def _task_converge(cfg: RunConfig, out: Path):
    report = converge(cfg.problem_spec(), cfg.tol_rel, cfg.delta_rmax)
    output.write_table(out / "converge.csv", "converge", output.converge_rows(report))
    extra = {
        "m": cfg.m,
        "convergence": {
            "converged": report.converged,
            "all_converged": report.all_converged,
            "estimated_order": report.estimated_order,
            "variants": report.variants,
        },
    }
    for n, ok in enumerate(report.converged):
        if not ok:
            log.warning("level n_r=%d did not pass all stability checks at tol_rel=%g", n, cfg.tol_rel)
    return [("converge.csv", "converge")], extra, int(np.sum(~report.converged))


def _task_scan(cfg: RunConfig, out: Path):
    if cfg.scan is None:
        raise SchemaError("scan", "the scan task needs a 'scan' section with parameter and values")
    result = scan_spectrum(
        cfg.problem_spec(),
        cfg.scan,
        m_set=cfg.m_set,
        levels=cfg.levels,
        check_convergence=cfg.check_convergence,
        tol_rel=cfg.tol_rel,
        delta_rmax=cfg.delta_rmax,
        workers=cfg.workers,
    )
    output.write_table(out / "scan.csv", "scan", output.scan_rows(result))
    unconverged = [r for r in result.rows if r.ok and r.converged is False]
    for row in result.failures:
        log.warning("%s=%r m=%d n_r=%d: %s", cfg.scan.parameter, row.axis_value, row.m, row.n_r, row.status)
    if unconverged:
        log.warning("%d scan rows did not pass the convergence checks", len(unconverged))
    extra = {
        "axis": cfg.scan.parameter,
        "convergence": {
            "checked": cfg.check_convergence,
            "unconverged_rows": len(unconverged),
        },
        "failed_rows": len(result.failures),
    }
    return [("scan.csv", "scan")], extra, len(result.failures) + len(unconverged)


def _task_density(cfg: RunConfig, out: Path):
    result = scan_density(cfg.problem_spec(), cfg.density_omegas, cfg.density_n_r, workers=cfg.workers)
    output.write_table(out / "density.csv", "density", output.density_rows(result))
    for c in result.failures:
        log.warning("omega=%r n_r=%d: %s", c.omega, c.n_r, c.status)
    extra = {
        "m": cfg.m,
        "curves": [
            {"omega": c.omega, "n_r": c.n_r, "norm": c.norm, "nodes": c.nodes, "status": c.status}
            for c in result.curves
        ],
    }
    return [("density.csv", "density")], extra, len(result.failures)


def _task_potential(cfg: RunConfig, out: Path):
    rows = output.potential_rows(cfg.problem_spec(), cfg.m_set, cfg.potential_window)
    output.write_table(out / "potential.csv", "potential", rows)
    return [("potential.csv", "potential")], {"m_set": list(cfg.m_set)}, 0


TASKS = {
    "solve": _task_solve,
    "converge": _task_converge,
    "scan": _task_scan,
    "density": _task_density,
    "potential": _task_potential,
}


def run(command: str, cfg: RunConfig) -> int:
    """Execute one command with a validated config; returns the exit status."""
    task = cfg.task if command == "preset" else command
    if task is None:
        raise SchemaError("task", "no task given by the command or the config")
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    files, extra, failures = TASKS[task](cfg, out)
    extra = {"task": task, "failures": failures, **extra}
    if cfg.plots:
        xlabel = cfg.scan.parameter if (task == "scan" and cfg.scan) else ""
        for name, kind in files:
            svg = output.plot_csv(kind, out / name, out / (Path(name).stem + ".svg"), xlabel)
            if svg is not None:
                log.info("wrote %s", svg)
    output.write_manifest(out / "manifest.json", output.build_manifest(command, cfg, files, extra))
    log.info("wrote %s", ", ".join(name for name, _ in files) + ", manifest.json")
    if failures and cfg.strict:
        log.error("%d failed or unconverged points (strict mode)", failures)
        return EXIT_FAILURE
    return EXIT_OK


def _configure_logging(verbose: bool):
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("helix-sturm: %(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    if args.command == "preset" and args.list:
        for name in PRESETS:
            print(f"{name}\t{PRESETS[name]['task']}")
        return EXIT_OK
    try:
        cfg = load_run_config(args)
    except SchemaError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    try:
        return run(args.command, cfg)
    except SchemaError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (HelixSturmError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
