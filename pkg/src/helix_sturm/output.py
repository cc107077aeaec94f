"""CSV tables, run manifests and optional SVG plots.

Floats are written with ``repr``, the shortest string that round-trips to
the same double, so identical results give byte-identical files.  Column
layouts are fixed per table kind and versioned by ``CSV_SCHEMA_VERSION``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import platform
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .model import v_eff

CSV_SCHEMA_VERSION = 1

COLUMNS = {
    "spectrum": ("n_r", "lambda", "energy"),
    "scan": ("axis_value", "m", "n_r", "lambda", "energy", "converged", "status"),
    "density": ("r", "rho", "n_r", "omega"),
    "converge": (
        "n_r",
        "lambda",
        "shift_refined_grid",
        "shift_enlarged_domain",
        "shift_reduced_cutoff",
        "estimated_order",
        "converged",
    ),
    "potential": ("r", "m", "v_eff"),
}


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def table_text(kind: str, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS[kind])
    for row in rows:
        if len(row) != len(COLUMNS[kind]):
            raise ValueError(f"{kind} row has {len(row)} fields, expected {len(COLUMNS[kind])}")
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


# --------------------------------------------------------------------------
# row builders
# --------------------------------------------------------------------------


def spectrum_rows(spectrum):
    return [(n, spectrum.lambdas[n], spectrum.energies[n]) for n in range(spectrum.levels)]


def scan_rows(result):
    return [(r.axis_value, r.m, r.n_r, r.lam, r.energy, r.converged, r.status) for r in result.rows]


def density_rows(result):
    rows = []
    for c in result.curves:
        rows.extend((r, rho, c.n_r, c.omega) for r, rho in zip(c.r, c.rho))
    return rows


def converge_rows(report):
    lam = report.baseline.lambdas
    return [
        (
            n,
            lam[n],
            report.refined_grid[n],
            report.enlarged_domain[n],
            report.reduced_cutoff[n],
            report.estimated_order[n],
            report.converged[n],
        )
        for n in range(len(lam))
    ]


def potential_rows(spec, m_set, window):
    """V_eff on an evenly spaced window for each m (energy units)."""
    r_lo, r_hi, points = window
    r = np.linspace(r_lo, r_hi, points)
    rows = []
    for m in m_set:
        s = spec.replace(m=int(m))
        if s.u_override is not None:
            v = s.params.kinetic_scale * s.u_override(r)
        else:
            v = v_eff(r, s.params, s.m, s.model)
        rows.extend((ri, int(m), vi) for ri, vi in zip(r, v))
    return rows


# --------------------------------------------------------------------------
# files
# --------------------------------------------------------------------------


def write_table(path: Path, kind: str, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(table_text(kind, rows), encoding="utf-8")
    return path


def read_table(path: Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def versions() -> dict:
    import scipy

    return {
        "helix_sturm": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def build_manifest(command: str, config, files, extra: dict | None = None) -> dict:
    grid = config.grid
    manifest = {
        "csv_schema_version": CSV_SCHEMA_VERSION,
        "command": command,
        "config": config.to_dict(),
        "grid": {"r_min": grid.r_min, "r_max": grid.r_max, "N": grid.n_intervals, "dr": grid.dr},
        "tolerances": {
            "tol_lambda": config.tol_lambda,
            "tol_residual": config.tol_residual,
            "tol_rel": config.tol_rel,
            "delta_rmax": config.delta_rmax,
        },
        "files": {name: list(COLUMNS[kind]) for name, kind in files},
        "versions": versions(),
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    manifest.update(extra or {})
    return _json_safe(manifest)


def write_manifest(path: Path, manifest: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, allow_nan=False) + "\n", encoding="utf-8")
    return path


# --------------------------------------------------------------------------
# plots (read back from the CSV files)
# --------------------------------------------------------------------------


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "helix-sturm"
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})


def plot_csv(kind: str, csv_path: Path, svg_path: Path, xlabel: str = "") -> Path | None:
    """Line plot of a written table; returns None for kinds without a plot."""
    rows = read_table(csv_path)
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    if kind == "scan":
        series = {}
        for row in rows:
            if row["status"] == "ok":
                series.setdefault((int(row["m"]), int(row["n_r"])), []).append(
                    (float(row["axis_value"]), float(row["energy"]))
                )
        for (m, n), pts in sorted(series.items()):
            x, y = zip(*pts)
            ax.plot(x, y, marker="o", ms=3, label=f"m={m}, n_r={n}")
        ax.set_xlabel(xlabel or "axis value")
        ax.set_ylabel("E")
    elif kind == "density":
        series = {}
        for row in rows:
            series.setdefault((float(row["omega"]), int(row["n_r"])), []).append((float(row["r"]), float(row["rho"])))
        for (w, n), pts in sorted(series.items()):
            x, y = zip(*pts)
            ax.plot(x, y, label=f"omega={w:g}, n_r={n}")
        ax.set_xlabel("r")
        ax.set_ylabel("rho")
    elif kind == "potential":
        series = {}
        for row in rows:
            series.setdefault(int(row["m"]), []).append((float(row["r"]), float(row["v_eff"])))
        for m, pts in sorted(series.items()):
            x, y = zip(*pts)
            ax.plot(x, y, label=f"m={m}")
        ax.set_xlabel("r")
        ax.set_ylabel("V_eff")
    else:
        plt.close(fig)
        return None
    ax.legend(fontsize=7)
    fig.tight_layout()
    svg_path = Path(svg_path)
    _save(fig, svg_path)
    plt.close(fig)
    return svg_path
