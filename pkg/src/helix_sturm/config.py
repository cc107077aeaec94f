"""Run configuration: JSON documents validated against ``config_schema.json``.

A document may name a ``preset``; the preset is merged underneath and the
document's own keys win.  After validation every default is filled in, so
``RunConfig.to_dict()`` is the complete recipe for a run and parses back to
an equal ``RunConfig``.
"""

from __future__ import annotations

import copy
import dataclasses
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import jsonschema

from .discretize import RadialGrid
from .exceptions import HelixSturmError, SchemaError
from .expression import PotentialExpression
from .model import MODEL_TYPES, PhysicalParams, PotentialModel, make_model
from .presets import PRESETS, get_preset
from .scan import ScanAxis, default_workers
from .solve import ProblemSpec

TASKS = ("solve", "scan", "density", "converge", "potential")

DEFAULTS = {
    "preset": None,
    "task": None,
    "physics": {"hbar": 1.0, "mu": 1.0, "e": 1.0, "k": 1.0, "omega": 1.0, "B0": 0.0, "PhiB": 0.0},
    "model": {"type": "free"},
    "m": 0,
    "m_set": [-1, 0, 1],
    "levels": 3,
    "grid": {"r_min": 1e-3, "r_max": 20.0, "n_intervals": 4000},
    "tolerances": {"tol_lambda": 1e-10, "tol_residual": 1e-8, "tol_rel": 1e-6, "delta_rmax": None},
    "scan": None,
    "density": {"omegas": [0.5, 1.0, 2.0], "n_r": [0, 1, 2]},
    "potential": {"r_min": 0.2, "r_max": 15.0, "points": 300},
    "check_convergence": False,
    "u_override": None,
    "output": {"dir": "helix_sturm_out", "plots": False},
    "workers": None,
    "strict": False,
}

_REASONS = {
    "exclusiveMinimum": lambda e: f"must be > {e.validator_value} (positivity rule), got {e.instance!r}",
    "minimum": lambda e: f"must be >= {e.validator_value}, got {e.instance!r}",
    "additionalProperties": lambda e: e.message,
    "enum": lambda e: f"must be one of {e.validator_value}, got {e.instance!r}",
}


@lru_cache(maxsize=1)
def config_schema() -> dict:
    text = resources.files(__package__).joinpath("config_schema.json").read_text()
    return json.loads(text)


def _path(parts) -> str:
    return ".".join(str(p) for p in parts) or "<root>"


def reject_constant(name):
    raise SchemaError("<document>", f"non-finite number {name} is not allowed")


def _model_dict(value):
    return {"type": value} if isinstance(value, str) else value


def _deep_merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if key == "model":
            old, new = _model_dict(out.get(key)), _model_dict(value)
            # parameters only carry over within the same model type
            out[key] = _deep_merge(old, new) if old and old.get("type") == new.get("type") else copy.deepcopy(new)
            continue
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _validate(doc: dict, where: str = ""):
    validator = jsonschema.Draft202012Validator(config_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if not errors:
        return
    err = errors[0]
    if err.validator == "oneOf" and err.context:
        # report the branch that got furthest into the document
        err = max(err.context, key=lambda e: len(e.absolute_path))
    reason = _REASONS.get(err.validator, lambda e: e.message)(err)
    raise SchemaError(where + _path(err.absolute_path), reason)


@dataclass(frozen=True)
class RunConfig:
    """A fully materialized, validated run description."""

    params: PhysicalParams
    model: PotentialModel
    m: int
    m_set: tuple
    levels: int
    grid: RadialGrid
    tol_lambda: float
    tol_residual: float
    tol_rel: float
    delta_rmax: float
    scan: ScanAxis | None
    density_omegas: tuple
    density_n_r: tuple
    potential_window: tuple
    check_convergence: bool
    u_override: str | None
    output_dir: str
    plots: bool
    workers: int
    strict: bool
    task: str | None = None
    preset: str | None = None

    def problem_spec(self, levels: int | None = None) -> ProblemSpec:
        override = PotentialExpression(self.u_override) if self.u_override is not None else None
        return ProblemSpec(
            params=self.params,
            m=self.m,
            model=self.model,
            grid=self.grid,
            levels=self.levels if levels is None else levels,
            tol_lambda=self.tol_lambda,
            tol_residual=self.tol_residual,
            u_override=override,
        )

    def to_dict(self) -> dict:
        r_lo, r_hi, points = self.potential_window
        return {
            "preset": self.preset,
            "task": self.task,
            "physics": {f: getattr(self.params, f) for f in DEFAULTS["physics"]},
            "model": self.model.as_dict(),
            "m": self.m,
            "m_set": list(self.m_set),
            "levels": self.levels,
            "grid": self.grid.as_dict(),
            "tolerances": {
                "tol_lambda": self.tol_lambda,
                "tol_residual": self.tol_residual,
                "tol_rel": self.tol_rel,
                "delta_rmax": self.delta_rmax,
            },
            "scan": None if self.scan is None else {"parameter": self.scan.parameter, "values": list(self.scan.values)},
            "density": {"omegas": list(self.density_omegas), "n_r": list(self.density_n_r)},
            "potential": {"r_min": r_lo, "r_max": r_hi, "points": points},
            "check_convergence": self.check_convergence,
            "u_override": self.u_override,
            "output": {"dir": self.output_dir, "plots": self.plots},
            "workers": self.workers,
            "strict": self.strict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)


def _build(section: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (HelixSturmError, ValueError, TypeError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(section, str(exc)) from None


def _materialize(doc: dict) -> RunConfig:
    phys = doc["physics"]
    params = _build("physics", PhysicalParams, **{k: float(v) for k, v in phys.items()})

    model_doc = doc["model"]
    if isinstance(model_doc, str):
        model_doc = {"type": model_doc}
    kind = model_doc["type"]
    fields = {k: float(v) for k, v in model_doc.items() if k != "type"}
    allowed = [f.name for f in dataclasses.fields(MODEL_TYPES[kind])]
    for name in fields:
        if name not in allowed:
            raise SchemaError(f"model.{name}", f"not a parameter of model {kind!r}")
    model = _build("model", make_model, kind, **fields)

    g = doc["grid"]
    if not g["r_max"] > g["r_min"]:
        raise SchemaError("grid.r_max", f"must be > grid.r_min ({g['r_min']!r}), got {g['r_max']!r}")
    grid = _build("grid", RadialGrid, float(g["r_min"]), float(g["r_max"]), int(g["n_intervals"]))

    levels = int(doc["levels"])
    if levels > grid.dimension:
        raise SchemaError("levels", f"must be <= operator dimension {grid.dimension}, got {levels}")

    tol = doc["tolerances"]
    delta = tol["delta_rmax"]
    delta = 0.25 * (grid.r_max - grid.r_min) if delta is None else float(delta)

    scan = None
    if doc["scan"] is not None:
        scan = _build("scan.values", ScanAxis, doc["scan"]["parameter"], tuple(doc["scan"]["values"]))
        if scan.parameter not in ("m", "omega", "B0", "PhiB") and not scan.parameter.startswith(model.prefix + "_"):
            raise SchemaError("scan.parameter", f"{scan.parameter!r} does not belong to model {model.kind!r}")

    pot = doc["potential"]
    if not pot["r_max"] > pot["r_min"]:
        raise SchemaError("potential.r_max", f"must be > potential.r_min ({pot['r_min']!r})")

    if doc["u_override"] is not None:
        _build("u_override", PotentialExpression, doc["u_override"])

    workers = doc["workers"]
    if workers is None:
        workers = _build("workers", default_workers)

    return RunConfig(
        params=params,
        model=model,
        m=int(doc["m"]),
        m_set=tuple(int(m) for m in doc["m_set"]),
        levels=levels,
        grid=grid,
        tol_lambda=float(tol["tol_lambda"]),
        tol_residual=float(tol["tol_residual"]),
        tol_rel=float(tol["tol_rel"]),
        delta_rmax=delta,
        scan=scan,
        density_omegas=tuple(float(w) for w in doc["density"]["omegas"]),
        density_n_r=tuple(int(n) for n in doc["density"]["n_r"]),
        potential_window=(float(pot["r_min"]), float(pot["r_max"]), int(pot["points"])),
        check_convergence=bool(doc["check_convergence"]),
        u_override=doc["u_override"],
        output_dir=doc["output"]["dir"],
        plots=bool(doc["output"]["plots"]),
        workers=int(workers),
        strict=bool(doc["strict"]),
        task=doc["task"],
        preset=doc["preset"],
    )


def config_from_dict(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise SchemaError("<root>", f"config must be an object, got {type(doc).__name__}")
    _validate(doc)
    merged = DEFAULTS
    name = doc.get("preset")
    if name is not None:
        if name not in PRESETS:
            raise SchemaError("preset", f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
        merged = _deep_merge(merged, get_preset(name))
    merged = _deep_merge(merged, doc)
    _validate(merged, where="")
    return _materialize(merged)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON config document.

    Raises ``SchemaError(path, reason)`` for malformed JSON, unknown keys,
    wrong types and range violations.
    """
    try:
        doc = json.loads(text, parse_constant=reject_constant)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"<document>:{exc.lineno}:{exc.colno}", exc.msg) from None
    return config_from_dict(doc)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def preset_config(name: str, **overrides) -> RunConfig:
    return config_from_dict({"preset": name, **overrides})
