"""Named parameter sets reproducing the published spectral and density figures.

Each preset is a partial config document (same schema as user configs) plus
the task it runs by default.  Preset grids were chosen with the convergence
protocol: ``r_min = 1e-4`` and ``N = 16000`` on ``[r_min, 20]`` hold the m = +-1
levels stable to 1e-6 under all three perturbations.
"""

from __future__ import annotations

import copy

GAUGE_ON = {"hbar": 1.0, "mu": 1.0, "e": 1.0, "k": 1.0, "omega": 1.0, "B0": 0.5, "PhiB": 0.5}
PRESET_GRID = {"r_min": 1e-4, "r_max": 20.0, "n_intervals": 16000}

CORNELL = {"type": "cornell", "a": 1.0, "b": 0.02}
KRATZER = {"type": "kratzer", "A": 1.0, "D": 1.0}
MORSE_CAPTION = {"type": "morse_small", "D": 1.0, "a": 0.30, "r0": 5.0}

OMEGAS = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0]
M_RANGE = list(range(-5, 6))
DENSITY = {"omegas": [0.5, 1.0, 2.0], "n_r": [0, 1, 2]}
POTENTIAL_WINDOW = {"r_min": 0.2, "r_max": 15.0, "points": 300}


def _spectrum(model, parameter, values, m_set=(-1, 0, 1), levels=3, **physics):
    return {
        "task": "scan",
        "physics": {**GAUGE_ON, **physics},
        "model": model,
        "m_set": list(m_set),
        "levels": levels,
        "grid": dict(PRESET_GRID),
        "scan": {"parameter": parameter, "values": list(values)},
        "check_convergence": True,
    }


def _density(model, m, **physics):
    return {
        "task": "density",
        "physics": {**GAUGE_ON, **physics},
        "model": model,
        "m": m,
        "grid": dict(PRESET_GRID),
        "density": copy.deepcopy(DENSITY),
    }


def _potential(model):
    return {
        "task": "potential",
        "physics": dict(GAUGE_ON),
        "model": model,
        "m_set": [-1, 0, 1],
        "grid": dict(PRESET_GRID),
        "potential": dict(POTENTIAL_WINDOW),
    }


PRESETS: dict[str, dict] = {
    # no external potential
    "fig2": _spectrum("free", "omega", OMEGAS),
    "fig3": _spectrum("free", "m", M_RANGE, levels=6),
    "fig4": _density("free", m=-1),
    # Cornell
    "fig5": _potential(CORNELL),
    "fig6": _spectrum(CORNELL, "cornell_a", [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0]),
    "fig7": _spectrum(CORNELL, "cornell_b", [0.0, 0.02, 0.04, 0.06, 0.08]),
    "fig8": _density(CORNELL, m=1),
    # Kratzer
    # the A axis runs past 2 so the minimum of each branch (A ~ 3-5) is visible
    "fig9": _spectrum(KRATZER, "kratzer_A", [0.25 * i for i in range(1, 25)]),
    "fig10": _spectrum(KRATZER, "kratzer_D", [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0]),
    "fig11": _density(KRATZER, m=1),
    # Morse, small-oscillation form
    "fig12": _spectrum(
        {"type": "morse_small", "D": 1.0, "a": 0.2, "r0": 5.0}, "morse_r0", [2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]
    ),
    "fig13": _spectrum(
        {"type": "morse_small", "D": 1.0, "a": 0.3, "r0": 5.0}, "morse_a", [0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5]
    ),
    "fig14": _spectrum(MORSE_CAPTION, "omega", OMEGAS),
    "fig15": _density(MORSE_CAPTION, m=1),
    # companion sweeps and potential profiles
    "free_potential": _potential("free"),
    "kratzer_potential": _potential(KRATZER),
    "morse_potential": _potential(MORSE_CAPTION),
    "cornell_m": _spectrum(CORNELL, "m", M_RANGE, levels=6),
    "cornell_omega": _spectrum(CORNELL, "omega", OMEGAS),
    "kratzer_omega": _spectrum(KRATZER, "omega", OMEGAS),
    "morse_m": _spectrum({"type": "morse_small", "D": 1.0, "a": 0.2, "r0": 10.0}, "m", M_RANGE, levels=6),
}


def preset_names() -> list[str]:
    return list(PRESETS)


def get_preset(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None
