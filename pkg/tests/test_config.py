import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helix_sturm.config import DEFAULTS, config_schema, parse_config, preset_config
from helix_sturm.exceptions import SchemaError
from helix_sturm.model import Cornell, Free, Kratzer, MorseSmall, PhysicalParams
from helix_sturm.presets import PRESETS
from helix_sturm.scan import WORKERS_ENV


def test_minimal_config_materializes_defaults(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)
    cfg = parse_config('{"model": "free", "m": 0}')
    assert cfg.params == PhysicalParams(1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0)
    assert cfg.model == Free()
    assert cfg.grid.as_dict() == DEFAULTS["grid"]
    assert cfg.delta_rmax == pytest.approx(0.25 * (20.0 - 1e-3))
    assert cfg.workers == 1
    echoed = cfg.to_dict()
    assert echoed["tolerances"]["delta_rmax"] is not None
    assert set(echoed) == set(DEFAULTS)


def test_r_min_zero_cites_positivity():
    with pytest.raises(SchemaError) as info:
        parse_config('{"grid": {"r_min": 0}}')
    assert info.value.path == "grid.r_min"
    assert "positivity" in info.value.reason


def test_fig2_preset():
    cfg = parse_config('{"preset": "fig2"}')
    p = cfg.params
    assert (p.hbar, p.mu, p.e, p.k) == (1.0, 1.0, 1.0, 1.0)
    assert (p.B0, p.PhiB) == (0.5, 0.5)
    assert cfg.model == Free()
    assert cfg.m_set == (-1, 0, 1)
    assert cfg.scan.parameter == "omega"
    assert cfg.task == "scan"


@pytest.mark.parametrize(
    "name,model,axis",
    [
        ("fig7", Cornell(1.0, 0.02), "cornell_b"),
        ("fig9", Kratzer(1.0, 1.0), "kratzer_A"),
        ("fig12", MorseSmall(1.0, 0.2, 5.0), "morse_r0"),
        ("fig13", MorseSmall(1.0, 0.3, 5.0), "morse_a"),
        ("fig14", MorseSmall(1.0, 0.3, 5.0), "omega"),
        ("morse_m", MorseSmall(1.0, 0.2, 10.0), "m"),
    ],
)
def test_caption_presets(name, model, axis):
    cfg = preset_config(name)
    assert cfg.model == model
    assert cfg.scan.parameter == axis


def test_fig7_axis_range():
    assert preset_config("fig7").scan.values == (0.0, 0.02, 0.04, 0.06, 0.08)


@pytest.mark.parametrize("name", list(PRESETS))
def test_every_preset_round_trips(name):
    cfg = preset_config(name)
    assert parse_config(cfg.to_json()) == cfg


def test_user_keys_override_preset():
    cfg = parse_config('{"preset": "fig7", "physics": {"B0": 0.1}, "grid": {"n_intervals": 2000}}')
    assert cfg.params.B0 == 0.1 and cfg.params.PhiB == 0.5
    assert cfg.grid.n_intervals == 2000 and cfg.grid.r_min == 1e-4


def test_switching_model_drops_preset_coefficients():
    cfg = parse_config('{"preset": "fig5", "model": {"type": "kratzer", "A": 2.0}}')
    assert cfg.model == Kratzer(2.0, 1.0)


@pytest.mark.parametrize(
    "doc,path",
    [
        ({"foo": 1}, "<root>"),
        ({"physics": {"hbar": 0}}, "physics.hbar"),
        ({"physics": {"spin": 1}}, "physics"),
        ({"model": {"type": "kratzer", "A": -1}}, "model.A"),
        ({"model": {"type": "cornell", "A": 1}}, "model.A"),
        ({"model": "nope"}, "model"),
        ({"grid": {"r_min": 2.0, "r_max": 1.0}}, "grid.r_max"),
        ({"grid": {"n_intervals": 2}}, "grid.n_intervals"),
        ({"levels": 0}, "levels"),
        ({"grid": {"n_intervals": 10}, "levels": 10}, "levels"),
        ({"m": 1.5}, "m"),
        ({"scan": {"parameter": "omega", "values": [2, 1]}}, "scan.values"),
        ({"scan": {"parameter": "kratzer_A", "values": [1]}}, "scan.parameter"),
        ({"u_override": "__import__('os')"}, "u_override"),
        ({"preset": "fig99"}, "preset"),
        ({"workers": 0}, "workers"),
        ({"tolerances": {"tol_rel": -1}}, "tolerances.tol_rel"),
    ],
)
def test_schema_errors_carry_the_key_path(doc, path):
    with pytest.raises(SchemaError) as info:
        parse_config(json.dumps(doc))
    assert info.value.path == path


@pytest.mark.parametrize("text", ["{", "[1, 2]", '{"grid": {"r_min": NaN}}', '{"m": Infinity}'])
def test_malformed_documents(text):
    with pytest.raises(SchemaError):
        parse_config(text)


def test_schema_is_valid_json_schema():
    import jsonschema

    jsonschema.Draft202012Validator.check_schema(config_schema())


physics = st.fixed_dictionaries(
    {},
    optional={
        "hbar": st.floats(0.1, 5.0),
        "mu": st.floats(0.1, 5.0),
        "e": st.floats(-2.0, 2.0),
        "omega": st.floats(0.0, 3.0),
        "B0": st.floats(-1.0, 1.0),
        "PhiB": st.floats(-1.0, 1.0),
    },
)
models = st.one_of(
    st.just("free"),
    st.builds(lambda a, b: {"type": "cornell", "a": a, "b": b}, st.floats(-2, 2), st.floats(0, 0.1)),
    st.builds(lambda A, D: {"type": "kratzer", "A": A, "D": D}, st.floats(0.1, 3), st.floats(0.1, 3)),
    st.builds(
        lambda D, a, r0: {"type": "morse_small", "D": D, "a": a, "r0": r0},
        st.floats(0.1, 3),
        st.floats(0.05, 1),
        st.floats(0.5, 10),
    ),
)
grids = st.builds(
    lambda lo, span, n: {"r_min": lo, "r_max": lo + span, "n_intervals": n},
    st.floats(1e-6, 1.0),
    st.floats(1.0, 100.0),
    st.integers(10, 100000),
)


@settings(max_examples=60, deadline=None)
@given(
    phys=physics,
    model=models,
    grid=grids,
    m=st.integers(-10, 10),
    levels=st.integers(1, 6),
    preset=st.one_of(st.none(), st.sampled_from(["fig2", "fig4", "fig5"])),
    omegas=st.lists(st.floats(0.0, 3.0), min_size=1, max_size=4),
    strict=st.booleans(),
)
def test_parse_emit_round_trip(phys, model, grid, m, levels, preset, omegas, strict):
    doc = {
        "physics": phys,
        "model": model,
        "grid": grid,
        "m": m,
        "levels": levels,
        "density": {"omegas": omegas},
        "strict": strict,
        "workers": 2,
    }
    if preset:
        doc["preset"] = preset
    cfg = parse_config(json.dumps(doc))
    again = parse_config(cfg.to_json())
    assert again == cfg
    assert again.to_dict() == cfg.to_dict()
