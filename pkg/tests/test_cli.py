"""Config parsing, experiment runner, CSV/SVG emission, exit codes."""

import math
import os

import numpy as np
import pytest
import yaml

from gausshom import cli
from gausshom.cli import (
    ConfigError,
    RunConfig,
    load_run_config,
    main,
    parse_quantity,
    parse_run_config,
    svg_plot,
)

TINY_POWER_SWEEP = {
    "experiment": "power_sweep",
    "detector": "pnr",
    "output_prefix": "tiny",
    "source": {
        "variant": "gaussian",
        "xi": 0.1,
        "bandwidth": "1e11 rad/s",
    },
    "grid": {"n_bins": 1, "step": "1e10 rad/s"},
    "sweep": {"axis": "xi", "values": [0.1, 0.3]},
}


def write_config(tmp_path, doc, name="config.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(doc))
    return str(path)


def test_parse_quantity_units():
    assert parse_quantity("0.1 THz", "frequency", "f") == pytest.approx(
        2 * math.pi * 1e11)
    assert parse_quantity("2.5e11 rad/s", "frequency", "f") == pytest.approx(2.5e11)
    assert parse_quantity("29 ps", "time", "t") == pytest.approx(29e-12)
    assert parse_quantity(0, "time", "t") == 0.0


def test_parse_quantity_rejects_bare_and_bad_units():
    with pytest.raises(ConfigError, match="unit suffix"):
        parse_quantity(1.5, "frequency", "f")
    with pytest.raises(ConfigError, match="NUMBER UNIT"):
        parse_quantity("1.5 parsec", "frequency", "f")
    with pytest.raises(ConfigError, match="NUMBER UNIT"):
        parse_quantity("fast", "time", "t")
    with pytest.raises(ConfigError):
        parse_quantity("one THz", "frequency", "f")


def test_unknown_keys_rejected():
    doc = dict(TINY_POWER_SWEEP)
    doc["surprise"] = 1
    with pytest.raises(ConfigError, match="surprise"):
        parse_run_config(doc)
    nested = dict(TINY_POWER_SWEEP)
    nested["source"] = dict(nested["source"], color="blue")
    with pytest.raises(ConfigError, match="source.color"):
        parse_run_config(nested)


def test_missing_required_keys_named():
    with pytest.raises(ConfigError, match="experiment"):
        parse_run_config({"source": {}})
    doc = {k: v for k, v in TINY_POWER_SWEEP.items() if k != "sweep"}
    with pytest.raises(ConfigError, match="sweep"):
        parse_run_config(doc)
    doc = {k: v for k, v in TINY_POWER_SWEEP.items() if k != "source"}
    with pytest.raises(ConfigError, match="source"):
        parse_run_config(doc)


def test_sweep_axis_must_match_experiment():
    doc = dict(TINY_POWER_SWEEP)
    doc["sweep"] = {"axis": "delay", "values": ["1 ps"]}
    with pytest.raises(ConfigError, match="sweeps 'xi'"):
        parse_run_config(doc)


def test_sweep_linspace_form():
    doc = dict(TINY_POWER_SWEEP)
    doc["sweep"] = {"start": 0.1, "stop": 0.5, "count": 5}
    rc = parse_run_config(doc)
    np.testing.assert_allclose(rc.values, np.linspace(0.1, 0.5, 5))


def test_delay_sweep_values_carry_units():
    doc = {
        "experiment": "hom_delay_sweep",
        "source": TINY_POWER_SWEEP["source"],
        "grid": TINY_POWER_SWEEP["grid"],
        "sweep": {"axis": "delay", "values": ["-1 ps", 0, "1 ps"]},
    }
    rc = parse_run_config(doc)
    np.testing.assert_allclose(rc.values, [-1e-12, 0.0, 1e-12])


def test_structured_sources_rejects_source_overrides():
    doc = {"experiment": "structured_sources",
           "source": TINY_POWER_SWEEP["source"],
           "sweep": {"values": ["0 ps"]}}
    with pytest.raises(ConfigError, match="built-in"):
        parse_run_config(doc)


def test_run_writes_csv_svg_and_summary(tmp_path, capsys):
    path = write_config(tmp_path, TINY_POWER_SWEEP)
    out = tmp_path / "artifacts"
    code = main(["--output-dir", str(out), "--threads", "2", "run", path])
    assert code == 0
    csv_text = (out / "tiny.csv").read_text()
    lines = csv_text.splitlines()
    assert lines[0] == "param,value,p4,p_bunch,p_herald,eta_herald,v_hom,v_mzi"
    assert len(lines) == 3
    # pure separable sources: unit visibility in every row
    for line in lines[1:]:
        v_hom = float(line.split(",")[6])
        assert v_hom == pytest.approx(1.0, abs=1e-9)
    svg = (out / "tiny.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg
    assert "power_sweep" in capsys.readouterr().out


def test_run_is_byte_deterministic(tmp_path):
    path = write_config(tmp_path, TINY_POWER_SWEEP)
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        assert main(["--output-dir", str(out), "run", path]) == 0
        outs.append((out / "tiny.csv").read_bytes())
    assert outs[0] == outs[1]


def test_probe_single_row(tmp_path):
    doc = {
        "experiment": "probe",
        "output_prefix": "one",
        "source": TINY_POWER_SWEEP["source"] | {"xi": 0.2},
        "grid": TINY_POWER_SWEEP["grid"],
    }
    path = write_config(tmp_path, doc)
    assert main(["--output-dir", str(tmp_path), "run", path]) == 0
    lines = (tmp_path / "one.csv").read_text().splitlines()
    assert len(lines) == 2
    assert lines[1].startswith("probe,")
    assert not (tmp_path / "one.svg").exists()


def test_config_error_exit_code(tmp_path, capsys):
    path = write_config(tmp_path, {"experiment": "nope"})
    assert main(["run", path]) == 2
    assert "experiment" in capsys.readouterr().err


def test_unreadable_config_exit_code(tmp_path, capsys):
    assert main(["run", str(tmp_path / "missing.yaml")]) == 2
    capsys.readouterr()
    bad = tmp_path / "broken.yaml"
    bad.write_text("a: [unclosed")
    assert main(["run", str(bad)]) == 2
    assert "invalid YAML" in capsys.readouterr().err


def test_too_coarse_grid_is_config_error(tmp_path, capsys):
    doc = dict(TINY_POWER_SWEEP)
    doc["grid"] = {"n_bins": 5, "step": "1e11 rad/s"}
    path = write_config(tmp_path, doc)
    assert main(["--output-dir", str(tmp_path), "run", path]) == 2
    assert "too coarse" in capsys.readouterr().err


def test_threads_validation(capsys):
    assert main(["--threads", "0", "verify"]) == 2


def test_svg_plot_contents(tmp_path):
    path = tmp_path / "plot.svg"
    svg_plot([0, 1, 2], [0.5, 0.1, 0.4], "delay", "p4", str(path))
    text = path.read_text()
    assert text.startswith("<svg")
    assert "delay" in text and "p4" in text
    assert "polyline" in text


def test_verify_reports_all_suites(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 4
    assert "FAIL" not in out
