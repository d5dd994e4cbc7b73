"""CLI surface: exit codes, schemas, config precedence, emitted artifacts."""

import csv
import io
import json
import os
import xml.dom.minidom

import pytest

from fractrunc import cli


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants_schema(capsys):
    code, out, _ = run(capsys, ["constants", "--s", "0.5", "--N", "3",
                                "--k", "2", "--gamma", "1.0"])
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    for key in ("C_s", "beta", "c_hat", "c_perp", "c_k", "c_iso", "c_N_plus"):
        assert key in doc
    # gamma = 1.0 sits outside the (0,1) domain of two constants: emitted
    # as null with a note rather than a hard failure
    assert doc["c_hat"] is None and doc["c_k"] is None
    assert doc["beta"] == pytest.approx(3.141592653589793)


def test_constants_domain_error_exit_2(capsys):
    code, _, err = run(capsys, ["constants", "--s", "1.5"])
    assert code == 2
    assert "s must lie in (0,1)" in err


def test_roots_noroot_is_answer(capsys):
    code, out, _ = run(capsys, ["roots", "--which", "gamma-bar",
                                "--k", "1", "--s", "0.75"])
    assert code == 0
    assert json.loads(out)["exists"] is False


def test_roots_gamma_tilde_above_one(capsys):
    code, out, _ = run(capsys, ["roots", "--which", "gamma-tilde",
                                "--N", "3", "--s", "0.9"])
    doc = json.loads(out)
    assert code == 0 and doc["root"] > 1.0 and abs(doc["residual"]) <= 1e-9


def test_table_csv_four_columns(capsys):
    code, out, _ = run(capsys, ["table", "--N", "3", "--s", "0.5",
                                "--format", "csv"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["operator", "p_star", "p_lower_star", "notes"]
    assert all(len(r) == 4 for r in rows)
    assert len(rows) == 7  # header + six operators
    assert rows[1][1] == "1" and rows[1][2] == "1"


def test_verify_exit_codes_and_report(tmp_path, capsys):
    report = tmp_path / "r.json"
    code, _, _ = run(capsys, ["verify", "power-identity", "--s", "0.5",
                              "--mu", "0.7", "--report", str(report)])
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["schema"] == 1 and doc["verdict"] == "pass"


def test_sweep_emits_csv_and_svg(tmp_path, capsys):
    prefix = str(tmp_path / "sw")
    code, out, _ = run(capsys, ["sweep", "--targets", "roots", "--N", "3",
                                "--k", "2", "--steps", "5",
                                "--s-min", "0.2", "--s-max", "0.8",
                                "--out-prefix", prefix])
    assert code == 0
    rows = list(csv.reader(open(prefix + ".csv", newline="")))
    assert rows[0] == ["s", "gamma_bar", "gamma_tilde", "gamma_plus", "status"]
    # gamma_tilde decreases in s on this grid
    tildes = [float(r[2]) for r in rows[1:]]
    assert tildes == sorted(tildes, reverse=True)
    xml.dom.minidom.parse(prefix + ".svg")  # well-formed XML


def test_config_precedence(tmp_path, monkeypatch):
    cfgfile = tmp_path / "fractrunc.conf"
    cfgfile.write_text("seed = 7\nabs_tol = 1e-8\n")
    cfg = cli.load_config(str(cfgfile))
    assert cfg.seed == 7 and cfg.abs_tol == 1e-8
    monkeypatch.setenv("FRACTRUNC_SEED", "9")
    cfg = cli.load_config(str(cfgfile))
    assert cfg.seed == 9  # env beats file
    cfg = cli.load_config(str(cfgfile), {"seed": 11})
    assert cfg.seed == 11  # flag beats env
    assert cli.load_config().seed == 9  # env still applies without a file


def test_config_rejects_unknown_key(tmp_path):
    bad = tmp_path / "bad.conf"
    bad.write_text("colour = blue\n")
    with pytest.raises(ValueError):
        cli.load_config(str(bad))
    with pytest.raises(ValueError):
        cli.Config(abs_tol=-1.0)


def test_write_atomic(tmp_path):
    target = tmp_path / "out.json"
    cli.write_atomic(str(target), "hello")
    assert target.read_text() == "hello"
    assert not any(p.name.startswith(".fractrunc-")
                   for p in tmp_path.iterdir())


def test_svg_renderer_handles_empty_series():
    svg = cli.render_svg("t", "x", "y", {"a": []})
    xml.dom.minidom.parseString(svg)
