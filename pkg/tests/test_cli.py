import csv
import io
import json

import pytest

from sturmspec import ConfigError
from sturmspec.cli import main, parse_config, run_command, serialize

CONSTANT = """{"L": 1,
 "coefficients": {"kind": "constant", "p": 1, "q": 1, "r": 1},
 "boundary": {"alpha1": 1, "alpha2": 1, "beta1": -1, "beta2": 1}}"""

TABLE1 = """{"heleshaw": {"mu1": 1, "mu2": 2, "S": 1, "T": 1, "U": 1,
  "L": 1, "J1": 0.1, "J2": 0.1, "profile": "linear",
  "k_values": [1, 2, 3, 4, 5, 6, 7, 8, 9]}}"""

CONFIGS = [
    CONSTANT,
    TABLE1,
    """{"L": 2, "coefficients": {"kind": "expression", "p": "1+x",
        "q": "exp(-x^2)", "r": "1"},
        "boundary": {"alpha1": 1, "alpha2": 0.5, "beta1": -1, "beta2": 1},
        "settings": {"rel_tol": 1e-9}}""",
    """{"L": 1, "coefficients": {"kind": "linear-viscosity", "k": 2,
        "mu0_slope": 0.8, "mu0_intercept": 1.1},
        "boundary": {"alpha1": 15.6, "alpha2": 2, "beta1": -15.6,
                     "beta2": 4}}""",
    """{"L": 1, "coefficients": {"kind": "tabulated", "x": [0, 0.3, 0.7, 1],
        "p": [1, 1.1, 1.3, 1.5], "q": [1, 1, 1, 1], "r": [1, 2, 2, 1]},
        "boundary": {"alpha1": 1, "alpha2": 1, "beta1": -1, "beta2": 1}}""",
]


@pytest.mark.parametrize("text", CONFIGS)
def test_config_roundtrip(text):
    cfg = parse_config(text)
    once = serialize(cfg)
    assert parse_config(once) == cfg
    assert serialize(parse_config(once)) == once


def test_defaults_applied():
    cfg = parse_config(CONSTANT)
    s = cfg.solver_settings()
    assert s.rel_tol > 0 and s.abs_tol > 0


def test_table1_config_params():
    cfg = parse_config(TABLE1)
    hp = cfg.params
    assert (hp.mu1, hp.mu2, hp.J1, hp.J2, hp.S, hp.T) == (1, 2, 0.1, 0.1, 1, 1)


@pytest.mark.parametrize("text,path", [
    ('{"L": 1, "coefficients": {"kind": "constant", "p": 1, "q": 1, "r": 1},'
     ' "boundary": {"alpha1": 1, "alpha2": 1, "beta1": -1, "beta2": 1},'
     ' "colour": 3}', "$.colour"),
    ('{"L": 1, "coefficients": {"kind": "constant", "p": 1, "q": 1},'
     ' "boundary": {"alpha1": 1, "alpha2": 1, "beta1": -1, "beta2": 1}}',
     "$.coefficients.r"),
    ('{"L": "one", "coefficients": {"kind": "constant", "p": 1, "q": 1,'
     ' "r": 1}, "boundary": {"alpha1": 1, "alpha2": 1, "beta1": -1,'
     ' "beta2": 1}}', "$.L"),
])
def test_config_errors_carry_path(text, path):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.path == path


def test_nonpositive_q_rejected():
    text = ('{"L": 2, "coefficients": {"kind": "expression", "p": "1",'
            ' "q": "x-1", "r": "1"}, "boundary": {"alpha1": 1, "alpha2": 1,'
            ' "beta1": -1, "beta2": 1}}')
    with pytest.raises(ConfigError):
        parse_config(text)


def test_bad_expression_rejected():
    text = CONSTANT.replace('"kind": "constant", "p": 1, "q": 1, "r": 1',
                            '"kind": "expression", "p": "2**x", "q": "1",'
                            ' "r": "1"')
    with pytest.raises(ConfigError):
        parse_config(text)


def test_spectrum_json_shape():
    status, text = run_command("spectrum", parse_config(CONSTANT),
                               {"nmax": 2, "format": "json"})
    assert status == 0
    data = json.loads(text)
    assert [d["index"] for d in data][-3:] == ["0", "1", "2"]
    for d in data:
        assert set(d) >= {"lambda", "index", "zero_count", "branch",
                          "char_residual"}


def test_table_csv_layout():
    status, text = run_command("table", parse_config(TABLE1), {})
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["k", "alpha1", "beta1", "lambda_-1", "lambda_-0",
                       "lambda_0", "lambda_1", "lambda_2"]
    assert len(rows) == 10
    assert rows[1][:3] == ["1", "0.9", "-0.9"]
    assert rows[1][5] == "14.4968"


def test_table2_dashes():
    cfg = parse_config(TABLE1.replace('"U": 1', '"U": 10'))
    _, text = run_command("table", cfg, {})
    row = list(csv.reader(io.StringIO(text)))[1]
    assert row[3] == "-" and row[4] == "-"


def test_aux_and_eigenfunction():
    cfg = parse_config(CONSTANT)
    _, text = run_command("aux-spectrum", cfg, {"nmax": 2})
    assert text.splitlines()[0] == "index,eta,zero_count,residual"
    _, text = run_command("eigenfunction", cfg,
                          {"index": "1", "points": 5, "format": "json"})
    data = json.loads(text)
    assert len(data["samples"]) == 5


def test_scan_json():
    cfg = parse_config(TABLE1.replace("[1, 2, 3, 4, 5, 6, 7, 8, 9]", "[1, 2]"))
    _, text = run_command("scan", cfg, {"format": "json"})
    rows = json.loads(text)
    assert [r["k"] for r in rows] == [1, 2]


def test_verify_table1_k1():
    cfg = parse_config(TABLE1)
    status, text = run_command("verify", cfg, {"k": 1, "format": "json"})
    rep = json.loads(text)
    for section in ("interlacing", "separation", "crum_darboux", "asymptotic",
                    "monotonicity"):
        assert rep[section]["pass"] is True
    assert status == 0


def test_main_exit_codes(tmp_path, capsys):
    good = tmp_path / "c.json"
    good.write_text(CONSTANT)
    out = tmp_path / "o.csv"
    assert main(["spectrum", "--config", str(good), "--nmax", "1",
                 "--out", str(out)]) == 0
    assert out.read_text().startswith("index,lambda")
    bad = tmp_path / "b.json"
    bad.write_text('{"L": 1}')
    assert main(["spectrum", "--config", str(bad), "--error-json"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert "error" in err


def test_csv_decimal_point():
    _, text = run_command("spectrum", parse_config(CONSTANT), {"nmax": 1})
    body = text.splitlines()[1:]
    assert all("," in line and ";" not in line for line in body)
