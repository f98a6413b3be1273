import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from brstkit.cli import EXIT_INVALID, EXIT_MISMATCH, EXIT_OK, EXIT_PARSE, main
from brstkit.config import ParseError, parse_config_text, parse_value, parse_weights_flag

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
SCHEMA = json.loads(resources.files("brstkit").joinpath("report_schema.json").read_text())


def write(tmp_path, body, name="run.cfg"):
    p = tmp_path / name
    p.write_text(body)
    return str(p)


def run_json(capsys, argv):
    code = main(argv + ["--output", "json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


HYP = "[setup]\nkind = hypertoric\nM = [[1 1]]\ntheta = [{theta}]\nc = [1/3]\n"


# ---------------------------------------------------------------- parsing


def test_parse_values():
    assert parse_value(" 3") == 3
    assert parse_value("-2/6") == Fraction(-1, 3)
    assert parse_value("[[1, 0 1], [0 1 1]]") == [[1, 0, 1], [0, 1, 1]]
    assert parse_value("auto") == "auto"


@pytest.mark.parametrize("text, line, column", [
    ("[setup]\nkind = hypertoric\nc = [1/0]\n", 3, 6),
    ("[setup]\nkind = hypertoric\ncolour = 3\n", 3, 1),
    ("[setup]\nkind = hypertoric\n  kind = quiver\n", 3, 3),
    ("[setups]\n", 1, 1),
    ("[setup]\nkind = hypertoric\nM = [[1 1]\n", 3, 11),
])
def test_parse_error_positions(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_config_text(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_parse_defaults_and_weights():
    cfg = parse_config_text(HYP.format(theta=1) + "[truncation]\nweights = [[0] [1]]\n")
    assert cfg.max_degree == 4 and cfg.jobs == 1 and cfg.output_format == "text"
    assert cfg.weights == [(0,), (1,)]
    assert parse_weights_flag("0,0;1,-1") == [(0, 0), (1, -1)]
    assert parse_weights_flag("auto") == "auto"
    with pytest.raises(ParseError):
        parse_weights_flag("1;x")


# ---------------------------------------------------------------- exit codes


def test_zero_denominator_is_a_parse_error(tmp_path, capsys):
    path = write(tmp_path, "[setup]\nkind = hypertoric\nM = [[1 1]]\ntheta = [1]\nc = [1/0]\n")
    assert main(["validate", "--config", path]) == EXIT_PARSE
    assert "line 5" in capsys.readouterr().err


def test_unknown_key_and_odd_degree_are_parse_errors(tmp_path, capsys):
    path = write(tmp_path, HYP.format(theta=1) + "hbar = 1\n")
    assert main(["validate", "--config", path]) == EXIT_PARSE
    good = write(tmp_path, HYP.format(theta=1), "good.cfg")
    assert main(["brst", "--config", good, "--max-degree", "3"]) == EXIT_PARSE
    assert main(["brst", "--config", str(tmp_path / "missing.cfg")]) == EXIT_PARSE


def test_validate_pass_and_wall(tmp_path, capsys):
    code, rep = run_json(capsys, ["validate", "--config", write(tmp_path, HYP.format(theta=1))])
    assert code == EXIT_OK and rep["verdict"]["status"] == "pass"
    code, rep = run_json(capsys, ["validate", "--config", write(tmp_path, HYP.format(theta=0))])
    assert code == EXIT_INVALID
    smooth = next(c for c in rep["checks"] if c["name"] == "smoothness")
    assert smooth["status"] == "fail" and smooth["witness"] == []
    # other commands refuse invalid setups the same way
    code, _ = run_json(capsys, ["verify", "--config", write(tmp_path, HYP.format(theta=0))])
    assert code == EXIT_INVALID


@pytest.mark.parametrize("name", sorted(p.name for p in CONFIGS.glob("*.cfg")))
def test_shipped_configs_validate(name, capsys):
    code, rep = run_json(capsys, ["validate", "--config", str(CONFIGS / name)])
    assert code == EXIT_OK
    jsonschema.validate(rep, SCHEMA)


# ---------------------------------------------------------------- commands


def test_flatness_row(capsys):
    code, rep = run_json(capsys, ["flatness", "--config", str(CONFIGS / "preprojective_A1.cfg"),
                                  "--max-degree", "8"])
    assert code == EXIT_OK
    detail = rep["checks"][-1]["detail"]
    assert detail["hilbert"] == [(k + 1) ** 2 for k in range(9)]
    assert detail["first_failing_degree"] is None


def test_predict(capsys):
    code, rep = run_json(capsys, ["predict", "--config", str(CONFIGS / "preprojective_A3.cfg")])
    assert code == EXIT_OK
    p = rep["predicted"]
    assert p["poincare"] == [1, 3, 3, 1] and p["value_at_1"] == 8 and p["palindromic"]
    code, rep = run_json(capsys, ["predict", "--config", str(CONFIGS / "preprojective_D4.cfg")])
    assert rep["predicted"]["poincare"] == [1, 4, 6, 5, 5, 6, 4, 1]


@pytest.mark.parametrize("name", ["hypertoric_M1.cfg", "hypertoric_M11.cfg"])
def test_verify_torus(name, capsys):
    code, rep = run_json(capsys, ["verify", "--config", str(CONFIGS / name)])
    assert code == EXIT_OK, rep["verdict"]
    assert rep["verdict"]["mismatches"] == []
    jsonschema.validate(rep, SCHEMA)


def test_verify_reports_mismatch_fields(tmp_path, capsys, monkeypatch):
    import brstkit.derham as D

    monkeypatch.setattr(D, "predicted_for_setup", lambda s: D.PoincarePolynomial((1, 2)))
    code, rep = run_json(capsys, ["verify", "--config", str(CONFIGS / "hypertoric_M1.cfg")])
    assert code == EXIT_MISMATCH
    m = rep["verdict"]["mismatches"][0]
    assert set(m) == {"weight", "ghost_degree", "bound", "N", "got", "expected"}
    assert m["ghost_degree"] == 1 and m["expected"] == 2 * m["got"]


def test_text_and_json_agree(capsys):
    cfg = str(CONFIGS / "hypertoric_M1.cfg")
    _, rep = run_json(capsys, ["brst", "--config", cfg, "--max-degree", "4", "--weights", "0"])
    assert main(["brst", "--config", cfg, "--max-degree", "4", "--weights", "0"]) == EXIT_OK
    text = capsys.readouterr().out
    rows = [ln.split() for ln in text.splitlines() if ln.startswith("  brst ")]
    from_text = [(int(r[2]), int(r[3]), int(r[4])) for r in rows]
    from_json = [(r["ghost_degree"], r["bound"], r["dim"]) for r in rep["tables"]]
    assert from_text == from_json and from_json


def test_jobs_are_deterministic(tmp_path, capsys):
    cfg = str(CONFIGS / "hypertoric_2x3.cfg")
    outs = []
    for jobs in ("1", "3"):
        out = tmp_path / f"j{jobs}.json"
        assert main(["verify", "--config", cfg, "--max-degree", "4", "--jobs", jobs,
                     "--output", "json", "--out", str(out)]) == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_nonabelian_oracle_and_brst(capsys):
    cfg = str(CONFIGS / "preprojective_D4.cfg")
    assert main(["oracle", "--config", cfg]) == EXIT_INVALID
    assert "torus" in capsys.readouterr().err
    code, rep = run_json(capsys, ["brst", "--config", cfg])
    assert code == EXIT_OK and rep["tables"] == []
    assert rep["verdict"]["notices"]


def test_dump_matrices(tmp_path, capsys):
    d = tmp_path / "mats"
    assert main(["brst", "--config", str(CONFIGS / "hypertoric_M1.cfg"), "--max-degree", "2",
                 "--weights", "0", "--dump-matrices", str(d)]) == EXIT_OK
    files = sorted(p.name for p in d.iterdir())
    assert "d_w0_n0_N2.txt" in files
    assert (d / "d_w0_n0_N2.txt").read_text().startswith("%")
