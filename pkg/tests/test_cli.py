import csv
import io
import json

import argparse

import pytest

from qdtk.cli import parse_coeffs, parse_complex, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def result(out):
    body = json.loads(out)
    assert body["schema_version"] == 1
    return body["result"]


@pytest.mark.parametrize("text,value", [("2.0+3.0i", 2 + 3j), ("i", 1j), ("-i", -1j), ("1.5", 1.5), ("-0.5-2i", -0.5 - 2j),
                                        ("3j", 3j)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_parse_complex_inf_and_bad():
    from qdtk.sphere import is_inf
    assert is_inf(parse_complex("inf"))
    with pytest.raises(argparse.ArgumentTypeError):
        parse_complex("sqrt(2)")


def test_parse_coeffs():
    assert parse_coeffs("1,0,2i") == [1, 0, 2j]


def test_classify_annulus(capsys):
    code, out, _ = call(capsys, "classify", "--r", "1.4142135", "--alpha", "-0.5")
    assert code == 0
    res = result(out)
    assert res["regime"] == "Annulus" and res["multi_sheeted"] is True


def test_levelcurve_csv(capsys):
    code, out, _ = call(capsys, "levelcurve", "--r", "1.4142135", "--alpha", "3", "--n", "400")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert set(rows[0]) == {"component", "x", "y"}
    assert {r["component"] for r in rows} == {"0"}


def test_levelcurve_json_and_file(capsys, tmp_path):
    dest = tmp_path / "lc.json"
    code, out, _ = call(capsys, "levelcurve", "--r", "1.4142135", "--alpha", "-0.5", "--n", "50", "--format", "json",
                        "-o", str(dest))
    assert code == 0 and out == ""
    res = json.loads(dest.read_text())["result"]
    assert len(res["components"]) == 2


def test_verify_disk(capsys):
    code, out, _ = call(capsys, "verify-disk")
    assert code == 0
    res = result(out)
    assert len(res["extra"]["regimes"]) == 4
    assert all(v["defect"] < 1e-6 for v in res["extra"]["regimes"].values())
    assert "timings" not in res


def test_exp_transform_disk(capsys):
    code, out, _ = call(capsys, "exp-transform", "--z", "2", "--w", "3", "--pa", "5", "--pb", "7")
    assert code == 0
    res = result(out)
    ex, cf = complex(*res["exponential"]), complex(*res["closed_form"])
    assert abs(ex - cf) < 1e-8 * abs(cf)


def test_elimination_identity(capsys):
    code, out, _ = call(capsys, "elimination", "--map", "identity", "--z", "2", "--w", "0.5")
    assert code == 0
    res = result(out)
    assert res["Q_layout"].startswith("Q[i][j]")
    Q = [[complex(*v) for v in row] for row in res["Q"]]
    lead = Q[1][1]
    assert abs(Q[0][0] + lead) < 1e-12 * abs(lead)


def test_schwarz_ellipse_and_qalpha(capsys):
    code, out, _ = call(capsys, "schwarz", "--family", "ellipse", "--z", "3i")
    assert code == 0 and set(result(out)["branches"]) == {"plus", "minus"}
    code, out, _ = call(capsys, "schwarz", "--z", "5", "--alpha", "-0.5")
    assert code == 0 and result(out)["rho"] == 0
    code, out, _ = call(capsys, "schwarz", "--z", "2", "--alpha", "-0.5")
    res = result(out)
    assert code == 0 and res["rho"] == 1 and "selected" in res


def test_quadrature(capsys):
    code, out, _ = call(capsys, "quadrature", "--kind", "twopoint", "--h", "z2")
    assert code == 0 and result(out)["defect"] < 1e-8


def test_verify_theorem_cases_file(capsys, tmp_path):
    cases = [{"family": "disk", "z": "2", "w": "3", "a": "5", "b": "7"},
             {"family": "joukowski", "z": "0.3", "w": "-0.5i", "a": "0.2+0.3i", "b": "-1"}]
    path = tmp_path / "cases.json"
    path.write_text(json.dumps(cases))
    code, out, _ = call(capsys, "verify-theorem", "--cases", str(path), "--serial")
    assert code == 0
    res = result(out)
    assert len(res) == 2 and all(r["max_defect"] < 1e-6 for r in res)


def test_deterministic_output(capsys):
    argv = ["verify-theorem", "--z", "0.5", "--w", "0.25", "--pa", "2", "--pb", "3i", "--serial"]
    _, first, _ = call(capsys, *argv)
    _, second, _ = call(capsys, *argv)
    assert first == second


def test_validation_exit_code(capsys):
    code, out, err = call(capsys, "classify", "--r", "0.5", "--alpha", "1")
    assert code == 2 and out == "" and err.startswith("qdtk: invalid input")
    assert len(err.strip().splitlines()) == 1
    code, _, _ = call(capsys, "levelcurve", "--r", "1.4142135", "--alpha", "-10")
    assert code == 2


def test_recorded_error_exit_code(capsys):
    # the report is still written; the recorded error decides the exit status
    code, out, _ = call(capsys, "verify-theorem", "--z", "0.5", "--w", "2", "--pa", "0.3i", "--pb", "-3")
    assert code == 2
    assert result(out)["errors"][0].startswith("rhs: FactorUndefined")


def test_budget_exit_code(capsys, monkeypatch):
    code, _, err = call(capsys, "exp-transform", "--z", "0.5", "--w", "0.25", "--tol", "1e-12", "--max-cells", "5")
    assert code == 3 and "numerical failure" in err
    monkeypatch.setenv("QDTK_MAX_CELLS", "5")
    code, _, _ = call(capsys, "verify-disk")
    assert code == 3


def test_usage_error(capsys):
    code, _, _ = call(capsys, "no-such-command")
    assert code == 2
