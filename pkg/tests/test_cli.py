import csv
import io
import json

import pytest

from poincare.cli import build_parser, emit_report, parse_range, run
from poincare.quadform import HalfIntegralForm, aut_group
from poincare.report import ScanReport

SUBCOMMANDS = ("classical-coeff", "weight-scan", "level-scan", "siegel-coeff", "siegel-scan",
               "reduce-form", "aut", "fd-membership", "gottschling", "y0-search",
               "alpha-poly-check", "hecke-eigen", "weights", "weyl-scan", "selftest")


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_every_subcommand_has_help(capsys):
    for name in SUBCOMMANDS:
        code, out, _ = call(capsys, name, "--help")
        assert code == 0 and "--format" in out and "--threads" in out


def test_parse_range():
    assert parse_range("12:24:4") == [12, 16, 20, 24]
    assert parse_range("1:3") == [1, 2, 3]
    assert parse_range("12,14") == [12, 14]


def test_weight_scan_csv(capsys):
    code, out, _ = call(capsys, "weight-scan", "--m", "1", "--n", "2", "--k", "12:60:4")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["m", "n", "k", "q", "value", "target", "abs_err", "err_estimate", "seconds"]
    assert [int(r["k"]) for r in rows] == list(range(12, 61, 4))
    assert abs(float(rows[-1]["value"])) < 0.02
    assert float(rows[0]["value"]) == pytest.approx(-68.166897004, abs=1e-8)


def test_classical_coeff_both_methods(capsys):
    code, out, _ = call(capsys, "classical-coeff", "--m", "1", "--n", "1", "--k", "12", "--format", "json")
    data = json.loads(out)
    assert code == 0 and [r["method"] for r in data["rows"]] == ["quadrature", "kloosterman"]
    a, b = (r["value"] for r in data["rows"])
    assert a == pytest.approx(b, abs=1e-6)


def test_level_scan(capsys):
    code, out, _ = call(capsys, "level-scan", "--q", "20:30:5", "--k", "12")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and all(abs(float(r["value"]) - 1) < 0.01 for r in rows)


def test_aut_json(capsys):
    code, out, _ = call(capsys, "aut", "--form", "1,1,1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["order"] == 12
    gens = [tuple(map(tuple, g)) for g in data["generators"]]
    assert set(gens) <= set(aut_group(HalfIntegralForm(1, 1, 1)))


def test_reduce_form(capsys):
    code, out, _ = call(capsys, "reduce-form", "--form", "5,4,1", "--format", "json")
    assert code == 0 and json.loads(out)["reduced"] == "1,0,1"


def test_y0_search(capsys):
    code, out, _ = call(capsys, "y0-search", "--tol", "1e-3", "--format", "json")
    cert = json.loads(out)
    assert code == 0 and 1 < cert["y0"] < 1.1 and cert["passed"]
    assert len(cert["minima"]) == 19 and cert["grid_n"] == 32


def test_fd_membership(capsys):
    code, out, _ = call(capsys, "fd-membership", "--z", "0,0,0,1.05,0,1.05", "--format", "json")
    assert code == 0 and json.loads(out)["status"] == "strict"
    code, _, err = call(capsys, "fd-membership", "--z", "0,0,0")
    assert code == 2 and "x11" in err


def test_gottschling(capsys):
    code, out, _ = call(capsys, "gottschling", "--format", "json")
    pairs = json.loads(out)
    assert code == 0 and len(pairs) == 19 and sum(p["rank_c"] == 1 for p in pairs) == 4


def test_alpha_poly_check(capsys):
    code, out, _ = call(capsys, "alpha-poly-check", "--samples", "30", "--seed", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 30 and all(r["ok"] == "true" for r in rows)


def test_hecke_commands(capsys):
    code, out, _ = call(capsys, "hecke-eigen", "--k", "12", "--P", "7")
    assert code == 0 and out.splitlines()[1].startswith("12,0,2,-0.53033008589")
    code, out, _ = call(capsys, "weights", "--k", "24", "--format", "json")
    assert code == 0 and sum(r["omega"] for r in json.loads(out)) == pytest.approx(1.0, abs=0.01)
    code, out, _ = call(capsys, "weyl-scan", "--k", "12:16:4", "--exps", "2:1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(rows[0]["value"]) == pytest.approx(-1.50628984762, abs=1e-9)
    assert all(float(r["err_estimate"]) < 1e-6 for r in rows)


def test_siegel_coeff(capsys):
    code, out, _ = call(capsys, "siegel-coeff", "--s", "1,1,1", "--t", "1,1,1", "--k", "40",
                        "--B", "1", "--N", "8", "--format", "json")
    row = json.loads(out)["rows"][0]
    assert code == 0 and row["target"] == 6 and abs(row["value"] - 6) < 0.01


def test_argument_errors(capsys):
    assert call(capsys, "bogus")[0] == 2
    assert call(capsys, "weight-scan", "--k", "12:x")[0] == 2
    assert call(capsys, "weight-scan", "--unknown")[0] == 2
    assert call(capsys, "aut", "--form", "1,2")[0] == 2
    assert call(capsys, "weight-scan", "--threads", "0")[0] == 2
    assert call(capsys, "weights", "--k", "12:14:0")[0] == 2


def test_envelope_errors(capsys):
    code, _, err = call(capsys, "weight-scan", "--k", "13")
    assert code == 1 and "even" in err
    assert call(capsys, "siegel-coeff", "--B", "5")[0] == 1
    assert call(capsys, "hecke-eigen", "--k", "62")[0] == 1


def test_output_file_and_failure(tmp_path, capsys):
    path = tmp_path / "scan.json"
    assert run(["gottschling", "--output", str(path), "--format", "json"]) == 0
    assert len(json.loads(path.read_text())) == 19
    bad = tmp_path / "missing" / "x.csv"
    code, _, err = call(capsys, "gottschling", "--output", str(bad))
    assert code == 1 and str(bad) in err


def test_emit_report_empty_and_round_trip(capsys):
    cfg = build_parser().parse_args(["gottschling"])
    emit_report(ScanReport(("k",)), cfg)
    assert capsys.readouterr().out == "k,value,target,abs_err,err_estimate,seconds\n"
    rep = ScanReport(("k",))
    rep.add((12,), 2.8402873751675, 1, 1e-12, 0.5)
    cfg.format = "json"
    emit_report(rep, cfg)
    back = ScanReport.from_json(capsys.readouterr().out)
    assert back.rows[0].params == (12,) and back.rows[0].value == pytest.approx(2.8402873751675, rel=1e-11)


def test_selftest_skip_all(capsys):
    code, out, _ = call(capsys, "selftest", *sum((["--skip", str(i)] for i in range(1, 11)), []))
    assert code == 0
