import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from loopalg.cli import main, parse_loop_expr
from loopalg.errors import InputError, ParseError
from loopalg.hyperbolic import rep_once_holed_torus
from loopalg.poisson import SymPolynomial
from loopalg.words import CONSTANT, OrientedClass, unoriented

C = OrientedClass.parse


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out)


def test_bracket_ab(capsys):
    code, rep = run_json(capsys, "bracket", "--surface", "holed-torus:3,3,4", "a", "b")
    assert code == 0
    assert rep["schema"] == 1
    assert len(rep["terms"]) == 1 and len(rep["crossings"]) == 1
    (k, v), = rep["terms"].items()
    assert Fraction(v) == rep["crossings"][0]["sign"]


def test_bracket_boundary_is_empty(capsys):
    code, rep = run_json(capsys, "bracket", "abAB", "b")
    assert code == 0 and rep["terms"] == {}


def test_bracket_negates_under_swap(capsys):
    for x, y in [("a", "b"), ("ab", "aB"), ("aab", "abb"), ("aaB", "b")]:
        _, r1 = run_json(capsys, "bracket", x, y)
        _, r2 = run_json(capsys, "bracket", y, x)
        assert r1["terms"].keys() == r2["terms"].keys()
        for k in r1["terms"]:
            assert Fraction(r1["terms"][k]) == -Fraction(r2["terms"][k])


def test_bracket_unoriented(capsys):
    code, rep = run_json(capsys, "bracket", "--unoriented", "a", "b")
    assert code == 0 and rep["unoriented"] is True and len(rep["terms"]) == 2


def test_parse_errors_exit_2(capsys):
    code, out, err = run(capsys, "bracket", "a!", "b")
    assert code == 2 and "InvalidCharacter" in err and out == ""
    code, _, err = run(capsys, "center-check", "1*(a")
    assert code == 2
    code, _, _ = run(capsys, "bracket", "--surface", "nowhere:1", "a", "b")
    assert code == 2


def test_engine_error_exit_3(capsys):
    code, out, err = run(capsys, "twist-scan", "--curve", "a", "--other", "aa")
    assert code == 3 and "DegenerateClass" in err and out == ""
    code, _, _ = run(capsys, "bracket", "--radius", "3", "aaab", "abbb")
    assert code == 2


def test_center_check_examples(capsys):
    for expr in ("1*(abAB)", "1*()"):
        code, rep = run_json(capsys, "center-check", expr)
        assert code == 0 and rep["status"] == "consistent_with_central" and rep["witness"] is None
        assert rep["probe_bound"] == [3, 3]
    code, rep = run_json(capsys, "center-check", "1*(a)")
    assert rep["status"] == "certified_noncentral"
    assert rep["witness"]["probe"] == "b" and rep["witness"]["power"] == 1


def test_center_check_readings(capsys):
    _, rep = run_json(capsys, "center-check", "--vh", "2*(abAB)(abAB)")
    assert rep["reading"] == "V_h" and rep["status"] == "consistent_with_central"
    _, rep = run_json(capsys, "center-check", "--k=-1/2", "(a)(b)")
    assert rep["reading"] == "S_-1/2" and rep["status"] == "certified_noncentral"
    _, rep = run_json(capsys, "center-check", "--unoriented", "(abAB)")
    assert rep["reading"] == "GW" and rep["status"] == "consistent_with_central"
    code, _, _ = run(capsys, "center-check", "--k", "x", "(a)")
    assert code == 2


def test_parse_loop_expr():
    P = parse_loop_expr("3*(ab)(ab) + 1/2*(aB) - 2*()")
    expected = (SymPolynomial.monomial((C("ab"), C("ab")), 3) + SymPolynomial.gen(C("aB"), Fraction(1, 2))
                - SymPolynomial.gen(CONSTANT, 2))
    assert P == expected
    assert parse_loop_expr("(ba)") == SymPolynomial.gen(C("ab"))
    assert parse_loop_expr("5") == SymPolynomial.scalar(5)
    assert parse_loop_expr("-(a)") == SymPolynomial.gen(C("a"), -1)
    assert parse_loop_expr("(a)", unoriented_classes=True) == SymPolynomial.gen(unoriented(C("A")))


@pytest.mark.parametrize("text", ["", "3*", "(a", "(a))", "1/0*(a)", "2*(ax)", "(a) +"])
def test_parse_loop_expr_rejects(text):
    with pytest.raises(InputError):
        parse_loop_expr(text, 2)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_loop_expr("(a) + 2*(b", 2)
    assert info.value.position >= 1


def test_determinism(capsys):
    argv = ["verify", "zigzag", "--surface", "holed-torus:3,3,4", "--count", "5", "--seed", "4"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and a
    _, c, _ = run(capsys, "bracket", "aab", "abb")
    _, d, _ = run(capsys, "bracket", "aab", "abb")
    assert c == d


def test_determinism_across_processes():
    cmd = [sys.executable, "-m", "loopalg", "bracket", "--surface", "holed-torus:3,4,5", "abb", "aB"]
    outs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1] and outs[0]


def test_round_trip_json(capsys, tmp_path):
    for argv in (["bracket", "a", "b"], ["center-check", "(a)"], ["surface"],
                 ["verify", "skein"], ["twist-scan", "--format", "json", "--steps", "3"]):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        assert json.dumps(json.loads(out), indent=2, sort_keys=True) + "\n" == out


def test_surface_file(capsys, tmp_path):
    _, out, _ = run(capsys, "surface", "--surface", "holed-torus:3,4,5")
    rep = json.loads(out)["representation"]
    path = tmp_path / "s.json"
    path.write_text(json.dumps(rep))
    _, a = run_json(capsys, "bracket", "--surface", str(path), "aab", "b")
    _, b = run_json(capsys, "bracket", "--surface", "holed-torus:3,4,5", "aab", "b")
    assert a["terms"] == b["terms"]
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, _ = run(capsys, "bracket", "--surface", str(bad), "a", "b")
    assert code == 2


def test_output_flag(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "bracket", "-o", str(path), "a", "b")
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["x"] == "a"


def test_timings_only_on_request(capsys):
    _, rep = run_json(capsys, "bracket", "a", "b")
    assert "timings" not in rep
    _, rep = run_json(capsys, "bracket", "--timings", "a", "b")
    assert rep["timings"]["seconds"] >= 0


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_twist_scan_csv(capsys):
    code, out, _ = run(capsys, "twist-scan", "--curve", "a", "--steps", "11")
    assert code == 0
    rows = rows_of(out)
    assert list(rows[0]) == ["t", "theta", "l_y", "l_xy", "trace_x"]
    assert len(rows) == 11
    theta = [float(r["theta"]) for r in rows]
    assert all(b > a for a, b in zip(theta, theta[1:]))
    tr = [float(r["trace_x"]) for r in rows]
    assert max(tr) - min(tr) < 1e-12


def test_twist_scan_zero_row_matches_base(capsys):
    _, out, _ = run(capsys, "twist-scan", "--t-min", "0", "--t-max", "1", "--steps", "2")
    row = rows_of(out)[0]
    base = rep_once_holed_torus(3, 3, 4)
    from loopalg.hyperbolic import evaluate, translation_length

    assert float(row["l_y"]) == pytest.approx(translation_length(evaluate(base, (2,))), abs=1e-12)
    assert float(row["trace_x"]) == pytest.approx(evaluate(base, (1,)).trace, abs=1e-12)


def test_verify_twist_and_reversed(capsys):
    code, out, _ = run(capsys, "verify", "twist", "--curve", "a", "--steps", "11")
    assert code == 0
    theta = [float(r["theta"]) for r in rows_of(out)]
    assert all(b > a for a, b in zip(theta, theta[1:]))
    code, out, _ = run(capsys, "verify", "twist", "--curve", "a", "--other", "B", "--steps", "11")
    assert code == 0
    theta = [float(r["theta"]) for r in rows_of(out)]
    assert all(b < a for a, b in zip(theta, theta[1:]))


def test_verify_suites(capsys):
    code, rep = run_json(capsys, "verify", "beardon", "--surface", "modular", "--max-len", "3")
    assert code == 0 and rep["ok"] and rep["max_residual"] < 1e-8
    code, rep = run_json(capsys, "verify", "center", "--max-len", "3", "--max-power", "2")
    assert code == 0 and rep["violations"] == []
    code, rep = run_json(capsys, "verify", "jacobi-k", "--count", "5", "--max-len", "3")
    assert code == 0 and rep["ok"]


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("LOOPALG_THREADS", "4")
    code, _, _ = run(capsys, "bracket", "a", "b")
    assert code == 0
    for bad in ("0", "many", "-2"):
        monkeypatch.setenv("LOOPALG_THREADS", bad)
        code, _, err = run(capsys, "bracket", "a", "b")
        assert code == 2 and "LOOPALG_THREADS" in err


def test_bad_bounds(capsys):
    code, _, _ = run(capsys, "center-check", "--max-len", "0", "(a)")
    assert code == 2
    with pytest.raises(SystemExit) as info:
        main(["verify", "nonsense"])
    assert info.value.code == 2
