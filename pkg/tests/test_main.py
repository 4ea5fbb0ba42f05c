# tests/test_main.py - Job runner, report and command-line surface

import json
from fractions import Fraction

import pytest

from app.emit import dump_json, latex_cyclo, latex_rational, render_latex
from app.field_tower import CycloNum
from app.main import JobSpec, main, run
from app.zeta_algebra import ZetaRat

ELLIPTIC = "y^2 - x*(x-1)*(x-2)"


def run_json(**kwargs):
    code, text = run(JobSpec(**kwargs))
    return code, json.loads(text)


def test_elliptic_curve_report():
    code, data = run_json(q=5, poly=ELLIPTIC, oracle_depth=3)
    assert code == 0
    assert data["mode"] == "superelliptic"
    assert data["zeta"]["denominator"] == [[1, 1]]
    assert [p["real_part"] for p in data["poles"]] == ["-1"]
    assert data["simplified"] is True
    assert data["candidates"] == [[1, 1]]
    assert data["trace"]["violations"] == 0
    assert data["oracle"]["passed"] is True
    assert data["oracle"]["counts"]["counts"] == [1, 7, 35, 175]


def test_report_is_deterministic():
    first = run(JobSpec(q=5, poly=ELLIPTIC))
    second = run(JobSpec(q=5, poly=ELLIPTIC))
    assert first == second
    assert json.dumps(json.loads(first[1]), indent=2, ensure_ascii=False) + "\n" == first[1]


def test_binomial_report():
    code, data = run_json(q=7, poly="x^2 + y^3 + t*x^4", oracle_depth=2)
    assert code == 0
    assert data["mode"] == "binomial"
    assert data["nondegenerate"] is True
    assert data["candidates"] == [[1, 1], [5, 6]]
    assert data["oracle"]["passed"] is True


def test_curve_block_with_quadratic_character():
    code, data = run_json(q=5, curve="gamma0=1; roots=[(0,1),(1,1),(2,1)]", m=2, character="mult:2:1",
                          oracle_depth=3, t0=Fraction(1, 2))
    assert code == 0
    assert data["character"] == "mult:2:1"
    assert data["oracle"]["bound"]["passed"] is True
    assert "counts" not in data["oracle"]


def test_p_divides_m():
    code, data = run_json(q=3, curve="gamma0=1; roots=[(0,1)]", m=3)
    assert code == 2
    assert data["error"] == "p divides m"


def test_parse_error_reports_offset():
    code, data = run_json(q=5, poly="y^2 -")
    assert code == 2
    assert data["error"] == "parse error"
    assert data["offset"] == 5


def test_budget_exceeded():
    code, data = run_json(q=5, poly=ELLIPTIC, oracle_depth=3, budget=100)
    assert code == 3
    assert data["error"] == "budget exceeded"


def test_outside_the_solvable_class():
    code, data = run_json(q=5, poly="x*y + y^2")
    assert code == 2
    assert data["error"] == "out of theorem scope"


def test_missing_arguments():
    assert run_json(poly=ELLIPTIC)[1]["error"] == "missing field"
    assert run_json(q=6, poly=ELLIPTIC)[1]["error"] == "bad field"
    assert run_json(q=5)[1]["error"] == "missing input"
    assert run_json(q=5, poly=ELLIPTIC, emit="pdf")[1]["error"] == "bad emit"
    assert run_json(q=5, poly=ELLIPTIC, mode="count")[1]["error"] == "missing depth"


def test_input_file(tmp_path):
    path = tmp_path / "curve.txt"
    path.write_text(ELLIPTIC + "\n", encoding="utf-8")
    code, data = run_json(q=5, input_path=str(path))
    assert code == 0
    assert data["input_echo"] == ELLIPTIC
    code, data = run_json(q=5, input_path=str(tmp_path / "missing.txt"))
    assert data["error"] == "unreadable input"


def test_count_mode():
    code, data = run_json(q=5, poly=ELLIPTIC, mode="count", oracle_depth=1)
    assert code == 0
    assert data["counts"]["counts"] == [1, 7]
    assert data["lifting_bound"] is True


def test_latex_output():
    code, text = run(JobSpec(q=7, poly="x^2 + y^3 + t*x^4", emit="latex"))
    assert code == 0
    assert "\\frac" in text
    assert "T^{6}" in text


def test_series_output():
    code, text = run(JobSpec(q=5, poly="x + y^2", emit="series:3"))
    assert code == 0
    lines = text.splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("T^0: ")


def test_newton_outputs():
    code, text = run(JobSpec(q=5, poly="y^2 - x^3", emit="newton"))
    assert code == 0
    assert json.loads(text)["vertices"] == [[0, 2], [3, 0]]
    code, text = run(JobSpec(q=5, poly="y^2 - x^3", emit="tikz"))
    assert code == 0
    assert text.count("circle (2pt)") == 2
    assert "m = 6" in text


def test_main_writes_to_stdout(capsys):
    code = main(["--q", "5", "--poly", "x + y^2", "--emit", "series:2"])
    assert code == 0
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_latex_helpers():
    assert latex_rational(Fraction(-1, 2)) == "-\\frac{1}{2}"
    assert latex_rational(Fraction(3)) == "3"
    assert latex_cyclo(CycloNum.root_of_unity(4, 1)) == "(\\zeta_{4})"
    text = render_latex(ZetaRat.constant(5, 3), "trivial")
    assert "\\left(" not in text
    assert text.splitlines()[-2] == "3"


def test_tikz_for_the_cusp(capsys):
    code = main(["--q", "7", "--poly", "x^2 + y^3", "--emit", "tikz"])
    assert code == 0
    text = capsys.readouterr().out
    assert text.count("circle (2pt)") == 2
    assert "m = 6" in text


@pytest.mark.parametrize("mode", ["binomial", "theorem11"])
def test_binomial_mode_spellings(mode):
    code, data = run_json(q=7, poly="x^2 + y^3 + t*x^4", mode=mode)
    assert code == 0
    assert data["mode"] == "binomial"


@pytest.mark.parametrize("mode", ["superelliptic", "theorem12"])
def test_superelliptic_mode_spellings(mode, capsys):
    code = main(["--q", "5", "--poly", ELLIPTIC, "--mode", mode])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["mode"] == "superelliptic"
    assert data["zeta"]["denominator"] == [[1, 1]]


def test_unknown_mode():
    assert run_json(q=5, poly=ELLIPTIC, mode="theorem13")[1]["error"] == "bad mode"


@pytest.mark.parametrize("job", [
    dict(q=5, poly=ELLIPTIC, oracle_depth=2),
    dict(q=7, poly="x^2 + y^3 + t*x^4"),
    dict(q=3, curve="gamma0=-t^2; roots=[(t^-1,2),(0,2)]; m=2"),
    dict(q=5, curve="gamma0=1; roots=[(0,1),(1,1),(2,1)]", m=2, character="mult:2:1"),
])
def test_report_json_round_trip_is_byte_identical(job):
    code, text = run(JobSpec(**job))
    assert code == 0
    data = json.loads(text)
    assert dump_json(data) + "\n" == text
    q = data["q"]
    assert ZetaRat.from_json(q, data["zeta"]).to_json() == data["zeta"]
