import io
import json

import pytest

from lagfib.cli import bundled_text, load_bundled, main, run

from helpers import torus3


@pytest.fixture
def t3_path(tmp_path):
    path = tmp_path / "t3.iaf"
    path.write_text(bundled_text("t3"), encoding="utf-8")
    return str(path)


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------------------
# exit codes


def test_exit_zero_on_success(t3_path, capsys):
    assert main(["report", t3_path]) == 0
    out = capsys.readouterr().out
    assert "realisable classes" in out


def test_exit_one_on_duality_corruption(tmp_path, capsys):
    text = bundled_text("heisenberg").replace(
        "[representation rho]\ndim = 3\na = [[1,0,-1],[0,1,0],[0,0,1]]",
        "[representation rho]\ndim = 3\na = [[1,0,0],[0,1,0],[0,0,1]]")
    path = _write(tmp_path, "bad_duality.iaf", text)
    assert main(["validate", path]) == 1
    out = capsys.readouterr().out
    assert "duality" in out and "FAIL" in out


def test_exit_one_on_boundary_corruption(tmp_path, capsys):
    text = bundled_text("heisenberg").replace(
        "boundary e2_1 = (1 - c*b)*e1_1",
        "boundary e2_1 = (1 + c*b)*e1_1")
    path = _write(tmp_path, "bad_boundary.iaf", text)
    assert main(["validate", path]) == 1
    out = capsys.readouterr().out
    assert "boundary squares to zero: FAIL" in out
    assert "e2_1" in out


def test_exit_one_applies_to_compute_commands(tmp_path, capsys):
    text = bundled_text("heisenberg").replace(
        "boundary e2_1 = (1 - c*b)*e1_1",
        "boundary e2_1 = (1 + c*b)*e1_1")
    path = _write(tmp_path, "bad_boundary.iaf", text)
    assert main(["realizable", path]) == 1
    out = capsys.readouterr().out
    assert "validation" in out


def test_exit_two_on_parse_error(tmp_path, capsys):
    path = _write(tmp_path, "garbage.iaf", "this is not a problem file\n")
    assert main(["report", path]) == 2
    err = capsys.readouterr().err
    assert "parse error" in err and "line 1" in err


def test_exit_two_on_missing_section(tmp_path, capsys):
    text = bundled_text("t3").partition("[diagonal]")[0]
    path = _write(tmp_path, "nodiag.iaf", text)
    assert main(["validate", path]) == 2
    err = capsys.readouterr().err
    assert "[diagonal]" in err


def test_exit_two_on_unreadable_file(capsys):
    assert main(["report", "/nonexistent/file.iaf"]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_stdin_input(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(bundled_text("t3")))
    assert main(["cohomology", "--degree", "2", "-"]) == 0
    out = capsys.readouterr().out
    assert "Z^9" in out


# ---------------------------------------------------------------------------
# command output


def test_cohomology_degree_two_mapping_torus(capsys):
    problem = load_bundled("mapping_torus")
    status, out = run("cohomology", problem, degree=2)
    assert status == 0
    assert "Z^5 + Z/2 + Z/2" in out
    assert "(Z + Z/2 + Z) (0 + Z + 0) (Z + Z/2 + Z)" in out


def test_realizable_heisenberg_output():
    problem = load_bundled("heisenberg")
    status, out = run("realizable", problem)
    assert status == 0
    assert "group: Z^4" in out
    assert "cut out by: g2 + g5 = 0" in out


def test_obstruction_output_t3():
    problem = load_bundled("t3")
    status, out = run("obstruction", problem)
    assert status == 0
    assert "matrix row: [1 0 0 0 1 0 0 0 1]" in out


def test_validate_check_diagonal_seeded():
    problem = load_bundled("mapping_torus")
    status, out = run("validate", problem, check_diagonal=True, seed=7)
    assert status == 0
    assert "diagonal certification" in out
    # the randomized suite runs many more checks than the basic pass
    basic = run("validate", problem)[1]
    checks = int(out.split("(")[1].split(" ")[0])
    basic_checks = int(basic.split("(")[1].split(" ")[0])
    assert checks > basic_checks


# ---------------------------------------------------------------------------
# determinism and JSON


@pytest.mark.parametrize("name", ["t3", "heisenberg", "mapping_torus"])
@pytest.mark.parametrize("fmt", ["text", "json"])
def test_reports_byte_identical(name, fmt):
    problem_a = load_bundled(name)
    problem_b = load_bundled(name)
    out_a = run("report", problem_a, fmt=fmt)[1]
    out_b = run("report", problem_b, fmt=fmt)[1]
    assert out_a == out_b


def test_json_report_roundtrips():
    problem = load_bundled("mapping_torus")
    _, out = run("report", problem, fmt="json")
    doc = json.loads(out)
    assert json.loads(json.dumps(doc)) == doc
    assert doc["status"] == "ok"
    assert doc["h2"]["group"] == {"free_rank": 5, "torsion": [2, 2],
                                  "text": "Z^5 + Z/2 + Z/2"}
    assert doc["obstruction"]["matrix"] == [["1", "0", "1", "0", "1", "0", "0"]]
    assert doc["realizable"]["group"]["free_rank"] == 4
    assert doc["witness"]["label"] == "g1"
    assert doc["digest"] == problem.digest()


def test_json_rationals_are_exact_strings(tmp_path):
    text = bundled_text("mapping_torus")
    problem = load_bundled("mapping_torus")
    # periods with halves survive as p/q strings in validation-free parse
    from lagfib.problemfile import serialize
    assert "e1_1 = [-1, 1/2, -1]" in serialize(problem)


def test_validate_json_shape():
    problem = load_bundled("t3")
    status, out = run("validate", problem, fmt="json")
    doc = json.loads(out)
    assert status == 0 and doc["ok"] is True
    names = [c["check"] for c in doc["checks"]]
    assert "relations[ell]" in names
    assert any(n.startswith("duality") for n in names)
