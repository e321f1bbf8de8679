import csv
import json
import subprocess
import sys

import pytest

from stresslab.cli import CHECKS, main


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_gen_octahedron(tmp_path, capsys):
    out = tmp_path / "oct.facets"
    code, _ = run(["gen", "boundary_crosspolytope", "3", "-o", str(out)], capsys)
    assert code == 0
    assert len(out.read_text().strip().splitlines()) == 8


def test_gen_cyclic(tmp_path, capsys):
    out = tmp_path / "c.facets"
    assert run(["gen", "cyclic", "7", "4", "-o", str(out)], capsys)[0] == 0
    assert len(out.read_text().strip().splitlines()) == 14


def test_gen_bad_reduction_pair(tmp_path, capsys):
    out = tmp_path / "bad.facets"
    assert run(["gen", "bad_reduction", "-o", str(out)], capsys)[0] == 0
    assert out.exists() and (tmp_path / "bad.facets.coords.json").exists()


def test_gen_errors(tmp_path, capsys):
    assert run(["gen", "nonsense"], capsys)[0] == 2
    assert run(["gen", "cyclic", "x"], capsys)[0] == 2
    assert run(["gen", "icosahedron", "-o", str(tmp_path / "missing" / "x")], capsys)[0] == 2


def test_check_lefschetz_icosahedron(tmp_path, capsys):
    facets = tmp_path / "icosa.facets"
    run(["gen", "icosahedron", "-o", str(facets)], capsys)
    js = tmp_path / "r.json"
    code, out = run(["check", "lefschetz", str(facets), "--k", "1", "--trials", "5", "--seed", "7",
                     "--json", str(js)], capsys)
    assert code == 0 and "lefschetz: pass" in out.out
    rep = json.loads(js.read_text())
    assert rep["schema"] == "stresslab/1" and rep["passed"]
    assert rep["inputs"][str(facets)]
    assert "timings" not in rep


def test_check_kappa_bad_reduction(capsys):
    code, out = run(["check", "kappa", "bad_reduction", "--subcomplex", "intersection", "--field", "q"], capsys)
    assert code == 1 and "FAIL" in out.out


def test_kappa_report_values(tmp_path, capsys):
    js = tmp_path / "k.json"
    run(["check", "kappa", "bad_reduction", "--subcomplex", "intersection", "--json", str(js)], capsys)
    details = json.loads(js.read_text())["results"][0]["details"]
    assert (details["kappa_k"], details["kappa_k1"]) == (3, 2)


def test_check_biased_pd_circle(tmp_path, capsys):
    facets = tmp_path / "circle.facets"
    run(["gen", "circle", "-o", str(facets)], capsys)
    coords = str(facets) + ".coords.json"
    base = ["check", "biased-pd", str(facets), "--coords", coords, "--field", "q"]
    assert run(base + ["--subcomplex", "antipodal"], capsys)[0] == 1
    assert run(base + ["--subcomplex", "adjacent"], capsys)[0] == 0


def test_deterministic_json(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(["check", "pd", "torus", "--seed", "3", "--json", str(p)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_timings_opt_in(tmp_path, capsys):
    js = tmp_path / "t.json"
    run(["check", "m-sequence", "octahedron", "--timings", "--json", str(js)], capsys)
    assert "timings" in json.loads(js.read_text())


def test_csv_output(tmp_path, capsys):
    path = tmp_path / "r.csv"
    run(["check", "kuhnel", "torus", "--csv", str(path)], capsys)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["check", "item", "passed", "details"] and len(rows) >= 2


@pytest.mark.parametrize("argv", [["check", "lefschetz", "no/such/file"],
                                  ["check", "lefschetz", "octahedron", "--field", "fp:12"],
                                  ["check", "biased-pd", "octahedron", "--subcomplex", "star:99"]])
def test_input_errors(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_malformed_facet_file(tmp_path, capsys):
    bad = tmp_path / "bad.facets"
    bad.write_text("0 1 2\n0 1\n{not json")
    assert run(["check", "lefschetz", str(bad)], capsys)[0] == 2


def test_unknown_check():
    with pytest.raises(SystemExit) as e:
        main(["check", "frobnicate"])
    assert e.value.code == 2


@pytest.mark.parametrize("argv", [
    ["pd", "octahedron"], ["hall-laman", "octahedron", "--subcomplex", "star:0"],
    ["gks", "octahedron"], ["crossing", "100,10"], ["socle", "torus"], ["partition", "octahedron"],
    ["cone", "octahedron"], ["m-sequence", "icosahedron"], ["kazhdan"], ["perturbation", "--count", "5"],
])
def test_every_check_runs(argv, capsys):
    assert run(["check"] + argv, capsys)[0] == 0


def test_laman_check(tmp_path, capsys):
    g = tmp_path / "g.edges"
    g.write_text("0 1\n1 2\n2 0\n")
    assert run(["check", "laman", str(g)], capsys)[0] == 0


def test_all_checks_listed():
    assert len(CHECKS) == 15


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "stresslab.cli", "check", "crossing", "100,10"], capture_output=True,
                         text=True)
    assert res.returncode == 0


def test_crossing_value(tmp_path, capsys):
    js = tmp_path / "c.json"
    run(["check", "crossing", "100,10", "--json", str(js)], capsys)
    d = json.loads(js.read_text())["results"][0]["details"]
    assert d["bound"] == "625/4" and d["applicable"]
