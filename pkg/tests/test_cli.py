from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from harmonic_lie import catalog
from harmonic_lie.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, run
from harmonic_lie.lie_algebra import algebra_to_dict


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    text = out.getvalue()
    return code, (json.loads(text) if text else None)


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


@pytest.fixture
def heis(tmp_path):
    return write(tmp_path, "heis.json", algebra_to_dict(catalog.heisenberg3()))


def test_reproduce_paper_example():
    code, rep = call("reproduce", "paper-example", "--lambda", "0,1,3,7", "--mu", "1")
    assert code == EXIT_OK and rep["pass"]
    res = rep["results"]
    assert res["nonparallel_witness"]["eigenspaces"] == [1, 2, 4]
    assert res["nabla_norm_sq"] == "18744"
    assert all(res["checks"].values())
    assert res["eigenvalues"] == ["0", "1", "3", "7"]


def test_reproduce_rational_input():
    code, rep = call("reproduce", "paper-example", "--lambda=-1/2,3,5/3,-7", "--mu=-2/3")
    assert code == EXIT_OK and rep["pass"]


@pytest.mark.parametrize("lam, mu", [("0,1,1,7", "1"), ("0,1,3", "1"), ("0,1,3,7", "0"), ("a,1,3,7", "1")])
def test_reproduce_bad_arguments(lam, mu):
    code, rep = call("reproduce", "paper-example", "--lambda", lam, "--mu", mu)
    assert code == EXIT_INPUT and rep is None


def test_check_heisenberg_fails(heis):
    code, rep = call("check", heis)
    assert code == EXIT_FAIL and not rep["pass"]
    assert rep["results"]["structure"]["failed_conditions"] == [1]
    assert rep["results"]["field"] == "rational"
    assert rep["input_digest"].startswith("sha256:") and len(rep["input_digest"]) == 71


def test_check_passes_with_explicit_operator(tmp_path):
    m, a = catalog.paper_codazzi_example(0, 1, 3, 7, 1)
    alg = write(tmp_path, "alg.json", algebra_to_dict(m.alg))
    op = write(tmp_path, "op.json", {"matrix": [[str(x) for x in row] for row in a.matrix]})
    code, rep = call("check", alg, "--tensor", op)
    assert code == EXIT_OK and rep["results"]["tensor"] == "given"
    assert rep["results"]["codazzi_defect"]["norm_sq"] == "0"


def test_check_float_metric(tmp_path):
    alg = write(tmp_path, "su2.json", algebra_to_dict(catalog.su2()))
    met = write(tmp_path, "g.json", {"field": "float", "gram": [[2.0, 0, 0], [0, 2.0, 0], [0, 0, 2.0]]})
    code, rep = call("check", alg, "--metric", met)
    assert code == EXIT_OK and rep["results"]["field"] == "float"
    berger = write(tmp_path, "b.json", {"field": "float", "gram": [[1.0, 0, 0], [0, 1.0, 0], [0, 0, 3.0]]})
    assert call("check", alg, "--metric", berger)[0] == EXIT_FAIL


def test_decompose(heis):
    code, rep = call("decompose", heis)
    assert code == EXIT_OK
    assert rep["results"]["decomposition"]["eigenvalues"] == ["-1/2", "1/2"]


def test_input_digest_is_stable(heis):
    assert call("check", heis)[1]["input_digest"] == call("check", heis)[1]["input_digest"]


def test_probe(tmp_path):
    alg = write(tmp_path, "su2.json", algebra_to_dict(catalog.su2()))
    code, rep = call("probe", alg, "--restarts", "4", "--seed", "1")
    assert code == EXIT_OK
    assert rep["results"]["classification"] == "harmonic_parallel"
    assert len(rep["results"]["metric_gram"]) == 3


def test_catalog_list_and_build(tmp_path):
    code, rep = call("catalog", "list")
    assert code == EXIT_OK and len(rep["results"]["algebras"]) == len(catalog.NAMES)
    out = tmp_path / "h4.json"
    code, rep = call("catalog", "build", "hyperbolic_solvable", "--n", "4", "--out", str(out))
    assert code == EXIT_OK
    assert json.loads(out.read_text())["dim"] == 4


@pytest.mark.parametrize(
    "content",
    ["{not json", json.dumps({"dim": 3, "brackets": [{"i": 1, "j": 2}]}), json.dumps([1, 2])],
)
def test_malformed_inputs(tmp_path, content):
    path = write(tmp_path, "bad.json", content)
    assert call("check", path)[0] == EXIT_INPUT


def test_missing_file_and_bad_command(tmp_path):
    assert call("check", str(tmp_path / "nope.json"))[0] == EXIT_INPUT
    assert call("frobnicate")[0] == EXIT_INPUT
    assert call("catalog", "build")[0] == EXIT_INPUT


def test_metric_errors(tmp_path, heis):
    notpd = write(tmp_path, "g.json", {"gram": [["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "1"]]})
    assert call("check", heis, "--metric", notpd)[0] == EXIT_INPUT
    small = write(tmp_path, "g2.json", {"gram": [["1", "0"], ["0", "1"]]})
    assert call("check", heis, "--metric", small)[0] == EXIT_INPUT


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "harmonic_lie.cli", "catalog", "list"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"][:3] == ["harmonic-lie", "catalog", "list"]


def test_rational_reports_are_byte_identical(heis):
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        run(["check", heis], stdout=buf)
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]
