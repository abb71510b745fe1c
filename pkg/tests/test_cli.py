import io
import json
import subprocess
import sys

import pytest

from cmk.catalogue import a2n_quiver, dumps
from cmk.cli import VERBS, run


def call(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def a4_file(tmp_path):
    path = tmp_path / "a4.json"
    path.write_text(dumps(a2n_quiver(2)))
    return str(path)


def test_catalogue_pipe_k0prime():
    code, quiver_json, _ = call("catalogue", "a2n", "--n", "2")
    assert code == 0
    code, out, _ = call("k0prime", "-", "--format", "json", stdin=quiver_json)
    assert code == 0
    assert out == '{"free_rank":1,"invariant_factors":[]}\n'


def test_det_a6(tmp_path):
    path = tmp_path / "a6.json"
    path.write_text(dumps(a2n_quiver(3)))
    code, out, _ = call("det", str(path), "--format", "json")
    assert code == 0 and json.loads(out) == {"det": 1, "positive": True}


def test_check_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "x",\n "indecomposables": [,\n}')
    code, out, err = call("check", str(path))
    assert code == 1 and out == ""
    assert err.startswith("cmk: error:") and "line 2" in err
    assert err.count("\n") == 1


def test_check_invalid_quiver(tmp_path):
    d = json.loads(dumps(a2n_quiver(2)))
    d["indecomposables"][1]["projective"] = True
    path = tmp_path / "two.json"
    path.write_text(json.dumps(d))
    code, _, err = call("check", str(path))
    assert code == 1 and "multiple projectives" in err


@pytest.mark.parametrize("argv, key", [
    (["k0prime"], "free_rank"),
    (["k0mf", "--hypersurface"], "free_rank"),
    (["armatrix"], "matrix"),
    (["det"], "det"),
    (["k1prime"], "expression"),
    (["k1mf", "--coefficients", "ff:9"], "expression"),
    (["k1cat"], "expression"),
    (["localize", "--subcat", "M0,M1"], "exact_at"),
    (["filtration"], "steps"),
    (["check"], "valid"),
])
def test_every_verb_on_a4(a4_file, argv, key):
    code, out, _ = call(argv[0], a4_file, *argv[1:], "--format", "json")
    assert code == 0
    assert key in json.loads(out)
    code, table, _ = call(argv[0], a4_file, *argv[1:])
    assert code == 0 and table.strip()


def test_verbs_covered():
    assert set(VERBS) == {"k0prime", "k0mf", "armatrix", "det", "k1prime", "k1mf", "k1cat",
                          "localize", "filtration", "catalogue", "check"}


def test_json_values(a4_file):
    _, out, _ = call("armatrix", a4_file, "--format", "json")
    assert json.loads(out)["matrix"] == [[-1, 0], [2, -1], [-1, 1]]
    _, out, _ = call("armatrix", a4_file, "--deleted", "--format", "json")
    assert json.loads(out)["matrix"] == [[2, -1], [-1, 1]]
    _, out, _ = call("k1mf", a4_file, "--coefficients", "ff:9", "--format", "json")
    assert json.loads(out)["text"] == "Z/3 ⊕ Z/3"
    _, out, _ = call("localize", a4_file, "--subcat", "M0", "--ring", "--format", "json")
    data = json.loads(out)
    assert data["exact_at"] == [True, True] and data["surjective_end"]
    assert "R/ReR Morita ↔ add(M1, M2)" in data["semiperfect_view"]


def test_table_labels(a4_file):
    _, out, _ = call("armatrix", a4_file)
    lines = out.splitlines()
    assert lines[0].split() == ["M1", "M2"]
    assert [l.split()[0] for l in lines[1:]] == ["M0", "M1", "M2"]


def test_envelope(a4_file):
    _, out, _ = call("k0mf", a4_file, "--format", "json", "--envelope")
    data = json.loads(out)
    assert data["quiver"] == "A4" and set(data["matrices"]) == {"T", "T'"}
    assert data["result"] == {"free_rank": 0, "invariant_factors": []}
    assert any("hypersurface" in f for f in data["flags"])


def test_k0mf_warns_without_flag(a4_file):
    code, _, err = call("k0mf", a4_file, "--format", "json")
    assert code == 0 and "hypersurface" in err


def test_refusal_exit_code(tmp_path):
    q = {"name": "sing",
         "indecomposables": [{"id": "P", "projective": True}, {"id": "X", "projective": False}],
         "ar_sequences": [{"target": "X", "middle": {"X": 2}, "left": "X"}]}
    path = tmp_path / "sing.json"
    path.write_text(json.dumps(q))
    code, out, err = call("k1prime", str(path))
    assert code == 2 and out == "" and "injectivity hypothesis unverified" in err
    code, _, err = call("filtration", str(path))
    assert code == 1 and "missing endo" in err


@pytest.mark.parametrize("argv", [
    ["k1prime", "a2n:2", "--coefficients", "ff:6"],
    ["k0prime"],
    ["frobnicate", "a2n:2"],
    ["localize", "a2n:2", "--subcat", "M9"],
    ["catalogue", "a2n"],
    ["catalogue", "a2n", "--n", "0"],
    ["det", "a2n:x"],
    ["det", "--sweep", "5..2"],
])
def test_input_errors(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == "" and err.startswith("cmk: error:")


def test_family_spec_and_sweep():
    code, out, _ = call("det", "--sweep", "1..20", "--format", "json")
    data = json.loads(out)
    assert code == 0 and [d["n"] for d in data] == list(range(1, 21))
    assert all(d["result"]["positive"] for d in data)
    code, out, _ = call("k0prime", "--sweep", "n=1..3")
    assert code == 0 and out.count("Z\n") == 3
    code, out, _ = call("catalogue", "a2n", "--sweep", "1..3")
    assert [q["name"] for q in json.loads(out)] == ["A2", "A4", "A6"]


def test_output_file(tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = call("k0prime", "a2n:4", "--format", "json", "-o", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text()) == {"free_rank": 1, "invariant_factors": []}


def test_deterministic(a4_file):
    for verb in ("k1prime", "filtration", "localize", "armatrix"):
        runs = {call(verb, a4_file, "--format", "json", "--envelope")[1] for _ in range(3)}
        assert len(runs) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cmk", "det", "a2n:2", "--format", "json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"det": 1, "positive": True}
