import io as stdio
import json
import subprocess
import sys

import pytest

from cprank import io
from cprank.cli import RunConfig, run
from cprank.copositive import horn_matrix
from cprank.graphs import complete_graph


def call(*argv):
    buf = stdio.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


@pytest.fixture
def horn_file(tmp_path):
    return write(tmp_path, "horn.json", io.matrix_to_json(horn_matrix()))


def test_horn_text_and_json():
    code, text = call("horn")
    assert code == 0 and text.splitlines()[0].split() == ["1", "-1", "1", "1", "-1"]
    code, text = call("horn", "--format", "json")
    assert io.matrix_from_json(json.loads(text)) == horn_matrix()


def test_copositive_check_exit_codes(tmp_path, horn_file):
    assert call("copositive", "check", horn_file)[0] == 0
    neg = write(tmp_path, "neg.json", {"rows": [[1, -2], [-2, 1]]})
    code, text = call("copositive", "check", neg, "--format", "json")
    assert code == 1 and json.loads(text)["copositive"] is False
    assert json.loads(text)["min_value"] == [-1, 2]


def test_zeros_and_irreducible(horn_file):
    code, text = call("zeros", horn_file)
    assert code == 0 and text.startswith("10 zero supports")
    code, text = call("zeros", horn_file, "--format", "json")
    data = json.loads(text)
    assert sum(z["minimal"] for z in data["zero_supports"]) == 5
    code, text = call("irreducible", horn_file, "--format", "json")
    data = json.loads(text)
    assert data["n_irreducible"] and len(data["flags"]) == 15


def test_tf_formats(tmp_path):
    path = write(tmp_path, "k6.json", complete_graph(6).to_json())
    code, text = call("tf", path)
    assert code == 0 and text.startswith("tf = 9")
    code, text = call("tf", path, "--format", "json")
    assert json.loads(text)["tf"] == 9 and len(json.loads(text)["witness"]) == 9
    code, text = call("tf", path, "--format", "dot")
    assert code == 0 and text.count("--") == 9
    dot = tmp_path / "k6.dot"
    dot.write_text(complete_graph(6).to_dot("K6"))
    assert call("tf", str(dot))[1].startswith("tf = 9")


def test_cp_bound(tmp_path):
    star = [[5, 1, 1, 1, 1, 1]] + [[1 if j in (0, i) else 0 for j in range(6)] for i in range(1, 6)]
    path = write(tmp_path, "star.json", {"rows": star})
    code, text = call("cp", "bound", path, "--format", "json")
    assert code == 0 and json.loads(text)["bound"] == 6
    assert call("cp", "bound", path, "--format", "dot")[1].startswith("graph")
    neg = write(tmp_path, "neg.json", {"rows": [[1, -1], [-1, 1]]})
    assert call("cp", "bound", neg)[0] == 1


def test_decomp_commands(tmp_path):
    pair = write(tmp_path, "pair.json", {"n": 3, "terms": [{"vector": [1, 1, 0], "weight": "1"},
                                                            {"vector": [1, 1, 1], "weight": "1"}]})
    code, text = call("decomp", "pairmove", pair, "--format", "json")
    d = io.decomposition_from_json(json.loads(text))
    assert code == 0 and [t.vector for t in d.terms] == [(0, 0, 1), (2, 2, 1)]
    assert call("decomp", "distinct", pair)[0] == 0
    bad = write(tmp_path, "bad.json", {"n": 2, "terms": [{"vector": [1, 1], "weight": "1"},
                                                         {"vector": [2, 0], "weight": "1"}]})
    assert call("decomp", "pairmove", bad)[0] == 1
    three = write(tmp_path, "three.json", {"n": 2, "terms": [{"vector": [1, 1], "weight": "1"}] * 3})
    assert call("decomp", "pairmove", three)[0] == 2
    dd = write(tmp_path, "dd.json", {"rows": [[2, 1], [1, 2]]})
    code, text = call("decomp", "dd", dd, "--format", "json")
    assert code == 0 and io.decomposition_from_json(json.loads(text)).realize() == io.matrix_from_json({"rows": [[2, 1], [1, 2]]})
    ones = write(tmp_path, "ones.json", {"rows": [[1, 1, 1]] * 3})
    assert call("decomp", "dd", ones)[0] == 1


def test_table1_verify_writes_figures(tmp_path):
    code, text = call("table1", "verify", "--dot-dir", str(tmp_path / "figs"))
    assert code == 0 and "holds" in text
    assert len(list((tmp_path / "figs").glob("*.dot"))) == 11
    code, text = call("table1", "verify", "--case", "5", "--case", "36", "--format", "json")
    data = json.loads(text)
    assert [c["certificate"]["case_id"] for c in data["cases"]] == [5, 36]


def test_table1_knowledge():
    code, text = call("table1", "knowledge", "--case", "36", "--format", "json")
    assert code == 0 and [1, 2, 4, 5] in [c["support"] for c in json.loads(text)["confirmed"]]
    assert call("table1", "knowledge", "--case", "50")[0] == 2


def test_nearly_positive(tmp_path):
    path = write(tmp_path, "y.json", {"rows": [[1, 0, 2], [2, 1, 0], [0, 2, 1]]})
    code, text = call("nearly-positive", path, "--format", "json")
    assert code == 0 and json.loads(text)["min_entry"] >= 1e-6
    assert call("nearly-positive", write(tmp_path, "i.json", {"rows": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}))[0] == 2


def test_input_errors(tmp_path, horn_file):
    assert call("zeros", str(tmp_path / "missing.json"))[0] == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert call("zeros", str(junk))[0] == 2
    assert call("zeros", horn_file, "--format", "dot")[0] == 2
    assert call("zeros", horn_file, "--format", "xml")[0] == 2
    assert call("table1", "verify", "--case", "0")[0] == 2
    assert call("nonsense")[0] == 2
    asym = write(tmp_path, "asym.json", {"rows": [[1, 2], [3, 1]]})
    assert call("zeros", asym)[0] == 2
    big = write(tmp_path, "big.json", {"rows": [[1 if i == j else 0 for j in range(13)] for i in range(13)]})
    assert call("copositive", "check", big)[0] == 2


def test_run_config_validation():
    with pytest.raises(io.InputError):
        RunConfig("zeros", (), eps=0)
    with pytest.raises(io.InputError):
        RunConfig("zeros", (), jobs=0)


def test_module_entry_point(horn_file):
    proc = subprocess.run([sys.executable, "-m", "cprank", "irreducible", horn_file],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "N-irreducible: True" in proc.stdout
