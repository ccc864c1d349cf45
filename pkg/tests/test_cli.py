import csv
import io
import json

import pytest

from racg.cli import main

SQUARE = {"vertices": ["a", "b", "c", "d"], "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]]}
PENTAGON = {"vertices": list("abcde"),
            "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["d", "e"], ["e", "a"]]}


@pytest.fixture
def square_file(tmp_path):
    p = tmp_path / "square.json"
    p.write_text(json.dumps(SQUARE))
    return str(p)


@pytest.fixture
def pentagon_file(tmp_path):
    p = tmp_path / "pentagon.json"
    p.write_text(json.dumps(PENTAGON))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out.strip() else None


def test_reduce(capsys, square_file):
    code, doc = run_json(capsys, "reduce", "--graph", square_file, "--word", "b a c a")
    assert code == 0 and doc == {"word": "b a c a", "normal_form": "a b c a", "length": 4}
    code, doc = run_json(capsys, "reduce", "--graph", square_file, "--word", "a a")
    assert doc["normal_form"] == "" and doc["length"] == 0


def test_reduce_reads_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(SQUARE)))
    code, doc = run_json(capsys, "reduce", "--word", "b a")
    assert code == 0 and doc["normal_form"] == "a b"


def test_csupp_and_order(capsys, pentagon_file):
    code, doc = run_json(capsys, "csupp", "--graph", pentagon_file, "--word", "c d a d c")
    assert doc["csupp"] == ["a"] and doc["conjugator"] == "c d"
    code, doc = run_json(capsys, "order", "--graph", pentagon_file, "--word", "a c")
    assert doc["order"] == "infinite" and not doc["finite"]
    code, doc = run_json(capsys, "order", "--graph", pentagon_file, "--word", "a b")
    assert doc["order"] == 2


def test_classifiers(capsys, square_file, pentagon_file):
    code, doc = run_json(capsys, "classify-parabolic", "--graph", square_file, "--lambda", "a,c")
    assert doc["almost_malnormal"] is False and doc["join_free"] == "not-applicable"
    code, doc = run_json(capsys, "classify-parabolic", "--graph", pentagon_file, "--lambda", "a",
                         "--conjugator", "c d")
    assert doc["finite"] is True
    code, doc = run_json(capsys, "classify-collection", "--graph", pentagon_file,
                         "--lambda", "a", "--lambda", "c")
    assert doc["almost_malnormal_collection"] is True


def test_graph_actions(capsys, square_file, pentagon_file):
    code, doc = run_json(capsys, "graph", "joins", "--graph", pentagon_file, "--lambda", "a c")
    assert doc["contained_in_join"] and doc["join_witness"] == {"cone": "b"}
    code, doc = run_json(capsys, "graph", "cfs", "--graph", square_file)
    assert doc["cfs"] and doc["four_cycles"] == ["a c | b d"]
    code, out, _ = run(capsys, "graph", "cfs", "--graph", square_file, "--format", "dot")
    assert out.startswith("graph Gamma4")
    code, doc = run_json(capsys, "graph", "rank", "--graph", pentagon_file, "--pair", "a", "c", "--cap", "3")
    assert doc["display"] == ">=3"
    code, out, _ = run(capsys, "graph", "show", "--graph", square_file, "--format", "dot")
    assert '"a" -- "b";' in out


def test_family_pipeline(capsys, tmp_path):
    code, doc = run_json(capsys, "family", "omega", "--d", "3")
    path = tmp_path / "omega.json"
    path.write_text(json.dumps(doc))
    code, doc = run_json(capsys, "graph", "rank", "--graph", str(path), "--pair", "a_3", "b_3")
    assert doc["rank"] == 2 and not doc["at_cap"]
    code, _, err = run(capsys, "family", "omega")
    assert code == 1 and "--d" in err


def test_scans_exit_codes(capsys, pentagon_file, tmp_path):
    code, doc = run_json(capsys, "scan", "join-free", "--graph", pentagon_file, "--gen", "a c")
    assert code == 2 and doc["verdict"] == "certified-negative"
    code, doc = run_json(capsys, "family", "figure1")
    path = tmp_path / "fig.json"
    path.write_text(json.dumps(doc))
    code, doc = run_json(capsys, "scan", "join-free", "--subgroup", str(path), "--depth", "3")
    assert code == 0 and doc["verdict"] == "no-violation-up-to-bound"
    code, doc = run_json(capsys, "scan", "join-busting", "--subgroup", str(path), "--depth", "4")
    assert doc["estimate"] == 5 and doc["per_depth"] == [4, 5, 5, 5]
    code, doc = run_json(capsys, "scan", "malnormal", "--graph", pentagon_file, "--lambda", "a", "--depth", "2")
    assert code == 2 and doc["conjugation_scan"]["witness"]["g"] == "b"


def test_vkd(capsys, square_file, tmp_path):
    code, doc = run_json(capsys, "vkd", "build", "--graph", square_file, "--word", "a b a b")
    assert doc["arcs"] == [[0, 2], [1, 3]]
    path = tmp_path / "d.json"
    path.write_text(json.dumps({"boundary": ["a", "c", "a", "c"], "arcs": [[0, 2], [1, 3]]}))
    code, doc = run_json(capsys, "vkd", "validate", "--graph", square_file, "--diagram", str(path))
    assert code == 2 and doc["violation"].startswith("crossing-adjacency")
    code, doc = run_json(capsys, "vkd", "comb", "--graph", square_file, "--word", "a c b c a b", "--range", "0:3")
    assert doc["combed_word"] == "b a c"
    code, doc = run_json(capsys, "vkd", "reduce", "--graph", square_file, "--word", "a b", "--word", "a c")
    assert doc["reduced"] == "b c" and len(doc["tags"]["contributing"]) == 2
    code, doc = run_json(capsys, "vkd", "comb", "--graph", square_file, "--random", "10", "--seed", "3")
    assert code == 0 and "combed_word" in doc
    code, _, err = run(capsys, "vkd", "build", "--graph", square_file, "--word", "a c")
    assert code == 1 and "not the identity" in err


def test_ball_and_divergence(capsys, square_file):
    code, doc = run_json(capsys, "ball", "--graph", square_file, "--radius", "3")
    assert doc["sphere_sizes"] == [1, 4, 8, 12]
    code, out, _ = run(capsys, "ball", "--graph", square_file, "--radius", "2", "--format", "dot",
                       "--lambda", "b,d", "--r", "1")
    assert out.count("fillcolor") == 6
    code, out, _ = run(capsys, "divergence", "--graph", square_file, "--lambda", "b,d", "--radius", "8",
                       "--r", "1-3", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert [r[4] for r in rows[1:]] == ["2", "4", "6"]
    code, doc = run_json(capsys, "divergence", "--graph", square_file, "--radius", "6", "--r", "2")
    assert doc[0]["kind"] == "group" and doc[0]["value"] == 8


@pytest.mark.parametrize("argv, fragment", [
    (["reduce", "--word", "z"], "unknown vertex"),
    (["divergence", "--radius", "4", "--rho", "2"], "--rho"),
    (["divergence", "--radius", "4", "--r", "x"], "--r"),
    (["vkd", "comb", "--word", "a a", "--range", "0:9"], "--range"),
    (["scan", "join-free"], "no generators"),
])
def test_errors(capsys, square_file, argv, fragment):
    code, _, err = run(capsys, *argv, "--graph", square_file)
    assert code == 1 and fragment in err


def test_missing_and_bad_files(capsys, tmp_path):
    code, _, err = run(capsys, "reduce", "--graph", str(tmp_path / "none.json"), "--word", "a")
    assert code == 1 and "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(capsys, "reduce", "--graph", str(bad), "--word", "a")
    assert code == 1 and "not valid JSON" in err


def test_usage_error_is_not_a_witness(capsys):
    code, _, _ = run(capsys, "ball", "--radius", "-1")
    assert code == 1
