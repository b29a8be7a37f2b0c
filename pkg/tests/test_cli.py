import io
import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sparsegalois.cli import SCHEMA, main
from sparsegalois.tuplefile import TupleFile, TupleFileError, corpus_names, load, parse


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    text = buf.getvalue()
    return code, (json.loads(text) if text.lstrip().startswith("{") else text.strip())


def strip_timing(text):
    d = json.loads(text)
    d.pop("timing")
    return json.dumps(d, sort_keys=True)


@st.composite
def tuple_files(draw):
    n = draw(st.integers(1, 3))
    k = draw(st.integers(1, 3))
    sets = [sorted(draw(st.lists(st.tuples(*[st.integers(-5, 5)] * n), min_size=1, max_size=5, unique=True)))
            for _ in range(k)]
    name = draw(st.none() | st.text("abc_", min_size=1, max_size=6))
    return TupleFile(n, sets, name)


@given(tuple_files())
def test_round_trip(tf):
    once = parse(tf.dumps())
    assert once == tf
    assert parse(once.dumps()) == once


def test_parse_errors_and_warnings():
    with pytest.raises(TupleFileError):
        parse("{not json")
    with pytest.raises(TupleFileError):
        parse({"sets": []})
    with pytest.raises(TupleFileError):
        parse({"n": 2, "sets": [[[0, 0], [1]]]})
    with pytest.raises(TupleFileError):
        parse({"sets": [[[0, 0]], [[1]]]})
    with pytest.warns(UserWarning):
        tf = parse({"n": 1, "sets": [[[0], [1], [1]]]})
    assert tf.sets == [[(0,), (1,)]] and tf.warnings


def test_corpus_resolution(tmp_path):
    assert "quartic" in corpus_names() and len(corpus_names()) >= 12
    assert load("examples/quartic.json").name == "quartic"
    assert load("corpus:prime5").sets == [[(0,), (5,)]]
    f = tmp_path / "mine.json"
    f.write_text(json.dumps({"sets": [[[0], [3]]]}))
    assert load(str(f)).n == 1
    with pytest.raises(TupleFileError):
        load("no_such_tuple")


def test_mv_report_shape():
    code, r = run("mv", "examples/prime5.json")
    assert code == 0
    assert r["schema"] == SCHEMA and r["status"] == "ok" and r["results"]["mixed_volume"] == 5
    assert len(r["input_digest"]) == 64 and "elapsed_s" in r["timing"]


@pytest.mark.parametrize("argv", [
    ["mv", "square_triangle"],
    ["flags", "double_simplex"],
    ["classify", "deg5", "--k-radical", "5"],
    ["solve", "hexagon_pair", "--seed", "3"],
    ["verify", "cubic", "--seed", "7"],
    ["enumerate", "--vmax", "2"],
    ["cayley", "square_triangle", "--subset", "1,2"],
    ["cone-reduce", "quadratic", "--seed", "1"],
])
def test_reports_are_deterministic(argv):
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        assert main(argv, out=buf) == 0
        outs.append(strip_timing(buf.getvalue()))
    assert outs[0] == outs[1]


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("SPARSEGALOIS_SEED", "4")
    _, r = run("solve", "square_pair")
    assert r["seed"] == 4
    _, r2 = run("solve", "square_pair", "--seed", "4")
    assert r["results"] == r2["results"]


def test_command_results():
    _, r = run("classify", "deg5")
    assert r["results"]["solvable"] is False and r["results"]["prediction"]["label"] == "Symmetric(5)"
    _, r = run("flags", "double_simplex")
    assert r["results"]["reduced"] is False and "numerically_reduced" in r["results"]["witnesses"]
    _, r = run("flags", "square_pair")
    assert r["results"]["dual_effective"] is True
    _, r = run("solve", "hexagon_pair", "--seed", "3")
    assert r["results"]["count"] == 6 and r["results"]["max_residual"] < 1e-9
    _, r = run("enumerate", "--vmax", "2")
    assert r["results"]["maximal_count"] == 3
    _, r = run("cayley", "square_triangle", "--subset", "2")
    assert r["results"]["subset"] == [2] and len(r["results"]["points"]) == 3
    _, r = run("cone-reduce", "quadratic", "--seed", "1")
    assert r["results"]["roots_f"] == r["results"]["roots_g"] == 2
    assert r["results"]["max_projection_distance"] < 1e-7


def test_quiet_headline():
    code, text = run("mv", "quartic", "--quiet")
    assert code == 0 and text == "4"
    code, text = run("verify", "double_simplex", "--seed", "7", "--quiet")
    assert code == 0 and text.startswith("MATCH")


def test_exit_codes():
    assert run("mv", "no_such_tuple")[0] == 1
    assert run("bogus")[0] == 1
    assert run("mv")[0] == 1
    assert run("cayley", "square_pair", "--subset", "3")[0] == 1
    code, r = run("mv", "face_tuple")
    assert code == 0
    # non-square tuple
    code, r = run("cone-reduce", "square_pair")
    assert code == 1 and r["status"] == "usage_error"
    code, r = run("enumerate", "--vmax", "6")
    assert code == 2 and r["error"]["type"] == "BoundsTooLarge"
    code, r = run("monodromy", "prime7", "--budget", "2")
    assert code == 2 and r["status"] == "computation_error"


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "sparsegalois", "mv", "cubic", "--quiet"],
                       capture_output=True, text=True, check=False)
    assert p.returncode == 0 and p.stdout.strip() == "3"
