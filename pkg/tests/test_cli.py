import json

import numpy as np
import pytest

from percolation import load_edge_list
from percolation.cli import main


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return dict(
        p3=write("p3.txt", "0 1\n1 2\n"),
        k4=write("k4.txt", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"),
        edge=write("edge.txt", "0 1\n"),
        p5=write("p5.txt", "0 1\n1 2\n2 3\n3 4\n"),
        s3=write("s3.txt", "1\n0.5\n0\n"),
        s2=write("s2.txt", "0 1\n1 0\n"),
        dir=tmp_path,
    )


def read_csv(path):
    rows = [l for l in open(path).read().splitlines() if not l.startswith("#")]
    assert rows[0] == "vertex,percolation"
    return [(int(a), float(b)) for a, b in (r.split(",") for r in rows[1:])]


def test_estimate_csv(files):
    out = str(files["dir"] / "est.csv")
    rc = main(["estimate", "--graph", files["p3"], "--random-states", "7", "--epsilon", "0.05",
               "--delta", "0.1", "--format", "csv", "--output", out])
    assert rc == 0
    rows = read_csv(out)
    assert [v for v, _ in rows] == [0, 1, 2]
    text = open(out).read()
    assert "# r=" in text and "# vd_bound=" in text and "# seed=0" in text


def test_estimate_k4_zero(files):
    out = str(files["dir"] / "k4.csv")
    assert main(["estimate", "--graph", files["k4"], "--random-states", "1", "--epsilon", "0.1",
                 "--output", out]) == 0
    assert all(v == 0 for _, v in read_csv(out))


def test_epsilon_out_of_range(files, capsys):
    with pytest.raises(SystemExit) as info:
        main(["estimate", "--graph", files["p3"], "--random-states", "7", "--epsilon", "1.5"])
    assert info.value.code == 1
    assert "epsilon" in capsys.readouterr().err


def test_exact_values(files):
    out = str(files["dir"] / "exact.csv")
    assert main(["exact", "--graph", files["p3"], "--states", files["s3"], "--output", out]) == 0
    values = [v for _, v in read_csv(out)]
    assert values == pytest.approx([0, 1 / 6, 0], abs=1e-15)


def test_exact_single_edge(files):
    out = str(files["dir"] / "e.csv")
    assert main(["exact", "--graph", files["edge"], "--states", files["s2"], "--output", out]) == 0
    assert [v for _, v in read_csv(out)] == [0, 0]


def test_missing_file(files, capsys):
    assert main(["exact", "--graph", str(files["dir"] / "missing.txt"), "--random-states", "1"]) == 2
    assert "No such file" in capsys.readouterr().err


def test_malformed_graph(files, capsys):
    bad = files["dir"] / "bad.txt"
    bad.write_text("0 1\n1 x\n")
    assert main(["exact", "--graph", str(bad), "--random-states", "1"]) == 2
    assert "line 2" in capsys.readouterr().err


def test_too_small_is_computation_error(files):
    one = files["dir"] / "loop.txt"
    one.write_text("# nothing\n")
    assert main(["exact", "--graph", str(one), "--random-states", "1"]) == 3


def test_json_output(files):
    out = str(files["dir"] / "e.json")
    assert main(["estimate", "--graph", files["p3"], "--states", files["s3"], "--epsilon", "0.2",
                 "--format", "json", "--output", out]) == 0
    doc = json.load(open(out))
    assert doc["kind"] == "estimated" and doc["vertices"] == [0, 1, 2]
    assert doc["r"] > 0 and doc["vd_bound"] >= 3 and len(doc["values"]) == 3


def test_original_labels_preserved(files):
    g = files["dir"] / "lab.txt"
    g.write_text("10 20\n20 30\n")
    s = files["dir"] / "lab_states.txt"
    s.write_text("30 0\n10 1\n20 0.5\n")
    out = str(files["dir"] / "lab.csv")
    assert main(["exact", "--graph", str(g), "--states", str(s), "--output", out]) == 0
    assert read_csv(out) == [(10, 0.0), (20, pytest.approx(1 / 6)), (30, 0.0)]


def test_csv_round_trip_exact(files):
    from percolation import RunConfig, assign_random_states, estimate_percolation

    gpath = str(files["dir"] / "ba.txt")
    assert main(["generate", "--model", "ba", "--n", "80", "--m", "2", "--seed", "3", "--output", gpath]) == 0
    out = str(files["dir"] / "ba.csv")
    assert main(["estimate", "--graph", gpath, "--random-states", "4", "--epsilon", "0.1",
                 "--seed", "5", "--output", out]) == 0
    g = load_edge_list(open(gpath).read())
    mem = estimate_percolation(g, assign_random_states(g.n, 4), RunConfig(0.1, seed=5)).values
    assert [v for _, v in read_csv(out)] == mem.tolist()


def test_identical_runs_byte_identical(files):
    outs = []
    for i in range(2):
        out = str(files["dir"] / f"run{i}.csv")
        assert main(["estimate", "--graph", files["p5"], "--random-states", "3", "--epsilon", "0.05",
                     "--seed", "8", "--threads", "2", "--output", out]) == 0
        outs.append(open(out, "rb").read())
    assert outs[0] == outs[1]


def test_compare_report(files):
    gpath = str(files["dir"] / "ba.txt")
    main(["generate", "--model", "ba", "--n", "200", "--m", "2", "--seed", "1", "--output", gpath])
    out = str(files["dir"] / "cmp.json")
    assert main(["compare", "--graph", gpath, "--random-states", "2", "--epsilon", "0.1",
                 "--delta", "0.1", "--trials", "5", "--output", out]) == 0
    rep = json.load(open(out))
    assert len(rep["trials"]) == 5
    assert sum(t["within_epsilon"] for t in rep["trials"]) >= 4
    errors = np.array([t["errors"] for t in rep["trials"]])
    assert rep["avg_error"] == pytest.approx(errors.mean(), rel=1e-12)
    assert rep["max_error"] == errors.max()
    assert rep["std_error"] == pytest.approx(errors.std(), rel=1e-12)
    for t, tr in enumerate(rep["trials"]):
        assert tr["max_error"] == errors[t].max()
        assert tr["avg_error"] == pytest.approx(errors[t].mean(), rel=1e-12)
    assert rep["max_error"] >= rep["avg_error"] >= 0
    assert rep["speedup"] == pytest.approx(rep["exact_seconds"] / rep["estimate_seconds"])


def test_compare_equal_states(files):
    s = files["dir"] / "eq.txt"
    s.write_text("0.5\n" * 5)
    out = str(files["dir"] / "cmp.csv")
    assert main(["compare", "--graph", files["p5"], "--states", str(s), "--epsilon", "0.1",
                 "--format", "csv", "--output", out]) == 0
    text = open(out).read()
    assert "# avg_error=0.0" in text and "# max_error=0.0" in text
    assert "trial,vertex,abs_error" in text


def test_compare_zero_trials(files):
    with pytest.raises(SystemExit) as info:
        main(["compare", "--graph", files["p5"], "--random-states", "1", "--epsilon", "0.1", "--trials", "0"])
    assert info.value.code == 1


def test_generate(files):
    out = str(files["dir"] / "g.txt")
    assert main(["generate", "--model", "ba", "--n", "100", "--m", "2", "--seed", "1", "--output", out]) == 0
    data = [l for l in open(out).read().splitlines() if l and not l.startswith("#")]
    assert len(data) == 196


@pytest.mark.parametrize("argv", [["--model", "er", "--n", "10", "--m", "2"],
                                  ["--model", "ba", "--n", "2", "--m", "2"]])
def test_generate_errors(argv, capsys):
    assert main(["generate", *argv]) == 1


def test_diameter(files, capsys):
    assert main(["diameter", "--graph", files["p5"], "--seed", "4"]) == 0
    assert 5 <= int(capsys.readouterr().out) <= 10


def test_unknown_command():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_bench(files):
    out = str(files["dir"] / "bench.csv")
    assert main(["bench", "--sizes", "60,120", "--repeats", "1", "--epsilon", "0.3", "--output", out]) == 0
    lines = open(out).read().splitlines()
    assert lines[0].startswith("backend,n,m,r")
    assert len(lines) == 1 + 2 * len(__import__("percolation").available_backends())
