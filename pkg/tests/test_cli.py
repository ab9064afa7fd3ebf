import json

import pytest

from planarperc.cli import main
from planarperc.graphio import read_graph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_round_trip(tmp_path, capsys):
    path = tmp_path / "tri.pg"
    assert run(capsys, "gen", "triangular", "--size", "3", "--out", str(path))[0] == 0
    g = read_graph(str(path))
    assert len(g) == 16
    code, out, _ = run(capsys, "gen", "triangular", "--size", "3")
    assert code == 0 and out == path.read_text()


@pytest.mark.parametrize("family", ["tree", "strip", "tilde", "counterexample", "corridor", "cone"])
def test_gen_families(capsys, family):
    code, out, _ = run(capsys, "gen", family, "--N", "2", "--size", "1")
    assert code == 0 and out.startswith("pg ")


def test_sample_and_phi(tmp_path, capsys):
    path = tmp_path / "tri.pg"
    main(["gen", "triangular", "--size", "4", "--out", str(path)])
    code, out, _ = run(capsys, "sample", str(path), "--p", "0,1", "--trials", "2")
    assert code == 0
    rows = [ln.split(",") for ln in out.splitlines() if not ln.startswith("#")]
    assert rows[0][:3] == ["trial", "p", "open"] and len(rows) == 5
    code, out, _ = run(capsys, "phi", str(path), "--p", "0.5", "--v", "12", "--S",
                       "12,13,11,17,7,6,16", "--format", "jsonl")
    assert code == 0
    head, row = [json.loads(x) for x in out.splitlines()]
    assert "version" in head["header"] and row["method"] == "exact"


def test_arms(tmp_path, capsys):
    path = tmp_path / "tri.pg"
    main(["gen", "triangular", "--size", "6", "--out", str(path)])
    code, out, _ = run(capsys, "arms", str(path), "--S", "24", "--trials", "5")
    assert code == 0 and "# arcs=2" in out


def test_experiment_jsonl_header(capsys):
    code, out, _ = run(capsys, "cone-law", "--depth", "2", "--p-grid", "0.5", "--trials", "20",
                       "--format", "jsonl", "--seed", "3")
    assert code == 0
    head = json.loads(out.splitlines()[0])["header"]
    assert head["kind"] == "cone-law" and head["seed"] == 3 and head["trials"] == 20


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("kind=sweep\nB=4\ndepths=3,4\np_grid=0.3\ntrials=10\nseed=1\n")
    code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--trials", "12")
    assert code == 0 and "# trials=12" in out


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "sweep", "--bogus")[0] == 2
    assert run(capsys, "sweep", "--config", str(tmp_path / "missing.cfg"))[0] == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour=red\n")
    assert run(capsys, "sweep", "--config", str(bad))[0] == 2
    code, _, err = run(capsys, "gen", "counterexample", "--N", "9")
    assert code == 3 and "SizeOverflow" in err
    path = tmp_path / "tri.pg"
    main(["gen", "triangular", "--size", "4", "--out", str(path)])
    capsys.readouterr()
    assert run(capsys, "phi", str(path), "--p", "0.5", "--v", "0", "--S", "1,2")[0] == 4
