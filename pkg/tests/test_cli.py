import json

import pytest

from instances import two_triangle_walk
from tri2m.cli import EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main, scaling_exponent
from tri2m.graph import format_graph
from tri2m.matching import format_matching, format_walk
from tri2m.oracle import brute_force_optimum


@pytest.fixture
def files(tmp_path):
    inst = two_triangle_walk()
    g = inst.graph
    paths = {
        "graph": tmp_path / "g.txt",
        "m": tmp_path / "m.txt",
        "bad": tmp_path / "bad.txt",
        "walk": tmp_path / "w.txt",
        "empty": tmp_path / "empty.txt",
    }
    paths["graph"].write_text(format_graph(g))
    paths["m"].write_text(format_matching(g, inst.m))
    paths["bad"].write_text(format_matching(g, inst.edge_set(["ab", "ac", "bc"])))
    paths["walk"].write_text(format_walk(g, inst.walk("amenable")) + "\n" + format_walk(g, inst.walk("interleaved")) + "\n")
    paths["empty"].write_text("s 0\n")
    return inst, {k: str(v) for k, v in paths.items()}


def test_solve_prints_matching(files, capsys, tmp_path):
    inst, p = files
    out_trace = tmp_path / "t.json"
    assert main(["solve", p["graph"], "--trace", str(out_trace), "--stats"]) == EXIT_OK
    out = capsys.readouterr()
    assert out.out.splitlines()[-1] == f"s {brute_force_optimum(inst.graph).optimum_size}"
    assert "augmentations" in out.err
    assert isinstance(json.loads(out_trace.read_text()), list)


def test_verify_exit_codes(files, capsys):
    _, p = files
    assert main(["verify", p["graph"], p["m"]]) == EXIT_OK
    assert main(["verify", p["graph"], p["bad"]]) == EXIT_VERIFY
    assert "FAIL triangle" in capsys.readouterr().out


def test_verify_walk_flags(files, capsys):
    _, p = files
    assert main(["verify", p["graph"], p["m"], "--walk", p["walk"]]) == EXIT_OK
    lines = [x for x in capsys.readouterr().out.splitlines() if x.startswith("w ")]
    assert "amenable=true" in lines[0]
    assert "amenable=false" in lines[1]


def test_decompose(files, capsys):
    _, p = files
    assert main(["decompose", p["graph"], p["empty"], p["m"]]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[-1].startswith("VALID")


def test_oracle_prints_size_first(files, capsys):
    inst, p = files
    assert main(["oracle", p["graph"]]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    size = brute_force_optimum(inst.graph).optimum_size
    assert lines[0] == f"s {size}"
    assert len(lines) == size + 1


def test_usage_errors(files, tmp_path):
    _, p = files
    assert main(["solve", str(tmp_path / "missing.txt")]) == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == EXIT_USAGE
    assert main(["verify", p["graph"], p["walk"]]) == EXIT_USAGE  # not a matching file
    assert main(["gen", "--n", "5", "--p", "2.0", "--seed", "0"]) == EXIT_USAGE


def test_gen_and_bench(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for seed in range(3):
        assert main(["gen", "--n", "7", "--p", "0.5", "--seed", str(seed), "-o", str(corpus / f"g{seed}.txt")]) == EXIT_OK
    assert main(["bench", "--corpus", str(corpus), "--check"]) == EXIT_OK
    assert "oracle mismatches 0" in capsys.readouterr().out


def test_scaling_exponent():
    rows = [{"n": n, "m": 3 * n, "seconds": 0.001 * n**1.5} for n in (10, 20, 40)]
    assert scaling_exponent(rows) == pytest.approx(1.5)
    assert scaling_exponent(rows[:1]) is None
