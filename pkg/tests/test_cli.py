from __future__ import annotations

import json

import numpy as np
import pytest
from conftest import TANNER_155

from lpcodes import __version__
from lpcodes.cli import EXIT_CHECK_FAILED, EXIT_INVARIANT, EXIT_OK, EXIT_PARSE, EXIT_REFUSED, main
from lpcodes.f2core import BinMatrix
from lpcodes.formats import read_alist, write_alist

REP3 = "group: C1\n1, 1, 0\n0, 1, 1\n1, 0, 1\n"


def run(capsys, *argv):
    code = main(["--jobs", "1", *map(str, argv)])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def _descriptor(tmp_path, name, desc, **files):
    for fname, text in files.items():
        (tmp_path / fname.replace("_", ".")).write_text(text)
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(desc))
    return path


def test_construct_hp_and_toric_distance(tmp_path, capsys):
    path = _descriptor(tmp_path, "toric", {"type": "hp", "a": "rep3.txt", "b": "rep3.txt"}, rep3_txt=REP3)
    code, rep, _ = run(capsys, "construct", path)
    assert code == EXIT_OK and (rep["n"], rep["k"]) == (18, 2)
    assert rep["schema"] == 1 and rep["version"] == __version__
    out = tmp_path / "toric"
    assert json.loads((out / "report.json").read_text())["k"] == 2
    code, rep, _ = run(capsys, "distance", out)
    assert code == EXIT_OK and (rep["dz"], rep["dx"]) == (3, 3)
    assert rep["dz_kind"] == "exact"


def test_construct_lp_square_tanner(tmp_path, capsys):
    path = _descriptor(tmp_path, "lp", {"type": "lp_square", "a": "tanner155.qc"}, tanner155_qc=TANNER_155)
    code, rep, _ = run(capsys, "construct", path, "--out", tmp_path / "out")
    assert code == EXIT_OK and (rep["n"], rep["k"]) == (1054, 140)
    H = read_alist(tmp_path / "out" / "HX.alist")
    assert H.cols == 1054


def test_construct_inline_operands(tmp_path, capsys):
    desc = {"type": "gb", "a": "group: C3\n1+x", "b": "group: C3\n1+x"}
    code, rep, _ = run(capsys, "construct", _descriptor(tmp_path, "gb", desc))
    assert code == EXIT_OK and (rep["n"], rep["k"]) == (6, 2)


def test_construct_errors(tmp_path, capsys):
    bad = _descriptor(tmp_path, "bad", {"type": "lp", "a": "group: C3\nx^, 1", "b": "group: C3\n1"})
    code, _, err = run(capsys, "construct", bad)
    assert code == EXIT_PARSE and "x^" in err
    missing = _descriptor(tmp_path, "missing", {"type": "hp", "a": "group: C1\n1"})
    assert run(capsys, "construct", missing)[0] == EXIT_PARSE
    (tmp_path / "broken.json").write_text("{\n  \"type\": ")
    code, _, err = run(capsys, "construct", tmp_path / "broken.json")
    assert code == EXIT_PARSE and "line 2" in err


def test_non_orthogonal_pair_is_invariant_violation(tmp_path, capsys):
    write_alist(tmp_path / "HX.alist", BinMatrix.from_dense([[1, 0]]))
    write_alist(tmp_path / "HZ.alist", BinMatrix.from_dense([[1, 1]]))
    assert run(capsys, "analyze", tmp_path)[0] == EXIT_INVARIANT


def test_distance_k_zero_and_estimate(tmp_path, capsys):
    zero = tmp_path / "zero"
    zero.mkdir()
    write_alist(zero / "HX.alist", BinMatrix.identity(3))
    write_alist(zero / "HZ.alist", BinMatrix.from_dense(np.zeros((0, 3), dtype=np.uint8)))
    code, rep, _ = run(capsys, "distance", zero)
    assert code == EXIT_OK and rep["dz"] == "infinity" and rep["dx"] == "infinity"
    path = _descriptor(tmp_path, "toric", {"type": "hp", "a": "rep3.txt", "b": "rep3.txt"}, rep3_txt=REP3)
    run(capsys, "construct", path)
    first = run(capsys, "distance", tmp_path / "toric", "--method", "estimate", "--seed", 5, "--trials", 50)
    second = run(capsys, "distance", tmp_path / "toric", "--method", "estimate", "--seed", 5, "--trials", 50)
    assert first == second and first[1]["dz_kind"] == "upper-bound" and first[1]["dz"] >= 3


def test_distance_budget_refusal(tmp_path, capsys):
    path = _descriptor(tmp_path, "toric", {"type": "hp", "a": "rep3.txt", "b": "rep3.txt"}, rep3_txt=REP3)
    run(capsys, "construct", path)
    code, _, err = run(capsys, "distance", tmp_path / "toric", "--budget", 2)
    assert code == EXIT_REFUSED and "required" in err


def test_factor_and_bound(tmp_path, capsys):
    code, rep, _ = run(capsys, "factor", "--l", 7)
    assert code == EXIT_OK and rep["degrees"] == [1, 3, 3] and len(rep["factors"]) == 3
    code, _, err = run(capsys, "factor", "--l", 4)
    assert code == EXIT_REFUSED and "even" in err
    (tmp_path / "w.txt").write_text("2 2\n")
    code, rep, _ = run(capsys, "bound", tmp_path / "w.txt")
    assert code == EXIT_OK and rep["bound"] == 4
    (tmp_path / "z.txt").write_text("0 0 0\n")
    assert run(capsys, "bound", tmp_path / "z.txt")[1]["bound"] == "infinity"


def test_expander_gen_lift_tanner(tmp_path, capsys):
    g = tmp_path / "g.txt"
    code, rep, _ = run(capsys, "expander", "gen", "--n", 100, "--w", 6, "--seed", 7, "--out", g)
    assert code == EXIT_OK and rep["w"] == 6 and rep["seed"] == 7 and g.exists()
    assert len(rep["eigenvalues"]) == 100 and rep["lambda"] < 6
    assert run(capsys, "expander", "gen", "--n", 100, "--w", 6, "--seed", 7)[1] == {**rep, "graph": None}

    small = tmp_path / "small.txt"
    run(capsys, "expander", "gen", "--n", 6, "--w", 3, "--seed", 1, "--out", small)
    lg = tmp_path / "lg.txt"
    code, rep, _ = run(capsys, "expander", "lift", "--graph", small, "--l", 5, "--seed", 2, "--out", lg)
    assert code == EXIT_OK and rep["lift"]["n"] == 30 and len(rep["shifts"]) == 9
    (tmp_path / "h0.txt").write_text("group: C1\n1, 1, 1\n")
    code, rep, _ = run(capsys, "expander", "tanner", "--graph", lg, "--l", 5, "--h0", tmp_path / "h0.txt")
    assert code == EXIT_OK and rep["shape"] == [30, 45] and "group: C5" in rep["qc_matrix"]
    out = tmp_path / "t.alist"
    code, rep, _ = run(capsys, "expander", "tanner", "--graph", small, "--h0", tmp_path / "h0.txt", "--out", out)
    assert code == EXIT_OK and read_alist(out).shape == (6, 9)


def test_expander_certify(tmp_path, capsys):
    write_alist(tmp_path / "zero.alist", BinMatrix.from_dense(np.zeros((2, 4), dtype=np.uint8)))
    code, rep, _ = run(capsys, "expander", "certify", "--matrix", tmp_path / "zero.alist", "--alpha", 0.5, "--beta", 0.5)
    assert code == EXIT_CHECK_FAILED and not rep["holds"] and len(rep["counterexample"]) == 1
    write_alist(tmp_path / "id.alist", BinMatrix.identity(6))
    code, rep, _ = run(capsys, "expander", "certify", "--matrix", tmp_path / "id.alist", "--alpha", 0.5, "--beta", 1)
    assert code == EXIT_OK and rep["holds"]


def test_expander_pipeline(capsys):
    code, rep, _ = run(capsys, "expander", "pipeline", "--l", 5, "--n", 6, "--w", 3, "--r", 1, "--seed", 1, "--trials", 20)
    assert code == EXIT_OK
    assert rep["k"] == rep["k_formula"] and rep["dx_witness_valid"]
    assert not any(key.startswith("_") for key in rep)


def test_balance(tmp_path, capsys):
    path = _descriptor(tmp_path, "toric", {"type": "hp", "a": "rep3.txt", "b": "rep3.txt"}, rep3_txt=REP3)
    run(capsys, "construct", path)
    (tmp_path / "rep2.txt").write_text("group: C1\n1, 1\n")
    code, rep, _ = run(capsys, "balance", tmp_path / "toric", tmp_path / "rep2.txt", "--grade", 2, "--out", tmp_path / "bal")
    assert code == EXIT_OK and rep["k"] == 2
    assert (tmp_path / "bal" / "HX.alist").exists()


def test_unknown_verb_exits_with_usage(capsys):
    with pytest.raises(SystemExit) as info:
        main(["nope"])
    assert info.value.code == 2
