import io
import json

import pytest

from nashgadgets.cli import main
from nashgadgets.game import parse_game
from nashgadgets.systems import parse_bilinear

LINEAR = "qsys 1\nvars 1\neq 1:1:1 -1:0:1\n"
ONE_BSYS = "bsys 1\ndim 2\nmat\n1 0\n0 -1\n"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stream=out)
    text = out.getvalue()
    records = [json.loads(line) for line in text.splitlines() if line.startswith("{")]
    return code, text, records


@pytest.fixture
def qsys(tmp_path):
    p = tmp_path / "x.qsys"
    p.write_text(LINEAR)
    return p


def test_reduce_writes_a_game(qsys, tmp_path):
    out = tmp_path / "g1.game"
    code, _, recs = run("reduce", "--in", str(qsys), "--gadget", "g1", "--out", str(out))
    assert code == 0 and recs[-1]["ok"]
    g = parse_game(out.read_text())
    assert g.action_counts == (5, 3, 3)


def test_reduce_bsys_output(qsys, tmp_path):
    out = tmp_path / "x.bsys"
    assert run("reduce", "--in", str(qsys), "--gadget", "bsys", "--out", str(out))[0] == 0
    b = parse_bilinear(out.read_text())
    assert b.dim == 2 and b.num_equations == 2


def test_reduce_sniffs_bsys_behind_qsys_extension(tmp_path):
    p = tmp_path / "one.qsys"
    p.write_text(ONE_BSYS)
    code, text, _ = run("reduce", "--in", str(p), "--gadget", "g0")
    assert code == 0 and "actions 2 2 2" in text


def test_reduce_h_gadget_to_stdout():
    code, text, recs = run("reduce", "--gadget", "h5")
    assert code == 0 and recs == []
    assert parse_game(text).action_counts == (2, 2, 2)


def test_check_ne(qsys, tmp_path):
    game = tmp_path / "g1.game"
    run("reduce", "--in", str(qsys), "--gadget", "g1", "--out", str(game))
    code, text, recs = run("check", "--in", str(game), "--pure", "⊥", "⊥", "⊥", "--property", "ne")
    assert code == 0 and recs[-1]["status"] == "YES"
    assert recs[-1]["witness"]["payoffs"] == ["-2/1", "1/1", "1/1"]


def test_check_strong_and_pareto(tmp_path):
    h = tmp_path / "h1.game"
    run("reduce", "--gadget", "h1", "--u", "1", "--out", str(h))
    assert run("check", "--in", str(h), "--pure", "⊥,⊥,⊥", "--property", "strong")[0] == 0
    code, _, recs = run("check", "--in", str(h), "--pure", "G", "G", "G", "--property", "ne")
    assert code == 1 and recs[-1]["status"] == "NO"
    code, _, recs = run("check", "--in", str(h), "--pure", "⊥", "⊥", "⊥", "--property", "coalition:1,2")
    assert recs[-1]["status"] == "NO"


def test_check_condition_exit_codes(tmp_path):
    h = tmp_path / "h1.game"
    run("reduce", "--gadget", "h1", "--out", str(h))
    args = ["check", "--in", str(h), "--pure", "G", "G", "G", "--property"]
    assert run(*args, "condition:NEWithLargePayoffs", "--u", "0")[0] == 0
    assert run(*args, "condition:NEWithLargePayoffs", "--u", "1")[0] == 1
    assert run(*args, "condition:NoSuchProblem")[0] == 2


def test_solve_h5(tmp_path):
    h = tmp_path / "h5.game"
    run("reduce", "--gadget", "h5", "--out", str(h))
    code, text, recs = run("solve", "--in", str(h))
    assert code == 0
    assert "sqrt(6)" in text
    assert len(recs) == 1 and recs[0]["flag"] == "EXACT"
    assert recs[0]["profile"][1][0] == "alg 3/1 -1/1 6"


def test_lemmas_single_suite():
    code, text, recs = run("lemmas", "--suite", "h5")
    assert code == 0 and all(r["ok"] for r in recs)
    assert "0.550510257217" in text


def test_roundtrip_planted_is_deterministic():
    a = run("roundtrip", "--seed", "3", "--gadget", "g5")
    b = run("roundtrip", "--seed", "3", "--gadget", "g5")
    assert a == b and a[0] == 0
    assert a[2][-1]["ne"] == "YES"


def test_roundtrip_from_file(qsys):
    code, _, recs = run("roundtrip", "--in", str(qsys), "--solution", "1", "--gadget", "g1")
    assert code == 0 and recs[-1]["ne"] == "YES"


def test_usage_errors(capsys):
    assert main(["check", "--pure", "G"], stream=io.StringIO()) == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"], stream=io.StringIO())
    assert exc.value.code == 2
    code, _, _ = run("lemmas", "--suite", "nope")
    assert code == 2
