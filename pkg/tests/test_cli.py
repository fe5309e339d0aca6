import io
import json
import subprocess
import sys

import pytest

from malcevlab import cli, malcev
from malcevlab.partitions import BinRelation


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_analyze_json(corpus):
    code, out, _ = run("analyze", corpus / "m2.alg", "--no-timings", "--max-perm", "3")
    assert code == 0
    j = json.loads(out)
    assert j["permutable"]["first_n"] == 2 and j["day"]["has_day_terms"] is True


def test_analyze_writes_file(corpus, tmp_path):
    dest = tmp_path / "r.json"
    code, out, _ = run("analyze", corpus / "sl2.alg", "--json", dest, "--no-timings")
    assert code == 0 and "report written" in out
    assert json.loads(dest.read_text())["cube"]["blocker"] == {"subuniverse": [0, 1], "subset": [1]}


def test_analyze_is_reproducible(corpus):
    a = run("analyze", corpus / "maj2.alg", "--no-timings", "--max-perm", "3")[1]
    b = run("analyze", corpus / "maj2.alg", "--no-timings", "--max-perm", "3")[1]
    assert a == b


def test_inconclusive_still_exits_zero(corpus):
    code, out, _ = run("analyze", corpus / "l2.alg", "--cap", "5", "--no-timings")
    assert code == 0 and "day" in json.loads(out)["inconclusive"]


@pytest.mark.parametrize(
    "argv,key,value",
    [
        (["day", "sl2.alg"], "holds", False),
        (["kk", "l2.alg"], "holds", True),
        (["permutable", "m2.alg", "--n", "2"], "holds", True),
        (["permutable", "maj2.alg", "--any"], "holds", False),
        (["cube", "maj2.alg", "--n", "3"], "holds", True),
    ],
)
def test_single_deciders(corpus, argv, key, value):
    argv = [argv[0], corpus / argv[1]] + argv[2:]
    code, out, _ = run(*argv)
    assert code == 0 and json.loads(out)[key] is value


def test_blocker(corpus):
    assert run("blocker", corpus / "sl2.alg")[1] == "blocker: subuniverse {0,1} subset {1}\n"
    assert run("blocker", corpus / "m2.alg")[1] == "blocker: none\n"


def test_color(corpus):
    code, out, _ = run("color", corpus / "sl2.alg", "--target", "s")
    assert code == 0 and out.startswith("coloring of 3 elements")
    assert run("color", corpus / "m2.alg", "--target", "order2")[1] == "none\n"
    assert run("color", corpus / "m2.alg", "--target", "p0")[1] == "none\n"
    assert run("color", corpus / "sl2.alg", "--target", f"file:{corpus / 'order2.struct'}")[0] == 0


def test_free_dump(corpus):
    code, out, _ = run("free", corpus / "sl2.alg", "--gens", "2", "--dump")
    assert code == 0
    assert out.splitlines()[0].endswith("3 elements")
    assert "join(x0, x1)" in out


def test_pentagon(corpus):
    assert run("pentagon", "verify", corpus / "p0.struct")[1] == "pentagon: yes; very-special under 2x2\n"
    code, out, _ = run("pentagon", "classify", corpus / "p0.struct", "--factor", "2x2")
    assert code == 0 and "full fibers" in out
    assert run("pentagon", "verify", corpus / "order2.struct")[0] == 1


def test_tarski(corpus):
    code, out, _ = run("tarski", corpus / "sl2.alg", "--marked", "1", "--steps", "2")
    assert code == 0
    assert "stage 2: size 16" in out and out.count("blocker: yes") == 3


def test_witness(corpus):
    code, out, _ = run("witness", "blocker", "--m", "4", "--u", "0,1,2", "--indices", "2")
    assert code == 0 and "identities verified: 8" in out
    from malcevlab.formats import parse_algebra

    alg = parse_algebra(out)
    assert alg.size == 4 and len(alg.ops) == 6


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "missing.alg"],
        ["color", "{c}/sl2.alg", "--target", "nope"],
        ["permutable", "{c}/sl2.alg"],
        ["tarski", "{c}/sl2.alg", "--marked", "0,1"],
        ["witness", "pentagon", "--m", "3", "--u", "0", "--indices", "2"],
        ["pentagon", "classify", "{c}/p0.struct", "--factor", "4x1"],
        ["analyze", "{c}/p0.struct"],
        ["frobnicate"],
    ],
)
def test_input_errors_exit_one(corpus, argv):
    argv = [a.format(c=corpus) for a in argv]
    code, _, err = run(*argv)
    assert code == 1


def test_cap_exits_two(corpus):
    code, _, err = run("free", corpus / "l2.alg", "--gens", "4", "--cap", "10")
    assert code == 2 and "resource limit" in err
    code, _, _ = run("tarski", corpus / "maj2.alg", "--marked", "1", "--steps", "4")
    assert code == 2


def test_disagreement_exits_three(corpus, monkeypatch):
    # a fake compatible order contradicts the coloring verdict for the Mal'cev algebra
    fake = BinRelation.from_matrix(__import__("numpy").array([[True, True], [False, True]]))
    monkeypatch.setattr(malcev, "find_compatible_order", lambda alg: fake)
    code, _, err = run("permutable", corpus / "m2.alg", "--any")
    assert code == 3 and "verification failure" in err
    code, _, _ = run("analyze", corpus / "m2.alg", "--max-perm", "2", "--max-cube", "2")
    assert code == 3


def test_help_exits_zero():
    assert run("--help")[0] == 0


def test_module_entry_point(corpus):
    res = subprocess.run(
        [sys.executable, "-m", "malcevlab", "blocker", str(corpus / "sl2.alg")],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0 and res.stdout.startswith("blocker:")
