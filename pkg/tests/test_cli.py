from __future__ import annotations

import json

import pytest

from conftest import GOLDEN, SPECS
from pcm.cli import main
from pcm.dsl import parse_spec

F1 = str(SPECS / "ss_example.pcm")
F2S = str(SPECS / "f2_star.pcm")
ABEL = str(SPECS / "abelian.pcm")


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_golden_report_bytes(capsys):
    rc, out, _ = run(capsys, "identities", F1, "--subst", "alpha=-2", "--subst", "beta=0", "--json")
    assert rc == 0
    assert out.encode() == (GOLDEN / "f1_report.json").read_bytes()


def test_comma_separated_subst(capsys):
    rc, out, _ = run(capsys, "identities", F1, "--subst", "alpha=-2,beta=0", "--json")
    assert rc == 0 and out.encode() == (GOLDEN / "f1_report.json").read_bytes()


def test_solve_paracontact(capsys):
    rc, out, _ = run(capsys, "solve", F1, "--condition", "paracontact")
    assert rc == 3 and out.strip() == "{alpha + 2}"
    rc, out, _ = run(capsys, "solve", F1, "--condition", "paracontact", "--json")
    assert json.loads(out)["constraints"] == ["alpha + 2"]


def test_solve_never_holds(capsys):
    rc, out, _ = run(capsys, "solve", F1, "--subst", "alpha=-2", "--condition", "flat")
    assert rc == 2 and out.strip() == "{1}"


def test_check_exit_codes(capsys):
    assert run(capsys, "check", F1, "--subst", "alpha=-2")[0] == 0
    assert run(capsys, "check", F1)[0] == 3
    assert run(capsys, "check", ABEL)[0] == 2


def test_identities_exit_codes(capsys):
    assert run(capsys, "identities", F2S)[0] == 2
    assert run(capsys, "identities", F2S, "--only", "eq5,prop33")[0] == 0
    assert run(capsys, "identities", F1, "--only", "paracontact")[0] == 3
    rc, out, _ = run(capsys, "identities", F2S, "--only", "eq5.trl")
    assert "eq5.trl" in out and "holds" in out


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.pcm"
    bad.write_text('manifold "b" {\n  dim 3\n  metric diag(1, -1, 1)\n  bracket [1,1] = e3\n}\n')
    rc, _, err = run(capsys, "check", str(bad))
    assert rc == 1 and f"{bad}:4:12: error: bracket indices must differ" in err
    assert run(capsys, "check", str(tmp_path / "missing.pcm"))[0] == 1
    assert run(capsys, "check", F1, "--subst", "gamma=1")[0] == 1
    assert run(capsys, "check", F1, "--subst", "alpha=x")[0] == 1
    assert run(capsys, "identities", F2S, "--only", "eq99")[0] == 1
    # the suite refuses a structure that is not almost paracontact
    riem = tmp_path / "riem.pcm"
    riem.write_text(open(F2S).read().replace("diag(1, -1, 1)", "diag(1, 1, 1)"))
    assert run(capsys, "identities", str(riem))[0] == 1
    assert run(capsys, "invariants", str(riem))[0] == 1


def test_invariants_json(capsys):
    rc, out, _ = run(capsys, "invariants", F2S, "--json")
    assert rc == 0
    assert json.loads(out)["invariants"] == {"scal": "9/2", "trl": "-3/2", "trh2": "1/2", "c2": "-1"}


def test_dhomothety(capsys, tmp_path):
    target = tmp_path / "image.pcm"
    rc, out, _ = run(capsys, "dhomothety", F1, "--subst", "alpha=-2,beta=0", "--alpha", "4", "--emit", str(target),
                     "--verify")
    assert rc == 0
    assert "dhom.ricci_law: holds" in out
    image = parse_spec(target.read_text())
    assert [str(image.metric[i, i]) for i in range(3)] == ["4", "-4", "16"]
    assert run(capsys, "dhomothety", F2S, "--alpha", "0")[0] == 1
    assert run(capsys, "dhomothety", ABEL, "--alpha", "2")[0] == 1
    rc, out, _ = run(capsys, "dhomothety", F2S, "--alpha", "3")
    assert rc == 0 and parse_spec(out).dim == 3


def test_dhomothety_verify_reports_failing_law(capsys):
    rc, _, err = run(capsys, "dhomothety", F2S, "--alpha", "9", "--verify")
    assert rc == 2 and "dhom.ricci_law: fails" in err


def test_search(capsys):
    rc, out, _ = run(capsys, "search", "--budget", "50", "--seed", "1", "--json")
    assert rc == 0
    hits = json.loads(out)
    assert hits and all(parse_spec(h["spec"]).dim == 3 for h in hits)
    rc2, out2, _ = run(capsys, "search", "--budget", "50", "--seed", "1", "--json")
    assert out2 == out
    rc, text, _ = run(capsys, "search", "--budget", "5", "--seed", "2", "--family", "f2-diagonal")
    assert rc == 0 and text.startswith("# ")


def test_usage_error_exits_nonzero():
    with pytest.raises(SystemExit) as info:
        main(["solve", F1, "--condition", "einstein"])
    assert info.value.code != 0
