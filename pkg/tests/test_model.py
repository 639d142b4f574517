from __future__ import annotations

from fractions import Fraction

import pytest

from conftest import PHI, f1, f2
from pcm.conditions import CONDITIONS, condition_check, constraint_extract
from pcm.exact import Poly, Scalar
from pcm.geometry import geometry
from pcm.linalg import Matrix
from pcm.model import (ConstraintSet, JacobiError, SignatureError, SpecError, Tensor, Verdict, check_paracontact,
                       make_spec, phi_rank, validate_almost_paracontact)


def test_f1_almost_paracontact_for_all_parameters(F1):
    r = validate_almost_paracontact(F1)
    assert r.verdict == Verdict.HOLDS and r.residual == ()


def test_phi_xi_nonzero_fails():
    bad = make_spec("bad", 3, (), {(0, 1): [0, 0, -2]}, [1, -1, 1], {**PHI, 2: [1, 0, 0]}, [0, 0, 1])
    r = validate_almost_paracontact(bad)
    assert r.verdict == Verdict.FAILS
    assert any(lbl.startswith("(phi xi)") for lbl, _ in r.residual)


def test_signature_gate_is_distinct():
    bad = make_spec("riem", 3, (), {}, [1, 1, 1], PHI, [0, 0, 1])
    with pytest.raises(SignatureError):
        validate_almost_paracontact(bad)


def test_jacobi_is_a_hard_error_unless_extracted():
    t = Scalar.var("t", ("t",))
    # [E1,E2] = E3, [E1,E3] = E1, [E2,E3] = t E1 is not Lie unless t = 0
    bad = make_spec("nonlie", 3, ("t",), {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0], (1, 2): [t, 0, 0]},
                    [1, -1, 1], PHI, [0, 0, 1])
    with pytest.raises(JacobiError):
        validate_almost_paracontact(bad)
    r = validate_almost_paracontact(bad, extract_jacobi=True)
    assert any(lbl.startswith("jacobi") for lbl, _ in r.residual)


def test_check_paracontact_examples(F1, F1m2, F2sym):
    r = check_paracontact(F1)
    assert r.verdict == Verdict.CONDITIONAL
    assert str(r.constraints) == "{alpha + 2}"
    assert check_paracontact(F1m2).holds
    assert check_paracontact(F2sym).holds


def test_constraint_extract_examples(F1, F1_0):
    assert str(constraint_extract(F1, "paracontact").constraints) == "{alpha + 2}"
    flat = constraint_extract(F1_0, "flat")
    assert flat.constraints.never_holds()
    assert flat.verdict == Verdict.FAILS


def test_q_phi_on_f1_holds_for_every_beta(F1m2):
    # Q = diag(2b+2, 2b+2, -2) commutes with phi whatever beta is
    ex = constraint_extract(F1m2, "q-phi-commute")
    assert ex.constraints.generators == ()
    assert ex.verdict == Verdict.HOLDS


def test_f2_family_constraints(F2sym):
    pack = geometry(F2sym)
    got = {c: str(constraint_extract(F2sym, c, pack).constraints) for c in CONDITIONS}
    assert got["paracontact"] == "{}"
    assert got["q-phi-commute"] == "{b^2 - c^2 + 2*b - 2*c}"
    assert got["eta-einstein"] == "{b^2 - c^2 + 2*b - 2*c}"
    assert got["k-nullity"] == "{b^2 - c^2 + 2*b - 2*c}"
    assert got["para-sasakian"] == "{b - c}"
    assert got["h-zero"] == "{b - c}"


def test_extract_empty_iff_check_holds(F2sym):
    pack = geometry(F2sym)
    for c in CONDITIONS:
        ex = constraint_extract(F2sym, c, pack)
        assert (not ex.constraints) == (condition_check(pack, c).verdict == Verdict.HOLDS)


def test_side_conditions_recorded():
    t = Scalar.var("t", ("t",))
    spec = make_spec("s", 3, ("t",), {(0, 1): [0, 0, -2], (0, 2): [0, 1 / (t + 1), 0]}, [1, -1, 1], PHI, [0, 0, 1])
    ex = constraint_extract(spec, "h-zero")
    assert [str(p) for p in ex.side_conditions] == ["t + 1"]
    assert str(ex.constraints) == "{1}"


def test_unknown_condition():
    with pytest.raises(ValueError):
        constraint_extract(f2(1, 0), "einstein")


@pytest.mark.parametrize("point", [{"beta": 0}, {"beta": 3}, {"beta": Fraction(-7, 2)}])
def test_specialization_commutes_with_checks(F1m2, point):
    sym_pack = geometry(F1m2)
    conc = F1m2.substitute(point)
    conc_pack = geometry(conc)
    for c in CONDITIONS:
        sym = constraint_extract(F1m2, c, sym_pack)
        want = sym.constraints.holds_at(point)
        assert (condition_check(conc_pack, c).verdict == Verdict.HOLDS) == want, c


def test_phi_rank(F1, heis5):
    assert phi_rank(F1) == 2
    assert phi_rank(heis5) == 4


def test_constraint_set_normalization():
    P = ("x", "y")
    x, y = Poly.var("x", P), Poly.var("y", P)
    cs = ConstraintSet.of([x.scale(-3), x, y.scale(Fraction(1, 2)) + x, Poly.const(0, P)])
    assert cs.as_strings() == ["x", "2*x + y"]
    assert ConstraintSet.of([Poly.const(-5, P)]).as_strings() == ["1"]


def test_tensor_raise_lower_round_trip(F2star):
    pack = geometry(F2star)
    g, ginv = F2star.metric, F2star.ginv
    T = pack.R
    assert T.lower(3, g).raise_(3, ginv) == T
    assert pack.R_low.raise_(3, ginv) == T


def test_metric_must_be_constant():
    t = Scalar.var("t", ("t",))
    with pytest.raises(SpecError):
        make_spec("s", 3, ("t",), {}, Matrix.diag([t, -1, 1]), PHI, [0, 0, 1])
