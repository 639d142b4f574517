from __future__ import annotations

from fractions import Fraction as F

from conftest import f2, sym
from pcm.conditions import CONDITIONS, condition_check, eta_einstein_fit, k_nullity_fit
from pcm.geometry import geometry
from pcm.model import Verdict


def test_eta_einstein_fit_f1_all_beta(F1m2):
    fit = eta_einstein_fit(geometry(F1m2))
    b = sym("beta", F1m2.params)
    assert fit.success
    assert fit.a == 2 * b + 2 and fit.b == -2 * b - 4
    # a + b = trl = -2 whatever beta is
    assert fit.a + fit.b == -2


def test_fits_on_f1_reference(F1_0):
    p = geometry(F1_0)
    fit = eta_einstein_fit(p)
    assert (fit.a, fit.b) == (2, -4)
    kn = k_nullity_fit(p)
    assert kn.success and kn.k == -1


def test_fits_on_heisenberg5(heis5):
    p = geometry(heis5)
    fit = eta_einstein_fit(p)
    assert (fit.a, fit.b) == (2, -6)
    kn = k_nullity_fit(p)
    # trl = 2n k in dimension 2n+1
    assert kn.k == -1 and p.trl == -4


def test_fits_fail_on_f2star(F2star):
    p = geometry(F2star)
    fit = eta_einstein_fit(p)
    assert fit.verdict == Verdict.FAILS and fit.residual
    assert k_nullity_fit(p).verdict == Verdict.FAILS


def test_f2_fit_is_conditional(F2sym):
    p = geometry(F2sym)
    fit = eta_einstein_fit(p)
    assert fit.verdict == Verdict.CONDITIONAL
    assert str(fit.constraints) == "{b^2 - c^2 + 2*b - 2*c}"
    # on the constraint the fit exists: b = c makes h vanish
    q = geometry(f2(F(3, 2), F(3, 2)))
    assert eta_einstein_fit(q).success


def test_condition_checks_on_fixtures(F1_0, F2star, abelian):
    got = {c: condition_check(geometry(F1_0), c).verdict for c in CONDITIONS}
    assert all(v == Verdict.HOLDS for k, v in got.items() if k != "flat")
    assert got["flat"] == Verdict.FAILS
    star = {c: condition_check(geometry(F2star), c).verdict for c in CONDITIONS}
    assert star["paracontact"] == Verdict.HOLDS
    for c in ("q-phi-commute", "eta-einstein", "k-nullity", "para-sasakian", "h-zero", "flat"):
        assert star[c] == Verdict.FAILS, c
    flat = condition_check(geometry(abelian), "flat")
    assert flat.verdict == Verdict.HOLDS
