"""Acceptance criteria 1 to 10.  Exact criteria compare with ``==``; float ones use 1e-9.

Each test is named ``test_criterion_<n>`` and the conftest hook prints one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
import random
from fractions import Fraction as F

from conftest import GOLDEN, SPECS, f1, f2
from pcm.cli import main
from pcm.conditions import eta_einstein_fit, k_nullity_fit
from pcm.dhomothety import DHomothetyParams, apply_dhomothety, round_trip_residual, verify_transform_laws
from pcm.dsl import ParseError, format_spec, load_spec, parse_spec
from pcm.exact import Scalar
from pcm.geometry import apply, basis_vector, curvature, geometry, nabla
from pcm.identities import check_eq23_24, check_phi_symmetry, phi_symmetry_residual, prop32_iv_terms
from pcm.linalg import Matrix
from pcm.model import Verdict
from pcm.oracle import (SearchConfig, bianchi_oracle, float_crosscheck, random_point, random_search,
                        random_substitution_suite)
from pcm.suite import run_suite

F1_SRC = str(SPECS / "ss_example.pcm")
BASIC = ("eq2", "eq3", "eq4", "eq5", "eq6", "eq7", "eq8", "lemma31", "prop32", "prop33")


def _solve(capsys, *argv):
    rc = main(["solve", F1_SRC, *argv, "--json"])
    out = json.loads(capsys.readouterr().out)
    return rc, out["constraints"]


def _eta2(spec):
    e = spec.eta_s
    return Matrix([[e[i] * e[j] for j in range(spec.dim)] for i in range(spec.dim)])


def test_criterion_1_constraint_extraction(capsys):
    rc, cons = _solve(capsys, "--condition", "paracontact")
    assert cons == ["alpha + 2"] and rc == 3
    rc, cons = _solve(capsys, "--subst", "alpha=-2", "--condition", "q-phi-commute")
    assert cons == ["beta"], f"q-phi-commute at alpha=-2 extracted {cons}, expected ['beta']"


def test_criterion_2_geometry():
    spec = f1(-2)
    p = geometry(spec)
    b = Scalar.var("beta", spec.params)
    want = {
        (0, 1): (0, 0, -1), (0, 2): (0, -1, 0), (1, 0): (0, 0, 1), (1, 2): (-1, 0, 0),
        (2, 0): (0, -b - 1, 0), (2, 1): (-b - 1, 0, 0),
    }
    for i, j in itertools.product(range(3), repeat=2):
        assert p.gamma[i][j] == tuple(Scalar.const(x) if not isinstance(x, Scalar) else x
                                      for x in want.get((i, j), (0, 0, 0))), (i, j)
    assert p.gamma[2][0] == (0, -b - 1, 0)

    s0 = f1(-2, 0)
    p0 = geometry(s0)
    assert p0.ric == s0.metric * 2 - _eta2(s0) * 4
    for i, j in itertools.product(range(3), repeat=2):
        X, Y = basis_vector(3, i), basis_vector(3, j)
        ex, ey = p0.inner(X, p0.xi), p0.inner(Y, p0.xi)
        assert p0.curv(X, Y, p0.xi) == tuple(-(ey * x - ex * y) for x, y in zip(X, Y))
    assert p0.scal == 2 and p0.trl == -2
    fit = eta_einstein_fit(p0)
    assert fit.success and (fit.a, fit.b) == (2, -4) and fit.a + fit.b == p0.trl
    kn = k_nullity_fit(p0)
    assert kn.success and kn.k == -1


def _basic_ids(checks):
    return [c for c in checks if c.id.split(".")[0] in BASIC]


def test_criterion_3_para_sasakian_family():
    spec = f1(-2)
    checks = _basic_ids(run_suite(spec, list(BASIC)))
    assert len(checks) == 33
    assert [c.id for c in checks if c.verdict != Verdict.HOLDS] == []
    rnd = random.Random(2024)
    for _ in range(20):
        pt = random_point(["beta"], rnd)
        conc = spec.substitute(pt)
        bad = [c.id for c in run_suite(conc, list(BASIC)) if c.verdict != Verdict.HOLDS]
        assert bad == [], (pt, bad)
        pk = geometry(conc)
        eq8 = next(c for c in run_suite(pk, ["eq8.para_sasakian"]))
        assert (eq8.residual == ()) == pk.h.is_zero() == True  # noqa: E712
    sym_eq8 = run_suite(spec, ["eq8.para_sasakian"])[0]
    assert sym_eq8.residual == () and geometry(spec).h.is_zero()


def test_criterion_4_h_nonzero_witness():
    spec = load_spec(str(SPECS / "f2_star.pcm"))
    p = geometry(spec)
    assert p.h == Matrix.diag([F(1, 2), F(-1, 2), 0])
    assert p.trh2 == F(1, 2) and p.trl == F(-3, 2)
    got = {c.id: c for c in run_suite(p)}
    assert got["eq5.trl"].holds and got["eq5.trh2_norms"].holds
    assert apply(p.l, basis_vector(3, 0)) == (F(3, 4), 0, 0)
    assert apply(p.l, basis_vector(3, 1)) == (0, F(-9, 4), 0)
    assert got["eq6.phi_l_phi"].holds and got["eq7.nabla_xi_h"].holds
    assert prop32_iv_terms(p, basis_vector(3, 0)) == (F(3, 4), F(3, 2), -1, F(1, 4))
    assert got["prop32.iv"].holds and got["prop32.vi"].holds
    assert got["prop33.f9"].holds
    eq33 = got["prop33.equiv"]
    assert len(eq33.parts) == 3 and all(part.verdict == Verdict.FAILS for part in eq33.parts)
    eq43 = got["prop43.equiv"]
    assert len(eq43.parts) == 4 and all(part.verdict == Verdict.FAILS for part in eq43.parts)


def test_criterion_5_reconstruction():
    specs = [f1(), f1(-2), load_spec(str(SPECS / "f2_star.pcm")), load_spec(str(SPECS / "abelian.pcm"))]
    hits = random_search(SearchConfig(budget=100, seed=1))
    assert hits
    specs += [h.spec for h in hits]
    for spec in specs:
        got = {c.id: c for c in run_suite(spec, ["eq9.reconstruction", "eq11.l_from_q"])}
        assert got["eq9.reconstruction"].verdict == Verdict.HOLDS, spec.name
        assert got["eq9.reconstruction"].residual == ()
        assert got["eq11.l_from_q"].verdict == Verdict.HOLDS, spec.name


def test_criterion_6_dhomothety():
    spec = f1(-2, 0)
    prm = DHomothetyParams(F(4))
    assert prm.beta == 12
    new = apply_dhomothety(spec, prm)
    q = geometry(new)
    # the image Ricci tensor expressed in the original g and eta
    assert q.ric == spec.metric * 8 - _eta2(spec) * 40
    a, n = prm.alpha, spec.n
    assert q.trl == (geometry(spec).trl - 2 * n * (a * a - 1)) / (a * a) == -2
    laws = {c.id: c.verdict for c in verify_transform_laws(spec, prm)}
    assert laws == {"dhom.paracontact": Verdict.HOLDS, "dhom.ricci_law": Verdict.HOLDS,
                    "dhom.trl_law": Verdict.HOLDS, "dhom.q_xi_invariance": Verdict.HOLDS}
    assert apply(q.Q, q.xi) == tuple(q.trl * x for x in q.xi)
    eq23 = {c.id: c.verdict for c in check_eq23_24(q)}
    assert eq23.pop("eq23.einstein_scal") == Verdict.NOT_APPLICABLE
    assert set(eq23.values()) == {Verdict.HOLDS}
    assert round_trip_residual(spec, prm) == []


def test_criterion_7_phi_symmetry():
    for spec in (f1(-2, 0), load_spec(str(SPECS / "abelian.pcm"))):
        pack = geometry(spec)
        res = phi_symmetry_residual(pack)
        assert res and all(v.is_zero() for _, v in res)
        assert check_phi_symmetry(pack)[0].verdict == Verdict.HOLDS
    theorem = check_phi_symmetry(geometry(f1(-2, 0)))[1]
    assert theorem.verdict == Verdict.HOLDS and theorem.parts[0].verdict == Verdict.HOLDS


def _mutate(pack, i, j, k):
    gamma = [[list(col) for col in row] for row in pack.gamma]
    gamma[i][j][k] = gamma[i][j][k] + 1
    gamma = tuple(tuple(tuple(col) for col in row) for row in gamma)
    cv = curvature(pack.spec, gamma)
    return dataclasses.replace(pack, gamma=gamma, R=cv.R, R_low=cv.R_low, ric=cv.ric, nabla_R=nabla(gamma, cv.R_low))


def test_criterion_8_universal_properties():
    base = [f1(), f1(-2), f1(-2, 0), f2(), load_spec(str(SPECS / "f2_star.pcm")),
            load_spec(str(SPECS / "abelian.pcm")), load_spec(str(SPECS / "heisenberg5.pcm"))]
    image = apply_dhomothety(f1(-2, 0), DHomothetyParams(F(4)))
    specs = base + [image, apply_dhomothety(image, DHomothetyParams(F(1, 4)))]
    specs += [h.spec for h in random_search(SearchConfig(budget=100, seed=1))]
    for spec in specs:
        for c in bianchi_oracle(geometry(spec)):
            assert c.verdict == Verdict.HOLDS, (spec.name, c.id)
    for spec in (f1(-2, 0), load_spec(str(SPECS / "f2_star.pcm"))):
        pack = geometry(spec)
        for i, j, k in itertools.product(range(3), repeat=3):
            assert any(c.verdict == Verdict.FAILS for c in bianchi_oracle(_mutate(pack, i, j, k))), (i, j, k)


def test_criterion_9_cross_validation():
    image = apply_dhomothety(f1(-2, 0), DHomothetyParams(F(4)))
    for spec in (f1(-2, 0), f1(-2, 3), load_spec(str(SPECS / "f2_star.pcm")), image):
        assert float_crosscheck(spec) <= 1e-9, spec.name
    for spec in (f1(), f1(-2), f2()):
        outcomes = random_substitution_suite(spec, trials=20, seed=11)
        for cid, o in outcomes.items():
            assert len(o.points) == 20, cid
            assert o.agrees, (spec.name, cid, [p for p in o.points if p[1] != p[2]][:2])


def test_criterion_10_frontend(capsys, tmp_path):
    spec = load_spec(F1_SRC)
    assert spec.params == ("alpha", "beta") and spec.metric == Matrix.diag([1, -1, 1])
    assert format_spec(parse_spec(format_spec(spec))) == format_spec(spec)

    rc = main(["identities", F1_SRC, "--subst", "alpha=-2", "--subst", "beta=0", "--json"])
    out = capsys.readouterr().out
    assert rc == 0 and out.encode() == (GOLDEN / "f1_report.json").read_bytes()

    assert main(["check", F1_SRC]) == 3
    assert main(["identities", str(SPECS / "f2_star.pcm")]) == 2
    bad = tmp_path / "bad.pcm"
    bad.write_text('manifold "b" {\n  dim 3\n  metric diag(1, -1, 1)\n  bracket [1,1] = e3\n}\n')
    assert main(["check", str(bad)]) == 1
    capsys.readouterr()

    try:
        parse_spec(open(F1_SRC).read().replace("  xi = e3\n", ""), "f1.pcm")
    except ParseError as exc:
        assert (exc.span.line, exc.span.column) == (12, 1) and exc.message == "missing required item: xi"
    else:
        raise AssertionError("missing xi was accepted")
    try:
        parse_spec(open(F1_SRC).read().replace("beta * e2", "gamma * e2"), "f1.pcm")
    except ParseError as exc:
        assert (exc.span.line, exc.span.column) == (6, 19) and exc.message == "unknown parameter: gamma"
    else:
        raise AssertionError("undeclared parameter was accepted")
