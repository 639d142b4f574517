"""Instance checks of the paracontact identities on a :class:`GeometryPack`.

Every function returns :class:`~pcm.model.CheckResult` values whose ids are
stable strings (part of the JSON report contract).  Identities are checked
componentwise in exact arithmetic; propositions stated as equivalences are
checked as equality of verdicts on the instance, and derivations that assume
a hypothesis are checked as implications.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from .conditions import (EtaEinsteinFit, NullityFit, eta_einstein_fit, flat_residual, h_residual,
                         k_nullity_fit, l_phi_residual, l_residual, matrix_residual,
                         para_sasakian_residual, q_phi_residual)
from .exact import ONE, ZERO, Scalar, fmt_rational
from .geometry import GeometryPack, apply, basis_vector, bilinear, nabla
from .linalg import Matrix, _rref
from .model import (CheckResult, ConstraintSet, Part, Tensor, Verdict, as_part, equivalence_check,
                    identity_check, implication_check)

__all__ = [
    "EtaEinsteinFit", "NullityFit", "eta_einstein_fit", "k_nullity_fit",
    "run_basic_identities", "check_prop32", "check_prop33", "check_dim3_pipeline", "check_prop43",
    "check_eq23_24", "check_phi_symmetry", "check_flatness_remark", "horizontal_basis",
    "direction_set", "prop32_iv_terms",
]

DIM3_ONLY = "dimension 3 only"
AUTOMATIC = "automatic (model class): frame components are constant"


def _check(pack: GeometryPack, cid: str, statement: str, residual, note: str = "") -> CheckResult:
    return identity_check(cid, statement, residual, pack.spec.params, note=note)


def _na(cid: str, statement: str, note: str) -> CheckResult:
    return CheckResult(cid, statement, Verdict.NOT_APPLICABLE, note=note)


def _scalar_res(label: str, v: Scalar):
    return [(label, v)]


def fmt_vec(v: Sequence[Scalar]) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _outer(u: Sequence[Scalar], w: Sequence[Scalar]) -> Matrix:
    return Matrix([[a * b for b in w] for a in u])


def _row(v: Sequence[Scalar]) -> Matrix:
    return Matrix([list(v)])


def _col(v: Sequence[Scalar]) -> Matrix:
    return Matrix([[x] for x in v])


def conjunction(name: str, parts: Sequence[Part]) -> Part:
    verdicts = {p.verdict for p in parts}
    if Verdict.FAILS in verdicts:
        return Part(name, Verdict.FAILS)
    if verdicts == {Verdict.HOLDS}:
        return Part(name, Verdict.HOLDS)
    return Part(name, Verdict.CONDITIONAL, ConstraintSet.of(g for p in parts for g in p.constraints))


# ---------------------------------------------------------------------------
# Directions orthogonal to xi


def horizontal_basis(pack: GeometryPack) -> List[Tuple[Scalar, ...]]:
    """A basis of ker eta built from the projections ``E_i - eta(E_i) xi``."""
    n = pack.dim
    xi, eta = pack.xi, pack.eta
    chosen: List[Tuple[Scalar, ...]] = []
    for i in range(n):
        v = tuple((ONE if k == i else ZERO) - eta[i] * xi[k] for k in range(n))
        if all(x.is_zero() for x in v):
            continue
        rows = [list(u) for u in chosen + [v]]
        if len(_rref(rows, n)) == len(chosen) + 1:
            chosen.append(v)
        if len(chosen) == n - 1:
            break
    return chosen


def direction_set(pack: GeometryPack) -> List[Tuple[Scalar, ...]]:
    """Non-null horizontal test vectors: basis vectors and the combinations ``b_i +- b_j``, ``b_i +- 2 b_j``."""
    basis = horizontal_basis(pack)
    cands = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            for c in (1, -1, 2, -2):
                cands.append(tuple(a + b * c for a, b in zip(basis[i], basis[j])))
    return [v for v in cands if not pack.inner(v, v).is_zero()]


# ---------------------------------------------------------------------------
# Basic identities and the torsion lemma


def run_basic_identities(pack: GeometryPack) -> List[CheckResult]:
    n = pack.dim
    g, phi, h, l = pack.g, pack.phi, pack.h, pack.l
    xi, eta = pack.xi, pack.eta
    I = Matrix.identity(n)
    out: List[CheckResult] = []

    out.append(_check(pack, "eq2.l_xi", "l xi = 0", [(f"(l xi)^{i + 1}", v) for i, v in enumerate(apply(l, xi))]))
    out.append(_check(pack, "eq2.h_xi", "h xi = 0", [(f"(h xi)^{i + 1}", v) for i, v in enumerate(apply(h, xi))]))
    out.append(_check(pack, "eq2.tr_h", "tr h = 0", _scalar_res("tr h", h.trace())))
    out.append(_check(pack, "eq2.tr_h_phi", "tr(h phi) = 0", _scalar_res("tr h phi", (h @ phi).trace())))
    out.append(_check(pack, "eq2.h_phi_anticommute", "h phi = -phi h", matrix_residual("h phi + phi h", h @ phi + phi @ h)))
    out.append(_check(pack, "eq2.h_symmetric", "g(hX, Y) = g(X, hY)", matrix_residual("g h - (g h)^T", g @ h - (g @ h).T)))
    out.append(_check(pack, "eq2.l_symmetric", "g(lX, Y) = g(X, lY)", matrix_residual("g l - (g l)^T", g @ l - (g @ l).T)))

    # nabla_{E_i} xi = Gamma^k_{ij} xi^j E_k, as columns i
    nxi = Matrix([[sum((pack.gamma[i][j][k] * xi[j] for j in range(n)), ZERO) for i in range(n)] for k in range(n)])
    out.append(_check(pack, "eq3.nabla_xi", "nabla_X xi = -phi X + phi h X",
                      matrix_residual("nabla xi + phi - phi h", nxi + phi - phi @ h)))
    out.append(_check(pack, "eq3.nabla_xi_xi", "nabla_xi xi = 0",
                      [(f"(nabla_xi xi)^{k + 1}", v) for k, v in enumerate(apply(nxi, xi))]))
    out.append(_check(pack, "eq4.nabla_xi_phi", "nabla_xi phi = 0", matrix_residual("nabla_xi phi", pack.nabla_xi_phi)))

    g_q = bilinear(pack.Q.T @ g, xi, xi)  # g(Q xi, xi)
    out.append(_check(pack, "eq5.trl", "tr l = g(Q xi, xi) = -2n + tr h^2", [
        ("tr l - g(Q xi, xi)", pack.trl - g_q),
        ("tr l + 2n - tr h^2", pack.trl + 2 * pack.spec.n - pack.trh2),
    ]))
    ginv = pack.spec.ginv
    lie_phi_sq = (ginv @ pack.lie_xi_phi.T @ g @ pack.lie_xi_phi).trace()
    tau_sq = (ginv @ pack.tau @ ginv @ pack.tau).trace()
    out.append(_check(pack, "eq5.trh2_norms", "tr h^2 = 1/4 |L_xi phi|^2 = -1/4 |L_xi g|^2", [
        ("tr h^2 - |L_xi phi|^2/4", pack.trh2 - lie_phi_sq * Fraction(1, 4)),
        ("tr h^2 + |L_xi g|^2/4", pack.trh2 + tau_sq * Fraction(1, 4)),
    ]))
    out.append(_check(pack, "eq6.phi_l_phi", "phi l phi + l = -2(phi^2 - h^2)",
                      matrix_residual("phi l phi + l + 2(phi^2 - h^2)", phi @ l @ phi + l + (phi @ phi - h @ h) * 2)))
    out.append(_check(pack, "eq7.nabla_xi_h", "nabla_xi h = -phi - phi l + phi h^2",
                      matrix_residual("nabla_xi h + phi + phi l - phi h^2",
                                      pack.nabla_xi_h + phi + phi @ l - phi @ h @ h)))

    ps = _check(pack, "eq8.para_sasakian", "(nabla_X phi)Y = -g(X,Y) xi + eta(Y) X", para_sasakian_residual(pack))
    out.append(ps)
    if n == 3:
        hz = _check(pack, "h", "h = 0", h_residual(pack))
        out.append(equivalence_check("eq8.h_zero_equiv", "in dimension 3: para-Sasakian <=> h = 0",
                                     [as_part("para-sasakian", ps), as_part("h-zero", hz)]))
    else:
        out.append(_na("eq8.h_zero_equiv", "in dimension 3: para-Sasakian <=> h = 0", DIM3_ONLY))

    out.extend(check_lemma31(pack))
    return out


def check_lemma31(pack: GeometryPack) -> List[CheckResult]:
    g, phi, h, tau = pack.g, pack.phi, pack.h, pack.tau
    xi = pack.xi
    n = pack.dim
    return [
        _check(pack, "lemma31.f1", "tau(X,Y) = -2 g(phi X, h Y)", matrix_residual("tau + 2 phi^T g h", tau + phi.T @ g @ h * 2)),
        _check(pack, "lemma31.f2", "tau(xi, .) = 0",
               [(f"tau(xi,E{j + 1})", v) for j, v in enumerate(apply(tau.T, xi))]),
        _check(pack, "lemma31.f3", "tau(X,Y) = tau(Y,X)", matrix_residual("tau - tau^T", tau - tau.T)),
        _check(pack, "lemma31.f4", "tau(X, phi Y) = tau(phi X, Y)", matrix_residual("tau phi - phi^T tau", tau @ phi - phi.T @ tau)),
        _check(pack, "lemma31.f5", "tau(phi X, phi Y) = tau(X,Y)", matrix_residual("phi^T tau phi - tau", phi.T @ tau @ phi - tau)),
    ]


# ---------------------------------------------------------------------------
# Derivative of the torsion along xi


def prop32_iv_terms(pack: GeometryPack, X) -> Tuple[Scalar, Scalar, Scalar, Scalar]:
    """``(K(xi,X), -1/2 eps (nabla_xi tau)(X,X), -1, eps |hX|^2)`` at the unit vector along ``X``.

    ``X`` may have any non-null length; the values are those of ``X/sqrt|g(X,X)|``.
    """
    norm = pack.inner(X, X)
    xi = pack.xi
    K = pack.curv4(X, xi, xi, X) / norm
    t1 = bilinear(pack.nabla_xi_tau, X, X) / norm * Fraction(-1, 2)
    hX = apply(pack.h, X)
    t3 = pack.inner(hX, hX) / norm
    return K, t1, -ONE, t3


def check_prop32(pack: GeometryPack) -> List[CheckResult]:
    n = pack.dim
    g, phi, h = pack.g, pack.phi, pack.h
    xi, eta = pack.xi, pack.eta
    nt = pack.nabla_xi_tau
    out: List[CheckResult] = []

    out.append(_check(pack, "prop32.i", "(nabla_xi tau)(X,Y) = (nabla_xi tau)(Y,X)",
                      matrix_residual("nabla_xi tau - transpose", nt - nt.T)))
    out.append(_check(pack, "prop32.ii", "(nabla_xi tau)(xi, .) = 0",
                      [(f"(nabla_xi tau)(xi,E{j + 1})", v) for j, v in enumerate(apply(nt.T, xi))],
                      note="printed with X in the first slot; checked with xi, the statement its derivation supports"))
    out.append(_check(pack, "prop32.iii", "(nabla_xi tau)(phi X, phi Y) = (nabla_xi tau)(X,Y)",
                      matrix_residual("phi^T nt phi - nt", phi.T @ nt @ phi - nt)))
    out.append(_check(pack, "prop32.f6", "(nabla_xi tau)(X,Y) = -2 g(phi X, (nabla_xi h) Y)",
                      matrix_residual("nt + 2 phi^T g nabla_xi h", nt + phi.T @ g @ pack.nabla_xi_h * 2)))

    dirs = direction_set(pack)
    iv_res, notes = [], []
    for X in dirs:
        K, t1, t2, t3 = prop32_iv_terms(pack, X)
        iv_res.append((f"K(xi,X) - rhs at X={fmt_vec(X)}", K - (t1 + t2 + t3)))
        notes.append(f"X={fmt_vec(X)}: K={K} vs {t1} + ({t2}) + {t3}")
    out.append(_check(pack, "prop32.iv", "K(xi,X) = -1/2 eps_X (nabla_xi tau)(X,X) - 1 + eps_X |hX|^2",
                      iv_res, note="; ".join(notes)))

    nt_zero = _check(pack, "nt", "nabla_xi tau = 0", matrix_residual("nabla_xi tau", nt))
    shifted = []
    for X in dirs:
        K, _, _, t3 = prop32_iv_terms(pack, X)
        shifted.append((X, K - t3))
    kdiff = [(f"X={fmt_vec(X)},Y={fmt_vec(Y)}", a - b)
             for (X, a), (Y, b) in zip(shifted, shifted[1:])]
    kd = _check(pack, "kdiff", "K difference formula", kdiff)
    out.append(equivalence_check(
        "prop32.v", "nabla_xi tau = 0 <=> K(xi,X) - K(xi,Y) = eps_X|hX|^2 - eps_Y|hY|^2 for unit X, Y in D",
        [as_part("nabla-xi-tau-zero", nt_zero), as_part("k-difference", kd)],
        note=f"{len(dirs)} non-null test directions"))

    f7 = []
    for X in dirs:
        PX = apply(phi, X)
        nX, nPX = pack.inner(X, X), pack.inner(PX, PX)
        lhs = pack.curv4(X, xi, xi, X) / nX - pack.curv4(PX, xi, xi, PX) / nPX
        f7.append((f"X={fmt_vec(X)}", lhs + bilinear(nt, X, X) / nX))
    out.append(_check(pack, "prop32.f7", "K(xi,X) - K(xi,phi X) = -eps_X (nabla_xi tau)(X,X)", f7))

    if n != 3:
        out.append(_na("prop32.vi", "Ric identity for n = 1", DIM3_ONLY))
        out.append(_na("prop32.f8", "Ric(X,Y) + Ric(phi X, phi Y) = -(nabla_xi tau)(X,Y) on D", DIM3_ONLY))
        return out

    ric = pack.ric
    r_xi = apply(ric, xi)  # Ric(xi, E_i) by symmetry of Ric
    ric_xx = bilinear(ric, xi, xi)
    rhs = (ric + phi.T @ ric @ phi - _outer(eta, r_xi) - _outer(r_xi, eta) + _outer(eta, eta) * ric_xx)
    out.append(_check(pack, "prop32.vi",
                      "-(nabla_xi tau)(X,Y) = Ric(X,Y) + Ric(phi X,phi Y) - eta(X)Ric(xi,Y) - eta(Y)Ric(xi,X) + eta(X)eta(Y)Ric(xi,xi)",
                      matrix_residual("-nt - rhs", -nt - rhs)))
    basis = horizontal_basis(pack)
    f8 = []
    for a, X in enumerate(basis):
        for b, Y in enumerate(basis):
            v = bilinear(ric, X, Y) + bilinear(ric, apply(phi, X), apply(phi, Y)) + bilinear(nt, X, Y)
            f8.append((f"X=D{a + 1},Y=D{b + 1}", v))
    out.append(_check(pack, "prop32.f8", "Ric(X,Y) + Ric(phi X, phi Y) = -(nabla_xi tau)(X,Y) on D", f8))
    return out


def check_prop33(pack: GeometryPack) -> List[CheckResult]:
    nh = pack.nabla_xi_h
    f9 = _check(pack, "prop33.f9", "2 nabla_xi h = l phi - phi l",
                matrix_residual("2 nabla_xi h - (l phi - phi l)", nh * 2 - (pack.l @ pack.phi - pack.phi @ pack.l)))
    parts = [
        as_part("nabla-xi-h-zero", _check(pack, "p", "", matrix_residual("nabla_xi h", nh))),
        as_part("nabla-xi-tau-zero", _check(pack, "p", "", matrix_residual("nabla_xi tau", pack.nabla_xi_tau))),
        as_part("l-phi-commute", _check(pack, "p", "", l_phi_residual(pack))),
    ]
    equiv = equivalence_check("prop33.equiv", "nabla_xi h = 0 <=> nabla_xi tau = 0 <=> l phi = phi l", parts)
    premise = as_part("nabla-xi-l-zero", _check(pack, "p", "", matrix_residual("nabla_xi l", pack.nabla_xi_l)))
    remark = implication_check("prop33.remark", "nabla_xi l = 0 => (nabla_xi h)^2 = 0", premise,
                               _check(pack, "c", "", matrix_residual("(nabla_xi h)^2", nh @ nh)))
    return [f9, equiv, remark]


# ---------------------------------------------------------------------------
# Dimension-3 chain under Q phi = phi Q


def _q_phi_part(pack: GeometryPack) -> Part:
    return as_part("q-phi-commute", _check(pack, "p", "Q phi = phi Q", q_phi_residual(pack)))


def eq9_rhs(pack: GeometryPack) -> Tensor:
    """Right side of the three-dimensional curvature formula built from Q and scal."""
    g, Q, ric = pack.g, pack.Q, pack.ric
    half_scal = pack.scal * Fraction(1, 2)

    def comp(i, j, k, l):
        v = g[j, k] * Q[l, i] - g[i, k] * Q[l, j]
        if l == i:
            v = v + ric[j, k] - half_scal * g[j, k]
        if l == j:
            v = v - ric[i, k] + half_scal * g[i, k]
        return v

    return Tensor.build("dddu", pack.dim, comp)


def _tensor_residual(label: str, T: Tensor):
    return [(f"{label}[{','.join(str(i + 1) for i in idx)}]", v) for idx, v in T.items()]


def check_dim3_pipeline(pack: GeometryPack) -> List[CheckResult]:
    ids = ["eq9.reconstruction", "eq10.q_xi", "eq11.l_from_q", "eq12.phi_l", "eq13.l_h", "eq14.l_phi2",
           "eq15.q_form", "eq17.q_derivative", "eq19.curvature", "eq20.r_xi", "lemma41.nabla_xi_h",
           "lemma41.nabla_xi_l", "lemma41.nabla_xi_q", "lemma41.nabla_xi_r", "lemma41.trl_constant"]
    if pack.dim != 3:
        return [_na(i, "", DIM3_ONLY) for i in ids]
    n = 3
    g, phi, h, l, Q = pack.g, pack.phi, pack.h, pack.l, pack.Q
    xi, eta = pack.xi, pack.eta
    scal, trl = pack.scal, pack.trl
    I = Matrix.identity(n)
    xe = _outer(xi, eta)  # eta (x) xi as an operator: X -> eta(X) xi
    P = _q_phi_part(pack)
    out: List[CheckResult] = []

    out.append(_check(pack, "eq9.reconstruction",
                      "R(X,Y)Z = g(Y,Z)QX - g(X,Z)QY + g(QY,Z)X - g(QX,Z)Y - scal/2 (g(Y,Z)X - g(X,Z)Y)",
                      _tensor_residual("R - rhs", pack.R - eq9_rhs(pack))))
    out.append(_check(pack, "eq11.l_from_q", "lX = QX + (trl - scal/2)X + eta(X)(scal/2 - 2 trl) xi",
                      matrix_residual("l - rhs", l - (Q + I * (trl - scal * Fraction(1, 2))
                                                      + xe * (scal * Fraction(1, 2) - trl * 2)))))

    def imp(cid, statement, residual, premise=P, **kw):
        return implication_check(cid, statement, premise, _check(pack, "c", "", residual), **kw)

    out.append(imp("eq10.q_xi", "Q phi = phi Q => Q xi = (tr l) xi",
                   [(f"(Q xi - trl xi)^{k + 1}", v - trl * xi[k]) for k, v in enumerate(apply(Q, xi))]))
    out.append(imp("eq12.phi_l", "Q phi = phi Q => phi l = l phi", l_phi_residual(pack)))
    out.append(imp("eq13.l_h", "Q phi = phi Q => -l = phi^2 - h^2",
                   matrix_residual("l + phi^2 - h^2", l + phi @ phi - h @ h)))
    out.append(imp("eq14.l_phi2", "Q phi = phi Q => lX = (tr l / 2) phi^2 X",
                   matrix_residual("l - trl/2 phi^2", l - phi @ phi * (trl * Fraction(1, 2)))))
    a_ = (scal - trl) * Fraction(1, 2)
    b_ = (trl * 3 - scal) * Fraction(1, 2)
    out.append(imp("eq15.q_form", "Q phi = phi Q => QX = aX + b eta(X) xi, a = (scal - trl)/2, b = (3 trl - scal)/2",
                   matrix_residual("Q - a id - b eta(x)xi", Q - I * a_ - xe * b_)))

    nQ = nabla(pack.gamma, Tensor.from_matrix(Q, "ud"))  # nQ[m, i, j] = (nabla_m Q)^i_j

    def nabla_q(W, X):
        return tuple(
            sum((W[m] * nQ[m, i, j] * X[j] for m in range(n) for j in range(n)
                 if not (W[m].is_zero() or X[j].is_zero())), ZERO)
            for i in range(n)
        )

    q17 = []
    for X in direction_set(pack):
        PX = apply(phi, X)
        diff = [a - b for a, b in zip(nabla_q(X, X), nabla_q(PX, PX))]
        q17.append((f"X={fmt_vec(X)}", pack.inner(diff, xi)))
    out.append(imp("eq17.q_derivative", "Q phi = phi Q => g((nabla_X Q)X - (nabla_phiX Q)phi X, xi) = 0", q17))

    gamma_ = scal * Fraction(1, 2) - trl

    def r19(i, j, k, m):
        v = ZERO
        if m == i:
            v = v + gamma_ * g[j, k] + b_ * eta[j] * eta[k]
        if m == j:
            v = v - gamma_ * g[i, k] - b_ * eta[i] * eta[k]
        return v + b_ * (eta[i] * g[j, k] - eta[j] * g[i, k]) * xi[m]

    out.append(imp("eq19.curvature",
                   "Q phi = phi Q => R(X,Y)Z = (gamma g(Y,Z) + b eta(Y)eta(Z))X - (gamma g(X,Z) + b eta(X)eta(Z))Y"
                   " + b(eta(X)g(Y,Z) - eta(Y)g(X,Z)) xi, gamma = scal/2 - trl",
                   _tensor_residual("R - rhs", pack.R - Tensor.build("dddu", n, r19))))
    r20 = []
    for i in range(n):
        for j in range(n):
            v = pack.curv(basis_vector(n, i), basis_vector(n, j), xi)
            for m in range(n):
                target = trl * Fraction(1, 2) * ((eta[j] if m == i else ZERO) - (eta[i] if m == j else ZERO))
                r20.append((f"R(E{i + 1},E{j + 1})xi^{m + 1}", v[m] - target))
    out.append(imp("eq20.r_xi", "Q phi = phi Q => R(X,Y)xi = (tr l/2)(eta(Y)X - eta(X)Y)", r20))

    out.append(imp("lemma41.nabla_xi_h", "Q phi = phi Q => nabla_xi h = 0", matrix_residual("nabla_xi h", pack.nabla_xi_h)))
    out.append(imp("lemma41.nabla_xi_l", "Q phi = phi Q => nabla_xi l = 0", matrix_residual("nabla_xi l", pack.nabla_xi_l)))
    nxq = Matrix([[sum((xi[m] * nQ[m, i, j] for m in range(n) if not xi[m].is_zero()), ZERO)
                   for j in range(n)] for i in range(n)])
    out.append(imp("lemma41.nabla_xi_q", "Q phi = phi Q => nabla_xi Q = 0", matrix_residual("nabla_xi Q", nxq)))
    nxr = [(f"(nabla_xi R)[{i + 1},{j + 1},{k + 1},{q + 1}]",
            sum((xi[m] * pack.nabla_R[m, i, j, k, q] for m in range(n) if not xi[m].is_zero()), ZERO))
           for i in range(n) for j in range(n) for k in range(n) for q in range(n)]
    out.append(imp("lemma41.nabla_xi_r", "Q phi = phi Q => nabla_xi R = 0", nxr))
    out.append(CheckResult("lemma41.trl_constant", "Q phi = phi Q => tr l is constant", Verdict.HOLDS, note=AUTOMATIC))
    return out


# ---------------------------------------------------------------------------
# eta-Einstein, k-nullity and Q phi = phi Q


def check_prop43(pack: GeometryPack, fit: EtaEinsteinFit | None = None,
                 nfit: NullityFit | None = None) -> List[CheckResult]:
    fit = fit or eta_einstein_fit(pack)
    nfit = nfit or k_nullity_fit(pack)
    qphi = _q_phi_part(pack)
    nt = as_part("nabla-xi-tau-zero", _check(pack, "p", "", matrix_residual("nabla_xi tau", pack.nabla_xi_tau)))
    out: List[CheckResult] = []

    ab_res = [] if fit.a is None else [("a + b - tr l", fit.a + fit.b - pack.trl)]
    out.append(implication_check("eq81.a_plus_b", "eta-Einstein => a + b = tr l", fit.part(),
                                 _check(pack, "c", "", ab_res), vacuous=Verdict.NOT_APPLICABLE))
    if pack.dim != 3:
        out.append(_na("knullity.k_trl", "Q phi = phi Q and xi in N(k) => k = tr l / 2", DIM3_ONLY))
        out.append(_na("prop42.equiv", "Q phi = phi Q <=> nabla_xi tau = 0", DIM3_ONLY))
        out.append(_na("prop43.equiv", "eta-Einstein <=> Q phi = phi Q <=> xi in N(k)", DIM3_ONLY))
        out.append(_na("eq22.r_xi_from_q", "", DIM3_ONLY))
        return out
    k_res = [] if nfit.k is None else [("k - tr l/2", nfit.k - pack.trl * Fraction(1, 2))]
    out.append(implication_check("knullity.k_trl", "Q phi = phi Q and xi in N(k) => k = tr l / 2",
                                 conjunction("q-phi-commute and k-nullity", [qphi, nfit.part()]),
                                 _check(pack, "c", "", k_res), vacuous=Verdict.NOT_APPLICABLE))
    out.append(equivalence_check("prop42.equiv", "Q phi = phi Q <=> nabla_xi tau = 0", [qphi, nt]))
    out.append(equivalence_check("prop43.equiv", "eta-Einstein <=> Q phi = phi Q <=> xi in N(k) (<=> nabla_xi tau = 0)",
                                 [fit.part(), qphi, nfit.part(), nt]))
    n = pack.dim
    xi, eta, Q = pack.xi, pack.eta, pack.Q
    r22 = []
    if nfit.k is not None:
        c = nfit.k * 2 - pack.scal * Fraction(1, 2)
        for i in range(n):
            for j in range(n):
                v = pack.curv(basis_vector(n, i), basis_vector(n, j), xi)
                for m in range(n):
                    t = eta[j] * Q[m, i] - eta[i] * Q[m, j]
                    t = t + c * ((eta[j] if m == i else ZERO) - (eta[i] if m == j else ZERO))
                    r22.append((f"R(E{i + 1},E{j + 1})xi^{m + 1}", v[m] - t))
    out.append(implication_check("eq22.r_xi_from_q",
                                 "xi in N(k) => R(X,Y)xi = eta(Y)QX - eta(X)QY + (2k - scal/2)(eta(Y)X - eta(X)Y)",
                                 nfit.part(), _check(pack, "c", "", r22), vacuous=Verdict.NOT_APPLICABLE))
    return out


def check_eq23_24(pack: GeometryPack, fit: EtaEinsteinFit | None = None) -> List[CheckResult]:
    fit = fit or eta_einstein_fit(pack)
    spec = pack.spec
    n = spec.n
    dim = pack.dim
    ids = ("eq23.ricci", "eq23.einstein_scal", "eq24.curvature", "eq24_1.a_plus_b", "eq24_2.scal")
    if fit.a is None:
        return [_na(i, "", "eta-Einstein fit failed") for i in ids]
    scal, c2 = pack.scal, pack.c2
    one_c = ONE + c2 / (4 * n)
    a_expected = scal / (2 * n) + one_c
    b_expected = -scal / (2 * n) - one_c * (2 * n + 1)
    P = fit.part()
    na = Verdict.NOT_APPLICABLE
    out: List[CheckResult] = []

    def imp(cid, statement, residual, premise=P):
        return implication_check(cid, statement, premise, _check(pack, "c", "", residual), vacuous=na)

    out.append(imp("eq23.ricci", "eta-Einstein => a = scal/2n + 1 + c^2/4n, b = -scal/2n - (2n+1)(1 + c^2/4n)",
                   [("a - expected", fit.a - a_expected), ("b - expected", fit.b - b_expected)]))
    out.append(imp("eq24_1.a_plus_b", "eta-Einstein => a + b = -2n - c^2/2",
                   [("a + b + 2n + c^2/2", fit.a + fit.b + 2 * n + c2 * Fraction(1, 2))]))
    out.append(imp("eq24_2.scal", "eta-Einstein => scal = (2n+1)a + b",
                   [("scal - (2n+1)a - b", scal - fit.a * (2 * n + 1) - fit.b)]))

    b_zero = _check(pack, "p", "b = 0", [("b", fit.b)])
    einstein = conjunction("einstein", [P, as_part("b-zero", b_zero)])
    out.append(imp("eq23.einstein_scal", "Einstein (b = 0) => scal = -2n(2n+1)(1 + c^2/4n)",
                   [("scal + 2n(2n+1)(1 + c^2/4n)", scal + one_c * (2 * n * (2 * n + 1)))], premise=einstein))

    if dim != 3:
        out.append(_na("eq24.curvature", "", DIM3_ONLY))
        return out
    g, xi, eta = pack.g, pack.xi, pack.eta
    A = scal * Fraction(1, 2) + one_c * 2
    B = -scal * Fraction(1, 2) - one_c * 3

    def r24(i, j, k, m):
        v = ZERO
        if m == i:
            v = v + A * g[j, k] + B * eta[j] * eta[k]
        if m == j:
            v = v - A * g[i, k] - B * eta[i] * eta[k]
        return v + B * (g[j, k] * eta[i] - g[i, k] * eta[j]) * xi[m]

    out.append(imp("eq24.curvature",
                   "eta-Einstein, n = 1 => R(X,Y)Z = (scal/2 + 2(1 + c^2/4))(g(Y,Z)X - g(X,Z)Y)"
                   " + (-scal/2 - 3(1 + c^2/4))(eta(Y)eta(Z)X - eta(X)eta(Z)Y + g(Y,Z)eta(X)xi - g(X,Z)eta(Y)xi)",
                   _tensor_residual("R - rhs", pack.R - Tensor.build("dddu", 3, r24))))
    return out


# ---------------------------------------------------------------------------
# Local phi-symmetry and flatness


def phi_symmetry_residual(pack: GeometryPack):
    """``phi^2 ((nabla_W R)(X,Y)Z)`` over a basis of ker eta."""
    n = pack.dim
    ginv = pack.spec.ginv
    nR = pack.nabla_R.raise_(4, ginv)  # nR[m,i,j,k,l]: E_l component of (nabla_m R)(E_i,E_j)E_k
    phi2 = pack.phi @ pack.phi
    basis = horizontal_basis(pack)
    out = []
    for a, W in enumerate(basis):
        for b, X in enumerate(basis):
            for c, Y in enumerate(basis):
                for d, Z in enumerate(basis):
                    vec = [ZERO] * n
                    for m in range(n):
                        if W[m].is_zero():
                            continue
                        for i in range(n):
                            if X[i].is_zero():
                                continue
                            for j in range(n):
                                if Y[j].is_zero():
                                    continue
                                for k in range(n):
                                    if Z[k].is_zero():
                                        continue
                                    f = W[m] * X[i] * Y[j] * Z[k]
                                    for l in range(n):
                                        r = nR[m, i, j, k, l]
                                        if not r.is_zero():
                                            vec[l] = vec[l] + f * r
                    for q, v in enumerate(apply(phi2, vec)):
                        out.append((f"W=D{a + 1},X=D{b + 1},Y=D{c + 1},Z=D{d + 1}^{q + 1}", v))
    return out


def check_phi_symmetry(pack: GeometryPack) -> List[CheckResult]:
    if pack.dim != 3:
        return [_na("phisym.local", "", DIM3_ONLY), _na("phisym.theorem", "", DIM3_ONLY)]
    local = _check(pack, "phisym.local", "phi^2 (nabla_W R)(X,Y)Z = 0 for W, X, Y, Z orthogonal to xi",
                   phi_symmetry_residual(pack), note="scal constant: " + AUTOMATIC)
    theorem = implication_check(
        "phisym.theorem", "Q phi = phi Q and scal constant => locally phi-symmetric", _q_phi_part(pack), local,
        vacuous=Verdict.NOT_APPLICABLE,
        note="scal is always constant in this model class, so the converse direction is not exercised")
    return [local, theorem]


def check_flatness_remark(pack: GeometryPack) -> CheckResult:
    statement = "Q phi = phi Q and l = 0 => R = 0"
    if pack.dim != 3:
        return _na("remark42.flat", statement, DIM3_ONLY)
    premise = conjunction("q-phi-commute and l-zero",
                          [_q_phi_part(pack), as_part("l-zero", _check(pack, "p", "", l_residual(pack)))])
    return implication_check("remark42.flat", statement, premise,
                             _check(pack, "c", "", flat_residual(pack)), note="flatness tested directly as R = 0")
