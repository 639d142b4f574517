"""Named geometric conditions as residual tensors, the eta-Einstein and
k-nullity fits, and extraction of polynomial constraints from residuals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .exact import ONE, ZERO, Poly, Scalar
from .geometry import GeometryPack, geometry
from .linalg import Matrix, linear_solve
from .model import (AlgebraSpec, CheckResult, ConstraintSet, Part, Verdict, as_part,
                    identity_check, paracontact_residual, residual_verdict)

ResidualList = List[Tuple[str, Scalar]]


def matrix_residual(label: str, M: Matrix) -> ResidualList:
    return [(f"{label}[{i + 1},{j + 1}]", M[i, j]) for i in range(M.rows) for j in range(M.cols)]


def q_phi_residual(pack: GeometryPack) -> ResidualList:
    return matrix_residual("Q phi - phi Q", pack.Q @ pack.phi - pack.phi @ pack.Q)


def l_phi_residual(pack: GeometryPack) -> ResidualList:
    return matrix_residual("l phi - phi l", pack.l @ pack.phi - pack.phi @ pack.l)


def h_residual(pack: GeometryPack) -> ResidualList:
    return matrix_residual("h", pack.h)


def l_residual(pack: GeometryPack) -> ResidualList:
    return matrix_residual("l", pack.l)


def flat_residual(pack: GeometryPack) -> ResidualList:
    return [(f"R[{i + 1},{j + 1},{k + 1}]^{l + 1}", v) for (i, j, k, l), v in pack.R.items()]


def nabla_phi(pack: GeometryPack):
    """``(nabla_{E_i} phi)^k_j`` as ``out[i, k, j]``."""
    from .geometry import nabla
    from .model import Tensor

    return nabla(pack.gamma, Tensor.from_matrix(pack.phi, "ud"))


def para_sasakian_residual(pack: GeometryPack) -> ResidualList:
    """``(nabla_X phi) Y + g(X,Y) xi - eta(Y) X`` on frame pairs."""
    n = pack.dim
    dphi = nabla_phi(pack)
    g, xi, eta = pack.g, pack.xi, pack.eta
    out = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                v = dphi[i, k, j] + g[i, j] * xi[k] - (eta[j] if i == k else ZERO)
                out.append((f"(nabla_E{i + 1} phi)E{j + 1}^{k + 1}", v))
    return out


@dataclass(frozen=True)
class EtaEinsteinFit:
    """``Q = a id + b eta (x) xi``; ``a``/``b`` are None when no pivot solution exists."""

    a: Scalar | None
    b: Scalar | None
    verdict: Verdict
    residual: Tuple[Tuple[str, Scalar], ...] = ()
    constraints: ConstraintSet = ConstraintSet()

    @property
    def success(self) -> bool:
        return self.verdict == Verdict.HOLDS

    def part(self, name: str = "eta-einstein") -> Part:
        return Part(name, self.verdict, self.constraints)


@dataclass(frozen=True)
class NullityFit:
    """``R(X,Y) xi = k (eta(Y) X - eta(X) Y)``."""

    k: Scalar | None
    verdict: Verdict
    residual: Tuple[Tuple[str, Scalar], ...] = ()
    constraints: ConstraintSet = ConstraintSet()

    @property
    def success(self) -> bool:
        return self.verdict == Verdict.HOLDS

    def part(self, name: str = "k-nullity") -> Part:
        return Part(name, self.verdict, self.constraints)


def _fit(rows: List[List[Scalar]], rhs: List[Scalar], labels: List[str], params):
    sol = linear_solve(Matrix(rows), rhs)
    if sol.status == "underdetermined":
        res = tuple((lbl, v) for lbl, v in zip(labels, rhs) if not v.is_zero())
        verdict, cs, _ = residual_verdict(res, params)
        return None, verdict, res, cs
    res = tuple((labels[i], v) for i, v in sol.residual)
    verdict, cs, _ = residual_verdict(res, params)
    return sol.x, verdict, res, cs


def eta_einstein_fit(pack: GeometryPack) -> EtaEinsteinFit:
    n = pack.dim
    xi, eta = pack.xi, pack.eta
    rows, rhs, labels = [], [], []
    for i in range(n):
        for j in range(n):
            rows.append([ONE if i == j else ZERO, xi[i] * eta[j]])
            rhs.append(pack.Q[i, j])
            labels.append(f"Q - a id - b eta(x)xi[{i + 1},{j + 1}]")
    x, verdict, res, cs = _fit(rows, rhs, labels, pack.spec.params)
    if x is None:
        return EtaEinsteinFit(None, None, verdict, res, cs)
    return EtaEinsteinFit(x[0], x[1], verdict, res, cs)


def k_nullity_fit(pack: GeometryPack) -> NullityFit:
    n = pack.dim
    xi, eta = pack.xi, pack.eta
    rows, rhs, labels = [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            rxi = pack.curv(_e(n, i), _e(n, j), xi)
            for l in range(n):
                coeff = (eta[j] if l == i else ZERO) - (eta[i] if l == j else ZERO)
                rows.append([coeff])
                rhs.append(rxi[l])
                labels.append(f"R(E{i + 1},E{j + 1})xi - k(...)^{l + 1}")
    x, verdict, res, cs = _fit(rows, rhs, labels, pack.spec.params)
    return NullityFit(None if x is None else x[0], verdict, res, cs)


def _e(n: int, i: int):
    return tuple(ONE if k == i else ZERO for k in range(n))


CONDITIONS = ("paracontact", "q-phi-commute", "eta-einstein", "k-nullity", "para-sasakian", "h-zero", "flat")


@dataclass(frozen=True)
class Extraction:
    condition: str
    constraints: ConstraintSet
    side_conditions: Tuple[Poly, ...] = ()

    @property
    def verdict(self) -> Verdict:
        if not self.constraints:
            return Verdict.HOLDS
        return Verdict.FAILS if self.constraints.never_holds() else Verdict.CONDITIONAL


def condition_residual(pack: GeometryPack, condition: str) -> ResidualList:
    if condition == "paracontact":
        return paracontact_residual(pack.spec)
    if condition == "q-phi-commute":
        return q_phi_residual(pack)
    if condition == "eta-einstein":
        return list(eta_einstein_fit(pack).residual)
    if condition == "k-nullity":
        return list(k_nullity_fit(pack).residual)
    if condition == "para-sasakian":
        return para_sasakian_residual(pack)
    if condition == "h-zero":
        return h_residual(pack)
    if condition == "flat":
        return flat_residual(pack)
    raise ValueError(f"unknown condition {condition!r}; expected one of {', '.join(CONDITIONS)}")


def constraint_extract(spec: AlgebraSpec, condition: str, pack: GeometryPack | None = None) -> Extraction:
    """Polynomial generators whose common zeros are exactly where ``condition`` holds.

    Generators are residual numerators; denominators that depend on
    parameters are returned as side conditions (they must not vanish).
    """
    if condition not in CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}; expected one of {', '.join(CONDITIONS)}")
    if condition == "paracontact":
        res = paracontact_residual(spec)
    else:
        res = condition_residual(pack or geometry(spec), condition)
    res = [(lbl, v) for lbl, v in res if not v.is_zero()]
    cs = ConstraintSet.of(v.num for _, v in res)
    side = ConstraintSet.of(v.den for _, v in res if not v.den.is_constant()).generators
    return Extraction(condition, cs, side)


def condition_check(pack: GeometryPack, condition: str) -> CheckResult:
    return identity_check(f"condition.{condition}", f"{condition} holds",
                          condition_residual(pack, condition), pack.spec.params)


def condition_part(pack: GeometryPack, condition: str, name: str | None = None) -> Part:
    return as_part(name or condition, condition_check(pack, condition))
