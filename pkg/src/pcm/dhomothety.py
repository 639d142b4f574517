"""D-homothetic deformation of a spec and its transformation laws.

The deformed structure keeps the original frame:
``g' = a g + a(a-1) eta (x) eta``, ``xi' = xi / a``, ``eta' = a eta``, ``phi' = phi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .exact import ZERO, Scalar
from .geometry import GeometryPack, geometry
from .geometry import apply as apply_op
from .linalg import Matrix
from .model import (AlgebraSpec, CheckResult, SpecError, Verdict, as_part, check_paracontact,
                    identity_check, implication_check, validate_almost_paracontact)


class DHomothetyError(SpecError):
    pass


@dataclass(frozen=True)
class DHomothetyParams:
    alpha: Fraction

    def __post_init__(self):
        if not isinstance(self.alpha, (int, Fraction)):
            raise DHomothetyError("alpha must be a concrete rational")
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.alpha <= 0:
            raise DHomothetyError(f"alpha must be positive, got {self.alpha}")

    @property
    def beta(self) -> Fraction:
        return self.alpha * (self.alpha - 1)

    @classmethod
    def parse(cls, text: str) -> "DHomothetyParams":
        try:
            a = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DHomothetyError(f"alpha must be a rational p/q, got {text!r}") from exc
        return cls(a)

    def inverse(self) -> "DHomothetyParams":
        return DHomothetyParams(1 / self.alpha)


def apply_dhomothety(spec: AlgebraSpec, p: DHomothetyParams) -> AlgebraSpec:
    if check_paracontact(spec).verdict == Verdict.FAILS:
        raise DHomothetyError("D-homothety needs a paracontact spec")
    a, b = p.alpha, p.beta
    n = spec.dim
    eta = spec.eta
    g = Matrix([[spec.metric[i, j] * a + eta[i] * eta[j] * b for j in range(n)] for i in range(n)])
    out = AlgebraSpec(
        name=spec.name, dim=n, params=spec.params, bracket=spec.bracket, metric=g, phi=spec.phi,
        xi=tuple(x / a for x in spec.xi), eta=tuple(e * a for e in eta),
    )
    return out


apply = apply_dhomothety  # the public name; geometry.apply is the operator helper


def verify_transform_laws(spec: AlgebraSpec, p: DHomothetyParams,
                          pack: GeometryPack | None = None) -> List[CheckResult]:
    """Recompute the deformed geometry from scratch and compare with the laws."""
    pack = pack or geometry(spec)
    new = apply_dhomothety(spec, p)
    npack = geometry(new)
    params = spec.params
    a, b = p.alpha, p.beta
    nn = spec.n
    d = spec.dim
    g, eta = pack.g, pack.eta
    out: List[CheckResult] = []

    almost = validate_almost_paracontact(new)
    para = check_paracontact(new)
    out.append(identity_check("dhom.paracontact", "the deformed structure is paracontact metric",
                              list(almost.residual) + list(para.residual), params))

    coef_g = 2 * b / a
    coef_e = 2 * b / (a * a) * ((2 * nn + 1) * a + nn * b)
    law = []
    for i in range(d):
        for j in range(d):
            want = pack.ric[i, j] + g[i, j] * coef_g - eta[i] * eta[j] * coef_e
            law.append((f"Ric'[{i + 1},{j + 1}] - law", npack.ric[i, j] - want))
    out.append(identity_check(
        "dhom.ricci_law",
        "Ric'(X,Y) = Ric(X,Y) + 2(b/a) g(X,Y) - 2(b/a^2)((2n+1)a + nb) eta(X)eta(Y)", law, params))

    trl_want = (pack.trl - 2 * nn * (a * a - 1)) / (a * a)
    out.append(identity_check("dhom.trl_law", "trl' = (trl - 2n(a^2 - 1)) / a^2",
                              [("trl' - law", npack.trl - trl_want)], params))

    def q_xi_res(pk: GeometryPack, tag: str):
        qx = apply_op(pk.Q, pk.xi)
        return [(f"(Q{tag} xi{tag} - trl{tag} xi{tag})^{k + 1}", v - pk.trl * x)
                for k, (v, x) in enumerate(zip(qx, pk.xi))]

    before = identity_check("p", "Q xi = (trl) xi", q_xi_res(pack, ""), params)
    after = identity_check("c", "", q_xi_res(npack, "'"), params)
    out.append(implication_check("dhom.q_xi_invariance", "Q xi = (trl) xi => Q' xi' = (trl') xi'",
                                 as_part("q-xi", before), after, vacuous=Verdict.NOT_APPLICABLE))
    return out


def round_trip_residual(spec: AlgebraSpec, p: DHomothetyParams):
    """Differences of Gamma, R and Ric after deforming by ``a`` and then ``1/a``."""
    back = apply_dhomothety(apply_dhomothety(spec, p), p.inverse())
    g0, g1 = geometry(spec), geometry(back)
    d = spec.dim
    res = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                res.append((f"Gamma^{k + 1}_{i + 1}{j + 1}", g1.gamma[i][j][k] - g0.gamma[i][j][k]))
    res.extend((f"R{list(idx)}", v - g0.R[idx]) for idx, v in g1.R.items())
    res.extend((f"Ric[{i + 1},{j + 1}]", g1.ric[i, j] - g0.ric[i, j]) for i in range(d) for j in range(d))
    res.extend((f"g[{i + 1},{j + 1}]", back.metric[i, j] - spec.metric[i, j]) for i in range(d) for j in range(d))
    return [(lbl, v) for lbl, v in res if not v.is_zero()]
