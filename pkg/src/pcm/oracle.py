"""Independent cross-checks of the exact engine.

* :func:`bianchi_oracle` - universal curvature identities, checked exactly.
* :func:`random_substitution_check` - symbolic verdicts against verdicts
  recomputed at random rational parameter points.
* :func:`float_crosscheck` - a separately written float64 pipeline.
* :func:`random_search` - seeded generation of valid paracontact specs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .exact import ZERO, DegenerateSubstitution, Scalar
from .geometry import GeometryPack, geometry, metric_compat_residual, nabla, torsion_residual
from .model import (AlgebraSpec, CheckResult, JacobiError, SpecError, Tensor, Verdict, as_part,
                    check_paracontact, identity_check, implication_check, make_spec,
                    validate_almost_paracontact)


# ---------------------------------------------------------------------------
# Universal identities


def bianchi_oracle(pack: GeometryPack) -> List[CheckResult]:
    spec = pack.spec
    params = spec.params
    n = pack.dim
    R = pack.R_low
    nR = pack.nabla_R
    rng = range(n)
    quad = [(i, j, k, l) for i in rng for j in rng for k in rng for l in rng]

    def lbl(*idx):
        return "[" + ",".join(str(i + 1) for i in idx) + "]"

    out = [
        identity_check("connection.torsion_free", "nabla_X Y - nabla_Y X = [X,Y]",
                       torsion_residual(spec, pack.gamma), params),
        identity_check("connection.metric_compat", "nabla g = 0",
                       metric_compat_residual(spec, pack.gamma), params),
        identity_check("bianchi.antisym", "R(X,Y,Z,W) = -R(Y,X,Z,W) = -R(X,Y,W,Z)",
                       [(f"R{lbl(i, j, k, l)} + R{lbl(j, i, k, l)}", R[i, j, k, l] + R[j, i, k, l]) for i, j, k, l in quad]
                       + [(f"R{lbl(i, j, k, l)} + R{lbl(i, j, l, k)}", R[i, j, k, l] + R[i, j, l, k]) for i, j, k, l in quad],
                       params),
        identity_check("bianchi.pair_sym", "R(X,Y,Z,W) = R(Z,W,X,Y)",
                       [(f"R{lbl(i, j, k, l)} - R{lbl(k, l, i, j)}", R[i, j, k, l] - R[k, l, i, j]) for i, j, k, l in quad],
                       params),
        identity_check("bianchi.first", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0",
                       [(f"first{lbl(i, j, k, l)}", R[i, j, k, l] + R[j, k, i, l] + R[k, i, j, l]) for i, j, k, l in quad],
                       params),
        identity_check("bianchi.second", "(nabla_X R)(Y,Z) + (nabla_Y R)(Z,X) + (nabla_Z R)(X,Y) = 0",
                       [(f"second{lbl(m, i, j, k, l)}", nR[m, i, j, k, l] + nR[i, j, m, k, l] + nR[j, m, i, k, l])
                        for m in rng for i, j, k, l in quad],
                       params),
    ]

    # div Ric = 1/2 d scal, and scal is constant
    nric = nabla(pack.gamma, Tensor.from_matrix(pack.ric, "dd"))
    ginv = spec.ginv
    div = []
    for j in rng:
        acc = ZERO
        for m in rng:
            for i in rng:
                if not ginv[m, i].is_zero():
                    acc = acc + ginv[m, i] * nric[m, i, j]
        div.append((f"(div Ric)_{j + 1}", acc))
    out.append(identity_check("bianchi.contracted", "div Ric = 1/2 d scal (= 0 for constant scal)", div, params))

    # (nabla_X R)(Y, xi, Z) = (nabla_Y R)(X, xi, Z) whenever nabla_xi R = 0
    xi = pack.xi
    xs = [p for p in rng if not xi[p].is_zero()]

    def r_xi(m, i, k, l):
        # (nabla_m R)(E_i, xi, E_k, E_l)
        return sum((xi[p] * nR[m, i, p, k, l] for p in xs), ZERO)

    premise = identity_check("p", "nabla_xi R = 0",
                             [(f"(nabla_xi R){lbl(i, j, k, l)}", sum((xi[m] * nR[m, i, j, k, l] for m in xs), ZERO))
                              for i, j, k, l in quad], params)
    concl = identity_check("c", "", [(f"eq18{lbl(x, y, k, l)}", r_xi(x, y, k, l) - r_xi(y, x, k, l))
                                     for x, y, k, l in quad], params)
    out.append(implication_check("eq18.nabla_r_xi", "nabla_xi R = 0 => (nabla_X R)(Y,xi,Z) = (nabla_Y R)(X,xi,Z)",
                                 as_part("nabla-xi-r-zero", premise), concl))
    return out


# ---------------------------------------------------------------------------
# Random specialization


class DegenerateSampling(RuntimeError):
    pass


def random_point(params: Sequence[str], rnd: random.Random) -> Dict[str, Fraction]:
    """Numerators uniform in [-9, 9], denominators uniform in [1, 9]."""
    return {p: Fraction(rnd.randint(-9, 9), rnd.randint(1, 9)) for p in params}


@dataclass
class SubstitutionOutcome:
    check_id: str
    symbolic: Verdict
    points: List[Tuple[Dict[str, Fraction], Verdict, Verdict]] = field(default_factory=list)
    rejected: int = 0

    @property
    def agrees(self) -> bool:
        return all(got == want for _, got, want in self.points)

    @property
    def verdict(self) -> Verdict:
        return Verdict.HOLDS if self.agrees else Verdict.FAILS


def random_substitution_check(spec: AlgebraSpec, check_id: str, trials: int = 20, seed: int = 0,
                              points: Sequence[Dict[str, Fraction]] = ()) -> SubstitutionOutcome:
    """Compare the symbolic verdict of ``check_id`` with recomputation at random points.

    Extra ``points`` (e.g. hitting a known constraint) are tried first.
    """
    from .suite import run_check

    if not spec.params:
        raise ValueError("random substitution needs a parameterized spec")
    sym = run_check(spec, check_id)
    out = SubstitutionOutcome(check_id, sym.verdict)
    rnd = random.Random(seed)
    todo = [dict(p) for p in points] + [random_point(spec.params, rnd) for _ in range(trials)]
    for pt in todo:
        if any(g.substitute(pt).is_zero() for g in sym.side_conditions):
            out.rejected += 1
            continue
        try:
            concrete = run_check(spec.substitute(pt), check_id)
        except DegenerateSubstitution:
            out.rejected += 1
            continue
        out.points.append((pt, concrete.verdict, sym.expected_at(pt)))
    if not out.points:
        raise DegenerateSampling(f"degenerate sampling: all {len(todo)} points rejected for {check_id}")
    return out


def random_substitution_suite(spec: AlgebraSpec, trials: int = 20, seed: int = 0,
                              only: Sequence[str] | None = None) -> Dict[str, SubstitutionOutcome]:
    """``random_substitution_check`` for a whole suite, recomputing it once per point."""
    from .suite import run_suite

    if not spec.params:
        raise ValueError("random substitution needs a parameterized spec")
    sym = run_suite(spec, only)
    out = {c.id: SubstitutionOutcome(c.id, c.verdict) for c in sym}
    rnd = random.Random(seed)
    used = 0
    for _ in range(trials):
        pt = random_point(spec.params, rnd)
        if any(g.substitute(pt).is_zero() for c in sym for g in c.side_conditions):
            for o in out.values():
                o.rejected += 1
            continue
        try:
            concrete = {c.id: c.verdict for c in run_suite(spec.substitute(pt), only)}
        except DegenerateSubstitution:
            for o in out.values():
                o.rejected += 1
            continue
        used += 1
        for c in sym:
            out[c.id].points.append((pt, concrete[c.id], c.expected_at(pt)))
    if not used:
        raise DegenerateSampling(f"degenerate sampling: all {trials} points rejected")
    return out


# ---------------------------------------------------------------------------
# Floating point recomputation (shares no tensor code with the exact engine)


@dataclass(frozen=True)
class FloatGeometry:
    gamma: np.ndarray   # gamma[i, j, k] = Gamma^k_ij
    R: np.ndarray       # R[i, j, k, l] = E_l component of R(E_i, E_j) E_k
    ric: np.ndarray
    scal: float
    trl: float


def _floats(spec: AlgebraSpec):
    n = spec.dim

    def f(s: Scalar) -> float:
        return float(s.constant_value())

    c = np.array([[[f(spec.c(i, j, k)) for k in range(n)] for j in range(n)] for i in range(n)])
    g = np.array([[f(spec.metric[i, j]) for j in range(n)] for i in range(n)])
    xi = np.array([float(x) for x in spec.xi])
    return c, g, xi


def float_geometry(spec: AlgebraSpec) -> FloatGeometry:
    if any(s.used_params() for s in spec.scalars()):
        raise ValueError("float_crosscheck needs a parameter-free spec")
    c, g, xi = _floats(spec)
    ginv = np.linalg.inv(g)
    # c_low[i, j, k] = g([E_i, E_j], E_k)
    c_low = np.einsum("ijm,mk->ijk", c, g)
    # g(nabla_i E_j, E_k) = 1/2 (c_ijk - c_jki + c_kij)
    k_low = 0.5 * (c_low - np.einsum("jki->ijk", c_low) + np.einsum("kij->ijk", c_low))
    gamma = np.einsum("ijk,kl->ijl", k_low, ginv)
    # R(E_i,E_j)E_k = G^p_jk G^l_ip - G^p_ik G^l_jp - c^p_ij G^l_pk
    R = (np.einsum("jkp,ipl->ijkl", gamma, gamma)
         - np.einsum("ikp,jpl->ijkl", gamma, gamma)
         - np.einsum("ijp,pkl->ijkl", c, gamma))
    ric = np.einsum("ijki->jk", R)
    scal = float(np.trace(ginv @ ric))
    l_op = np.einsum("bpqa,p,q->ab", R, xi, xi)
    return FloatGeometry(gamma, R, ric, scal, float(np.trace(l_op)))


def float_crosscheck(spec: AlgebraSpec, pack: GeometryPack | None = None) -> float:
    """Max absolute deviation between float64 and exact values of Gamma, R, Ric, scal, trl."""
    fg = float_geometry(spec)
    pack = pack or geometry(spec)
    n = spec.dim

    def f(s: Scalar) -> float:
        return float(s.constant_value())

    ex_gamma = np.array([[[f(pack.gamma[i][j][k]) for k in range(n)] for j in range(n)] for i in range(n)])
    ex_R = np.zeros((n,) * 4)
    for idx, v in pack.R.items():
        ex_R[idx] = f(v)
    ex_ric = np.array([[f(pack.ric[i, j]) for j in range(n)] for i in range(n)])
    devs = [
        np.max(np.abs(fg.gamma - ex_gamma)),
        np.max(np.abs(fg.R - ex_R)),
        np.max(np.abs(fg.ric - ex_ric)),
        abs(fg.scal - f(pack.scal)),
        abs(fg.trl - f(pack.trl)),
    ]
    return float(max(devs))


# ---------------------------------------------------------------------------
# Random search


DEFAULT_POOL = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-1, 2))
FAMILIES = ("f2", "f2-diagonal", "extended")


@dataclass(frozen=True)
class SearchConfig:
    budget: int
    seed: int
    pool: Tuple[Fraction, ...] = DEFAULT_POOL
    family: str = "extended"
    dim: int = 3

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if self.dim != 3:
            raise ValueError("search is restricted to dimension 3")


@dataclass(frozen=True)
class SearchHit:
    spec: AlgebraSpec
    h_zero: bool
    trial: int


def candidate(cfg: SearchConfig, rnd: random.Random, trial: int) -> AlgebraSpec:
    """One draw.  Every family has ``[E1,E2] = -2 E3`` and horizontal ``[E_a, E3]``."""
    pick = lambda: rnd.choice(cfg.pool)  # noqa: E731
    if cfg.family == "f2":
        b, c = pick(), pick()
        br = {(0, 2): [0, b, 0], (1, 2): [c, 0, 0]}
    elif cfg.family == "f2-diagonal":
        b = pick()
        br = {(0, 2): [0, b, 0], (1, 2): [b, 0, 0]}
    else:
        p, q, r, s = pick(), pick(), pick(), pick()
        br = {(0, 2): [p, q, 0], (1, 2): [r, s, 0]}
    br[(0, 1)] = [0, 0, -2]
    return make_spec(f"search-{cfg.seed}-{trial}", 3, (), br, [1, -1, 1], {0: [0, 1, 0], 1: [1, 0, 0]}, [0, 0, 1])


def _key(spec: AlgebraSpec):
    return tuple(str(x) for x in spec.scalars())


def random_search(cfg: SearchConfig) -> List[SearchHit]:
    """Valid paracontact specs found within the budget, deduplicated, in trial order."""
    rnd = random.Random(cfg.seed)
    seen = set()
    hits: List[SearchHit] = []
    for t in range(cfg.budget):
        spec = candidate(cfg, rnd, t)
        k = _key(spec)
        if k in seen:
            continue
        seen.add(k)
        try:
            ok = validate_almost_paracontact(spec).holds and check_paracontact(spec).holds
        except (JacobiError, SpecError):
            continue
        if not ok:
            continue
        pack = geometry(spec)
        hits.append(SearchHit(spec, pack.h.is_zero(), t))
    return hits
