"""Structure-constant models of almost paracontact metric manifolds.

An :class:`AlgebraSpec` is a Lie algebra in a fixed frame ``E_1..E_dim``
together with constant left-invariant tensors ``g``, ``phi``, ``xi`` and
``eta``.  Brackets and ``phi`` may depend polynomially on declared
parameters; the metric, ``xi`` and ``eta`` are rational constants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import ONE, ZERO, Number, Poly, Scalar, as_scalar
from .linalg import Matrix, SingularMatrix, invert_symmetric, signature


class SpecError(ValueError):
    """Structural problem with a spec (shape, constness, invertibility)."""


class SignatureError(SpecError):
    pass


class JacobiError(SpecError):
    def __init__(self, residual):
        self.residual = residual
        shown = ", ".join(f"{lbl}={v}" for lbl, v in residual[:3])
        super().__init__(f"bracket violates the Jacobi identity ({shown})")


# ---------------------------------------------------------------------------
# Tensors


class Tensor:
    """Frame components of a tensor; slot ``s`` is contravariant iff variance[s] == 'u'.

    Components are addressed in slot order, e.g. an operator ``A`` with
    variance ``('u', 'd')`` has ``A[i, j] = A^i_j`` (so ``A E_j = A[i, j] E_i``).
    """

    __slots__ = ("variance", "dim", "_data")

    def __init__(self, variance: Sequence[str], dim: int, data: Sequence[Scalar]):
        self.variance = tuple(variance)
        self.dim = dim
        if any(v not in ("u", "d") for v in self.variance):
            raise ValueError(f"bad variance {variance}")
        if len(data) != dim ** len(self.variance):
            raise ValueError("component count does not match dim ** order")
        self._data = tuple(data)

    @classmethod
    def build(cls, variance: Sequence[str], dim: int, fn) -> "Tensor":
        return cls(variance, dim, [as_scalar(fn(*idx)) for idx in cls.indices_for(dim, len(variance))])

    @classmethod
    def from_matrix(cls, m: Matrix, variance: Sequence[str]) -> "Tensor":
        return cls(variance, m.rows, [m[i, j] for i in range(m.rows) for j in range(m.cols)])

    @staticmethod
    def indices_for(dim: int, order: int):
        return itertools.product(range(dim), repeat=order)

    @property
    def order(self) -> int:
        return len(self.variance)

    def indices(self):
        return self.indices_for(self.dim, self.order)

    def _flat(self, idx: Tuple[int, ...]) -> int:
        k = 0
        for i in idx:
            k = k * self.dim + i
        return k

    def __getitem__(self, idx) -> Scalar:
        if not isinstance(idx, tuple):
            idx = (idx,)
        return self._data[self._flat(idx)]

    def items(self):
        return zip(self.indices(), self._data)

    def nonzero(self):
        return [(idx, v) for idx, v in self.items() if not v.is_zero()]

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self._data)

    def to_matrix(self) -> Matrix:
        if self.order != 2:
            raise ValueError("only order-2 tensors convert to matrices")
        n = self.dim
        return Matrix([[self[i, j] for j in range(n)] for i in range(n)])

    def map(self, fn) -> "Tensor":
        return Tensor(self.variance, self.dim, [fn(v) for v in self._data])

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        return Tensor(self.variance, self.dim, [a + b for a, b in zip(self._data, other._data)])

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        return Tensor(self.variance, self.dim, [a - b for a, b in zip(self._data, other._data)])

    def __mul__(self, c) -> "Tensor":
        return Tensor(self.variance, self.dim, [a * c for a in self._data])

    __rmul__ = __mul__

    def __neg__(self) -> "Tensor":
        return Tensor(self.variance, self.dim, [-a for a in self._data])

    def _check(self, other: "Tensor") -> None:
        if self.variance != other.variance or self.dim != other.dim:
            raise ValueError(f"incompatible tensors {self.variance} vs {other.variance}")

    def lower(self, slot: int, g: Matrix) -> "Tensor":
        return self._move(slot, g, "u", "d")

    def raise_(self, slot: int, ginv: Matrix) -> "Tensor":
        return self._move(slot, ginv, "d", "u")

    def _move(self, slot: int, m: Matrix, have: str, want: str) -> "Tensor":
        if self.variance[slot] != have:
            raise ValueError(f"slot {slot} is not {have!r}")
        var = self.variance[:slot] + (want,) + self.variance[slot + 1:]

        def comp(*idx):
            acc = ZERO
            for p in range(self.dim):
                c = m[idx[slot], p]
                if not c.is_zero():
                    acc = acc + c * self[idx[:slot] + (p,) + idx[slot + 1:]]
            return acc

        return Tensor.build(var, self.dim, comp)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.variance, self.dim) == (other.variance, other.dim) and (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Tensor({''.join(self.variance)}, nonzero={len(self.nonzero())})"


# ---------------------------------------------------------------------------
# Constraint sets and check results


@dataclass(frozen=True)
class ConstraintSet:
    """Normalized polynomial generators: primitive, deduplicated, graded-lex sorted."""

    generators: Tuple[Poly, ...] = ()

    @classmethod
    def of(cls, polys: Iterable[Poly]) -> "ConstraintSet":
        seen: Dict[Poly, None] = {}
        for p in polys:
            if p.is_zero():
                continue
            q = p.with_params(p.used_params()).primitive()
            if q.is_constant():
                # a nonzero constant generates the unit ideal
                return cls((q,))
            seen.setdefault(q, None)
        return cls(tuple(sorted(seen, key=_gen_key)))

    def __bool__(self) -> bool:
        return bool(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def never_holds(self) -> bool:
        return any(g.is_constant() for g in self.generators)

    def holds_at(self, point: Mapping[str, Number]) -> bool:
        return all(g.substitute(point).is_zero() for g in self.generators)

    def as_strings(self) -> List[str]:
        return [str(g) for g in self.generators]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConstraintSet):
            return NotImplemented
        return set(self.generators) == set(other.generators)

    def __hash__(self) -> int:
        return hash(frozenset(self.generators))

    def __str__(self) -> str:
        return "{" + ", ".join(self.as_strings()) + "}"


def _gen_key(p: Poly):
    names = p.used_params()
    return (p.degree(), len(p.terms), names, p.sort_key())


class Verdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    CONDITIONAL = "conditional"
    NOT_APPLICABLE = "not-applicable"

    def __str__(self) -> str:
        return self.value


Residual = Tuple[Tuple[str, Scalar], ...]


@dataclass(frozen=True)
class Part:
    """One boolean condition inside a compound (implication/equivalence) check."""

    name: str
    verdict: Verdict
    constraints: ConstraintSet = ConstraintSet()

    def at(self, point: Mapping[str, Number]) -> bool:
        if self.verdict == Verdict.HOLDS:
            return True
        if self.verdict == Verdict.FAILS:
            return False
        return self.constraints.holds_at(point)


@dataclass(frozen=True)
class CheckResult:
    id: str
    statement: str
    verdict: Verdict
    residual: Residual = ()
    constraints: ConstraintSet = ConstraintSet()
    side_conditions: Tuple[Poly, ...] = ()
    kind: str = "identity"
    parts: Tuple[Part, ...] = ()
    note: str = ""
    vacuous: Verdict = Verdict.HOLDS

    @property
    def holds(self) -> bool:
        return self.verdict == Verdict.HOLDS

    def expected_at(self, point: Mapping[str, Number]) -> Verdict:
        """Specialization of this (possibly symbolic) verdict at a parameter point."""
        if self.kind == "implication":
            premise, conclusion = self.parts
            if not premise.at(point):
                return self.vacuous
            return Verdict.HOLDS if conclusion.at(point) else Verdict.FAILS
        if self.kind == "equivalence":
            return Verdict.HOLDS if len({p.at(point) for p in self.parts}) == 1 else Verdict.FAILS
        if self.verdict == Verdict.CONDITIONAL:
            return Verdict.HOLDS if self.constraints.holds_at(point) else Verdict.FAILS
        return self.verdict


def residual_verdict(residual: Residual, params: Sequence[str]) -> Tuple[Verdict, ConstraintSet, Tuple[Poly, ...]]:
    """Verdict of an identity from its nonzero residual components."""
    if not residual:
        return Verdict.HOLDS, ConstraintSet(), ()
    cs = ConstraintSet.of(v.num for _, v in residual)
    side = tuple(ConstraintSet.of(v.den for _, v in residual if not v.den.is_constant()).generators)
    if cs.never_holds() or not params:
        return Verdict.FAILS, cs, side
    return Verdict.CONDITIONAL, cs, side


def identity_check(check_id: str, statement: str, residual: Iterable[Tuple[str, Scalar]],
                   params: Sequence[str], note: str = "") -> CheckResult:
    res = tuple((lbl, v) for lbl, v in residual if not v.is_zero())
    verdict, cs, side = residual_verdict(res, params)
    return CheckResult(check_id, statement, verdict, res, cs, side, note=note)


def as_part(name: str, result: CheckResult) -> Part:
    return Part(name, result.verdict, result.constraints)


def implication_check(check_id: str, statement: str, premise: Part, conclusion: CheckResult,
                      vacuous: Verdict = Verdict.HOLDS, note: str = "") -> CheckResult:
    """``premise => conclusion`` on one instance; vacuous when the premise never holds."""
    concl = as_part("conclusion", conclusion)
    parts = (premise, concl)
    base = dict(kind="implication", parts=parts, vacuous=vacuous)
    if premise.verdict == Verdict.FAILS:
        why = "not applicable: premise fails" if vacuous == Verdict.NOT_APPLICABLE else "vacuous: premise fails"
        return CheckResult(check_id, statement, vacuous, note=_join(why, note), **base)
    if conclusion.verdict == Verdict.HOLDS:
        return CheckResult(check_id, statement, Verdict.HOLDS, note=note, **base)
    if premise.verdict == Verdict.HOLDS:
        return replace(conclusion, id=check_id, statement=statement, note=_join(conclusion.note, note), **base)
    # Premise conditional: the conclusion holds on V(premise) if its generators reduce to zero.
    gens = list(premise.constraints)
    if conclusion.constraints and all(g.reduce_by(gens).is_zero() for g in conclusion.constraints):
        return CheckResult(check_id, statement, Verdict.HOLDS,
                           note=_join("conclusion reduces to zero modulo the premise", note), **base)
    return CheckResult(check_id, statement, Verdict.CONDITIONAL, conclusion.residual,
                       conclusion.constraints, conclusion.side_conditions, note=note, **base)


def equivalence_check(check_id: str, statement: str, parts: Sequence[Part], note: str = "") -> CheckResult:
    """All listed conditions have the same truth value on this instance."""
    parts = tuple(parts)
    verdicts = {p.verdict for p in parts}
    if verdicts <= {Verdict.HOLDS, Verdict.FAILS}:
        v = Verdict.HOLDS if len(verdicts) == 1 else Verdict.FAILS
        return CheckResult(check_id, statement, v, kind="equivalence", parts=parts, note=note)
    if verdicts == {Verdict.CONDITIONAL} and len({p.constraints for p in parts}) == 1:
        return CheckResult(check_id, statement, Verdict.HOLDS, kind="equivalence", parts=parts,
                           note=_join("all conditions share one constraint set", note))
    union = ConstraintSet.of(g for p in parts for g in p.constraints)
    return CheckResult(check_id, statement, Verdict.CONDITIONAL, constraints=union,
                       kind="equivalence", parts=parts, note=note)


def _join(*notes: str) -> str:
    return "; ".join(n for n in notes if n)


# ---------------------------------------------------------------------------
# Algebra description


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    """A Lie algebra in a frame with almost paracontact metric data.

    ``bracket[i][j][k]`` is the structure constant ``c^k_ij`` with
    ``[E_i, E_j] = c^k_ij E_k``.  ``phi`` is the frame matrix (column ``j`` is
    ``phi E_j``).
    """

    name: str
    dim: int
    params: Tuple[str, ...]
    bracket: Tuple[Tuple[Tuple[Scalar, ...], ...], ...]
    metric: Matrix
    phi: Matrix
    xi: Tuple[Fraction, ...]
    eta: Tuple[Fraction, ...]

    def __post_init__(self):
        n = self.dim
        if n < 3 or n % 2 == 0:
            raise SpecError(f"dim must be odd and at least 3, got {n}")
        if self.metric.shape != (n, n) or self.phi.shape != (n, n):
            raise SpecError("metric and phi must be dim x dim")
        if len(self.xi) != n or len(self.eta) != n:
            raise SpecError("xi and eta must have dim components")
        if len(self.bracket) != n or any(len(r) != n or any(len(c) != n for c in r) for r in self.bracket):
            raise SpecError("bracket table must be dim x dim x dim")
        if not self.metric.is_constant():
            raise SpecError("metric entries must be constant rationals")
        if not self.metric.is_symmetric():
            raise SpecError("metric must be symmetric")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if not (self.bracket[i][j][k] + self.bracket[j][i][k]).is_zero():
                        raise SpecError(f"bracket is not antisymmetric at [{i + 1},{j + 1}]")
        unknown = {p for s in self.scalars() for p in s.used_params()} - set(self.params)
        if unknown:
            raise SpecError(f"undeclared parameters: {sorted(unknown)}")

    @property
    def n(self) -> int:
        return (self.dim - 1) // 2

    def scalars(self):
        for r in self.bracket:
            for c in r:
                yield from c
        for row in self.phi:
            yield from row

    def c(self, i: int, j: int, k: int) -> Scalar:
        return self.bracket[i][j][k]

    def bracket_vec(self, i: int, j: int) -> Tuple[Scalar, ...]:
        return self.bracket[i][j]

    @property
    def ginv(self) -> Matrix:
        try:
            return invert_symmetric(self.metric)
        except SingularMatrix as exc:
            raise SpecError("metric is singular") from exc

    @property
    def xi_s(self) -> Tuple[Scalar, ...]:
        return tuple(Scalar.const(x) for x in self.xi)

    @property
    def eta_s(self) -> Tuple[Scalar, ...]:
        return tuple(Scalar.const(x) for x in self.eta)

    def substitute(self, assignment: Mapping[str, Number]) -> "AlgebraSpec":
        unknown = set(assignment) - set(self.params)
        if unknown:
            raise SpecError(f"cannot substitute undeclared parameters {sorted(unknown)}")
        sub = {k: Fraction(v) for k, v in assignment.items()}
        keep = tuple(p for p in self.params if p not in sub)

        def s(x: Scalar) -> Scalar:
            return _reparam(x.substitute(sub), keep)

        return replace(
            self,
            params=keep,
            bracket=tuple(tuple(tuple(s(x) for x in c) for c in r) for r in self.bracket),
            phi=Matrix([[s(x) for x in row] for row in self.phi]),
        )

    def same_as(self, other: "AlgebraSpec") -> bool:
        return (
            self.name == other.name and self.dim == other.dim and self.params == other.params
            and all(a == b for a, b in zip(_flat3(self.bracket), _flat3(other.bracket)))
            and self.metric == other.metric and self.phi == other.phi
            and self.xi == other.xi and self.eta == other.eta
        )


def _flat3(b):
    return [x for r in b for c in r for x in c]


def _reparam(x: Scalar, params: Tuple[str, ...]) -> Scalar:
    return Scalar._raw(x.num.with_params(params), x.den.with_params(params))


def make_spec(name: str, dim: int, params: Sequence[str], brackets: Mapping[Tuple[int, int], Sequence],
              metric, phi_columns: Mapping[int, Sequence], xi: Sequence[Number],
              eta: Optional[Sequence[Number]] = None) -> AlgebraSpec:
    """Convenience constructor using 0-based frame indices.

    ``brackets[(i, j)]`` gives the components of ``[E_i, E_j]``; ``[E_j, E_i]``
    is filled in by antisymmetry.  ``eta`` defaults to ``g(., xi)``.  Entries
    may be Scalars or plain numbers.
    """
    params = tuple(params)

    def s(x) -> Scalar:
        return _reparam(as_scalar(x), params)

    table = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
    for (i, j), vec in brackets.items():
        if i == j:
            raise SpecError("bracket indices must differ")
        for k, v in enumerate(vec):
            table[i][j][k] = s(v)
            table[j][i][k] = -s(v)
    if not isinstance(metric, Matrix):
        metric = Matrix.diag(metric) if not isinstance(metric[0], (list, tuple)) else Matrix(metric)
    if not metric.is_constant():
        raise SpecError("metric entries must be constant rationals")
    cols = [[ZERO] * dim for _ in range(dim)]
    for j, vec in phi_columns.items():
        cols[j] = [s(v) for v in vec]
    phi = Matrix([[cols[j][i] for j in range(dim)] for i in range(dim)])
    xi_t = tuple(Fraction(x) for x in xi)
    if eta is None:
        eta_t = tuple(
            sum((metric[i, k].constant_value() * xi_t[k] for k in range(dim)), Fraction(0)) for i in range(dim)
        )
    else:
        eta_t = tuple(Fraction(x) for x in eta)
    return AlgebraSpec(
        name=name, dim=dim, params=params,
        bracket=tuple(tuple(tuple(c) for c in r) for r in table),
        metric=metric, phi=phi, xi=xi_t, eta=eta_t,
    )


# ---------------------------------------------------------------------------
# Validation


def jacobi_residual(spec: AlgebraSpec) -> List[Tuple[str, Scalar]]:
    n = spec.dim
    out = []
    for i, j, k in itertools.combinations(range(n), 3):
        for m in range(n):
            acc = ZERO
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                # [E_a, [E_b, E_c]] component m
                for p in range(n):
                    x = spec.c(b, c, p)
                    if not x.is_zero():
                        acc = acc + x * spec.c(a, p, m)
            if not acc.is_zero():
                out.append((f"jacobi[{i + 1},{j + 1},{k + 1}]^{m + 1}", acc))
    return out


def phi_rank(spec: AlgebraSpec) -> int:
    """Rank of phi over the rational-function field."""
    from .linalg import _rref

    rows = [list(r) for r in spec.phi]
    return len(_rref(rows, spec.dim))


def validate_almost_paracontact(spec: AlgebraSpec, extract_jacobi: bool = False) -> CheckResult:
    """Check every defining condition except the paracontact form condition.

    Raises :class:`SignatureError` when ``g`` does not have signature
    ``(n+1, n)`` and :class:`JacobiError` for non-Lie brackets (unless
    ``extract_jacobi`` turns Jacobi residuals into constraints).
    """
    n = spec.dim
    g = spec.metric
    try:
        p, q = signature(g)
    except SingularMatrix as exc:
        raise SignatureError("metric is singular") from exc
    if (p, q) != (spec.n + 1, spec.n):
        raise SignatureError(f"metric has signature ({p},{q}); a compatible metric needs ({spec.n + 1},{spec.n})")

    res: List[Tuple[str, Scalar]] = []
    jac = jacobi_residual(spec)
    if jac and not extract_jacobi:
        raise JacobiError(jac)
    res.extend(jac)

    phi = spec.phi
    xi = spec.xi_s
    eta = spec.eta_s
    res.append(("eta(xi)", sum((e * x for e, x in zip(eta, xi)), ZERO) - ONE))
    for i in range(n):
        res.append((f"(phi xi)^{i + 1}", sum((phi[i, k] * xi[k] for k in range(n)), ZERO)))
    for j in range(n):
        res.append((f"(eta phi)_{j + 1}", sum((eta[k] * phi[k, j] for k in range(n)), ZERO)))
    phi2 = phi @ phi
    for i in range(n):
        for j in range(n):
            target = (ONE if i == j else ZERO) - xi[i] * eta[j]
            res.append((f"(phi^2 - id + eta(x)xi)[{i + 1},{j + 1}]", phi2[i, j] - target))
    compat = phi.T @ g @ phi
    for i in range(n):
        for j in range(n):
            res.append((f"g(phi E{i + 1},phi E{j + 1}) + g - eta eta", compat[i, j] + g[i, j] - eta[i] * eta[j]))
    for i in range(n):
        gx = sum((g[i, k] * xi[k] for k in range(n)), ZERO)
        res.append((f"eta_{i + 1} - g(E{i + 1},xi)", eta[i] - gx))
    return identity_check(
        "model.almost_paracontact",
        "eta(xi)=1, phi xi=0, eta o phi=0, phi^2=id-eta(x)xi, g(phi X,phi Y)=-g(X,Y)+eta(X)eta(Y), eta=g(.,xi)",
        res, spec.params,
    )


def d_eta(spec: AlgebraSpec) -> Matrix:
    """``d eta(E_i, E_j) = -1/2 eta([E_i, E_j])`` for constant frame coefficients."""
    n = spec.dim
    eta = spec.eta_s
    half = Fraction(-1, 2)
    return Matrix([
        [sum((eta[k] * spec.c(i, j, k) for k in range(n)), ZERO) * half for j in range(n)]
        for i in range(n)
    ])


def paracontact_residual(spec: AlgebraSpec) -> List[Tuple[str, Scalar]]:
    g_phi = spec.metric @ spec.phi  # (i, j) -> g(E_i, phi E_j)
    de = d_eta(spec)
    n = spec.dim
    return [(f"g(E{i + 1},phi E{j + 1}) - deta", g_phi[i, j] - de[i, j]) for i in range(n) for j in range(n)]


def check_paracontact(spec: AlgebraSpec) -> CheckResult:
    return identity_check("model.paracontact", "g(X, phi Y) = d eta(X, Y)",
                          paracontact_residual(spec), spec.params)
