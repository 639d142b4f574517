"""Levi-Civita connection, curvature and the Reeb-field operators of a spec.

Conventions (fixed so that the Lie-group example reproduces its published
Ricci tensor):

* ``R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``
* ``Ric(X,Y) = trace(Z -> R(Z,X)Y)``
* ``R(X,Y,Z,W) = g(R(X,Y)Z, W)``
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .exact import ONE, ZERO, Number, Scalar, as_scalar
from .linalg import Matrix
from .model import AlgebraSpec, Tensor, d_eta

Gamma = Tuple[Tuple[Tuple[Scalar, ...], ...], ...]
Vector = Sequence["Scalar | Number"]


class DegeneratePlane(ValueError):
    pass


def koszul_connection(spec: AlgebraSpec) -> Gamma:
    """``gamma[i][j][k] = Gamma^k_ij`` with ``nabla_{E_i} E_j = Gamma^k_ij E_k``.

    For constant ``g`` the Koszul formula reduces to
    ``2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)``.
    """
    n = spec.dim
    g = spec.metric
    ginv = spec.ginv
    # cl[i][j][m] = g([E_i, E_j], E_m)
    cl = [[[sum((spec.c(i, j, k) * g[k, m] for k in range(n)), ZERO) for m in range(n)]
           for j in range(n)] for i in range(n)]
    half = Fraction(1, 2)
    gamma = []
    for i in range(n):
        row = []
        for j in range(n):
            lowered = [(cl[i][j][m] - cl[j][m][i] + cl[m][i][j]) * half for m in range(n)]
            row.append(tuple(
                sum((ginv[k, m] * lowered[m] for m in range(n) if not ginv[k, m].is_zero()), ZERO)
                for k in range(n)
            ))
        gamma.append(tuple(row))
    return tuple(gamma)


def torsion_residual(spec: AlgebraSpec, gamma: Gamma):
    n = spec.dim
    return [
        (f"T^{k + 1}_{i + 1}{j + 1}", gamma[i][j][k] - gamma[j][i][k] - spec.c(i, j, k))
        for i in range(n) for j in range(n) for k in range(n)
    ]


def metric_compat_residual(spec: AlgebraSpec, gamma: Gamma):
    n = spec.dim
    g = spec.metric
    out = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                v = sum((g[l, k] * gamma[i][j][l] + g[j, l] * gamma[i][k][l] for l in range(n)), ZERO)
                out.append((f"(nabla_{i + 1} g)_{j + 1}{k + 1}", v))
    return out


def curvature_tensor(spec: AlgebraSpec, gamma: Gamma) -> Tensor:
    """``R[i, j, k, l]`` is the ``E_l`` component of ``R(E_i, E_j) E_k``."""
    n = spec.dim

    def comp(i, j, k, l):
        acc = ZERO
        for p in range(n):
            a = gamma[j][k][p]
            if not a.is_zero():
                acc = acc + a * gamma[i][p][l]
            b = gamma[i][k][p]
            if not b.is_zero():
                acc = acc - b * gamma[j][p][l]
            c = spec.c(i, j, p)
            if not c.is_zero():
                acc = acc - c * gamma[p][k][l]
        return acc

    return Tensor.build("dddu", n, comp)


@dataclass(frozen=True)
class Curvature:
    R: Tensor
    R_low: Tensor
    ric: Matrix
    Q: Matrix
    scal: Scalar
    l: Matrix
    trl: Scalar


def curvature(spec: AlgebraSpec, gamma: Gamma) -> Curvature:
    n = spec.dim
    R = curvature_tensor(spec, gamma)
    R_low = R.lower(3, spec.metric)
    ric = Matrix([[sum((R[i, j, k, i] for i in range(n)), ZERO) for k in range(n)] for j in range(n)])
    Q = spec.ginv @ ric
    xi = spec.xi_s
    l_op = Matrix([
        [sum((R[b, p, q, a] * xi[p] * xi[q] for p in range(n) for q in range(n)
              if not (xi[p].is_zero() or xi[q].is_zero())), ZERO) for b in range(n)]
        for a in range(n)
    ])
    return Curvature(R, R_low, ric, Q, Q.trace(), l_op, l_op.trace())


def ad(spec: AlgebraSpec, v: Vector) -> Matrix:
    """Frame matrix of ``X -> [v, X]``."""
    n = spec.dim
    v = [as_scalar(x) for x in v]
    return Matrix([
        [sum((v[m] * spec.c(m, j, k) for m in range(n) if not v[m].is_zero()), ZERO) for j in range(n)]
        for k in range(n)
    ])


@dataclass(frozen=True)
class Operators:
    tau: Matrix
    h: Matrix
    d_eta: Matrix
    c2: Scalar
    trh2: Scalar
    lie_xi_phi: Matrix


def structure_operators(spec: AlgebraSpec) -> Operators:
    """``tau = L_xi g``, ``h = 1/2 L_xi phi``, ``d eta`` and ``c^2 = 1/2 |tau|^2``.

    ``c2`` is signed: with an indefinite metric ``|tau|^2`` can be negative.
    """
    g = spec.metric
    A = ad(spec, spec.xi_s)
    tau = -(A.T @ g + g @ A)
    lie_phi = A @ spec.phi - spec.phi @ A
    h = lie_phi * Fraction(1, 2)
    ginv = spec.ginv
    c2 = (ginv @ tau @ ginv @ tau).trace() * Fraction(1, 2)
    return Operators(tau, h, d_eta(spec), c2, (h @ h).trace(), lie_phi)


def nabla(gamma: Gamma, T: Tensor) -> Tensor:
    """Full covariant derivative: ``out[m, *idx] = (nabla_{E_m} T)[*idx]``.

    Valid for left-invariant tensors, whose frame components are constant.
    """
    n = T.dim
    var = T.variance

    def comp(m, *idx):
        acc = ZERO
        for s, v in enumerate(var):
            for p in range(n):
                if v == "d":
                    c = gamma[m][idx[s]][p]
                    if not c.is_zero():
                        acc = acc - c * T[idx[:s] + (p,) + idx[s + 1:]]
                else:
                    c = gamma[m][p][idx[s]]
                    if not c.is_zero():
                        acc = acc + c * T[idx[:s] + (p,) + idx[s + 1:]]
        return acc

    return Tensor.build(("d",) + var, n, comp)


def covariant_derivative(gamma: Gamma, T: Tensor, direction: Vector) -> Tensor:
    """``nabla_v T`` for a constant direction ``v = v^m E_m``."""
    n = T.dim
    v = [as_scalar(x) for x in direction]
    full = nabla(gamma, T)

    def comp(*idx):
        acc = ZERO
        for m in range(n):
            if not v[m].is_zero():
                acc = acc + v[m] * full[(m,) + idx]
        return acc

    return Tensor.build(T.variance, n, comp)


def nabla_operator(gamma: Gamma, A: Matrix, direction: Vector) -> Matrix:
    return covariant_derivative(gamma, Tensor.from_matrix(A, "ud"), direction).to_matrix()


def nabla_bilinear(gamma: Gamma, B: Matrix, direction: Vector) -> Matrix:
    return covariant_derivative(gamma, Tensor.from_matrix(B, "dd"), direction).to_matrix()


@dataclass(frozen=True)
class GeometryPack:
    spec: AlgebraSpec
    gamma: Gamma
    R: Tensor
    R_low: Tensor
    ric: Matrix
    Q: Matrix
    scal: Scalar
    trl: Scalar
    l: Matrix
    tau: Matrix
    h: Matrix
    d_eta: Matrix
    c2: Scalar
    trh2: Scalar
    lie_xi_phi: Matrix
    nabla_xi_phi: Matrix
    nabla_xi_h: Matrix
    nabla_xi_tau: Matrix
    nabla_xi_l: Matrix
    nabla_R: Tensor

    @property
    def dim(self) -> int:
        return self.spec.dim

    @property
    def g(self) -> Matrix:
        return self.spec.metric

    @property
    def phi(self) -> Matrix:
        return self.spec.phi

    @property
    def xi(self) -> Tuple[Scalar, ...]:
        return self.spec.xi_s

    @property
    def eta(self) -> Tuple[Scalar, ...]:
        return self.spec.eta_s

    # -- evaluation helpers -------------------------------------------------

    def inner(self, X: Vector, Y: Vector) -> Scalar:
        return bilinear(self.g, X, Y)

    def curv(self, X: Vector, Y: Vector, Z: Vector) -> Tuple[Scalar, ...]:
        """``R(X, Y) Z`` as a component vector."""
        n = self.dim
        X, Y, Z = _s(X), _s(Y), _s(Z)
        out = [ZERO] * n
        for i in range(n):
            if X[i].is_zero():
                continue
            for j in range(n):
                if Y[j].is_zero():
                    continue
                for k in range(n):
                    if Z[k].is_zero():
                        continue
                    f = X[i] * Y[j] * Z[k]
                    for l in range(n):
                        r = self.R[i, j, k, l]
                        if not r.is_zero():
                            out[l] = out[l] + f * r
        return tuple(out)

    def curv4(self, X: Vector, Y: Vector, Z: Vector, W: Vector) -> Scalar:
        return self.inner(self.curv(X, Y, Z), W)


def geometry(spec: AlgebraSpec) -> GeometryPack:
    gamma = koszul_connection(spec)
    cv = curvature(spec, gamma)
    ops = structure_operators(spec)
    xi = spec.xi_s
    return GeometryPack(
        spec=spec, gamma=gamma, R=cv.R, R_low=cv.R_low, ric=cv.ric, Q=cv.Q, scal=cv.scal, trl=cv.trl,
        l=cv.l, tau=ops.tau, h=ops.h, d_eta=ops.d_eta, c2=ops.c2, trh2=ops.trh2, lie_xi_phi=ops.lie_xi_phi,
        nabla_xi_phi=nabla_operator(gamma, spec.phi, xi),
        nabla_xi_h=nabla_operator(gamma, ops.h, xi),
        nabla_xi_tau=nabla_bilinear(gamma, ops.tau, xi),
        nabla_xi_l=nabla_operator(gamma, cv.l, xi),
        nabla_R=nabla(gamma, cv.R_low),
    )


def _s(v: Vector) -> Tuple[Scalar, ...]:
    return tuple(as_scalar(x) for x in v)


def apply(A: Matrix, X: Vector) -> Tuple[Scalar, ...]:
    X = _s(X)
    return tuple(sum((A[i, j] * X[j] for j in range(A.cols) if not X[j].is_zero()), ZERO) for i in range(A.rows))


def bilinear(B: Matrix, X: Vector, Y: Vector) -> Scalar:
    X, Y = _s(X), _s(Y)
    acc = ZERO
    for i in range(B.rows):
        if X[i].is_zero():
            continue
        for j in range(B.cols):
            if not Y[j].is_zero() and not B[i, j].is_zero():
                acc = acc + X[i] * B[i, j] * Y[j]
    return acc


def basis_vector(n: int, i: int) -> Tuple[Scalar, ...]:
    return tuple(ONE if k == i else ZERO for k in range(n))


@dataclass(frozen=True)
class SectionalResult:
    kind: str
    X: Tuple[Scalar, ...]
    Y: Tuple[Scalar, ...]
    epsilon: int
    value: Scalar


def sectional(pack: GeometryPack, X: Vector, kind: str) -> SectionalResult:
    """xi-sectional ``K(xi, X) = eps_X R(X,xi,xi,X)`` or phi-sectional ``K(X, phi X) = -R(X,phiX,phiX,X)``.

    ``X`` must lie in ker eta with ``g(X, X) = +-1`` exactly.
    """
    X = _s(X)
    if not sum((e * x for e, x in zip(pack.eta, X)), ZERO).is_zero():
        raise ValueError("X must be orthogonal to xi (eta(X) = 0)")
    norm = pack.inner(X, X)
    if norm.is_zero():
        raise DegeneratePlane("degenerate plane: X is null")
    if not norm.is_constant() or abs(norm.constant_value()) != 1:
        raise ValueError(f"X must be a unit vector, got g(X,X) = {norm}")
    eps = int(norm.constant_value())
    if kind == "xi-sectional":
        xi = pack.xi
        return SectionalResult(kind, X, xi, eps, pack.curv4(X, xi, xi, X) * eps)
    if kind == "phi-sectional":
        PX = apply(pack.phi, X)
        return SectionalResult(kind, X, PX, eps, -pack.curv4(X, PX, PX, X))
    raise ValueError(f"unknown sectional kind {kind!r}")
