"""Recompute connection and Ricci tensors with sympy, sharing no code with the engine."""

from __future__ import annotations

import pytest

sp = pytest.importorskip("sympy")

from conftest import f1, f2  # noqa: E402
from pcm.geometry import geometry  # noqa: E402


def sympy_ricci(brackets, metric):
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j), v in brackets.items():
        for k in range(3):
            c[i][j][k], c[j][i][k] = v[k], -v[k]
    g = sp.diag(*metric)
    gi = g.inv()
    E = [sp.Matrix([1 if k == i else 0 for k in range(3)]) for i in range(3)]

    def br(X, Y):
        return sp.Matrix([sum(X[i] * Y[j] * c[i][j][k] for i in range(3) for j in range(3)) for k in range(3)])

    def ip(X, Y):
        return (X.T * g * Y)[0]

    def nab(X, Y):
        return gi * sp.Matrix([sp.Rational(1, 2) * (ip(br(X, Y), Z) - ip(br(Y, Z), X) + ip(br(Z, X), Y)) for Z in E])

    def R(X, Y, Z):
        return nab(X, nab(Y, Z)) - nab(Y, nab(X, Z)) - nab(br(X, Y), Z)

    ric = sp.Matrix(3, 3, lambda j, k: sum(R(E[i], E[j], E[k])[i] for i in range(3)))
    return sp.simplify(ric), gi


def to_sympy(s, syms):
    return sp.sympify(str(s).replace("^", "**"), locals=syms)


@pytest.mark.parametrize("which", ["f1", "f2"])
def test_ricci_matches_sympy(which):
    if which == "f1":
        a, b = sp.symbols("alpha beta")
        ric, _ = sympy_ricci({(0, 1): [0, 0, a], (0, 2): [0, b, 0], (1, 2): [b, 0, 0]}, (1, -1, 1))
        pack, syms = geometry(f1()), {"alpha": a, "beta": b}
    else:
        b, c = sp.symbols("b c")
        ric, _ = sympy_ricci({(0, 1): [0, 0, -2], (0, 2): [0, b, 0], (1, 2): [c, 0, 0]}, (1, -1, 1))
        pack, syms = geometry(f2()), {"b": b, "c": c}
    for i in range(3):
        for j in range(3):
            assert sp.simplify(to_sympy(pack.ric[i, j], syms) - ric[i, j]) == 0, (i, j)


def test_q_commutes_with_phi_for_every_beta():
    # the independent computation agrees: no constraint on beta survives at alpha = -2
    b = sp.symbols("beta")
    ric, gi = sympy_ricci({(0, 1): [0, 0, -2], (0, 2): [0, b, 0], (1, 2): [b, 0, 0]}, (1, -1, 1))
    Q = gi * ric
    phi = sp.Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    assert sp.simplify(Q * phi - phi * Q) == sp.zeros(3, 3)
    assert sp.simplify(Q - sp.diag(2 * b + 2, 2 * b + 2, -2)) == sp.zeros(3, 3)
