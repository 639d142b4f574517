"""Dense matrices over :class:`~pcm.exact.Scalar` and exact solvers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .exact import ONE, ZERO, Number, Scalar, ScalarError, as_scalar


class SingularMatrix(ScalarError):
    pass


class SymbolicSignature(ScalarError):
    """Signature of a parameter-dependent matrix was requested."""


class Matrix:
    """Immutable ``rows x cols`` matrix of Scalars."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Iterable[Iterable["Scalar | Number"]]):
        e = tuple(tuple(as_scalar(x) for x in row) for row in entries)
        self.rows = len(e)
        self.cols = len(e[0]) if e else 0
        if any(len(r) != self.cols for r in e):
            raise ValueError("ragged matrix")
        self._e = e

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "Matrix":
        return cls([[ZERO] * c for _ in range(r)])

    @classmethod
    def diag(cls, values: Sequence["Scalar | Number"]) -> "Matrix":
        n = len(values)
        return cls([[values[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, values: Sequence["Scalar | Number"]) -> "Matrix":
        return cls([[v] for v in values])

    def __getitem__(self, ij: Tuple[int, int]) -> Scalar:
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> Tuple[Scalar, ...]:
        return self._e[i]

    def col(self, j: int) -> Tuple[Scalar, ...]:
        return tuple(r[j] for r in self._e)

    def tolist(self) -> List[List[Scalar]]:
        return [list(r) for r in self._e]

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __iter__(self):
        return iter(self._e)

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self._e])

    def __mul__(self, c: "Scalar | Number") -> "Matrix":
        return Matrix([[a * c for a in r] for r in self._e])

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = [other.col(j) for j in range(other.cols)]
        out = []
        for r in self._e:
            row = []
            for c in cols:
                acc = ZERO
                for a, b in zip(r, c):
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(out)

    @property
    def T(self) -> "Matrix":
        return Matrix([list(self.col(j)) for j in range(self.cols)])

    def trace(self) -> Scalar:
        acc = ZERO
        for i in range(min(self.rows, self.cols)):
            acc = acc + self._e[i][i]
        return acc

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self._e for a in r)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and (self - self.T).is_zero()

    def is_constant(self) -> bool:
        return all(a.is_constant() for r in self._e for a in r)

    def substitute(self, assignment) -> "Matrix":
        return Matrix([[a.substitute(assignment) for a in r] for r in self._e])

    def nonzero(self) -> List[Tuple[Tuple[int, int], Scalar]]:
        return [((i, j), a) for i, r in enumerate(self._e) for j, a in enumerate(r) if not a.is_zero()]

    def _same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(a) for a in r) for r in self._e)
        return f"Matrix([{body}])"


@dataclass(frozen=True)
class Solution:
    """Outcome of :func:`linear_solve`.

    ``status`` is ``"solution"``, ``"no-solution"`` or ``"underdetermined"``.
    ``residual`` lists ``(row, value)`` for rows of ``A x - y`` that do not
    vanish at the pivot solution; it is the witness for ``no-solution``.
    """

    status: str
    x: Tuple[Scalar, ...] = ()
    residual: Tuple[Tuple[int, Scalar], ...] = ()


def _rref(rows: List[List[Scalar]], ncols: int) -> List[int]:
    """In-place Gauss-Jordan over the first ``ncols`` columns; returns pivot columns."""
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = ONE / rows[r][c]
        rows[r] = [a * inv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def linear_solve(A: Matrix, y: Sequence["Scalar | Number"]) -> Solution:
    """Solve ``A x = y`` exactly over the rational-function field."""
    y = [as_scalar(v) for v in y]
    if len(y) != A.rows:
        raise ValueError("right-hand side length does not match rows")
    aug = [list(A.row(i)) + [y[i]] for i in range(A.rows)]
    pivots = _rref(aug, A.cols)
    if len(pivots) < A.cols:
        return Solution("underdetermined")
    x = tuple(aug[i][A.cols] for i in range(A.cols))
    residual = []
    for i in range(A.rows):
        acc = -y[i]
        for a, v in zip(A.row(i), x):
            acc = acc + a * v
        if not acc.is_zero():
            residual.append((i, acc))
    if residual:
        return Solution("no-solution", x, tuple(residual))
    return Solution("solution", x)


def invert(S: Matrix) -> Matrix:
    if S.rows != S.cols:
        raise ValueError("only square matrices are invertible")
    n = S.rows
    aug = [list(S.row(i)) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    if len(_rref(aug, n)) < n:
        raise SingularMatrix("matrix is singular")
    return Matrix([row[n:] for row in aug])


def invert_symmetric(S: Matrix) -> Matrix:
    if not S.is_symmetric():
        raise ValueError("matrix is not symmetric")
    return invert(S)


def signature(S: Matrix) -> Tuple[int, int]:
    """Count of positive and negative squares of a constant symmetric matrix.

    Uses symmetric (congruence) elimination, so the answer is exact by
    Sylvester's law of inertia.
    """
    if not S.is_symmetric():
        raise ValueError("signature requires a symmetric matrix")
    if not S.is_constant():
        raise SymbolicSignature("cannot decide signature symbolically")
    a = [[x.constant_value() for x in r] for r in S]
    n = len(a)
    pos = neg = 0
    k = 0
    while k < n:
        p = next((i for i in range(k, n) if a[i][i] != 0), None)
        if p is None:
            off = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if off is None:
                raise SingularMatrix("symmetric matrix is singular")
            i, j = off
            # Congruence e_i -> e_i + e_j makes the (i, i) entry 2 a_ij.
            for m in range(n):
                a[i][m] += a[j][m]
            for m in range(n):
                a[m][i] += a[m][j]
            p = i
        _swap_sym(a, k, p)
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = a[i][k] / d
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
        for j in range(k + 1, n):
            a[k][j] = Fraction(0)
        for i in range(k + 1, n):
            a[i][k] = Fraction(0)
        k += 1
    return pos, neg


def _swap_sym(a: List[List[Fraction]], i: int, j: int) -> None:
    if i == j:
        return
    a[i], a[j] = a[j], a[i]
    for r in a:
        r[i], r[j] = r[j], r[i]
