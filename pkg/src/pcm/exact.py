"""Exact scalars: multivariate polynomials over Q and normalized quotients of them.

Every tensor component in the engine is a :class:`Scalar`.  Coefficients are
:class:`fractions.Fraction`, so nothing here ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Dict, Iterable, Mapping, Tuple, Union

Exponents = Tuple[int, ...]
Number = Union[int, Fraction]


class ScalarError(ArithmeticError):
    """Base class for exact-arithmetic failures."""


class DivisionByZero(ScalarError, ZeroDivisionError):
    pass


class DegenerateSubstitution(ScalarError):
    """A denominator vanished at the requested parameter point."""

    def __init__(self, point: Mapping[str, Fraction]):
        self.point = dict(point)
        shown = ", ".join(f"{k}={fmt_rational(v)}" for k, v in sorted(self.point.items()))
        super().__init__(f"denominator vanishes at {{{shown}}}")


def fmt_rational(q: Number) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _grlex_key(e: Exponents) -> Tuple[int, Exponents]:
    return (sum(e), e)


def _merge_params(a: Tuple[str, ...], b: Tuple[str, ...]) -> Tuple[str, ...]:
    if a == b or not b:
        return a
    if not a:
        return b
    return a + tuple(p for p in b if p not in a)


class Poly:
    """Sparse polynomial in named parameters with rational coefficients.

    Terms are stored as ``{exponent_vector: coefficient}`` with zero
    coefficients never present.  Term order is graded lexicographic over the
    declared parameter order.
    """

    __slots__ = ("params", "terms", "_hash")

    def __init__(self, params: Iterable[str] = (), terms: Mapping[Exponents, Number] | None = None):
        self.params: Tuple[str, ...] = tuple(params)
        n = len(self.params)
        clean: Dict[Exponents, Fraction] = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise ValueError(f"exponent vector {e} does not match {n} parameters")
            c = Fraction(c)
            if c:
                clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, c: Number, params: Iterable[str] = ()) -> "Poly":
        params = tuple(params)
        return cls(params, {(0,) * len(params): c})

    @classmethod
    def var(cls, name: str, params: Iterable[str] | None = None) -> "Poly":
        params = tuple(params) if params is not None else (name,)
        if name not in params:
            raise ValueError(f"unknown parameter {name!r}")
        e = tuple(1 if p == name else 0 for p in params)
        return cls(params, {e: 1})

    @classmethod
    def _raw(cls, params: Tuple[str, ...], terms: Dict[Exponents, Fraction]) -> "Poly":
        p = cls.__new__(cls)
        p.params = params
        p.terms = terms
        p._hash = None
        return p

    # -- structure ----------------------------------------------------------

    def with_params(self, params: Tuple[str, ...]) -> "Poly":
        """Re-express over a parameter list that contains all used parameters."""
        if params == self.params:
            return self
        index = {p: i for i, p in enumerate(params)}
        out: Dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            ne = [0] * len(params)
            for p, k in zip(self.params, e):
                if k:
                    if p not in index:
                        raise ValueError(f"parameter {p!r} is not in {params}")
                    ne[index[p]] = k
            out[tuple(ne)] = c
        return Poly._raw(params, out)

    def _aligned(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if self.params == other.params:
            return self, other
        params = _merge_params(self.params, other.params)
        return self.with_params(params), other.with_params(params)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def used_params(self) -> Tuple[str, ...]:
        used = [False] * len(self.params)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(p for p, u in zip(self.params, used) if u)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading(self) -> Tuple[Exponents, Fraction]:
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if not self.terms:
            return Fraction(0)
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        return Fraction(abs(reduce(gcd, nums)), reduce(lcm, dens))

    def primitive(self) -> "Poly":
        """Coprime integer coefficients with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading()[1] < 0:
            c = -c
        return self.scale(1 / c)

    def monic(self) -> "Poly":
        return self.scale(1 / self.leading()[1])

    # -- arithmetic ---------------------------------------------------------

    def scale(self, c: Number) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly._raw(self.params, {})
        return Poly._raw(self.params, {e: v * c for e, v in self.terms.items()})

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self._aligned(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(a.params, out)

    def __neg__(self) -> "Poly":
        return Poly._raw(self.params, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self._aligned(other)
        out: Dict[Exponents, Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly._raw(a.params, out)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1, self.params)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, divisor: "Poly") -> Tuple["Poly", "Poly"]:
        """Multivariate division by a single polynomial (graded-lex)."""
        if divisor.is_zero():
            raise DivisionByZero("polynomial division by zero")
        p, d = self._aligned(divisor)
        de, dc = d.leading()
        q: Dict[Exponents, Fraction] = {}
        r: Dict[Exponents, Fraction] = {}
        work = p
        while work.terms:
            e, c = work.leading()
            if all(x >= y for x, y in zip(e, de)):
                shift = tuple(x - y for x, y in zip(e, de))
                f = c / dc
                q[shift] = q.get(shift, 0) + f
                work = work - Poly._raw(p.params, {shift: f}) * d
            else:
                r[e] = c
                work = Poly._raw(p.params, {k: v for k, v in work.terms.items() if k != e})
        return Poly(p.params, q), Poly(p.params, r)

    def exact_div(self, divisor: "Poly") -> "Poly | None":
        q, r = self.divmod(divisor)
        return q if r.is_zero() else None

    def reduce_by(self, divisors: Iterable["Poly"]) -> "Poly":
        """Remainder after repeated division by each divisor (not a normal form)."""
        rem = self
        changed = True
        divisors = [d for d in divisors if not d.is_zero()]
        while changed and not rem.is_zero():
            changed = False
            for d in divisors:
                _, r = rem.divmod(d)
                if r != rem:
                    rem = r
                    changed = True
        return rem

    # -- evaluation ---------------------------------------------------------

    def substitute(self, assignment: Mapping[str, Number]) -> "Poly":
        """Replace the assigned parameters by rationals; others are kept."""
        keep = tuple(p for p in self.params if p not in assignment)
        vals = [Fraction(assignment[p]) if p in assignment else None for p in self.params]
        keep_idx = [i for i, p in enumerate(self.params) if p not in assignment]
        out: Dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k and vals[i] is not None:
                    v *= vals[i] ** k
            if not v:
                continue
            ne = tuple(e[i] for i in keep_idx)
            s = out.get(ne, 0) + v
            if s:
                out[ne] = s
            else:
                out.pop(ne, None)
        return Poly._raw(keep, out)

    # -- comparison / printing ----------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(
                (frozenset((p, k) for p, k in zip(self.params, e) if k), c)
                for e, c in self.terms.items()
            ))
        return self._hash

    def sort_key(self) -> tuple:
        # Canonical ordering for generator lists: by term sequence, graded-lex.
        return tuple((_grlex_key(e), c) for e, c in self.sorted_terms())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                p if k == 1 else f"{p}^{k}" for p, k in zip(self.params, e) if k
            )
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{fmt_rational(mag)}*{mono}"
            else:
                body = fmt_rational(mag)
            if i == 0:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"


def _monomial_gcd(*polys: Poly) -> Exponents:
    exps = [e for p in polys for e in p.terms]
    return tuple(min(col) for col in zip(*exps))


class Scalar:
    """Exact rational function ``num / den`` in the declared parameters.

    Normal form: a constant denominator is folded into the numerator; otherwise
    common monomial factors are cancelled, exact polynomial division is tried
    in both directions, and the denominator is made monic.  Zero is decided by
    the numerator alone.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Number = 0, den: Poly | Number = 1):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if not isinstance(den, Poly):
            den = Poly.const(den)
        num, den = num._aligned(den)
        self.num, self.den = _normalize(num, den)

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "Scalar":
        s = cls.__new__(cls)
        s.num = num
        s.den = den
        return s

    @classmethod
    def const(cls, c: Number) -> "Scalar":
        return cls._raw(Poly.const(c), Poly.const(1))

    @classmethod
    def var(cls, name: str, params: Iterable[str] | None = None) -> "Scalar":
        v = Poly.var(name, params)
        return cls._raw(v, Poly.const(1, v.params))

    @property
    def params(self) -> Tuple[str, ...]:
        return self.num.params

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_poly(self) -> bool:
        return self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num.constant_value() / self.den.constant_value()

    def used_params(self) -> Tuple[str, ...]:
        used = set(self.num.used_params()) | set(self.den.used_params())
        return tuple(p for p in self.params if p in used)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Scalar | Number") -> "Scalar":
        other = as_scalar(other)
        if self.den.is_constant() and other.den.is_constant():
            return _poly_scalar(self.num + other.num)
        return Scalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw(-self.num, self.den)

    def __sub__(self, other: "Scalar | Number") -> "Scalar":
        return self + (-as_scalar(other))

    def __rsub__(self, other: "Scalar | Number") -> "Scalar":
        return as_scalar(other) - self

    def __mul__(self, other: "Scalar | Number") -> "Scalar":
        if isinstance(other, (int, Fraction)):
            return Scalar._raw(self.num.scale(other), self.den)
        other = as_scalar(other)
        if self.den.is_constant() and other.den.is_constant():
            return _poly_scalar(self.num * other.num)
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: "Scalar | Number") -> "Scalar":
        other = as_scalar(other)
        if other.is_zero():
            raise DivisionByZero(f"division of {self} by zero")
        return Scalar(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other: "Scalar | Number") -> "Scalar":
        return as_scalar(other) / self

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return Scalar.const(1) / (self ** (-k))
        return Scalar(self.num ** k, self.den ** k)

    # -- evaluation ---------------------------------------------------------

    def substitute(self, assignment: Mapping[str, Number]) -> "Scalar":
        den = self.den.substitute(assignment)
        if den.is_zero():
            relevant = {k: Fraction(v) for k, v in assignment.items() if k in self.params}
            raise DegenerateSubstitution(relevant)
        return Scalar(self.num.substitute(assignment), den)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if self.den.is_constant():
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        return f"{num}/({self.den})"

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _poly_scalar(num: Poly) -> Scalar:
    # Normalized constant denominators are always 1.
    return Scalar._raw(num, Poly.const(1, num.params))


def _fold(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    num, den = num._aligned(den)
    c = den.constant_value()
    if c != 1:
        num = num.scale(1 / c)
    return num, Poly.const(1, num.params)


def _normalize(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    params = num.params
    if num.is_zero():
        return num, Poly.const(1, params)
    if den.is_constant():
        return _fold(num, den)
    shift = _monomial_gcd(num, den)
    if any(shift):
        num = Poly._raw(params, {tuple(a - b for a, b in zip(e, shift)): c for e, c in num.terms.items()})
        den = Poly._raw(params, {tuple(a - b for a, b in zip(e, shift)): c for e, c in den.terms.items()})
        if den.is_constant():
            return _fold(num, den)
    q = num.exact_div(den)
    if q is not None:
        return q, Poly.const(1, params)
    q = den.exact_div(num)
    if q is not None:
        num, den = Poly.const(1, params), q
        if den.is_constant():
            return _fold(num, den)
    lc = den.leading()[1]
    return num.scale(1 / lc), den.scale(1 / lc)


def as_scalar(x: "Scalar | Poly | Number") -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, Poly):
        return Scalar(x)
    return Scalar.const(x)


ZERO = Scalar.const(0)
ONE = Scalar.const(1)
