"""Exact arithmetic for the base field and its finite simple extensions.

The base field is either the rationals (backed by ``gmpy2.mpq``) or a prime
field.  An extension is ``base[x]/(minpoly)``; its elements are coordinate
vectors in the power basis ``1, z, ..., z^(d-1)`` of the generator ``z``.
The base field itself is a degree-1 handle whose generator is ``1``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
from gmpy2 import mpq

from . import linalg as la
from .errors import FieldError

MAX_EXTENSION_DEGREE = 4


# ---------------------------------------------------------------------------
# base fields
# ---------------------------------------------------------------------------


class Rationals:
    name = "rationals"
    characteristic = 0
    zero = mpq(0)
    one = mpq(1)

    def coerce(self, x):
        if isinstance(x, str):
            return mpq(x.strip())
        if isinstance(x, Fraction):
            return mpq(x.numerator, x.denominator)
        if isinstance(x, float):
            raise FieldError("floating point values are not exact scalars")
        return mpq(x)

    def random(self, rng: random.Random, bound: int = 1000):
        return mpq(rng.randint(-bound, bound))

    def to_json(self):
        return {"type": "rationals"}

    def format(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("rationals")

    def __repr__(self):
        return "QQ"


RATIONALS = Rationals()


class ModP:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _val(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise FieldError("mixing different prime fields")
            return other.v
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._val(other)
        return NotImplemented if o is NotImplemented else ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._val(other)
        return NotImplemented if o is NotImplemented else ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._val(other)
        return NotImplemented if o is NotImplemented else ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._val(other)
        return NotImplemented if o is NotImplemented else ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.v, self.p)

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return ModP(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._val(other)
        if o is NotImplemented:
            return NotImplemented
        return self * ModP(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._val(other)
        if o is NotImplemented:
            return NotImplemented
        return ModP(o, self.p) * self.inverse()

    def __eq__(self, other):
        o = self._val(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.p}"

    def __str__(self):
        return str(self.v)


class PrimeField:
    characteristic: int

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise FieldError(f"{p} is not prime")
        self.characteristic = p
        self.zero = ModP(0, p)
        self.one = ModP(1, p)

    @property
    def name(self):
        return f"GF({self.characteristic})"

    def coerce(self, x):
        if isinstance(x, ModP):
            return x
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            return ModP(x.numerator, self.characteristic) / x.denominator
        return ModP(int(x), self.characteristic)

    def random(self, rng: random.Random, bound: int = 1000):
        return ModP(rng.randrange(self.characteristic), self.characteristic)

    def to_json(self):
        return {"type": {"prime": self.characteristic}}

    def format(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("prime", self.characteristic))

    def __repr__(self):
        return self.name


def base_field_from_json(desc) -> Rationals | PrimeField:
    kind = desc.get("type") if isinstance(desc, dict) else desc
    if kind == "rationals":
        return RATIONALS
    if isinstance(kind, dict) and "prime" in kind:
        return PrimeField(int(kind["prime"]))
    raise FieldError(f"unknown base field descriptor {desc!r}")


# ---------------------------------------------------------------------------
# polynomial helpers (coefficient lists, constant term first)
# ---------------------------------------------------------------------------


def _trim(coeffs):
    c = list(coeffs)
    while c and not c[-1]:
        c.pop()
    return c


def _is_irreducible(base, coeffs) -> bool:
    import sympy

    x = sympy.Symbol("x")
    if base.characteristic == 0:
        terms = [sympy.Rational(int(c.numerator), int(c.denominator)) for c in coeffs]
        poly = sympy.Poly(list(reversed(terms)), x, domain="QQ")
    else:
        terms = [int(c.v) for c in coeffs]
        poly = sympy.Poly(list(reversed(terms)), x, modulus=base.characteristic)
    return bool(poly.is_irreducible)


# ---------------------------------------------------------------------------
# field handles and elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldHandle:
    """A field in the tower: the base itself (``minpoly is None``) or base[x]/(minpoly)."""

    base: Rationals | PrimeField
    minpoly: tuple | None = None

    @property
    def degree(self) -> int:
        return 1 if self.minpoly is None else len(self.minpoly) - 1

    @cached_property
    def companion(self) -> np.ndarray:
        """Matrix of multiplication by the generator on the power basis."""
        F = self.base
        if self.minpoly is None:
            return la.identity(1, F)
        d = self.degree
        C = la.zeros(d, d, F)
        for s in range(d - 1):
            C[s + 1, s] = F.one
        for s in range(d):
            C[s, d - 1] = -self.minpoly[s]
        return C

    @cached_property
    def companion_powers(self) -> tuple:
        F = self.base
        out = [la.identity(self.degree, F)]
        for _ in range(1, self.degree):
            out.append(la.matmul(out[-1], self.companion, F))
        return tuple(out)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (self.base.zero,) * self.degree)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, (self.base.one,) + (self.base.zero,) * (self.degree - 1))

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return FieldElement(self, (self.companion[0, 0],))
        return FieldElement(self, tuple(self.base.one if s == 1 else self.base.zero for s in range(self.degree)))

    def element(self, coords) -> "FieldElement":
        c = [self.base.coerce(x) for x in coords]
        if len(c) > self.degree:
            raise FieldError("coordinate vector longer than the field degree")
        c += [self.base.zero] * (self.degree - len(c))
        return FieldElement(self, tuple(c))

    def coerce(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.handle != self:
                raise FieldError("element belongs to a different field")
            return x
        if isinstance(x, (list, tuple)):
            return self.element(x)
        return self.element([x])

    def mult_matrix(self, coords) -> np.ndarray:
        """Base-field matrix of multiplication by sum_s coords[s] z^s."""
        F = self.base
        d = self.degree
        out = la.zeros(d, d, F)
        for c, P in zip(coords, self.companion_powers):
            if c:
                out = out + c * P
        return out

    def random_element(self, rng: random.Random, bound: int = 1000) -> "FieldElement":
        return FieldElement(self, tuple(self.base.random(rng, bound) for _ in range(self.degree)))

    def __repr__(self):
        if self.minpoly is None:
            return f"FieldHandle({self.base!r})"
        return f"FieldHandle({self.base!r}[x]/{[str(c) for c in self.minpoly]})"


def base_handle(base) -> FieldHandle:
    return FieldHandle(base, None)


def make_extension(base, minpoly) -> FieldHandle:
    """Return the handle of base[x]/(minpoly); minpoly is constant-term first."""
    coeffs = [base.coerce(c) for c in minpoly]
    coeffs = _trim(coeffs)
    if len(coeffs) < 2:
        raise FieldError("minimal polynomial must have degree at least 1")
    if coeffs[-1] != base.one:
        raise FieldError("minimal polynomial must be monic")
    degree = len(coeffs) - 1
    if degree > MAX_EXTENSION_DEGREE:
        raise FieldError(f"extension degree {degree} exceeds the supported bound {MAX_EXTENSION_DEGREE}")
    if degree > 1 and not _is_irreducible(base, coeffs):
        raise FieldError("not a field: minimal polynomial is reducible")
    return FieldHandle(base, tuple(coeffs))


class FieldElement:
    __slots__ = ("handle", "coords")

    def __init__(self, handle: FieldHandle, coords: tuple):
        self.handle = handle
        self.coords = coords

    def _other(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.handle != self.handle:
                raise FieldError("arithmetic between different fields")
            return other
        return self.handle.element([other])

    def __add__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        o = self._other(other)
        return FieldElement(self.handle, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.handle, tuple(-a for a in self.coords))

    def __sub__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        o = self._other(other)
        h = self.handle
        if h.degree == 1:
            return FieldElement(h, (self.coords[0] * o.coords[0],))
        d = h.degree
        prod = [h.base.zero] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    prod[i + j] = prod[i + j] + a * b
        mp = h.minpoly
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                prod[k] = h.base.zero
                for s in range(d):
                    prod[k - d + s] = prod[k - d + s] - c * mp[s]
        return FieldElement(h, tuple(prod[:d]))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("division by zero in a field extension")
        h = self.handle
        F = h.base
        rhs = la.column([F.one] + [F.zero] * (h.degree - 1), F)
        sol = la.solve(h.mult_matrix(self.coords), rhs, F)
        return FieldElement(h, tuple(sol[0][:, 0]))

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __bool__(self):
        return any(bool(c) for c in self.coords)

    def __eq__(self, other):
        if isinstance(other, FieldElement) and other.handle != self.handle:
            return False
        try:
            o = self._other(other)
        except (FieldError, TypeError, ValueError):
            return NotImplemented
        return all(a == b for a, b in zip(self.coords, o.coords))

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"FieldElement({[str(c) for c in self.coords]})"


# ---------------------------------------------------------------------------
# matrices over a handle
# ---------------------------------------------------------------------------


@dataclass
class Matrix:
    handle: FieldHandle
    entries: np.ndarray = field(repr=False)

    @classmethod
    def from_rows(cls, handle: FieldHandle, rows, cols: int | None = None) -> "Matrix":
        rows = list(rows)
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        return cls(handle, la.as_matrix(rows, handle, shape=(len(rows), ncols)))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def rank(self) -> int:
        return la.rank(self.entries, self.handle)

    def kernel(self) -> list[list]:
        K = la.nullspace(self.entries, self.handle)
        return [list(K[:, t]) for t in range(K.shape[1])]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if other.handle != self.handle:
            raise FieldError("matrix handle mismatch")
        return Matrix(self.handle, la.matmul(self.entries, other.entries, self.handle))

    def __getitem__(self, idx):
        return self.entries[idx]


@dataclass
class LinearSolution:
    consistent: bool
    particular: list | None = None
    kernel: list = field(default_factory=list)


def solve_linear(A: Matrix, b: Matrix) -> LinearSolution:
    if A.handle != b.handle:
        raise FieldError("solve_linear: handle mismatch between A and b")
    if b.rows != A.rows or b.cols != 1:
        raise ValueError("solve_linear: b must be a column with as many rows as A")
    h = A.handle
    out = la.solve(A.entries, b.entries, h)
    if out is None:
        return LinearSolution(False)
    x, K = out
    return LinearSolution(True, list(x[:, 0]), [list(K[:, t]) for t in range(K.shape[1])])


def restrict_scalars(handle: FieldHandle, n: int):
    """Base dimension of F_i^n together with the action matrix of the generator."""
    return n * handle.degree, la.kron_eye(n, handle.companion, handle.base)
