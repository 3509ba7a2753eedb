"""Finite-type classification, positive roots and Kostant partition counts from a Cartan matrix.

This module only looks at the integer Cartan matrix, so it serves as an
oracle that is independent of the module-theoretic crystal construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import SpeciesError, ValidationError

MAX_ROOTS = 500


def _as_matrix(C):
    if hasattr(C, "C"):
        C = C.C
    C = [list(map(int, row)) for row in C]
    n = len(C)
    if any(len(row) != n for row in C):
        raise ValidationError("Cartan matrix must be square")
    for i in range(n):
        if C[i][i] != 2:
            raise ValidationError("Cartan matrix must have 2 on the diagonal")
        for j in range(n):
            if i != j and (C[i][j] > 0 or (C[i][j] == 0) != (C[j][i] == 0)):
                raise ValidationError("not a generalized Cartan matrix")
    return C


def symmetrizer(C) -> list:
    """Positive rationals d with d_i c_ij = d_j c_ji, normalized to coprime integers per component."""
    C = _as_matrix(C)
    n = len(C)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        comp = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and C[i][j] != 0:
                    val = d[i] * C[i][j] / C[j][i]
                    if d[j] is None:
                        d[j] = val
                        stack.append(j)
                        comp.append(j)
                    elif d[j] != val:
                        raise ValidationError("Cartan matrix is not symmetrizable")
        from math import gcd, lcm

        den = lcm(*[d[k].denominator for k in comp])
        ints = [int(d[k] * den) for k in comp]
        g = gcd(*ints)
        for k, v in zip(comp, ints):
            d[k] = Fraction(v // g)
    return [int(x) for x in d]


def _leading_minors_positive(S) -> bool:
    n = len(S)
    A = [[Fraction(x) for x in row] for row in S]
    # Gaussian elimination without pivoting: all pivots positive iff all leading minors positive
    for k in range(n):
        if A[k][k] <= 0:
            return False
        for r in range(k + 1, n):
            f = A[r][k] / A[k][k]
            for c in range(k, n):
                A[r][c] -= f * A[k][c]
    return True


def components(C) -> list:
    C = _as_matrix(C)
    n = len(C)
    seen = set()
    out = []
    for s in range(n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and C[i][j] != 0:
                    seen.add(j)
                    stack.append(j)
        out.append(sorted(comp))
    return out


def _component_label(C, comp, nroots) -> str:
    r = len(comp)
    simply_laced = all(C[i][j] * C[j][i] in (0, 1) for i in comp for j in comp if i != j)
    if r == 1:
        return "A1"
    if r == 2:
        prod = C[comp[0]][comp[1]] * C[comp[1]][comp[0]]
        return {1: "A2", 2: "B2/C2", 3: "G2"}.get(prod, "?")
    if simply_laced:
        if nroots == r * (r + 1) // 2:
            return f"A{r}"
        if nroots == r * (r - 1):
            return f"D{r}"
        return {36: "E6", 63: "E7", 120: "E8"}.get(nroots, "?")
    if nroots == 48 and r == 4:
        return "F4"
    return f"B{r}/C{r}"


@dataclass(frozen=True)
class FiniteTypeVerdict:
    finite: bool
    label: str | None

    def __bool__(self):
        return self.finite


def is_finite_type(C) -> FiniteTypeVerdict:
    Cm = _as_matrix(C)
    d = list(C.d) if hasattr(C, "d") else symmetrizer(Cm)
    n = len(Cm)
    S = [[d[i] * Cm[i][j] for j in range(n)] for i in range(n)]
    if not _leading_minors_positive(S):
        return FiniteTypeVerdict(False, None)
    labels = []
    roots = positive_roots(Cm).roots
    for comp in components(Cm):
        nroots = sum(1 for b in roots if all(b[k] == 0 for k in range(n) if k not in comp))
        labels.append(_component_label(Cm, comp, nroots))
    return FiniteTypeVerdict(True, "x".join(labels))


@dataclass(frozen=True)
class RootSystemData:
    cartan: tuple
    roots: tuple  # ordered by height, then lexicographically

    def to_json(self) -> dict:
        return {"C": [list(r) for r in self.cartan], "positive_roots": [list(b) for b in self.roots]}


def pairing(C, beta, i) -> int:
    """<beta, alpha_i^vee> = sum_j beta_j c_ij."""
    return sum(beta[j] * C[i][j] for j in range(len(beta)))


def positive_roots(C) -> RootSystemData:
    Cm = _as_matrix(C)
    n = len(Cm)
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                p = pairing(Cm, beta, i)
                gamma = tuple(beta[k] - (p if k == i else 0) for k in range(n))
                if gamma != beta and all(x >= 0 for x in gamma) and any(gamma) and gamma not in found:
                    found.add(gamma)
                    nxt.append(gamma)
                    if len(found) > MAX_ROOTS:
                        raise SpeciesError("root system is not of finite type")
        frontier = nxt
    roots = tuple(sorted(found, key=lambda b: (sum(b), b)))
    return RootSystemData(tuple(tuple(r) for r in Cm), roots)


def kostant_count(C, v, order=None) -> int:
    """Number of multisets of positive roots summing to ``v``."""
    Cm = _as_matrix(C)
    if not is_finite_type(C if hasattr(C, "d") else Cm):
        raise SpeciesError("Kostant partitions are only counted in finite type")
    roots = list(positive_roots(Cm).roots)
    if order is not None:
        roots = [roots[k] for k in order]
    v = tuple(int(x) for x in v)
    if len(v) != len(Cm) or any(x < 0 for x in v):
        raise ValidationError("weight must be a nonnegative vector of the right length")
    n = len(v)

    @lru_cache(maxsize=None)
    def count(idx, rest):
        if not any(rest):
            return 1
        if idx == len(roots):
            return 0
        beta = roots[idx]
        total = 0
        cur = rest
        while all(x >= 0 for x in cur):
            total += count(idx + 1, cur)
            cur = tuple(cur[k] - beta[k] for k in range(n))
        return total

    return count(0, v)
