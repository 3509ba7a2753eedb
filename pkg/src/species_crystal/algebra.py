"""Graded pieces of the tensor algebra of a modulated graph and of its preprojective quotient.

A path ``(i0, i1, ..., in)`` follows the arrows ``i0 -> i1 -> ... -> in``.
Its tensor space is ``M(in <- i(n-1)) (x) ... (x) M(i1 <- i0)`` with tensor
products over the interior vertex fields; the factor for the last arrow
comes first, matching composition of maps.  Each space is realized as an
explicit quotient of the base-field tensor product ("flat" coordinates).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from . import linalg as la
from .modgraph import ModulatedGraph, tensor_quotient, unit


@dataclass(eq=False)
class PathSpace:
    """One path's tensor space.  Flat coordinates are projected one factor at a time."""

    path: tuple
    dim: int
    flat_dim: int
    left: np.ndarray  # generator of F_end, in quotient coordinates
    right: np.ndarray  # generator of F_start
    P: np.ndarray | None = None  # (last factor (x) prev quotient) -> quotient; None means identity
    S: np.ndarray | None = None  # section of P
    prev: "PathSpace | None" = None

    @property
    def degree(self) -> int:
        return len(self.path) - 1

    @property
    def start(self) -> int:
        return self.path[0]

    @property
    def end(self) -> int:
        return self.path[-1]

    def project(self, flat: np.ndarray) -> np.ndarray:
        if self.prev is None:
            return flat
        m = flat.shape[0] // self.prev.flat_dim
        rows = flat.reshape(m, self.prev.flat_dim)
        inner = np.concatenate([self.prev.project(rows[a]) for a in range(m)])
        return inner if self.P is None else self.P.dot(inner)

    def lift(self, x: np.ndarray) -> np.ndarray:
        if self.prev is None:
            return x
        inner = x if self.S is None else self.S.dot(x)
        m = inner.shape[0] // self.prev.dim
        rows = inner.reshape(m, self.prev.dim)
        return np.concatenate([self.prev.lift(rows[a]) for a in range(m)])


@dataclass
class GradedAlgebra:
    graph_name: str
    dims: list                     # quotient dimensions by degree
    tensor_dims: list              # dimensions of the tensor algebra by degree
    ideal_dims: list
    path_ideal_dims: list = field(default_factory=list)  # per degree: {path: dim of ideal ∩ path space}, on request
    finite: bool | None = None
    max_degree: int = 0

    @property
    def total(self) -> int:
        return sum(self.dims)

    def verdict(self) -> str:
        if self.finite:
            return f"finite-dimensional, total = {self.total}"
        return f"not finite by degree {self.max_degree}"

    def to_json(self) -> dict:
        return {
            "graph": self.graph_name,
            "dims": self.dims,
            "finite": bool(self.finite),
            "total": self.total if self.finite else None,
            "verdict": self.verdict(),
        }


class PathAlgebra:
    """Caches path spaces and ideal components for one graph."""

    def __init__(self, graph: ModulatedGraph):
        self.graph = graph
        self.F = graph.base
        self._spaces: dict = {}
        self._ideal: dict = {}

    def paths(self, n: int) -> list:
        g = self.graph
        out = [(i,) for i in range(g.n)]
        for _ in range(n):
            out = [p + (j,) for p in out for j in g.neighbors(p[-1])]
        return sorted(out)

    def space(self, path: tuple) -> PathSpace:
        path = tuple(path)
        if path in self._spaces:
            return self._spaces[path]
        F = self.F
        g = self.graph
        if len(path) == 1:
            fld = g.fields[path[0]]
            d = fld.degree
            C = fld.companion
            sp = PathSpace(path, d, d, C, C)
        elif len(path) == 2:
            bm = g.bimodules[(path[0], path[1])]
            m = bm.dim
            sp = PathSpace(path, m, m, bm.left, bm.right)
        else:
            prev = self.space(path[:-1])
            bm = g.bimodules[(path[-2], path[-1])]
            m = bm.dim
            left = la.kron(bm.left, la.identity(prev.dim, F), F)
            right = la.kron(la.identity(m, F), prev.right, F)
            if g.fields[path[-2]].degree == 1:  # tensor over the base field: nothing to divide out
                sp = PathSpace(path, m * prev.dim, m * prev.flat_dim, left, right, None, None, prev)
            else:
                P, S = tensor_quotient(bm.right, prev.left, F)
                left, right = la.chain(P, left, S, F=F), la.chain(P, right, S, F=F)
                sp = PathSpace(path, P.shape[0], m * prev.flat_dim, left, right, P, S, prev)
        self._spaces[path] = sp
        return sp

    def degree_spaces(self, n: int) -> list:
        if n == 0:
            return [self.space(p) for p in self.paths(0)]
        return [self.space(p) for p in self.paths(n)]

    def offsets(self, n: int) -> dict:
        out = {}
        k = 0
        for p in self.paths(n):
            out[p] = k
            k += self.space(p).dim
        return out

    def degree_dim(self, n: int) -> int:
        return sum(sp.dim for sp in self.degree_spaces(n))

    # -- multiplication ---------------------------------------------------

    def multiply(self, a_path, a: np.ndarray, b_path, b: np.ndarray) -> np.ndarray:
        """Product ``a * b`` of quotient-coordinate elements; ``b`` runs first (b ends where a starts)."""
        F = self.F
        if a_path[0] != b_path[-1]:
            raise ValueError("paths do not compose")
        A = self.space(a_path)
        B = self.space(b_path)
        if A.degree == 0:
            return _field_act(B.left, a, F).dot(b)
        if B.degree == 0:
            return _field_act(A.right, b, F).dot(a)
        joined = tuple(b_path) + tuple(a_path[1:])
        flat = np.outer(A.lift(a), B.lift(b)).reshape(-1)
        return self.space(joined).project(flat)

    def relation(self, i: int) -> dict:
        """``r_i`` as quotient coordinates in each path ``i -> j -> i``."""
        g = self.graph
        out = {}
        for j in g.neighbors(i):
            r = g.canonical(i, j)
            path = (i, j, i)
            out[path] = self.space(path).project(r.tensor(self.F))
        return out

    # -- ideal --------------------------------------------------------------

    def ideal_generators(self, n: int) -> list:
        """Vectors in degree-n coordinates spanning the degree-n part of the ideal.

        Uses ``I_n = T_1 I_(n-1) + r T_(n-2)``: every product ``a r b`` with ``a``
        of positive degree already lies in an arrow times ``I_(n-1)``.
        """
        F = self.F
        if n < 2:
            return []
        offs = self.offsets(n)
        total = self.degree_dim(n)

        def blank():
            v = np.empty(total, dtype=object)
            v.fill(F.zero)
            return v

        gens = []
        for b_path in self.paths(n - 2):
            Bsp = self.space(b_path)
            rel = self.relation(b_path[-1])
            if not rel:
                continue
            for bi in range(Bsp.dim):
                b = unit(Bsp.dim, bi, F)
                v = blank()
                for rpath, r in rel.items():
                    rb = self.multiply(rpath, r, b_path, b)
                    o = offs[tuple(b_path) + tuple(rpath[1:])]
                    v[o:o + len(rb)] = v[o:o + len(rb)] + rb
                gens.append(v)
        if n > 2:
            prev = self.ideal_basis(n - 1)
            prev_offs = self.offsets(n - 1)
            for c in range(prev.shape[1]):
                col = prev[:, c]
                for arrow in self.paths(1):
                    Asp = self.space(arrow)
                    for ai in range(Asp.dim):
                        a = unit(Asp.dim, ai, F)
                        v = blank()
                        hit = False
                        for p, o in prev_offs.items():
                            if p[-1] != arrow[0]:
                                continue
                            x = col[o:o + self.space(p).dim]
                            if not any(bool(t) for t in x):
                                continue
                            ax = self.multiply(arrow, a, p, x)
                            q = offs[tuple(p) + (arrow[1],)]
                            v[q:q + len(ax)] = v[q:q + len(ax)] + ax
                            hit = True
                        if hit:
                            gens.append(v)
        return gens

    def ideal_basis(self, n: int) -> np.ndarray:
        """Basis (columns) of the degree-n ideal component in degree-n coordinates."""
        if n in self._ideal:
            return self._ideal[n]
        F = self.F
        total = self.degree_dim(n)
        space = la.EchelonSpace(total, F)
        for v in self.ideal_generators(n):
            space.add(v)
        basis = space.basis_matrix()
        self._ideal[n] = basis
        return basis

    def contains(self, n: int, v: np.ndarray) -> bool:
        B = self.ideal_basis(n)
        if B.shape[1] == 0:
            return not any(bool(x) for x in v)
        return la.rank(np.concatenate([B, v.reshape(-1, 1)], axis=1), self.F) == B.shape[1]


def _field_act(action: np.ndarray, coords, F) -> np.ndarray:
    out = la.zeros(*action.shape, F)
    P = la.identity(action.shape[0], F)
    for c in coords:
        if c:
            out = out + c * P
        P = la.matmul(P, action, F)
    return out


def tensor_degree(graph: ModulatedGraph, n: int, algebra: PathAlgebra | None = None) -> list:
    alg = algebra or PathAlgebra(graph)
    if n == 0:
        return alg.degree_spaces(0)
    return alg.degree_spaces(n)


def ideal_component(graph: ModulatedGraph, n: int, algebra: PathAlgebra | None = None,
                    per_path: bool = True) -> dict:
    """Dimension of the ideal inside each path space of degree n, plus the whole-degree dimension.

    The relation ``r_i`` sums over the neighbours of ``i``, so a generator can
    have components in several path spaces; the per-path numbers are the
    dimensions of the intersections with each path space.
    """
    alg = algebra or PathAlgebra(graph)
    F = graph.base
    basis = alg.ideal_basis(n) if n >= 2 else la.zeros(alg.degree_dim(n), 0, F)
    paths = {}
    if per_path:
        total = alg.degree_dim(n)
        for p, o in alg.offsets(n).items():
            d = alg.space(p).dim
            if basis.shape[1] == 0:
                paths[p] = 0
                continue
            # dim(I ∩ W) = dim I - rank of I on the coordinates outside W
            mask = [k for k in range(total) if not (o <= k < o + d)]
            paths[p] = basis.shape[1] - (la.rank(basis[mask, :], F) if mask else 0)
    return {"dim": basis.shape[1], "paths": paths, "basis": basis}


def graded_dimensions(graph: ModulatedGraph, max_degree: int = 8, per_path: bool = False) -> GradedAlgebra:
    alg = PathAlgebra(graph)
    dims, tdims, idims, pdims = [], [], [], []
    finite = False
    for n in range(max_degree + 1):
        t = alg.degree_dim(n)
        comp = ideal_component(graph, n, alg, per_path)
        dims.append(t - comp["dim"])
        tdims.append(t)
        idims.append(comp["dim"])
        pdims.append(comp["paths"])
        if dims[-1] == 0:
            finite = True
            break
    return GradedAlgebra(graph.name, dims, tdims, idims, pdims, finite, max_degree)
