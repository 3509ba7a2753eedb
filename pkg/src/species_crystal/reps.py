"""Representations of the preprojective algebra.

Coordinates.  ``V_i`` has dimension ``v_i`` over F_i and is stored in free
coordinates: base index ``k * d_i + s`` is the coefficient of ``z^s e_k``.
The generator of F_i acts as ``G_i = I (x) companion``.  For the arrow
``i -> j`` with bimodule ``M = jM_i`` of base dimension ``m``, the space
``M (x)_{F_i} V_i`` is ``sum_k M (x) e_k`` with base index ``k * m + a``;
the structure map ``X[(i, j)]`` is a base matrix of shape
``(d_j v_j, m v_i)`` which must commute with the F_j actions.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg as la
from .errors import RepresentationError
from .modgraph import ModulatedGraph, greedy_basis, orbit_matrix, unit


class Representation:
    def __init__(self, graph: ModulatedGraph, dims, maps=None):
        self.graph = graph
        self.dims = tuple(int(x) for x in dims)
        if len(self.dims) != graph.n or any(x < 0 for x in self.dims):
            raise RepresentationError("dimension vector does not match the graph")
        F = graph.base
        self.maps = {}
        maps = maps or {}
        for key in maps:
            if key not in graph.bimodules:
                raise RepresentationError(f"no arrow {key} in the graph")
        for (i, j), bm in graph.bimodules.items():
            shape = (self.base_dim(j), bm.dim * self.dims[i])
            X = maps.get((i, j))
            if X is None:
                X = la.zeros(*shape, F)
            elif not isinstance(X, np.ndarray) or X.dtype != object:
                try:
                    X = la.as_matrix(X, F, shape=shape) if len(X) else la.zeros(*shape, F)
                except ValueError as exc:
                    raise RepresentationError(f"map on arrow {(i, j)}: {exc}") from exc
            if X.shape != shape:
                raise RepresentationError(f"map on arrow {(i, j)} has shape {X.shape}, expected {shape}")
            self.maps[(i, j)] = X

    @property
    def F(self):
        return self.graph.base

    def base_dim(self, i: int) -> int:
        return self.dims[i] * self.graph.degree(i)

    @property
    def total_base_dim(self) -> int:
        return sum(self.base_dim(i) for i in range(self.graph.n))

    @property
    def is_zero(self) -> bool:
        return not any(self.dims)

    def gen_action(self, i: int) -> np.ndarray:
        fld = self.graph.fields[i]
        return la.kron_eye(self.dims[i], fld.companion, self.F)

    def __repr__(self):
        return f"Representation({self.graph.name}, dims={self.dims})"

    # -- tilde maps -----------------------------------------------------------

    def _tilde_block(self, i: int, j: int) -> np.ndarray:
        """``jx~_i : V_i -> iM_j (x)_{F_j} V_j``."""
        g = self.graph
        F = self.F
        r = g.canonical(i, j)
        out_bm = g.bimodules[(j, i)]  # iM_j
        in_bm = g.bimodules[(i, j)]   # jM_i
        X = self.maps[(i, j)]
        vi, vj = self.dims[i], self.dims[j]
        total = la.zeros(out_bm.dim * vj, self.base_dim(i), F)
        for vk, vk_dual in r.pairs:
            K = la.kron_eye(vi, in_bm.scalar_column(vk_dual), F)
            Kp = la.kron_eye(vj, out_bm.scalar_column(vk), F)
            total = total + la.chain(Kp, X, K, F=F)
        return total

    @cached_property
    def _tilde(self):
        return {}

    def x_tilde(self, i: int) -> np.ndarray:
        """``x~_i : V_i -> V^i`` (stacked over the neighbours of i in order)."""
        key = ("down", i)
        if key not in self._tilde:
            F = self.F
            blocks = [self._tilde_block(i, j) for j in self.graph.neighbors(i)]
            self._tilde[key] = la.vstack(blocks, self.base_dim(i), F)
        return self._tilde[key]

    def tilde_x(self, i: int) -> np.ndarray:
        """``ix~ : V^i -> V_i``."""
        key = ("up", i)
        if key not in self._tilde:
            F = self.F
            blocks = [self.maps[(j, i)] for j in self.graph.neighbors(i)]
            self._tilde[key] = la.hstack(blocks, self.base_dim(i), F)
        return self._tilde[key]

    def v_upper_dim(self, i: int) -> int:
        """Base dimension of ``V^i``."""
        g = self.graph
        return sum(g.bimodules[(j, i)].dim * self.dims[j] for j in g.neighbors(i))

    def relation_residual(self, i: int) -> np.ndarray:
        return la.matmul(self.tilde_x(i), self.x_tilde(i), self.F)

    @cached_property
    def _ranks(self):
        return {}

    def _rank(self, key, M):
        if key not in self._ranks:
            self._ranks[key] = la.rank(M, self.F)
        return self._ranks[key]

    def phi(self, i: int) -> int:
        """F_i-dimension of ker x~_i (the i-socle)."""
        d = self.graph.degree(i)
        return (self.base_dim(i) - self._rank(("down", i), self.x_tilde(i))) // d

    def phi_star(self, i: int) -> int:
        """F_i-codimension of im ix~ (the i-head)."""
        d = self.graph.degree(i)
        return (self.base_dim(i) - self._rank(("up", i), self.tilde_x(i))) // d

    def phi_vector(self) -> tuple:
        return tuple(self.phi(i) for i in range(self.graph.n))

    def phi_star_vector(self) -> tuple:
        return tuple(self.phi_star(i) for i in range(self.graph.n))

    # -- action of tensors ----------------------------------------------------

    def apply_arrow(self, i: int, j: int, m: np.ndarray, w: np.ndarray) -> np.ndarray:
        """``jx_i(m (x) w)`` for ``m`` in jM_i and ``w`` in V_i (base coordinates)."""
        bm = self.graph.bimodules[(i, j)]
        return self.maps[(i, j)].dot(bm.tensor_vec(m, w))

    def act_flat(self, path, flat: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Action of a base-field tensor on the path (last arrow first) on ``w`` in V_start."""
        g = self.graph
        F = self.F
        arrows = list(zip(path[:-1], path[1:]))
        dims = [g.bimodules[a].dim for a in arrows]
        T = np.array(flat, dtype=object).reshape(list(reversed(dims)))
        return _act(self, arrows, T, w, F)

    # -- validity ---------------------------------------------------------------

    def linearity_failures(self) -> list:
        F = self.F
        bad = []
        for (i, j), bm in self.graph.bimodules.items():
            X = self.maps[(i, j)]
            lhs = la.matmul(X, la.kron_eye(self.dims[i], bm.left, F), F)
            rhs = la.matmul(self.gen_action(j), X, F)
            if not la.is_zero(lhs - rhs):
                bad.append((i, j))
        return bad

    def is_nilpotent(self) -> bool:
        F = self.F
        g = self.graph
        current = {i: la.identity(self.base_dim(i), F) for i in range(g.n)}
        for _ in range(self.total_base_dim + 1):
            if all(U.shape[1] == 0 for U in current.values()):
                return True
            nxt = {}
            for j in range(g.n):
                space = la.EchelonSpace(self.base_dim(j), F)
                for i in g.neighbors(j):
                    bm = g.bimodules[(i, j)]
                    X = self.maps[(i, j)]
                    U = current[i]
                    for a in range(bm.dim):
                        e = unit(bm.dim, a, F)
                        for c in range(U.shape[1]):
                            space.add(X.dot(bm.tensor_vec(e, U[:, c])))
                nxt[j] = space.basis_matrix()
            if sum(U.shape[1] for U in nxt.values()) == sum(U.shape[1] for U in current.values()):
                return False
            current = nxt
        return all(U.shape[1] == 0 for U in current.values())

    def check(self) -> "ValidityReport":
        if "_report" not in self.__dict__:
            self.__dict__["_report"] = self._check()
        return self.__dict__["_report"]

    def _check(self) -> "ValidityReport":
        lin = self.linearity_failures()
        residuals = {}
        if not lin:
            for i in range(self.graph.n):
                R = self.relation_residual(i)
                if not la.is_zero(R):
                    residuals[i] = R
        nil = self.is_nilpotent() if not lin else False
        return ValidityReport(not lin and not residuals and nil, lin, residuals, nil)

    def is_valid(self) -> bool:
        return self.check().valid

    def require_valid(self):
        rep = self.check()
        if not rep.valid:
            raise RepresentationError(f"invalid representation: {rep.summary(self.graph)}")
        return self

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        g = self.graph
        F = self.F
        maps = []
        for (i, j) in sorted(self.maps):
            X = self.maps[(i, j)]
            maps.append({"from": g.names[i], "to": g.names[j],
                         "matrix": [[F.format(x) for x in row] for row in X]})
        return {
            "graph": g.name,
            "params": g.params,
            "dims": {g.names[i]: self.dims[i] for i in range(g.n)},
            "maps": maps,
        }


@dataclass
class ValidityReport:
    valid: bool
    linearity_failures: list
    residuals: dict
    nilpotent: bool

    def summary(self, graph) -> str:
        parts = []
        if self.linearity_failures:
            parts.append("maps not linear over the target field on arrows "
                         + ", ".join(f"({graph.names[i]},{graph.names[j]})" for i, j in self.linearity_failures))
        if self.residuals:
            parts.append("relation fails at vertices " + ", ".join(graph.names[i] for i in sorted(self.residuals)))
        if not self.nilpotent and not self.linearity_failures:
            parts.append("not nilpotent")
        return "; ".join(parts) or "valid"


def _act(rep, arrows, T, w, F):
    """Contract a tensor (axes: last arrow first) against ``w`` arrow by arrow."""
    if not arrows:
        return w
    g = rep.graph
    first = arrows[0]
    bm = g.bimodules[first]
    out = None
    for b in range(bm.dim):
        sub = T[..., b]
        if not any(bool(x) for x in np.asarray(sub).flat):
            continue
        y = rep.apply_arrow(first[0], first[1], unit(bm.dim, b, F), w)
        z = _act(rep, arrows[1:], sub, y, F) if len(arrows) > 1 else sub * y
        out = z if out is None else out + z
    if out is None:
        last = arrows[-1][1]
        out = np.empty(rep.base_dim(last), dtype=object)
        out.fill(F.zero)
    return out


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def zero_module(graph: ModulatedGraph) -> Representation:
    return Representation(graph, [0] * graph.n)


def simple_module(graph: ModulatedGraph, i: int) -> Representation:
    return Representation(graph, [1 if k == i else 0 for k in range(graph.n)])


def direct_sum(*reps: Representation) -> Representation:
    g = reps[0].graph
    F = g.base
    dims = [sum(r.dims[i] for r in reps) for i in range(g.n)]
    maps = {}
    for (i, j), bm in g.bimodules.items():
        maps[(i, j)] = la.block_diag([r.maps[(i, j)] for r in reps], F)
    return Representation(g, dims, maps)


def check_representation(rep: Representation) -> ValidityReport:
    return rep.check()


@dataclass
class TildeData:
    vertex: int
    x_tilde: np.ndarray
    tilde_x: np.ndarray
    upper_base_dim: int


def tilde_maps(rep: Representation, i: int) -> TildeData:
    rep.require_valid()
    return TildeData(i, rep.x_tilde(i), rep.tilde_x(i), rep.v_upper_dim(i))


def phi(rep: Representation, i: int) -> int:
    return rep.require_valid().phi(i)


def phi_star(rep: Representation, i: int) -> int:
    return rep.require_valid().phi_star(i)


# ---------------------------------------------------------------------------
# subrepresentations and quotients
# ---------------------------------------------------------------------------


def free_frame(rep: Representation, i: int, vectors) -> np.ndarray:
    """Columns ``G^s w_t`` for an F_i-basis ``w_t`` of the F_i-span of ``vectors``."""
    F = rep.F
    d = rep.graph.degree(i)
    G = rep.gen_action(i)
    basis = greedy_basis(vectors, G, d, F)
    return orbit_matrix(basis, G, d, F) if basis else la.zeros(rep.base_dim(i), 0, F)


def complement_frame(rep: Representation, i: int, sub_frame: np.ndarray) -> np.ndarray:
    """Free frame of a complement, extending ``sub_frame`` by standard free basis vectors."""
    F = rep.F
    d = rep.graph.degree(i)
    n = rep.base_dim(i)
    G = rep.gen_action(i)
    space = la.EchelonSpace(n, F)
    for c in range(sub_frame.shape[1]):
        space.add(sub_frame[:, c])
    chosen = []
    for k in range(rep.dims[i]):
        v = unit(n, k * d, F)
        if space.contains(v):
            continue
        chosen.append(v)
        w = v
        for _ in range(d):
            space.add(w)
            w = G.dot(w)
    return orbit_matrix(chosen, G, d, F) if chosen else la.zeros(n, 0, F)


def _induced(rep: Representation, frames_in: dict, maps_out: dict, dims: list) -> Representation:
    g = rep.graph
    F = rep.F
    maps = {}
    for (i, j), bm in g.bimodules.items():
        maps[(i, j)] = la.chain(maps_out[j], rep.maps[(i, j)], bm.tensor_map(frames_in[i]), F=F)
    return Representation(g, dims, maps)


def subrepresentation(rep: Representation, frames: dict) -> Representation:
    """Restriction to the F_i-subspaces spanned by ``frames[i]`` (free frames); closure is checked."""
    F = rep.F
    g = rep.graph
    dims = [frames[i].shape[1] // g.degree(i) for i in range(g.n)]
    lefts = {i: la.left_inverse(frames[i], F) for i in range(g.n)}
    for (i, j), bm in g.bimodules.items():
        img = la.matmul(rep.maps[(i, j)], bm.tensor_map(frames[i]), F)
        back = la.matmul(frames[j], la.matmul(lefts[j], img, F), F)
        if not la.is_zero(back - img):
            raise RepresentationError("subspaces are not closed under the structure maps")
    return _induced(rep, frames, lefts, dims)


def quotient(rep: Representation, frames: dict) -> Representation:
    """Quotient by the subrepresentation spanned by ``frames[i]``."""
    F = rep.F
    g = rep.graph
    comps = {}
    projs = {}
    for i in range(g.n):
        C = complement_frame(rep, i, frames[i])
        T = np.concatenate([frames[i], C], axis=1)
        Tinv = la.inverse(T, F) if T.shape[0] else la.zeros(0, 0, F)
        comps[i] = C
        projs[i] = Tinv[frames[i].shape[1]:, :]
    for (i, j), bm in g.bimodules.items():
        img = la.matmul(rep.maps[(i, j)], bm.tensor_map(frames[i]), F)
        if not la.is_zero(la.matmul(projs[j], img, F)):
            raise RepresentationError("subspaces are not closed under the structure maps")
    dims = [comps[i].shape[1] // g.degree(i) for i in range(g.n)]
    return _induced(rep, comps, projs, dims)


def socle_space(rep: Representation, i: int) -> np.ndarray:
    return la.nullspace(rep.x_tilde(i), rep.F)


def head_image(rep: Representation, i: int) -> np.ndarray:
    """Free frame of ``im ix~`` inside V_i."""
    M = rep.tilde_x(i)
    cols = [M[:, c] for c in range(M.shape[1])]
    return free_frame(rep, i, cols)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def from_json(graph: ModulatedGraph, data: dict, check: bool = True) -> Representation:
    F = graph.base
    try:
        dims = [int(data["dims"][nm]) for nm in graph.names]
    except KeyError as exc:
        raise RepresentationError(f"module file is missing the dimension of vertex {exc}") from exc
    maps = {}
    for entry in data.get("maps", []):
        i, j = graph.index(entry["from"]), graph.index(entry["to"])
        if (i, j) not in graph.bimodules:
            raise RepresentationError(f"no arrow ({entry['from']},{entry['to']})")
        bm = graph.bimodules[(i, j)]
        shape = (dims[j] * graph.degree(j), bm.dim * dims[i])
        rows = entry["matrix"]
        if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            raise RepresentationError(f"map on ({entry['from']},{entry['to']}) should be {shape[0]}x{shape[1]}")
        maps[(i, j)] = la.as_matrix(rows, F, shape=shape) if shape[0] and shape[1] else la.zeros(*shape, F)
    rep = Representation(graph, dims, maps)
    if check:
        rep.require_valid()
    return rep


def load_module(graph: ModulatedGraph, path) -> Representation:
    with open(path) as fh:
        return from_json(graph, json.load(fh))


# ---------------------------------------------------------------------------
# random modules (for property tests)
# ---------------------------------------------------------------------------


def random_module(graph: ModulatedGraph, rng: random.Random, max_dim: int = 3, steps: int = 4,
                  bound: int = 5) -> Representation:
    """A random valid nilpotent module built by iterated random extensions of simples."""
    from .homology import ext1_space, assemble_extension

    rep = zero_module(graph)
    for _ in range(steps):
        choices = [i for i in range(graph.n) if rep.dims[i] < max_dim]
        if not choices:
            break
        i = rng.choice(choices)
        S = simple_module(graph, i)
        if rng.random() < 0.5:
            ext = ext1_space(rep, S)  # 0 -> S -> E -> rep -> 0
            c = ext.random_class(rng, bound)
            rep = assemble_extension(ext, c)
        else:
            ext = ext1_space(S, rep)  # 0 -> rep -> E -> S -> 0
            c = ext.random_class(rng, bound)
            rep = assemble_extension(ext, c)
    return rep
