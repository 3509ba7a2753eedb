"""Hom and Ext^1 between representations, isomorphism testing, Krull-Schmidt splitting."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .errors import RepresentationError, SpeciesError
from .reps import Representation, free_frame, subrepresentation


def _same_graph(A: Representation, B: Representation):
    if A.graph is not B.graph:
        raise RepresentationError("representations live on different graphs")


def _block_unit(d, C_powers, rows_blocks, cols_blocks, l, k, s, F):
    out = la.zeros(d * rows_blocks, d * cols_blocks, F)
    out[l * d:(l + 1) * d, k * d:(k + 1) * d] = C_powers[s]
    return out


# ---------------------------------------------------------------------------
# Hom
# ---------------------------------------------------------------------------


@dataclass
class HomSpace:
    source: Representation
    target: Representation
    layout: list           # (vertex, l, k, s) per unknown
    basis: np.ndarray      # unknowns x dim

    @property
    def dim(self) -> int:
        """Dimension over the base field."""
        return self.basis.shape[1]

    def element(self, coords) -> dict:
        """Per-vertex matrices of the homomorphism with the given unknown vector."""
        A, B = self.source, self.target
        g = A.graph
        F = A.F
        out = {i: la.zeros(B.base_dim(i), A.base_dim(i), F) for i in range(g.n)}
        for c, (i, l, k, s) in zip(coords, self.layout):
            if c:
                d = g.degree(i)
                out[i][l * d:(l + 1) * d, k * d:(k + 1) * d] += c * g.fields[i].companion_powers[s]
        return out

    def basis_maps(self) -> list:
        return [self.element(self.basis[:, t]) for t in range(self.dim)]

    def random_element(self, rng: random.Random, bound: int = 1000) -> dict:
        F = self.source.F
        coeffs = [F.random(rng, bound) for _ in range(self.dim)]
        vec = self.basis.dot(np.array(coeffs, dtype=object)) if self.dim else np.zeros(0, dtype=object)
        return self.element(vec)


def _hom_layout(A, B):
    g = A.graph
    layout = []
    for i in range(g.n):
        for l in range(B.dims[i]):
            for k in range(A.dims[i]):
                for s in range(g.degree(i)):
                    layout.append((i, l, k, s))
    return layout


def hom_equations(A: Representation, B: Representation, layout=None):
    """Matrix of ``Phi -> (Phi_j X^A_ji - X^B_ji (id (x) Phi_i))`` over all arrows."""
    g = A.graph
    F = A.F
    layout = layout if layout is not None else _hom_layout(A, B)
    arrows = sorted(g.bimodules)
    row_off = {}
    rows = 0
    for (i, j) in arrows:
        row_off[(i, j)] = rows
        rows += B.base_dim(j) * g.bimodules[(i, j)].dim * A.dims[i]
    Mat = la.zeros(rows, len(layout), F)
    for col, (v, l, k, s) in enumerate(layout):
        dv = g.degree(v)
        Cs = g.fields[v].companion_powers[s]
        for (i, j) in arrows:
            bm = g.bimodules[(i, j)]
            m = bm.dim
            nr, nc = B.base_dim(j), m * A.dims[i]
            if nr == 0 or nc == 0:
                continue
            block = None
            if j == v:
                XA = A.maps[(i, j)]
                block = la.zeros(nr, nc, F)
                block[l * dv:(l + 1) * dv, :] = la.matmul(Cs, XA[k * dv:(k + 1) * dv, :], F)
            if i == v:
                XB = B.maps[(i, j)]
                part = la.zeros(nr, nc, F)
                part[:, k * m:(k + 1) * m] = la.matmul(XB[:, l * m:(l + 1) * m], bm.right_powers[s], F)
                block = -part if block is None else block - part
            if block is not None:
                o = row_off[(i, j)]
                Mat[o:o + nr * nc, col] = block.reshape(-1)
    return Mat


def hom_space(A: Representation, B: Representation) -> HomSpace:
    _same_graph(A, B)
    layout = _hom_layout(A, B)
    if not layout:
        return HomSpace(A, B, layout, la.zeros(0, 0, A.F))
    E = hom_equations(A, B, layout)
    K = la.nullspace(E, A.F) if E.shape[0] else la.identity(len(layout), A.F)
    return HomSpace(A, B, layout, K)


def hom_dim_over(A: Representation, B: Representation, i: int) -> int:
    """Dimension of Hom(A, B) over F_i (meaningful when one side is S_i)."""
    return hom_space(A, B).dim // A.graph.degree(i)


# ---------------------------------------------------------------------------
# Ext^1
# ---------------------------------------------------------------------------


@dataclass
class ExtSpace:
    """Extensions ``0 -> sub -> E -> quotient -> 0`` in the block form ``[[X^sub, Z], [0, X^quot]]``."""

    quotient: Representation
    sub: Representation
    layout: list              # (arrow, l, q, s) per parameter
    cocycles: np.ndarray      # parameters x dim Z
    coboundaries: np.ndarray  # parameters x (#coboundary generators)
    classes: np.ndarray       # parameters x dim Ext (complement of coboundaries in cocycles)
    coboundary_kernel_dim: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        """Dimension over the base field."""
        return self.classes.shape[1]

    def dim_over(self, i: int) -> int:
        return self.dim // self.quotient.graph.degree(i)

    @property
    def cocycle_dim(self) -> int:
        return self.cocycles.shape[1]

    @property
    def coboundary_rank(self) -> int:
        return self.cocycle_dim - self.dim

    def random_class(self, rng: random.Random, bound: int = 1000) -> np.ndarray:
        F = self.quotient.F
        n = len(self.layout)
        if self.dim == 0:
            out = np.empty(n, dtype=object)
            out.fill(F.zero)
            return out
        coeffs = np.array([F.random(rng, bound) for _ in range(self.dim)], dtype=object)
        return self.classes.dot(coeffs)

    def class_vector(self, t: int) -> np.ndarray:
        return self.classes[:, t].copy()


def _ext_layout(A, B):
    """Parameters of Z_ji : M (x) A_i -> B_j as F_j-matrices of size b_j x (r a_i)."""
    g = A.graph
    layout = []
    for (i, j) in sorted(g.bimodules):
        bm = g.bimodules[(i, j)]
        r = bm.left_rank
        for l in range(B.dims[j]):
            for q in range(r * A.dims[i]):
                for s in range(g.degree(j)):
                    layout.append(((i, j), l, q, s))
    return layout


def _z_maps(A, B, layout, params) -> dict:
    """Off-diagonal blocks Z_ji from a parameter vector."""
    g = A.graph
    F = A.F
    out = {}
    for (i, j), bm in g.bimodules.items():
        out[(i, j)] = la.zeros(B.base_dim(j), bm.dim * A.dims[i], F)
    pinv = {}
    for c, ((i, j), l, q, s) in zip(params, layout):
        if not c:
            continue
        bm = g.bimodules[(i, j)]
        d = g.degree(j)
        key = (i, j)
        if key not in pinv:
            pinv[key] = la.kron_eye(A.dims[i], bm.left_frame_inv, F)
        rows = pinv[key][q * d:(q + 1) * d, :]
        out[key][l * d:(l + 1) * d, :] += c * la.matmul(g.fields[j].companion_powers[s], rows, F)
    return out


def _z_to_params(A, B, layout, Z: dict) -> np.ndarray:
    """Inverse of ``_z_maps`` for F_j-linear blocks."""
    g = A.graph
    F = A.F
    free = {}
    for (i, j), bm in g.bimodules.items():
        free[(i, j)] = la.matmul(Z[(i, j)], la.kron_eye(A.dims[i], bm.left_frame, F), F)
    out = np.empty(len(layout), dtype=object)
    for t, ((i, j), l, q, s) in enumerate(layout):
        d = g.degree(j)
        out[t] = free[(i, j)][l * d + s, q * d]
    return out


def _twisted_tilde(A, B, i, j, Zji):
    """The part of ``jx~_i`` of the extension mapping A_i into iM_j (x) B_j."""
    g = A.graph
    F = A.F
    r = g.canonical(i, j)
    out_bm = g.bimodules[(j, i)]
    in_bm = g.bimodules[(i, j)]
    total = la.zeros(out_bm.dim * B.dims[j], A.base_dim(i), F)
    for vk, vk_dual in r.pairs:
        K = la.kron_eye(A.dims[i], in_bm.scalar_column(vk_dual), F)
        Kp = la.kron_eye(B.dims[j], out_bm.scalar_column(vk), F)
        total = total + la.chain(Kp, Zji, K, F=F)
    return total


def _cocycle_residual(A, B, Z: dict) -> list:
    """Off-diagonal blocks of the relation of the extension, one per vertex."""
    g = A.graph
    F = A.F
    out = []
    for i in range(g.n):
        acc = la.zeros(B.base_dim(i), A.base_dim(i), F)
        for j in g.neighbors(i):
            acc = acc + la.matmul(B.maps[(j, i)], _twisted_tilde(A, B, i, j, Z[(i, j)]), F)
            acc = acc + la.matmul(Z[(j, i)], A._tilde_block(i, j), F)
        out.append(acc)
    return out


def _cocycle_equations(A, B, layout) -> np.ndarray:
    F = A.F
    cols = []
    for t in range(len(layout)):
        e = np.empty(len(layout), dtype=object)
        e.fill(F.zero)
        e[t] = F.one
        res = _cocycle_residual(A, B, _z_maps(A, B, layout, e))
        cols.append(np.concatenate([r.reshape(-1) for r in res]) if res else np.zeros(0, dtype=object))
    nrows = len(cols[0]) if cols else 0
    M = la.zeros(nrows, len(layout), F)
    for t, c in enumerate(cols):
        M[:, t] = c
    return M


def coboundary(A, B, h: dict) -> dict:
    """``delta(h)_ji = X^B_ji (id (x) h_i) - h_j X^A_ji``."""
    g = A.graph
    F = A.F
    out = {}
    for (i, j), bm in g.bimodules.items():
        out[(i, j)] = (la.matmul(B.maps[(i, j)], bm.tensor_map(h[i]), F)
                       - la.matmul(h[j], A.maps[(i, j)], F))
    return out


def ext1_space(quotient: Representation, sub: Representation) -> ExtSpace:
    """Ext^1(quotient, sub): extensions with ``sub`` as subobject."""
    A, B = quotient, sub
    _same_graph(A, B)
    A.require_valid()
    B.require_valid()
    F = A.F
    layout = _ext_layout(A, B)
    n = len(layout)
    if n == 0:
        empty = la.zeros(0, 0, F)
        return ExtSpace(A, B, layout, empty, empty, empty, 0)
    eqs = _cocycle_equations(A, B, layout)
    Zb = la.nullspace(eqs, F) if eqs.shape[0] else la.identity(n, F)
    # coboundaries: images of all change-of-splitting maps A_i -> B_i
    hlayout = _hom_layout(A, B)
    hom_like = HomSpace(A, B, hlayout, la.zeros(len(hlayout), 0, F))
    cob_cols = []
    for t in range(len(hlayout)):
        e = np.empty(len(hlayout), dtype=object)
        e.fill(F.zero)
        e[t] = F.one
        cob_cols.append(_z_to_params(A, B, layout, coboundary(A, B, hom_like.element(e))))
    cob = la.zeros(n, len(cob_cols), F)
    for t, c in enumerate(cob_cols):
        cob[:, t] = c
    cob_rank = la.rank(cob, F)
    space = la.EchelonSpace(n, F)
    for t in range(cob.shape[1]):
        space.add(cob[:, t])
    classes = []
    for t in range(Zb.shape[1]):
        if space.add(Zb[:, t]):
            classes.append(Zb[:, t])
    cls = la.zeros(n, len(classes), F)
    for t, c in enumerate(classes):
        cls[:, t] = c
    return ExtSpace(A, B, layout, Zb, cob, cls, len(hlayout) - cob_rank)


def assemble_extension(ext: ExtSpace, params) -> Representation:
    A, B = ext.quotient, ext.sub
    g = A.graph
    F = A.F
    Z = _z_maps(A, B, ext.layout, params)
    dims = [B.dims[i] + A.dims[i] for i in range(g.n)]
    maps = {}
    for (i, j), bm in g.bimodules.items():
        m = bm.dim
        nb, na = B.base_dim(j), A.base_dim(j)
        X = la.zeros(nb + na, m * (B.dims[i] + A.dims[i]), F)
        cb = m * B.dims[i]
        X[:nb, :cb] = B.maps[(i, j)]
        X[:nb, cb:] = Z[(i, j)]
        X[nb:, cb:] = A.maps[(i, j)]
        maps[(i, j)] = X
    return Representation(g, dims, maps)


def split_extension(quotient: Representation, sub: Representation) -> Representation:
    from .reps import direct_sum

    return direct_sum(sub, quotient)


# ---------------------------------------------------------------------------
# socle / head summary
# ---------------------------------------------------------------------------


def head_socle_dims(rep: Representation) -> dict:
    rep.require_valid()
    soc = rep.phi_vector()
    head = rep.phi_star_vector()
    return {"socle": list(soc), "head": list(head), "total_socle": sum(soc), "total_head": sum(head)}


# ---------------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------------

ISO_SAMPLES = 5


def _invertible(maps: dict, A: Representation) -> bool:
    F = A.F
    for i, M in maps.items():
        if M.shape[0] != M.shape[1]:
            return False
        if M.shape[0] and la.rank(M, F) != M.shape[0]:
            return False
    return True


def invariant_profile(rep: Representation) -> tuple:
    return (rep.dims, rep.phi_vector(), rep.phi_star_vector())


def is_isomorphic(A: Representation, B: Representation, seed: int = 0, samples: int = ISO_SAMPLES,
                  screen_hom: bool = True) -> bool:
    _same_graph(A, B)
    if invariant_profile(A) != invariant_profile(B):
        return False
    if A.is_zero:
        return True
    H = hom_space(A, B)
    if screen_hom:
        if H.dim != hom_space(B, A).dim or H.dim != hom_space(A, A).dim:
            return False
    if H.dim == 0:
        return False
    rng = random.Random(seed)
    for _ in range(samples):
        if _invertible(H.random_element(rng), A):
            return True
    basis = H.basis_maps()
    for h in basis:
        if _invertible(h, A):
            return True
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            s = {i: basis[a][i] + basis[b][i] for i in basis[a]}
            if _invertible(s, A):
                return True
    return False


# ---------------------------------------------------------------------------
# Krull-Schmidt decomposition
# ---------------------------------------------------------------------------


def _total_matrix(maps: dict, rep: Representation) -> np.ndarray:
    return la.block_diag([maps[i] for i in range(rep.graph.n)], rep.F)


def minimal_polynomial(M: np.ndarray, F) -> list:
    """Monic minimal polynomial of a square matrix, constant term first."""
    n = M.shape[0]
    space = la.EchelonSpace(n * n, F)
    powers = [la.identity(n, F)]
    space.add(powers[0].reshape(-1))
    while True:
        P = la.matmul(powers[-1], M, F)
        flat = P.reshape(-1)
        if space.contains(flat):
            A = la.zeros(n * n, len(powers), F)
            for k, Q in enumerate(powers):
                A[:, k] = Q.reshape(-1)
            sol = la.solve(A, flat.reshape(-1, 1), F)
            coeffs = [-x for x in sol[0][:, 0]]
            return coeffs + [F.one]
        space.add(flat)
        powers.append(P)


def _factor(coeffs, F) -> list:
    """Irreducible factors with multiplicity, each as a coefficient list (constant first)."""
    import sympy

    x = sympy.Symbol("x")
    if F.characteristic == 0:
        terms = [sympy.Rational(int(c.numerator), int(c.denominator)) for c in coeffs]
        poly = sympy.Poly(list(reversed(terms)), x, domain="QQ")
    else:
        poly = sympy.Poly(list(reversed([int(c.v) for c in coeffs])), x, modulus=F.characteristic)
    _, factors = poly.factor_list()
    out = []
    for f, e in factors:
        cs = [F.coerce(str(c)) if F.characteristic == 0 else F.coerce(int(c)) for c in reversed(f.all_coeffs())]
        lead = cs[-1]
        cs = [c / lead for c in cs]
        out.append((cs, e))
    return out


def _poly_power(coeffs, e, F):
    out = [F.one]
    for _ in range(e):
        nxt = [F.zero] * (len(out) + len(coeffs) - 1)
        for a, x in enumerate(out):
            for b, y in enumerate(coeffs):
                nxt[a + b] = nxt[a + b] + x * y
        out = nxt
    return out


def _split_by(rep: Representation, maps: dict):
    """Generalized eigenspace splitting of an endomorphism; None if it does not split."""
    F = rep.F
    g = rep.graph
    total = _total_matrix(maps, rep)
    mp = minimal_polynomial(total, F)
    factors = _factor(mp, F)
    if len(factors) < 2:
        return None, factors
    parts = []
    for cs, e in factors:
        pe = _poly_power(cs, e, F)
        frames = {}
        for i in range(g.n):
            K = la.nullspace(la.poly_eval(pe, maps[i], F), F) if rep.base_dim(i) else la.zeros(0, 0, F)
            frames[i] = free_frame(rep, i, [K[:, c] for c in range(K.shape[1])])
        parts.append(subrepresentation(rep, frames))
    return parts, factors


def endomorphism_top_dim(rep: Representation, basis: list) -> int:
    """dim End - dim rad End, with the radical as the kernel of the trace form (characteristic 0)."""
    F = rep.F
    if F.characteristic != 0:
        raise SpeciesError("indecomposability certificate requires characteristic 0")
    mats = [_total_matrix(h, rep) for h in basis]
    n = len(mats)
    T = la.zeros(n, n, F)
    for a in range(n):
        for b in range(a, n):
            t = sum(la.matmul(mats[a], mats[b], F).diagonal(), F.zero)
            T[a, b] = T[b, a] = t
    return la.rank(T, F)


def decompose(rep: Representation, seed: int = 0, max_candidates: int = 60) -> list:
    """Indecomposable summands (up to isomorphism) of ``rep``."""
    if rep.is_zero:
        return []
    E = hom_space(rep, rep)
    basis = E.basis_maps()
    top = endomorphism_top_dim(rep, basis)
    if top == 1:
        return [rep]
    rng = random.Random(seed)
    candidates = []
    for _ in range(2):
        candidates.append(E.random_element(rng))
    candidates.extend(basis)
    for a in range(len(basis)):
        for b in range(len(basis)):
            if len(candidates) >= max_candidates:
                break
            candidates.append({i: la.matmul(basis[a][i], basis[b][i], rep.F) for i in basis[a]})
    while len(candidates) < max_candidates + 10:
        coeffs = [rng.choice([0, 0, 1, -1, 2]) for _ in basis]
        candidates.append({i: sum((c * h[i] for c, h in zip(coeffs, basis)), 0 * basis[0][i])
                           for i in basis[0]})
    for h in candidates:
        parts, factors = _split_by(rep, h)
        if parts is not None:
            out = []
            for k, p in enumerate(parts):
                out.extend(decompose(p, seed + k + 1, max_candidates))
            return out
        if len(factors) == 1 and len(factors[0][0]) - 1 == top:
            return [rep]
    raise SpeciesError("could not decide the Krull-Schmidt decomposition")
