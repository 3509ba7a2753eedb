"""Modulated graphs: vertex fields, arrow bimodules, bilinear forms, Cartan data.

Conventions.  Vertices are indexed ``0..n-1`` in declaration order.  The
arrow ``i -> j`` carries the (F_j, F_i)-bimodule ``jM_i``; it is stored as a
base-field space with two commuting matrices: ``left`` is the action of the
generator of F_j, ``right`` the action of the generator of F_i (both act on
column coordinate vectors).  The form of the arrow ``i -> j`` is
``eps_i^j : iM_j (x)_{F_j} jM_i -> F_i``; it is stored as a ``(m, m, d_i)``
array of base-field coordinates, rows indexing ``iM_j`` and columns ``jM_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg as la
from .errors import ValidationError
from .fields import FieldHandle, base_field_from_json, base_handle, make_extension


def greedy_basis(candidates, action: np.ndarray, degree: int, F):
    """Pick vectors from ``candidates`` forming a basis over the field generated by ``action``.

    Returns the chosen vectors; their orbits ``v, Av, ..., A^(d-1) v`` span the
    same space as the orbits of all candidates.
    """
    n = action.shape[0]
    space = la.EchelonSpace(n, F)
    chosen = []
    for v in candidates:
        if space.contains(v):
            continue
        chosen.append(v)
        w = v
        for _ in range(degree):
            space.add(w)
            w = action.dot(w)
    return chosen


def orbit_matrix(vectors, action: np.ndarray, degree: int, F) -> np.ndarray:
    """Columns ``A^s v_t`` ordered t-major, s-minor."""
    n = action.shape[0]
    cols = []
    for v in vectors:
        w = v
        for _ in range(degree):
            cols.append(w)
            w = action.dot(w)
    out = la.zeros(n, len(cols), F)
    for k, c in enumerate(cols):
        out[:, k] = c
    return out


def unit(n: int, k: int, F) -> np.ndarray:
    v = np.empty(n, dtype=object)
    v.fill(F.zero)
    v[k] = F.one
    return v


@dataclass(eq=False)
class Bimodule:
    """The bimodule ``jM_i`` on the arrow ``src=i -> tgt=j``."""

    src: int
    tgt: int
    dim: int
    left: np.ndarray
    right: np.ndarray
    left_field: FieldHandle
    right_field: FieldHandle

    @property
    def F(self):
        return self.left_field.base

    @cached_property
    def left_powers(self):
        F = self.F
        out = [la.identity(self.dim, F)]
        for _ in range(1, self.left_field.degree):
            out.append(la.matmul(out[-1], self.left, F))
        return out

    @cached_property
    def right_powers(self):
        F = self.F
        out = [la.identity(self.dim, F)]
        for _ in range(1, self.right_field.degree):
            out.append(la.matmul(out[-1], self.right, F))
        return out

    def left_mult(self, coords) -> np.ndarray:
        out = la.zeros(self.dim, self.dim, self.F)
        for c, P in zip(coords, self.left_powers):
            if c:
                out = out + c * P
        return out

    def right_mult(self, coords) -> np.ndarray:
        out = la.zeros(self.dim, self.dim, self.F)
        for c, P in zip(coords, self.right_powers):
            if c:
                out = out + c * P
        return out

    def scalar_column(self, m: np.ndarray) -> np.ndarray:
        """Matrix of ``c -> m * c`` from F_src coordinates to this bimodule."""
        d = self.right_field.degree
        out = la.zeros(self.dim, d, self.F)
        for s, P in enumerate(self.right_powers):
            out[:, s] = P.dot(m)
        return out

    def tensor_vec(self, m: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Coordinates of ``m (x) w`` in ``M (x)_{F_src} V`` for ``w`` in free F_src-coordinates."""
        d = self.right_field.degree
        n = len(w) // d
        out = np.empty(self.dim * n, dtype=object)
        for l in range(n):
            out[l * self.dim:(l + 1) * self.dim] = self.right_mult(w[l * d:(l + 1) * d]).dot(m)
        return out

    def tensor_map(self, Phi: np.ndarray) -> np.ndarray:
        """``id (x) Phi`` for an F_src-linear map given in free coordinates."""
        d = self.right_field.degree
        a = Phi.shape[1] // d
        b = Phi.shape[0] // d
        m = self.dim
        out = la.zeros(m * b, m * a, self.F)
        for l in range(b):
            for k in range(a):
                block = Phi[l * d:(l + 1) * d, k * d]
                if any(bool(x) for x in block):
                    out[l * m:(l + 1) * m, k * m:(k + 1) * m] = self.right_mult(block)
        return out

    @cached_property
    def left_basis(self) -> list:
        """A basis over F_tgt (greedy from the standard basis)."""
        F = self.F
        return greedy_basis([unit(self.dim, k, F) for k in range(self.dim)], self.left, self.left_field.degree, F)

    @cached_property
    def right_basis(self) -> list:
        """A basis over F_src (greedy from the standard basis)."""
        F = self.F
        return greedy_basis([unit(self.dim, k, F) for k in range(self.dim)], self.right, self.right_field.degree, F)

    @cached_property
    def left_frame(self) -> np.ndarray:
        """Columns ``L^s u_t``: identifies F_tgt^r with this bimodule."""
        return orbit_matrix(self.left_basis, self.left, self.left_field.degree, self.F)

    @cached_property
    def left_frame_inv(self) -> np.ndarray:
        return la.inverse(self.left_frame, self.F)

    @property
    def left_rank(self) -> int:
        return self.dim // self.left_field.degree

    @property
    def right_rank(self) -> int:
        return self.dim // self.right_field.degree


@dataclass(eq=False)
class BilinearForm:
    """``eps_i^j : iM_j (x)_{F_j} jM_i -> F_i`` for the arrow ``i -> j``."""

    src: int
    tgt: int
    values: np.ndarray  # shape (m, m, d_i)
    value_field: FieldHandle

    def coordinate_matrix(self, s: int) -> np.ndarray:
        return np.array(self.values[:, :, s], dtype=object)

    def evaluate(self, x: np.ndarray, y: np.ndarray) -> list:
        return [x.dot(self.coordinate_matrix(s).dot(y)) for s in range(self.value_field.degree)]


@dataclass(frozen=True)
class CartanData:
    C: tuple
    d: tuple
    names: tuple

    @property
    def rank(self) -> int:
        return len(self.d)

    def pairing(self, v, i: int) -> int:
        """<v, alpha_i^vee> = sum_j v_j c_ij."""
        return sum(v[j] * self.C[i][j] for j in range(self.rank))

    def symmetric_form(self, v, w):
        if len(v) != self.rank or len(w) != self.rank:
            raise ValueError("weight vector length does not match the rank")
        return sum(v[i] * w[j] * self.d[i] * self.C[i][j] for i in range(self.rank) for j in range(self.rank))

    def simple_root(self, i: int) -> tuple:
        return tuple(1 if k == i else 0 for k in range(self.rank))

    def to_json(self) -> dict:
        return {"C": [list(r) for r in self.C], "d": list(self.d)}


@dataclass(eq=False)
class CanonicalElement:
    """``r_i^j = sum_k v_k (x) v^k`` in ``iM_j (x)_{F_j} jM_i`` (the relation at ``vertex=i``)."""

    vertex: int
    middle: int
    pairs: list  # (v_k in iM_j, v^k in jM_i)

    def tensor(self, F) -> np.ndarray:
        """Lift to the base-field tensor product ``iM_j (x)_F jM_i`` (kron ordering)."""
        out = None
        for a, b in self.pairs:
            t = np.outer(a, b).reshape(-1)
            out = t if out is None else out + t
        return out


def tensor_quotient(right_action: np.ndarray, left_action: np.ndarray, F):
    """``M (x)_K N`` as a quotient of ``M (x)_F N`` by ``m z (x) n - m (x) z n``.

    ``right_action`` is the generator of K acting on M, ``left_action`` on N.
    Returns ``(proj, sect)``: projection onto quotient coordinates and a
    section with ``proj @ sect = I``.
    """
    m = right_action.shape[0]
    n = left_action.shape[0]
    rel = la.kron(right_action, la.identity(n, F), F) - la.kron(la.identity(m, F), left_action, F)
    R, pivots = la.rref(rel.T.copy(), F)
    pset = set(pivots)
    free = [c for c in range(m * n) if c not in pset]
    proj = la.zeros(len(free), m * n, F)
    for c in range(m * n):
        v = unit(m * n, c, F)
        for row, p in zip(R, pivots):
            f = v[p]
            if f:
                v = v - f * row
        proj[:, c] = v[free]
    sect = la.zeros(m * n, len(free), F)
    for t, c in enumerate(free):
        sect[c, t] = F.one
    return proj, sect


class ModulatedGraph:
    def __init__(self, name, base, names, fields, edges, bimodules, forms, params=None, source=None):
        self.name = name
        self.base = base
        self.names = tuple(names)
        self.fields = tuple(fields)
        self.edges = tuple(edges)
        self.bimodules = bimodules
        self.forms = forms
        self.params = dict(params or {})
        self.source = source

    @property
    def F(self):
        return self.base

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def arrows(self) -> list:
        return sorted(self.bimodules)

    def degree(self, i: int) -> int:
        return self.fields[i].degree

    def neighbors(self, i: int) -> list:
        return sorted({b for (a, b) in self.bimodules if a == i})

    def index(self, name) -> int:
        name = str(name)
        if name not in self.names:
            raise ValidationError(f"unknown vertex {name!r}")
        return self.names.index(name)

    @cached_property
    def cartan(self) -> CartanData:
        return cartan_matrix(self)

    def canonical(self, i: int, j: int) -> CanonicalElement:
        key = (i, j)
        cache = self.__dict__.setdefault("_canonical_cache", {})
        if key not in cache:
            cache[key] = canonical_element(self, i, j)
        return cache[key]

    def __repr__(self):
        return f"ModulatedGraph({self.name!r}, vertices={list(self.names)})"


# ---------------------------------------------------------------------------
# parsing and validation
# ---------------------------------------------------------------------------


def _parse_matrix(raw, F, shape, what):
    try:
        M = la.as_matrix(raw, F)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix for {what}: {exc}") from exc
    if M.shape != shape:
        raise ValidationError(f"{what} has shape {M.shape}, expected {shape}")
    return M


def _parse_bimodule(raw, src, tgt, fields, F):
    dim = int(raw["base_dim"])
    left = _parse_matrix(raw["left_gen_action"], F, (dim, dim), "left_gen_action")
    right = _parse_matrix(raw["right_gen_action"], F, (dim, dim), "right_gen_action")
    return Bimodule(src, tgt, dim, left, right, fields[tgt], fields[src])


def _parse_form(raw, bm_first: Bimodule, bm_second: Bimodule, value_field: FieldHandle, F):
    m1, m2 = bm_first.dim, bm_second.dim
    d = value_field.degree
    values = np.empty((m1, m2, d), dtype=object)
    values.fill(F.zero)
    if len(raw) != m1 or any(len(row) != m2 for row in raw):
        raise ValidationError(f"form has wrong shape, expected {m1}x{m2}")
    for a, row in enumerate(raw):
        for b, entry in enumerate(row):
            coords = entry if isinstance(entry, (list, tuple)) else [entry]
            if len(coords) > d:
                raise ValidationError("form value has more coordinates than the field degree")
            for s, c in enumerate(coords):
                values[a, b, s] = F.coerce(c)
    return values


def validate(data: dict) -> ModulatedGraph:
    """Parse a preset dictionary and verify every bimodule and form axiom."""
    try:
        base = base_field_from_json(data.get("base_field", {"type": "rationals"}))
        vf = data["vertex_fields"]
        names = [str(k) for k in vf]
        fields = []
        for key in vf:
            desc = vf[key]
            if desc == "base" or desc is None:
                fields.append(base_handle(base))
            else:
                fields.append(make_extension(base, desc["minpoly"]))
        raw_edges = data.get("edges", [])
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValidationError(f"malformed preset: {exc}") from exc

    index = {nm: k for k, nm in enumerate(names)}
    edges = []
    bimodules = {}
    raw_forms = {}
    for e in raw_edges:
        u, v = str(e["u"]), str(e["v"])
        if u not in index or v not in index:
            raise ValidationError(f"invalid graph: edge references unknown vertex ({u},{v})")
        iu, iv = index[u], index[v]
        if iu == iv:
            raise ValidationError(f"invalid graph: self-loop at vertex {u}")
        if (iu, iv) in bimodules or (iv, iu) in bimodules:
            raise ValidationError(f"invalid graph: multiple edges between {u} and {v}")
        edges.append((iu, iv))
        try:
            bimodules[(iu, iv)] = _parse_bimodule(e["bimodule_uv"], iu, iv, fields, base)
            bimodules[(iv, iu)] = _parse_bimodule(e["bimodule_vu"], iv, iu, fields, base)
            raw_forms[(iu, iv)] = e["form_into_u"]
            raw_forms[(iv, iu)] = e["form_into_v"]
        except KeyError as exc:
            raise ValidationError(f"invalid graph: edge ({u},{v}) is missing {exc}") from exc

    for (i, j), bm in bimodules.items():
        _check_bimodule(bm, names)

    forms = {}
    for (i, j), raw in raw_forms.items():
        # form of arrow i -> j pairs iM_j (arrow j -> i) with jM_i (arrow i -> j)
        values = _parse_form(raw, bimodules[(j, i)], bimodules[(i, j)], fields[i], base)
        forms[(i, j)] = BilinearForm(i, j, values, fields[i])
        _check_form(forms[(i, j)], bimodules[(j, i)], bimodules[(i, j)], fields, names)

    graph = ModulatedGraph(data.get("name", "unnamed"), base, names, fields, edges, bimodules, forms,
                           data.get("params"), source=data)
    graph.cartan  # symmetrizability is checked here
    return graph


def _check_bimodule(bm: Bimodule, names):
    F = bm.F
    where = f"arrow ({names[bm.src]},{names[bm.tgt]})"
    if bm.dim % bm.left_field.degree or bm.dim % bm.right_field.degree:
        raise ValidationError(f"not a bimodule: dimension of {where} is not divisible by the field degrees")
    if not la.is_zero(la.matmul(bm.left, bm.right, F) - la.matmul(bm.right, bm.left, F)):
        raise ValidationError(f"not a bimodule: left and right actions on {where} do not commute")
    for act, fld, side in ((bm.left, bm.left_field, "left"), (bm.right, bm.right_field, "right")):
        mp = fld.minpoly if fld.minpoly is not None else (-F.one, F.one)
        if not la.is_zero(la.poly_eval(mp, act, F)):
            raise ValidationError(f"not a bimodule: {side} action on {where} does not satisfy the minimal polynomial")


def _check_form(form: BilinearForm, first: Bimodule, second: Bimodule, fields, names):
    """first = iM_j, second = jM_i, values in F_i."""
    F = first.F
    i, j = form.src, form.tgt
    where = f"arrow ({names[i]},{names[j]})"
    Fi = fields[i]
    d = Fi.degree
    C = Fi.companion
    E = [form.coordinate_matrix(s) for s in range(d)]

    def times_generator(mats):
        return [sum((C[s, t] * mats[t] for t in range(d)), la.zeros(*mats[0].shape, F)) for s in range(d)]

    zE = times_generator(E)
    for s in range(d):
        # balanced over the middle field F_j
        if not la.is_zero(la.matmul(first.right.T, E[s], F) - la.matmul(E[s], second.left, F)):
            raise ValidationError(f"form on {where} is not balanced over the middle field")
        if not la.is_zero(la.matmul(first.left.T, E[s], F) - zE[s]):
            raise ValidationError(f"form on {where} is not linear in the first argument")
        if not la.is_zero(la.matmul(E[s], second.right, F) - zE[s]):
            raise ValidationError(f"form on {where} is not linear in the second argument")
    if first.dim != second.dim:
        raise ValidationError(f"degenerate form on {where}: bimodule dimensions differ")
    # Gram matrix over F_i between left-F_i basis of iM_j and right-F_i basis of jM_i
    a_basis = first.left_basis
    b_basis = second.right_basis
    if len(a_basis) != len(b_basis):
        raise ValidationError(f"degenerate form on {where}")
    gram = la.zeros(len(a_basis), len(b_basis), Fi)
    for l, a in enumerate(a_basis):
        for k, b in enumerate(b_basis):
            gram[l, k] = Fi.element(form.evaluate(a, b))
    if la.rank(gram, Fi) != len(a_basis):
        raise ValidationError(f"degenerate form on {where}")


# ---------------------------------------------------------------------------
# derived data
# ---------------------------------------------------------------------------


def cartan_matrix(graph: ModulatedGraph) -> CartanData:
    n = graph.n
    C = [[0] * n for _ in range(n)]
    for i in range(n):
        C[i][i] = 2
    for (j, i), bm in graph.bimodules.items():
        # bm is iM_j, on the arrow j -> i
        di = graph.degree(i)
        if bm.dim % di:
            raise ValidationError("bimodule dimension not divisible by the field degree")
        C[i][j] = -(bm.dim // di)
    d = [graph.degree(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            if d[i] * C[i][j] != d[j] * C[j][i]:
                raise ValidationError(f"Cartan data is not symmetrizable at ({i},{j})")
    return CartanData(tuple(tuple(r) for r in C), tuple(d), graph.names)


def symmetric_form(graph: ModulatedGraph, v, w):
    return graph.cartan.symmetric_form(v, w)


def canonical_element(graph: ModulatedGraph, i: int, j: int, basis=None) -> CanonicalElement:
    """``r_i^j``: dual F_j-bases of ``iM_j`` and ``jM_i`` under the form of the arrow ``j -> i``.

    ``basis`` optionally replaces the right F_j-basis of ``iM_j`` (used to
    check independence of the choice).
    """
    F = graph.base
    first = graph.bimodules[(i, j)]   # jM_i
    second = graph.bimodules[(j, i)]  # iM_j
    form = graph.forms[(j, i)]        # eps_j^i on jM_i x iM_j, values in F_j
    dj = graph.degree(j)
    vk = list(basis) if basis is not None else second.right_basis
    m = first.dim
    E = [form.coordinate_matrix(s) for s in range(dj)]
    rows = []
    for v in vk:
        for s in range(dj):
            rows.append(E[s].dot(v))
    A = la.zeros(len(rows), m, F)
    for r, row in enumerate(rows):
        A[r, :] = row
    pairs = []
    for l, v in enumerate(vk):
        rhs = la.zeros(len(rows), 1, F)
        rhs[l * dj, 0] = F.one
        sol = la.solve(A, rhs, F)
        if sol is None or sol[1].shape[1]:
            raise ValidationError(f"degenerate form on arrow ({graph.names[j]},{graph.names[i]})")
        pairs.append((v, sol[0][:, 0].copy()))
    return CanonicalElement(i, j, pairs)


def canonical_quotient(graph: ModulatedGraph, i: int, j: int):
    """Projection of ``iM_j (x)_F jM_i`` onto ``iM_j (x)_{F_j} jM_i``."""
    second = graph.bimodules[(j, i)]
    first = graph.bimodules[(i, j)]
    return tensor_quotient(second.right, first.left, graph.base)


def dimension_formula_terms(cartan: CartanData, v, i: int, k: int):
    """Both sides of the induction step for the pure dimension D(v) - (v, v)/2."""
    from fractions import Fraction

    def D(w):
        return sum(cartan.d[t] * w[t] ** 2 for t in range(cartan.rank))

    def half(x):
        return Fraction(x, 2)

    a_i = cartan.simple_root(i)
    w = [v[t] - k * a_i[t] for t in range(cartan.rank)]
    lhs = (D(w) - half(cartan.symmetric_form(w, w)) + 2 * k * cartan.d[i] * v[i]
           - k * cartan.symmetric_form(v, a_i))
    rhs = D(v) - half(cartan.symmetric_form(v, v))
    return lhs, rhs
