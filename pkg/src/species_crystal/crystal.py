"""The crystal B(-infinity) in finite type, realized on rigid representatives.

A node is an isomorphism class of a rigid module T.  ``e_i`` adds ``S_i``
to the socle side (generic extension ``0 -> S_i -> T' -> T -> 0``), ``e_i*``
adds it to the head side (``0 -> T -> T' -> S_i -> 0``); ``f_i`` and
``f_i*`` remove a generic socle line and a generic head hyperplane.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .errors import CrystalScopeError
from .generic import (ESCALATED_SAMPLES, SAMPLES, generic_extension, generic_head_submodule,
                      generic_socle_quotient)
from .homology import ext1_space, is_isomorphic
from .modgraph import ModulatedGraph
from .reps import Representation, simple_module, zero_module
from .roots import is_finite_type

OPS = ("e", "e*", "f", "f*")


@dataclass(eq=False)
class CrystalNode:
    index: int
    weight: tuple
    rep: Representation
    phi: tuple
    phi_star: tuple
    eps: tuple
    eps_star: tuple

    @property
    def total(self) -> int:
        return sum(self.weight)

    def gap(self, i: int) -> int:
        """phi_i + phi_i* - <wt, alpha_i^vee>."""
        return self.phi[i] + self.phi_star[i] - (self.phi[i] - self.eps[i])


def make_node(rep: Representation, index: int = -1) -> CrystalNode:
    C = rep.graph.cartan
    phi = rep.phi_vector()
    phis = rep.phi_star_vector()
    pair = tuple(C.pairing(rep.dims, i) for i in range(C.rank))
    eps = tuple(p - q for p, q in zip(phi, pair))
    eps_star = tuple(p - q for p, q in zip(phis, pair))
    return CrystalNode(index, rep.dims, rep, phi, phis, eps, eps_star)


def child_seed(seed: int, node: int, op: str, i: int) -> int:
    h = hashlib.sha256(f"{seed}:{node}:{op}:{i}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def require_finite(graph: ModulatedGraph):
    verdict = is_finite_type(graph.cartan)
    if not verdict:
        raise CrystalScopeError(f"crystal scope error: {graph.name} is not of finite type")
    return verdict


def lowest_node(graph: ModulatedGraph) -> CrystalNode:
    return make_node(zero_module(graph), 0)


def e(node: CrystalNode, i: int, seed: int = 0, samples: int = SAMPLES) -> Representation:
    require_finite(node.rep.graph)
    return generic_extension(node.rep, simple_module(node.rep.graph, i), seed, samples, max(ESCALATED_SAMPLES, samples))


def e_star(node: CrystalNode, i: int, seed: int = 0, samples: int = SAMPLES) -> Representation:
    require_finite(node.rep.graph)
    return generic_extension(simple_module(node.rep.graph, i), node.rep, seed, samples, max(ESCALATED_SAMPLES, samples))


def f(node: CrystalNode, i: int, seed: int = 0, samples: int = SAMPLES):
    if node.phi[i] == 0:
        return None
    return generic_socle_quotient(node.rep, i, seed, samples, max(ESCALATED_SAMPLES, samples))


def f_star(node: CrystalNode, i: int, seed: int = 0, samples: int = SAMPLES):
    if node.phi_star[i] == 0:
        return None
    return generic_head_submodule(node.rep, i, seed, samples, max(ESCALATED_SAMPLES, samples))


@dataclass
class CrystalGraph:
    graph: ModulatedGraph
    depth: int
    seed: int
    nodes: list = field(default_factory=list)
    edges: dict = field(default_factory=lambda: {op: {} for op in OPS})  # op -> {(node, i): target or None}
    type_label: str | None = None

    @property
    def rank(self) -> int:
        return self.graph.n

    def by_weight(self) -> dict:
        out = {}
        for nd in self.nodes:
            out.setdefault(nd.weight, []).append(nd)
        return out

    def counts(self) -> dict:
        return {w: len(v) for w, v in sorted(self.by_weight().items())}

    def apply(self, op: str, node: int, i: int):
        return self.edges[op].get((node, i))

    def to_json(self) -> dict:
        g = self.graph
        nodes = []
        for nd in self.nodes:
            nodes.append({
                "id": nd.index,
                "weight": list(nd.weight),
                "phi": list(nd.phi),
                "phi_star": list(nd.phi_star),
                "eps": list(nd.eps),
                "eps_star": list(nd.eps_star),
                "representative": nd.rep.to_json(),
            })
        edges = {}
        for op in OPS:
            edges[op] = [{"source": a, "i": g.names[i], "target": t}
                         for (a, i), t in sorted(self.edges[op].items()) if t is not None]
        return {
            "graph": g.name,
            "type": self.type_label,
            "depth": self.depth,
            "seed": self.seed,
            "vertices": list(g.names),
            "nodes": nodes,
            "edges": edges,
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    def to_dot(self) -> str:
        g = self.graph
        lines = [f'digraph "{g.name}" {{', "  rankdir=BT;"]
        for nd in self.nodes:
            w = ",".join(str(x) for x in nd.weight)
            lines.append(f'  n{nd.index} [label="{nd.index}: ({w})"];')
        for (a, i), t in sorted(self.edges["e"].items()):
            if t is not None:
                lines.append(f'  n{a} -> n{t} [label="{g.names[i]}", style=solid];')
        for (a, i), t in sorted(self.edges["e*"].items()):
            if t is not None:
                lines.append(f'  n{a} -> n{t} [label="{g.names[i]}", style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _find(level: list, rep: Representation, seed: int):
    for nd in level:
        if nd.weight == rep.dims and is_isomorphic(nd.rep, rep, seed=seed):
            return nd
    return None


def enumerate_crystal(graph: ModulatedGraph, depth: int, seed: int = 0, samples: int = SAMPLES) -> CrystalGraph:
    verdict = require_finite(graph)
    r = graph.n
    root = lowest_node(graph)
    levels = [[root]]
    discovered = [root]
    raw_edges = {op: {} for op in OPS}
    for t in range(depth):
        nxt: list[CrystalNode] = []
        for nd in levels[t]:
            for op in ("e", "e*"):
                for i in range(r):
                    s = child_seed(seed, nd.index, op, i)
                    rep = e(nd, i, s, samples) if op == "e" else e_star(nd, i, s, samples)
                    hit = _find(nxt, rep, s)
                    if hit is None:
                        hit = make_node(rep, len(discovered))
                        discovered.append(hit)
                        nxt.append(hit)
                    raw_edges[op][(nd.index, i)] = hit.index
        levels.append(nxt)
    # lowering operators, matched against the level below
    for t in range(1, depth + 1):
        for nd in levels[t]:
            for op in ("f", "f*"):
                for i in range(r):
                    s = child_seed(seed, nd.index, op, i)
                    rep = f(nd, i, s, samples) if op == "f" else f_star(nd, i, s, samples)
                    if rep is None:
                        raw_edges[op][(nd.index, i)] = None
                        continue
                    hit = _find(levels[t - 1], rep, s)
                    raw_edges[op][(nd.index, i)] = hit.index if hit is not None else -1
    for i in range(r):
        raw_edges["f"][(0, i)] = None
        raw_edges["f*"][(0, i)] = None
    # canonical order: total weight, weight, discovery
    order = sorted(discovered, key=lambda nd: (nd.total, nd.weight, nd.index))
    remap = {nd.index: k for k, nd in enumerate(order)}
    remap[-1] = -1
    nodes = []
    for k, nd in enumerate(order):
        nd.index = k
        nodes.append(nd)
    edges = {op: {} for op in OPS}
    for op in OPS:
        for (a, i), tgt in raw_edges[op].items():
            edges[op][(remap[a], i)] = None if tgt is None else remap[tgt]
    return CrystalGraph(graph, depth, seed, nodes, edges, verdict.label)


# ---------------------------------------------------------------------------
# axiom checking
# ---------------------------------------------------------------------------


@dataclass
class AxiomReport:
    checked_depth: int
    checked_nodes: int
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"checked_depth": self.checked_depth, "checked_nodes": self.checked_nodes,
                "violations": self.violations, "ok": self.ok, "notes": self.notes}


def check_axioms(cg: CrystalGraph) -> AxiomReport:
    g = cg.graph
    C = g.cartan
    r = cg.rank
    nodes = cg.nodes
    limit = cg.depth - 2
    rep = AxiomReport(max(limit, 0), 0)
    rep.notes.append(f"conditions requiring raising operators are checked for total weight <= {limit}; "
                     "the two outermost levels are used only as targets")
    bad = rep.violations

    def viol(rule, node, i=None, detail=""):
        bad.append({"rule": rule, "node": node, "i": None if i is None else g.names[i], "detail": detail})

    def E(op, a, i):
        return cg.edges[op].get((a, i))

    lowest = [nd for nd in nodes if nd.total == 0]
    if len(lowest) != 1:
        viol("lowest weight element", None, None, f"{len(lowest)} nodes of weight 0")

    for nd in nodes:
        a = nd.index
        for i in range(r):
            pair = C.pairing(nd.weight, i)
            # phi - eps is the pairing with the weight, for both structures
            if nd.phi[i] != nd.eps[i] + pair:
                viol("phi = eps + <wt, alpha_i^vee>", a, i)
            if nd.phi_star[i] != nd.eps_star[i] + pair:
                viol("phi* = eps* + <wt, alpha_i^vee>", a, i)
            for op, ph, ep, lower in (("e", "phi", "eps", "f"), ("e*", "phi_star", "eps_star", "f*")):
                t = E(op, a, i)
                if nd.total < cg.depth:
                    if t is None:
                        viol(f"{op}_i defined", a, i)
                        continue
                    tn = nodes[t]
                    exp_w = tuple(w + (1 if k == i else 0) for k, w in enumerate(nd.weight))
                    if tn.weight != exp_w:
                        viol(f"{op}_i adds alpha_i", a, i)
                    if getattr(tn, ph)[i] != getattr(nd, ph)[i] + 1:
                        viol(f"{op}_i raises {ph}", a, i)
                    if getattr(tn, ep)[i] != getattr(nd, ep)[i] - 1:
                        viol(f"{op}_i lowers {ep}", a, i)
                    # f b' = b  iff  e b = b'
                    if E(lower, t, i) != a:
                        viol(f"{lower}({op} b) = b", a, i, f"{lower}({t}) = {E(lower, t, i)}")
                # the converse direction
                fl = E(lower, a, i)
                if fl == -1:
                    viol(f"{lower} result matches no node", a, i)
                elif fl is not None and E(op, fl, i) != a:
                    viol(f"{op}({lower} b) = b", a, i, f"{op}({fl}) = {E(op, fl, i)}")
                # phi_i = length of the maximal f_i chain
                n, cur = 0, a
                while True:
                    nxt = E(lower, cur, i)
                    if nxt is None or nxt == -1:
                        break
                    n, cur = n + 1, nxt
                if n != getattr(nd, ph)[i]:
                    viol(f"{ph} = longest {lower}-chain", a, i, f"{getattr(nd, ph)[i]} vs {n}")

        # the lowest element is reached through f's, and through f*'s
        for lower in ("f", "f*"):
            cur, steps = a, 0
            while cur != 0 and steps <= nd.total:
                moved = False
                for i in range(r):
                    nxt = E(lower, cur, i)
                    if nxt is not None and nxt != -1:
                        cur, moved = nxt, True
                        break
                if not moved:
                    break
                steps += 1
            if cur != 0:
                viol(f"lowest element reachable by {lower}", a)

    # compatibility of the two structures, at nodes where all needed targets exist
    for nd in nodes:
        if nd.total > limit:
            continue
        rep.checked_nodes += 1
        a = nd.index
        for i in range(r):
            gap = nd.gap(i)
            ei, esi = E("e", a, i), E("e*", a, i)
            if gap < 0:
                viol("gap >= 0", a, i, str(gap))
            if gap == 0 and ei != esi:
                viol("gap 0 => e = e*", a, i)
            if gap >= 1:
                if nodes[ei].phi_star[i] != nd.phi_star[i]:
                    viol("gap >= 1 => phi*(e b) = phi*(b)", a, i)
                if nodes[esi].phi[i] != nd.phi[i]:
                    viol("gap >= 1 => phi(e* b) = phi(b)", a, i)
            if gap >= 2 and E("e", esi, i) != E("e*", ei, i):
                viol("gap >= 2 => e e* = e* e", a, i)
            for j in range(r):
                if j == i:
                    continue
                ej = E("e", a, j)
                if E("e*", ej, i) != E("e", esi, j):
                    viol("e_i* e_j = e_j e_i*", a, i, f"j = {g.names[j]}")
    return rep


def self_ext_invariant(node: CrystalNode) -> list:
    """Per vertex: (phi + phi* - <wt, alpha^vee>, dim Ext^1(T, S_i), dim Ext^1(S_i, T)) over F_i."""
    g = node.rep.graph
    out = []
    for i in range(g.n):
        S = simple_module(g, i)
        a = ext1_space(node.rep, S).dim_over(i)
        b = ext1_space(S, node.rep).dim_over(i)
        out.append((node.gap(i), a, b))
    return out


def is_rigid(node: CrystalNode) -> bool:
    return ext1_space(node.rep, node.rep).dim == 0
