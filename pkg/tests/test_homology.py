import random

import numpy as np
import pytest

from species_crystal import linalg as la
from species_crystal import presets
from species_crystal.acceptance import lemma_checks, negative_control, sl2hat_module
from species_crystal.errors import RepresentationError
from species_crystal.homology import (assemble_extension, decompose, ext1_space, head_socle_dims, hom_dim_over,
                                      hom_space, is_isomorphic, split_extension)
from species_crystal.reps import Representation, direct_sum, random_module, simple_module, zero_module


def rc_module(c2):
    return Representation(c2, (1, 1), {(0, 1): [[1, 0], [0, 1]]})


def _random_invertible_field_block(g, i, n, rng):
    """Random F_i-linear automorphism of F_i^n in base coordinates."""
    F = g.base
    fld = g.fields[i]
    d = fld.degree
    while True:
        M = la.zeros(n * d, n * d, F)
        for a in range(n):
            for b in range(n):
                blk = la.zeros(d, d, F)
                for s in range(d):
                    blk = blk + F.random(rng, 5) * fld.companion_powers[s]
                M[a * d:(a + 1) * d, b * d:(b + 1) * d] = blk
        if la.rank(M, F) == n * d:
            return M


def conjugate(V, rng):
    g = V.graph
    F = g.base
    P = {i: _random_invertible_field_block(g, i, V.dims[i], rng) for i in range(g.n)}
    maps = {}
    for (i, j), bm in g.bimodules.items():
        inv = la.inverse(P[i], F) if P[i].shape[0] else P[i]
        maps[(i, j)] = la.chain(P[j], V.maps[(i, j)], bm.tensor_map(inv), F=F)
    return Representation(g, V.dims, maps)


def test_hom_between_simples(c2, c2_simples):
    S1, S2 = c2_simples
    assert hom_space(S1, S2).dim == 0
    assert hom_dim_over(S1, S1, 0) == 1
    assert hom_dim_over(S2, S2, 1) == 1
    assert hom_space(S2, S2).dim == 2


def test_hom_elements_intertwine(c2):
    V = direct_sum(rc_module(c2), simple_module(c2, 0))
    F = c2.base
    for h in hom_space(V, V).basis_maps():
        for (i, j), bm in c2.bimodules.items():
            lhs = la.matmul(V.maps[(i, j)], bm.tensor_map(h[i]), F)
            rhs = la.matmul(h[j], V.maps[(i, j)], F)
            assert la.is_zero(lhs - rhs)


def test_graph_mismatch(c2):
    with pytest.raises(RepresentationError):
        hom_space(simple_module(c2, 0), simple_module(presets.load("a2-lusztig"), 0))


def test_ext_simples(c2, c2_simples):
    S1, S2 = c2_simples
    assert ext1_space(S1, S1).dim == 0
    assert ext1_space(S2, S2).dim == 0
    e = ext1_space(S1, S2)  # 0 -> S2 -> E -> S1 -> 0
    assert e.dim == 2 and e.dim_over(1) == 1 and e.dim_over(0) == 2
    assert ext1_space(S2, S1).dim_over(0) == 2


def test_ext_rejects_invalid(c2):
    bad = Representation(c2, (1, 1), {(0, 1): [[1, 0], [0, 1]], (1, 0): [[1, 0]]})
    with pytest.raises(RepresentationError):
        ext1_space(bad, simple_module(c2, 0))


def test_nonsplit_extension_is_rc(c2, c2_simples):
    S1, S2 = c2_simples
    e = ext1_space(S1, S2)
    E = assemble_extension(e, e.class_vector(0))
    assert E.check().valid
    assert is_isomorphic(E, rc_module(c2))
    assert not is_isomorphic(E, split_extension(S1, S2))


def test_sl2hat_module():
    V = sl2hat_module(1)
    assert hom_space(V, V).dim == 1
    assert ext1_space(V, V).dim == 1
    assert negative_control() == -1


def test_sl2hat_heads():
    rng = random.Random(0)
    V = sl2hat_module(1)
    e = ext1_space(V, V)
    for _ in range(5):
        E = assemble_extension(e, e.random_class(rng, 50))
        assert head_socle_dims(E)["total_head"] == 2
    W = sl2hat_module(-1)
    e = ext1_space(W, W)
    assert e.dim == 2
    heads = {head_socle_dims(assemble_extension(e, e.class_vector(t)))["total_head"] for t in range(e.dim)}
    assert 1 in heads


@pytest.mark.parametrize("name", ["c2", "a2-lusztig", "sl2hat-z", "c2-alt"])
def test_extension_classes_assemble_to_modules(name):
    g = presets.load(name)
    rng = random.Random(21)
    for _ in range(10):
        A = random_module(g, rng, max_dim=2, steps=3)
        B = random_module(g, rng, max_dim=2, steps=2)
        e = ext1_space(A, B)
        assert e.dim == e.cocycle_dim - e.coboundary_rank
        for t in range(e.dim):
            E = assemble_extension(e, e.class_vector(t))
            rep = E.check()
            assert rep.valid and rep.nilpotent
            assert E.dims == tuple(a + b for a, b in zip(A.dims, B.dims))


@pytest.mark.parametrize("name", ["c2", "a2-lusztig", "sl2hat-z"])
def test_coboundary_kernel_is_hom(name):
    g = presets.load(name)
    rng = random.Random(5)
    for _ in range(10):
        A = random_module(g, rng, max_dim=2, steps=3)
        B = random_module(g, rng, max_dim=2, steps=3)
        assert ext1_space(A, B).coboundary_kernel_dim == hom_space(A, B).dim


@pytest.mark.parametrize("name", ["c2", "a2-lusztig", "sl2hat-z", "a3"])
def test_lemma_identities(name):
    g = presets.load(name)
    rng = random.Random(13)
    for _ in range(15):
        V = random_module(g, rng, max_dim=3, steps=rng.randint(1, 3 * g.n))
        assert lemma_checks(V) == []


def test_head_socle_simple(c2_simples):
    for i, S in enumerate(c2_simples):
        hs = head_socle_dims(S)
        assert hs["socle"] == hs["head"] == [int(k == i) for k in range(2)]
        assert hs["total_head"] == 1


def test_isomorphism_examples(c2, c2_simples):
    S1, S2 = c2_simples
    assert is_isomorphic(S1, S1)
    assert not is_isomorphic(direct_sum(S1, S2), rc_module(c2))
    V = sl2hat_module(1)
    assert is_isomorphic(V, V)
    assert is_isomorphic(zero_module(c2), zero_module(c2))


@pytest.mark.parametrize("name", ["c2", "c2-alt", "sl2hat-z"])
def test_isomorphic_after_change_of_basis(name):
    g = presets.load(name)
    rng = random.Random(17)
    for _ in range(8):
        V = random_module(g, rng, max_dim=2, steps=4)
        assert is_isomorphic(V, conjugate(V, rng))


def test_decompose_sum(c2, c2_simples):
    S1, S2 = c2_simples
    parts = decompose(direct_sum(rc_module(c2), S2, S1))
    assert sorted(p.dims for p in parts) == [(0, 1), (1, 0), (1, 1)]
    assert any(is_isomorphic(p, rc_module(c2)) for p in parts)


def test_decompose_indecomposable(c2):
    assert len(decompose(rc_module(c2))) == 1
    assert len(decompose(simple_module(c2, 1))) == 1
    assert decompose(zero_module(c2)) == []


def test_decompose_sl2hat():
    V = sl2hat_module(1)
    assert len(decompose(V)) == 1
    assert len(decompose(direct_sum(V, V))) == 2
