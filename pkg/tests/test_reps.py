import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from species_crystal import linalg as la
from species_crystal import presets
from species_crystal.errors import RepresentationError
from species_crystal.reps import (Representation, direct_sum, from_json, load_module, phi, random_module,
                                  simple_module, subrepresentation, tilde_maps, zero_module)


def c2_point(c2, z, w):
    """v = (1,1) on C2: z = z1 + i zi is the map 1 -> 2, w = (w1, wi) the map 2 -> 1."""
    z1, zi = z
    w1, wi = w
    return Representation(c2, (1, 1), {(0, 1): [[z1, -zi], [zi, z1]], (1, 0): [[w1, wi]]})


def test_simples(c2, c2_simples):
    S1, S2 = c2_simples
    assert S1.total_base_dim == 1 and S2.total_base_dim == 2
    for i, S in enumerate(c2_simples):
        assert S.is_valid()
        assert S.phi_vector() == S.phi_star_vector() == tuple(int(k == i) for k in range(2))


@pytest.mark.parametrize("dims", [(0, 0), (2, 0), (1, 3), (2, 2)])
def test_zero_maps_valid(c2, dims):
    assert Representation(c2, dims).is_valid()


def test_zero_module_phi(c2):
    Z = zero_module(c2)
    assert Z.phi_vector() == (0, 0) and Z.phi_star_vector() == (0, 0)
    T = tilde_maps(Z, 1)
    assert T.x_tilde.shape == (0, 0) and T.tilde_x.shape == (0, 0)


def test_example_points(c2):
    assert c2_point(c2, (1, 0), (0, 0)).is_valid()
    assert c2_point(c2, (3, -2), (0, 0)).is_valid()
    assert c2_point(c2, (0, 0), (1, 5)).is_valid()
    bad = c2_point(c2, (1, 0), (1, 0)).check()
    assert not bad.valid
    assert list(bad.residuals[0].flat) == [1]


@settings(max_examples=60, deadline=None)
@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_no_rational_points_off_the_axes(z, w):
    # over the base field the variety is the union of {z = 0} and {w = 0}
    c2 = presets.load("c2")
    assert c2_point(c2, z, w).is_valid() == (z == (0, 0) or w == (0, 0))


def test_example_point_tilde(c2):
    V = c2_point(c2, (1, 0), (0, 0))
    assert la.is_zero(V.x_tilde(1))
    assert V.phi(1) == 1
    assert la.rank(V.x_tilde(0), c2.base) == V.base_dim(0)
    assert V.phi(0) == 0


def test_rc_module(c2):
    RC = c2_point(c2, (1, 0), (0, 0))  # head R at 1, socle C at 2
    assert RC.phi_vector() == (0, 1)
    assert RC.phi_star_vector() == (1, 0)


def test_s1_upper_space(c2, c2_simples):
    T = tilde_maps(c2_simples[0], 0)
    assert T.upper_base_dim == 0  # 2*1 - (a1, a1)
    assert T.x_tilde.shape == (0, 1)


def test_nonlinear_map_reported(c2):
    V = Representation(c2, (1, 1), {(0, 1): [[1, 0], [0, 0]]})
    rep = V.check()
    assert not rep.valid and rep.linearity_failures == [(0, 1)]
    with pytest.raises(RepresentationError, match="not linear"):
        V.require_valid()


def test_not_nilpotent_reported(c2):
    assert not c2_point(c2, (1, 0), (1, 0)).is_nilpotent()


def test_shape_mismatch(c2):
    with pytest.raises(RepresentationError):
        Representation(c2, (1, 1), {(0, 1): [[1, 0]]})
    with pytest.raises(RepresentationError):
        Representation(c2, (1, 1, 1))


def test_invalid_rep_rejected_by_tilde(c2):
    with pytest.raises(RepresentationError):
        tilde_maps(c2_point(c2, (1, 0), (1, 0)), 0)
    with pytest.raises(RepresentationError):
        phi(c2_point(c2, (1, 0), (1, 0)), 0)


def _sample_modules(name, count, seed):
    g = presets.load(name)
    rng = random.Random(seed)
    return [random_module(g, rng, max_dim=2, steps=rng.randint(1, 2 * g.n + 1)) for _ in range(count)]


def _linear_maps_basis(g, dims, i, j):
    """Basis of F_j-linear maps jM_i (x) V_i -> V_j, as flattened row-major matrices."""
    F = g.base
    bm = g.bimodules[(i, j)]
    A = la.kron_eye(dims[i], bm.left, F)
    B = la.kron_eye(dims[j], g.fields[j].companion, F)
    r, c = B.shape[0], A.shape[0]
    eq = la.kron(la.identity(r, F), A.T.copy(), F) - la.kron(B, la.identity(c, F), F)
    return la.nullspace(eq, F), (r, c)


def _random_assignment(g, rng):
    F = g.base
    dims = [rng.randint(0, 2) for _ in range(g.n)]
    maps = {}
    for (i, j) in g.bimodules:
        if rng.random() < 0.4:
            continue
        N, shape = _linear_maps_basis(g, dims, i, j)
        if N.shape[1] == 0 or 0 in shape:
            continue
        coeffs = np.array([F.random(rng, 3) for _ in range(N.shape[1])], dtype=object)
        maps[(i, j)] = N.dot(coeffs).reshape(shape)
    return Representation(g, dims, maps)


@pytest.mark.parametrize("name", ["c2", "a2-lusztig", "sl2hat-z", "a3"])
def test_relation_equivalence(name):
    g = presets.load(name)
    rng = random.Random(11)
    F = g.base
    agree = {True: 0, False: 0}
    for _ in range(100):
        V = _random_assignment(g, rng)
        assert not V.linearity_failures()
        direct = True
        for i in range(g.n):
            for c in range(V.base_dim(i)):
                w = la.identity(V.base_dim(i), F)[:, c]
                total = None
                for j in g.neighbors(i):
                    y = V.act_flat((i, j, i), g.canonical(i, j).tensor(F), w)
                    total = y if total is None else total + y
                if total is not None and any(bool(x) for x in total):
                    direct = False
        tilde = all(la.is_zero(V.relation_residual(i)) for i in range(g.n))
        assert direct == tilde
        agree[direct] += 1
    assert agree[True] and agree[False]


def _upper_action(V, i):
    g = V.graph
    blocks = [la.kron_eye(V.dims[j], g.bimodules[(j, i)].left, g.base) for j in g.neighbors(i)]
    return la.block_diag(blocks, g.base)


@pytest.mark.parametrize("name", ["c2", "c2-alt", "b2", "sl2hat-z"])
def test_tilde_maps_field_linear(name):
    F = presets.load(name).base
    for V in _sample_modules(name, 25, 4):
        for i in range(V.graph.n):
            G, U = V.gen_action(i), _upper_action(V, i)
            assert la.is_zero(la.matmul(V.x_tilde(i), G, F) - la.matmul(U, V.x_tilde(i), F))
            assert la.is_zero(la.matmul(V.tilde_x(i), U, F) - la.matmul(G, V.tilde_x(i), F))


@pytest.mark.parametrize("name", ["c2", "a2-lusztig", "sl2hat-z"])
def test_upper_dimension_identity(name):
    g = presets.load(name)
    for V in _sample_modules(name, 25, 8):
        for i in range(g.n):
            d = g.degree(i)
            assert V.v_upper_dim(i) == 2 * d * V.dims[i] - g.cartan.symmetric_form(V.dims, g.cartan.simple_root(i))
            assert la.is_zero(V.relation_residual(i))


@pytest.mark.parametrize("name", ["c2", "a3"])
def test_random_modules_valid(name):
    for V in _sample_modules(name, 30, 2):
        assert V.check().valid


def test_json_round_trip(c2, tmp_path):
    V = direct_sum(c2_point(c2, (2, 1), (0, 0)), simple_module(c2, 1))
    path = tmp_path / "m.json"
    path.write_text(json.dumps(V.to_json()))
    W = load_module(c2, path)
    assert W.dims == V.dims
    assert all(list(W.maps[k].flat) == list(V.maps[k].flat) for k in V.maps)


def test_loader_refuses_invalid(c2):
    data = c2_point(c2, (1, 0), (1, 0)).to_json()
    with pytest.raises(RepresentationError):
        from_json(c2, data)
    data = c2_point(c2, (1, 0), (0, 0)).to_json()
    data["maps"][0]["matrix"] = [[1]]
    with pytest.raises(RepresentationError, match="should be"):
        from_json(c2, data)


def test_subrepresentation_closure(c2):
    RC = c2_point(c2, (1, 0), (0, 0))
    F = c2.base
    with pytest.raises(RepresentationError, match="not closed"):
        subrepresentation(RC, {0: la.identity(1, F), 1: la.zeros(2, 0, F)})
    sub = subrepresentation(RC, {0: la.zeros(1, 0, F), 1: la.identity(2, F)})
    assert sub.dims == (0, 1)
