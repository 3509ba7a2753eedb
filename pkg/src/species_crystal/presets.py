"""Built-in modulated graph presets, stored as JSON-ready dictionaries."""

from __future__ import annotations

import copy
import inspect
import json
from fractions import Fraction
from pathlib import Path

from .errors import ValidationError
from .modgraph import ModulatedGraph, validate

I2 = [[1, 0], [0, 1]]
J = [[0, -1], [1, 0]]  # multiplication by i on the basis (1, i)


def _scalar_bimodule(dim=1):
    eye = [[1 if r == c else 0 for c in range(dim)] for r in range(dim)]
    return {"base_dim": dim, "left_gen_action": eye, "right_gen_action": eye}


def _c2_like(name, minpoly, gen, square, swap=False):
    """Base field at one vertex and a quadratic extension at the other.

    ``gen`` is the companion matrix of the extension generator ``s`` with
    ``s^2 = square``.  Both bimodules are the extension field itself; the
    form into the base field takes the constant coordinate of a product and
    the form into the extension is the product.
    """
    big = {"base_dim": 2, "left_gen_action": gen, "right_gen_action": I2}  # arrow small -> big
    back = {"base_dim": 2, "left_gen_action": I2, "right_gen_action": gen}  # arrow big -> small
    into_small = [[1, 0], [0, square]]
    into_big = [[[1, 0], [0, 1]], [[0, 1], [square, 0]]]
    small, large = ("1", "2") if not swap else ("2", "1")
    fields = {small: "base", large: {"minpoly": minpoly}}
    order = ["1", "2"]
    return {
        "name": name,
        "base_field": {"type": "rationals"},
        "vertex_fields": {v: fields[v] for v in order},
        "edges": [{
            "u": small, "v": large,
            "bimodule_uv": big, "bimodule_vu": back,
            "form_into_u": into_small, "form_into_v": into_big,
        }],
        "params": {},
    }


def c2():
    return _c2_like("c2", [1, 0, 1], J, -1)


def c2_alt():
    """The same Cartan type, with the quadratic field Q(sqrt 2) at vertex 2."""
    return _c2_like("c2-alt", [-2, 0, 1], [[0, 2], [1, 0]], 2)


def b2():
    """C2 with the vertices relabelled, giving the transposed (B2) Cartan matrix."""
    return _c2_like("b2", [1, 0, 1], J, -1, swap=True)


def parse_parameter(z) -> Fraction:
    if isinstance(z, (int, Fraction)):
        value = Fraction(z)
    else:
        text = str(z).strip().replace(" ", "")
        if "i" in text:
            raise ValidationError(
                f"parameter {z!r}: only rational values are supported (the base field is the rationals)")
        try:
            value = Fraction(text)
        except ValueError as exc:
            raise ValidationError(f"cannot parse parameter {z!r}") from exc
    if value == 0:
        raise ValidationError("parameter z must be nonzero")
    return value


def sl2hat_z(z=1):
    zq = parse_parameter(z)
    two = {"base_dim": 2, "left_gen_action": I2, "right_gen_action": I2}
    return {
        "name": "sl2hat-z",
        "base_field": {"type": "rationals"},
        "vertex_fields": {"1": "base", "2": "base"},
        "edges": [{
            "u": "1", "v": "2",
            "bimodule_uv": two, "bimodule_vu": copy.deepcopy(two),
            # (s, t) -> s1 t1 + s2 t2 and (t, s) -> z t1 s1 - t2 s2
            "form_into_u": [[1, 0], [0, 1]],
            "form_into_v": [[str(zq), 0], [0, -1]],
        }],
        "params": {"z": str(zq)},
    }


def _simply_laced(name, n, edges):
    verts = [str(k + 1) for k in range(n)]
    return {
        "name": name,
        "base_field": {"type": "rationals"},
        "vertex_fields": {v: "base" for v in verts},
        "edges": [{
            "u": str(a), "v": str(b),
            "bimodule_uv": _scalar_bimodule(), "bimodule_vu": _scalar_bimodule(),
            "form_into_u": [[1]], "form_into_v": [[-1]],
        } for a, b in edges],
        "params": {},
    }


def a2_lusztig():
    return _simply_laced("a2-lusztig", 2, [(1, 2)])


def a1xa1():
    return _simply_laced("a1xa1", 2, [])


def a3():
    return _simply_laced("a3", 3, [(1, 2), (2, 3)])


PRESETS = {
    "c2": c2,
    "c2-alt": c2_alt,
    "b2": b2,
    "sl2hat-z": sl2hat_z,
    "a2-lusztig": a2_lusztig,
    "a1xa1": a1xa1,
    "a3": a3,
}


def preset_data(name: str, **params) -> dict:
    if name in PRESETS:
        builder = PRESETS[name]
        accepted = inspect.signature(builder).parameters
        extra = sorted(set(params) - set(accepted))
        if extra:
            raise ValidationError(f"preset {name!r} takes no parameter {', '.join(extra)}")
        return builder(**params)
    path = Path(name)
    if path.suffix == ".json" and path.exists():
        if params:
            raise ValidationError("parameters apply only to built-in presets")
        return json.loads(path.read_text())
    raise ValidationError(f"unknown preset {name!r}; known presets: {', '.join(sorted(PRESETS))}")


_cache: dict = {}


def load(name: str, **params) -> ModulatedGraph:
    """Validated graph for a preset name (cached) or a path to a JSON file."""
    key = (name, tuple(sorted((k, str(v)) for k, v in params.items())))
    if key not in _cache:
        _cache[key] = validate(preset_data(name, **params))
    return _cache[key]
