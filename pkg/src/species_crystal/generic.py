"""Generic extensions, socle quotients and head submodules by seeded resampling.

A "generic" choice is certified by drawing several independent random
choices and requiring their results to be isomorphic.  If the first batch
disagrees, a larger batch is drawn; the class with the smallest
endomorphism ring (the most generic one) is accepted only when it holds a
strict majority, otherwise ``GenericityError`` is raised.
"""

from __future__ import annotations

import random
from typing import Callable

import numpy as np

from . import linalg as la
from .errors import GenericityError, RepresentationError
from .homology import assemble_extension, ext1_space, hom_space, is_isomorphic
from .reps import (Representation, complement_frame, direct_sum, free_frame, head_image, quotient,
                   socle_space, subrepresentation)

SAMPLES = 3
ESCALATED_SAMPLES = 7
COEFF_BOUND = 1000


def _certify(draw: Callable[[random.Random], Representation], seed: int, samples: int, escalated: int,
             what: str) -> Representation:
    rng = random.Random(seed)
    results = [draw(rng) for _ in range(samples)]
    first = results[0]
    if all(is_isomorphic(first, r, seed=seed + k) for k, r in enumerate(results[1:], 1)):
        return first
    results += [draw(rng) for _ in range(max(escalated - samples, 0))]
    classes: list[list[Representation]] = []
    for r in results:
        for cls in classes:
            if is_isomorphic(cls[0], r, seed=seed):
                cls.append(r)
                break
        else:
            classes.append([r])
    best = min(classes, key=lambda c: hom_space(c[0], c[0]).dim)
    if 2 * len(best) > len(results):
        return best[0]
    raise GenericityError(f"genericity undetermined for {what}: {len(classes)} isomorphism classes "
                          f"among {len(results)} samples")


def generic_extension(quotient: Representation, sub: Representation, seed: int = 0,
                      samples: int = SAMPLES, escalated: int = ESCALATED_SAMPLES) -> Representation:
    """A generic extension ``0 -> sub -> E -> quotient -> 0``."""
    ext = ext1_space(quotient, sub)
    if ext.dim == 0:
        return direct_sum(sub, quotient)

    def draw(rng):
        return assemble_extension(ext, ext.random_class(rng, COEFF_BOUND))

    return _certify(draw, seed, samples, escalated, "extension")


def _random_vector(basis: np.ndarray, rng: random.Random, F) -> np.ndarray:
    coeffs = np.array([F.random(rng, COEFF_BOUND) for _ in range(basis.shape[1])], dtype=object)
    v = basis.dot(coeffs)
    while not any(bool(x) for x in v):
        coeffs = np.array([F.random(rng, COEFF_BOUND) for _ in range(basis.shape[1])], dtype=object)
        v = basis.dot(coeffs)
    return v


def socle_line_quotient(rep: Representation, i: int, rng: random.Random) -> Representation:
    """Quotient by a random F_i-line in the i-socle."""
    F = rep.F
    g = rep.graph
    K = socle_space(rep, i)
    w = _random_vector(K, rng, F)
    frames = {j: la.zeros(rep.base_dim(j), 0, F) for j in range(g.n)}
    frames[i] = free_frame(rep, i, [w])
    return quotient(rep, frames)


def head_hyperplane_submodule(rep: Representation, i: int, rng: random.Random) -> Representation:
    """Submodule: a random F_i-hyperplane of V_i containing im ix~, plus every V_j with j != i."""
    F = rep.F
    g = rep.graph
    img = head_image(rep, i)
    comp = complement_frame(rep, i, img)
    d = g.degree(i)
    q = comp.shape[1] // d
    last = comp[:, (q - 1) * d:(q - 1) * d + d]  # G^s u_q
    vectors = [img[:, c] for c in range(0, img.shape[1])]
    for t in range(q - 1):
        u = comp[:, t * d]
        a = np.array([F.random(rng, COEFF_BOUND) for _ in range(d)], dtype=object)
        vectors.append(u + last.dot(a))
    frames = {j: la.identity(rep.base_dim(j), F) for j in range(g.n)}
    frames[i] = free_frame(rep, i, vectors)
    return subrepresentation(rep, frames)


def generic_socle_quotient(rep: Representation, i: int, seed: int = 0, samples: int = SAMPLES,
                           escalated: int = ESCALATED_SAMPLES) -> Representation:
    if rep.phi(i) == 0:
        raise RepresentationError(f"no socle at vertex {rep.graph.names[i]}")
    if rep.phi(i) == 1:
        return socle_line_quotient(rep, i, random.Random(seed))
    return _certify(lambda rng: socle_line_quotient(rep, i, rng), seed, samples, escalated, "socle quotient")


def generic_head_submodule(rep: Representation, i: int, seed: int = 0, samples: int = SAMPLES,
                           escalated: int = ESCALATED_SAMPLES) -> Representation:
    if rep.phi_star(i) == 0:
        raise RepresentationError(f"no head at vertex {rep.graph.names[i]}")
    if rep.phi_star(i) == 1:
        return head_hyperplane_submodule(rep, i, random.Random(seed))
    return _certify(lambda rng: head_hyperplane_submodule(rep, i, rng), seed, samples, escalated,
                    "head submodule")
