"""Sparse vectors as ``dict`` mapping basis keys to nonzero scalars.

Every function takes the field explicitly; zero coefficients are never stored.
"""

from __future__ import annotations

from typing import Callable, Dict, Hashable, Iterable, Tuple

from .fields import Field, Scalar

Vector = Dict[Hashable, Scalar]


def add_term(field: Field, vec: Vector, key, coeff: Scalar) -> None:
    c = field.reduce(vec.get(key, 0) + coeff)
    if c:
        vec[key] = c
    else:
        vec.pop(key, None)


def add_into(field: Field, vec: Vector, other: Vector, scale: Scalar = 1) -> None:
    if scale == 1:
        for k, c in other.items():
            add_term(field, vec, k, c)
    else:
        for k, c in other.items():
            add_term(field, vec, k, c * scale)


def scaled(field: Field, vec: Vector, scale: Scalar) -> Vector:
    scale = field.reduce(scale)
    if not scale:
        return {}
    out = {}
    for k, c in vec.items():
        c2 = field.reduce(c * scale)
        if c2:
            out[k] = c2
    return out


def combine(field: Field, terms: Iterable[Tuple[Hashable, Scalar]]) -> Vector:
    out: Vector = {}
    for k, c in terms:
        add_term(field, out, k, c)
    return out


def subtract(field: Field, a: Vector, b: Vector) -> Vector:
    out = dict(a)
    add_into(field, out, b, -1)
    return out


def apply_linear(field: Field, fn: Callable[[Hashable], Vector], vec: Vector) -> Vector:
    """Extend ``fn`` (defined on basis keys) linearly to ``vec``."""
    out: Vector = {}
    for k, c in vec.items():
        add_into(field, out, fn(k), c)
    return out


def apply_bilinear(field: Field, fn, a: Vector, b: Vector) -> Vector:
    out: Vector = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            add_into(field, out, fn(ka, kb), ca * cb)
    return out
