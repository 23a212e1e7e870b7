"""Graded vector spaces, homogeneous maps, chain complexes and Koszul signs.

Sign convention (used by every module in the package): maps act from the left
and

    (f (x) g)(x (x) y) = (-1)^(|g| |x|) f(x) (x) g(y).

Moving a homogeneous symbol of degree ``a`` past one of degree ``b`` costs
``(-1)^(a b)``.  The desuspension ``s^-1`` is treated as a symbol of degree -1,
so a map ``f`` acts on ``s^-1 M`` as ``1 (x) f``, i.e. ``f(s^-1 m) =
(-1)^|f| s^-1 f(m)``.  This recovers ``d(s^-1 c) = -s^-1 d(c)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .fields import Field
from .linalg import SparseMatrix
from .vectors import Vector, add_into, add_term


class DegreeError(ValueError):
    """Raised on degree mismatches between maps and elements."""


# --------------------------------------------------------------------- signs

def koszul_sign(degrees: Sequence[int], order: Sequence[int]) -> int:
    """Koszul sign (+1/-1) of rearranging symbols of the given degrees.

    ``order`` lists old positions in their new order.
    """
    parity = 0
    n = len(order)
    for a in range(n):
        da = degrees[order[a]]
        if not da & 1:
            continue
        oa = order[a]
        for b in range(a + 1, n):
            if order[b] < oa and degrees[order[b]] & 1:
                parity ^= 1
    return -1 if parity else 1


def tensor_map_sign(map_degrees: Sequence[int], element_degrees: Sequence[int]) -> int:
    """Sign of ``(f1 (x) ... (x) fk)(x1 (x) ... (x) xk)``.

    Each ``f_i`` passes ``x_1 ... x_{i-1}``.
    """
    parity = 0
    acc = 0
    for fd, xd in zip(map_degrees, element_degrees):
        parity ^= (fd * acc) & 1
        acc += xd
    return -1 if parity else 1


def koszul_apply(field: Field, f: "GradedMap", g: "GradedMap", x, y) -> Vector:
    """``(f (x) g)(x (x) y)`` on basis elements; result keyed by pairs."""
    dx = f.source.degree_of(x)
    sign = field.sign(g.degree * dx)
    out: Vector = {}
    fx = f.apply_basis(x)
    gy = g.apply_basis(y)
    for a, ca in fx.items():
        for b, cb in gy.items():
            add_term(field, out, (a, b), sign * ca * cb)
    return out


# ------------------------------------------------------------- word ordering

def letter_key(letter):
    if isinstance(letter, tuple):
        return word_key(letter)
    return (0, str(letter))


def word_key(word: Tuple) -> Tuple:
    """Canonical order on words: by length, then lexicographically on letters."""
    return (len(word), tuple(letter_key(a) for a in word))


def format_word(word) -> str:
    if isinstance(word, tuple):
        return "[" + "|".join(format_word(a) for a in word) + "]"
    return str(word)


# -------------------------------------------------------------------- spaces

class GradedSpace:
    """Finite-type graded vector space with named basis elements per degree."""

    def __init__(self, basis: Dict[int, Sequence[Hashable]], cutoff: Optional[int] = None):
        clean: Dict[int, List[Hashable]] = {}
        for n, names in basis.items():
            if cutoff is not None and n > cutoff:
                continue
            names = list(names)
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate basis names in degree {n}")
            if names:
                clean[n] = names
        self._basis = clean
        self.cutoff = cutoff
        self._degree_of = {name: n for n, names in clean.items() for name in names}
        self._index = {n: {name: i for i, name in enumerate(names)} for n, names in clean.items()}

    def degrees(self) -> List[int]:
        return sorted(self._basis)

    def basis(self, n: int) -> List[Hashable]:
        return list(self._basis.get(n, ()))

    def dim(self, n: int) -> int:
        return len(self._basis.get(n, ()))

    def index(self, n: int, name) -> int:
        return self._index[n][name]

    def degree_of(self, name) -> int:
        return self._degree_of[name]

    def __contains__(self, name) -> bool:
        return name in self._degree_of

    def to_coords(self, n: int, vec: Vector) -> Dict[int, object]:
        idx = self._index.get(n, {})
        return {idx[k]: c for k, c in vec.items()}

    def from_coords(self, n: int, coords: Dict[int, object]) -> Vector:
        names = self._basis.get(n, [])
        return {names[i]: c for i, c in coords.items()}

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self._basis == other._basis

    def __repr__(self) -> str:
        dims = ", ".join(f"{n}:{len(b)}" for n, b in sorted(self._basis.items()))
        return f"GradedSpace({{{dims}}})"


_SHIFT_RE = re.compile(r"^s\^(-?\d+)\((.*)\)$")


def _shift_name(name, k: int):
    if isinstance(name, str):
        m = _SHIFT_RE.match(name)
        if m:
            j = int(m.group(1)) + k
            inner = m.group(2)
            return inner if j == 0 else f"s^{j}({inner})"
    return name if k == 0 else f"s^{k}({name})"


def shift(space: GradedSpace, k: int) -> GradedSpace:
    """``s^k`` applied to ``space``: degrees move by ``k`` (``k=-1`` is desuspension)."""
    basis = {n + k: [_shift_name(x, k) for x in names] for n, names in space._basis.items()}
    cutoff = None if space.cutoff is None else space.cutoff + k
    return GradedSpace(basis, cutoff)


# ---------------------------------------------------------------------- maps

class GradedMap:
    """Degree-homogeneous linear map, given on basis elements by a function."""

    def __init__(self, source: GradedSpace, target: GradedSpace, degree: int,
                 fn: Callable[[Hashable], Vector], field: Field):
        self.source = source
        self.target = target
        self.degree = degree
        self.field = field
        self._fn = fn
        self._cache: Dict[Hashable, Vector] = {}

    @classmethod
    def from_blocks(cls, source: GradedSpace, target: GradedSpace, degree: int,
                    blocks: Dict[int, SparseMatrix], field: Field) -> "GradedMap":
        def fn(x):
            n = source.degree_of(x)
            block = blocks.get(n)
            if block is None:
                return {}
            col = block.column(source.index(n, x))
            return target.from_coords(n + degree, col)

        return cls(source, target, degree, fn, field)

    @classmethod
    def identity(cls, space: GradedSpace, field: Field) -> "GradedMap":
        return cls(space, space, 0, lambda x: {x: 1}, field)

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, degree: int, field: Field) -> "GradedMap":
        return cls(source, target, degree, lambda x: {}, field)

    def apply_basis(self, x) -> Vector:
        v = self._cache.get(x)
        if v is None:
            v = self._fn(x)
            for k in v:
                if self.target.degree_of(k) != self.source.degree_of(x) + self.degree:
                    raise DegreeError(f"{x!r} maps to {k!r} outside degree {self.degree}")
            self._cache[x] = v
        return v

    def __call__(self, vec: Vector) -> Vector:
        out: Vector = {}
        for k, c in vec.items():
            add_into(self.field, out, self.apply_basis(k), c)
        return out

    def block(self, n: int) -> SparseMatrix:
        """Matrix of the map from degree ``n`` to degree ``n + degree``."""
        src = self.source.basis(n)
        m = self.target.dim(n + self.degree)
        cols = [self.target.to_coords(n + self.degree, self.apply_basis(x)) for x in src]
        return SparseMatrix.from_columns(m, self.field, cols)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """``self o other``."""
        return GradedMap(other.source, self.target, self.degree + other.degree,
                         lambda x: self(other.apply_basis(x)), self.field)

    def __repr__(self) -> str:
        return f"GradedMap(degree={self.degree})"


# ------------------------------------------------------------------ complexes

@dataclass
class ComplexReport:
    ok: bool
    checked_up_to: int
    first_failure: Optional[Tuple[int, Hashable]] = None
    residual: Optional[Vector] = None

    def __bool__(self) -> bool:
        return self.ok


class ChainComplex:
    """Graded space with a degree -1 differential."""

    def __init__(self, space: GradedSpace, differential: GradedMap):
        if differential.degree != -1:
            raise DegreeError("differential must have degree -1")
        self.space = space
        self.differential = differential
        self.field = differential.field

    def d_matrix(self, n: int) -> SparseMatrix:
        return self.differential.block(n)

    def homology(self, n: int):
        from .linalg import homology
        return homology(self.d_matrix(n + 1), self.d_matrix(n))


def validate_complex(c: ChainComplex, cutoff: int) -> ComplexReport:
    """Check ``d o d = 0`` on every basis element of degree ``<= cutoff``."""
    d = c.differential
    for n in c.space.degrees():
        if n > cutoff:
            break
        for x in c.space.basis(n):
            r = d(d.apply_basis(x))
            if r:
                return ComplexReport(False, cutoff, (n, x), r)
    return ComplexReport(True, cutoff)
