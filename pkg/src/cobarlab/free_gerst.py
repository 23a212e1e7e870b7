"""Free (restricted) Gerstenhaber and canonical BV models on a graded space ``W``.

The degree-one Lie algebra ``L_1(W)`` is realised as ``s^-1 L(sW)`` where
``L(sW)`` is the free Lie (super)algebra inside the tensor algebra ``T(sW)``
with the graded commutator.  A basis is given by elementary products (Hall-type
bracket trees), together with

* ``[h;h]`` for elementary products ``h`` whose suspension is odd (over Q),
* the restriction iterates ``xi^k(h)`` realised as ``h^(2^k)`` (over F2).

``[s^-1 a; s^-1 b]_1 = s^-1 [a, b]`` and ``xi_1(s^-1 a) = s^-1 a^2``.  The model
itself is the graded symmetric algebra ``S(L_1(W))`` (polynomial over F2) with
the bracket extended by the Poisson rule

    [a; bc] = [a;b] c + (-1)^((|a|+1)|b|) b [a;c],

the restriction extended by ``xi(xy) = x^2 xi(y) + xi(x) y^2 + x [x;y] y`` and
``xi(x + y) = xi(x) + [x;y] + xi(y)``, and over Q the canonical BV operator
with ``Delta = 0`` on ``L_1(W)`` and

    Delta(xy) = Delta(x) y + (-1)^|x| x Delta(y) + (-1)^|x| [x;y].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .fields import Field, Q
from .graded import koszul_sign
from .linalg import ColumnSpaceSolver, SparseMatrix
from .vectors import Vector, add_into, add_term


class FreeModelError(ValueError):
    """Raised when the free model is queried outside its scope."""


# ---------------------------------------------------------------- Lie basis

@dataclass(frozen=True)
class ElementaryProduct:
    """A bracket tree over ordered generators (a leaf when ``left`` is ``None``)."""

    key: str
    degree: int            # degree in L_1(W): leaf degrees plus one per bracket
    weight: int
    left: Optional["ElementaryProduct"] = None
    right: Optional["ElementaryProduct"] = None
    rank: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def suspended_parity(self) -> int:
        """Parity in ``sW`` grading, where the bracket has degree 0."""
        return (self.degree + 1) & 1


def _ordered_generators(W: Mapping[str, int]) -> List[Tuple[str, int]]:
    return sorted(W.items(), key=lambda kv: (kv[1], kv[0]))


def elementary_products(W: Mapping[str, int], max_degree: int) -> List[ElementaryProduct]:
    """Admissible trees ``[x;y]`` with ``x < y`` and, if ``y = [z;t]``, ``z <= x``.

    Generators are ordered by degree then name; products are ranked by weight
    and then by creation order, so every product ranks above its factors.
    """
    out: List[ElementaryProduct] = []
    by_weight: Dict[int, List[ElementaryProduct]] = {1: []}
    for name, deg in _ordered_generators(W):
        if deg < 1:
            raise FreeModelError(f"generator {name!r} must have degree >= 1")
        if deg <= max_degree:
            e = ElementaryProduct(name, deg, 1, rank=len(out))
            out.append(e)
            by_weight[1].append(e)
    # a product of weight w has degree >= 2w - 1
    for w in range(2, (max_degree + 1) // 2 + 1):
        level: List[ElementaryProduct] = []
        for wx in range(1, w):
            for x in by_weight.get(wx, ()):
                for y in by_weight.get(w - wx, ()):
                    if x.rank >= y.rank:
                        continue
                    if not y.is_leaf and y.left.rank > x.rank:
                        continue
                    deg = x.degree + y.degree + 1
                    if deg <= max_degree:
                        level.append(ElementaryProduct(f"[{x.key};{y.key}]", deg, w, x, y, rank=len(out) + len(level)))
        out.extend(level)
        by_weight[w] = level
    return out


@dataclass(frozen=True)
class LieBasisElement:
    key: str
    degree: int              # in L_1(W)
    kind: str                # "product", "square" (Q) or "xi" (F2)
    base: str                # underlying elementary product
    power: int = 1           # xi iterates are h^power in T(sW)


def lie_basis(W: Mapping[str, int], field: Field, max_degree: int) -> List[LieBasisElement]:
    """Basis of ``L_1(W)`` (``L_1r(W)`` over F2) up to ``max_degree``."""
    out = []
    for e in elementary_products(W, max_degree):
        out.append(LieBasisElement(e.key, e.degree, "product", e.key))
        if field.characteristic == 2:
            k, deg = 1, 2 * e.degree + 1
            key = e.key
            while deg <= max_degree:
                key = f"xi({key})"
                out.append(LieBasisElement(key, deg, "xi", e.key, 2 ** k))
                k, deg = k + 1, 2 * deg + 1
        elif e.suspended_parity == 1 and 2 * e.degree + 1 <= max_degree:
            out.append(LieBasisElement(f"[{e.key};{e.key}]", 2 * e.degree + 1, "square", e.key, 2))
    return out


# ------------------------------------------------------------ power series

def _series_mul(a: List[int], b: List[int], n: int) -> List[int]:
    out = [0] * (n + 1)
    for i, x in enumerate(a[:n + 1]):
        if x:
            for j, y in enumerate(b[:n + 1 - i]):
                out[i + j] += x * y
    return out


def _factor(n: int, exponent: int, polynomial: bool, top: int) -> List[int]:
    """``(1 - t^n)^-exponent`` if ``polynomial`` else ``(1 + t^n)^exponent``, up to ``t^top``."""
    from math import comb

    out = [0] * (top + 1)
    if exponent == 0:
        out[0] = 1
        return out
    for j in range(top // n + 1):
        c = comb(exponent + j - 1, j) if polynomial else comb(exponent, j)
        out[j * n] = c
    return out


def pbw_lie_dimensions(W: Mapping[str, int], field: Field, top: int) -> List[int]:
    """Dimensions ``c_n`` of the free Lie algebra on ``sW`` by inverting the PBW product.

    Solves ``prod_n (1-t^n)^(-c_n even) (1+t^n)^(c_n odd) = 1/(1 - P_sW(t))``; over F2
    every factor is treated as polynomial.
    """
    p = [0] * (top + 1)
    for _, d in W.items():
        if d + 1 <= top:
            p[d + 1] += 1
    target = [0] * (top + 1)
    target[0] = 1
    for n in range(1, top + 1):
        target[n] = sum(p[k] * target[n - k] for k in range(1, n + 1))
    c = [0] * (top + 1)
    acc = [1] + [0] * top
    for n in range(1, top + 1):
        c[n] = target[n] - acc[n]
        if c[n] < 0:
            raise FreeModelError("PBW inversion produced a negative dimension")
        poly = field.characteristic == 2 or n % 2 == 0
        acc = _series_mul(acc, _factor(n, c[n], poly, top), top)
    return c


def hilbert_series_pbw(W: Mapping[str, int], field: Field, top: int) -> List[int]:
    """Series of ``S(L_1(W))`` (``S(L_1r(W))`` over F2) from PBW inversion alone."""
    c = pbw_lie_dimensions(W, field, top + 1)
    acc = [1] + [0] * top
    for n in range(2, top + 2):
        m = n - 1           # degree in L_1
        if not c[n]:
            continue
        if field.characteristic == 2:
            deg = m
            while deg <= top:
                acc = _series_mul(acc, _factor(deg, c[n], True, top), top)
                deg = 2 * deg + 1
        else:
            acc = _series_mul(acc, _factor(m, c[n], m % 2 == 0, top), top)
    return acc


def hilbert_series_direct(basis: Sequence[LieBasisElement], field: Field, top: int) -> List[int]:
    """Count monomials in the enumerated Lie basis (polynomial/exterior by parity)."""
    acc = [1] + [0] * top
    for e in basis:
        if e.degree > top:
            continue
        poly = field.characteristic == 2 or e.degree % 2 == 0
        acc = _series_mul(acc, _factor(e.degree, 1, poly, top), top)
    return acc


def hilbert_series(W: Mapping[str, int], field: Field, top: int) -> Tuple[List[int], List[int]]:
    """Both series; raises :class:`FreeModelError` if they disagree."""
    direct = hilbert_series_direct(lie_basis(W, field, top), field, top)
    pbw = hilbert_series_pbw(W, field, top)
    if direct != pbw:
        raise FreeModelError(f"Hilbert series disagree: {direct} vs {pbw}")
    return direct, pbw


# ---------------------------------------------------------------- the model

Monomial = Tuple[str, ...]


class FreeModel:
    """``S(L_1(W))`` with product, bracket, restriction (F2) and canonical Delta (Q)."""

    def __init__(self, W: Mapping[str, int], field: Field = Q, max_degree: int = 8):
        self.W = dict(W)
        self.field = field
        self.max_degree = max_degree
        self.lie = lie_basis(W, field, max_degree)
        self._elem = {e.key: e for e in self.lie}
        self._rank = {e.key: i for i, e in enumerate(sorted(self.lie, key=lambda e: e.degree))}
        self._products = {e.key: e for e in elementary_products(W, max_degree)}
        self._poly_cache: Dict[str, Vector] = {}
        self._solvers: Dict[int, Tuple[ColumnSpaceSolver, Dict[tuple, int], List[str]]] = {}
        self._br_cache: Dict[Tuple[Monomial, Monomial], Vector] = {}
        self._monomials: Dict[int, List[Monomial]] = {}

    # -- degrees and order
    def degree(self, m: Monomial) -> int:
        return sum(self._elem[k].degree for k in m)

    def _sort_key(self, k: str):
        return self._rank[k]

    @property
    def sign_free(self) -> bool:
        return self.field.characteristic == 2

    def generators(self) -> List[Monomial]:
        return [(name,) for name, _ in _ordered_generators(self.W) if name in self._elem]

    def monomials(self, n: int) -> List[Monomial]:
        """Basis of the model in degree ``n``."""
        if n in self._monomials:
            return list(self._monomials[n])
        elems = sorted(self.lie, key=lambda e: self._rank[e.key])
        out: List[Monomial] = []

        def rec(start: int, remaining: int, acc: List[str]):
            if remaining == 0:
                out.append(tuple(acc))
                return
            for j in range(start, len(elems)):
                e = elems[j]
                if e.degree > remaining:
                    continue
                repeat = self.sign_free or e.degree % 2 == 0
                acc.append(e.key)
                rec(j if repeat else j + 1, remaining - e.degree, acc)
                acc.pop()

        rec(0, n, [])
        self._monomials[n] = out
        return list(out)

    def dims(self, top: int) -> List[int]:
        return [len(self.monomials(n)) for n in range(top + 1)]

    # -- tensor algebra realisation
    def _tensor_degree(self, word: tuple) -> int:
        return sum(self.W[g] + 1 for g in word)

    def polynomial(self, key: str) -> Vector:
        """The element of ``T(sW)`` realising the Lie basis element ``key``."""
        v = self._poly_cache.get(key)
        if v is not None:
            return v
        f = self.field
        e = self._elem.get(key)
        if e is not None and e.kind == "square":
            base = self.polynomial(e.base)
            v = self._tbracket(base, base)
        elif e is not None and e.kind == "xi":
            base = self.polynomial(e.base)
            v = {(): 1}
            for _ in range(e.power):
                v = self._tmul(v, base)
        else:
            p = self._products[key]
            if p.is_leaf:
                v = {(key,): 1}
            else:
                v = self._tbracket(self.polynomial(p.left.key), self.polynomial(p.right.key))
        self._poly_cache[key] = v
        return v

    def _tmul(self, a: Vector, b: Vector) -> Vector:
        out: Vector = {}
        for x, cx in a.items():
            for y, cy in b.items():
                add_term(self.field, out, x + y, cx * cy)
        return out

    def _tbracket(self, a: Vector, b: Vector) -> Vector:
        f = self.field
        out = self._tmul(a, b)
        da = self._tensor_degree(next(iter(a))) if a else 0
        db = self._tensor_degree(next(iter(b))) if b else 0
        add_into(f, out, self._tmul(b, a), -f.sign(da * db))
        return out

    def _solver(self, n: int):
        """Coordinates in the Lie basis of L_1-degree ``n``."""
        if n not in self._solvers:
            keys = [e.key for e in self.lie if e.degree == n]
            index: Dict[tuple, int] = {}
            cols = []
            for k in keys:
                col = {}
                for w, c in self.polynomial(k).items():
                    col[index.setdefault(w, len(index))] = c
                cols.append(col)
            m = SparseMatrix.from_columns(len(index), self.field, cols)
            solver = ColumnSpaceSolver(m)
            if solver.rank != len(keys):
                raise FreeModelError(f"Lie basis is dependent in degree {n}")
            self._solvers[n] = (solver, index, keys)
        return self._solvers[n]

    def lie_coordinates(self, poly: Vector, n: int) -> Vector:
        """Express a Lie polynomial of L_1-degree ``n`` in the Lie basis (as one-letter monomials)."""
        if not poly:
            return {}
        solver, index, keys = self._solver(n)
        b = {}
        for w, c in poly.items():
            if w not in index:
                raise FreeModelError("element is not in the span of the Lie basis")
            b[index[w]] = c
        x = solver.solve(b)
        if x is None:
            raise FreeModelError("element is not in the span of the Lie basis")
        return {(keys[j],): c for j, c in x.items()}

    def lie_bracket(self, a: str, b: str) -> Vector:
        n = self._elem[a].degree + self._elem[b].degree + 1
        if n > self.max_degree:
            return {}
        return self.lie_coordinates(self._tbracket(self.polynomial(a), self.polynomial(b)), n)

    # -- algebra structure
    def multiply_basis(self, x: Monomial, y: Monomial) -> Vector:
        if self.degree(x) + self.degree(y) > self.max_degree:
            return {}
        word = x + y
        order = sorted(range(len(word)), key=lambda j: (self._sort_key(word[j]), j))
        new = tuple(word[j] for j in order)
        if self.sign_free:
            return {new: 1}
        for a, b in zip(new, new[1:]):
            if a == b and self._elem[a].degree % 2:
                return {}
        degs = [self._elem[k].degree for k in word]
        return {new: koszul_sign(degs, order)}

    def multiply(self, a: Vector, b: Vector) -> Vector:
        out: Vector = {}
        for x, cx in a.items():
            for y, cy in b.items():
                add_into(self.field, out, self.multiply_basis(x, y), cx * cy)
        return out

    def _bilinear(self, fn, a: Vector, b: Vector) -> Vector:
        out: Vector = {}
        for x, cx in a.items():
            for y, cy in b.items():
                add_into(self.field, out, fn(x, y), cx * cy)
        return out

    def bracket_basis(self, x: Monomial, y: Monomial) -> Vector:
        """``[x;y]_1`` on monomials via the Poisson rule in each argument."""
        key = (x, y)
        v = self._br_cache.get(key)
        if v is not None:
            return v
        f = self.field
        if not x or not y or self.degree(x) + self.degree(y) + 1 > self.max_degree:
            v = {}
        elif len(y) >= 2:
            head, rest = (y[0],), y[1:]
            v = self.multiply(self.bracket_basis(x, head), {rest: 1})
            s = f.sign((self.degree(x) + 1) * self.degree(head))
            add_into(f, v, self.multiply({head: 1}, self.bracket_basis(x, rest)), s)
        elif len(x) >= 2:
            s = -f.sign((self.degree(x) + 1) * (self.degree(y) + 1))
            v = {k: s * c for k, c in self.bracket_basis(y, x).items()}
        else:
            v = self.lie_bracket(x[0], y[0])
        self._br_cache[key] = v
        return v

    def bracket(self, a: Vector, b: Vector) -> Vector:
        return self._bilinear(self.bracket_basis, a, b)

    # -- restriction (F2)
    def xi_basis(self, x: Monomial) -> Vector:
        if not self.sign_free:
            raise FreeModelError("the restriction is defined over F2 only")
        if not x or 2 * self.degree(x) + 1 > self.max_degree:
            return {}
        if len(x) == 1:
            n = 2 * self.degree(x) + 1
            poly = self._tmul(self.polynomial(x[0]), self.polynomial(x[0]))
            return self.lie_coordinates(poly, n)
        a, b = {(x[0],): 1}, {x[1:]: 1}
        out = self.multiply(self.multiply(a, a), self.xi_basis(x[1:]))
        add_into(self.field, out, self.multiply(self.xi_basis((x[0],)), self.multiply(b, b)))
        add_into(self.field, out, self.multiply(self.multiply(a, self.bracket(a, b)), b))
        return out

    def xi(self, v: Vector) -> Vector:
        """Restriction on a vector: ``xi(x + y) = xi(x) + [x;y] + xi(y)``."""
        out: Vector = {}
        terms = [k for k, c in v.items() if self.field.reduce(c)]
        for i, x in enumerate(terms):
            add_into(self.field, out, self.xi_basis(x))
            for y in terms[i + 1:]:
                add_into(self.field, out, self.bracket_basis(x, y))
        return out

    # -- canonical BV operator (Q)
    def delta_basis(self, x: Monomial) -> Vector:
        if self.sign_free:
            raise FreeModelError("the canonical BV operator is built over Q")
        if len(x) <= 1:
            return {}
        f = self.field
        head, rest = (x[0],), x[1:]
        s = f.sign(self.degree(head))
        out = {k: s * c for k, c in self.multiply({head: 1}, self.delta_basis(rest)).items()}
        add_into(f, out, self.bracket_basis(head, rest), s)
        return out

    def delta(self, v: Vector) -> Vector:
        out: Vector = {}
        for k, c in v.items():
            add_into(self.field, out, self.delta_basis(k), c)
        return out


def canonical_bv(model: FreeModel, max_degree: Optional[int] = None) -> Dict[Monomial, Vector]:
    """Table of the canonical ``Delta`` on all monomials; checks ``Delta^2 = 0``."""
    top = model.max_degree if max_degree is None else max_degree
    table: Dict[Monomial, Vector] = {}
    for n in range(top + 1):
        for m in model.monomials(n):
            table[m] = model.delta_basis(m)
            if model.delta(table[m]):
                raise FreeModelError(f"Delta^2 != 0 on {m}")
    return table


def free_model(W: Mapping[str, int], field: Field = Q, max_degree: int = 8) -> FreeModel:
    return FreeModel(W, field, max_degree)
