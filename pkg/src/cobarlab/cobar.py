"""The cobar construction, its shuffle Hopf structure, and the double cobar.

A basis word of ``Omega C`` is a tuple of generators of ``C+``; the letter
``g`` stands for ``s^-1 g`` and has degree ``|g| - 1``.  The empty tuple is the
unit.  Words of ``Omega^2 C`` are tuples whose letters are nonempty words of
``Omega C``, so generator names are namespaced by construction level.

Complexity note: with every letter in degree >= 1 a word of degree ``n`` has at
most ``n`` letters (at most ``n/2`` when letters sit in degree >= 2, as for
double suspensions), so each degree has finitely many words.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Dict, Hashable, List, Optional, Tuple

from .fields import Field
from .graded import ChainComplex, GradedMap, GradedSpace, word_key
from .linalg import Homology, SparseMatrix, homology
from .vectors import Vector, add_into, add_term

Word = Tuple


class CobarError(ValueError):
    """Invalid input to a cobar construction."""


class NotReducedError(CobarError):
    """The coalgebra does not carry the reduced (shuffle) Hopf structure."""


class CobarAlgebra:
    """``Omega C = T(s^-1 C+)`` truncated at total degree ``max_degree``.

    ``coalgebra`` is anything with ``field``, ``generators(n)``, ``degree(g)``,
    ``differential(g)`` and ``reduced_coproduct(g)``; a :class:`CobarAlgebra`
    itself qualifies (through its words), which is how ``Omega^2`` is built.
    """

    def __init__(self, coalgebra, max_degree: int, level: int = 1):
        if max_degree < 2:
            raise CobarError("cutoff must be at least 2")
        self.coalgebra = coalgebra
        self.field: Field = coalgebra.field
        self.max_degree = max_degree
        self.level = level
        self._letters_by_degree: Dict[int, List[Hashable]] = {}
        for n in range(1, max_degree + 1):
            gens = coalgebra.generators(n + 1)
            if gens:
                self._letters_by_degree[n] = list(gens)
        if coalgebra.generators(1):
            raise CobarError("coalgebra is not 1-connected (C_1 != 0)")
        self._basis: Dict[int, List[Word]] = {}
        self._d_cache: Dict[Word, Vector] = {}
        self._cop_cache: Dict[Word, Vector] = {}
        self._iter_cache: Dict[Tuple[Word, int], Vector] = {}

    # ----------------------------------------------------------- basis
    def letter_degree(self, g) -> int:
        return self.coalgebra.degree(g) - 1

    def degree(self, word: Word) -> int:
        return sum(self.coalgebra.degree(g) - 1 for g in word)

    def letters(self, n: int) -> List[Hashable]:
        return list(self._letters_by_degree.get(n, ()))

    def basis(self, n: int) -> List[Word]:
        """Words of total degree ``n`` in canonical order."""
        if n < 0 or n > self.max_degree:
            return []
        if n not in self._basis:
            if n == 0:
                words = [()]
            else:
                words = []
                for k in range(1, n + 1):
                    for g in self._letters_by_degree.get(k, ()):
                        for rest in self.basis(n - k):
                            words.append((g,) + rest)
            self._basis[n] = sorted(words, key=word_key)
        return list(self._basis[n])

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    @property
    def space(self) -> GradedSpace:
        return GradedSpace({n: self.basis(n) for n in range(self.max_degree + 1)}, self.max_degree)

    # ---------------------------------------------------- differential
    def letter_differential(self, g) -> Vector:
        """``d(s^-1 c) = -s^-1 d(c) + (s^-1 (x) s^-1) nabla+(c)``."""
        f = self.field
        out: Vector = {}
        for k, c in self.coalgebra.differential(g).items():
            add_term(f, out, (k,), -c)
        for (a, b), c in self.coalgebra.reduced_coproduct(g).items():
            add_term(f, out, (a, b), f.sign(self.coalgebra.degree(a)) * c)
        return out

    def differential(self, word: Word) -> Vector:
        """The cobar differential, extended to words as a derivation."""
        v = self._d_cache.get(word)
        if v is not None:
            return v
        f = self.field
        out: Vector = {}
        acc = 0
        for i, g in enumerate(word):
            s = f.sign(acc)
            left, right = word[:i], word[i + 1:]
            for mid, c in self.letter_differential(g).items():
                add_term(f, out, left + mid + right, s * c)
            acc += self.letter_degree(g)
        self._d_cache[word] = out
        return out

    def d(self, vec: Vector) -> Vector:
        out: Vector = {}
        for w, c in vec.items():
            add_into(self.field, out, self.differential(w), c)
        return out

    def d_matrix(self, n: int) -> SparseMatrix:
        """Matrix of ``d: (Omega C)_n -> (Omega C)_{n-1}``."""
        src = self.basis(n)
        tgt = self.basis(n - 1)
        index = {w: i for i, w in enumerate(tgt)}
        cols = [{index[k]: c for k, c in self.differential(w).items()} for w in src]
        return SparseMatrix.from_columns(len(tgt), self.field, cols)

    def chain_complex(self) -> ChainComplex:
        sp = self.space
        return ChainComplex(sp, GradedMap(sp, sp, -1, self.differential, self.field))

    def homology(self, n: int) -> Homology:
        """Homology in degree ``n``; needs ``n + 1 <= max_degree``."""
        if n + 1 > self.max_degree:
            raise CobarError(f"homology in degree {n} needs cutoff >= {n + 1}")
        return homology(self.d_matrix(n + 1), self.d_matrix(n))

    def homology_dims(self, up_to: Optional[int] = None) -> List[int]:
        top = self.max_degree - 1 if up_to is None else up_to
        return [self.homology(n).dimension for n in range(top + 1)]

    # --------------------------------------------------- product
    def multiply(self, a: Vector, b: Vector) -> Vector:
        out: Vector = {}
        f = self.field
        for x, cx in a.items():
            for y, cy in b.items():
                w = x + y
                if self.degree(w) <= self.max_degree:
                    add_term(f, out, w, cx * cy)
        return out

    # ------------------------------------------------ Hopf structure
    def _letter_parities(self, word: Word) -> List[int]:
        return [self.letter_degree(g) & 1 for g in word]

    def coproduct(self, word: Word) -> Vector:
        """Shuffle coproduct ``nabla_0``: letters are primitive, extended multiplicatively."""
        v = self._cop_cache.get(word)
        if v is not None:
            return v
        v = self._distribute(word, 2)
        self._cop_cache[word] = v
        return v

    def reduced_coproduct(self, word: Word) -> Vector:
        """``nabla_0(w) - w (x) 1 - 1 (x) w`` for a nonempty word."""
        return {k: c for k, c in self.coproduct(word).items() if k[0] and k[1]}

    def iterated_coproduct(self, word: Word, m: int) -> Vector:
        """``nabla_0^(m)``: sum over ways to deal the letters into ``m`` ordered slots."""
        key = (word, m)
        v = self._iter_cache.get(key)
        if v is None:
            v = self._distribute(word, m)
            self._iter_cache[key] = v
        return v

    def _distribute(self, word: Word, m: int) -> Vector:
        f = self.field
        par = self._letter_parities(word)
        n = len(word)
        out: Vector = {}
        if m == 0:
            return {(): 1} if not word else {}
        for slots in itertools.product(range(m), repeat=n):
            parity = 0
            for i in range(n):
                if not par[i]:
                    continue
                si = slots[i]
                for j in range(i + 1, n):
                    if par[j] and slots[j] < si:
                        parity ^= 1
            parts = [[] for _ in range(m)]
            for g, s in zip(word, slots):
                parts[s].append(g)
            add_term(f, out, tuple(tuple(p) for p in parts), -1 if parity else 1)
        return out

    def antipode(self, word: Word) -> Vector:
        """``S(a) = -a`` on letters, extended as a graded anti-automorphism."""
        par = self._letter_parities(word)
        parity = len(word)
        for i in range(len(word)):
            if par[i]:
                for j in range(i + 1, len(word)):
                    parity += par[j]
        return {tuple(reversed(word)): self.field.sign(parity)}

    def counit(self, word: Word):
        return 1 if not word else 0

    # ------------------------------------- coalgebra interface (next level)
    def generators(self, n: int) -> List[Word]:
        return self.basis(n) if n >= 1 else []

    def is_reduced_compatible(self) -> Optional[Hashable]:
        """First generator on which a zero cocommutativity homotopy fails, else ``None``.

        The shuffle coproduct is a chain map iff ``nabla+ + tau nabla+`` vanishes
        after desuspension on every generator.
        """
        f = self.field
        for n in sorted(self._letters_by_degree):
            for g in self._letters_by_degree[n]:
                quad = {k: c for k, c in self.letter_differential(g).items() if len(k) == 2}
                acc: Vector = {}
                for (a, b), c in quad.items():
                    add_term(f, acc, ((a,), (b,)), c)
                    s = f.sign(self.letter_degree(a) * self.letter_degree(b))
                    add_term(f, acc, ((b,), (a,)), s * c)
                if acc:
                    return g
        return None

    def __repr__(self) -> str:
        return f"CobarAlgebra(level={self.level}, field={self.field}, max_degree={self.max_degree})"


def cobar(c, max_degree: int, level: int = 1) -> CobarAlgebra:
    """``Omega C`` up to total degree ``max_degree``."""
    return CobarAlgebra(c, max_degree, level)


def coproduct_nabla0(a: CobarAlgebra):
    """The shuffle coproduct of ``a`` as a function on words.

    Raises :class:`NotReducedError` when the coalgebra's reduced coproduct is not
    graded anti-cocommutative after desuspension, i.e. when no reduced homotopy
    G-coalgebra structure exists with ``nabla_1 = 0``.
    """
    bad = a.is_reduced_compatible()
    if bad is not None:
        raise NotReducedError(f"shuffle coproduct is not a chain map at generator {bad!r}")
    return a.coproduct


def antipode(a: CobarAlgebra):
    """The antipode as a degree-0 :class:`GradedMap` plus a report on ``S o S = Id``."""
    sp = a.space
    s_map = GradedMap(sp, sp, 0, a.antipode, a.field)
    failures = []
    for n in range(a.max_degree + 1):
        for w in a.basis(n):
            ss: Vector = {}
            for x, c in a.antipode(w).items():
                add_into(a.field, ss, a.antipode(x), c)
            if ss != {w: 1}:
                failures.append(w)
    return s_map, {"involutive": not failures, "failures": failures[:5]}


def double_cobar(c, max_degree: int) -> CobarAlgebra:
    """``Omega^2 C = Omega(Omega C, nabla_0)`` up to total degree ``max_degree``."""
    if c.generators(2):
        raise CobarError("double cobar needs C_2 = 0 so that Omega C is 1-connected")
    inner = CobarAlgebra(c, max_degree + 1, level=1)
    coproduct_nabla0(inner)
    return CobarAlgebra(inner, max_degree, level=2)


# ------------------------------------------------------- bialgebra axioms

def tensor_multiply(a: CobarAlgebra, x: Vector, y: Vector) -> Vector:
    """Product in ``Omega (x) Omega``: ``(p (x) q)(p' (x) q') = (-1)^(|q||p'|) pp' (x) qq'``."""
    f = a.field
    out: Vector = {}
    for (p, q), cx in x.items():
        dq = a.degree(q)
        for (p2, q2), cy in y.items():
            if a.degree(p) + dq + a.degree(p2) + a.degree(q2) > a.max_degree:
                continue
            add_term(f, out, (p + p2, q + q2), f.sign(dq * a.degree(p2)) * cx * cy)
    return out


def tensor_differential(a: CobarAlgebra, x: Vector) -> Vector:
    """``(d (x) 1 + 1 (x) d)`` on ``Omega (x) Omega``."""
    f = a.field
    out: Vector = {}
    for (p, q), c in x.items():
        for k, v in a.differential(p).items():
            add_term(f, out, (k, q), c * v)
        s = f.sign(a.degree(p))
        for k, v in a.differential(q).items():
            add_term(f, out, (p, k), s * c * v)
    return out


def _apply_left(a: CobarAlgebra, cop, x: Vector) -> Vector:
    out: Vector = {}
    for (p, q), c in x.items():
        for (u, v), e in cop(p).items():
            add_term(a.field, out, (u, v, q), c * e)
    return out


def _apply_right(a: CobarAlgebra, cop, x: Vector) -> Vector:
    out: Vector = {}
    for (p, q), c in x.items():
        for (u, v), e in cop(q).items():
            add_term(a.field, out, (p, u, v), c * e)
    return out


def recursive_antipode(a: CobarAlgebra, cop) -> Callable[[Word], Vector]:
    """The antipode of a connected bialgebra, from ``mu (S (x) 1) nabla = eta epsilon``."""
    cache: Dict[Word, Vector] = {(): {(): 1}}
    f = a.field

    def s(word: Word) -> Vector:
        v = cache.get(word)
        if v is not None:
            return v
        out: Vector = {}
        add_term(f, out, word, -1)
        for (p, q), c in cop(word).items():
            if p and q:
                for k, e in s(p).items():
                    add_term(f, out, k + q, -c * e)
        cache[word] = out
        return out

    return s


def check_bialgebra(a: CobarAlgebra, cop=None, max_degree: Optional[int] = None) -> Dict[str, Tuple[bool, Optional[Word]]]:
    """Check the dg-bialgebra axioms of ``(a, cop)`` on every word up to ``max_degree``.

    Keys: ``counit``, ``coassociative``, ``chain_map``, ``multiplicative`` and
    ``antipode`` (the recursive antipode is also a right convolution inverse).
    Each value is ``(ok, first failing word)``.
    """
    cop = a.coproduct if cop is None else cop
    top = a.max_degree if max_degree is None else min(max_degree, a.max_degree)
    f = a.field
    s = recursive_antipode(a, cop)
    fails: Dict[str, Optional[Word]] = dict.fromkeys(
        ("counit", "coassociative", "chain_map", "multiplicative", "antipode"))

    def fail(name, w):
        if fails[name] is None:
            fails[name] = w

    for n in range(top + 1):
        for w in a.basis(n):
            dw = cop(w)
            left = {v: c for (u, v), c in dw.items() if not u}
            right = {u: c for (u, v), c in dw.items() if not v}
            if {k: c for k, c in left.items() if f.reduce(c)} != {w: 1} or \
                    {k: c for k, c in right.items() if f.reduce(c)} != {w: 1}:
                fail("counit", w)
            lhs = _apply_left(a, cop, dw)
            add_into(f, lhs, _apply_right(a, cop, dw), -1)
            if lhs:
                fail("coassociative", w)
            chain = tensor_differential(a, dw)
            for k, c in a.differential(w).items():
                add_into(f, chain, cop(k), -c)
            if chain:
                fail("chain_map", w)
            for i in range(1, len(w)):
                prod = tensor_multiply(a, cop(w[:i]), cop(w[i:]))
                add_into(f, prod, dw, -1)
                if prod:
                    fail("multiplicative", w)
                    break
            conv: Vector = {}
            for (p, q), c in dw.items():
                for k, e in s(q).items():
                    add_term(f, conv, p + k, c * e)
            if conv != ({(): 1} if not w else {}):
                fail("antipode", w)
    return {k: (v is None, v) for k, v in fails.items()}
