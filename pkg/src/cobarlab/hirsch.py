"""Hirsch coalgebra structures: families of co-operations and the coproduct they define.

A family ``E = {E^{i,j}}`` sends a letter ``g`` of ``Omega C`` (standing for
``s^-1 g``) to ``Cbar^{(x) i} (x) Cbar^{(x) j}``; values are vectors keyed by
pairs of words.  ``E^{0,1} = E^{1,0} = Id`` is implicit and every other
component with ``i = 0`` or ``j = 0`` must vanish.  The coproduct ``nabla_E`` is
the multiplicative extension

    nabla_E(c_1 ... c_n) = nabla_E(c_1) ... nabla_E(c_n),
    nabla_E(c) = c (x) 1 + 1 (x) c + sum_{i,j >= 1} E^{i,j}(c),

computed in ``Omega C (x) Omega C`` with Koszul signs.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, Hashable, List, Mapping, Optional, Tuple

from .cobar import CobarAlgebra, check_bialgebra, tensor_differential, tensor_multiply
from .dgc import DgCoalgebra, ParseError, _split_terms, coalgebra_from_document, parse_document
from .fields import Field
from .vectors import Vector, add_into, add_term

Word = Tuple
Pair = Tuple[Word, Word]


class FamilyError(ValueError):
    """The family violates the co-unit condition or is malformed."""


@dataclass
class TwistingFamily:
    """Finitely supported co-operations ``E^{i,j}`` with ``i, j >= 1``.

    ``components[(i, j)][g]`` is ``E^{i,j}(g)`` as a vector over pairs of words.
    """

    field: Field
    components: Dict[Tuple[int, int], Dict[Hashable, Vector]] = dc_field(default_factory=dict)

    def add(self, i: int, j: int, g, left: Word, right: Word, coef=1) -> None:
        if len(left) != i or len(right) != j:
            raise FamilyError(f"E^{{{i},{j}}}({g}) term has {len(left)}|{len(right)} letters")
        comp = self.components.setdefault((i, j), {})
        add_term(self.field, comp.setdefault(g, {}), (tuple(left), tuple(right)), coef)
        if not comp[g]:
            del comp[g]
        if not comp:
            del self.components[(i, j)]

    def value(self, g) -> Vector:
        """``sum_{i,j >= 1} E^{i,j}(g)``."""
        out: Vector = {}
        for comp in self.components.values():
            add_into(self.field, out, comp.get(g, {}))
        return out

    def component(self, i: int, j: int, g) -> Vector:
        return dict(self.components.get((i, j), {}).get(g, {}))

    def nabla1(self, g) -> Vector:
        return self.component(1, 1, g)

    def left_arity_support(self) -> List[Tuple[int, int]]:
        """Indices ``(i, j)`` with ``i >= 2`` and a nonzero component."""
        return sorted(k for k, comp in self.components.items() if k[0] >= 2 and any(comp.values()))

    @property
    def is_reduced(self) -> bool:
        return not self.components

    def copy(self) -> "TwistingFamily":
        return TwistingFamily(self.field, {k: {g: dict(v) for g, v in comp.items()}
                                           for k, comp in self.components.items()})

    def validate(self, a: CobarAlgebra) -> None:
        """Degree 0 and letters known to ``a``."""
        for (i, j), comp in self.components.items():
            if i < 1 or j < 1:
                raise FamilyError(f"co-unit violation: E^{{{i},{j}}} must be fixed by the co-unit condition")
            for g, vec in comp.items():
                deg = a.letter_degree(g)
                for (left, right) in vec:
                    try:
                        total = a.degree(left) + a.degree(right)
                    except KeyError as e:
                        raise FamilyError(f"unknown letter {e.args[0]!r} in E^{{{i},{j}}}({g})")
                    if total != deg:
                        raise FamilyError(f"E^{{{i},{j}}}({g}) is not of degree 0")


# ------------------------------------------------------------------ parsing

def _parse_side(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    return tuple(t.strip() for t in text.split("|"))


def parse_family_line(stmt: str, field: Field, degrees: Mapping[str, int], lineno: int = 0):
    """Parse ``E i j : g = c*<a|b ; x> + ...`` into ``(i, j, g, vector)``."""
    head, colon, body = stmt.partition(":")
    parts = head.split()
    if not colon or len(parts) != 3 or parts[0] != "E":
        raise ParseError("expected 'E i j : <gen> = ...'", lineno)
    try:
        i, j = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError(f"bad arities in {head!r}", lineno)
    g, eq, rhs = body.partition("=")
    g = g.strip()
    if not eq:
        raise ParseError("expected '=' in family line", lineno)
    if g not in degrees:
        raise ParseError(f"unknown generator {g!r}", lineno)
    vec: Vector = {}
    try:
        terms = _split_terms(rhs)
    except ValueError as e:
        raise ParseError(str(e), lineno)
    for c, t in terms:
        if not (t.startswith("<") and t.endswith(">")):
            raise ParseError(f"family term {t!r} must be '<left ; right>'", lineno)
        left, semi, right = t[1:-1].partition(";")
        if not semi:
            raise ParseError(f"family term {t!r} needs ';' between the two sides", lineno)
        left, right = _parse_side(left), _parse_side(right)
        for h in left + right:
            if h not in degrees:
                raise ParseError(f"unknown generator {h!r}", lineno)
        if len(left) != i or len(right) != j:
            raise ParseError(f"term {t!r} does not have arity ({i},{j})", lineno)
        add_term(field, vec, (left, right), field(c))
    return i, j, g, vec


def parse_family(text: str) -> Tuple[DgCoalgebra, TwistingFamily]:
    """Parse a coalgebra document with ``E`` lines.

    Components ``E 0 1`` / ``E 1 0`` may be written only as the identity and
    ``E 0 k`` / ``E k 0`` for ``k > 1`` only as zero.
    """
    doc = parse_document(text, allow_family=True)
    c = coalgebra_from_document(doc)
    fam = TwistingFamily(c.field)
    for lineno, stmt in doc.family_lines:
        i, j, g, vec = parse_family_line(stmt, c.field, doc.degrees, lineno)
        if i == 0 or j == 0:
            # only the forced values may be written: Id for (1,0)/(0,1), zero otherwise
            expected = {((g,), ()): 1} if (i, j) == (1, 0) else {((), (g,)): 1} if (i, j) == (0, 1) else {}
            if vec != expected:
                raise FamilyError(f"co-unit violation on line {lineno}: E^{{{i},{j}}}({g})")
            continue
        for (left, right), coef in vec.items():
            fam.add(i, j, g, left, right, coef)
    return c, fam


def format_family(fam: TwistingFamily) -> str:
    lines = []
    for (i, j) in sorted(fam.components):
        for g in sorted(fam.components[(i, j)], key=str):
            terms = []
            for (left, right), c in sorted(fam.components[(i, j)][g].items(), key=str):
                terms.append(f"{c}*<{'|'.join(left)} ; {'|'.join(right)}>")
            lines.append(f"E {i} {j} : {g} = " + " + ".join(terms))
    return "\n".join(lines)


# --------------------------------------------------------------- coproduct

class HirschCoproduct:
    """``nabla_E`` on words of ``a``; callable on words, values over pairs of words."""

    def __init__(self, a: CobarAlgebra, family: TwistingFamily):
        family.validate(a)
        self.algebra = a
        self.family = family
        self._cache: Dict[Word, Vector] = {(): {((), ()): 1}}

    def letter(self, g) -> Vector:
        out: Vector = {((g,), ()): 1, ((), (g,)): 1}
        add_into(self.algebra.field, out, self.family.value(g))
        return out

    def __call__(self, word: Word) -> Vector:
        v = self._cache.get(word)
        if v is None:
            v = tensor_multiply(self.algebra, self.letter(word[0]), self(word[1:]))
            self._cache[word] = v
        return v

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        for w, c in vec.items():
            add_into(self.algebra.field, out, self(w), c)
        return out


def build_nabla_E(c, family: TwistingFamily, max_degree: int) -> HirschCoproduct:
    """The coproduct of ``Omega C`` determined by ``family``, on words up to ``max_degree``."""
    a = c if isinstance(c, CobarAlgebra) else CobarAlgebra(c, max_degree)
    return HirschCoproduct(a, family)


# ------------------------------------------------------------------ checks

@dataclass
class HirschCheck:
    ok: bool
    failure: Optional[object] = None
    detail: str = ""


@dataclass
class HirschReport:
    max_degree: int
    checks: Dict[str, HirschCheck]
    left_arity: List[Tuple[int, int]]
    coassoc_111: Dict[str, bool]
    bialgebra: Dict[str, Tuple[bool, Optional[Word]]]

    CORE = ("counit", "leibniz", "coassoc", "left_coideal", "leftsided_iff")

    @property
    def hirsch(self) -> bool:
        """``nabla_E`` makes ``Omega C`` a co-unital dg-bialgebra up to the cutoff."""
        return all(self.checks[k].ok for k in ("counit", "leibniz", "coassoc"))

    @property
    def homotopy_g(self) -> bool:
        return self.hirsch and not self.left_arity

    def __getitem__(self, name: str) -> HirschCheck:
        return self.checks[name]


def _swap(a: CobarAlgebra, vec: Vector, signed: bool) -> Vector:
    f = a.field
    out: Vector = {}
    for (p, q), c in vec.items():
        s = f.sign(a.degree(p) * a.degree(q)) if signed else 1
        add_term(f, out, (q, p), s * c)
    return out


def nabla1_homotopy_residual(a: CobarAlgebra, fam: TwistingFamily, g) -> Vector:
    """``d E^{1,1}(g) - E^{1,1}(d g) - (1 + tau) nabla(g)`` on ``Cbar (x) Cbar``.

    ``d g`` is the one-letter part of the cobar differential and ``nabla(g)`` its
    two-letter part read in ``Cbar (x) Cbar``; ``tau`` carries the Koszul sign.
    """
    f = a.field
    lin: Vector = {}
    quad: Vector = {}
    for k, c in a.letter_differential(g).items():
        if len(k) == 1:
            lin[k[0]] = c
        else:
            add_term(f, quad, ((k[0],), (k[1],)), c)
    e11 = fam.nabla1(g)
    out: Vector = {}
    for (p, q), c in e11.items():
        for k, v in a.letter_differential(p[0]).items():
            if len(k) == 1:
                add_term(f, out, (k, q), c * v)
        s = f.sign(a.degree(p))
        for k, v in a.letter_differential(q[0]).items():
            if len(k) == 1:
                add_term(f, out, (p, k), s * c * v)
    for h, c in lin.items():
        add_into(f, out, fam.nabla1(h), -c)
    add_into(f, out, quad, -1)
    add_into(f, out, _swap(a, quad, True), -1)
    return out


def _e11_pair(a: CobarAlgebra, fam: TwistingFamily, vec: Vector, side: int) -> Vector:
    """Apply ``E^{1,1}`` to the one-letter factor ``side`` of pairs in ``vec``."""
    f = a.field
    out: Vector = {}
    for (p, q), c in vec.items():
        if side == 0:
            for (u, v), e in fam.nabla1(p[0]).items():
                add_term(f, out, (u, v, q), c * e)
        else:
            for (u, v), e in fam.nabla1(q[0]).items():
                add_term(f, out, (p, u, v), c * e)
    return out


def _split_first(a: CobarAlgebra, vec: Vector, side: int, signed: bool) -> Vector:
    """``(1 + tau)`` on the two-letter factor ``side`` of pairs in ``vec``."""
    f = a.field
    out: Vector = {}
    for (p, q), c in vec.items():
        two = p if side == 0 else q
        x, y = (two[0],), (two[1],)
        s = f.sign(a.degree(x) * a.degree(y)) if signed else 1
        for first, second, coef in ((x, y, c), (y, x, s * c)):
            key = (first, second, q) if side == 0 else (p, first, second)
            add_term(f, out, key, coef)
    return out


def coassoc_111_residual(a: CobarAlgebra, fam: TwistingFamily, g, signed: bool = True) -> Vector:
    """``(nabla1 (x) 1) nabla1 - (1 (x) nabla1) nabla1 - (1 (x) (1+tau)) E^{1,2} + ((1+tau) (x) 1) E^{2,1}``.

    With ``signed=False`` the transposition ignores Koszul signs.
    """
    f = a.field
    e11 = fam.nabla1(g)
    out = _e11_pair(a, fam, e11, 0)
    add_into(f, out, _e11_pair(a, fam, e11, 1), -1)
    add_into(f, out, _split_first(a, fam.component(1, 2, g), 1, signed), -1)
    add_into(f, out, _split_first(a, fam.component(2, 1, g), 0, signed))
    return out


@dataclass
class LeftSidedResult:
    left_coideal: bool
    first_r: Optional[int]
    witness: Optional[Word]
    left_arity: List[Tuple[int, int]]

    @property
    def consistent(self) -> bool:
        """Left co-ideal condition holds exactly when every ``E^{i,j}`` with ``i >= 2`` vanishes."""
        return self.left_coideal == (not self.left_arity)


def left_sided_check(c, fam: TwistingFamily, max_degree: int,
                     nabla: Optional[HirschCoproduct] = None) -> LeftSidedResult:
    """Whether ``nabla_E(J_r)`` lies in ``J_r (x) Omega C`` for all ``r``, up to ``max_degree``."""
    nab = nabla or build_nabla_E(c, fam, max_degree)
    a = nab.algebra
    top = min(max_degree, a.max_degree)
    first_r, witness = None, None
    for n in range(1, top + 1):
        for w in a.basis(n):
            if first_r is not None and len(w) >= first_r:
                continue
            if any(len(u) > len(w) for (u, _v) in nab(w)):
                first_r, witness = len(w), w
    support = [k for k in fam.left_arity_support()
               if any(a.letter_degree(g) <= top for g in fam.components[k])]
    return LeftSidedResult(first_r is None, first_r, witness, support)


def check_hirsch(c, fam: TwistingFamily, max_degree: int) -> HirschReport:
    """Check the co-unit, Leibniz, coassociativity and left-sided conditions up to ``max_degree``.

    ``left_coideal`` asks ``nabla_E(J_r) in J_r (x) Omega C`` for every ``r``,
    i.e. that no term of ``nabla_E(w)`` has more letters on the left than ``w``.
    ``leftsided_iff`` holds when ``left_coideal`` agrees with the vanishing of
    every ``E^{i,j}`` with ``i >= 2``.  Extra entries: ``nabla1_homotopy`` (the
    two-letter part of the Leibniz condition), and in ``coassoc_111`` whether the
    three-letter part of coassociativity holds with signed and with unsigned
    transpositions.
    """
    nab = build_nabla_E(c, fam, max_degree)
    a = nab.algebra
    f = a.field
    top = min(max_degree, a.max_degree)
    first: Dict[str, Optional[object]] = dict.fromkeys(("counit", "leibniz", "coassoc"))

    def fail(name, w):
        if first[name] is None:
            first[name] = w

    for n in range(top + 1):
        for w in a.basis(n):
            dw = nab(w)
            left = {v: x for (u, v), x in dw.items() if not u}
            right = {u: x for (u, v), x in dw.items() if not v}
            if left != {w: 1} or right != {w: 1}:
                fail("counit", w)
            lhs = tensor_differential(a, dw)
            add_into(f, lhs, nab.apply(a.differential(w)), -1)
            if lhs:
                fail("leibniz", w)
            co: Vector = {}
            for (p, q), x in dw.items():
                for (u, v), e in nab(p).items():
                    add_term(f, co, (u, v, q), x * e)
                for (u, v), e in nab(q).items():
                    add_term(f, co, (p, u, v), -x * e)
            if co:
                fail("coassoc", w)

    homotopy_fail = None
    signed_ok = unsigned_ok = True
    for n in range(1, top + 1):
        for g in a.letters(n):
            if homotopy_fail is None and nabla1_homotopy_residual(a, fam, g):
                homotopy_fail = g
            signed_ok &= not coassoc_111_residual(a, fam, g, True)
            unsigned_ok &= not coassoc_111_residual(a, fam, g, False)

    side = left_sided_check(a, fam, top, nab)
    checks = {
        "counit": HirschCheck(first["counit"] is None, first["counit"]),
        "leibniz": HirschCheck(first["leibniz"] is None, first["leibniz"]),
        "coassoc": HirschCheck(first["coassoc"] is None, first["coassoc"]),
        "left_coideal": HirschCheck(side.left_coideal, side.first_r,
                                    "" if side.left_coideal else f"fails at r = {side.first_r} on {side.witness}"),
        "leftsided_iff": HirschCheck(side.consistent, side.left_arity or None,
                                     f"left_coideal={side.left_coideal}, E^(i>=2) vanish={not side.left_arity}"),
        "nabla1_homotopy": HirschCheck(homotopy_fail is None, homotopy_fail),
    }
    report = HirschReport(top, checks, side.left_arity, {"signed": signed_ok, "unsigned": unsigned_ok}, {})
    if report.hirsch:
        report.bialgebra = check_bialgebra(a, nab, top)
    return report


# ------------------------------------------------------- random families

def _splittings(a: CobarAlgebra, deg: int, i: int, j: int, top_letters: int = 40) -> List[Pair]:
    """Pairs of words with ``i`` and ``j`` letters and total degree ``deg``."""
    letters = [(g, n) for n in range(1, deg + 1) for g in a.letters(n)]
    out = []
    for combo in itertools.product(letters, repeat=i + j):
        if sum(n for _, n in combo) == deg:
            names = tuple(g for g, _ in combo)
            out.append((names[:i], names[i:]))
            if len(out) >= top_letters:
                break
    return out


def random_family(a: CobarAlgebra, seed: int, left_sided: bool, max_arity: int = 3,
                  density: float = 0.5) -> TwistingFamily:
    """A seeded family of degree-0 co-operations (not required to satisfy any condition).

    With ``left_sided`` only ``i = 1`` components are drawn; otherwise at least
    one ``i >= 2`` term is included whenever some letter admits one.
    """
    rng = random.Random(seed)
    f = a.field
    fam = TwistingFamily(f)
    arities = [(i, j) for i in range(1, max_arity) for j in range(1, max_arity) if i + j <= max_arity]
    if left_sided:
        arities = [(1, j) for (_i, j) in arities if _i == 1]
    candidates = []
    for n in range(1, a.max_degree + 1):
        for g in a.letters(n):
            for (i, j) in arities:
                for left, right in _splittings(a, n, i, j):
                    candidates.append((i, j, g, left, right))
    for i, j, g, left, right in candidates:
        if rng.random() < density:
            fam.add(i, j, g, left, right, f(rng.choice([1, -1, 2, 3])) or 1)
    if not left_sided and not fam.left_arity_support():
        wide = [t for t in candidates if t[0] >= 2]
        if wide:
            i, j, g, left, right = rng.choice(wide)
            fam.add(i, j, g, left, right, 1)
    return fam
