"""Homotopy G-algebra operations on the double cobar construction.

The carrier is ``Omega H`` with ``H = Omega C`` carrying the shuffle Hopf
structure, i.e. a level-2 :class:`~cobarlab.cobar.CobarAlgebra`.  A letter of a
carrier word is a nonempty word ``h`` of ``H`` and has degree ``|h| - 1``.

Sign conventions.  ``cup1`` is the letter-insertion rule whose sign is that of
operadic partial composition (words are operations of arity = length, letters
carry their internal degree), transported to the desuspended grading.  In that
normalization ``cup1`` is the brace of the suspended grading: with
``E = E_{1,2}``,

    (a cup1 b) cup1 c - a cup1 (b cup1 c) = E(a;b,c) + (-1)^((|b|+1)(|c|+1)) E(a;c,b),
    d(a cup1 b) - (da) cup1 b + (-1)^|a| a cup1 (db) = (-1)^(|a|+1) (ab - (-1)^(|a||b|) ba),

and the bracket is the plain antisymmetrization

    {a;b} = a cup1 b - (-1)^((|a|+1)(|b|+1)) b cup1 a.

Over F2 all of this reduces to the characteristic-2 relations.  The
Connes-Moscovici operator is ``N sigma`` with ``sigma[h1|rest]`` the extra
degeneracy (the coaction of ``S(h1)`` on ``rest``) and ``N`` the norm of the
cyclic operator ``lambda = (-1)^|x| tau``; it satisfies ``Delta^2 = 0``,
``d Delta + Delta d = 0`` and, on homology,

    (-1)^|a| (Delta(ab) - Delta(a) b - (-1)^|a| a Delta(b)) = {a;b}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .cobar import CobarAlgebra, antipode
from .graded import koszul_sign
from .vectors import Vector, add_into, add_term

Word = Tuple


class HgaError(ValueError):
    """Invalid argument for a homotopy G-algebra operation."""


def _check_nonunit(*vecs: Vector) -> None:
    for v in vecs:
        if () in v:
            raise HgaError("operations are defined on the augmentation ideal (unit word given)")


class HgaStructure:
    """``cup1``, ``E_{1,2}``, bracket, restriction and ``Delta_CM`` on a carrier.

    All operations take and return sparse vectors over carrier words.  The
    optional ``cup1_override`` replaces the basis-level ``cup1`` (used to inject
    mutations when testing the identity checker).
    """

    def __init__(self, carrier: CobarAlgebra,
                 cup1_override: Optional[Callable[[Word, Word], Vector]] = None):
        if carrier.level != 2:
            raise HgaError("carrier must be a double cobar construction (level 2)")
        self.carrier = carrier
        self.inner = carrier.coalgebra
        self.field = carrier.field
        self._override = cup1_override
        self._cup_cache: Dict[Tuple[Word, Word], Vector] = {}
        self._e_cache: Dict[Tuple[Word, Word, Word], Vector] = {}
        self._lam_cache: Dict[Word, Vector] = {}
        self._delta_cache: Dict[Word, Vector] = {}
        self._involutive: Optional[bool] = None

    # ------------------------------------------------------------ degrees
    def letter_degree(self, h) -> int:
        return self.inner.degree(h) - 1

    def degree(self, word: Word) -> int:
        return sum(self.inner.degree(h) - 1 for h in word)

    def _vec_degree(self, v: Vector) -> int:
        degs = {self.degree(w) for w in v}
        if len(degs) > 1:
            raise HgaError("inhomogeneous element")
        return degs.pop() if degs else 0

    # ------------------------------------------------------- insertion
    def _theta(self, word: Word) -> int:
        """Parity of the sign moving every ``s^-1`` of ``word`` to the front."""
        n = len(word)
        return sum((n - 1 - j) * self.inner.degree(h) for j, h in enumerate(word))

    def _insert_at(self, x: Word, i: int, y: Word) -> Vector:
        """Replace letter ``i`` of ``x`` by ``[g1 y1 | ... | gn yn]``, ``g`` the iterated coproduct.

        The sign is that of the partial composition ``x o_i y`` of words viewed
        as operations of arity ``len`` with internal degree ``|h|`` per letter
        (Gerstenhaber arity sign times the Koszul sign of the internal symbols),
        transported to the desuspended grading by moving all ``s^-1`` to the front.
        """
        f = self.field
        inner = self.inner
        m, n = len(x), len(y)
        ideg = [inner.degree(h) for h in x]
        vdeg = [inner.degree(v) for v in y]
        base = ((n - 1) * (m - 1 - i) + (n - 1) * sum(ideg) + sum(vdeg) * sum(ideg[i + 1:])
                + self._theta(x) + self._theta(y))
        out: Vector = {}
        for gs, c in inner.iterated_coproduct(x[i], n).items():
            parity = base
            acc = 0
            for k in range(n):
                parity += inner.degree(gs[k]) * acc
                acc += vdeg[k]
            word = x[:i] + tuple(gs[j] + y[j] for j in range(n)) + x[i + 1:]
            parity += self._theta(word)
            add_term(f, out, word, c * f.sign(parity))
        return out

    def _act(self, h, y: Word) -> Vector:
        """``[h1 y1 | ... | hn yn]`` summed over the iterated coproduct of ``h``.

        Signs move the coproduct pieces into place past the ``s^-1`` and letters
        of ``y`` by the plain Koszul rule; this is the coaction used by the
        cyclic operator and the extra degeneracy.
        """
        f = self.field
        inner = self.inner
        n = len(y)
        order = []
        for j in range(n):
            order += [n + 2 * j, j, n + 2 * j + 1]
        out: Vector = {}
        for gs, c in inner.iterated_coproduct(h, n).items():
            degs = [inner.degree(g) for g in gs]
            for v in y:
                degs += [-1, inner.degree(v)]
            word = tuple(gs[j] + y[j] for j in range(n))
            add_term(f, out, word, c * koszul_sign(degs, order))
        return out

    def _insert(self, x: Word, y: Word) -> Vector:
        out: Vector = {}
        for i in range(len(x)):
            add_into(self.field, out, self._insert_at(x, i, y))
        return out

    def cup1_basis(self, x: Word, y: Word) -> Vector:
        if not x or not y:
            raise HgaError("cup1 is defined on nonunit words")
        if self._override is not None:
            return self._override(x, y)
        key = (x, y)
        v = self._cup_cache.get(key)
        if v is None:
            v = self._insert(x, y)
            self._cup_cache[key] = v
        return v

    def e12_basis(self, x: Word, y: Word, z: Word) -> Vector:
        """``E_{1,2}(x; y, z)``: ``y`` inserted into letter ``i``, ``z`` into a later letter ``j``."""
        if not x or not y or not z:
            raise HgaError("E_{1,2} is defined on nonunit words")
        key = (x, y, z)
        v = self._e_cache.get(key)
        if v is not None:
            return v
        f = self.field
        out: Vector = {}
        shift = len(y) - 1
        for i in range(len(x)):
            for xi, c in self._insert_at(x, i, y).items():
                for j in range(i + 1, len(x)):
                    add_into(f, out, self._insert_at(xi, j + shift, z), c)
        self._e_cache[key] = out
        return out

    # ------------------------------------------------- vector operations
    def _bilinear(self, fn, a: Vector, b: Vector) -> Vector:
        f = self.field
        out: Vector = {}
        for x, cx in a.items():
            for y, cy in b.items():
                add_into(f, out, fn(x, y), cx * cy)
        return out

    def cup1(self, a: Vector, b: Vector) -> Vector:
        _check_nonunit(a, b)
        return self._bilinear(self.cup1_basis, a, b)

    def e12(self, a: Vector, b: Vector, c: Vector) -> Vector:
        _check_nonunit(a, b, c)
        f = self.field
        out: Vector = {}
        for x, cx in a.items():
            for y, cy in b.items():
                for z, cz in c.items():
                    add_into(f, out, self.e12_basis(x, y, z), cx * cy * cz)
        return out

    def bracket_basis(self, x: Word, y: Word) -> Vector:
        f = self.field
        dx, dy = self.degree(x), self.degree(y)
        out: Vector = {}
        add_into(f, out, self.cup1_basis(x, y))
        add_into(f, out, self.cup1_basis(y, x), -f.sign((dx + 1) * (dy + 1)))
        return out

    def bracket(self, a: Vector, b: Vector) -> Vector:
        _check_nonunit(a, b)
        return self._bilinear(self.bracket_basis, a, b)

    def xi1(self, a: Vector) -> Vector:
        """Restriction ``xi_1(a) = a cup1 a`` (characteristic 2 only)."""
        if self.field.characteristic != 2:
            raise HgaError("the restriction xi_1 is only defined over F2")
        return self.cup1(a, a)

    def multiply(self, a: Vector, b: Vector) -> Vector:
        return self.carrier.multiply(a, b)

    def d(self, a: Vector) -> Vector:
        return self.carrier.d(a)

    # ----------------------------------------------------- Connes-Moscovici
    @property
    def involutive(self) -> bool:
        if self._involutive is None:
            _, report = antipode(self.inner)
            self._involutive = report["involutive"]
        return self._involutive

    def _lam(self, x: Word) -> Vector:
        """Cyclic operator ``(-1)^|x| tau`` on words whose letters may be the unit ``()``."""
        v = self._lam_cache.get(x)
        if v is not None:
            return v
        f = self.field
        out: Vector = {}
        s = f.sign(self.degree(x))
        tail = x[1:] + ((),)
        for h, c in self.inner.antipode(x[0]).items():
            add_into(f, out, self._act(h, tail), c * s)
        self._lam_cache[x] = out
        return out

    def _extra_degeneracy(self, x: Word) -> Vector:
        out: Vector = {}
        for h, c in self.inner.antipode(x[0]).items():
            add_into(self.field, out, self._act(h, x[1:]), c)
        return out

    def delta_cm_basis(self, x: Word) -> Vector:
        if len(x) < 2:
            return {}
        v = self._delta_cache.get(x)
        if v is not None:
            return v
        f = self.field
        cur = self._extra_degeneracy(x)
        total: Vector = {}
        for _ in range(len(x)):
            add_into(f, total, cur)
            nxt: Vector = {}
            for w, c in cur.items():
                add_into(f, nxt, self._lam(w), c)
            cur = nxt
        v = {w: c for w, c in total.items() if all(w)}
        self._delta_cache[x] = v
        return v

    def delta_cm(self, a: Vector) -> Vector:
        if not self.involutive:
            raise HgaError("Connes-Moscovici operator needs an involutive antipode")
        out: Vector = {}
        for x, c in a.items():
            add_into(self.field, out, self.delta_cm_basis(x), c)
        return out

    def words(self, lo: int, hi: int) -> List[Word]:
        return [w for n in range(lo, hi + 1) for w in self.carrier.basis(n)]


def hga_structure(carrier: CobarAlgebra) -> HgaStructure:
    return HgaStructure(carrier)


def cup1(hga: HgaStructure, a: Vector, b: Vector) -> Vector:
    return hga.cup1(a, b)


def e12(hga: HgaStructure, a: Vector, b: Vector, c: Vector) -> Vector:
    return hga.e12(a, b, c)


def bracket(hga: HgaStructure, a: Vector, b: Vector) -> Vector:
    return hga.bracket(a, b)


def restriction_xi1(hga: HgaStructure, a: Vector) -> Vector:
    return hga.xi1(a)


def delta_cm(hga: HgaStructure, a: Vector) -> Vector:
    return hga.delta_cm(a)


# ---------------------------------------------------------------- identities

@dataclass
class IdentityResult:
    name: str
    ok: bool
    checked: int
    counterexample: Optional[Tuple[Word, ...]] = None


@dataclass
class IdentityReport:
    results: List[IdentityResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def __getitem__(self, name: str) -> IdentityResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)


def _sum(hga: HgaStructure, *terms: Vector) -> Vector:
    out: Vector = {}
    for t in terms:
        add_into(hga.field, out, t)
    return out


def _dbar2(hga: HgaStructure, op, x: Word, y: Word) -> Vector:
    """``d op(x,y) + op(dx,y) + (-1)^|x| op(x,dy)`` for a degree-1 bilinear ``op`` (signs vanish mod 2)."""
    f = hga.field
    out = hga.d(op({x: 1}, {y: 1}))
    dx, dy = hga.d({x: 1}), hga.d({y: 1})
    if dx:
        add_into(f, out, op(dx, {y: 1}))
    if dy:
        add_into(f, out, op({x: 1}, dy), f.sign(hga.degree(x)))
    return out


def check_hga_identities(hga: HgaStructure, max_degree: int) -> IdentityReport:
    """Exhaustively check the characteristic-2 relations below on words of total degree ``<= max_degree``.

    ``commutator_homotopy`` ``ab + ba = d(a cup1 b) + (da) cup1 b + a cup1 (db)``;
    ``cup1_associator`` ``(a cup1 b) cup1 c + a cup1 (b cup1 c) = E(a;b,c) + E(a;c,b)``;
    ``right_hirsch`` ``(ab) cup1 c = a (b cup1 c) + (a cup1 c) b``;
    ``left_hirsch_homotopy`` ``a cup1 (bc) + (a cup1 b) c + b (a cup1 c) = dbar E(a;b,c)``.
    Degrees count the operation degrees: ``cup1`` has degree 1, ``E`` degree 2.
    """
    if hga.field.characteristic != 2:
        raise HgaError("the identity suite is stated in characteristic 2")
    f = hga.field
    top = max_degree
    A = hga.carrier
    report = IdentityReport()

    def record(name, fails, count):
        report.results.append(IdentityResult(name, fails is None, count, fails))

    def pairs(extra):
        for p in range(1, top):
            for q in range(1, top - p - extra + 1):
                for x in A.basis(p):
                    for y in A.basis(q):
                        yield x, y

    def triples(extra):
        for p in range(1, top):
            for q in range(1, top - p):
                for r in range(1, top - p - q - extra + 1):
                    for x in A.basis(p):
                        for y in A.basis(q):
                            for z in A.basis(r):
                                yield x, y, z

    fail = None
    count = 0
    for x, y in pairs(1):
        count += 1
        lhs = _sum(hga, {x + y: 1}, {y + x: 1})
        rhs = _dbar2(hga, hga.cup1, x, y)
        if _sum(hga, lhs, rhs):
            fail = fail or (x, y)
    record("commutator_homotopy", fail, count)

    fail, count = None, 0
    for x, y, z in triples(2):
        count += 1
        xy = hga.cup1({x: 1}, {y: 1})
        yz = hga.cup1({y: 1}, {z: 1})
        lhs = _sum(hga, hga.cup1(xy, {z: 1}) if xy else {}, hga.cup1({x: 1}, yz) if yz else {})
        rhs = _sum(hga, hga.e12_basis(x, y, z), hga.e12_basis(x, z, y))
        if _sum(hga, lhs, rhs):
            fail = fail or (x, y, z)
    record("cup1_associator", fail, count)

    fail, count = None, 0
    for x, y, z in triples(1):
        count += 1
        lhs = hga.cup1({x + y: 1}, {z: 1})
        r1 = hga.multiply({x: 1}, hga.cup1({y: 1}, {z: 1}))
        r2 = hga.multiply(hga.cup1({x: 1}, {z: 1}), {y: 1})
        if _sum(hga, lhs, r1, r2):
            fail = fail or (x, y, z)
    record("right_hirsch", fail, count)

    fail, count = None, 0
    for x, y, z in triples(2):
        count += 1
        lhs = _sum(hga,
                   hga.cup1({x: 1}, {y + z: 1}),
                   hga.multiply(hga.cup1({x: 1}, {y: 1}), {z: 1}),
                   hga.multiply({y: 1}, hga.cup1({x: 1}, {z: 1})))
        rhs = hga.d(hga.e12_basis(x, y, z))
        for dx, dy, dz in ((hga.d({x: 1}), {y: 1}, {z: 1}),
                           ({x: 1}, hga.d({y: 1}), {z: 1}),
                           ({x: 1}, {y: 1}, hga.d({z: 1}))):
            if dx and dy and dz:
                add_into(f, rhs, hga.e12(dx, dy, dz))
        if _sum(hga, lhs, rhs):
            fail = fail or (x, y, z)
    record("left_hirsch_homotopy", fail, count)
    return report


def dbar_cup1_operator(hga: HgaStructure, n: int):
    """``dbar(cup1)`` on the degree-``n`` part of ``A+ (x) A+`` as a matrix.

    Columns are indexed by pairs ``(x, y)`` with ``|x| + |y| = n``; the matrix is
    ``D o M - (-1)^1 M o D_2`` built from the matrices ``M`` of ``cup1`` and
    ``D``, ``D_2`` of the differentials of ``A`` and ``A (x) A``.
    """
    from .linalg import SparseMatrix

    A = hga.carrier
    f = hga.field

    def pairs(m):
        return [(x, y) for k in range(1, m) for x in A.basis(k) for y in A.basis(m - k)]

    src = pairs(n)
    mid = pairs(n - 1)
    tgt = A.basis(n)
    mid_tgt = A.basis(n + 1)
    t_index = {w: i for i, w in enumerate(tgt)}
    mt_index = {w: i for i, w in enumerate(mid_tgt)}
    m_index = {p: i for i, p in enumerate(mid)}

    cup_n = SparseMatrix.from_columns(len(mid_tgt), f, [
        {mt_index[k]: c for k, c in hga.cup1_basis(x, y).items()} for x, y in src])
    d_big = A.d_matrix(n + 1)
    cols = []
    for x, y in src:
        col: Vector = {}
        for k, c in A.differential(x).items():
            if k:
                add_term(f, col, (k, y), c)
        for k, c in A.differential(y).items():
            if k:
                add_term(f, col, (x, k), c * f.sign(A.degree(x)))
        cols.append({m_index[p]: c for p, c in col.items()})
    d2 = SparseMatrix.from_columns(len(mid), f, cols)
    cup_prev = SparseMatrix.from_columns(len(tgt), f, [
        {t_index[k]: c for k, c in hga.cup1_basis(x, y).items()} for x, y in mid])
    first = d_big @ cup_n
    second = cup_prev @ d2
    out = {}
    for r, c, v in first.entries:
        out[(r, c)] = f.reduce(out.get((r, c), 0) + v)
    for r, c, v in second.entries:
        out[(r, c)] = f.reduce(out.get((r, c), 0) + v)
    entries = [(r, c, v) for (r, c), v in out.items() if v]
    return SparseMatrix.from_entries(len(tgt), len(src), f, entries), src, tgt
