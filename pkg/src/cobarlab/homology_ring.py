"""Homology of a double cobar construction with its induced operations.

Homology classes are keyed by ``(degree, index)`` into the per-degree
representative basis.  Every operation is computed on chain representatives
and reduced back to class coordinates; an operation whose output is not a cycle
raises :class:`HomologyRingError`, which would signal a broken chain-level
identity.

The comparison with the free models goes through the map ``iota`` from the
free model to homology: generators go to the classes of the one-letter words
``s^-2 w``, elementary products to iterated brackets, restriction iterates to
iterated ``xi_1``, and monomials to ordered products.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from .cobar import CobarAlgebra, double_cobar
from .dgc import double_suspension
from .fields import Field, Q
from .free_gerst import FreeModel
from .graded import _shift_name
from .hga import HgaStructure
from .linalg import Homology, SparseMatrix, rank
from .vectors import Vector, add_into, add_term, scaled, subtract

ClassKey = Tuple[int, int]


class HomologyRingError(ValueError):
    """Input is not a cycle, or an induced operation did not produce one."""


class HomologyAlgebra:
    """``H_*(Omega^2 C)`` up to degree ``max_degree`` with induced operations."""

    def __init__(self, hga: HgaStructure, max_degree: Optional[int] = None):
        self.hga = hga
        self.carrier: CobarAlgebra = hga.carrier
        self.field: Field = hga.field
        top = self.carrier.max_degree - 1
        self.max_degree = top if max_degree is None else min(max_degree, top)
        self._hom: Dict[int, Homology] = {}
        self._reps: Dict[ClassKey, Vector] = {}

    # -- bases
    def homology(self, n: int) -> Homology:
        if n < 0 or n > self.max_degree:
            raise HomologyRingError(f"degree {n} outside 0..{self.max_degree}")
        if n not in self._hom:
            self._hom[n] = self.carrier.homology(n)
        return self._hom[n]

    def dim(self, n: int) -> int:
        return self.homology(n).dimension

    def dims(self) -> List[int]:
        return [self.dim(n) for n in range(self.max_degree + 1)]

    def classes(self, n: int) -> List[ClassKey]:
        return [(n, j) for j in range(self.dim(n))]

    def all_classes(self, lo: int = 0, hi: Optional[int] = None) -> List[ClassKey]:
        hi = self.max_degree if hi is None else hi
        return [c for n in range(lo, hi + 1) for c in self.classes(n)]

    def unit(self) -> Vector:
        return self.classify({(): 1})

    def representative(self, key: ClassKey) -> Vector:
        v = self._reps.get(key)
        if v is None:
            n, j = key
            basis = self.carrier.basis(n)
            v = {basis[i]: c for i, c in self.homology(n).representatives[j].items()}
            self._reps[key] = v
        return v

    def rep(self, h: Vector) -> Vector:
        out: Vector = {}
        for k, c in h.items():
            add_into(self.field, out, self.representative(k), c)
        return out

    def classify(self, chain: Vector) -> Vector:
        """Class coordinates of a cycle (possibly inhomogeneous)."""
        f = self.field
        by_degree: Dict[int, Dict[int, object]] = {}
        for w, c in chain.items():
            if not f.reduce(c):
                continue
            n = self.carrier.degree(w)
            if n > self.max_degree:
                raise HomologyRingError(f"chain has degree {n} above the cutoff {self.max_degree}")
            index = self._index(n)
            by_degree.setdefault(n, {})[index[w]] = c
        out: Vector = {}
        for n, coords in sorted(by_degree.items()):
            try:
                cls = self.homology(n).coordinates(coords)
            except ValueError:
                raise HomologyRingError(f"chain in degree {n} is not a cycle") from None
            for j, c in enumerate(cls):
                add_term(f, out, (n, j), c)
        return out

    def _index(self, n: int) -> Dict[tuple, int]:
        cache = self.__dict__.setdefault("_idx", {})
        if n not in cache:
            cache[n] = {w: i for i, w in enumerate(self.carrier.basis(n))}
        return cache[n]

    @staticmethod
    def degree_of(h: Vector) -> int:
        degs = {k[0] for k in h}
        if len(degs) > 1:
            raise HomologyRingError("element is not homogeneous")
        return degs.pop() if degs else 0

    # -- induced operations
    def induced_operation(self, op: Callable[..., Vector], *classes: Vector) -> Vector:
        return self.classify(op(*[self.rep(h) for h in classes]))

    def _strip_unit(self, h: Vector) -> Vector:
        return {k: c for k, c in h.items() if k[0] > 0}

    def multiply(self, a: Vector, b: Vector) -> Vector:
        return self.induced_operation(self.hga.multiply, a, b)

    def bracket(self, a: Vector, b: Vector) -> Vector:
        a, b = self._strip_unit(a), self._strip_unit(b)
        if not a or not b:
            return {}
        return self.induced_operation(self.hga.bracket, a, b)

    def cup1_chain(self, a: Vector, b: Vector) -> Vector:
        return self.hga.cup1(a, b)

    def xi(self, a: Vector) -> Vector:
        a = self._strip_unit(a)
        if not a:
            return {}
        return self.induced_operation(self.hga.xi1, a)

    def delta(self, a: Vector) -> Vector:
        a = self._strip_unit(a)
        if not a:
            return {}
        return self.induced_operation(self.hga.delta_cm, a)

    def random_boundary(self, n: int, rng: random.Random) -> Vector:
        """``d`` of a random chain of degree ``n + 1``."""
        f = self.field
        chain: Vector = {}
        for w in self.carrier.basis(n + 1):
            c = rng.choice([0, 1]) if f.characteristic == 2 else rng.randint(-2, 2)
            if c:
                add_term(f, chain, w, c)
        return self.carrier.d(chain)


def homology_algebra(W: Mapping[str, int], field: Field = Q, max_degree: int = 8) -> HomologyAlgebra:
    """``H_*(Omega^2 double_suspension(W))`` up to ``max_degree``."""
    c = double_suspension(W, field)
    return HomologyAlgebra(HgaStructure(double_cobar(c, max_degree + 1)), max_degree)


# ---------------------------------------------------------- free comparison

class ModelMap:
    """``iota``: free model monomials to homology classes."""

    def __init__(self, H: HomologyAlgebra, model: FreeModel):
        self.H = H
        self.model = model
        self._lie: Dict[str, Vector] = {}
        self._mono: Dict[tuple, Vector] = {}

    def generator(self, name: str) -> Vector:
        letter = (_shift_name(name, 2),)
        return self.H.classify({(letter,): 1})

    def lie(self, key: str) -> Vector:
        v = self._lie.get(key)
        if v is not None:
            return v
        m = self.model
        e = m._elem.get(key)
        if e is not None and e.kind == "xi":
            v = self.lie(e.base)
            p = e.power
            while p > 1:
                v = self.H.xi(v)
                p //= 2
        elif e is not None and e.kind == "square":
            b = self.lie(e.base)
            v = self.H.bracket(b, b)
        else:
            p = m._products[key]
            if p.is_leaf:
                v = self.generator(key)
            else:
                v = self.H.bracket(self.lie(p.left.key), self.lie(p.right.key))
        self._lie[key] = v
        return v

    def monomial(self, mono: tuple) -> Vector:
        v = self._mono.get(mono)
        if v is not None:
            return v
        if not mono:
            v = self.H.unit()
        elif len(mono) == 1:
            v = self.lie(mono[0])
        else:
            v = self.H.multiply(self.monomial(mono[:-1]), self.lie(mono[-1]))
        self._mono[mono] = v
        return v

    def __call__(self, vec: Vector) -> Vector:
        out: Vector = {}
        for m, c in vec.items():
            add_into(self.H.field, out, self.monomial(m), c)
        return out

    def image_rank(self, n: int) -> int:
        cols = []
        for mono in self.model.monomials(n):
            cols.append({k[1]: c for k, c in self.monomial(mono).items()})
        if not cols:
            return 0
        return rank(SparseMatrix.from_columns(self.H.dim(n), self.H.field, cols))


@dataclass
class FreenessReport:
    field: Field
    W: Dict[str, int]
    rows: List[Dict[str, int]]
    generated: bool
    morphism: bool
    ok: bool
    iota: Optional[ModelMap] = dc_field(default=None, repr=False)

    columns = ["degree", "dim_H", "dim_free", "image_rank"]


def verify_freeness(W: Mapping[str, int], max_degree: int = 8, field: Field = Q,
                    H: Optional[HomologyAlgebra] = None) -> FreenessReport:
    """Compare ``H_*(Omega^2 double_suspension(W))`` with the free model degree by degree."""
    H = H or homology_algebra(W, field, max_degree)
    model = FreeModel(W, field, max_degree)
    iota = ModelMap(H, model)
    rows = []
    for n in range(max_degree + 1):
        rows.append({"degree": n, "dim_H": H.dim(n), "dim_free": len(model.monomials(n)),
                     "image_rank": iota.image_rank(n)})
    generated = all(r["image_rank"] == r["dim_H"] for r in rows)
    morphism = model_morphism_failure(iota) is None
    ok = generated and morphism and all(r["dim_H"] == r["dim_free"] for r in rows)
    return FreenessReport(field, dict(W), rows, generated, morphism, ok, iota)


def model_morphism_failure(iota: ModelMap) -> Optional[Tuple[str, tuple]]:
    """First monomial (pair) where ``iota`` fails to commute with the bracket or ``xi``."""
    H, model = iota.H, iota.model
    N = H.max_degree
    for n1 in range(1, N):
        for m1 in model.monomials(n1):
            if model.sign_free and 2 * n1 + 1 <= N:
                if iota(model.xi_basis(m1)) != H.xi(iota.monomial(m1)):
                    return ("xi", (m1,))
            for n2 in range(1, N - n1):
                for m2 in model.monomials(n2):
                    if iota(model.bracket_basis(m1, m2)) != H.bracket(iota.monomial(m1), iota.monomial(m2)):
                        return ("bracket", (m1, m2))
    return None


# ------------------------------------------------------------------ BV (Q)

@dataclass
class BVReport:
    rows: List[Dict[str, object]]
    checks: Dict[str, bool]
    counterexample: Optional[Tuple[str, object]] = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    columns = ["degree", "dim_H", "dim_free", "delta_sq_zero", "deviation_ok", "commutes_with_iota"]


def verify_bv(W: Mapping[str, int], max_degree: int = 8, H: Optional[HomologyAlgebra] = None) -> BVReport:
    """``H(Delta_CM)`` against the canonical BV structure on the free model (over Q)."""
    H = H or homology_algebra(W, Q, max_degree)
    if H.field.characteristic != 0:
        raise HomologyRingError("BV comparison runs over Q")
    f = H.field
    N = H.max_degree
    free = verify_freeness(W, N, f, H)
    model, iota = free.iota.model, free.iota
    checks = {"generators_annihilated": True, "delta_sq_zero": True, "deviation": True,
              "iota_delta": True, "free": free.ok}
    bad = None
    per_degree = {n: {"delta_sq_zero": True, "deviation_ok": True, "commutes_with_iota": True}
                  for n in range(N + 1)}

    def fail(check, n, what):
        nonlocal bad
        checks[check] = False
        key = {"delta_sq_zero": "delta_sq_zero", "deviation": "deviation_ok"}.get(check, "commutes_with_iota")
        per_degree[n][key] = False
        bad = bad or (check, what)

    for g in model.generators():
        if H.delta(iota.monomial(g)):
            fail("generators_annihilated", model.degree(g), g)
    for n in range(N):
        for k in H.classes(n):
            dk = H.delta({k: 1})
            if n + 2 <= N and H.delta(dk):
                fail("delta_sq_zero", n, k)
        for mono in model.monomials(n):
            if iota(model.delta_basis(mono)) != H.delta(iota.monomial(mono)):
                fail("iota_delta", n, mono)
    classes = H.all_classes(1)
    for a in classes:
        for b in classes:
            n = a[0] + b[0]
            if n + 1 > N:
                continue
            xa, xb = {a: 1}, {b: 1}
            lhs = H.delta(H.multiply(xa, xb))
            add_into(f, lhs, H.multiply(H.delta(xa), xb), -1)
            add_into(f, lhs, H.multiply(xa, H.delta(xb)), -f.sign(a[0]))
            if lhs != scaled(f, H.bracket(xa, xb), f.sign(a[0])):
                fail("deviation", n + 1, (a, b))
    rows = [{"degree": r["degree"], "dim_H": r["dim_H"], "dim_free": r["dim_free"], **per_degree[r["degree"]]}
            for r in free.rows]
    return BVReport(rows, checks, bad)


# ------------------------------------------------- restricted structure (F2)

@dataclass
class AxiomReport:
    results: Dict[str, Tuple[bool, int]]
    counterexamples: Dict[str, object]

    @property
    def ok(self) -> bool:
        return all(ok for ok, _ in self.results.values())


def check_gerstenhaber_axioms(H: HomologyAlgebra, max_degree: int = 6) -> AxiomReport:
    """Graded commutativity, Poisson and Jacobi on class tuples; over F2 also the restriction axioms.

    Over F2 the axioms are those of a 2-restricted Gerstenhaber algebra: symmetry,
    ``[x;x] = 0``, Jacobi, ``[xi(x);y] = [x;[x;y]]``, additivity defect
    ``xi(x+y) = xi(x) + [x;y] + xi(y)``, Poisson, and
    ``xi(xy) = x^2 xi(y) + xi(x) y^2 + x[x;y]y``.
    """
    f = H.field
    top = min(max_degree, H.max_degree)
    cls = H.all_classes(1, top)
    results: Dict[str, List[int]] = {}
    examples: Dict[str, object] = {}

    def record(name, ok, where):
        r = results.setdefault(name, [0, 0])
        r[1] += 1
        if not ok:
            r[0] += 1
            examples.setdefault(name, where)

    deg = lambda k: k[0]
    e = lambda k: {k: 1}
    char2 = f.characteristic == 2
    for a in cls:
        for b in cls:
            if deg(a) + deg(b) <= top:
                ab, ba = H.multiply(e(a), e(b)), H.multiply(e(b), e(a))
                record("commutative", ab == scaled(f, ba, f.sign(deg(a) * deg(b))), (a, b))
            if deg(a) + deg(b) + 1 <= top:
                l, r = H.bracket(e(a), e(b)), H.bracket(e(b), e(a))
                record("bracket_symmetry", l == scaled(f, r, -f.sign((deg(a) + 1) * (deg(b) + 1))), (a, b))
            if char2 and 2 * deg(a) + 1 + deg(b) + 1 <= top:
                lhs = H.bracket(H.xi(e(a)), e(b))
                rhs = H.bracket(e(a), H.bracket(e(a), e(b)))
                record("xi_bracket", lhs == rhs, (a, b))
            if char2 and a[0] == b[0] and 2 * deg(a) + 1 <= top and a != b:
                s = {a: 1, b: 1}
                rhs = H.xi(e(a))
                add_into(f, rhs, H.bracket(e(a), e(b)))
                add_into(f, rhs, H.xi(e(b)))
                record("xi_additive", H.xi(s) == rhs, (a, b))
            if char2 and 2 * (deg(a) + deg(b)) + 1 <= top:
                x, y = e(a), e(b)
                rhs = H.multiply(H.multiply(x, x), H.xi(y))
                add_into(f, rhs, H.multiply(H.xi(x), H.multiply(y, y)))
                add_into(f, rhs, H.multiply(H.multiply(x, H.bracket(x, y)), y))
                record("xi_product", H.xi(H.multiply(x, y)) == rhs, (a, b))
            for c in cls:
                if deg(a) + deg(b) + deg(c) + 1 <= top:
                    lhs = H.bracket(e(a), H.multiply(e(b), e(c)))
                    rhs = H.multiply(H.bracket(e(a), e(b)), e(c))
                    add_into(f, rhs, H.multiply(e(b), H.bracket(e(a), e(c))), f.sign((deg(a) + 1) * deg(b)))
                    record("poisson", lhs == rhs, (a, b, c))
                if deg(a) + deg(b) + deg(c) + 2 <= top:
                    lhs = H.bracket(e(a), H.bracket(e(b), e(c)))
                    rhs = H.bracket(H.bracket(e(a), e(b)), e(c))
                    add_into(f, rhs, H.bracket(e(b), H.bracket(e(a), e(c))), f.sign((deg(a) + 1) * (deg(b) + 1)))
                    record("jacobi", lhs == rhs, (a, b, c))
        if char2 and 2 * deg(a) + 1 <= top:
            record("bracket_self_zero", not H.bracket(e(a), e(a)), a)
    out = {k: (v[0] == 0, v[1]) for k, v in results.items()}
    return AxiomReport(out, examples)


def check_well_defined(H: HomologyAlgebra, trials: int = 100, seed: int = 0,
                       max_degree: Optional[int] = None) -> AxiomReport:
    """Operations on ``rep + random boundary`` give the same classes as on ``rep``."""
    f = H.field
    top = min(max_degree or H.max_degree, H.max_degree)
    rng = random.Random(seed)
    cls = H.all_classes(1, top)
    results: Dict[str, List[int]] = {}
    examples: Dict[str, object] = {}

    def record(name, ok, where):
        r = results.setdefault(name, [0, 0])
        r[1] += 1
        if not ok:
            r[0] += 1
            examples.setdefault(name, where)

    hga = H.hga
    ops = {
        "product": (2, lambda n: n <= top, lambda a, b: hga.multiply(a, b)),
        "bracket": (2, lambda n: n + 1 <= top, lambda a, b: hga.bracket(a, b)),
    }
    if f.characteristic == 2:
        ops["xi"] = (1, lambda n: 2 * n + 1 <= top, lambda a: hga.xi1(a))
    elif hga.involutive:
        ops["delta"] = (1, lambda n: n + 1 <= top, lambda a: hga.delta_cm(a))
    tuples = {}
    for name, (arity, fits, _) in ops.items():
        if arity == 1:
            tuples[name] = [(a,) for a in cls if fits(a[0])]
        else:
            tuples[name] = [(a, b) for a in cls for b in cls if fits(a[0] + b[0])]
    names = [k for k in sorted(tuples) if tuples[k]]
    for t in range(trials if names else 0):
        name = names[t % len(names)]
        args = rng.choice(tuples[name])
        fn = ops[name][2]
        reps = [H.representative(k) for k in args]
        moved = []
        for k, r in zip(args, reps):
            r2 = dict(r)
            add_into(f, r2, H.random_boundary(k[0], rng))
            moved.append(r2)
        record(name, H.classify(fn(*reps)) == H.classify(fn(*moved)), (args, t))
    out = {k: (v[0] == 0, v[1]) for k, v in results.items()}
    return AxiomReport(out, examples)
