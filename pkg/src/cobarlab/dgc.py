"""1-connected differential graded coalgebras on named generators.

A coalgebra ``C = k + C+`` is stored through its reduced part: a degree for each
generator of ``C+``, the differential, and the reduced coproduct
``C+ -> C+ (x) C+``.  The group-like terms ``c (x) 1 + 1 (x) c`` of the full
coproduct are implicit.

Text format (line oriented, ``#`` starts a comment, ``;`` also separates
statements)::

    field Q
    maxdeg 10
    gen u 3
    gen v 4
    d v = u
    cop w = 2*u|v + -1*v|u
    primitive
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Tuple

from .fields import F2, Q, Field, field_from_name
from .graded import ChainComplex, GradedMap, GradedSpace, _shift_name
from .vectors import Vector, add_into, add_term


class CoalgebraError(ValueError):
    """Structural problem with a coalgebra (d^2 != 0, not a coderivation, ...)."""

    def __init__(self, message: str, generator: Optional[Hashable] = None):
        super().__init__(message)
        self.generator = generator


class ParseError(ValueError):
    """Malformed input text; carries the 1-based line number."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class DgCoalgebra:
    """A 1-connected dg-coalgebra ``(C, eps, d, nabla)`` with ``C_0 = k``, ``C_1 = 0``."""

    def __init__(self, field: Field, degrees: Mapping[Hashable, int],
                 differential: Optional[Mapping[Hashable, Vector]] = None,
                 coproduct: Optional[Mapping[Hashable, Vector]] = None,
                 max_degree: Optional[int] = None, validate: bool = True):
        self.field = field
        self._degrees = dict(degrees)
        self.max_degree = max_degree if max_degree is not None else max(self._degrees.values(), default=0)
        self._d = {g: {k: field.reduce(c) for k, c in (differential or {}).get(g, {}).items() if field.reduce(c)}
                   for g in self._degrees}
        self._cop = {g: {k: field.reduce(c) for k, c in (coproduct or {}).get(g, {}).items() if field.reduce(c)}
                     for g in self._degrees}
        by_degree: Dict[int, List[Hashable]] = {}
        for g, n in self._degrees.items():
            by_degree.setdefault(n, []).append(g)
        self._by_degree = {n: sorted(gs, key=str) for n, gs in by_degree.items()}
        if validate:
            self.validate()

    # -- coalgebra interface used by the cobar functor
    def generators(self, n: int) -> List[Hashable]:
        return list(self._by_degree.get(n, ()))

    def all_generators(self) -> List[Hashable]:
        return [g for n in sorted(self._by_degree) for g in self._by_degree[n]]

    def degree(self, g) -> int:
        return self._degrees[g]

    def differential(self, g) -> Vector:
        return self._d[g]

    def reduced_coproduct(self, g) -> Vector:
        return self._cop[g]

    @property
    def primitive(self) -> bool:
        return not any(self._cop.values())

    @property
    def reduced_space(self) -> GradedSpace:
        return GradedSpace(self._by_degree)

    @property
    def space(self) -> GradedSpace:
        basis = {0: ["1"]}
        basis.update(self._by_degree)
        return GradedSpace(basis)

    def chain_complex(self) -> ChainComplex:
        sp = self.reduced_space
        return ChainComplex(sp, GradedMap(sp, sp, -1, self.differential, self.field))

    # -- structure checks
    def _d_pair(self, a, b) -> Vector:
        """``(d (x) 1 + 1 (x) d)(a (x) b)``."""
        f = self.field
        out: Vector = {}
        for k, c in self._d[a].items():
            add_term(f, out, (k, b), c)
        s = f.sign(self._degrees[a])
        for k, c in self._d[b].items():
            add_term(f, out, (a, k), s * c)
        return out

    def check(self) -> List[Tuple[str, Hashable]]:
        """List of ``(problem, generator)`` pairs; empty when the structure is valid."""
        f = self.field
        problems = []
        for g, n in self._degrees.items():
            if n < 2:
                problems.append(("1-connectivity (C_1 = 0, C_+ in degrees >= 2)", g))
        for g in self.all_generators():
            n = self._degrees[g]
            for k in self._d[g]:
                if k not in self._degrees:
                    problems.append((f"unknown generator {k!r} in differential", g))
                elif self._degrees[k] != n - 1:
                    problems.append((f"differential term {k!r} has wrong degree", g))
            for (a, b) in self._cop[g]:
                for k in (a, b):
                    if k not in self._degrees:
                        problems.append((f"unknown generator {k!r} in coproduct", g))
                if a in self._degrees and b in self._degrees and self._degrees[a] + self._degrees[b] != n:
                    problems.append((f"coproduct term {a}|{b} has wrong degree", g))
        if problems:
            return problems
        for g in self.all_generators():
            dd: Vector = {}
            for k, c in self._d[g].items():
                add_into(f, dd, self._d[k], c)
            if dd:
                problems.append(("d o d != 0", g))
        for g in self.all_generators():
            lhs: Vector = {}
            for (a, b), c in self._cop[g].items():
                for (a1, a2), c1 in self._cop[a].items():
                    add_term(f, lhs, (a1, a2, b), c * c1)
                for (b1, b2), c2 in self._cop[b].items():
                    add_term(f, lhs, (a, b1, b2), -c * c2)
            if lhs:
                problems.append(("coproduct not coassociative", g))
        for g in self.all_generators():
            lhs: Vector = {}
            for k, c in self._d[g].items():
                add_into(f, lhs, self._cop[k], c)
            for (a, b), c in self._cop[g].items():
                add_into(f, lhs, self._d_pair(a, b), -c)
            if lhs:
                problems.append(("differential is not a coderivation", g))
        return problems

    def validate(self) -> None:
        problems = self.check()
        if problems:
            msg, g = problems[0]
            raise CoalgebraError(f"{msg}: generator {g}", g)

    def __repr__(self) -> str:
        gens = ", ".join(f"{g}:{self._degrees[g]}" for g in self.all_generators())
        return f"DgCoalgebra({self.field}, [{gens}], primitive={self.primitive})"


# ------------------------------------------------------------------- parsing

_NAME = r"[A-Za-z_][A-Za-z0-9_'^().,\[\]]*"
_TERM_RE = re.compile(r"^\s*(?:([+-]?\s*\d+(?:/\d+)?)\s*\*\s*)?(.+?)\s*$")


def _split_terms(rhs: str) -> List[Tuple[Fraction, str]]:
    """Split ``2*u + -1*v - w`` into ``[(2, 'u'), (-1, 'v'), (-1, 'w')]``."""
    rhs = rhs.strip()
    if rhs in ("", "0"):
        return []
    pieces = []
    sign = 1
    buf = ""
    depth = 0
    i = 0
    while i < len(rhs):
        ch = rhs[i]
        if ch in "<([":
            depth += 1
        elif ch in ">)]":
            depth -= 1
        if depth == 0 and ch in "+-" and buf.strip() and not buf.strip().endswith("*"):
            pieces.append((sign, buf))
            sign = 1 if ch == "+" else -1
            buf = ""
        elif depth == 0 and ch in "+-" and not buf.strip():
            if ch == "-":
                sign = -sign
        else:
            buf += ch
        i += 1
    if buf.strip():
        pieces.append((sign, buf))
    out = []
    for s, text in pieces:
        m = _TERM_RE.match(text)
        if not m:
            raise ValueError(f"bad term {text!r}")
        coef = Fraction(m.group(1).replace(" ", "")) if m.group(1) else Fraction(1)
        out.append((s * coef, m.group(2).strip()))
    return out


def split_statements(text: str) -> List[Tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        depth, buf = 0, ""
        for ch in line + ";":
            depth += (ch == "<") - (ch == ">")
            if ch == ";" and depth <= 0:
                if buf.strip():
                    out.append((lineno, buf.strip()))
                buf = ""
            else:
                buf += ch
    return out


@dataclass
class ParsedDocument:
    field: Field
    max_degree: Optional[int]
    degrees: Dict[str, int]
    differential: Dict[str, Vector]
    coproduct: Dict[str, Vector]
    primitive: bool
    family_lines: List[Tuple[int, str]] = dc_field(default_factory=list)
    lines: Dict[str, int] = dc_field(default_factory=dict)


def parse_document(text: str, allow_family: bool = False) -> ParsedDocument:
    field = Q
    max_degree = None
    degrees: Dict[str, int] = {}
    d_raw: List[Tuple[int, str, str]] = []
    cop_raw: List[Tuple[int, str, str]] = []
    primitive = False
    family: List[Tuple[int, str]] = []
    gen_line: Dict[str, int] = {}
    for lineno, stmt in split_statements(text):
        head, _, rest = stmt.partition(" ")
        rest = rest.strip()
        if head == "field":
            try:
                field = field_from_name(rest)
            except ValueError as e:
                raise ParseError(str(e), lineno)
        elif head == "maxdeg":
            try:
                max_degree = int(rest)
            except ValueError:
                raise ParseError(f"bad maxdeg {rest!r}", lineno)
        elif head == "gen":
            parts = rest.split()
            if len(parts) != 2:
                raise ParseError("expected 'gen <name> <degree>'", lineno)
            name, deg = parts
            try:
                deg = int(deg)
            except ValueError:
                raise ParseError(f"bad degree {deg!r}", lineno)
            if name in degrees:
                raise ParseError(f"duplicate generator {name!r}", lineno)
            if deg <= 1:
                raise ParseError(f"generator {name!r} has degree {deg}; C_+ lives in degrees >= 2 "
                                 "(1-connected: C_0 = k, C_1 = 0)", lineno)
            degrees[name] = deg
            gen_line[name] = lineno
        elif head == "d":
            lhs, eq, rhs = rest.partition("=")
            if not eq:
                raise ParseError("expected 'd <name> = ...'", lineno)
            d_raw.append((lineno, lhs.strip(), rhs))
        elif head == "cop":
            lhs, eq, rhs = rest.partition("=")
            if not eq:
                raise ParseError("expected 'cop <name> = ...'", lineno)
            cop_raw.append((lineno, lhs.strip(), rhs))
        elif head == "primitive":
            primitive = True
        elif head == "E" and allow_family:
            family.append((lineno, stmt))
        else:
            raise ParseError(f"unknown statement {head!r}", lineno)

    def check_name(name, lineno):
        if name not in degrees:
            raise ParseError(f"unknown generator {name!r}", lineno)

    differential: Dict[str, Vector] = {}
    for lineno, name, rhs in d_raw:
        check_name(name, lineno)
        vec: Vector = {}
        try:
            terms = _split_terms(rhs)
        except ValueError as e:
            raise ParseError(str(e), lineno)
        for c, g in terms:
            check_name(g, lineno)
            add_term(field, vec, g, field(c))
        differential[name] = vec
    coproduct: Dict[str, Vector] = {}
    if primitive and cop_raw:
        raise ParseError("'primitive' conflicts with explicit 'cop' lines", cop_raw[0][0])
    for lineno, name, rhs in cop_raw:
        check_name(name, lineno)
        vec = {}
        try:
            terms = _split_terms(rhs)
        except ValueError as e:
            raise ParseError(str(e), lineno)
        for c, pair in terms:
            a, bar, b = pair.partition("|")
            if not bar:
                raise ParseError(f"coproduct term {pair!r} must be 'a|b'", lineno)
            a, b = a.strip(), b.strip()
            check_name(a, lineno)
            check_name(b, lineno)
            add_term(field, vec, (a, b), field(c))
        coproduct[name] = vec
    return ParsedDocument(field, max_degree, degrees, differential, coproduct, primitive, family, gen_line)


def parse_coalgebra(text: str) -> DgCoalgebra:
    """Parse the coalgebra text format and validate the result."""
    doc = parse_document(text)
    return coalgebra_from_document(doc)


def coalgebra_from_document(doc: ParsedDocument) -> DgCoalgebra:
    c = DgCoalgebra(doc.field, doc.degrees, doc.differential, doc.coproduct, doc.max_degree, validate=False)
    problems = c.check()
    if problems:
        msg, g = problems[0]
        raise CoalgebraError(f"{msg}: generator {g} (line {doc.lines.get(g, '?')})", g)
    return c


def format_coalgebra(c: DgCoalgebra) -> str:
    """Inverse of :func:`parse_coalgebra` (up to term order)."""
    lines = [f"field {c.field}", f"maxdeg {c.max_degree}"]
    for g in c.all_generators():
        lines.append(f"gen {g} {c.degree(g)}")
    for g in c.all_generators():
        if c.differential(g):
            lines.append("d {} = {}".format(g, " + ".join(f"{v}*{k}" for k, v in c.differential(g).items())))
    if c.primitive:
        lines.append("primitive")
    else:
        for g in c.all_generators():
            if c.reduced_coproduct(g):
                lines.append("cop {} = {}".format(
                    g, " + ".join(f"{v}*{a}|{b}" for (a, b), v in c.reduced_coproduct(g).items())))
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------- constructors

def double_suspension(W, field: Field = Q, max_degree: Optional[int] = None) -> DgCoalgebra:
    """Coalgebra ``k + s^2 W`` with zero differential and primitive coproduct.

    ``W`` is a :class:`GradedSpace` or a mapping ``name -> degree`` (degrees >= 1).
    It models the homology of a double suspension whose reduced homology is ``W``.
    """
    if isinstance(W, GradedSpace):
        items = [(x, n) for n in W.degrees() for x in W.basis(n)]
    else:
        items = list(W.items())
    degrees = {}
    for x, n in items:
        if n < 1:
            raise ValueError(f"W must be concentrated in degrees >= 1; {x!r} has degree {n}")
        degrees[_shift_name(x, 2)] = n + 2
    return DgCoalgebra(field, degrees, max_degree=max_degree)


def homology_coalgebra(c: DgCoalgebra, contraction=None) -> DgCoalgebra:
    """``(H_*(C), 0)`` with the transferred coproduct ``(p (x) p) nabla i``."""
    from .transfer import build_contraction

    k = contraction or build_contraction(c.chain_complex())
    f = c.field
    degrees = {}
    cop = {}
    for n in k.small.space.degrees():
        for h in k.small.space.basis(n):
            degrees[h] = n
    for h in degrees:
        rep = k.include(h)
        vec: Vector = {}
        for g, cg in rep.items():
            for (a, b), cab in c.reduced_coproduct(g).items():
                pa = k.project({a: 1})
                pb = k.project({b: 1})
                for x, cx in pa.items():
                    for y, cy in pb.items():
                        add_term(f, vec, (x, y), cg * cab * cx * cy)
        cop[h] = vec
    return DgCoalgebra(f, degrees, {}, cop, c.max_degree)


# ------------------------------------------------------------ random inputs

def _tensor_coalgebra(field: Field, prefix: str, v_degrees: Dict[str, int], v_diff: Dict[str, Vector],
                      top: int) -> Tuple[Dict[str, int], Dict[str, Vector], Dict[str, Vector]]:
    """Deconcatenation coalgebra on a small complex ``V``, truncated at degree ``top``."""
    words: List[Tuple[str, ...]] = [(x,) for x in v_degrees]
    frontier = list(words)
    while frontier:
        nxt = []
        for w in frontier:
            for x in v_degrees:
                u = w + (x,)
                if sum(v_degrees[a] for a in u) <= top:
                    nxt.append(u)
        words.extend(nxt)
        frontier = nxt
    words = [w for w in words if sum(v_degrees[a] for a in w) <= top]
    name = lambda w: prefix + "|".join(w)
    degrees = {name(w): sum(v_degrees[a] for a in w) for w in words}
    diff: Dict[str, Vector] = {}
    cop: Dict[str, Vector] = {}
    for w in words:
        dv: Vector = {}
        acc = 0
        for j, a in enumerate(w):
            for b, c in v_diff.get(a, {}).items():
                add_term(field, dv, name(w[:j] + (b,) + w[j + 1:]), field.sign(acc) * c)
            acc += v_degrees[a]
        diff[name(w)] = dv
        cop[name(w)] = {(name(w[:j]), name(w[j:])): 1 for j in range(1, len(w))}
    return degrees, diff, cop


def random_coalgebra(seed: int, field: Field = Q, max_degree: int = 8,
                     primitive: bool = False) -> DgCoalgebra:
    """A seeded random 1-connected dg-coalgebra with generators in degrees ``<= max_degree``.

    Built as a wedge of cycles, acyclic pairs and (unless ``primitive``) truncated
    tensor coalgebras on small random complexes, followed by a random unitriangular
    change of basis in each degree.
    """
    import random

    rng = random.Random(seed)
    f = field
    coef = (lambda: 1) if f.characteristic == 2 else (lambda: rng.choice([1, -1, 2, -2, 3]))
    degrees: Dict[str, int] = {}
    diff: Dict[str, Vector] = {}
    cop: Dict[str, Vector] = {}
    top = max(max_degree, 4)
    for b in range(rng.randint(2, 4)):
        kind = rng.choice(["cycle", "pair"] if primitive else ["cycle", "pair", "tensor", "massey"])
        # few generators in degree 2 keep the number of cobar words small
        low = sum(1 for n in degrees.values() if n == 2)
        if kind == "cycle":
            degrees[f"c{b}"] = rng.randint(2 if low < 2 else 3, top)
        elif kind == "pair":
            n = rng.randint(2 if low < 2 else 3, top - 1)
            degrees[f"u{b}"], degrees[f"v{b}"] = n, n + 1
            diff[f"v{b}"] = {f"u{b}": coef()}
        elif kind == "massey":
            # a Massey-type block: the transferred partial_2 of m is generically nonzero over Q
            s = rng.randint(0, 1) if low == 0 else 1
            n = {"x": 2 + s, "y": 2 + s, "z": 2 + s, "U": 3 + 2 * s, "V": 3 + 2 * s,
                 "e": 4 + 2 * s, "f": 4 + 2 * s, "m": 5 + 3 * s}
            if n["m"] > top:
                continue
            degrees.update({f"{k}{b}": v for k, v in n.items()})
            diff[f"e{b}"] = {f"U{b}": coef()}
            diff[f"f{b}"] = {f"V{b}": coef()}
            cop[f"e{b}"] = {(f"x{b}", f"y{b}"): 1}
            cop[f"f{b}"] = {(f"y{b}", f"z{b}"): 1}
            cop[f"m{b}"] = {(f"U{b}", f"z{b}"): coef(), (f"x{b}", f"V{b}"): coef()}
        else:
            vd = {"a": 3, "b": rng.choice([3, 4])}
            vdiff: Dict[str, Vector] = {}
            if vd["b"] == 4 and rng.random() < 0.7:
                vdiff["b"] = {"a": coef()}
            dg, dd, cp = _tensor_coalgebra(f, f"t{b}:", vd, vdiff, rng.randint(min(6, top), top))
            degrees.update(dg)
            diff.update(dd)
            cop.update(cp)
    # random unitriangular change of basis within each degree: g -> g + sum_{later} t g'
    by_degree: Dict[int, List[str]] = {}
    for g in sorted(degrees):
        by_degree.setdefault(degrees[g], []).append(g)
    forward: Dict[str, Vector] = {}
    for gs in by_degree.values():
        for i, g in enumerate(gs):
            v: Vector = {g: 1}
            for h in gs[i + 1:]:
                if rng.random() < 0.5:
                    add_term(f, v, h, coef())
            forward[g] = v
    inverse: Dict[str, Vector] = {}
    for gs in by_degree.values():
        for g in reversed(gs):
            v = {g: 1}
            for h, c in forward[g].items():
                if h != g:
                    add_into(f, v, inverse[h], -c)
            inverse[g] = v

    def conj1(vec: Vector) -> Vector:
        out: Vector = {}
        for g, c in vec.items():
            add_into(f, out, inverse[g], c)
        return out

    def conj2(vec: Vector) -> Vector:
        out: Vector = {}
        for (a, b), c in vec.items():
            for x, cx in inverse[a].items():
                for y, cy in inverse[b].items():
                    add_term(f, out, (x, y), c * cx * cy)
        return out

    new_d: Dict[str, Vector] = {}
    new_cop: Dict[str, Vector] = {}
    for g in degrees:
        dv: Vector = {}
        cv: Vector = {}
        for h, c in forward[g].items():
            add_into(f, dv, diff.get(h, {}), c)
            add_into(f, cv, cop.get(h, {}), c)
        new_d[g] = conj1(dv)
        new_cop[g] = conj2(cv)
    return DgCoalgebra(f, degrees, new_d, new_cop, max_degree)
