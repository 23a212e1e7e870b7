"""Contractions, homotopy transfer of A-infinity coalgebra structure, and formality.

A contraction of a chain complex ``C`` onto its homology is built degreewise
from the splitting ``C_n = B_n + H_n + K_n``: ``B_n`` is spanned by boundaries
``d e_j`` of echelon pivot vectors ``e_j`` of ``C_{n+1}``, ``H_n`` by homology
representatives and ``K_n`` by the echelon pivot vectors of ``d_n``.  On that
basis ``p`` keeps the ``H`` part, ``i`` sends a class to its representative and
``nu(d e_j) = -e_j``, so that

    p i = Id,   i p - Id = d nu + nu d,   p nu = nu i = nu nu = 0.

On ``Omega C = T(s^-1 C+)`` the letterwise maps are ``p' = s^-1 p s``,
``i' = s^-1 i s`` and ``nu' = s^-1 nu s = -(letter of nu)`` (``nu`` is odd and
passes ``s^-1``).  The homotopy ``Gamma`` for the linear part of the cobar
differential is the tensor trick

    Gamma = sum_k Id^(x)k (x) nu' (x) (i'p')^(x)(n-k-1).

Transfer of the full cobar differential is the perturbation lemma with the
quadratic part ``delta`` of ``d_Omega`` as perturbation::

    A = sum_k (delta Gamma)^k delta,     D = (Omega p) A (Omega i),
    P = Omega p + (Omega p) A Gamma.

The one-letter components of ``D`` are the transferred co-operations
``partial_n`` (desuspended) and those of ``P`` are the twisting components
``tau_n``.  The A-infinity relations are checked as ``D' o D' = 0`` for the
derivation ``D'`` generated by the components.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from .cobar import CobarAlgebra, double_cobar
from .fields import Field
from .graded import ChainComplex, GradedMap, GradedSpace, word_key
from .linalg import ColumnSpaceSolver, SparseMatrix, homology, rank, rref
from .vectors import Vector, add_into, add_term, subtract

Word = Tuple


class TransferError(ValueError):
    """An identity that the transfer machinery must satisfy failed."""


# ------------------------------------------------------------------ contraction

@dataclass
class Contraction:
    """Deformation retract of ``big`` onto ``small = (H_*(big), 0)``."""

    big: ChainComplex
    small: ChainComplex
    p: GradedMap
    i: GradedMap
    nu: GradedMap

    @property
    def field(self) -> Field:
        return self.big.field

    def include(self, h) -> Vector:
        return self.i.apply_basis(h)

    def project(self, v: Vector) -> Vector:
        return self.p(v)

    def homotopy(self, v: Vector) -> Vector:
        return self.nu(v)

    def check(self, max_degree: Optional[int] = None) -> Dict[str, bool]:
        """The five contraction identities on every basis element up to ``max_degree``."""
        f = self.field
        d = self.big.differential
        ok = {"pi": True, "homotopy": True, "p_nu": True, "nu_i": True, "nu_nu": True}
        for n in self.small.space.degrees():
            if max_degree is not None and n > max_degree:
                continue
            for h in self.small.space.basis(n):
                ih = self.i.apply_basis(h)
                if self.p(ih) != {h: 1}:
                    ok["pi"] = False
                if self.nu(ih):
                    ok["nu_i"] = False
        for n in self.big.space.degrees():
            if max_degree is not None and n > max_degree:
                continue
            for x in self.big.space.basis(n):
                ipx = self.i(self.p.apply_basis(x))
                lhs = subtract(f, ipx, {x: 1})
                rhs: Vector = {}
                add_into(f, rhs, d(self.nu.apply_basis(x)))
                add_into(f, rhs, self.nu(d.apply_basis(x)))
                if lhs != rhs:
                    ok["homotopy"] = False
                nux = self.nu.apply_basis(x)
                if self.p(nux):
                    ok["p_nu"] = False
                if self.nu(nux):
                    ok["nu_nu"] = False
        return ok


def build_contraction(c: ChainComplex) -> Contraction:
    """Contraction of ``c`` onto ``(H_*(c), 0)``; classes are named after pivot basis elements."""
    f = c.field
    sp = c.space
    degrees = sp.degrees()
    top = max(degrees, default=0)
    small_basis: Dict[int, List[Hashable]] = {}
    p_img: Dict[Hashable, Vector] = {}
    i_img: Dict[Hashable, Vector] = {}
    nu_img: Dict[Hashable, Vector] = {}
    # pivot columns of d_n span a complement of the cycles in degree n
    complement = {}
    for n in range(top + 2):
        _, piv, _ = rref(c.d_matrix(n))
        complement[n] = piv
    for n in degrees:
        names = sp.basis(n)
        dn1 = c.d_matrix(n + 1)
        hom = homology(dn1, c.d_matrix(n))
        classes = [names[j] for j in hom.class_pivots]
        small_basis[n] = classes
        up = complement.get(n + 1, [])
        up_names = sp.basis(n + 1)
        columns: List[Dict[int, object]] = []
        roles: List[Tuple[str, object]] = []
        for j in up:
            columns.append(dn1.column(j))
            roles.append(("b", up_names[j]))
        for h, rep in zip(classes, hom.representatives):
            columns.append(dict(rep))
            roles.append(("h", h))
        for j in complement[n]:
            columns.append({j: 1})
            roles.append(("k", None))
        solver = ColumnSpaceSolver(SparseMatrix.from_columns(len(names), f, columns))
        if solver.rank != len(names):
            raise TransferError(f"splitting in degree {n} is not a basis")
        for h, rep in zip(classes, hom.representatives):
            i_img[h] = {names[j]: cf for j, cf in rep.items()}
        for j, x in enumerate(names):
            coords = solver.solve({j: 1})
            pv: Vector = {}
            nv: Vector = {}
            for col, cf in coords.items():
                role, name = roles[col]
                if role == "h":
                    add_term(f, pv, name, cf)
                elif role == "b":
                    add_term(f, nv, name, -cf)
            p_img[x] = pv
            nu_img[x] = nv
    small_space = GradedSpace(small_basis)
    small = ChainComplex(small_space, GradedMap.zero(small_space, small_space, -1, f))
    p = GradedMap(sp, small_space, 0, lambda x: p_img[x], f)
    i = GradedMap(small_space, sp, 0, lambda h: i_img[h], f)
    nu = GradedMap(sp, sp, 1, lambda x: nu_img[x], f)
    return Contraction(c, small, p, i, nu)


# --------------------------------------------------------------- tensor algebra

def _words(letters: Dict[int, List[Hashable]], n: int, memo: Dict[int, List[Word]]) -> List[Word]:
    if n in memo:
        return memo[n]
    if n == 0:
        out = [()]
    else:
        out = []
        for k, gs in letters.items():
            if 1 <= k <= n:
                for g in gs:
                    out.extend((g,) + rest for rest in _words(letters, n - k, memo))
    memo[n] = sorted(out, key=word_key)
    return memo[n]


class TensorSide:
    """``T(s^-1 V)`` for a graded space ``V`` concentrated in degrees >= 2."""

    def __init__(self, space: GradedSpace, field: Field):
        self.space = space
        self.field = field
        self._letters: Dict[int, List[Hashable]] = {}
        for n in space.degrees():
            if n < 2:
                raise TransferError("letters need degree >= 2 before desuspension")
            self._letters[n - 1] = space.basis(n)
        self._memo: Dict[int, List[Word]] = {}

    def letter_degree(self, g) -> int:
        return self.space.degree_of(g) - 1

    def degree(self, w: Word) -> int:
        return sum(self.letter_degree(g) for g in w)

    def basis(self, n: int) -> List[Word]:
        return list(_words(self._letters, n, self._memo)) if n >= 0 else []

    def derivation(self, letter_map: Callable[[Hashable], Vector], parity: int, w: Word) -> Vector:
        """Extend a letter map of the given parity to ``w`` as a graded derivation."""
        f = self.field
        out: Vector = {}
        acc = 0
        for j, g in enumerate(w):
            s = f.sign(parity * acc)
            for mid, c in letter_map(g).items():
                add_term(f, out, w[:j] + mid + w[j + 1:], s * c)
            acc += self.letter_degree(g)
        return out

    def linear(self, vec: Vector, fn: Callable[[Word], Vector]) -> Vector:
        out: Vector = {}
        for w, c in vec.items():
            add_into(self.field, out, fn(w), c)
        return out


def _tensor_letters(f: Field, w: Word, images: Sequence[Vector]) -> Vector:
    """Concatenate letterwise images (degree-0 letter maps, no signs)."""
    out: Vector = {(): 1}
    for img in images:
        nxt: Vector = {}
        for a, ca in out.items():
            for b, cb in img.items():
                add_term(f, nxt, a + b, ca * cb)
        out = nxt
        if not out:
            break
    return out


class CobarGamma:
    """The tensor-trick homotopy ``Gamma`` on ``(T(s^-1 C+), T(s^-1 d))``."""

    def __init__(self, k: Contraction):
        self.k = k
        self.field = k.field
        self.big = TensorSide(k.big.space, self.field)
        self.small = TensorSide(k.small.space, self.field)
        self._cache: Dict[Word, Vector] = {}
        self._rec_cache: Dict[Word, Vector] = {}

    # letterwise maps, all as maps of one-letter words
    def nu_letter(self, g) -> Vector:
        return {(x,): -c for x, c in self.k.nu.apply_basis(g).items()}

    def ip_letter(self, g) -> Vector:
        return {(x,): c for x, c in self.k.i(self.k.p.apply_basis(g)).items()}

    def d_letter(self, g) -> Vector:
        return {(x,): -c for x, c in self.k.big.differential.apply_basis(g).items()}

    def d(self, w: Word) -> Vector:
        return self.big.derivation(self.d_letter, 1, w)

    def omega_p(self, w: Word) -> Vector:
        return _tensor_letters(self.field, w, [{(h,): c for h, c in self.k.p.apply_basis(g).items()} for g in w])

    def omega_i(self, w: Word) -> Vector:
        return _tensor_letters(self.field, w, [{(x,): c for x, c in self.k.i.apply_basis(h).items()} for h in w])

    def _with_nu_at(self, w: Word, k: int, rest: Callable[[Hashable], Vector]) -> Vector:
        f = self.field
        s = f.sign(sum(self.big.letter_degree(g) for g in w[:k]))
        images = [{(g,): 1} for g in w[:k]] + [self.nu_letter(w[k])] + [rest(g) for g in w[k + 1:]]
        return {x: s * c for x, c in _tensor_letters(f, w, images).items()}

    def gamma(self, w: Word) -> Vector:
        """Tensor-trick form."""
        v = self._cache.get(w)
        if v is None:
            v = {}
            for k in range(len(w)):
                add_into(self.field, v, self._with_nu_at(w, k, self.ip_letter))
            self._cache[w] = v
        return v

    def gamma_expanded(self, w: Word) -> Vector:
        """Sum over a first ``nu'`` and any subset of later letters carrying ``dnu' + nu'd``."""
        f = self.field
        out: Vector = {}
        dbar = lambda g: subtract(f, self.ip_letter(g), {(g,): 1})
        for k in range(len(w)):
            tail = len(w) - k - 1
            for mask in itertools.product((0, 1), repeat=tail):
                choice = iter(mask)
                add_into(f, out, self._with_nu_at(w, k, lambda g: dbar(g) if next(choice) else {(g,): 1}))
        return out

    def gamma_recursive(self, w: Word) -> Vector:
        """``Gamma_n = Id (x) Gamma_{n-1} + nu' (x) dbar Gamma_{n-1} + nu' (x) Id``."""
        if not w:
            return {}
        v = self._rec_cache.get(w)
        if v is not None:
            return v
        f = self.field
        head, rest = w[0], w[1:]
        out: Vector = {}
        s = f.sign(self.big.letter_degree(head))
        for x, c in self.gamma_recursive(rest).items():
            add_term(f, out, (head,) + x, s * c)
        dbar = self.big.linear(self.gamma_recursive(rest), self.d)
        add_into(f, dbar, self.big.linear(self.d(rest), self.gamma_recursive))
        add_term(f, dbar, rest, 1)
        for a, ca in self.nu_letter(head).items():
            for x, c in dbar.items():
                add_term(f, out, a + x, ca * c)
        self._rec_cache[w] = out
        return out

    def check(self, max_degree: int) -> Dict[str, object]:
        """Homotopy, gauge and agreement-of-forms checks on all words of degree ``<= max_degree``."""
        f = self.field
        big = self.big
        res = {"homotopy": True, "p_gamma": True, "gamma_i": True, "gamma_gamma": True,
               "forms_agree": True, "first_failure": None}

        def fail(key, w):
            if res[key]:
                res[key] = False
                if res["first_failure"] is None:
                    res["first_failure"] = (key, w)

        for n in range(max_degree + 1):
            for w in big.basis(n):
                g = self.gamma(w)
                lhs = big.linear(self.omega_p(w), self.omega_i)
                add_term(f, lhs, w, -1)
                rhs = big.linear(g, self.d)
                add_into(f, rhs, big.linear(self.d(w), self.gamma))
                if lhs != rhs:
                    fail("homotopy", w)
                if big.linear(g, self.omega_p):
                    fail("p_gamma", w)
                if big.linear(g, self.gamma):
                    fail("gamma_gamma", w)
                if self.gamma_expanded(w) != g or self.gamma_recursive(w) != g:
                    fail("forms_agree", w)
            for w in self.small.basis(n):
                if big.linear(self.omega_i(w), self.gamma):
                    fail("gamma_i", w)
        res["ok"] = all(res[k] for k in ("homotopy", "p_gamma", "gamma_i", "gamma_gamma", "forms_agree"))
        return res


def cobar_gamma(k: Contraction, max_degree: int, strict: bool = True) -> CobarGamma:
    """``Gamma`` on ``Omega C`` for the linear cobar differential, verified up to ``max_degree``."""
    g = CobarGamma(k)
    report = g.check(max_degree)
    g.report = report
    if strict and not report["ok"]:
        raise TransferError(f"Gamma identity failure: {report['first_failure']}")
    return g


# ---------------------------------------------------------------- HTT

@dataclass
class TransferResult:
    """Transferred co-operations and twisting components, desuspended.

    ``partials[n][h]`` is the ``(n+1)``-letter part of ``D(s^-1 h)`` and
    ``taus[n][g]`` the ``(n+1)``-letter part of ``P(s^-1 g)``.
    """

    max_degree: int
    partials: Dict[int, Dict[Hashable, Vector]]
    taus: Dict[int, Dict[Hashable, Vector]]
    relations_ok: bool
    morphism_ok: bool
    first_failure: Optional[Tuple[str, Word]] = None
    contraction: Optional[Contraction] = dc_field(default=None, repr=False)

    def vanish_from(self, table: str, n: int) -> bool:
        comps = self.partials if table == "partials" else self.taus
        return all(not v for m, by in comps.items() if m >= n for v in by.values())

    @property
    def ok(self) -> bool:
        return self.relations_ok and self.morphism_ok


class _Perturbed:
    """Perturbation of the tensor-trick contraction by the quadratic cobar differential."""

    def __init__(self, c, k: Contraction):
        self.c = c
        self.gam = CobarGamma(k)
        self.field = k.field
        self._a_cache: Dict[Word, Vector] = {}

    def delta_letter(self, g) -> Vector:
        f = self.field
        out: Vector = {}
        for (a, b), cf in self.c.reduced_coproduct(g).items():
            add_term(f, out, (a, b), f.sign(self.c.degree(a)) * cf)
        return out

    def delta(self, w: Word) -> Vector:
        return self.gam.big.derivation(self.delta_letter, 1, w)

    def series(self, w: Word) -> Vector:
        """``A(w) = sum_k (delta Gamma)^k delta (w)``."""
        v = self._a_cache.get(w)
        if v is not None:
            return v
        big = self.gam.big
        out: Vector = {}
        term = self.delta(w)
        while term:
            add_into(self.field, out, term)
            term = big.linear(big.linear(term, self.gam.gamma), self.delta)
        self._a_cache[w] = out
        return out


def transfer_ainfty(c, k: Optional[Contraction] = None, max_degree: int = 8,
                    strict: bool = True, morphism_degree: Optional[int] = None) -> TransferResult:
    """Transfer ``(Omega C, d)`` to ``Omega H_*(C)``: components ``partial_n`` and ``tau_n``.

    Checks the A-infinity relations ``D' D' = 0`` on every word of degree
    ``<= max_degree`` and the twisting relation ``P' d = D' P'`` up to
    ``morphism_degree`` (default ``min(max_degree, 6)``; the source side has far
    more words), where ``D'``/``P'`` are generated by the components.
    """
    if morphism_degree is None:
        morphism_degree = min(max_degree, 6)
    if c.generators(1):
        raise TransferError("coalgebra is not 1-connected")
    k = k or build_contraction(c.chain_complex())
    pert = _Perturbed(c, k)
    gam = pert.gam
    f = k.field
    big, small = gam.big, gam.small
    full = CobarAlgebra(c, max(max_degree, 2))

    partials: Dict[int, Dict[Hashable, Vector]] = {}
    d_small: Dict[Hashable, Vector] = {}
    for n in range(1, max_degree + 2):
        for h in k.small.space.basis(n + 1):
            img = big.linear(big.linear(gam.omega_i((h,)), pert.series), gam.omega_p)
            d_small[h] = img
            for w, cf in img.items():
                partials.setdefault(len(w) - 1, {}).setdefault(h, {})[w] = cf
    taus: Dict[int, Dict[Hashable, Vector]] = {}
    p_big: Dict[Hashable, Vector] = {}
    for n in range(1, max_degree + 1):
        for g in k.big.space.basis(n + 1):
            img = gam.omega_p((g,))
            add_into(f, img, big.linear(big.linear(gam.gamma((g,)), pert.series), gam.omega_p))
            p_big[g] = img
            for w, cf in img.items():
                taus.setdefault(len(w) - 1, {}).setdefault(g, {})[w] = cf

    d_memo: Dict[Word, Vector] = {}

    def D(w: Word) -> Vector:
        v = d_memo.get(w)
        if v is None:
            v = d_memo[w] = small.derivation(lambda h: d_small.get(h, {}), 1, w)
        return v

    relations_ok = morphism_ok = True
    failure = None
    for n in range(max_degree + 1):
        for w in small.basis(n):
            if small.linear(D(w), D):
                relations_ok = False
                failure = failure or ("ainfty", w)
    for n in range(morphism_degree + 1):
        for w in big.basis(n):
            pw = _tensor_letters(f, w, [p_big[g] for g in w])
            lhs = small.linear(pw, D)
            rhs = big.linear(full.differential(w), lambda x: _tensor_letters(f, x, [p_big[g] for g in x]))
            if lhs != rhs:
                morphism_ok = False
                failure = failure or ("morphism", w)
    for by in (partials, taus):
        for m in list(by):
            by[m] = {h: v for h, v in by[m].items() if v}
    res = TransferResult(max_degree, partials, taus, relations_ok, morphism_ok, failure, k)
    if strict and not res.ok:
        raise TransferError(f"A-infinity relation failure at {failure}")
    return res


def partial2_direct(c, k: Contraction, h) -> Vector:
    """``(p (x) p (x) p)(nabla nu (x) Id - Id (x) nabla nu) nabla i (h)`` as a tensor vector."""
    f = k.field
    out: Vector = {}
    rep = k.include(h)
    for g, cg in rep.items():
        for (x, y), cxy in c.reduced_coproduct(g).items():
            for u, cu in k.nu.apply_basis(x).items():
                for (a, b), cab in c.reduced_coproduct(u).items():
                    add_term(f, out, (a, b, y), cg * cxy * cu * cab)
            s = f.sign(c.degree(x))
            for v, cv in k.nu.apply_basis(y).items():
                for (a, b), cab in c.reduced_coproduct(v).items():
                    add_term(f, out, (x, a, b), -s * cg * cxy * cv * cab)
    proj: Vector = {}
    for (a, b, y), cf in out.items():
        for pa, ca in k.p.apply_basis(a).items():
            for pb, cb in k.p.apply_basis(b).items():
                for py, cy in k.p.apply_basis(y).items():
                    add_term(f, proj, (pa, pb, py), cf * ca * cb * cy)
    return proj


def desuspend_tensor(f: Field, degree_of: Callable[[Hashable], int], vec: Vector) -> Vector:
    """``(s^-1)^(x)n`` applied to a vector of tensors."""
    out: Vector = {}
    for t, cf in vec.items():
        n = len(t)
        parity = sum((n - 1 - j) * degree_of(x) for j, x in enumerate(t))
        add_term(f, out, t, f.sign(parity) * cf)
    return out


# ---------------------------------------------------------------- formality

@dataclass
class FormalityReport:
    max_degree: int
    rows: List[Dict[str, object]]
    algebra_map_ok: bool
    gamma_ok: bool
    double_checked: bool
    ok: bool
    gamma_report: Dict[str, object] = dc_field(default_factory=dict)

    @property
    def columns(self) -> List[str]:
        return ["degree", "H(OmegaC)", "H(OmegaH)", "induced_invertible", "H(Omega2C)", "H(Omega2H)"]


def verify_formality(c, max_degree: int = 8) -> FormalityReport:
    """Compare ``Omega C`` with ``Omega H_*(C)`` and ``Omega^2 C`` with ``Omega^2 H_*(C)``."""
    from .dgc import homology_coalgebra

    if not c.primitive:
        raise TransferError("formality check needs a primitive coproduct")
    f = c.field
    k = build_contraction(c.chain_complex())
    hc = homology_coalgebra(c, k)
    gam = CobarGamma(k)
    omega_c = CobarAlgebra(c, max_degree + 1)
    omega_h = CobarAlgebra(hc, max_degree + 1)

    algebra_map_ok = True
    for n in range(max_degree + 2):
        for w in omega_c.basis(n):
            lhs = gam.big.linear(omega_c.differential(w), gam.omega_p)
            rhs = omega_h.d(gam.omega_p(w))
            if lhs != rhs:
                algebra_map_ok = False

    rows = []
    for n in range(max_degree + 1):
        hc_n = omega_c.homology(n)
        hh_n = omega_h.homology(n)
        invertible = hc_n.dimension == hh_n.dimension
        if invertible and hc_n.dimension:
            cb = omega_c.basis(n)
            idx = {w: j for j, w in enumerate(omega_h.basis(n))}
            cols = []
            for rep in hc_n.representatives:
                img: Vector = {}
                for j, cf in rep.items():
                    add_into(f, img, gam.omega_p(cb[j]), cf)
                coords = hh_n.coordinates({idx[w]: cf for w, cf in img.items()})
                cols.append({r: v for r, v in enumerate(coords) if f.reduce(v)})
            m = SparseMatrix.from_columns(hh_n.dimension, f, cols)
            invertible = rank(m) == hh_n.dimension
        rows.append({"degree": n, "H(OmegaC)": hc_n.dimension, "H(OmegaH)": hh_n.dimension,
                     "induced_invertible": invertible})

    double_checked = not c.generators(2)
    if double_checked:
        o2c = double_cobar(c, max_degree + 1)
        o2h = double_cobar(hc, max_degree + 1)
        for row in rows:
            n = row["degree"]
            row["H(Omega2C)"] = o2c.homology(n).dimension
            row["H(Omega2H)"] = o2h.homology(n).dimension
    else:
        for row in rows:
            row["H(Omega2C)"] = row["H(Omega2H)"] = None

    gamma_report = gam.check(max_degree)
    ok = (algebra_map_ok and gamma_report["ok"]
          and all(r["H(OmegaC)"] == r["H(OmegaH)"] and r["induced_invertible"] for r in rows)
          and all(r["H(Omega2C)"] == r["H(Omega2H)"] for r in rows))
    return FormalityReport(max_degree, rows, algebra_map_ok, gamma_report["ok"], double_checked, ok, gamma_report)
