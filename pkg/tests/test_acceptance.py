"""Acceptance criteria 1-11. Each test prints one PASS/FAIL line.

All arithmetic is exact (F2 or arbitrary-precision rationals), so every
comparison below is an equality with tolerance zero.
"""

from __future__ import annotations

import time
from importlib.resources import files

import pytest

from cobarlab.cobar import CobarError, antipode, check_bialgebra, cobar, double_cobar, recursive_antipode
from cobarlab.dgc import double_suspension, parse_coalgebra, random_coalgebra
from cobarlab.fields import F2, Q
from cobarlab.free_gerst import FreeModel, canonical_bv, hilbert_series_direct, hilbert_series_pbw, lie_basis
from cobarlab.hga import HgaStructure, check_hga_identities
from cobarlab.hirsch import TwistingFamily, check_hirsch, left_sided_check, parse_family, random_family
from cobarlab.homology_ring import (check_gerstenhaber_axioms, check_well_defined, homology_algebra,
                                    verify_bv, verify_freeness)
from cobarlab.transfer import build_contraction, cobar_gamma, transfer_ainfty, verify_formality
from cobarlab.vectors import add_into, scaled

TOLERANCE = 0          # exact equality throughout
TIME_BUDGET = 60.0     # seconds per criterion
SHIPPED = ["sphere1", "sphere2", "wedge12", "formal", "massey", "hirsch_toy", "hirsch_left"]
PRIMITIVE = ["sphere1", "sphere2", "wedge12", "formal"]


def load(name):
    return parse_family(files("cobarlab.data").joinpath(f"{name}.coalg").read_text())


@pytest.fixture
def report(capsys):
    start = time.perf_counter()

    def emit(n: int, ok: bool, detail: str) -> None:
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < TIME_BUDGET
        with capsys.disabled():
            print(f"\ncriterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}  ({elapsed:.1f}s)")
        assert ok, detail

    return emit


def test_criterion_01_differential_squares_to_zero(report):
    N = 10
    checked, failures = 0, []
    for name in SHIPPED:
        c, _ = load(name)
        algebras = [cobar(c, N)]
        try:
            algebras.append(double_cobar(c, N))
        except CobarError:
            pass    # Omega^2 needs C_2 = 0
        for a in algebras:
            for n in range(N + 1):
                for w in a.basis(n):
                    checked += 1
                    if a.d(a.differential(w)):
                        failures.append((name, a.level, w))
    report(1, not failures, f"d^2 = 0 on {checked} words, levels 1 and 2, N = {N}, failures {failures[:1]}")


def test_criterion_02_hopf_axioms(report):
    N = 10
    bad = []
    inputs = [(n, load(n)[0]) for n in PRIMITIVE]
    inputs += [(f"susp{W}", double_suspension(W, f)) for W in ({"x": 1, "y": 2}, {"x": 2}) for f in (F2, Q)]
    for name, c in inputs:
        a = cobar(c, N)
        res = check_bialgebra(a)
        bad += [(name, k, w) for k, (ok, w) in res.items() if not ok]
        _, rep = antipode(a)
        if not rep["involutive"]:
            bad.append((name, "S^2", rep["failures"][:1]))
        s = recursive_antipode(a, a.coproduct)
        if any(s(w) != a.antipode(w) for n in range(N + 1) for w in a.basis(n)):
            bad.append((name, "recursive antipode", None))
    report(2, not bad, f"counit/coassociative/chain map/multiplicative/antipode and S^2 = Id on {len(inputs)} "
                       f"coalgebras, N = {N}, failures {bad[:2]}")


def test_criterion_03_char2_identities(report):
    hga = HgaStructure(double_cobar(double_suspension({"x": 1}, F2), 7))
    rep = check_hga_identities(hga, 7)
    g = (("s^2(x)",),)
    honest = hga.cup1_basis

    def perturbed(x, y):
        v = dict(honest(x, y))
        if (x, y) == (g, g):
            add_into(F2, v, {g * 3: 1})
        return v

    mutant = check_hga_identities(HgaStructure(hga.carrier, cup1_override=perturbed), 7)
    caught = [r.name for r in mutant.results if not r.ok]
    counts = {r.name: r.checked for r in rep.results}
    report(3, rep.ok and len(rep.results) == 4 and bool(caught),
           f"four identities exact to degree 7 {counts}; mutation caught by {caught}")


def _freeness(field, dims_expected):
    rows, ok = [], True
    for W in ({"x": 1}, {"x": 2}, {"x": 1, "y": 2}):
        rep = verify_freeness(W, 8, field)
        dims = [r["dim_H"] for r in rep.rows]
        ok &= rep.ok and rep.generated and [r["dim_free"] for r in rep.rows] == dims
        ok &= dims_expected.get(tuple(sorted(W.items())), dims) == dims
        rows.append((W, dims, rep.ok))
    return ok, rows


def test_criterion_04_freeness_f2(report):
    ok, rows = _freeness(F2, {(("x", 1),): [1, 1, 1, 2, 2, 2, 3, 4, 4]})
    model = FreeModel({"x": 1}, F2, 8)
    low = [model.monomials(n) for n in range(4)]
    ok &= low == [[()], [("x",)], [("x", "x")], [("x", "x", "x"), ("xi(x)",)]]
    rep = verify_freeness({"x": 1}, 8, F2)
    ok &= all(rep.iota.image_rank(n) == rep.rows[n]["dim_H"] for n in range(4))
    report(4, ok, f"dim H_n = free restricted model, n <= 8, generated by s^-2 W: {rows}; degree <= 3 basis {low}")


def test_criterion_05_freeness_q(report):
    ok, rows = _freeness(Q, {(("x", 2),): [1, 0, 1, 0, 1, 1, 1, 1, 1]})
    report(5, ok, f"dim H_n = S(L_1(W)), n <= 8, generated by s^-2 W: {rows}")


def test_criterion_06_series_oracle(report):
    Ws = [{"x": 1}, {"x": 2}, {"x": 3}, {"x": 1, "y": 2}, {"x": 1, "y": 1}, {"x": 2, "y": 3},
          {"a": 1, "b": 2, "c": 4}]
    bad = []
    for W in Ws:
        for f in (F2, Q):
            direct = hilbert_series_direct(lie_basis(W, f, 12), f, 12)
            if direct != hilbert_series_pbw(W, f, 12):
                bad.append((W, f.name))
            if FreeModel(W, f, 8).dims(8) != direct[:9]:
                bad.append((W, f.name, "monomials"))
    report(6, not bad, f"enumerated basis = PBW inversion to n = 12 for {len(Ws)} W over F2 and Q, failures {bad}")


def test_criterion_07_transfer(report):
    N = 8
    bad, nontrivial = [], 0
    for seed in range(20):
        c = random_coalgebra(seed, Q if seed % 2 else F2, N)
        res = transfer_ainfty(c, max_degree=N, strict=False)
        if not res.relations_ok or not res.morphism_ok:
            bad.append(("random", seed, res.first_failure))
        nontrivial += any(v for m, by in res.partials.items() if m >= 2 for v in by.values())
    for seed in range(20):
        c = random_coalgebra(1000 + seed, Q if seed % 2 else F2, N, primitive=True)
        res = transfer_ainfty(c, max_degree=N, strict=False)
        if not (res.ok and res.vanish_from("partials", 2) and res.vanish_from("taus", 1)):
            bad.append(("primitive", seed, res.first_failure))
    report(7, not bad, f"A-infinity relations on 20 random coalgebras ({nontrivial} with partial_n != 0, n >= 2); "
                       f"20 primitive inputs have partial_(n>=2) = tau_(n>=1) = 0; N = {N}; failures {bad[:2]}")


def test_criterion_08_formality(report):
    N = 8
    inputs = [("formal", load("formal")[0])]
    inputs += [(f"random{s}", random_coalgebra(s, Q, N, primitive=True)) for s in (3, 17)]
    bad = []
    for name, c in inputs:
        if not any(c.differential(g) for n in range(N + 1) for g in c.generators(n)):
            bad.append((name, "zero differential"))
        rep = verify_formality(c, N)
        if not rep.ok:
            bad.append((name, rep.rows))
        g = cobar_gamma(build_contraction(c.chain_complex()), N, strict=False).report
        if not g["ok"]:
            bad.append((name, g["first_failure"]))
    dims = [(r["H(OmegaC)"], r["H(Omega2C)"]) for r in verify_formality(inputs[0][1], N).rows]
    report(8, not bad, f"H(Omega C), H(Omega^2 C) match H(Omega H), H(Omega^2 H) to degree {N}; Gamma homotopy "
                       f"and gauge identities hold; formal.coalg dims {dims}; failures {bad[:1]}")


def test_criterion_09_bv(report):
    bad = []
    for W in ({"x": 2}, {"x": 1, "y": 2}):
        m = FreeModel(W, Q, 8)
        table = canonical_bv(m)
        if any(m.delta(v) for v in table.values()):
            bad.append((W, "free Delta^2"))
        basis = [x for n in range(1, 8) for x in m.monomials(n)]
        for x in basis:
            for y in basis:
                if m.degree(x) + m.degree(y) + 1 > 8:
                    continue
                s = Q.sign(m.degree(x))
                lhs = m.delta(m.multiply_basis(x, y))
                add_into(Q, lhs, m.multiply(m.delta_basis(x), {y: 1}), -1)
                add_into(Q, lhs, m.multiply({x: 1}, m.delta_basis(y)), -s)
                if lhs != scaled(Q, m.bracket_basis(x, y), s):
                    bad.append((W, "free deviation", x, y))
        hga = HgaStructure(double_cobar(double_suspension(W, Q), 7))
        for n in range(1, 7):
            for x in hga.carrier.basis(n):
                dx = hga.delta_cm({x: 1})
                if len(x) == 1 and dx:
                    bad.append((W, "one-letter", x))
                if hga.delta_cm(dx):
                    bad.append((W, "Delta_CM^2", x))
                anti = hga.d(dx)
                add_into(Q, anti, hga.delta_cm(hga.d({x: 1})))
                if anti:
                    bad.append((W, "d Delta + Delta d", x))
        rep = verify_bv(W, 6)
        if not rep.ok:
            bad.append((W, "homology", rep.counterexample))
    report(9, not bad, f"canonical Delta: Delta^2 = 0 and deviation = bracket to 8; Delta_CM: square zero, "
                       f"graded-commutes with d, zero on one-letter words; H(Delta_CM) deviation = bracket to 6; "
                       f"failures {bad[:2]}")


def test_criterion_10_hirsch(report):
    bad = []
    c, _ = load("formal")
    reduced = check_hirsch(c, TwistingFamily(c.field), 8)
    if not all(ch.ok for ch in reduced.checks.values()) or not reduced.homotopy_g:
        bad.append(("reduced", {k: v.ok for k, v in reduced.checks.items()}))
    toy, fam = load("hirsch_toy")
    base = check_hirsch(toy, fam, 6)
    if not (base.hirsch and base["left_coideal"].ok):
        bad.append(("toy", {k: v.ok for k, v in base.checks.items()}))
    injected = fam.copy()
    injected.add(2, 1, "w", ("u", "v"), ("v",))
    inj = check_hirsch(toy, injected, 6)
    if inj["left_coideal"].ok or not inj["leftsided_iff"].ok:
        bad.append(("E21", inj["left_coideal"]))
    a = cobar(toy, 5)
    classes = {True: 0, False: 0}
    for seed in range(50):
        res = left_sided_check(a, random_family(a, seed, left_sided=seed % 2 == 0), 5)
        classes[res.left_coideal] += 1
        if not res.consistent:
            bad.append(("random", seed))
    ok = not bad and classes[True] > 0 and classes[False] > 0
    report(10, ok, f"reduced family passes; E^(2,1) injection fails left co-ideal at r = {inj['left_coideal'].failure}; "
                   f"equivalence on 50 random families ({classes[True]} left-sided, {classes[False]} not); "
                   f"failures {bad[:1]}")


def test_criterion_11_restricted_axioms(report):
    bad, counts = [], {}
    for W in ({"x": 1}, {"x": 1, "y": 2}, {"x": 1, "y": 1}):
        H = homology_algebra(W, F2, 6)
        rep = check_gerstenhaber_axioms(H, 6)
        for k, (ok, n) in rep.results.items():
            counts[k] = counts.get(k, 0) + n
        if not rep.ok:
            bad.append((W, rep.counterexamples))
        # the scalar rule: over F2 only xi(0) = 0 and xi(1 x) = xi(x) remain
        if H.xi({}) != {}:
            bad.append((W, "xi(0)"))
        wd = check_well_defined(H, trials=100, seed=11)
        if not wd.ok or sum(n for _, n in wd.results.values()) != 100:
            bad.append((W, "well-defined", wd.counterexamples))
    needed = {"bracket_symmetry", "jacobi", "xi_bracket", "xi_additive", "poisson", "xi_product", "commutative"}
    ok = not bad and all(counts.get(k, 0) > 0 for k in needed)
    report(11, ok, f"restricted Gerstenhaber axioms on class tuples <= 6 {counts}; 100 random boundaries per W "
                   f"leave operations unchanged; failures {bad[:1]}")
