from __future__ import annotations

import itertools
from importlib.resources import files

import pytest
from hypothesis import given, settings, strategies as st

from cobarlab.cobar import CobarAlgebra, coproduct_nabla0
from cobarlab.dgc import ParseError
from cobarlab.hirsch import (FamilyError, TwistingFamily, build_nabla_E, check_hirsch, coassoc_111_residual,
                             format_family, left_sided_check, nabla1_homotopy_residual, parse_family,
                             random_family)
from cobarlab.vectors import add_term


def bundled(name):
    return parse_family(files("cobarlab.data").joinpath(name).read_text())


@pytest.fixture(scope="module")
def toy():
    return bundled("hirsch_toy.coalg")


def test_parse_and_format_roundtrip(toy):
    c, fam = toy
    assert fam.nabla1("w") == {(("u'",), ("v",)): -1, (("v",), ("u'",)): -1}
    assert fam.left_arity_support() == []
    text = format_family(fam)
    assert text.startswith("E 1 1 : w = ")
    header = files("cobarlab.data").joinpath("hirsch_toy.coalg").read_text().split("\nE 1 1")[0] + "\n"
    _, again = parse_family(header + text)
    assert again.components == fam.components


@pytest.mark.parametrize("line", ["E 0 2 : w = <; u|v>", "E 1 0 : w = 2*<w ; >", "E 2 0 : w = <u|v ; >"])
def test_counit_violations_are_rejected(line):
    with pytest.raises(FamilyError):
        parse_family("gen u 2\ngen v 2\ngen w 4\n" + line)


def test_forced_components_may_be_written():
    _, fam = parse_family("gen u 2\ngen w 4\nE 1 0 : w = <w ; >\nE 0 1 : w = < ; w>\nprimitive")
    assert fam.is_reduced


@pytest.mark.parametrize("line", ["E 1 1 : w = <u ; q>", "E 1 2 : w = <u ; v>", "E 1 1 w = <u ; v>",
                                  "E 1 1 : w = <u v>"])
def test_malformed_family_lines(line):
    with pytest.raises(ParseError):
        parse_family("gen u 2\ngen v 2\ngen w 4\n" + line)


def test_nonzero_degree_component_is_rejected():
    c, _ = parse_family("gen u 2\ngen v 2\ngen w 5\nprimitive")
    fam = TwistingFamily(c.field)
    fam.add(1, 1, "w", ("u",), ("v",))
    with pytest.raises(FamilyError):
        build_nabla_E(c, fam, 6)


def test_unit_and_reduced_family(toy):
    c, _ = toy
    a = CobarAlgebra(c, 8)
    nab = build_nabla_E(a, TwistingFamily(c.field), 8)
    assert nab(()) == {((), ()): 1}
    prim, _ = parse_family("field Q\ngen x 3\ngen u 4\ngen v 5\nd v = u\nprimitive")
    b = CobarAlgebra(prim, 8)
    reduced = build_nabla_E(b, TwistingFamily(prim.field), 8)
    nabla0 = coproduct_nabla0(b)
    for n in range(9):
        for w in b.basis(n):
            assert reduced(w) == nabla0(w)


def expand_oracle(a, fam, w):
    """Product over letters of (c|1 + 1|c + E11(c)), summed term by term with Koszul signs."""
    f = a.field
    choices = []
    for g in w:
        opts = [((g,), (), 1), ((), (g,), 1)]
        opts += [(p, q, c) for (p, q), c in fam.nabla1(g).items()]
        choices.append(opts)
    out = {}
    for pick in itertools.product(*choices):
        sign = 0
        for i, (_, q, _) in enumerate(pick):
            for (p2, _, _) in pick[i + 1:]:
                sign += a.degree(q) * a.degree(p2)
        coef = f.sign(sign)
        for *_, c in pick:
            coef *= c
        left = tuple(x for p, _, _ in pick for x in p)
        right = tuple(x for _, q, _ in pick for x in q)
        add_term(f, out, (left, right), coef)
    return out


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_multiplicative_extension_matches_oracle(seed):
    c, _ = bundled("hirsch_toy.coalg")
    a = CobarAlgebra(c, 6)
    fam = random_family(a, seed, left_sided=True, max_arity=2, density=0.3)
    nab = build_nabla_E(a, fam, 6)
    for n in range(1, 7):
        for w in a.basis(n):
            assert nab(w) == expand_oracle(a, fam, w)


def test_toy_is_a_homotopy_g_structure(toy):
    c, fam = toy
    rep = check_hirsch(c, fam, 8)
    assert all(ch.ok for ch in rep.checks.values())
    assert rep.hirsch and rep.homotopy_g
    assert all(ok for ok, _ in rep.bialgebra.values())
    assert rep.coassoc_111["signed"]


def test_toy_without_nabla1_fails_leibniz(toy):
    c, _ = toy
    rep = check_hirsch(c, TwistingFamily(c.field), 6)
    assert not rep["leibniz"].ok and rep["leibniz"].failure == ("w",)
    assert not rep["nabla1_homotopy"].ok
    assert rep["left_coideal"].ok and rep["leftsided_iff"].ok


def test_injected_e21_breaks_left_coideal_at_r1(toy):
    c, fam = toy
    bad = fam.copy()
    bad.add(2, 1, "w", ("u", "v"), ("v",))
    rep = check_hirsch(c, bad, 6)
    assert not rep["left_coideal"].ok and rep["left_coideal"].failure == 1
    assert rep["leftsided_iff"].ok
    assert rep.left_arity == [(2, 1)]
    _, shipped = bundled("hirsch_left.coalg")
    assert shipped.components == bad.components


def test_residual_helpers(toy):
    c, fam = toy
    a = CobarAlgebra(c, 6)
    assert nabla1_homotopy_residual(a, fam, "w") == {}
    assert nabla1_homotopy_residual(a, TwistingFamily(c.field), "w") != {}
    assert coassoc_111_residual(a, fam, "w", True) == {}


def test_left_sided_equivalence_on_random_families(toy):
    c, _ = toy
    a = CobarAlgebra(c, 5)
    seen = {True: 0, False: 0}
    for seed in range(50):
        fam = random_family(a, seed, left_sided=seed % 2 == 0)
        res = left_sided_check(a, fam, 5)
        assert res.consistent, seed
        seen[res.left_coideal] += 1
    assert seen[True] and seen[False]
