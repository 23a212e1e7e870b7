from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cobarlab.dgc import (CoalgebraError, ParseError, double_suspension, format_coalgebra, homology_coalgebra,
                          parse_coalgebra, random_coalgebra)
from cobarlab.fields import F2, Q


def test_parse_examples():
    c = parse_coalgebra("field Q; gen X 3; primitive")
    assert c.field is Q and c.all_generators() == ["X"] and c.primitive
    c = parse_coalgebra("gen u 2; gen v 3; d v = u; primitive")
    h = homology_coalgebra(c)
    assert h.all_generators() == []
    with pytest.raises(ParseError) as e:
        parse_coalgebra("gen u 1")
    assert e.value.line == 1


def test_parse_errors_name_the_generator():
    with pytest.raises(CoalgebraError) as e:
        parse_coalgebra("gen a 2\ngen b 3\ngen c 4\nd b = a\nd c = b\n")
    assert e.value.generator == "c"
    with pytest.raises(ParseError):
        parse_coalgebra("gen a 2\nd b = a\n")
    with pytest.raises(ParseError):
        parse_coalgebra("gen a 3\nprimitive\ncop a = a|a\n")


def test_coassociativity_violation_detected():
    text = "gen a 2\ngen b 2\ngen c 4\ngen w 6\ncop w = a|c\n"
    with pytest.raises(CoalgebraError):
        parse_coalgebra(text + "cop c = a|b\n")


def test_double_suspension_degrees():
    assert [double_suspension({"x": 1}).degree(g) for g in double_suspension({"x": 1}).all_generators()] == [3]
    c = double_suspension({"x": 2})
    assert [c.degree(g) for g in c.all_generators()] == [4]
    c = double_suspension({"x": 1, "y": 2})
    assert sorted(c.degree(g) for g in c.all_generators()) == [3, 4]


def test_homology_coalgebra_examples():
    c = double_suspension({"x": 1, "y": 2}, Q)
    h = homology_coalgebra(c)
    assert sorted(h.degree(g) for g in h.all_generators()) == [3, 4] and h.primitive
    c = parse_coalgebra("gen x 3; gen u 4; gen v 5; d v = u; primitive")
    h = homology_coalgebra(c)
    assert [h.degree(g) for g in h.all_generators()] == [3] and h.primitive


def test_format_roundtrip():
    c = parse_coalgebra("field Q\ngen x 2\ngen y 2\ngen e 4\ngen U 3\nd e = U\ncop e = x|y\n")
    again = parse_coalgebra(format_coalgebra(c))
    assert format_coalgebra(again) == format_coalgebra(c)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([F2, Q]), st.booleans())
def test_random_coalgebras_are_valid(seed, field, primitive):
    c = random_coalgebra(seed, field, max_degree=8, primitive=primitive)
    assert c.check() == []
    assert not c.generators(1)
    if primitive:
        assert c.primitive
    assert format_coalgebra(random_coalgebra(seed, field, 8, primitive)) == format_coalgebra(c)
