"""Strictly positive modal formulas and the derivability decision."""

from __future__ import annotations

import pytest

from refcalc.errors import ParseError
from refcalc.rc import (
    Conj,
    Dia,
    TOP,
    Top,
    closed_formulas_up_to,
    conj,
    derives,
    dia,
    equivalent,
    flatten,
    format_formula,
    formulas_of_size,
    less_n,
    max_level,
    parse_formula,
    size,
)

D0 = dia(0, TOP)
D1 = dia(1, TOP)
D2 = dia(2, TOP)

FAMILY = closed_formulas_up_to(3, (0, 1, 2))


# --- structure --------------------------------------------------------------


def test_conj_flattens_and_drops_top():
    assert conj([]) == TOP
    assert conj([D0]) == D0
    assert conj([TOP, D0, TOP]) == D0
    inner = conj([D0, D1])
    assert conj([inner, D2]) == Conj((D0, D1, D2))
    assert flatten(TOP) == ()
    assert flatten(inner) == (D0, D1)
    assert flatten(D2) == (D2,)


def test_conj_preserves_order_and_duplicates():
    assert conj([D1, D0]) == Conj((D1, D0))
    assert conj([D0, D0]) == Conj((D0, D0))


def test_size_and_levels():
    assert size(TOP) == 1
    assert size(dia(1, dia(0, TOP))) == 3
    assert size(conj([D0, D1])) == 4
    assert max_level(TOP) == 0
    assert max_level(dia(0, dia(2, TOP))) == 2


def test_enumeration_counts():
    assert len(FAMILY) == 13
    assert sorted(set(map(size, FAMILY))) == [1, 2, 3]
    assert list(formulas_of_size(1, (0, 1))) == [TOP]
    # size 3 over two levels: the four two-letter stacks (conjunctions
    # of two diamonds already weigh 4)
    assert len(list(formulas_of_size(3, (0, 1)))) == 4


# --- text form ----------------------------------------------------------------


@pytest.mark.parametrize(
    "text",
    ["T", "<0>T", "<2><0>T", "<1>T & <0><2>T", "<0>(<1>T & <0>T) & <1>T"],
)
def test_round_trip(text):
    assert format_formula(parse_formula(text)) == text


def test_parse_accepts_whitespace_and_nesting():
    assert parse_formula(" <1> ( T ) ") == D1
    assert parse_formula("(<0>T & <1>T)") == conj([D0, D1])


@pytest.mark.parametrize("text", ["", "<>T", "<1T", "T &", "T T", "<1>"])
def test_parse_rejects_garbage(text):
    with pytest.raises(ParseError):
        parse_formula(text)


# --- derivability: hand-checkable instances ----------------------------------


def test_identity_and_top():
    for f in FAMILY:
        assert derives(f, f)
        assert derives(f, TOP)


def test_projection():
    both = conj([D0, D1])
    assert derives(both, D0)
    assert derives(both, D1)
    assert derives(both, conj([D1, D0]))


def test_level_lowering_is_one_way():
    assert derives(D1, D0)
    assert derives(D2, D0)
    assert not derives(D0, D1)
    assert not derives(D1, D2)


def test_nested_diamond_contraction():
    assert derives(dia(0, dia(0, TOP)), D0)
    # and never the converse: one step of consistency is weaker than two
    assert not derives(D0, dia(0, dia(0, TOP)))


def test_context_packing():
    lhs = conj([D1, D0])
    assert derives(lhs, dia(1, D0))
    assert not derives(D1, dia(0, D1))


def test_higher_diamond_absorbs_lower_tail():
    # <1>T proves <1><0>T outright, so the two are equivalent
    assert derives(D1, dia(1, D0))
    assert equivalent(D1, dia(1, D0))
    assert not equivalent(D0, dia(0, D0))


def test_monotonicity_rule_cases():
    assert derives(dia(2, dia(1, TOP)), dia(2, dia(0, TOP)))
    assert derives(dia(0, conj([D0, D1])), dia(0, D1))


def test_less_n_matches_its_definition():
    a, b = D0, D1
    assert less_n(0, a, b) == derives(b, dia(0, a))
    assert less_n(0, D0, D1)
    assert not less_n(0, D1, D0)
    assert not less_n(0, D0, D0)
    assert less_n(1, D1, D2)
    # <1>T absorbs a <0>T tail, so D0 <_1 D1 holds; D0 <_2 D1 does not
    assert less_n(1, D0, D1)
    assert not less_n(2, D0, D1)


# --- axiom schemata over a small closed family --------------------------------


def test_conjunction_axioms_over_family():
    for a in FAMILY:
        for b in FAMILY:
            both = conj([a, b])
            assert derives(both, a)
            assert derives(both, b)


def test_contraction_and_lowering_over_family():
    for a in FAMILY:
        for n in (0, 1, 2):
            assert derives(dia(n, dia(n, a)), dia(n, a))
            for m in range(n):
                assert derives(dia(n, a), dia(m, a))


def test_packing_axiom_over_family():
    for a in FAMILY[:6]:
        for b in FAMILY[:6]:
            for n in (1, 2):
                for m in range(n):
                    lhs = conj([dia(n, a), dia(m, b)])
                    rhs = dia(n, conj([a, dia(m, b)]))
                    assert derives(lhs, rhs)


def test_rules_preserve_derivability():
    # cut, conjunction introduction, monotonicity on sampled sound premises
    pairs = [(a, b) for a in FAMILY for b in FAMILY if derives(a, b)]
    assert pairs
    for a, b in pairs[:40]:
        for c in FAMILY[:5]:
            if derives(b, c):
                assert derives(a, c)
        assert derives(a, conj([b, b]))
        for n in (0, 1):
            assert derives(dia(n, a), dia(n, b))


def test_equivalence_is_a_congruence_sample():
    a = conj([D0, D1])
    b = conj([D1, D0])
    assert equivalent(a, b)
    assert equivalent(dia(2, a), dia(2, b))
    assert equivalent(conj([a, D2]), conj([D2, b]))
