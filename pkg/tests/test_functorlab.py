import pytest

from artifact import fixtures, operad
from artifact.functorlab import (
    COVARIANT,
    GammaCat,
    SpanCat,
    compose_ab,
    cross_effect,
    cross_effect_vanishes,
    degree,
    degree_of_composition_bound_check,
    divided_square,
    functoriality_check,
    linearized_hom,
    symmetric_square,
    taylor_truncate,
    tensor_power,
    zero_functor,
)
from artifact.zmod import FgAbGroup

FIXTURE_DEGREES = {"Lin": 1, "T^2(Lin)": 2, "S^2(Lin)": 2, "Gamma^2(Lin)": 2, "P2": 2}


def test_span_fixtures_are_functors(span_cat):
    for F in fixtures.span_fixture_set(span_cat):
        rep = functoriality_check(F, objects=[0, 1, 2], max_checks=400)
        assert rep.ok, (F.name, rep.witnesses)


def test_fixture_degrees(span_cat):
    degs = {F.name: degree(F) for F in fixtures.span_fixture_set(span_cat)}
    assert sorted(degs.values()) == sorted(FIXTURE_DEGREES.values())
    assert degree(fixtures.tensor_cube(span_cat)) == 3


def test_fixtures_are_reduced(span_cat):
    for F in fixtures.span_fixture_set(span_cat):
        assert F.is_reduced()
        assert F.group(0) == FgAbGroup(0)


def test_tensor_square_cross_effects(span_cat):
    F = fixtures.tensor_square(span_cat)
    assert cross_effect(F, (1, 1)).group == FgAbGroup(2)
    assert cross_effect_vanishes(F, (1, 1, 1))


def test_zero_functor_has_degree_zero(span_cat):
    assert degree(zero_functor(span_cat)) == 0


def test_composition_degree_bound(span_cat):
    lin = fixtures.lin(span_cat)
    for G in (tensor_power(2), symmetric_square(), divided_square()):
        assert degree_of_composition_bound_check(lin, G, lin).ok


def test_ab_functor_values_on_rank_two():
    assert tensor_power(2).rank(2) == 4
    assert symmetric_square().rank(2) == 3
    assert divided_square().rank(2) == 3


def test_taylor_truncation_of_degree_two_is_lossless(span_cat):
    F = fixtures.tensor_square(span_cat)
    T = taylor_truncate(F, 2)
    assert T.group(1) == F.group(1)


def test_taylor_truncation_of_tensor_square_to_degree_one():
    cat = SpanCat(operad.builtin("com", 4), 4)
    T = taylor_truncate(fixtures.tensor_square(cat), 1)
    assert T.group(1) == FgAbGroup(0)


def test_linearized_hom_is_a_functor():
    cat = GammaCat(operad.builtin("com", 3), 2)
    F = linearized_hom(cat, 1)
    assert F.variance == COVARIANT
    assert functoriality_check(F).ok


def test_composite_with_ab_functor_is_a_functor(span_cat):
    F = compose_ab(tensor_power(2), fixtures.lin(span_cat))
    assert functoriality_check(F, objects=[0, 1, 2], max_checks=300).ok


def test_corrupted_action_is_caught(span_cat):
    from artifact import doldkan, spans
    F = fixtures.tensor_square(span_cat)
    op = span_cat.op
    target = spans.horizontal_span(op, (1, 1), 1)
    bad = doldkan.corrupt(F, target)
    assert not functoriality_check(bad, objects=[1, 2], max_checks=2000).ok
