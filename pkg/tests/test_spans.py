import random

import pytest
from hypothesis import given, settings, strategies as st

from artifact import opcat, operad, spans
from artifact.fixtures import ternary_operad

COM = operad.builtin("com", 4)
AS = operad.builtin("as", 4)


@pytest.mark.parametrize("op", [COM, AS], ids=["com", "as"])
@pytest.mark.parametrize("k,count", [(1, 7), (2, 25), (3, 79)])
def test_admissible_counts(op, k, count):
    sq = spans.presentation_square(op, 2, 1, k, op.elements(k + 1)[0])
    assert sq.is_valid()
    assert len(spans.admissible_subsets(sq)) == count == 3 ** (k + 1) - 2


@pytest.mark.parametrize("alpha", ["c", "t"])
def test_admissible_count_with_nonbinary_decoration(alpha):
    op = ternary_operad()
    sq = spans.presentation_square(op, 2, 1, 2, op.parse(alpha, 3))
    assert len(spans.admissible_subsets(sq)) == 25


def small_spans(op, a, b, max_apex=3):
    return spans.enumerate_spans(op, a, b, max_apex)


# three composable spans with apex at most 2 compose to apex at most 8
WIDE = [operad.builtin("com", 8), operad.builtin("as", 8)]


@st.composite
def composable_spans(draw):
    op = draw(st.sampled_from(WIDE))
    a, b, c, d = (draw(st.integers(1, 2)) for _ in range(4))
    pick = lambda x, y: draw(st.sampled_from(small_spans(op, x, y, 2)))
    return pick(c, d), pick(b, c), pick(a, b)


@settings(max_examples=60, deadline=None)
@given(composable_spans())
def test_span_composition_is_associative(triple):
    s3, s2, s1 = triple
    left = spans.compose_spans(s3, spans.compose_spans(s2, s1))
    right = spans.compose_spans(spans.compose_spans(s3, s2), s1)
    assert left == right


@settings(max_examples=40, deadline=None)
@given(composable_spans())
def test_identity_span_is_neutral(triple):
    s = triple[1]
    assert spans.compose_spans(spans.identity_span(s.operad, s.target), s) == s
    assert spans.compose_spans(s, spans.identity_span(s.operad, s.source)) == s


@pytest.mark.parametrize("op", [COM, AS], ids=["com", "as"])
def test_spans_are_free_algebra_maps(op):
    for a in (1, 2):
        for b in (1, 2):
            for s in small_spans(op, a, b):
                elems = spans.span_to_algebra_maps(s)
                assert spans.algebra_maps_to_span(op, elems, b) == s


def test_canonical_form_matches_bruteforce():
    rng = random.Random(3)
    for s in small_spans(AS, 2, 2):
        perm = list(range(1, s.apex_size + 1))
        rng.shuffle(perm)
        v, h = spans.relabel(s.vertical, s.horizontal, tuple(perm))
        assert spans.make_span(v, h, s.target) == s
        assert spans.canonical_bruteforce(s.vertical, s.horizontal) == s.key()


def test_horizontal_then_vertical_lifts_to_a_pullback():
    op = AS
    right = opcat.collapse(op, 3, 1, 1, op.elements(2)[1], flavor=opcat.S)
    sq = spans.lift_square((1, 2, 1), right)
    assert sq.is_valid()
