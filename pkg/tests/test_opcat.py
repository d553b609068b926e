import json

import pytest
from hypothesis import given, settings, strategies as st

from artifact import opcat, operad
from artifact.errors import FlavorMismatch
from artifact.operad import perm_compose, adjacent_transposition
from artifact.suite import composition_example

OPS = {name: operad.builtin(name, 4) for name in ("com", "as")}


def decorated(draw, op, flavor, m, n, surjective=False):
    low = 1
    while True:
        mp = tuple(draw(st.lists(st.integers(low, n), min_size=m, max_size=m)))
        counts = [mp.count(y) for y in range(1, n + 1)]
        if max(counts, default=0) > op.max_arity:
            continue
        if surjective and min(counts, default=1) == 0:
            continue
        dec = [draw(st.sampled_from(op.elements(c))) for c in counts]
        return opcat.make(flavor, op, mp, dec, n)


@st.composite
def composable_triples(draw):
    op = OPS[draw(st.sampled_from(sorted(OPS)))]
    a, b, c = (draw(st.integers(1, 2)) for _ in range(3))
    d = draw(st.integers(c, 4))
    # total arity of a composite never exceeds the outermost source
    f = decorated(draw, op, opcat.S, d, c)
    g = decorated(draw, op, opcat.S, c, b)
    h = decorated(draw, op, opcat.S, b, a)
    return h, g, f


@settings(max_examples=80, deadline=None)
@given(composable_triples())
def test_composition_is_associative(triple):
    h, g, f = triple
    assert opcat.compose(opcat.compose(h, g), f) == opcat.compose(h, opcat.compose(g, f))


@settings(max_examples=60, deadline=None)
@given(composable_triples())
def test_identities_are_neutral(triple):
    _, g, _ = triple
    op = g.operad
    assert opcat.compose(opcat.identity(opcat.S, op, g.target_size), g) == g
    assert opcat.compose(g, opcat.identity(opcat.S, op, g.source_size)) == g


@pytest.mark.parametrize("name", ["com", "as"])
@pytest.mark.parametrize("flavor", [opcat.S, opcat.GAMMA, opcat.OMEGA])
def test_enumeration_matches_closed_count(name, flavor):
    op = OPS[name]
    for m in range(4):
        for n in range(4):
            homs = opcat.enumerate_hom(flavor, op, m, n)
            assert len(homs) == len(set(homs)) == opcat.hom_size(flavor, op, m, n)


def test_small_hom_counts():
    assert opcat.hom_size(opcat.S, OPS["as"], 2, 1) == 2
    assert opcat.hom_size(opcat.S, OPS["as"], 3, 2) == 24
    assert opcat.hom_size(opcat.OMEGA, OPS["com"], 3, 2) == 6
    assert opcat.hom_size(opcat.GAMMA, OPS["com"], 1, 1) == 2


def test_composition_example_is_byte_exact():
    rep = composition_example()
    assert rep.ok, rep.witnesses
    assert rep.witnesses["decoration"] == ["γ(ω_1,α_2)", "γ(ω_2;α_1,α_3)·(1,3,4,2,5)"]
    assert rep.witnesses["sigma"] == [1, 3, 4, 2, 5]


@given(st.integers(1, 5).flatmap(lambda n: st.permutations(range(1, n + 1)).map(tuple)))
def test_adjacent_word_factors_the_permutation(p):
    prod = tuple(range(1, len(p) + 1))
    for r in opcat.adjacent_word(p):
        prod = perm_compose(prod, adjacent_transposition(len(p), r))
    assert prod == p


@given(st.lists(st.integers(1, 3), min_size=1, max_size=5))
def test_sorting_permutation_makes_the_map_monotone(mp):
    pi = opcat.sorting_permutation(mp)
    inv = operad.perm_inverse(pi)
    sorted_map = [mp[inv[k] - 1] for k in range(len(mp))]
    assert sorted_map == sorted(mp)


def test_json_roundtrip():
    op = OPS["as"]
    m = opcat.make(opcat.GAMMA, op, (0, 2, 1, 2), (op.unit, op.elements(2)[1]), 2)
    again = opcat.morphism_from_json(json.loads(json.dumps(m.to_json())), op)
    assert again == m


def test_omega_requires_surjection():
    op = OPS["com"]
    with pytest.raises(FlavorMismatch):
        opcat.make(opcat.OMEGA, op, (1, 1), (op.elements(2)[0], op.zero), 2)


def test_decoration_arity_is_checked():
    op = OPS["com"]
    with pytest.raises(ValueError):
        opcat.make(opcat.S, op, (1, 1), (op.unit,), 1)
