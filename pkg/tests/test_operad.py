import itertools

import pytest
from hypothesis import given, settings, strategies as st

from artifact import fixtures, operad
from artifact.operad import (
    El,
    all_perms,
    block_permutation,
    perm_compose,
    perm_from_cycles,
    perm_identity,
    perm_inverse,
    perm_to_cycles,
)

perms = st.integers(1, 5).flatmap(lambda n: st.permutations(range(1, n + 1)).map(tuple))


@given(perms)
def test_permutation_inverse(p):
    e = perm_identity(len(p))
    assert perm_compose(p, perm_inverse(p)) == e == perm_compose(perm_inverse(p), p)


@given(perms)
def test_cycle_notation_roundtrip(p):
    assert perm_from_cycles(perm_to_cycles(p), len(p)) == p


@pytest.mark.parametrize("name", operad.BUILTINS)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_builtins_satisfy_the_axioms(name, n):
    vr = operad.validate(operad.builtin(name, n))
    assert vr.valid, vr.violations


def test_component_sizes():
    assert [operad.builtin("as", 4).size(k) for k in range(5)] == [1, 1, 2, 6, 24]
    assert [operad.builtin("com", 4).size(k) for k in range(5)] == [1, 1, 1, 1, 1]
    assert [operad.builtin("i", 3).size(k) for k in range(4)] == [1, 1, 0, 0]


def test_associative_composition_is_block_substitution():
    op = operad.builtin("as", 4)
    # (12) composed with (id_2, id_1) lists the single input first
    theta = op.act(op.elements(2)[0], (2, 1))
    res = op.gamma(theta, [op.elements(2)[0], op.unit])
    assert op.label(res) == op.label(op.act(op.elements(3)[0], block_permutation((2, 1), (2, 1))))


def test_block_permutation_moves_whole_blocks():
    assert block_permutation((2, 1), (2, 1)) == (2, 3, 1)
    assert block_permutation((1, 2), (3, 1)) == (1, 2, 3, 4)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_as_gamma_is_associative(data):
    op = operad.builtin("as", 4)
    pick = lambda k: data.draw(st.sampled_from(op.elements(k)))
    a = pick(2)
    b, c = pick(2), pick(1)
    d = [pick(1), pick(1), pick(1)]
    left = op.gamma(op.gamma(a, [b, c]), d)
    right = op.gamma(a, [op.gamma(b, d[:2]), op.gamma(c, d[2:])])
    assert left == right


def test_json_roundtrip_preserves_structure():
    op = operad.builtin("as", 3)
    again = operad.from_json(op.to_json())
    assert again.to_json() == op.to_json()
    assert operad.validate(again).valid


def test_corrupted_table_is_rejected():
    op = operad.builtin("as", 3)
    a, b = op.elements(2)
    bad = op.with_gamma_override(a, [a, op.unit], op.elements(3)[5])
    assert not operad.validate(bad).valid


def test_parse_and_ambiguity():
    op = operad.builtin("com", 3)
    assert op.parse("*", 2) == El(2, 0)
    with pytest.raises(operad.OperadError):
        op.parse("nonsense")


def test_extra_fixture_operads_are_valid():
    assert operad.validate(fixtures.ternary_operad()).valid
    for inv in (True, False):
        assert operad.validate(fixtures.unary_operad(inv)).valid


def test_symbolic_operad_labels():
    op = operad.SymbolicOperad()
    x = op.gamma(operad.Sym(2, "ω"), [operad.Sym(1, "a"), operad.Sym(2, "b")])
    assert op.label(x) == "γ(ω;a,b)"


def test_arity_overflow():
    with pytest.raises(operad.ArityOverflow):
        op = operad.builtin("as", 2)
        op.gamma(op.elements(2)[0], [op.elements(2)[0], op.elements(2)[0]])


def test_all_perms_count():
    assert len(all_perms(4)) == 24
    assert len(set(itertools.chain(all_perms(3)))) == 6
