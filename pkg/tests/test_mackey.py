import json

import pytest

from artifact import fixtures, mackey, opcat, operad
from artifact.errors import DegreeViolation
from artifact.functorlab import OmegaCat, SpanCat


def omega_maps(op, n_max=3):
    for m in range(1, n_max + 1):
        for n in range(1, m + 1):
            yield from opcat.enumerate_hom(opcat.OMEGA, op, m, n)


@pytest.mark.parametrize("name", ["com", "as"])
def test_vertical_normal_forms(name):
    op = operad.builtin(name, 3)
    assert all(mackey.check_normal_form(v) for v in omega_maps(op))


def test_horizontal_normal_forms():
    import itertools
    for m in range(1, 4):
        for n in range(1, 4):
            for mp in itertools.product(range(1, n + 1), repeat=m):
                if set(mp) == set(range(1, n + 1)):
                    assert mackey.check_horizontal_normal_form(mp, n)
    with pytest.raises(ValueError):
        mackey.horizontal_word((1,), 2)


@pytest.fixture(scope="module", params=["com", "as"])
def presentations(request):
    op = operad.builtin(request.param, 4)
    cat = SpanCat(op, 4)
    funcs = fixtures.span_fixture_set(cat) + [fixtures.tensor_cube(cat), fixtures.passi_functor(cat, 3)]
    return [(F, mackey.from_functor(F, 3)) for F in funcs]


def test_presentations_from_fixtures_satisfy_every_relation(presentations):
    assert len(presentations) >= 5
    for F, j in presentations:
        rep = mackey.check_all(j)
        assert rep.ok, (F.name, rep.witnesses)


def test_ranks_of_fixture_presentations(presentations):
    ranks = {F.name: [j.rank(n) for n in (1, 2, 3)] for F, j in presentations}
    assert ranks["Lin"] == [1, 0, 0]
    assert ranks["T^3(Lin)"][0] == 1 and ranks["T^3(Lin)"][2] == 6


def test_every_pullback_square_commutes(presentations):
    _, j = presentations[1]
    assert mackey.check_all_squares(j, 60).ok


def test_presentation_roundtrip(presentations):
    for F, j in presentations[:3]:
        assert mackey.presentation_roundtrip(j).ok, F.name


def test_functor_roundtrip_on_small_objects():
    cat = SpanCat(operad.builtin("com", 3), 3)
    F = fixtures.tensor_square(cat)
    assert mackey.functor_roundtrip(F, 2, objects=[0, 1, 2], max_checks=60).ok


def test_json_roundtrip(presentations):
    _, j = presentations[2]
    again = mackey.JanusPresentation.from_json(json.loads(j.dumps()), j.operad)
    assert again.dumps() == j.dumps()


@pytest.mark.parametrize("key", [("T", 2, 1), ("P", 2, 1)])
def test_corrupted_presentations_fail(key):
    op = operad.builtin("com", 3)
    j = mackey.from_functor(fixtures.tensor_square(SpanCat(op, 3)), 2)
    assert not mackey.check_all(mackey.corrupt(j, key)).ok


def test_identity_is_not_pseudo_mackey():
    op = operad.builtin("com", 3)
    j = mackey.identity_presentation(op, 2)
    assert mackey.check_horizontal_relations(j).ok
    assert mackey.check_vertical_relations(j).ok
    assert not mackey.check_pseudo_mackey(j).ok


def test_zero_presentation_passes():
    assert mackey.check_all(mackey.zero_presentation(operad.builtin("as", 3), 3)).ok


@pytest.mark.parametrize("k", [1, 2])
def test_big_relation_term_count(k):
    op = operad.builtin("com", 4)
    j = mackey.from_functor(fixtures.tensor_cube(SpanCat(op, 4)), 3)
    terms = mackey.big_relation_terms(j, 2, 1, k, op.elements(k + 1)[0])
    assert len(terms) == 3 ** (k + 1) - 2


def test_binary_specialization_matches_term_for_term(presentations):
    for F, j in presentations:
        cert = mackey.check_pseudo_mackey(j)
        fams = {v["family"] for v in cert.verified}
        assert {"(5) binary", "(5) binary term matching"} <= fams, F.name


def test_nonbinary_operad_k2_instances():
    op = fixtures.ternary_operad()
    j = mackey.from_functor(fixtures.tensor_cube(SpanCat(op, 4, max_apex=3)), 3)
    cert = mackey.check_pseudo_mackey(j)
    assert cert.ok
    k2 = [v for v in cert.verified if v["family"] == "(5)" and v["k"] == 2]
    assert len(k2) == 2 and all(v["terms"] == 25 for v in k2)


def test_degree_violation():
    op = operad.builtin("com", 4)
    with pytest.raises(DegreeViolation):
        mackey.from_functor(fixtures.tensor_cube(SpanCat(op, 4)), 2)


def test_quadratic_specializations():
    com = operad.builtin("com", 3)
    q = mackey.quadratic_presentation(mackey.from_functor(fixtures.tensor_square(SpanCat(com, 3)), 2))
    red = q.report.witnesses["reduced"]
    assert q.report.ok and red["PHP=2P"] and red["HPH=2H"]
    asop = operad.builtin("as", 3)
    q = mackey.quadratic_presentation(mackey.from_functor(fixtures.passi_functor(SpanCat(asop, 3), 2), 2))
    red = q.report.witnesses["reduced"]
    assert q.report.ok and red["PHP=2P"] and red["H^tau=H^1PH^1-H^1"]


def test_quadratic_rejects_cubic_data():
    op = operad.builtin("com", 4)
    j = mackey.from_functor(fixtures.tensor_cube(SpanCat(op, 4)), 3)
    with pytest.raises(DegreeViolation):
        mackey.quadratic_presentation(j)


def test_linear_presentation_of_a_module():
    op = fixtures.unary_operad(True)
    cat = SpanCat(op, 2)
    j = mackey.from_functor(fixtures.lin(cat), 1)
    lin = mackey.linear_presentation(j)
    assert lin.report.ok
