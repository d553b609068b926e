import pytest
from hypothesis import given, settings, strategies as st

from artifact import operad, passi
from artifact.passi import MonoidSpec
from artifact.zmod import FgAbGroup


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_free_monoid_ranks(r, n):
    g = passi.passi_group(MonoidSpec.parse(f"free:{r}"), n).group
    assert g == FgAbGroup(sum(r ** k for k in range(1, n + 1)))


@pytest.mark.parametrize("m", range(1, 7))
def test_cyclic_first_passi_group(m):
    g = passi.passi_group(MonoidSpec.parse(f"cyclic:{m}"), 1).group
    assert g == FgAbGroup(0, () if m == 1 else (m,))


def test_spec_json_example():
    spec = MonoidSpec.from_json({"kind": "free", "rank": 2})
    assert passi.passi_group(spec, 3).group.to_json() == {"rank": 14, "torsion": []}


def test_free_commutative_ranks_are_monomial_counts():
    # monomials of degree 1..n in r commuting variables
    assert passi.passi_group(MonoidSpec.parse("freecomm:2"), 2).group == FgAbGroup(5)


@pytest.mark.parametrize("r,n", [(1, 1), (1, 2), (2, 2), (2, 3)])
def test_groupification(r, n):
    assert passi.groupification_iso_check(r, n).ok


@pytest.mark.parametrize("k,l,n", [(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 1, 2)])
def test_monoid_and_group_categories_agree(k, l, n):
    assert passi.compare_mon_gr(k, l, n).ok


@pytest.mark.parametrize("name", ["com", "as"])
@pytest.mark.parametrize("n", [1, 2])
def test_taylor_truncation_bridge(name, n):
    assert passi.tn_universal_check(name, 1, 1, n).ok


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3))
def test_free_passi_tower_surjects(r, n):
    # the rank grows by exactly r^n from P_{n-1} to P_n
    big = passi.passi_group(MonoidSpec.parse(f"free:{r}"), n).group.rank
    small = passi.passi_group(MonoidSpec.parse(f"free:{r}"), n - 1).group.rank
    assert big - small == r ** n


def test_operadic_passi_of_a_cyclic_group():
    op = operad.builtin("com", 3)
    alg = passi.FinitePAlgebra.from_monoid(op, MonoidSpec.cyclic(3), "Z/3")
    assert passi.operadic_passi(alg, 1) == FgAbGroup(0, (3,))
    assert passi.pnexsequ_check(alg, 2).ok


def test_free_exact_sequence():
    assert passi.pnexsequ_free(2, 2).ok


def test_bad_monoid_spec():
    with pytest.raises(ValueError):
        MonoidSpec.parse("bogus:2")
