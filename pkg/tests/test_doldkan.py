import pytest

from artifact import doldkan, fixtures, operad
from artifact.errors import BudgetExceeded
from artifact.functorlab import CONTRAVARIANT, COVARIANT, OmegaCat, functoriality_check


@pytest.mark.parametrize("name", ["i", "com", "as"])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_idempotent_system(name, n):
    system = doldkan.idempotents(operad.builtin(name, max(n, 1)), n)
    assert system.report.ok, system.report.witnesses
    assert len(system.f) == 2 ** n


def test_idempotent_supports_for_as_two():
    system = doldkan.idempotents(operad.builtin("as", 2), 2)
    supports = system.report.witnesses["supports"]
    assert supports["0"] == ["+1 (0, 0)"]
    assert len(supports["012"]) == 4


@pytest.mark.parametrize("name", ["com", "as"])
def test_hom_count_identity(name):
    op = operad.builtin(name, 3)
    for m in range(4):
        for n in range(4):
            lhs, rhs = doldkan.hom_count_identity(op, m, n)
            assert lhs == rhs


def test_kappa_is_a_basis_and_compatible_with_composition():
    op = operad.builtin("com", 3)
    assert doldkan.kappa_basis_check(op, 2, 2).ok
    assert doldkan.kappa_composition_check(op, trials=10).ok


@pytest.mark.parametrize("name", ["com", "as"])
@pytest.mark.parametrize("seed", range(6))
def test_roundtrips(name, seed):
    op = operad.builtin(name, 3)
    variance = COVARIANT if seed % 2 == 0 else CONTRAVARIANT
    G = fixtures.random_omega_functor(OmegaCat(op, 2), seed, variance)
    assert functoriality_check(G).ok
    assert doldkan.roundtrip_omega(G).ok
    assert doldkan.roundtrip_gamma(doldkan.i_shriek(G)).ok


def test_cross_effects_agree_with_idempotent_images():
    op = operad.builtin("com", 3)
    G = fixtures.random_omega_functor(OmegaCat(op, 2), 4, COVARIANT)
    F = doldkan.i_shriek(G)
    assert doldkan.cross_effect_agreement(F, 2)


def test_corrupted_functor_fails_the_roundtrip():
    op = operad.builtin("as", 3)
    G = fixtures.random_omega_functor(OmegaCat(op, 2), 2, COVARIANT)
    F = doldkan.i_shriek(G)
    f = next(f for f in F.category.hom(2, 2) if F(f).rows and F(f).cols)
    bad = doldkan.corrupt(F, f, 3)
    assert not (functoriality_check(bad).ok and doldkan.roundtrip_gamma(bad).ok)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        doldkan.idempotents(operad.builtin("as", 6), 6, budget=100)
