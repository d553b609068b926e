from hypothesis import given, settings, strategies as st

from artifact.zmod import (
    FgAbGroup,
    Presentation,
    ZMatrix,
    cokernel,
    hermite_normal_form,
    in_row_span,
    invariant_factors,
    kernel,
    rank,
    rank_mod_p,
    smith_normal_form,
    solve_rows,
)


def matrices(max_rows=4, max_cols=4, bound=9):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.integers(-bound, bound), min_size=r * c, max_size=r * c).map(
                lambda e: ZMatrix(r, c, tuple(e)))))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_smith_form_is_a_certified_diagonalization(m):
    u, d, v = smith_normal_form(m)
    assert u.is_unimodular() and v.is_unimodular()
    assert u @ m @ v == d
    diag = [d[i, i] for i in range(min(d.rows, d.cols))]
    assert all(d[i, j] == 0 for i in range(d.rows) for j in range(d.cols) if i != j)
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_hermite_form_keeps_row_span(m):
    h, u = hermite_normal_form(m)
    assert u.is_unimodular()
    assert h == u @ m
    for i in range(m.rows):
        assert in_row_span(h, m.row(i))


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_is_annihilated_and_rank_nullity(m):
    k = kernel(m)
    for i in range(k.rows):
        assert all(x == 0 for x in m.apply(k.row(i)))
    assert k.rows + rank(m) == m.cols


@settings(max_examples=60, deadline=None)
@given(matrices(bound=40))
def test_modular_rank_agrees_with_exact_rank(m):
    assert rank_mod_p(m) == rank(m)


def test_cokernel_invariant_factors():
    m = ZMatrix.from_rows([[2, 0], [0, 6]])
    assert cokernel(m) == FgAbGroup(0, (2, 6))
    assert invariant_factors(ZMatrix.from_rows([[4, 0], [0, 6]])) == [2, 12]
    assert FgAbGroup.from_factors(1, [4, 6]) == FgAbGroup(1, (2, 12))
    assert cokernel(ZMatrix.from_rows([[1, 1]])) == FgAbGroup(0)
    assert cokernel(ZMatrix.from_rows([[1], [1]])) == FgAbGroup(1)


def test_solve_rows_returns_integer_coordinates():
    basis = ZMatrix.from_rows([[2, 0], [0, 3]])
    assert solve_rows(basis, (4, 9)) == (2, 3)
    assert solve_rows(basis, (1, 0)) is None


def test_presentation_group_and_zero_test():
    pres = Presentation(2, ZMatrix.from_rows([[3, 0]]))
    assert pres.group() == FgAbGroup(1, (3,))
    assert pres.is_zero_element((6, 0))
    assert not pres.is_zero_element((1, 0))
