from fractions import Fraction
from math import prod

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from toric_wci.exactmat import (
    IntMatrix,
    _cofactor_adjugate,
    adjugate,
    cokernel_invariants,
    content,
    feasible_point,
    hermite_normal_form,
    kernel_basis,
    primitive,
    rational_inverse,
    smith_normal_form,
    solve_rational,
)


def matrices(max_rows=5, max_cols=5, lo=-20, hi=20):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def test_intmatrix_rejects_non_integers():
    with pytest.raises(TypeError):
        IntMatrix(1, 2, (1, 2.0))
    with pytest.raises(TypeError):
        IntMatrix(1, 1, (True,))
    with pytest.raises(ValueError):
        IntMatrix(2, 2, (1, 2, 3))
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])


def test_matmul_and_transpose():
    A = IntMatrix.from_rows([[1, 2], [3, 4], [5, 6]])
    assert A.T.shape == (2, 3)
    assert (A.T @ A).to_lists() == [[35, 44], [44, 56]]
    assert IntMatrix.identity(3) @ A == A


def test_known_smith_forms():
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).invariant_factors == (2, 6, 12)
    assert smith_normal_form([[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]]).invariant_factors == (1, 10, 30, 0)
    assert smith_normal_form([[2, 4]]).invariant_factors == (2,)


def test_example2_ray_matrix_has_factor_five():
    rays = [[1, 0, 0], [0, 1, 0], [1, -3, 5], [-2, 2, -5]]
    assert smith_normal_form(rays).invariant_factors == (1, 1, 5)
    assert cokernel_invariants(rays) == (1, (5,))


@given(matrices())
def test_smith_reconstruction(rows):
    A = IntMatrix.from_rows(rows)
    s = smith_normal_form(A)
    assert s.left @ A @ s.right == s.diagonal()
    assert abs(s.left.det()) == 1 and abs(s.right.det()) == 1
    nz = [d for d in s.invariant_factors if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert all(d == 0 for d in s.invariant_factors[len(nz):])


@given(matrices(4, 4, -9, 9))
def test_smith_matches_sympy(rows):
    ours = smith_normal_form(rows).invariant_factors
    D = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    theirs = tuple(abs(int(D[i, i])) for i in range(min(D.shape)))
    assert ours == theirs


@given(matrices(6, 6, -5, 5).filter(lambda r: len(r) == len(r[0])))
def test_det_matches_sympy(rows):
    assert IntMatrix.from_rows(rows).det() == int(sympy.Matrix(rows).det())


@given(matrices(6, 6, -4, 4).filter(lambda r: len(r) == len(r[0])))
def test_adjugate_against_cofactors(rows):
    adj, det = adjugate(rows)
    assert (adj, det) == _cofactor_adjugate(rows) or len(rows) == 1
    n = len(rows)
    prod_ = [[sum(rows[i][k] * adj[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert prod_ == [[det * (i == j) for j in range(n)] for i in range(n)]


@given(matrices())
def test_hermite_properties(rows):
    A = IntMatrix.from_rows(rows)
    H, U = hermite_normal_form(A)
    assert U @ A == H
    assert abs(U.det()) == 1
    last = -1
    for i in range(H.rows):
        r = H.row(i)
        if not any(r):
            assert not any(x for k in range(i, H.rows) for x in H.row(k))
            break
        c = next(j for j, x in enumerate(r) if x)
        assert c > last and r[c] > 0
        assert all(0 <= H[k, c] < r[c] for k in range(i))
        last = c


def test_hermite_small_case():
    H, U = hermite_normal_form([[2, 4], [1, 1]])
    assert H.to_lists() == [[1, 1], [0, 2]]


def test_kernel_of_projective_space_rays():
    assert kernel_basis([[-1, -1], [1, 0], [0, 1]]) == [(1, 1, 1)]


@given(matrices(6, 4, -6, 6))
def test_kernel_is_saturated_left_kernel(rows):
    A = IntMatrix.from_rows(rows)
    K = kernel_basis(A)
    assert len(K) == A.rows - A.rank()
    for k in K:
        assert all(sum(k[i] * A[i, j] for i in range(A.rows)) == 0 for j in range(A.cols))
    if K:
        # saturated: the kernel basis extends to a basis, so its SNF factors are all 1
        assert set(smith_normal_form([list(k) for k in K]).invariant_factors) == {1}


@given(matrices(5, 4, -8, 8))
def test_cokernel_order_is_product_of_factors(rows):
    free, tors = cokernel_invariants(rows)
    A = IntMatrix.from_rows(rows)
    assert free == A.rows - A.rank()
    if A.rows == A.cols and free == 0:
        assert prod(tors) == abs(A.det())


def test_content_and_primitive():
    assert content([6, -9, 15]) == 3
    assert primitive([6, -9, 15]) == (2, -3, 5)
    with pytest.raises(ValueError):
        primitive([0, 0])


def test_rational_solve_and_inverse():
    A = [[2, 1], [1, 3]]
    assert solve_rational(A, [3, 5]) == (Fraction(4, 5), Fraction(7, 5))
    inv = rational_inverse(A)
    assert inv == [[Fraction(3, 5), Fraction(-1, 5)], [Fraction(-1, 5), Fraction(2, 5)]]
    with pytest.raises(ZeroDivisionError):
        solve_rational([[1, 2], [2, 4]], [1, 1])


def test_feasible_point():
    x = feasible_point(2, eq=[((1, 1), 1)], le=[((-1, 0), 0), ((0, -1), 0)])
    assert x is not None and x[0] + x[1] == 1 and min(x) >= 0
    assert feasible_point(1, le=[((1,), -1), ((-1,), -1)]) is None
    y = feasible_point(2, eq=[((3, 0), 1)])
    assert y is not None and y[0] == Fraction(1, 3)


@given(
    st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=6),
    st.lists(st.integers(-5, 5), min_size=1, max_size=6),
)
def test_feasible_point_is_feasible(A, c):
    le = list(zip(A, c))
    x = feasible_point(3, le=le)
    if x is not None:
        assert all(sum(a * xi for a, xi in zip(row, x)) <= ci for row, ci in le)
    else:
        # not a proof of infeasibility, only a sanity check on a grid
        grid = [Fraction(k, 2) for k in range(-20, 21)]
        for p in grid:
            for q in grid:
                for r in grid:
                    assert not all(a0 * p + a1 * q + a2 * r <= ci for (a0, a1, a2), ci in le)
