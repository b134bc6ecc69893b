import pytest
from hypothesis import given, settings, strategies as st

from coverforge.intlin import (
    IntMatrix,
    det,
    hnf,
    hnf_with_transform,
    invariant_factors,
    kernel_basis,
    snf,
    solve,
)

from oracles import box, matvec, rational_rank


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols)


@st.composite
def matrices(draw, max_dim=6, lo=-9, hi=9):
    m = draw(st.integers(0, max_dim))
    n = draw(st.integers(0, max_dim))
    return IntMatrix(m, n, draw(st.lists(st.integers(lo, hi), min_size=m * n, max_size=m * n)))


def check_snf(A):
    r = snf(A)
    assert r.U @ A @ r.V == r.D
    assert abs(det(r.U)) == 1 and abs(det(r.V)) == 1
    assert r.U @ r.U_inv == IntMatrix.identity(A.rows)
    assert r.V @ r.V_inv == IntMatrix.identity(A.cols)
    for i in range(A.rows):
        for j in range(A.cols):
            if i != j:
                assert r.D[i, j] == 0
    d = r.diagonal
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (b % a == 0) if a else b == 0
    return r


# --- snf ---------------------------------------------------------------------

def test_snf_identity():
    assert snf(IntMatrix.identity(2)).D == IntMatrix.identity(2)


def test_snf_2x2():
    # d1 = gcd of entries = 2, d1 * d2 = |det| = 8
    r = check_snf(M([[2, 4], [6, 8]]))
    assert r.diagonal == [2, 4]


def test_snf_square_fan_matrix():
    r = check_snf(M([[1, 1], [-1, 1], [-1, -1], [1, -1]]))
    assert r.diagonal == [1, 2]


@pytest.mark.parametrize("shape", [(0, 0), (0, 3), (3, 0)])
def test_snf_empty(shape):
    A = IntMatrix(*shape)
    r = check_snf(A)
    assert r.diagonal == []


@given(matrices())
@settings(max_examples=300, deadline=None)
def test_snf_properties(A):
    check_snf(A)


@given(matrices(max_dim=4))
@settings(max_examples=200, deadline=None)
def test_snf_det_is_product(A):
    if A.rows != A.cols or A.rows == 0:
        return
    d = det(A)
    if d:
        p = 1
        for x in snf(A).diagonal:
            p *= x
        assert p == abs(d)


# --- hnf ---------------------------------------------------------------------

def test_hnf_identity():
    assert hnf(IntMatrix.identity(2)) == IntMatrix.identity(2)


def test_hnf_single_column():
    assert hnf(M([[2], [4]])) == M([[2], [4]])
    assert hnf(M([[-2], [-4]])) == M([[2], [4]])


def test_hnf_index_two_lattice():
    H = hnf(IntMatrix.from_cols([[2, 0], [1, 1]]))
    assert H.columns() == [(1, 1), (0, 2)]
    # the index equals the number of cosets of the column span in a box
    cosets = {(x % 2, (y - x) % 2) for x, y in box(2, 3)}
    assert len({c[1] for c in cosets}) == H[1, 1]


@given(matrices())
@settings(max_examples=200, deadline=None)
def test_hnf_shape(A):
    H, W = hnf_with_transform(A)
    assert A @ W == H
    assert abs(det(W)) == 1
    prev = -1
    for j in range(H.cols):
        col = H.col(j)
        if not any(col):
            assert all(not any(H.col(k)) for k in range(j, H.cols))
            break
        p = next(i for i, x in enumerate(col) if x)
        assert p > prev and col[p] > 0
        for k in range(j):
            assert 0 <= H[p, k] < col[p]
        prev = p
    assert hnf(H) == H


# --- solve -------------------------------------------------------------------

def test_solve_scalar():
    assert solve(M([[2]]), [2]) == (1,)
    assert solve(M([[2]]), [1]) is None


def test_solve_upper_triangular():
    assert solve(M([[1, 1], [0, 2]]), [3, 4]) == (1, 2)


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve(M([[1, 2]]), [1, 2])


@given(matrices(max_dim=3, lo=-3, hi=3), st.lists(st.integers(-2, 2), min_size=3, max_size=3),
       st.booleans())
@settings(max_examples=200, deadline=None)
def test_solve_against_box_search(A, x0, reachable):
    b = matvec(A.tolist(), x0[:A.cols]) if reachable else tuple((x0 * 2)[:A.rows])
    x = solve(A, b)
    if x is not None:
        assert A @ x == tuple(b)
    found = any(matvec(A.tolist(), y) == tuple(b) for y in box(A.cols, 3))
    if found:
        assert x is not None
    if reachable:
        assert x is not None


# --- kernel ------------------------------------------------------------------

def test_kernel_injective():
    assert kernel_basis(IntMatrix.identity(2)).cols == 0


def test_kernel_row_of_ones():
    K = kernel_basis(M([[1, 1, 1]]))
    assert K.cols == 2
    assert all(sum(c) == 0 for c in K.columns())
    # saturated: basis columns extend to a unimodular matrix
    assert invariant_factors(K) == [1, 1]


def test_kernel_zero_map():
    K = kernel_basis(IntMatrix(1, 3))
    assert K.cols == 3 and abs(det(K)) == 1


@given(matrices(max_dim=3, lo=-3, hi=3))
@settings(max_examples=150, deadline=None)
def test_kernel_against_box_search(A):
    K = kernel_basis(A)
    assert K.cols == A.cols - rational_rank(A.tolist())
    assert (A @ K).is_zero()
    for x in box(A.cols, 2):
        if not any(matvec(A.tolist(), x)):
            assert solve(K, x) is not None
