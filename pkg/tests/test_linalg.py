import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tiltbench import linalg as la

from oracles import oracle_rank, oracle_solve_exists, oracle_nullity

PRIMES = [2, 3, 5]


def rand_matrix(draw, p, max_dim=6):
    rows = draw(st.integers(0, max_dim))
    cols = draw(st.integers(0, max_dim))
    data = draw(st.lists(
        st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols),
        min_size=rows, max_size=rows))
    return np.array(data, dtype=np.int64).reshape(rows, cols)


matrices = st.integers(0, 2).flatmap(
    lambda i: st.builds(lambda d: (PRIMES[i], d), st.data()))


@st.composite
def matrix_and_prime(draw, max_dim=6):
    p = draw(st.sampled_from(PRIMES))
    return p, rand_matrix(draw, p, max_dim)


def test_rref_identity():
    A = np.eye(2, dtype=np.int64)
    R, pivots, rk = la.rref(A, 2)
    assert rk == 2 and pivots == (0, 1)
    assert np.array_equal(R, A)


def test_rref_zero():
    R, pivots, rk = la.rref(np.zeros((3, 3), dtype=np.int64), 2)
    assert rk == 0 and pivots == ()
    assert not R.any()


def test_rref_rank_one():
    A = np.array([[1, 1], [1, 1]], dtype=np.int64)
    R, pivots, rk = la.rref(A, 2)
    assert rk == 1 and pivots == (0,)
    assert np.array_equal(R, [[1, 1], [0, 0]])


def test_nullspace_example():
    N = la.nullspace(np.array([[1, 1]], dtype=np.int64), 2)
    assert N.shape == (2, 1)
    assert np.array_equal(N[:, 0], [1, 1])


def test_solve_example():
    A = np.array([[1, 1], [0, 0]], dtype=np.int64)
    x = la.solve(A, np.array([1, 0]), 2)
    assert np.array_equal(x, [1, 0])


def test_solve_inconsistent():
    A = np.zeros((2, 2), dtype=np.int64)
    assert la.solve(A, np.array([1, 0]), 2) is None


def test_solve_zero_rhs_on_zero_matrix():
    A = np.zeros((2, 3), dtype=np.int64)
    x = la.solve(A, np.array([0, 0]), 2)
    assert np.array_equal(x, [0, 0, 0])


def test_inv_singular():
    assert la.inv(np.array([[1, 1], [1, 1]], dtype=np.int64), 2) is None


def test_inv_example_p3():
    A = np.array([[2, 1], [1, 1]], dtype=np.int64)
    B = la.inv(A, 3)
    assert np.array_equal(la.mm(3, A, B), np.eye(2, dtype=np.int64))


def test_inverse_table():
    for p in PRIMES:
        t = la.inverse_table(p)
        for a in range(1, p):
            assert (a * t[a]) % p == 1


def test_is_prime():
    assert la.is_prime(2) and la.is_prime(13)
    assert not la.is_prime(1) and not la.is_prime(9)
    with pytest.raises(ValueError):
        la.check_prime(4)


def test_block_diag():
    A = np.ones((1, 2), dtype=np.int64)
    B = 2 * np.ones((2, 1), dtype=np.int64)
    M = la.block_diag([A, B], 3)
    assert M.shape == (3, 3)
    assert np.array_equal(M, [[1, 1, 0], [0, 0, 2], [0, 0, 2]])


def test_matpow():
    A = np.array([[0, 1], [0, 0]], dtype=np.int64)
    assert la.matpow(A, 0, 2)[0, 0] == 1
    assert not la.matpow(A, 2, 2).any()


@settings(max_examples=120, deadline=None)
@given(matrix_and_prime())
def test_rank_matches_oracle(pa):
    p, A = pa
    assert la.rank(A, p) == oracle_rank(A.tolist(), p)


@settings(max_examples=120, deadline=None)
@given(matrix_and_prime())
def test_rank_transpose(pa):
    p, A = pa
    assert la.rank(A, p) == la.rank(A.T, p)


@settings(max_examples=120, deadline=None)
@given(matrix_and_prime())
def test_rref_idempotent(pa):
    p, A = pa
    R, pivots, rk = la.rref(A, p)
    R2, pivots2, rk2 = la.rref(R, p)
    assert np.array_equal(R, R2) and pivots == pivots2 and rk == rk2


@settings(max_examples=120, deadline=None)
@given(matrix_and_prime(max_dim=4))
def test_nullspace_properties(pa):
    p, A = pa
    N = la.nullspace(A, p)
    assert N.shape == (A.shape[1], A.shape[1] - la.rank(A, p))
    if A.size:
        assert not la.mm(p, A, N).any()
    if A.shape[1] <= 4 and A.shape[0] and p <= 3:
        assert N.shape[1] == oracle_nullity(A.tolist(), p)
    # columns independent
    assert la.rank(N, p) == N.shape[1]


@settings(max_examples=120, deadline=None)
@given(matrix_and_prime(max_dim=4))
def test_row_kernel(pa):
    p, A = pa
    K = la.row_kernel(A, p)
    assert K.shape == (A.shape[0] - la.rank(A, p), A.shape[0])
    if A.size:
        assert not la.mm(p, K, A).any()


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_solve_right_inverse(data):
    p = data.draw(st.sampled_from(PRIMES))
    A = rand_matrix(data.draw, p, 5)
    b = np.array(data.draw(st.lists(st.integers(0, p - 1),
                                    min_size=A.shape[0],
                                    max_size=A.shape[0])), dtype=np.int64)
    x = la.solve(A, b, p)
    exists = oracle_solve_exists(A.tolist(), b.tolist(), p)
    if x is None:
        assert not exists
    else:
        assert exists
        lhs = la.mm(p, A, x.reshape(-1, 1))[:, 0] if A.size else \
            np.zeros(A.shape[0], dtype=np.int64)
        assert np.array_equal(lhs, b % p)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_solve_matrix_consistency(data):
    p = data.draw(st.sampled_from(PRIMES))
    A = rand_matrix(data.draw, p, 4)
    X0 = rand_matrix(data.draw, p, 4)[:A.shape[1]]
    if X0.shape[0] < A.shape[1]:
        X0 = np.vstack([X0, np.zeros((A.shape[1] - X0.shape[0],
                                      X0.shape[1]), dtype=np.int64)])
    B = la.mm(p, A, X0)
    X = la.solve_matrix(A, B, p)
    assert X is not None
    assert np.array_equal(la.mm(p, A, X), B)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_solve_left(data):
    p = data.draw(st.sampled_from(PRIMES))
    A = rand_matrix(data.draw, p, 4)
    X0 = rand_matrix(data.draw, p, 4)
    if X0.shape[1] != A.shape[0]:
        X0 = np.zeros((X0.shape[0], A.shape[0]), dtype=np.int64)
    B = la.mm(p, X0, A)
    X = la.solve_left(A, B, p)
    assert X is not None
    assert np.array_equal(la.mm(p, X, A), B)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_quotient_map_roundtrip(data):
    p = data.draw(st.sampled_from(PRIMES))
    dim = data.draw(st.integers(0, 5))
    nsub = data.draw(st.integers(0, 5))
    sub = np.array(data.draw(st.lists(
        st.lists(st.integers(0, p - 1), min_size=dim, max_size=dim),
        min_size=nsub, max_size=nsub)), dtype=np.int64).reshape(nsub, dim)
    Q = la.QuotientMap(sub, dim, p)
    assert Q.qdim == dim - la.rank(sub, p)
    # subspace dies
    if nsub and dim:
        assert not Q.project(sub).any()
    # project . lift = id
    if Q.qdim:
        eye = np.eye(Q.qdim, dtype=np.int64)
        assert np.array_equal(Q.project(Q.lift(eye)), eye)
    # project is onto: rank of proj equals qdim
    assert la.rank(Q.proj, p) == Q.qdim


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_lin_expander(data):
    p = data.draw(st.sampled_from(PRIMES))
    rows = rand_matrix(data.draw, p, 5)
    E = la.LinExpander(rows, p)
    # combinations of the rows expand correctly
    if rows.shape[0]:
        c = np.array(data.draw(st.lists(st.integers(0, p - 1),
                                        min_size=rows.shape[0],
                                        max_size=rows.shape[0])),
                     dtype=np.int64)
        v = la.mm(p, c.reshape(1, -1), rows)[0]
        got = E.expand(v)
        assert got is not None
        assert np.array_equal(la.mm(p, got.reshape(1, -1), rows)[0], v)
    # a vector outside the span is rejected
    if E.rank < E.d:
        outside = None
        for cand in np.eye(E.d, dtype=np.int64):
            if not la.in_row_space(cand, E.red, p, E.pivots):
                outside = cand
                break
        assert outside is not None
        assert E.expand(outside) is None


def test_row_space_key():
    A = np.array([[1, 1], [0, 1]], dtype=np.int64)
    B = np.array([[0, 1], [1, 0]], dtype=np.int64)
    assert la.row_space_key(A, 2) == la.row_space_key(B, 2)
    C = np.array([[1, 1]], dtype=np.int64)
    assert la.row_space_key(A, 2) != la.row_space_key(C, 2)


def test_empty_shapes():
    Z = np.zeros((0, 3), dtype=np.int64)
    R, pivots, rk = la.rref(Z, 2)
    assert rk == 0 and R.shape == (0, 3)
    assert la.nullspace(Z, 2).shape == (3, 3)
    Z2 = np.zeros((3, 0), dtype=np.int64)
    assert la.rank(Z2, 2) == 0
    assert la.nullspace(Z2, 2).shape == (0, 0)
    assert la.row_kernel(Z, 2).shape == (0, 0)
