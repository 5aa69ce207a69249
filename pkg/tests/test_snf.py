import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import determinantal_factors, naive_snf
from ordercomplex.snf import SparseIntMatrix, dense_snf, rank_mod_p, rank_over_z, smith_normal_form


def matrices(max_rows=8, max_cols=8, lo=-5, hi=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_small_examples():
    assert smith_normal_form(SparseIntMatrix.from_dense([[2, 0], [0, 3]])) == ([1, 6], 2)
    assert smith_normal_form(SparseIntMatrix.from_dense([[0, 0], [0, 0]])) == ([], 0)
    assert smith_normal_form(SparseIntMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))[0] == [2, 6, 12]


def test_empty_matrix():
    assert smith_normal_form(SparseIntMatrix(0, 5)) == ([], 0)
    assert smith_normal_form(SparseIntMatrix(3, 0)) == ([], 0)


@settings(max_examples=200, deadline=None)
@given(matrices(4, 4, -6, 6))
def test_matches_determinantal_divisors(a):
    factors, rank = smith_normal_form(SparseIntMatrix.from_dense(a))
    assert factors == determinantal_factors(a)
    assert rank == np.linalg.matrix_rank(np.array(a, dtype=float))


@settings(max_examples=200, deadline=None)
@given(matrices(12, 12))
def test_matches_naive_oracle(a):
    factors, _ = smith_normal_form(SparseIntMatrix.from_dense(a))
    assert factors == naive_snf(a)


@settings(max_examples=100, deadline=None)
@given(matrices(6, 6))
def test_transforms_are_unimodular(a):
    diag, U, V, D = dense_snf(a, track=True)
    A = np.array(a, dtype=object)
    assert (np.array(U, dtype=object) @ A @ np.array(V, dtype=object) == np.array(D, dtype=object)).all()
    off = np.array(D, dtype=object)
    for t, d in enumerate(diag):
        off[t, t] = 0
    assert not off.any()


@settings(max_examples=100, deadline=None)
@given(matrices(10, 10, -1, 1))
def test_rank_mod_p_agrees_with_z_for_small_entries(a):
    m = SparseIntMatrix.from_dense(a)
    factors, r = smith_normal_form(m)
    # the rank mod p drops exactly by the invariant factors divisible by p
    for p in (2, 3, 1000003):
        assert rank_mod_p(m, p) == sum(1 for f in factors if f % p)
    assert rank_over_z(m) == r


def test_sparse_matmul():
    a = SparseIntMatrix.from_dense([[1, 2], [0, 1]])
    b = SparseIntMatrix.from_dense([[1, -2], [0, 1]])
    assert a.matmul(b).to_dense() == [[1, 0], [0, 1]]
    assert a.nnz == 3 and a.triples() == [(0, 0, 1), (0, 1, 2), (1, 1, 1)]


@pytest.mark.parametrize("seed", range(5))
def test_large_sparse_boundary_like(seed):
    # 60 x 80 matrix with entries in {-1, 0, 1} and a planted non-unit block
    rng = np.random.default_rng(seed)
    a = (rng.random((60, 80)) < 0.05) * rng.choice([-1, 1], size=(60, 80))
    a[:2, :2] = [[2, 0], [0, 4]]
    a[:2, 2:] = 0
    a[2:, :2] = 0
    factors, rank = smith_normal_form(SparseIntMatrix.from_dense(a))
    rest, _ = smith_normal_form(SparseIntMatrix.from_dense(a[2:, 2:]))
    assert sorted(factors) == sorted(naive_snf(a.tolist()))
    assert rank == len(rest) + 2
