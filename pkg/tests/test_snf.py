import numpy as np
from hypothesis import given, strategies as st
from scipy import sparse

from oracles import sympy_factors
from segalhh.snf import invariant_factors, rank_and_torsion, smith_normal_form

matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=m, max_size=m)))


def _det(M):
    return round(np.linalg.det(np.array(M, dtype=float)))


def test_known_matrix():
    m = [[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]]
    D, U, V = smith_normal_form(m)
    assert [D[i][i] for i in range(4)] == [1, 10, 30, 0]
    assert invariant_factors(m) == [1, 10, 30]


def test_row_vector():
    assert invariant_factors([[2, 4]]) == [2]


def test_empty_and_zero():
    assert invariant_factors(np.zeros((3, 2), dtype=int)) == []
    assert invariant_factors(sparse.csr_matrix((0, 4), dtype=np.int64)) == []


@given(matrices)
def test_factors_match_sympy(rows):
    assert sorted(invariant_factors(rows)) == sympy_factors(rows)


@given(matrices)
def test_sparse_input_matches_dense(rows):
    assert invariant_factors(sparse.csr_matrix(np.array(rows))) == invariant_factors(np.array(rows))


@given(matrices)
def test_decomposition(rows):
    D, U, V = smith_normal_form(rows)
    A = np.array(rows, dtype=object)
    assert (np.array(U, dtype=object).dot(A).dot(np.array(V, dtype=object)) == np.array(D, dtype=object)).all()
    assert abs(_det(U)) == 1 and abs(_det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)


def test_rank_and_torsion():
    assert rank_and_torsion([[2, 0], [0, 3]]) == (2, [6])
