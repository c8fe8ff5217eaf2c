"""Linear algebra over F_p checked against an unblocked reference."""

import numpy as np
import pytest

from codim2 import linalg

P = 31991


def naive_rref(A, p):
    A = np.array(A, dtype=np.int64) % p
    m, n = A.shape
    r = 0
    piv = []
    for j in range(n):
        if r >= m:
            break
        nz = [i for i in range(r, m) if A[i, j]]
        if not nz:
            continue
        i = nz[0]
        A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, j]), p - 2, p) % p
        for i in range(m):
            if i != r and A[i, j]:
                A[i] = (A[i] - A[i, j] * A[r]) % p
        piv.append(j)
        r += 1
    return A, piv


def random_matrix(rng, m, n, rank=None):
    if rank is None:
        return rng.integers(0, P, size=(m, n))
    L = rng.integers(0, P, size=(m, rank))
    R = rng.integers(0, P, size=(rank, n))
    return L @ R % P


@pytest.mark.parametrize("shape", [(7, 5), (5, 9), (40, 40), (200, 130), (130, 380)])
def test_rref_matches_naive(shape):
    rng = np.random.default_rng(7)
    A = random_matrix(rng, *shape, rank=min(shape) // 2)
    R1, p1 = linalg.rref(A, P)
    R2, p2 = naive_rref(A, P)
    assert p1 == p2
    assert np.array_equal(R1 % P, R2)


def test_rank_and_nullspace():
    rng = np.random.default_rng(11)
    for m, n, r in [(30, 20, 5), (50, 80, 33), (300, 220, 100)]:
        A = random_matrix(rng, m, n, rank=r)
        assert linalg.rank(A, P) == r
        N = linalg.nullspace(A, P)
        assert N.shape == (n, n - r)
        assert not np.any(linalg.matmul(A, N, P))
        assert linalg.rank(N, P) == n - r


def test_matmul_exact():
    rng = np.random.default_rng(3)
    A = random_matrix(rng, 37, 91)
    B = random_matrix(rng, 91, 23)
    expect = (A.astype(object) @ B.astype(object)) % P
    assert np.array_equal(linalg.matmul(A, B, P), expect.astype(np.int64))


def test_solve():
    rng = np.random.default_rng(5)
    A = random_matrix(rng, 40, 25, rank=20)
    X0 = rng.integers(0, P, size=(25, 3))
    B = A @ X0 % P
    X = linalg.solve(A, B, P)
    assert X is not None
    assert np.array_equal(linalg.matmul(A, X, P), B % P)
    # inconsistent system
    B2 = B.copy()
    N = linalg.left_nullspace(A, P)
    assert N.shape[0] == 40 - 20
    B2[:, 0] = (B2[:, 0] + np.asarray(linalg.nullspace(A.T, P))[:, 0]) % P
    assert linalg.solve(A, B2, P) is None


def test_extend_basis():
    rng = np.random.default_rng(9)
    S = random_matrix(rng, 30, 10, rank=10)
    extra = random_matrix(rng, 30, 4, rank=4)
    K = np.hstack([S[:, :3], extra])
    idx = linalg.extend_basis(S, K, P)
    assert idx == [3, 4, 5, 6]


def test_column_space_intersection():
    rng = np.random.default_rng(13)
    common = random_matrix(rng, 40, 6, rank=6)
    A = np.hstack([common, random_matrix(rng, 40, 8, rank=8)])
    B = np.hstack([common, random_matrix(rng, 40, 9, rank=9)])
    got = linalg.column_space_intersection(A, B, P)
    assert got.shape[1] == 6
    # each intersection vector lies in both column spaces
    assert linalg.rank(np.hstack([A, got]), P) == linalg.rank(A, P)
    assert linalg.rank(np.hstack([B, got]), P) == linalg.rank(B, P)


def test_left_nullspace():
    rng = np.random.default_rng(17)
    A = random_matrix(rng, 33, 18, rank=12)
    L = linalg.left_nullspace(A, P)
    assert L.shape == (21, 33)
    assert not np.any(linalg.matmul(L, A, P))
