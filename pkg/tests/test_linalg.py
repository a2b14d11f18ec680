import random
from fractions import Fraction

import numpy as np
import pytest
import scipy.sparse as sp

from linkshom.errors import WellDefinednessError
from linkshom.linalg import (
    SparseRationalMatrix,
    descend,
    draw_primes,
    quotient_basis,
    rank,
)


def dense_rank(rows):
    """Plain Gaussian elimination over Fractions."""
    M = [[Fraction(x) for x in r] for r in rows]
    rank_ = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rank_, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank_], M[piv] = M[piv], M[rank_]
        for i in range(len(M)):
            if i != rank_ and M[i][c]:
                f = M[i][c] / M[rank_][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank_])]
        rank_ += 1
    return rank_


def random_sparse(rng, rows, cols, density=0.15, lo=-3, hi=3):
    dense = [[rng.randint(lo, hi) if rng.random() < density else 0 for _ in range(cols)] for _ in range(rows)]
    return dense, SparseRationalMatrix.from_dense(dense)


def test_rank_examples():
    assert rank(SparseRationalMatrix(5, 7)).rank == 0
    assert rank(SparseRationalMatrix.identity(5)).rank == 5
    assert rank(SparseRationalMatrix.identity(5), "exact").rank == 5


def test_random_ranks_match_dense_oracle():
    rng = random.Random(0)
    for _ in range(50):
        dense, A = random_sparse(rng, 30, 40, density=rng.choice([0.05, 0.1, 0.3]))
        want = dense_rank(dense)
        for policy in ("multimodular", "exact", "both"):
            assert rank(A, policy, seed=1).rank == want
        assert rank(A.transpose()).rank == want


def test_low_rank_products():
    rng = random.Random(1)
    for r in range(0, 8):
        L = [[rng.randint(-5, 5) for _ in range(r)] for _ in range(20)]
        R = [[rng.randint(-5, 5) for _ in range(25)] for _ in range(r)]
        dense = [[sum(L[i][k] * R[k][j] for k in range(r)) for j in range(25)] for i in range(20)]
        A = SparseRationalMatrix.from_dense(dense)
        assert rank(A, "both").rank == dense_rank(dense) <= r


def test_rational_entries_and_denominator_avoidance():
    A = SparseRationalMatrix.from_dense([[Fraction(1, 3), Fraction(2, 3)], [Fraction(1, 6), Fraction(1, 3)]])
    res = rank(A, "both")
    assert res.rank == 1 and res.verified
    assert all(3 % p and 6 % p for p in res.primes_used)
    primes = draw_primes(3, seed=4, avoid=[7, 11])
    assert len(set(primes)) == 3 and all(p > 2**61 for p in primes)


def test_prime_redraw_on_collision():
    first = draw_primes(1, seed=9)[0]
    again = draw_primes(1, seed=9, avoid=[first * 5])
    assert again[0] != first


def test_seeded_primes_are_reproducible():
    A = SparseRationalMatrix.identity(3)
    assert rank(A, seed=5).primes_used == rank(A, seed=5).primes_used
    assert rank(A, seed=5).primes_used != rank(A, seed=6).primes_used


def test_unknown_policy():
    with pytest.raises(ValueError):
        rank(SparseRationalMatrix.identity(2), "float")


def test_quotient_examples():
    Q = quotient_basis(4, SparseRationalMatrix(4, 0))
    assert Q.complement == [0, 1, 2, 3]
    assert Q.projection == SparseRationalMatrix.identity(4)
    Q = quotient_basis(3, SparseRationalMatrix.identity(3))
    assert Q.size == 0


def test_quotient_random_spans():
    rng = random.Random(2)
    for _ in range(30):
        r = rng.randint(0, 10)
        cols = [{i: Fraction(rng.randint(-4, 4)) for i in range(10) if rng.random() < 0.5} for _ in range(r)]
        span = SparseRationalMatrix(10, r, cols)
        rk = dense_rank(span.transpose().to_dense()) if r else 0
        Q = quotient_basis(10, span)
        assert Q.size == 10 - rk
        assert Q.projection @ Q.inclusion == SparseRationalMatrix.identity(Q.size)
        assert (Q.projection @ span).is_zero()


def test_descend_examples():
    span = SparseRationalMatrix(3, 1, [{0: 1, 1: 1}])
    Q = quotient_basis(3, span)
    assert descend(SparseRationalMatrix(3, 3), Q, Q).is_zero()
    I3 = quotient_basis(3, SparseRationalMatrix(3, 0))
    B = SparseRationalMatrix.from_dense([[1, 2, 0], [0, 1, 0], [3, 0, 1]])
    assert descend(B, I3, I3) == B
    # a map that moves the span out of itself is rejected
    bad = SparseRationalMatrix.from_dense([[1, 0, 0], [0, 0, 0], [0, 0, 1]])
    with pytest.raises(WellDefinednessError):
        descend(bad, Q, Q)


def test_matrix_arithmetic_and_scipy_roundtrip():
    rng = random.Random(3)
    da, A = random_sparse(rng, 6, 5, 0.5)
    db, B = random_sparse(rng, 5, 4, 0.5)
    prod = (np.array(da) @ np.array(db)).tolist()
    assert (A @ B).to_dense() == [[Fraction(x) for x in row] for row in prod]
    assert SparseRationalMatrix.from_scipy(sp.csc_matrix(np.array(da))) == A
    assert SparseRationalMatrix.from_scipy(A.to_scipy()) == A
    assert (A + A.scale(-1)).is_zero()
    assert A.transpose().transpose() == A


def test_text_interchange_roundtrip():
    A = SparseRationalMatrix.from_dense([[Fraction(1, 2), 0], [0, -3]])
    text = A.to_text()
    assert text.splitlines()[0] == "2 2"
    assert "0 0 1/2" in text and "1 1 -3" in text
    assert SparseRationalMatrix.from_text(text) == A


def test_no_stored_zeros_and_bounds():
    A = SparseRationalMatrix(2, 2, [{0: 0, 1: 1}, {}])
    assert A.nnz == 1
    with pytest.raises(ValueError):
        SparseRationalMatrix(2, 1, [{2: 1}])
