import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homaloid.linalg import (
    PRIMES,
    SingularMatrixError,
    crt,
    det,
    inverse,
    is_identity,
    matmul,
    matvec,
    modular_rref,
    nullspace,
    proportional,
    rank,
    rational_reconstruct,
    residue,
    solve_linear,
    span_rank,
)

small = st.fractions(min_value=-9, max_value=9, max_denominator=5)


def matrices(m, n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.tuples(matrices(m, n), st.lists(small, min_size=m, max_size=m)))))
def test_solutions_substitute_back(data):
    M, b = data
    s = solve_linear(M, b)
    assert s.rank == len(s.pivots) == rank(M)
    if s.consistent:
        assert matvec(M, s.solution) == list(b)
        for v in s.basis:
            assert not any(matvec(M, v))
        assert len(s.basis) == len(M[0]) - s.rank
    else:
        # inconsistency means the augmented matrix has larger rank
        assert rank([list(r) + [c] for r, c in zip(M, b)]) == s.rank + 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: matrices(n, n)))
def test_inverse_and_det(M):
    d = det(M)
    if d == 0:
        with pytest.raises(SingularMatrixError):
            inverse(M)
    else:
        assert is_identity(matmul(M, inverse(M)))


def test_det_known_values():
    assert det([[2, 0], [0, 3]]) == 6
    assert det([[1, 2], [2, 4]]) == 0
    assert det([[0, 1], [1, 0]]) == -1


def test_nullspace_of_rank_one():
    K = nullspace([[1, 2, 3]])
    assert len(K) == 2
    for v in K:
        assert 1 * v[0] + 2 * v[1] + 3 * v[2] == 0


def test_proportional():
    assert proportional([1, 2], [2, 4])
    assert proportional([0, 0], [1, 2])
    assert not proportional([1, 2], [2, 3])


def test_span_rank():
    assert span_rank([[1, 0, 0], [0, 1, 0], [1, 1, 0]]) == 2
    assert span_rank([]) == 0


def test_primes_are_prime_and_distinct():
    assert len(set(PRIMES)) == len(PRIMES)
    for p in PRIMES:
        assert p < 2**31 and all(p % q for q in range(2, 2000))


@settings(max_examples=100, deadline=None)
@given(st.fractions(max_denominator=10**4).filter(lambda x: abs(x) < 10**4))
def test_rational_reconstruction_round_trip(x):
    p = PRIMES[0]
    r1 = residue(x, p)
    r2 = residue(x, PRIMES[1])
    a, m = crt(r1, p, r2, PRIMES[1])
    assert rational_reconstruct(a, m) == x


def test_modular_rref_matches_exact_rank():
    rng = random.Random(3)
    for _ in range(10):
        M = [[rng.randint(-3, 3) for _ in range(6)] for _ in range(4)]
        M[3] = [a + b for a, b in zip(M[0], M[1])]
        E = modular_rref(np.array(M, dtype=np.int64), PRIMES[0])
        assert E.rank == rank(M)
