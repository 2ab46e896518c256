import random

from abelslab.snf import (
    dense_to_triplets,
    quotient_order,
    rational_rank,
    smith_invariant_factors,
)


def factors_of(rows):
    t = dense_to_triplets(rows)
    return smith_invariant_factors(t, len(rows), len(rows[0]) if rows else 0)


def test_zero_matrix():
    assert factors_of([[0, 0], [0, 0]]) == []
    assert rational_rank([], 2, 2) == 0


def test_identity_and_diagonal():
    assert factors_of([[1, 0], [0, 1]]) == [1, 1]
    assert factors_of([[2, 0], [0, 4]]) == [2, 4]
    # divisibility chain fixup: diag(4, 6) ~ diag(2, 12)
    assert factors_of([[4, 0], [0, 6]]) == [2, 12]


def test_known_small_cases():
    assert factors_of([[1, 2], [3, 4]]) == [1, 2]
    assert factors_of([[2, 4], [4, 8]]) == [2]
    assert factors_of([[2, 4, 4], [-6, 6, 12], [10, 4, 16]]) == [2, 2, 156]
    assert factors_of([[6]]) == [6]
    assert factors_of([[-6]]) == [6]


def test_quotient_order():
    assert quotient_order(dense_to_triplets([[4]]), 1, 1) == 4
    assert quotient_order(dense_to_triplets([[2, 0], [0, 3]]), 2, 2) == 6
    # rank deficit means an infinite quotient
    assert quotient_order(dense_to_triplets([[2, 4]]), 1, 2) is None
    # empty relator set over zero generators: trivial group
    assert quotient_order([], 0, 0) == 1


def test_rank_agrees_with_rational_route():
    rng = random.Random(20240817)
    for _ in range(40):
        nrows = rng.randint(1, 6)
        ncols = rng.randint(1, 6)
        rows = [
            [rng.randint(-5, 5) if rng.random() < 0.6 else 0 for _ in range(ncols)]
            for _ in range(nrows)
        ]
        t = dense_to_triplets(rows)
        snf_rank = len(smith_invariant_factors(t, nrows, ncols))
        assert snf_rank == rational_rank(t, nrows, ncols)


def test_invariant_factors_chain():
    rng = random.Random(99)
    for _ in range(30):
        nrows = rng.randint(1, 5)
        ncols = rng.randint(1, 5)
        rows = [
            [rng.randint(-9, 9) for _ in range(ncols)] for _ in range(nrows)
        ]
        fs = smith_invariant_factors(dense_to_triplets(rows), nrows, ncols)
        for a, b in zip(fs, fs[1:]):
            assert b % a == 0
