import random

import pytest

from abelslab.matrices import (
    Matrix,
    MatrixError,
    commutator,
    conjugate,
    conjugate_by_diagonal,
    hall_identity_check,
)
from abelslab.rings import ZModRing, make_ring


Z5 = ZModRing(5)
Z4 = ZModRing(4)
Z7 = ZModRing(7)


def test_constructors_and_errors():
    I = Matrix.identity(Z5, 3)
    assert I.is_identity()
    e = Matrix.elementary(Z5, 3, 1, 3, 2)
    assert e.entry(1, 3) == 2
    assert e.entry(1, 1) == 1
    with pytest.raises(MatrixError):
        Matrix.elementary(Z5, 3, 2, 2, 1)
    with pytest.raises(MatrixError):
        Matrix.elementary(Z5, 3, 0, 1, 1)
    with pytest.raises(MatrixError):
        Matrix.elementary(Z5, 3, 1, 4, 1)
    with pytest.raises(MatrixError):
        Matrix.diagonal(Z4, (2, 1))
    d = Matrix.diagonal(Z4, (3, 1))
    assert d.entry(1, 1) == 3


def test_elementary_product_rule():
    # e_ij(r) e_ij(s) = e_ij(r+s)
    for r in range(5):
        for s in range(5):
            lhs = Matrix.elementary(Z5, 3, 1, 2, r).mul(
                Matrix.elementary(Z5, 3, 1, 2, s)
            )
            assert lhs == Matrix.elementary(Z5, 3, 1, 2, (r + s) % 5)


def test_chain_commutator_rule():
    # [e_ij(r), e_jl(s)] = e_il(rs) for distinct i, j, l
    for r in range(4):
        for s in range(4):
            x = Matrix.elementary(Z4, 3, 1, 2, r)
            y = Matrix.elementary(Z4, 3, 2, 3, s)
            assert commutator(x, y) == Matrix.elementary(Z4, 3, 1, 3, (r * s) % 4)


def test_disjoint_commutator_trivial():
    x = Matrix.elementary(Z4, 3, 1, 2, 2)
    y = Matrix.elementary(Z4, 3, 2, 3, 2)
    # over zmod(4), rs = 0 here, so the commutator collapses to the identity
    assert commutator(x, y).is_identity()
    a = Matrix.elementary(Z5, 4, 1, 2, 3)
    b = Matrix.elementary(Z5, 4, 3, 4, 2)
    assert commutator(a, b).is_identity()


def test_diagonal_conjugation_examples():
    # Diag(2,1) e12(1) Diag(2,1)^-1 = e12(2) over zmod(5)
    d = Matrix.diagonal(Z5, (2, 1))
    e = Matrix.elementary(Z5, 2, 1, 2, 1)
    assert conjugate_by_diagonal(d, e) == Matrix.elementary(Z5, 2, 1, 2, 2)
    # Diag(1,3) e12(2) Diag(1,3)^-1 = e12(3) over zmod(7): 2 * 3^-1 = 2 * 5 = 3
    d7 = Matrix.diagonal(Z7, (1, 3))
    e7 = Matrix.elementary(Z7, 2, 1, 2, 2)
    assert conjugate_by_diagonal(d7, e7) == Matrix.elementary(Z7, 2, 1, 2, 3)


def test_diagonal_conjugation_matches_generic():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.choice([2, 3, 4])
        d = Matrix.diagonal(Z5, tuple(rng.choice([1, 2, 3, 4]) for _ in range(n)))
        m = Matrix.from_rows(
            Z5, [[rng.randrange(5) for _ in range(n)] for _ in range(n)]
        )
        assert conjugate_by_diagonal(d, m) == d.mul(m).mul(d.inverse())


def test_inverse_triangular():
    rng = random.Random(5)
    for _ in range(25):
        n = rng.choice([2, 3, 4, 5])
        rows = [[Z5.zero] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = rng.choice([1, 2, 3, 4])
            for j in range(i + 1, n):
                rows[i][j] = rng.randrange(5)
        m = Matrix.from_rows(Z5, rows)
        assert m.mul(m.inverse()).is_identity()
        assert m.inverse().mul(m).is_identity()
        mt = m.transpose()
        assert mt.mul(mt.inverse()).is_identity()


def test_inverse_general_and_det():
    w = Matrix.from_rows(Z5, [[0, 1], [4, 0]])
    assert w.det() == Z5.one
    assert w.mul(w.inverse()).is_identity()
    m = Matrix.from_rows(Z7, [[1, 2, 3], [0, 4, 5], [6, 0, 1]])
    d = m.det()
    # cross-check the subset-DP determinant by cofactor expansion
    cof = (
        1 * (4 * 1 - 5 * 0) - 2 * (0 * 1 - 5 * 6) + 3 * (0 * 0 - 4 * 6)
    ) % 7
    assert d == cof
    if Z7.is_unit(d):
        assert m.mul(m.inverse()).is_identity()
    sing = Matrix.from_rows(Z4, [[2, 0], [0, 1]])
    with pytest.raises(MatrixError):
        sing.inverse()


def test_det_multiplicative():
    rng = random.Random(3)
    for _ in range(20):
        a = Matrix.from_rows(Z7, [[rng.randrange(7) for _ in range(3)] for _ in range(3)])
        b = Matrix.from_rows(Z7, [[rng.randrange(7) for _ in range(3)] for _ in range(3)])
        assert a.mul(b).det() == Z7.mul(a.det(), b.det())


def test_power():
    e = Matrix.elementary(Z5, 2, 1, 2, 1)
    assert e.power(0).is_identity()
    assert e.power(5).is_identity()
    assert e.power(3) == Matrix.elementary(Z5, 2, 1, 2, 3)
    assert e.power(-1) == Matrix.elementary(Z5, 2, 1, 2, 4)


def test_weyl_element_shape():
    # x(1) x(-1)^T-ish sandwich: e12(1) e21(-1) e12(1) = ((0,1),(-1,0))
    x = Matrix.elementary(Z5, 2, 1, 2, 1)
    y = Matrix.elementary(Z5, 2, 2, 1, Z5.neg(Z5.one))
    w = x.mul(y).mul(x)
    assert w == Matrix.from_rows(Z5, [[0, 1], [4, 0]])


def test_hall_identities_random_invertibles():
    rng = random.Random(17)
    found = 0
    while found < 30:
        rows = [[rng.randrange(5) for _ in range(3)] for _ in range(3)]
        a = Matrix.from_rows(Z5, rows)
        if not Z5.is_unit(a.det()):
            continue
        b = Matrix.from_rows(
            Z5, [[rng.randrange(5) for _ in range(3)] for _ in range(3)]
        )
        if not Z5.is_unit(b.det()):
            continue
        c = Matrix.from_rows(
            Z5, [[rng.randrange(5) for _ in range(3)] for _ in range(3)]
        )
        if not Z5.is_unit(c.det()):
            continue
        assert hall_identity_check(a, b, c)
        found += 1


def test_hall_identities_unitriangular():
    rng = random.Random(23)
    for _ in range(20):
        mats = []
        for _ in range(3):
            rows = [[Z4.zero] * 4 for _ in range(4)]
            for i in range(4):
                rows[i][i] = Z4.one
                for j in range(i + 1, 4):
                    rows[i][j] = rng.randrange(4)
            mats.append(Matrix.from_rows(Z4, rows))
        assert hall_identity_check(*mats)


def test_ring_mismatch_rejected():
    a = Matrix.identity(Z5, 2)
    b = Matrix.identity(Z4, 2)
    with pytest.raises(MatrixError):
        a.mul(b)
    with pytest.raises(MatrixError):
        a.mul(Matrix.identity(Z5, 3))
    gf5 = make_ring("gf:5")
    c = Matrix.identity(gf5, 2)
    with pytest.raises(MatrixError):
        a.mul(c)


def test_polyq_matrices():
    R = make_ring("polyq:2:0,0,1")
    x = (0, 1)
    e = Matrix.elementary(R, 2, 1, 2, x)
    # x + x = 0 in characteristic 2
    assert e.mul(e).is_identity()
    d = Matrix.diagonal(R, ((1, 1), (1, 0)))
    conj = conjugate_by_diagonal(d, e)
    assert conj == Matrix.elementary(R, 2, 1, 2, R.mul((1, 1), x))
