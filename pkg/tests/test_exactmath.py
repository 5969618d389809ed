import random
from fractions import Fraction

import pytest

from innerscope.exactmath import (
    GF,
    QQ,
    DivisionByZero,
    FieldMismatch,
    Matrix,
    Scalar,
    is_prime,
    rref_rank_kernel,
)


def test_field_construction():
    assert QQ.char == 0
    assert GF(7).char == 7
    assert GF(2) is GF(2)
    with pytest.raises(ValueError):
        GF(6)
    with pytest.raises(ValueError):
        GF(1)
    with pytest.raises(ValueError):
        GF(2**63 + 7)


def test_is_prime_small():
    primes = [n for n in range(60) if is_prime(n)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert is_prime(2**61 - 1)
    assert not is_prime(2**60)


def test_scalar_canonical_forms():
    assert Scalar(QQ, "2/4") == Scalar(QQ, Fraction(1, 2))
    assert Scalar(GF(5), 7).value == 2
    assert Scalar(GF(5), -1).value == 4
    assert Scalar(QQ, 3).serialize() == "3"
    assert Scalar(QQ, Fraction(-3, 6)).serialize() == "-1/2"
    assert Scalar(GF(3), 5).serialize() == "2 mod 3"


def test_scalar_round_trip():
    rng = random.Random(11)
    for _ in range(200):
        num = rng.randrange(-10**12, 10**12)
        den = rng.randrange(1, 10**12)
        s = Scalar(QQ, Fraction(num, den))
        assert Scalar.parse(s.serialize()) == s
    for p in (2, 3, 5, 97, 2**31 - 1):
        for _ in range(20):
            s = Scalar(GF(p), rng.randrange(p))
            assert Scalar.parse(s.serialize()) == s


def test_scalar_field_mismatch():
    with pytest.raises(FieldMismatch):
        Scalar(QQ, 1) + Scalar(GF(5), 1)
    with pytest.raises(FieldMismatch):
        Scalar(GF(3), 1) * Scalar(GF(5), 1)
    with pytest.raises(FieldMismatch):
        Scalar.parse("2 mod 3", GF(5))


def test_scalar_arithmetic_examples():
    assert Scalar(QQ, "1/2") + Scalar(QQ, "1/3") == Scalar(QQ, "5/6")
    assert Scalar(GF(5), 3) * Scalar(GF(5), 4) == Scalar(GF(5), 2)
    assert Scalar(GF(7), 3).inv() == Scalar(GF(7), 5)
    assert -Scalar(GF(2), 1) == Scalar(GF(2), 1)
    with pytest.raises(DivisionByZero):
        Scalar(QQ, 0).inv()
    with pytest.raises(DivisionByZero):
        Scalar(GF(5), 1) / Scalar(GF(5), 0)


def field_axioms(field, sample):
    """Randomized field-axiom battery on a sample of raw values."""
    for a in sample:
        for b in sample:
            assert field.add(a, b) == field.add(b, a)
            assert field.mul(a, b) == field.mul(b, a)
            for c in sample:
                assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
                assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
                assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
        assert field.add(a, field.zero) == a
        assert field.mul(a, field.one) == a
        assert field.add(a, field.neg(a)) == field.zero
        if a != field.zero:
            assert field.mul(a, field.inv(a)) == field.one


def test_field_axioms_qq():
    rng = random.Random(5)
    sample = [Fraction(rng.randrange(-30, 30), rng.randrange(1, 12)) for _ in range(6)]
    field_axioms(QQ, sample)


def test_field_axioms_gfp():
    for p in (2, 3, 5, 11):
        field_axioms(GF(p), list(range(p))[: min(p, 6)])


def test_rref_frozen_example():
    # hand-reduced: [[1,2],[2,4]] over QQ has rank 1 and kernel spanned by (-2,1)
    m = Matrix(QQ, [[1, 2], [2, 4]])
    reduced, pivots, rank, kernel = rref_rank_kernel(m)
    assert reduced == Matrix(QQ, [[1, 2], [0, 0]])
    assert pivots == (0,)
    assert rank == 1
    assert kernel == [(Fraction(-2), Fraction(1))]


def test_rref_identity_example():
    m = Matrix(GF(2), [[1, 1], [0, 1]])
    reduced, pivots, rank, kernel = rref_rank_kernel(m)
    assert reduced == Matrix.identity(GF(2), 2)
    assert rank == 2
    assert kernel == []


def random_matrix(rng, field, nrows, ncols):
    if field.char == 0:
        return Matrix(field, [[Fraction(rng.randrange(-4, 5), rng.randrange(1, 4))
                               for _ in range(ncols)] for _ in range(nrows)])
    return Matrix(field, [[rng.randrange(field.char) for _ in range(ncols)]
                          for _ in range(nrows)])


def test_rref_properties_randomized():
    rng = random.Random(77)
    for field in (QQ, GF(2), GF(5)):
        for _ in range(25):
            nrows = rng.randrange(1, 6)
            ncols = rng.randrange(1, 6)
            m = random_matrix(rng, field, nrows, ncols)
            reduced, pivots, rank, kernel = rref_rank_kernel(m)
            # idempotence
            again, pivots2, rank2, _ = rref_rank_kernel(reduced)
            assert again == reduced and pivots2 == pivots and rank2 == rank
            # row rank equals column rank
            assert m.transpose().rank() == rank
            # rank-nullity, and every kernel vector is annihilated
            assert rank + len(kernel) == ncols
            for vec in kernel:
                assert all(x == field.zero for x in m.apply(vec))
            # pivot columns of the reduced matrix are standard basis vectors
            for r, pc in enumerate(pivots):
                col = reduced.column(pc)
                assert col[r] == field.one
                assert all(col[i] == field.zero for i in range(nrows) if i != r)


def test_matrix_inverse_and_solve():
    rng = random.Random(3)
    for field in (QQ, GF(7)):
        found = 0
        while found < 10:
            m = random_matrix(rng, field, 4, 4)
            if not m.is_invertible():
                continue
            found += 1
            assert m * m.inverse() == Matrix.identity(field, 4)
            rhs = tuple(field.coerce(rng.randrange(-3, 4)) for _ in range(4))
            x = m.solve(rhs)
            assert x is not None and m.apply(x) == rhs
    assert Matrix(QQ, [[1, 1], [1, 1]]).solve((0, 1)) is None


def test_matrix_field_mismatch():
    with pytest.raises(FieldMismatch):
        Matrix(QQ, [[1]]) * Matrix(GF(2), [[1]])
    with pytest.raises(FieldMismatch):
        Matrix(GF(3), [[1]]) + Matrix(GF(5), [[1]])
