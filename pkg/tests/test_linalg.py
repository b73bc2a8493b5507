import random
from fractions import Fraction

import pytest
from helpers import dense_rank, oracle_invariant_factors

from zkstrand.errors import UnsupportedOperation, ValidationError
from zkstrand.linalg import (GF, QQ, ZZ, CoefficientSpec, Matrix, column_reduce, invariant_factors, rank,
                             smith_normal_form, solve_in_span)


def test_coefficient_spec_parsing():
    assert CoefficientSpec.parse("0") == QQ
    assert CoefficientSpec.parse("Z") == ZZ
    assert CoefficientSpec.parse("7") == GF(7)
    assert CoefficientSpec.parse("F3") == GF(3)
    with pytest.raises(ValidationError):
        CoefficientSpec.parse("4")
    with pytest.raises(ValidationError):
        GF(2**31 + 11)
    with pytest.raises(ValidationError):
        CoefficientSpec.parse("x")


def test_scalars_normalized():
    assert GF(5).coerce(-3) == 2
    assert QQ.coerce(Fraction(4, -6)) == Fraction(-2, 3)
    assert Fraction(4, -6).denominator == 3


def test_identity_over_f2():
    r = column_reduce(Matrix.identity(2, GF(2)))
    assert r.rank == 2 and r.kernel_basis.cols == 0


def test_degenerate_over_f2():
    r = column_reduce(Matrix.from_rows([[1, 1], [1, 1]], GF(2)))
    assert r.rank == 1
    assert r.kernel_basis.columns() == [[1, 1]]


def test_c4_boundary_rank():
    # reduced ∂_1 of the square: vertices 1..4 plus the augmentation row
    edges = [(1, 2), (2, 3), (3, 4), (1, 4)]
    rows = [[(-1 if v == a else 1 if v == b else 0) for a, b in edges] for v in range(1, 5)]
    assert rank(Matrix.from_rows(rows, QQ)) == 3 == dense_rank(rows)


def test_column_reduce_over_z_unsupported():
    with pytest.raises(UnsupportedOperation):
        column_reduce(Matrix.from_rows([[1]], ZZ))


def test_kernel_spans_nullspace():
    rng = random.Random(3)
    for spec in (QQ, GF(2), GF(5)):
        for _ in range(40):
            r, c = rng.randint(1, 6), rng.randint(1, 6)
            A = Matrix.from_rows([[rng.randint(-3, 3) for _ in range(c)] for _ in range(r)], spec)
            red = column_reduce(A)
            assert red.rank + red.kernel_basis.cols == c
            prod = A @ red.kernel_basis
            assert all(x == 0 for x in prod.entries)
            assert red.rank == dense_rank(A.to_rows(), spec.p)
            assert len(red.pivot_columns) == red.rank


def test_snf_small_cases():
    assert smith_normal_form(Matrix.from_rows([[2, 0], [0, 3]], ZZ)).invariant_factors == [1, 6]
    assert smith_normal_form(Matrix.from_rows([[0]], ZZ)).invariant_factors == []
    assert smith_normal_form(Matrix.zeros(0, 0, ZZ)).invariant_factors == []


def test_snf_matches_determinantal_divisors():
    rng = random.Random(11)
    for _ in range(60):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        rows = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
        assert invariant_factors(rows) == oracle_invariant_factors(rows)


def test_solve_in_span():
    basis = Matrix.from_columns([[1, 0, -1]], 3, QQ)
    assert solve_in_span(basis, [0, 0, 0]) == [0]
    assert solve_in_span(basis, [1, 0, -1]) == [1]
    assert solve_in_span(basis, [1, 1, 0]) is None
    with pytest.raises(ValidationError):
        solve_in_span(Matrix.from_columns([[1, 1], [2, 2]], 2, QQ), [1, 1])


def test_solve_h0_cycle_over_f2():
    # H̃_0 of the complex with facets 12 and 3: representative [3] - [1]
    basis = Matrix.from_columns([[-1, 0, 1]], 3, GF(2))
    coords = solve_in_span(basis, [GF(2).coerce(-1), 0, 1])
    assert coords == [1]


def test_matrix_validation():
    with pytest.raises(ValidationError):
        Matrix(2, 2, (1, 2, 3), QQ)
