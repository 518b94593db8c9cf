import random

import pytest

from flagsplit.matrix import (
    MinorSpec,
    PolyMatrix,
    column_minor,
    determinant,
    exp_nilpotent,
    is_nilpotent,
    leibniz_determinant,
    rational_matrix_rank,
    rational_nullspace,
)
from flagsplit.poly import QQ, ZZ, Polynomial, poly_from_string


def random_matrix(rng, size, with_variables=False):
    def entry():
        if with_variables and rng.random() < 0.3:
            return Polynomial.variable(ZZ, rng.choice("uvw"))
        return Polynomial.constant(ZZ, rng.randint(-4, 4))

    return PolyMatrix(ZZ, [[entry() for _ in range(size)] for _ in range(size)])


def test_determinant_against_leibniz_oracle():
    rng = random.Random(20240817)
    for trial in range(100):
        size = rng.randint(1, 5)
        m = random_matrix(rng, size, with_variables=trial % 3 == 0)
        assert determinant(m) == leibniz_determinant(m), f"trial {trial}"


def test_column_minor_listed_row_order_sign():
    m = PolyMatrix(
        ZZ,
        [
            [poly_from_string(s) for s in row]
            for row in (["a", "b"], ["c", "d"])
        ],
    )
    assert column_minor(m, (1, 2)) == poly_from_string("a*d - b*c")
    assert column_minor(m, (2, 1)) == poly_from_string("b*c - a*d")


def test_minor_memo_shared_across_nested_specs():
    rng = random.Random(5)
    m = random_matrix(rng, 5)
    memo = {}
    for k in range(1, 6):
        spec = MinorSpec(range(5, 5 - k, -1))
        assert column_minor(m, spec, memo) == leibniz_determinant(
            m, rows=list(range(5, 5 - k, -1)), cols=list(range(1, k + 1))
        )


def test_row_scaling_law():
    rng = random.Random(9)
    m = random_matrix(rng, 4, with_variables=True)
    t = Polynomial.variable(ZZ, "t")
    scaled_rows = [
        [e * t for e in m.entries[0]],
        *[list(row) for row in m.entries[1:]],
    ]
    scaled = PolyMatrix(ZZ, scaled_rows)
    assert determinant(scaled) == t * determinant(m)


def test_triangular_determinant_is_diagonal_product():
    m = PolyMatrix(
        ZZ,
        [
            [poly_from_string("a"), 0, 0],
            [poly_from_string("x"), poly_from_string("b"), 0],
            [poly_from_string("y"), poly_from_string("z"), poly_from_string("c")],
        ],
    )
    assert determinant(m) == poly_from_string("a*b*c")


def test_permutation_matrix_convention():
    p = PolyMatrix.permutation_matrix(ZZ, [2, 3, 1])
    # column i carries e_{sigma(i)}
    assert p[2, 1] == Polynomial.one(ZZ)
    assert p[3, 2] == Polynomial.one(ZZ)
    assert p[1, 3] == Polynomial.one(ZZ)
    with pytest.raises(ValueError):
        PolyMatrix.permutation_matrix(ZZ, [1, 1, 3])


def test_exp_nilpotent_group_law():
    x = PolyMatrix(QQ, [[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    assert is_nilpotent(x)
    e = exp_nilpotent(x, "t")
    minus = exp_nilpotent(x * (-1), "t")
    assert e * minus == PolyMatrix.identity(QQ, 3)
    assert determinant(e) == Polynomial.one(QQ)


def test_exp_nilpotent_rejects_invertible():
    with pytest.raises(ValueError):
        exp_nilpotent(PolyMatrix.identity(ZZ, 2), "t")


def test_rational_rank_and_nullspace():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rational_matrix_rank(rows) == 2
    basis = rational_nullspace(rows, 3)
    assert len(basis) == 1
    v = basis[0]
    for row in rows:
        assert sum(a * b for a, b in zip(row, v)) == 0
