"""Rational linear algebra: kernels, intersections, flags."""

from fractions import Fraction

import pytest

from diophantine_exponents.algebra.qlinalg import (
    QMatrix,
    Subspace,
    coordinate_dims,
    determinant,
    flag_dims,
    intersect,
    kernel,
    rank,
    subspace_sum,
)
from diophantine_exponents.common.exceptions import DimensionMismatchError, FlagNotNestedError


def test_kernel_dimension_and_membership():
    m = QMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    k = kernel(m)
    assert k.dim == 2
    for v in k.vectors():
        assert m.apply(v) == (0, 0)


def test_kernel_of_invertible_is_zero():
    assert kernel(QMatrix.identity(3)).is_zero()


def test_span_is_canonical():
    a = Subspace.span([[1, 1, 0], [0, 1, 1]], 3)
    b = Subspace.span([[1, 2, 1], [2, 2, 0], [1, 0, -1]], 3)
    assert a == b
    assert a.dim == 2


def test_intersect_and_sum_satisfy_dimension_formula():
    w1 = Subspace.span([[1, 0, 0, 0], [0, 1, 0, 0]], 4)
    w2 = Subspace.span([[0, 1, 0, 0], [0, 0, 1, 1]], 4)
    meet, join = intersect(w1, w2), subspace_sum(w1, w2)
    assert meet == Subspace.coordinate([1], 4)
    assert meet.dim + join.dim == w1.dim + w2.dim
    assert w1 & w2 == meet
    assert w1 + w2 == join


def test_intersect_with_full_and_zero():
    w = Subspace.span([[1, -1, 2]], 3)
    assert intersect(w, Subspace.full(3)) == w
    assert intersect(w, Subspace.zero(3)).is_zero()


def test_containment():
    small = Subspace.span([[1, 1, 0]], 3)
    big = Subspace.span([[1, 0, 0], [0, 1, 0]], 3)
    assert small <= big
    assert not big <= small
    assert big.contains_vector([Fraction(1, 3), 5, 0])


def test_ambient_mismatch_raises():
    with pytest.raises(DimensionMismatchError):
        intersect(Subspace.full(2), Subspace.full(3))


def test_rank_of_rational_matrix():
    m = QMatrix.from_rows([[Fraction(1, 2), 1], [1, 2], [0, 0]])
    assert rank(m) == 1


def test_image_and_annihilator():
    m = QMatrix.from_rows([[1, 0], [0, 0], [0, 1]])
    image = Subspace.full(2).image(m)
    assert image == Subspace.coordinate([0, 2], 3)
    assert image.annihilator() == Subspace.coordinate([1], 3)


def test_flag_dims_over_coordinate_flag_matches_coordinate_dims():
    w = Subspace.span([[0, 1, 1], [1, 0, 0]], 3)
    flag = [Subspace.coordinate(range(i), 3) for i in range(4)]
    assert flag_dims(w, flag) == coordinate_dims(w, [0, 1, 2]) == [0, 1, 1, 2]


def test_coordinate_dims_respects_order():
    w = Subspace.coordinate([2], 3)
    assert coordinate_dims(w, [2, 0, 1]) == [0, 1, 1, 1]
    assert coordinate_dims(w, [0, 1, 2]) == [0, 0, 0, 1]


def test_flag_dims_rejects_non_increasing_flag():
    flag = [Subspace.coordinate([0], 2), Subspace.coordinate([1], 2), Subspace.full(2)]
    with pytest.raises(FlagNotNestedError):
        flag_dims(Subspace.full(2), flag)


def test_flag_dims_rejects_flag_not_reaching_ambient():
    flag = [Subspace.zero(3), Subspace.coordinate([0], 3)]
    with pytest.raises(FlagNotNestedError):
        flag_dims(Subspace.full(3), flag)


def test_determinant_exact():
    m = QMatrix.from_rows([[2, 1, 0], [1, 3, 1], [0, 1, Fraction(1, 2)]])
    assert determinant(m) == Fraction(1, 2)
    assert determinant(QMatrix.from_rows([[0, 1], [1, 0]])) == -1
    assert determinant(QMatrix.from_rows([[1, 2], [2, 4]])) == 0


def test_determinant_requires_square():
    with pytest.raises(DimensionMismatchError):
        determinant(QMatrix.zeros(2, 3))


def test_matmul_and_transpose():
    a = QMatrix.from_rows([[1, 2], [3, 4]])
    assert (a @ QMatrix.identity(2)) == a
    assert a.transpose().row(0) == (1, 3)


def test_json_round_trip_keeps_rationals():
    w = Subspace.span([[Fraction(1, 3), 1, 0]], 3)
    assert Subspace.from_json(w.to_json()) == w
