"""Free nilpotent Lie algebra in the Lyndon basis."""

from collections import Counter
from fractions import Fraction

import pytest

from diophantine_exponents.algebra.freelie import (
    LieElement,
    bch_product,
    bracket,
    evaluate,
    is_lyndon,
    lyndon_basis,
    lyndon_words,
    standard_factorization,
    witt_dim,
)
from diophantine_exponents.algebra.liealg import abelian, heisenberg, u
from diophantine_exponents.common.exceptions import PreconditionError, SchemaError, UnsupportedError


@pytest.mark.parametrize(
    "k, expected",
    [
        (2, [2, 1, 2, 3, 6, 9]),
        (3, [3, 3, 8, 18, 48, 116]),
    ],
)
def test_witt_dimensions(k, expected):
    assert [witt_dim(k, i) for i in range(1, 7)] == expected


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_lyndon_counts_match_witt(k):
    counts = Counter(len(w) for w in lyndon_words(k, 6))
    assert [counts[i] for i in range(1, 7)] == [witt_dim(k, i) for i in range(1, 7)]


def test_witt_rejects_bad_arguments():
    with pytest.raises(PreconditionError):
        witt_dim(0, 2)


def test_is_lyndon():
    assert is_lyndon((1, 1, 2))
    assert is_lyndon((1, 2))
    assert not is_lyndon((1, 2, 1))
    assert not is_lyndon((1, 2, 1, 2))
    assert not is_lyndon(())


def test_standard_factorization_takes_longest_lyndon_suffix():
    assert standard_factorization((1, 1, 2)) == ((1,), (1, 2))
    assert standard_factorization((1, 2, 2)) == ((1, 2), (2,))


def test_basis_is_degree_major():
    basis = lyndon_basis(3, 3)
    assert basis.dim == 14
    assert basis.degrees() == sorted(basis.degrees())
    assert len(basis.degree_slice(3)) == 8
    assert basis.bracketed((1, 1, 2)) == "[x1,[x1,x2]]"


def test_bracket_is_antisymmetric():
    basis = lyndon_basis(2, 3)
    x1, x2 = basis.generator(1), basis.generator(2)
    assert bracket(x1, x2) == -bracket(x2, x1)
    assert bracket(x1, x1).is_zero()


def test_jacobi_identity_in_normal_form():
    basis = lyndon_basis(3, 3)
    x, y, z = (basis.generator(i) for i in (1, 2, 3))
    total = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert total.is_zero()


def test_brackets_above_step_truncate():
    basis = lyndon_basis(2, 2)
    x1, x2 = basis.generator(1), basis.generator(2)
    assert bracket(x1, bracket(x1, x2)).is_zero()


def test_element_rejects_non_lyndon_word():
    with pytest.raises(SchemaError):
        lyndon_basis(2, 3).element((2, 1))


def test_vector_and_json_forms_agree():
    basis = lyndon_basis(2, 3)
    elem = Fraction(1, 2) * basis.generator(1) + bracket(basis.generator(1), basis.generator(2))
    assert LieElement.from_vector(basis, elem.to_vector()) == elem
    assert LieElement.from_json(elem.to_json()) == elem


def test_evaluate_in_heisenberg():
    h = heisenberg()
    basis = lyndon_basis(2, 2)
    value = evaluate(basis.element((1, 2)), h, [(1, 0, 0), (0, 1, 0)])
    assert value == (0, 0, 1)


def test_bch_in_heisenberg_adds_half_the_bracket():
    h = heisenberg()
    x = (Fraction(1), Fraction(2), Fraction(3))
    y = (Fraction(-1), Fraction(5), Fraction(1, 2))
    z = bch_product(x, y, h)
    # [x, y] = (1*5 - 2*(-1)) e3 = 7 e3
    assert z == (Fraction(0), Fraction(7), Fraction(3) + Fraction(1, 2) + Fraction(7, 2))


def test_bch_in_abelian_is_sum():
    g = abelian(3)
    assert bch_product((1, 2, 3), (4, 5, 6), g) == (5, 7, 9)


def test_bch_is_associative_in_u3():
    g = u(3)
    a = tuple(Fraction(i + 1) for i in range(6))
    b = tuple(Fraction((-1) ** i, i + 1) for i in range(6))
    c = tuple(Fraction(2 * i - 3) for i in range(6))
    assert bch_product(bch_product(a, b, g), c, g) == bch_product(a, bch_product(b, c, g), g)


def test_bch_rejects_high_step():
    g = u(7)
    with pytest.raises(UnsupportedError):
        bch_product([0] * g.dim, [0] * g.dim, g)
