"""Closed-form exponents and their representation-theoretic oracles."""

from fractions import Fraction

import pytest

from diophantine_exponents.algebra.freelie import witt_dim
from diophantine_exponents.base.types import ExponentValue, Flag
from diophantine_exponents.common.exceptions import OracleMismatchError, PreconditionError
from diophantine_exponents.exponents.repthy import (
    YoungDiagram,
    checked_dim,
    dominance_check,
    formula_table,
    free_beta,
    heisenberg_beta,
    hook_content_dim,
    klyachko_diagrams,
    lambda0,
    mertens,
    mertens_growth,
    metabelian_beta,
    mobius,
    necklace_count,
    step2_beta,
    us_beta,
    veronese_beta,
    weyl_dim,
    young_diagrams,
)


def test_mobius_and_mertens():
    assert [mobius(n) for n in (1, 2, 4, 6, 30)] == [1, -1, 0, 1, -1]
    assert mertens(0) == 0
    assert mertens(10) == -1
    with pytest.raises(PreconditionError):
        mobius(0)


@pytest.mark.parametrize("s", [2, 3, 4, 5])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_mertens_growth_equals_weighted_witt_sum(s, k):
    assert mertens_growth(s, k) == sum(i * witt_dim(k, i) for i in range(1, s + 1))


def test_necklace_count_matches_witt():
    assert [necklace_count(3, i) for i in range(1, 6)] == [witt_dim(3, i) for i in range(1, 6)]


@pytest.mark.parametrize("boxes", [1, 2, 3, 4, 5, 6])
def test_weyl_and_hook_content_agree(boxes):
    for lam in young_diagrams(boxes):
        for k in range(1, 8):
            assert weyl_dim(lam, k) == hook_content_dim(lam, k)


def test_known_dimensions():
    assert checked_dim(YoungDiagram.of(2, 1), 3) == 8
    assert checked_dim(YoungDiagram.of(3), 2) == 4
    assert checked_dim(YoungDiagram.of(1, 1, 1, 1), 3) == 0


def test_young_diagram_validation_and_conjugate():
    assert YoungDiagram.of(3, 1).conjugate() == YoungDiagram.of(2, 1, 1)
    assert len(young_diagrams(4)) == 5
    with pytest.raises(PreconditionError):
        YoungDiagram.of(1, 2)


def test_klyachko_diagrams_exclude_row_column_and_square():
    assert klyachko_diagrams(4) == [YoungDiagram.of(3, 1), YoungDiagram.of(2, 1, 1)]
    assert lambda0(3) == YoungDiagram.of(2, 1)


def test_dominance_moves_boxes_down():
    assert YoungDiagram.of(3).dominates(YoungDiagram.of(2, 1))
    assert not YoungDiagram.of(2, 1).dominates(YoungDiagram.of(3))
    assert dominance_check(YoungDiagram.of(3), YoungDiagram.of(2, 1), k=5, d=2)
    with pytest.raises(PreconditionError):
        dominance_check(YoungDiagram.of(2, 1), YoungDiagram.of(3), k=5, d=2)


@pytest.mark.parametrize(
    "k, alpha, beta",
    [(2, 0, Fraction(0)), (3, 4, Fraction(4, 9)), (4, 10, Fraction(5, 8))],
)
def test_heisenberg_beta(k, alpha, beta):
    value = heisenberg_beta(k)
    assert value.alpha == alpha
    assert value.eta == k * k
    assert value.beta == beta
    assert value.stable_from == 2


def test_heisenberg_is_step2_and_metabelian_with_one_dim_center():
    for k in range(2, 7):
        assert step2_beta(1, k).beta == heisenberg_beta(k).beta
        assert metabelian_beta(2, 1, k).beta == heisenberg_beta(k).beta


def test_step2_guards():
    with pytest.raises(PreconditionError):
        step2_beta(1, 2, d1=3)
    with pytest.raises(PreconditionError):
        step2_beta(4, 3, d1=3)


def test_us_beta_three_three():
    value = us_beta(3, 3)
    assert value.alpha == 21
    assert value.eta == 33
    assert value.beta == Fraction(7, 11)
    with pytest.raises(PreconditionError):
        us_beta(3, 2)


@pytest.mark.parametrize("k", range(3, 10))
def test_free_beta_closed_form(k):
    value = free_beta(3, 3, k)
    c = k * (k + 1) * (k - 1) // 6  # C(k+1, 3)
    assert value.beta == Fraction(3, 4) * Fraction(c - 4, k**3 + k**2 - k)
    assert value.limit == Fraction(1, 8)


def test_free_beta_step_two_dispatch_is_flagged():
    value = free_beta(3, 2, 4)
    assert Flag.S2_DISPATCH.value in value.flags
    assert value.beta == step2_beta(3, 4, d1=3).beta
    assert value.parameters == {"d": 3, "s": 2, "k": 4}


def test_free_beta_needs_enough_generators():
    with pytest.raises(PreconditionError):
        free_beta(2, 3, 5)
    with pytest.raises(PreconditionError):
        free_beta(3, 3, 2)


def test_veronese_beta():
    assert veronese_beta(3, 2) == 1
    assert veronese_beta(5, 2) == 2
    for p in range(1, 5):
        assert veronese_beta(p, p + 1) == 0


def test_formula_table():
    rows = formula_table("us", [3, 4], s=3)
    assert rows[0].beta == Fraction(7, 11)
    assert [r.parameters["k"] for r in rows] == [3, 4]
    with pytest.raises(PreconditionError):
        formula_table("nope", [3])


def test_exponent_value_rejects_inconsistent_beta():
    with pytest.raises(OracleMismatchError):
        ExponentValue("x", {}, Fraction(1), 2, Fraction(1, 3))
