"""Relatively free evaluation maps of nilpotent Lie algebras."""

from fractions import Fraction

import pytest

from diophantine_exponents import create_manifold
from diophantine_exponents.algebra.liealg import heisenberg
from diophantine_exponents.common.exceptions import PreconditionError, SchemaError
from diophantine_exponents.common.utils import RationalSampler
from diophantine_exponents.exponents.pencil import unweighted_pencil


def test_heisenberg_two_elements(heisenberg_family, sampler):
    assert heisenberg_family.grading() == [2, 1, 1]
    assert heisenberg_family.source_norm().weights == (2, 1, 1)
    assert heisenberg_family.growth_exponent() == 4
    result = heisenberg_family.tau(sampler)
    assert result.value == 0
    assert heisenberg_family.beta(result.value) == 0


@pytest.mark.parametrize("k, tau, beta", [(3, 4, Fraction(4, 9)), (4, 10, Fraction(5, 8))])
def test_heisenberg_tau_matches_closed_form(k, tau, beta):
    family = create_manifold("heisenberg", {"k": k})
    result = family.tau(RationalSampler(seed=k))
    assert result.value == tau
    assert family.growth_exponent() == k * k
    assert family.beta(result.value) == beta == family.closed_form().beta
    # the witness is the top-degree slice
    assert result.witness == family.slice(2)


def test_generic_lie_family_agrees_with_heisenberg():
    generic = create_manifold("lie", {"algebra": "heisenberg", "k": 3})
    direct = create_manifold("heisenberg", {"k": 3})
    assert generic.tau(RationalSampler(1)).value == direct.tau(RationalSampler(2)).value
    assert generic.closed_form() is None


def test_lie_family_accepts_algebra_objects_and_json():
    by_object = create_manifold("lie", {"algebra": heisenberg(), "k": 2})
    by_json = create_manifold("lie", {"algebra": heisenberg().to_json(), "k": 2})
    assert by_object.grading() == by_json.grading()


def test_lie_family_needs_algebra_and_letters():
    with pytest.raises(SchemaError):
        create_manifold("lie", {"k": 2}).grading()
    with pytest.raises(PreconditionError):
        create_manifold("heisenberg", {"k": 0})


def test_free_step_two_is_heisenberg_on_two_generators():
    family = create_manifold("free", {"d": 2, "s": 2, "k": 3})
    assert family.tau(RationalSampler(5)).value == 4
    assert family.closed_form().beta == Fraction(4, 9)


def test_heisenberg_lies_in_its_slice_pencil(sampler):
    family = create_manifold("heisenberg", {"k": 3})
    w = family.slice(2)
    # generic X_1..X_3 send the three brackets onto the centre
    cert = family.contains(unweighted_pencil(w, 1), sampler)
    assert cert.contained
    assert cert.phi_M == 1


def test_manifold_json_round_trips_through_explicit(sampler):
    family = create_manifold("heisenberg", {"k": 3})
    explicit = create_manifold("explicit", {"manifold": family.manifold_json()})
    assert explicit.grading() == family.grading()
    assert explicit.tau(sampler).value == 4


def test_carnot_target_weights():
    family = create_manifold("us", {"s": 2, "k": 2, "riemannian": False})
    assert family.target_norm().weights == (2, 1, 1)


@pytest.mark.slow
def test_us3_tau_matches_closed_form():
    family = create_manifold("us", {"s": 3, "k": 3})
    result = family.tau(RationalSampler(seed=33))
    expected = family.closed_form()
    assert result.value == expected.alpha == 21
    assert family.growth_exponent() == expected.eta == 33
    assert family.beta(result.value) == Fraction(7, 11)
