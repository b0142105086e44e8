"""Heisenberg group law and word minima."""

import itertools
import math

import numpy as np
import pytest

from diophantine_exponents.common.exceptions import GuardExceededError, PreconditionError
from diophantine_exponents.empirical.heisenberg import (
    _central_min,
    commutator,
    distance,
    heisenberg_word_min,
    inverse,
    length_schedule,
    multiply,
    power,
    word_min_at_length,
    word_value,
)

G = (0.5, -1.25, 2.0)
H = (1.5, 0.75, -0.5)


def test_group_law():
    assert multiply(G, inverse(G)) == pytest.approx((0, 0, 0))
    assert power(G, 3) == pytest.approx(multiply(multiply(G, G), G))
    assert power(G, 0) == (0, 0, 0)


def test_commutator_is_central():
    c = commutator(G, H)
    assert c == pytest.approx((0, 0, G[0] * H[1] - H[0] * G[1]))


def test_word_value_collects_commutators():
    value = word_value([G, H], [1, 1], {(0, 1): 2})
    expected = multiply(multiply(G, H), power(commutator(G, H), 2))
    assert value == pytest.approx(expected)
    assert distance(value) == pytest.approx(max(abs(v) for v in expected))


def test_central_min_solves_last_coefficient():
    assert _central_min(np.array([1.0, 0.5]), 3, 1e9) == 0
    assert _central_min(np.array([1.0, 2**0.5]), 10, 1e9) == pytest.approx(5 * 2**0.5 - 7)
    # the best word uses the last commutator alone
    assert _central_min(np.array([10.0, 0.3]), 2, 1e9) == pytest.approx(0.3)


def test_central_scan_guard():
    with pytest.raises(GuardExceededError):
        _central_min(np.array([1.0, 2.0, 3.0]), 100, 1000)


def test_length_schedule():
    lengths = length_schedule(40, 8)
    assert lengths[0] == 2 and lengths[-1] == 40
    assert lengths == sorted(set(lengths))
    with pytest.raises(PreconditionError):
        length_schedule(1)


def test_word_min_needs_matching_tuple():
    with pytest.raises(PreconditionError):
        heisenberg_word_min([G, H], 3, 10)
    with pytest.raises(PreconditionError):
        heisenberg_word_min([G], 1, 10)


@pytest.mark.slow
def test_three_elements_slope_near_four():
    rng = np.random.default_rng(3)
    g_tuple = [tuple(rng.uniform(-1, 1, 3)) for _ in range(3)]
    fit = heisenberg_word_min(g_tuple, 3, 40)
    assert 3.0 <= fit.slope <= 5.0


def _brute_word_min(g_tuple, ell):
    pairs = list(itertools.combinations(range(len(g_tuple)), 2))
    best = math.inf
    for n in itertools.product(range(-ell, ell + 1), repeat=len(g_tuple)):
        for m in itertools.product(range(-ell * ell, ell * ell + 1), repeat=len(pairs)):
            if any(n) or any(m):
                best = min(best, distance(word_value(g_tuple, n, dict(zip(pairs, m)))))
    return best


def test_abelian_words_carry_their_central_coordinate():
    # g_1 alone has |X|, |Y| = 0.3 below |c| = 0.54, but Z stays near 2
    g_tuple = [(0.3, 0.3, 2.0), (-0.9, 0.9, -0.2)]
    assert word_min_at_length(g_tuple, 1) == pytest.approx(0.54)
    assert _brute_word_min(g_tuple, 1) == pytest.approx(0.54)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_word_min_matches_brute_force_for_two_elements(seed):
    rng = np.random.default_rng(seed)
    g_tuple = [tuple(rng.uniform(-1, 1, 3)) for _ in range(2)]
    for ell in (1, 2, 3):
        assert word_min_at_length(g_tuple, ell) == pytest.approx(_brute_word_min(g_tuple, ell), rel=1e-9, abs=1e-12)


def test_word_min_matches_brute_force_for_three_elements():
    rng = np.random.default_rng(11)
    g_tuple = [tuple(rng.uniform(-1, 1, 3)) for _ in range(3)]
    assert word_min_at_length(g_tuple, 2) == pytest.approx(_brute_word_min(g_tuple, 2), rel=1e-9, abs=1e-12)
