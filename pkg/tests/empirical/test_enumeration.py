"""Integer-vector enumeration and slope fits."""

import math
from fractions import Fraction

import numpy as np
import pytest

from diophantine_exponents.base.types import Flag
from diophantine_exponents.common.exceptions import (
    DimensionMismatchError,
    GuardExceededError,
    NumericalError,
    PreconditionError,
)
from diophantine_exponents.empirical.enumeration import (
    SearchBox,
    dirichlet_floor,
    estimate_beta,
    exact_matrix,
    fit_slope,
    geometric_schedule,
    geometric_span,
    min_image_qnorm,
    quasi_norm,
)
from diophantine_exponents.exponents.pencil import QuasiNorm, flag_candidates

GOLDEN = (1 + 5**0.5) / 2


def _norms(d: int, e: int) -> tuple[QuasiNorm, QuasiNorm]:
    return QuasiNorm.uniform(d, "source"), QuasiNorm.uniform(e, "target")


def _brute_min(x: np.ndarray, qv: QuasiNorm, qe: QuasiNorm, q: float) -> float:
    vs = np.array(list(SearchBox.of(q, qv).iter_box()), dtype=np.float64)
    weights = np.array([float(a) for a in qe.weights])
    return float(np.max(np.abs(vs @ x.T) ** (1.0 / weights), axis=1).min())


BOX_WEIGHTS = [
    [1],
    ["3/2"],
    ["1/2"],
    [2, 1],
    ["3/2", 1],
    [1, "1/2"],
    [1, 1, 1],
    [2, 1, "1/2"],
    ["3/2", "3/2", 1, "1/2"],
    [1, 1, 1, 1],
]
# keep the filtered cube small enough to scan in Python
BOX_CASES = [
    (w, q)
    for w in BOX_WEIGHTS
    for q in (1, 2, 3, 5, 7, 12, 20)
    if (2 * math.floor(q ** max(float(Fraction(a)) for a in w)) + 1) ** len(w) <= 200_000
]


def test_weighted_box_bounds():
    qv = QuasiNorm.of(["3/2", 1], "source")
    box = SearchBox.of(4, qv)
    assert box.bounds == (8, 4)
    assert box.size == 17 * 9


@pytest.mark.parametrize("weights, q", BOX_CASES)
def test_weighted_box_matches_filtered_cube(weights, q):
    box = SearchBox.of(q, QuasiNorm.of(weights, "source"))
    assert set(box.iter_box()) == set(box.iter_filtered())


def test_box_rejects_small_radius():
    with pytest.raises(PreconditionError):
        SearchBox.of(0.5, QuasiNorm.uniform(2, "source"))


def test_quasi_norm():
    assert quasi_norm([4, -1], [2, 1]) == 2
    assert quasi_norm([], []) == 0


def test_identity_minimum_is_one():
    qv, qe = _norms(2, 2)
    assert min_image_qnorm(np.eye(2), qv, qe, 5) == 1


def test_rational_row_reaches_zero():
    qv, qe = _norms(2, 1)
    assert min_image_qnorm(np.array([[1.0, 2.0]]), qv, qe, 10) == 0


def test_golden_ratio_best_approximation_in_box():
    qv, qe = _norms(2, 1)
    # 8 - 5φ is the best pair with both coordinates at most 10
    assert min_image_qnorm(np.array([[1.0, GOLDEN]]), qv, qe, 10) == pytest.approx(5 * GOLDEN - 8, rel=1e-9)


def test_single_solved_column_matches_brute_force():
    qv, qe = _norms(3, 1)
    x = np.array([[1.0, 0.37, 0.91]])
    box = SearchBox.of(6, qv)
    brute = min(abs(float(x[0] @ np.array(v))) for v in box.iter_box())
    assert min_image_qnorm(x, qv, qe, 6) == pytest.approx(brute, abs=1e-12)


@pytest.mark.parametrize("e", [2, 3])
@pytest.mark.parametrize("q", [3, 5])
def test_several_solved_columns_match_brute_force(e, q):
    qv, qe = _norms(4, e)
    rng = np.random.default_rng(100 + e)
    for _ in range(20):
        x = rng.uniform(-1, 1, (e, 4))
        assert min_image_qnorm(x, qv, qe, q) == pytest.approx(_brute_min(x, qv, qe, q), abs=1e-12)


def test_weighted_norms_with_two_rows_match_brute_force():
    qv = QuasiNorm.of(["3/2", 1, 1, "1/2"], "source")
    qe = QuasiNorm.of([2, 1], "target")
    rng = np.random.default_rng(5)
    for _ in range(10):
        x = rng.uniform(-1, 1, (2, 4))
        expected = _brute_min(x, qv, qe, 4)
        assert min_image_qnorm(x, qv, qe, 4) == pytest.approx(expected, abs=1e-12)
        assert min_image_qnorm(x, qv, qe, 4, threads=3) == pytest.approx(expected, abs=1e-12)


def test_nearly_dependent_solved_columns_match_brute_force():
    qv, qe = _norms(4, 2)
    x = np.array([[1.0, 1.001, 0.37, -0.52], [0.5, 0.499, 0.81, 0.13]])
    assert min_image_qnorm(x, qv, qe, 5) == pytest.approx(_brute_min(x, qv, qe, 5), abs=1e-12)


def test_threads_do_not_change_the_minimum():
    qv, qe = _norms(3, 1)
    x = np.array([[1.0, 2**0.5, 3**0.5]])
    assert min_image_qnorm(x, qv, qe, 40, threads=1) == min_image_qnorm(x, qv, qe, 40, threads=4)


def test_guard_raises():
    qv, qe = _norms(3, 1)
    with pytest.raises(GuardExceededError):
        min_image_qnorm(np.array([[1.0, 0.3, 0.7]]), qv, qe, 100, guard=1000)


def test_shape_checked():
    qv, qe = _norms(3, 1)
    with pytest.raises(DimensionMismatchError):
        min_image_qnorm(np.eye(2), qv, qe, 4)


def test_schedules():
    assert geometric_schedule(2, 3, 3) == [2, 6, 18]
    span = geometric_span(10, 1000, 3)
    assert span[0] == 10 and span[-1] == pytest.approx(1000)
    with pytest.raises(PreconditionError):
        geometric_span(10, 5, 3)


def test_fit_slope_of_a_line():
    slope, intercept, r2 = fit_slope([0, 1, 2, 3], [1, 3, 5, 7])
    assert slope == pytest.approx(2)
    assert intercept == pytest.approx(1)
    assert r2 == pytest.approx(1)
    with pytest.raises(NumericalError):
        fit_slope([1], [1])


def test_estimate_beta_validates_schedule():
    qv, qe = _norms(2, 1)
    x = np.array([[1.0, GOLDEN]])
    with pytest.raises(PreconditionError):
        estimate_beta(x, qv, qe, [16, 32, 64])
    with pytest.raises(PreconditionError):
        estimate_beta(x, qv, qe, [16, 32, 64, 64, 128, 256])


def test_golden_ratio_slope_is_one():
    qv, qe = _norms(2, 1)
    fit = estimate_beta(np.array([[1.0, GOLDEN]]), qv, qe, geometric_schedule(16, 2, 8))
    assert fit.slope == pytest.approx(1.0, abs=0.25)
    assert not fit.excluded


def test_zero_minima_are_excluded_and_flagged():
    qv, qe = _norms(2, 1)
    x = np.array([[1.0, 0.3]])  # 10 * 0.3 - 3 = 0 in floating point
    fit = estimate_beta(x, qv, qe, [2, 4, 8, 16, 32, 64, 128])
    assert fit.excluded
    assert Flag.ZERO_MINIMUM.value in fit.flags
    assert len(fit.points) + len(fit.excluded) == 7


def test_exact_matrix_and_dirichlet_floor():
    x = np.array([[1.0, 0.5]])
    assert exact_matrix(x).row(0) == (1, Fraction(1, 2))
    qv, qe = _norms(2, 1)
    floor = dirichlet_floor(np.array([[1.0, GOLDEN]]), [w for _, w in flag_candidates([0, 1], 2)], qv, qe)
    assert floor == 1


@pytest.mark.slow
def test_moment_curve_slope_near_two():
    qv, qe = _norms(3, 1)
    rng = np.random.default_rng(9)
    slopes = []
    for _ in range(3):
        t = float(rng.uniform(-1, 1))
        fit = estimate_beta(np.array([[1.0, t, t * t]]), qv, qe, geometric_span(16, 2000, 7))
        slopes.append(fit.slope)
    assert 1.5 <= float(np.mean(slopes)) <= 2.5
