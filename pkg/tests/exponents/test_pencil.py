"""Volume functions, pencils and the ratio maximizer."""

from fractions import Fraction

import pytest
import sympy

from diophantine_exponents import create_manifold
from diophantine_exponents.algebra.qlinalg import QMatrix, Subspace
from diophantine_exponents.base.types import Flag
from diophantine_exponents.common.exceptions import (
    DimensionMismatchError,
    PreconditionError,
    UniquenessViolationError,
)
from diophantine_exponents.common.utils import RationalSampler
from diophantine_exponents.exponents.pencil import (
    GenericPoints,
    Pencil,
    PolyMap,
    QuasiNorm,
    dirichlet_bound,
    extremal_value,
    flag_candidates,
    graded_candidates,
    is_constraining,
    is_extremal,
    minors_vector,
    pencil_contains,
    phi,
    phi_index_set,
    pluecker_span,
    psi,
    psi_index_set,
    relatively_free_source_norm,
    submodularity_check,
    tau_candidates,
    unweighted_pencil,
)

E0 = Subspace.coordinate([0], 2)
E1 = Subspace.coordinate([1], 2)
FULL = Subspace.full(2)


def _uniform(dim_v: int, dim_e: int) -> tuple[QuasiNorm, QuasiNorm]:
    return QuasiNorm.uniform(dim_v, "source"), QuasiNorm.uniform(dim_e, "target")


# =============================================================================
# Quasi-norms
# =============================================================================


def test_quasi_norm_weights_must_be_sorted_and_positive():
    with pytest.raises(PreconditionError):
        QuasiNorm.of([1, 2], "source")
    with pytest.raises(PreconditionError):
        QuasiNorm.of([1, 0], "target")
    assert QuasiNorm.of(["3/2", 1], "source").total == Fraction(5, 2)


def test_psi_weighted():
    q = QuasiNorm.of([2, 1, 1], "source")
    assert psi(Subspace.coordinate([0], 3), q) == 2
    assert psi(Subspace.coordinate([2], 3), q) == 1
    assert psi(Subspace.full(3), q) == q.total
    assert psi_index_set(Subspace.coordinate([1, 2], 3), q) == [2, 3]


def test_phi_weighted():
    q = QuasiNorm.of([2, 1], "target")
    assert phi(E0, q) == 2
    assert phi(E1, q) == 1
    assert phi(FULL, q) == 3
    assert phi_index_set(E1, q) == [2]


def test_uniform_volume_functions_are_dimensions():
    qv, qe = _uniform(3, 3)
    w = Subspace.span([[1, 1, 0], [0, 1, 1]], 3)
    assert psi(w, qv) == 2
    assert phi(w, qe) == 2


def test_side_is_checked():
    qv, qe = _uniform(2, 2)
    with pytest.raises(PreconditionError):
        psi(E0, qe)
    with pytest.raises(DimensionMismatchError):
        phi(Subspace.full(3), qe)


def test_relatively_free_source_norm():
    assert relatively_free_source_norm([2, 2, 1]).weights == (2, 2, 1)
    with pytest.raises(PreconditionError):
        relatively_free_source_norm([1, 2])


# =============================================================================
# Candidates and τ
# =============================================================================


def test_candidate_families():
    assert [label for label, _ in graded_candidates([2, 1, 1])] == ["deg1", "deg2", "deg1+deg2"]
    flags = flag_candidates([1, 0], 2)
    assert [w for _, w in flags] == [E1, FULL]


def test_tau_of_constant_projection_is_extremal():
    x = PolyMap.constant(QMatrix.from_rows([[1, 0]]))
    qv, qe = _uniform(2, 1)
    result = tau_candidates(x, qv, qe, flag_candidates([0, 1], 2), RationalSampler(1))
    assert result.value == 1
    assert result.witness == FULL
    assert is_extremal(result, qv, qe)
    assert extremal_value(qv, qe) == 1


def test_tau_infinite_when_image_vanishes():
    x = PolyMap.constant(QMatrix.zeros(1, 2))
    qv, qe = _uniform(2, 1)
    result = tau_candidates(x, qv, qe, [E0, FULL], RationalSampler(1))
    assert result.is_infinite
    assert Flag.INFINITE.value in result.flags
    assert result.witness == FULL
    assert result.to_json()["tau"] == "inf"


def test_tau_raises_on_two_maximizers_of_same_dimension():
    x = PolyMap.constant(QMatrix.identity(2))
    qv, qe = _uniform(2, 2)
    with pytest.raises(UniquenessViolationError):
        tau_candidates(x, qv, qe, [E0, E1], RationalSampler(1))


def test_tau_deduplicates_candidates():
    x = PolyMap.constant(QMatrix.identity(2))
    qv, qe = _uniform(2, 2)
    result = tau_candidates(x, qv, qe, [("a", E0), ("b", Subspace.span([[3, 0]], 2))], RationalSampler(1))
    assert result.value == 0
    assert [row.label for row in result.table] == ["a"]


def test_tau_rejects_empty_candidates():
    x = PolyMap.constant(QMatrix.identity(2))
    qv, qe = _uniform(2, 2)
    with pytest.raises(PreconditionError):
        tau_candidates(x, qv, qe, [], RationalSampler(1))


def test_tau_on_moment_curve():
    t = sympy.Symbol("t")
    x = PolyMap.from_sympy([[1, t, t**2]], [t])
    qv, qe = _uniform(3, 1)
    result = tau_candidates(x, qv, qe, flag_candidates([0, 1, 2], 3), RationalSampler(3))
    # generic kernel is 2-dimensional, so the full space gives 2/1
    assert result.value == 2
    assert result.witness == Subspace.full(3)
    assert [row.ratio for row in result.table] == [0, 1, 2]


SEEDS = (1, 7, 42, 1234, 20240601)


@pytest.mark.parametrize("family_id, config", [("heisenberg", {"k": 3}), ("veronese", {"p": 3, "s": 2})])
def test_tau_is_seed_independent_for_families(family_id, config):
    outcomes = set()
    for seed in SEEDS:
        result = create_manifold(family_id, config).tau(RationalSampler(seed))
        outcomes.add((result.value, result.witness, tuple(row.ratio for row in result.table)))
    assert len(outcomes) == 1


def test_tau_is_seed_independent_on_moment_curve():
    t = sympy.Symbol("t")
    x = PolyMap.from_sympy([[1, t, t**2]], [t])
    qv, qe = _uniform(3, 1)
    outcomes = set()
    for seed in SEEDS:
        result = tau_candidates(x, qv, qe, flag_candidates([0, 1, 2], 3), RationalSampler(seed))
        outcomes.add((result.value, result.witness))
    assert outcomes == {(2, Subspace.full(3))}


def test_generic_points_are_shared_and_checked():
    t = sympy.Symbol("t")
    x = PolyMap.from_sympy([[1, t]], [t])
    other = PolyMap.from_sympy([[1, t]], [t])
    qv, qe = _uniform(2, 1)
    pts = GenericPoints(x, RationalSampler(2))
    tau_candidates(x, qv, qe, flag_candidates([0, 1], 2), pts)
    assert len(pts.used) >= 5
    with pytest.raises(PreconditionError):
        tau_candidates(other, qv, qe, flag_candidates([0, 1], 2), pts)


# =============================================================================
# Pencils
# =============================================================================


def test_pencil_containment_certificate():
    x = PolyMap.constant(QMatrix.from_rows([[1, 0]]))
    qv, qe = _uniform(2, 1)
    inside = pencil_contains(x, unweighted_pencil(E1, 0), qv, qe, RationalSampler(1))
    assert inside
    assert inside.psi_M == 1 and inside.phi_M == 0
    outside = pencil_contains(x, Pencil(FULL, Fraction(2), Fraction(0)), qv, qe, RationalSampler(1))
    assert not outside
    assert outside.to_json()["contained"] is False


def test_pencil_thresholds_validated():
    qv, qe = _uniform(2, 1)
    x = PolyMap.constant(QMatrix.from_rows([[1, 0]]))
    with pytest.raises(PreconditionError):
        Pencil(E0, Fraction(-1), Fraction(0))
    with pytest.raises(PreconditionError):
        pencil_contains(x, Pencil(E0, Fraction(2), Fraction(0)), qv, qe, RationalSampler(1))


def test_constraining_pencils():
    assert is_constraining(unweighted_pencil(E1, 0), 2, 1)
    assert not is_constraining(unweighted_pencil(FULL, 1), 2, 1)
    assert is_constraining(unweighted_pencil(Subspace.full(3), 1), 3, 2)


def test_dirichlet_bound():
    qv, qe = _uniform(2, 1)
    assert dirichlet_bound(QMatrix.from_rows([[1, 0]]), FULL, qv, qe) == 1
    assert dirichlet_bound(QMatrix.zeros(1, 2), FULL, qv, qe) is None
    assert dirichlet_bound(QMatrix.zeros(1, 2), Subspace.zero(2), qv, qe) == 0


def test_submodularity_on_moment_curve():
    t = sympy.Symbol("t")
    x = PolyMap.from_sympy([[1, t, t**2], [0, 1, 2 * t]], [t])
    qv, qe = _uniform(3, 2)
    pts = GenericPoints(x, RationalSampler(4))
    w1 = Subspace.coordinate([0, 1], 3)
    w2 = Subspace.span([[0, 1, 1], [1, 0, 0]], 3)
    assert submodularity_check(x, qv, qe, w1, w2, pts)


# =============================================================================
# Plücker span
# =============================================================================


def test_minors_vector():
    assert minors_vector(QMatrix.from_rows([[1, 2], [3, 4]])) == [1, 2, 3, 4, -2]


def test_pluecker_span():
    t = sympy.Symbol("t")
    assert pluecker_span(PolyMap.from_sympy([[1, t]], [t]), 4, RationalSampler(5)) == 2
    assert pluecker_span(PolyMap.constant(QMatrix.identity(2)), 2, RationalSampler(5)) == 1
