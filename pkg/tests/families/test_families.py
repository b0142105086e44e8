"""Veronese, wedge and explicit manifold families."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from diophantine_exponents import create_manifold
from diophantine_exponents.algebra.qlinalg import Subspace
from diophantine_exponents.base.types import CandidateStrategy
from diophantine_exponents.common.exceptions import PreconditionError, SchemaError, UnsupportedError
from diophantine_exponents.exponents.pencil import Pencil, is_constraining
from diophantine_exponents.families.explicit import load_manifold


# === Veronese ===


def test_veronese_cubic_on_2x2(sampler):
    family = create_manifold("veronese", {"p": 3, "s": 2})
    result = family.tau(sampler)
    assert result.value == 1 == family.expected()
    assert result.witness == Subspace.full(4)
    # Cayley–Hamilton kills t² - tr(M)t + det(M) from degree 2 on
    assert [row.ratio for row in result.table] == [0, 0, Fraction(1, 2), 1]


@pytest.mark.parametrize("p, s", [(2, 3), (1, 2)])
def test_veronese_below_matrix_size_is_zero(p, s, sampler):
    family = create_manifold("veronese", {"p": p, "s": s})
    assert family.tau(sampler).value == 0 == family.expected()


def test_veronese_validation():
    with pytest.raises(PreconditionError):
        create_manifold("veronese", {"p": 0})
    with pytest.raises(UnsupportedError):
        create_manifold("veronese").candidates(CandidateStrategy.GRADED)


def test_veronese_float_samples(rng):
    family = create_manifold("veronese", {"p": 3, "s": 2})
    x = family.sample_point(rng)
    assert x.shape == (4, 4)
    assert x[:, 0].tolist() == [1.0, 0.0, 0.0, 1.0]


# === Wedge ===


def test_wedge_four_vectors(sampler):
    family = create_manifold("wedge", {"k": 4})
    result = family.tau(sampler)
    ratios = {row.label: row.ratio for row in result.table}
    assert all(ratios[f"W{i}"] == Fraction(1, 2) for i in range(1, 5))
    assert ratios["V"] == 1
    assert result.value == 1 == family.extremal_value()
    assert result.witness == Subspace.full(6)


def test_wedge_pencils_are_not_constraining(sampler):
    family = create_manifold("wedge", {"k": 4})
    w1 = family.pencil_subspace(0)
    assert w1.dim == 3
    pencil = Pencil(w1, Fraction(1), Fraction(2))
    assert family.contains(pencil, sampler)
    assert not is_constraining(pencil, 6, 3)


def test_wedge_needs_four_vectors():
    with pytest.raises(PreconditionError):
        create_manifold("wedge", {"k": 3})


# === Explicit ===


def test_explicit_fixture_matches_builtin(veronese_manifold_path, sampler):
    family = create_manifold("explicit", {"manifold": load_manifold(veronese_manifold_path)})
    assert family.default_strategy is CandidateStrategy.FLAG
    result = family.tau(sampler)
    assert result.value == 1
    assert result.witness == Subspace.full(4)


def test_builtin_json_round_trip(sampler):
    family = create_manifold("wedge", {"k": 4})
    payload = json.loads(json.dumps(family.manifold_json()))
    explicit = create_manifold("explicit", {"manifold": payload})
    assert explicit.default_strategy is CandidateStrategy.EXPLICIT
    assert explicit.tau(sampler).value == 1


def test_explicit_without_candidates_uses_full_space(sampler):
    data = load_manifold_dict()
    del data["candidates"]
    family = create_manifold("explicit", {"manifold": data})
    assert [label for label, _ in family.candidates()] == ["explicit0"]
    assert family.tau(sampler).value == 1


def test_explicit_schema_errors(tmp_path):
    with pytest.raises(SchemaError):
        create_manifold("explicit", {})
    with pytest.raises(SchemaError) as exc:
        create_manifold("explicit", {"manifold": {"n_params": 1, "dim_v": 0, "dim_e": 1, "entries": []}})
    assert exc.value.details["path"] == "dim_v"
    broken = tmp_path / "broken.json"
    broken.write_text('{"n_params": 1,')
    with pytest.raises(SchemaError):
        load_manifold(broken)


def test_graded_candidates_need_grading():
    data = load_manifold_dict()
    data["candidates"] = {"strategy": "graded"}
    with pytest.raises(SchemaError):
        create_manifold("explicit", {"manifold": data})


def load_manifold_dict() -> dict:
    return load_manifold(Path(__file__).resolve().parents[1] / "fixtures" / "veronese_m2_p3.json")
