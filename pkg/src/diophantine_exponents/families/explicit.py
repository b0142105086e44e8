"""User-supplied manifolds in the manifold JSON format."""

import json
from pathlib import Path
from typing import Any

from diophantine_exponents.base.family import Candidates, ManifoldFamily
from diophantine_exponents.base.types import CandidateStrategy
from diophantine_exponents.common.exceptions import SchemaError
from diophantine_exponents.exponents.pencil import (
    PolyMap,
    QuasiNorm,
    candidates_from_json,
    source_norm_from_json,
    target_norm_from_json,
)
from diophantine_exponents.schemas import validate_payload


def load_manifold(path: str | Path) -> dict[str, Any]:
    """
    Read and validate a manifold JSON file.

    Raises:
        SchemaError: If the file is not valid JSON or violates the schema
    """
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SchemaError(f"malformed JSON: {e.msg}", "families.explicit", path=f"line {e.lineno}") from e
    validate_payload(payload, "manifold")
    return payload


class ExplicitFamily(ManifoldFamily):
    """
    Config:
        manifold: Decoded manifold JSON (validated on construction)
    """

    id = "explicit"
    name = "Explicit polynomial manifold"
    strategies = (CandidateStrategy.GRADED, CandidateStrategy.FLAG, CandidateStrategy.EXPLICIT)

    def __init__(self, config: dict[str, Any] | None = None) -> None:
        super().__init__(config)
        data = self.config.get("manifold")
        if not isinstance(data, dict):
            raise SchemaError("explicit family needs a 'manifold' object", "families.explicit", path="manifold")
        validate_payload(data, "manifold")
        self.data = data
        full = [[int(i == j) for j in range(data["dim_v"])] for i in range(data["dim_v"])]
        self.spec = data.get("candidates") or {"strategy": "explicit", "subspaces": [full]}
        self.default_strategy = CandidateStrategy(self.spec["strategy"])
        if self.default_strategy is CandidateStrategy.GRADED and not data.get("grading"):
            raise SchemaError("graded candidates need a grading", "families.explicit", path="grading")

    def _build_map(self) -> PolyMap:
        d = self.data
        return PolyMap.from_json(d["n_params"], d["dim_v"], d["dim_e"], d["entries"])

    def source_norm(self) -> QuasiNorm:
        return source_norm_from_json(self.data.get("weights_v"), self.data["dim_v"])

    def target_norm(self) -> QuasiNorm:
        return target_norm_from_json(self.data.get("weights_e"), self.data["dim_e"])

    def grading(self) -> list[int] | None:
        return self.data.get("grading")

    def candidates(self, strategy: CandidateStrategy | None = None) -> Candidates:
        resolved = self._resolve(strategy)
        spec = dict(self.spec, strategy=resolved.value)
        return candidates_from_json(spec, self.grading(), self.data["dim_v"])

    def manifold_json(self) -> dict[str, Any]:
        return self.data
