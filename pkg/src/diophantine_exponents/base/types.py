"""
Type definitions for diophantine exponent computations.

This module contains the dataclasses and enums shared by the exact
machinery, the empirical checks and the CLI. Exact quantities are
Fractions and serialize as "p/q" strings; floats are formatted with 12
significant digits.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from diophantine_exponents.algebra.qlinalg import Subspace
from diophantine_exponents.common.exceptions import OracleMismatchError
from diophantine_exponents.common.utils import format_float, format_rational


class Side(str, Enum):
    """Which side of x: V -> E a quasi-norm lives on."""

    SOURCE = "source"
    TARGET = "target"


class CandidateStrategy(str, Enum):
    """How candidate subspaces for the ratio maximization are produced."""

    GRADED = "graded"  # Direct sums of graded slices
    FLAG = "flag"  # Prefixes of a coordinate order
    EXPLICIT = "explicit"  # User-supplied rational subspaces


class Flag(str, Enum):
    """Report flags."""

    INFINITE = "infinite"
    IRRATIONAL_LAWS = "possible irrational laws"
    ZERO_MINIMUM = "exact zero minimum excluded"
    LOW_R2 = "low r2"
    RANK_AMBIGUOUS = "rank tolerance ambiguous"
    S2_DISPATCH = "s=2 dispatched to step-2 formula"


# =============================================================================
# Exact results
# =============================================================================


@dataclass
class ExponentValue:
    """
    Closed-form exponent of a nilpotent family.

    beta = alpha / eta whenever both are finite; alpha is the word-length
    exponent and eta the Bass–Guivarc'h growth exponent.
    """

    family: str
    parameters: dict[str, Any]
    alpha: Fraction
    eta: int
    beta: Fraction | None
    limit: Fraction | None = None
    stable_from: int | None = None
    flags: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.beta is not None and self.beta * self.eta != self.alpha:
            raise OracleMismatchError(
                f"beta * eta != alpha for {self.family}", "types.ExponentValue", {"parameters": self.parameters}
            )

    @property
    def is_infinite(self) -> bool:
        return self.beta is None

    def to_json(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "parameters": self.parameters,
            "alpha": format_rational(self.alpha),
            "eta": self.eta,
            "beta": format_rational(self.beta) if self.beta is not None else None,
            "beta_decimal": format_float(float(self.beta)) if self.beta is not None else None,
            "limit": format_rational(self.limit) if self.limit is not None else None,
            "stable_from": self.stable_from,
            "flags": self.flags,
        }


@dataclass
class CandidateRow:
    """ψ_M and φ_M of one candidate subspace."""

    label: str
    dim: int
    psi: Fraction
    phi: Fraction

    @property
    def ratio(self) -> Fraction | None:
        if self.phi == 0:
            return Fraction(0) if self.psi == 0 else None
        return self.psi / self.phi

    def to_json(self) -> dict[str, Any]:
        ratio = self.ratio
        return {
            "label": self.label,
            "dim": self.dim,
            "psi_M": format_rational(self.psi),
            "phi_M": format_rational(self.phi),
            "ratio": format_rational(ratio) if ratio is not None else "inf",
        }


@dataclass
class TauResult:
    """
    Exact certificate for τ: the maximal ratio ψ_M/φ_M over candidates.

    value is None when some candidate has φ_M = 0 < ψ_M; the "infinite"
    flag is then set and witness is that candidate.
    """

    value: Fraction | None
    witness: Subspace
    a: Fraction
    b: Fraction
    samples_used: list[list[Fraction]] = field(default_factory=list)
    table: list[CandidateRow] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def to_json(self) -> dict[str, Any]:
        return {
            "tau": format_rational(self.value) if self.value is not None else "inf",
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "witness": self.witness.to_json(),
            "candidates": [row.to_json() for row in self.table],
            "samples": [[format_rational(x) for x in s] for s in self.samples_used],
            "flags": self.flags,
        }


# =============================================================================
# Empirical results
# =============================================================================


@dataclass
class SlopeFit:
    """OLS fit of -log(min) against log Q."""

    points: list[tuple[float, float]]
    slope: float
    intercept: float
    r2: float
    q_schedule: list[float]
    minima: list[float] = field(default_factory=list)
    excluded: list[float] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return {
            "slope": format_float(self.slope),
            "intercept": format_float(self.intercept),
            "r2": format_float(self.r2),
            "q_schedule": [format_float(q) for q in self.q_schedule],
            "excluded": [format_float(q) for q in self.excluded],
            "flags": self.flags,
        }

    def to_csv(self) -> str:
        """Columns (Q, min_norm, log_Q, neg_log_min)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["Q", "min_norm", "log_Q", "neg_log_min"])
        for q, m in zip(self.q_schedule, self.minima):
            if m > 0:
                writer.writerow([format_float(q), format_float(m), format_float(math.log(q)), format_float(-math.log(m))])
            else:
                writer.writerow([format_float(q), format_float(m), format_float(math.log(q)), "inf"])
        return buf.getvalue()


@dataclass
class SystoleTrace:
    """Shortest-vector lengths of a_t x' Z^d along a time grid."""

    beta: float
    times: list[float]
    systole: list[float]
    radius: int
    condition_number: float = 1.0
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return {
            "beta": format_float(self.beta),
            "radius": self.radius,
            "condition_number": format_float(self.condition_number),
            "flags": self.flags,
        }

    def to_csv(self) -> str:
        """Columns (t, systole)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "systole"])
        for t, s in zip(self.times, self.systole):
            writer.writerow([format_float(t), format_float(s)])
        return buf.getvalue()


# =============================================================================
# Reports
# =============================================================================


@dataclass
class Report:
    """Output of one CLI command."""

    command: dict[str, Any]
    inputs: Any
    inputs_hash: str
    results: Any
    certificates: dict[str, Any] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "inputs_hash": self.inputs_hash,
            "results": self.results,
            "certificates": self.certificates,
            "flags": self.flags,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Report":
        return cls(
            command=data["command"],
            inputs=data.get("inputs"),
            inputs_hash=data["inputs_hash"],
            results=data["results"],
            certificates=data.get("certificates", {}),
            flags=list(data.get("flags", [])),
        )
