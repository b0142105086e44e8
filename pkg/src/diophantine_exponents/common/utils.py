"""
Common utilities for diophantine exponent computations.

Provides the exact-rational wire codec ("p/q" strings), the seeded
rational sampler used for generic-point evaluation, and a small
deterministic thread map.
"""

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence, TypeVar

import numpy as np

from diophantine_exponents.common.exceptions import SchemaError

T = TypeVar("T")
R = TypeVar("R")


# === Rational codec ===


def format_rational(value: Fraction | int) -> str:
    """
    Serialize an exact rational as "p/q", or "p" when q = 1.

    Example:
        >>> format_rational(Fraction(4, 9))
        '4/9'
        >>> format_rational(Fraction(6, 3))
        '2'
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(value: Any) -> Fraction:
    """
    Parse "p/q", "p" or an int into a Fraction.

    Floats are rejected: exact fields never accept binary floating point.

    Raises:
        SchemaError: If the value is not an exact rational literal
    """
    if isinstance(value, bool):
        raise SchemaError(f"Not a rational literal: {value!r}", "utils")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise SchemaError(f"Decimal literal in exact field: {value!r}", "utils")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise SchemaError(f"Not a rational literal: {value!r}", "utils") from e
    raise SchemaError(f"Not a rational literal: {value!r}", "utils")


def format_float(value: float) -> str:
    """Format a float with 12 significant digits for reports."""
    return f"{value:.12g}"


def inputs_hash(payload: Any) -> str:
    """SHA-256 of a canonical JSON dump, used to identify report inputs."""
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


# === Seeded sampling ===


class RationalSampler:
    """
    Seeded generator of random small-height rationals.

    Numerators are uniform in [-height, height] with denominator 1, drawn
    independently per coordinate. Integer points are generic for any
    Zariski-open condition with probability one.

    Example:
        ```python
        sampler = RationalSampler(seed=7)
        x = sampler.vector(6)      # list of 6 Fractions
        child = sampler.spawn(3)   # independent deterministic streams
        ```
    """

    def __init__(self, seed: int = 0, height: int = 10) -> None:
        self.seed = seed
        self.height = height
        self._seq = np.random.SeedSequence(seed)
        self._rng = np.random.default_rng(self._seq)
        self.drawn = 0

    def vector(self, n: int) -> list[Fraction]:
        """Draw one rational vector of length n."""
        self.drawn += 1
        ints = self._rng.integers(-self.height, self.height + 1, size=n)
        return [Fraction(int(v)) for v in ints]

    def vectors(self, count: int, n: int) -> list[list[Fraction]]:
        return [self.vector(n) for _ in range(count)]

    def spawn(self, count: int) -> list["RationalSampler"]:
        """Split into independent child samplers (order-stable)."""
        children = []
        for child_seq in self._seq.spawn(count):
            child = RationalSampler.__new__(RationalSampler)
            child.seed = self.seed
            child.height = self.height
            child._seq = child_seq
            child._rng = np.random.default_rng(child_seq)
            child.drawn = 0
            children.append(child)
        return children

    def generator(self) -> np.random.Generator:
        """Float generator sharing this sampler's stream."""
        return self._rng


# === Parallel helpers ===


def thread_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """
    Map fn over items, preserving order.

    Runs inline when threads <= 1 so results are identical either way.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def chunk_ranges(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Split the inclusive integer range [lo, hi] into contiguous slabs."""
    total = hi - lo + 1
    parts = max(1, min(parts, total))
    size, extra = divmod(total, parts)
    ranges = []
    start = lo
    for i in range(parts):
        stop = start + size + (1 if i < extra else 0) - 1
        ranges.append((start, stop))
        start = stop + 1
    return ranges


def as_fractions(values: Sequence[Any]) -> list[Fraction]:
    return [parse_rational(v) for v in values]
