"""
Free nilpotent Lie algebra F_{k,s} in the Lyndon basis.

Lyndon words over the letters 1..k of length at most s index a basis;
each word is bracketed by its standard factorization w = uv, v the
longest proper Lyndon suffix. Products of basis elements are rewritten
onto the basis by the standard-factorization rule and terms of degree
above s are dropped, which is the step-s quotient.

Ordering of the basis is degree-major, lexicographic within a degree.
All downstream flags and coordinate orders derive from this.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import TYPE_CHECKING, Any, Iterator, Mapping, Sequence

from sympy import divisors

from diophantine_exponents.common.exceptions import (
    DimensionMismatchError,
    PreconditionError,
    SchemaError,
    UnsupportedError,
)
from diophantine_exponents.common.utils import format_rational, parse_rational
from diophantine_exponents.exponents.repthy import mobius

if TYPE_CHECKING:
    from diophantine_exponents.algebra.liealg import LieAlgebra

Word = tuple[int, ...]
Vector = tuple[Fraction, ...]

MAX_BCH_STEP = 6


# =============================================================================
# Lyndon words
# =============================================================================


def is_lyndon(word: Sequence[int]) -> bool:
    """True iff word is strictly smaller than all its proper rotations."""
    w = tuple(word)
    return bool(w) and all(w < w[i:] + w[:i] for i in range(1, len(w)))


def lyndon_words(k: int, n: int) -> Iterator[Word]:
    """All Lyndon words of length <= n over 1..k, lexicographic (Duval)."""
    w = [1]
    while w:
        yield tuple(w)
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k:
            w.pop()
        if w:
            w[-1] += 1


def standard_factorization(word: Word) -> tuple[Word, Word]:
    """(u, v) with v the longest proper suffix of word that is Lyndon."""
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise PreconditionError(f"word of length {len(word)} has no factorization", "freelie")


def witt_dim(k: int, i: int) -> int:
    """(1/i) Σ_{d|i} μ(d) k^{i/d}: dimension of the degree-i part of the free Lie algebra."""
    if k < 1 or i < 1:
        raise PreconditionError("witt_dim needs k >= 1 and i >= 1", "freelie.witt_dim")
    return sum(mobius(d) * k ** (i // d) for d in divisors(i)) // i


# =============================================================================
# Basis
# =============================================================================


@dataclass(frozen=True)
class FreeLieBasis:
    """
    Lyndon basis of F_{k,s}.

    Example:
        ```python
        basis = lyndon_basis(3, 3)
        basis.degree_slice(3)   # indices of the 8 degree-3 words
        ```
    """

    k: int
    s: int
    words: tuple[Word, ...]
    bracketing: Mapping[Word, tuple[Word, Word] | None] = field(compare=False, repr=False)
    _index: dict[Word, int] = field(default_factory=dict, compare=False, repr=False)
    _products: dict[tuple[Word, Word], dict[Word, Fraction]] = field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        self._index.update({w: i for i, w in enumerate(self.words)})

    @property
    def dim(self) -> int:
        return len(self.words)

    def index(self, word: Word) -> int:
        return self._index[word]

    def degrees(self) -> list[int]:
        return [len(w) for w in self.words]

    def degree_slice(self, i: int) -> list[int]:
        return [j for j, w in enumerate(self.words) if len(w) == i]

    def generator(self, i: int) -> "LieElement":
        """The free generator x_i (1-based)."""
        return LieElement(self, {(i,): Fraction(1)})

    def element(self, word: Sequence[int], coeff: Any = 1) -> "LieElement":
        w = tuple(word)
        if w not in self._index:
            raise SchemaError(f"{w} is not a Lyndon word of degree <= {self.s}", "freelie")
        return LieElement(self, {w: Fraction(coeff)})

    def bracketed(self, word: Word) -> str:
        """Human-readable bracket form, e.g. [x1,[x1,x2]]."""
        split = self.bracketing.get(word)
        if split is None:
            return f"x{word[0]}"
        return f"[{self.bracketed(split[0])},{self.bracketed(split[1])}]"

    # --- Normal form ---

    def bracket_words(self, u: Word, v: Word) -> dict[Word, Fraction]:
        """Normal form of [[u],[v]] for basis words u, v."""
        if len(u) + len(v) > self.s or u == v:
            return {}
        if u > v:
            return {w: -c for w, c in self.bracket_words(v, u).items()}
        key = (u, v)
        cached = self._products.get(key)
        if cached is not None:
            return cached
        split = self.bracketing[u]
        result: dict[Word, Fraction] = {}
        if split is None or split[1] >= v:
            result[u + v] = Fraction(1)
        else:
            # [[u1,u2],v] = [u1,[u2,v]] + [[u1,v],u2]
            u1, u2 = split
            for w, c in self.bracket_words(u2, v).items():
                _accumulate(result, self.bracket_words(u1, w), c)
            for w, c in self.bracket_words(u1, v).items():
                _accumulate(result, self.bracket_words(w, u2), c)
        self._products[key] = result
        return result


def _accumulate(target: dict[Word, Fraction], terms: Mapping[Word, Fraction], scale: Fraction) -> None:
    for w, c in terms.items():
        value = target.get(w, Fraction(0)) + scale * c
        if value:
            target[w] = value
        else:
            target.pop(w, None)


@lru_cache(maxsize=64)
def lyndon_basis(k: int, s: int) -> FreeLieBasis:
    """All Lyndon words of length <= s over k letters with their bracketing."""
    if k < 1 or s < 1:
        raise PreconditionError("lyndon_basis needs k >= 1 and s >= 1", "freelie.lyndon_basis")
    words = tuple(sorted(lyndon_words(k, s), key=lambda w: (len(w), w)))
    bracketing = {w: (standard_factorization(w) if len(w) > 1 else None) for w in words}
    return FreeLieBasis(k, s, words, bracketing)


# =============================================================================
# Elements
# =============================================================================


@dataclass
class LieElement:
    """Finite combination of Lyndon basis elements; zero coefficients are never stored."""

    basis: FreeLieBasis
    terms: dict[Word, Fraction]

    def __post_init__(self) -> None:
        self.terms = {w: Fraction(c) for w, c in self.terms.items() if c}

    @classmethod
    def zero(cls, basis: FreeLieBasis) -> "LieElement":
        return cls(basis, {})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def homogeneous(self, i: int) -> "LieElement":
        return LieElement(self.basis, {w: c for w, c in self.terms.items() if len(w) == i})

    def _check(self, other: "LieElement") -> None:
        if self.basis != other.basis:
            raise DimensionMismatchError("elements live in different free Lie algebras", "freelie")

    def __add__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        result = dict(self.terms)
        _accumulate(result, other.terms, Fraction(1))
        return LieElement(self.basis, result)

    def __neg__(self) -> "LieElement":
        return LieElement(self.basis, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def __rmul__(self, scalar: Any) -> "LieElement":
        scalar = Fraction(scalar)
        return LieElement(self.basis, {w: scalar * c for w, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.basis == other.basis and self.terms == other.terms

    def to_vector(self) -> Vector:
        v = [Fraction(0)] * self.basis.dim
        for w, c in self.terms.items():
            v[self.basis.index(w)] = c
        return tuple(v)

    @classmethod
    def from_vector(cls, basis: FreeLieBasis, vector: Sequence[Any]) -> "LieElement":
        if len(vector) != basis.dim:
            raise DimensionMismatchError("coordinate vector length", "freelie", expected=basis.dim, actual=len(vector))
        return cls(basis, {w: Fraction(c) for w, c in zip(basis.words, vector)})

    def to_json(self) -> dict[str, Any]:
        ordered = sorted(self.terms.items(), key=lambda t: self.basis.index(t[0]))
        return {
            "k": self.basis.k,
            "s": self.basis.s,
            "terms": [{"word": list(w), "coeff": format_rational(c)} for w, c in ordered],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "LieElement":
        basis = lyndon_basis(int(data["k"]), int(data["s"]))
        element = cls.zero(basis)
        for term in data.get("terms", []):
            element = element + basis.element(term["word"], parse_rational(term["coeff"]))
        return element


def bracket(a: LieElement, b: LieElement) -> LieElement:
    """Bilinear bracket in normal form; degrees above s truncate to zero."""
    a._check(b)
    result: dict[Word, Fraction] = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            _accumulate(result, a.basis.bracket_words(u, v), cu * cv)
    return LieElement(a.basis, result)


# =============================================================================
# Evaluation into concrete Lie algebras
# =============================================================================


def evaluate_words(
    basis: FreeLieBasis,
    g: "LieAlgebra",
    values: Sequence[Sequence[Fraction]],
) -> dict[Word, Vector]:
    """Value in g of every basis word at the tuple (X_1, …, X_k)."""
    if len(values) != basis.k:
        raise DimensionMismatchError("tuple length must equal k", "freelie.evaluate", expected=basis.k, actual=len(values))
    for x in values:
        if len(x) != g.dim:
            raise DimensionMismatchError("tuple entry not in g", "freelie.evaluate", expected=g.dim, actual=len(x))
    cache: dict[Word, Vector] = {}
    zero = (Fraction(0),) * g.dim
    for w in basis.words:  # degree-major, so factors are always cached first
        split = basis.bracketing[w]
        if split is None:
            cache[w] = tuple(Fraction(c) for c in values[w[0] - 1])
        elif len(w) > g.step:
            cache[w] = zero
        else:
            cache[w] = g.bracket(cache[split[0]], cache[split[1]])
    return cache


def evaluate(elem: LieElement, g: "LieAlgebra", values: Sequence[Sequence[Fraction]]) -> Vector:
    """
    Substitute X_i for x_i and evaluate with the structure constants of g.

    Example:
        ```python
        h = heisenberg()
        basis = lyndon_basis(2, 2)
        evaluate(basis.element((1, 2)), h, [(1, 0, 0), (0, 1, 0)])  # e3
        ```
    """
    word_values = evaluate_words(elem.basis, g, values)
    out = [Fraction(0)] * g.dim
    for w, c in elem.terms.items():
        for i, x in enumerate(word_values[w]):
            if x:
                out[i] += c * x
    return tuple(out)


# =============================================================================
# Baker–Campbell–Hausdorff
# =============================================================================

_AssocElement = dict[Word, Fraction]


def _assoc_mul(a: _AssocElement, b: _AssocElement, s: int) -> _AssocElement:
    out: _AssocElement = {}
    for u, cu in a.items():
        for v, cv in b.items():
            if len(u) + len(v) <= s:
                out[u + v] = out.get(u + v, Fraction(0)) + cu * cv
    return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=MAX_BCH_STEP)
def dynkin_coefficients(s: int) -> tuple[tuple[Word, Fraction], ...]:
    """
    Terms (word over {0: x, 1: y}, c) with log(e^x e^y) = Σ c·[…[[w_1,w_2],w_3]…,w_n].

    The associative series is computed up to degree s and each degree-n
    word coefficient is divided by n (Dynkin–Specht–Wever).
    """
    p: _AssocElement = {}
    for a in range(s + 1):
        for b in range(s + 1 - a):
            if a + b:
                p[(0,) * a + (1,) * b] = Fraction(1, factorial(a) * factorial(b))
    log: _AssocElement = {}
    power = dict(p)
    for n in range(1, s + 1):
        _accumulate(log, power, Fraction((-1) ** (n + 1), n))
        power = _assoc_mul(power, p, s)
    return tuple(sorted(((w, c / len(w)) for w, c in log.items()), key=lambda t: (len(t[0]), t[0])))


def bch_product(x: Sequence[Any], y: Sequence[Any], g: "LieAlgebra") -> Vector:
    """
    z with exp(z) = exp(x) exp(y), by the Dynkin series truncated at the step of g.

    Raises:
        UnsupportedError: If g has step above 6
    """
    if g.step > MAX_BCH_STEP:
        raise UnsupportedError(f"BCH product supports step <= {MAX_BCH_STEP}, got {g.step}", "freelie.bch_product")
    letters = (tuple(Fraction(c) for c in x), tuple(Fraction(c) for c in y))
    for v in letters:
        if len(v) != g.dim:
            raise DimensionMismatchError("vector not in g", "freelie.bch_product", expected=g.dim, actual=len(v))
    prefixes: dict[Word, Vector] = {}

    def left_normed(w: Word) -> Vector:
        if w in prefixes:
            return prefixes[w]
        value = letters[w[0]] if len(w) == 1 else g.bracket(left_normed(w[:-1]), letters[w[-1]])
        prefixes[w] = value
        return value

    z = [Fraction(0)] * g.dim
    for w, c in dynkin_coefficients(max(g.step, 1)):
        for i, v in enumerate(left_normed(w)):
            if v:
                z[i] += c * v
    return tuple(z)
