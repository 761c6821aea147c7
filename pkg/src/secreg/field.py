"""Exact coefficient fields: prime fields F_p and arbitrary-precision rationals.

Field elements are stored in canonical form (residues in [0, p) for F_p,
reduced fractions for Q) so that equal elements compare equal structurally.
All randomness in the package flows through the SplitMix64 generator below.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Raw = Union[int, Fraction]


class FieldError(ValueError):
    pass


class PrimeField:
    """F_p for a machine-word prime p.  Raw values are ints in [0, p)."""

    _cache: dict[int, "PrimeField"] = {}

    def __new__(cls, p: int):
        try:
            return cls._cache[p]
        except KeyError:
            pass
        if p < 2 or any(p % q == 0 for q in range(2, min(p, 1 + int(p ** 0.5) + 1))):
            raise FieldError(f"characteristic {p} is not prime")
        self = object.__new__(cls)
        self.p = p
        cls._cache[p] = self
        return self

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def one(self) -> int:
        return 1

    @property
    def zero(self) -> int:
        return 0

    def normalize(self, a) -> int:
        if isinstance(a, Fraction):
            if a.denominator % self.p == 0:
                raise FieldError(f"denominator not invertible mod {self.p}")
            return a.numerator * pow(a.denominator, -1, self.p) % self.p
        return int(a) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.p}")
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.p

    def random(self, rng: "SplitMix64") -> int:
        return rng.next() % self.p

    def __repr__(self):
        return f"GF({self.p})"

    def __str__(self):
        return str(self.p)


class RationalField:
    """Q with Fraction raw values; intended for small cross-checks only."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = object.__new__(cls)
        return cls._instance

    characteristic = 0
    p = 0
    one = Fraction(1)
    zero = Fraction(0)

    def normalize(self, a) -> Fraction:
        return Fraction(a)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by 0 in Q")
        return Fraction(a) / b

    # Small-height integers in [-RANDOM_HEIGHT, RANDOM_HEIGHT]; documented range.
    RANDOM_HEIGHT = 999

    def random(self, rng: "SplitMix64") -> Fraction:
        return Fraction(rng.next() % (2 * self.RANDOM_HEIGHT + 1) - self.RANDOM_HEIGHT)

    def __repr__(self):
        return "QQ"

    def __str__(self):
        return "0"


QQ = RationalField()

DEFAULT_PRIME = 32003


def field_of_characteristic(char: int):
    return QQ if char == 0 else PrimeField(char)


@dataclass(frozen=True)
class FieldElement:
    """A field element tagged with its ambient field.

    Thin value wrapper over the raw representation; arithmetic checks that
    both operands live in the same field.
    """

    value: Raw
    field: object

    def _check(self, other: "FieldElement"):
        if not isinstance(other, FieldElement) or other.field is not self.field:
            raise FieldError("field mismatch")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field.add(self.value, other.value), self.field)

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field.sub(self.value, other.value), self.field)

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.field.mul(self.value, other.value), self.field)

    def __truediv__(self, other):
        self._check(other)
        return FieldElement(self.field.div(self.value, other.value), self.field)

    def __neg__(self):
        return FieldElement(self.field.neg(self.value), self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def is_zero(self) -> bool:
        return self.value == self.field.zero

    def __str__(self):
        return str(self.value)


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown field op {op!r}")


class SplitMix64:
    """SplitMix64 (Steele/Lea/Flood 2014), the repository-wide PRNG.

    state' = state + 0x9E3779B97F4A7C15;  output = mix(state') with the
    standard 30/27/31 xor-shift multiply constants.  Deterministic given the
    seed; every "general position" choice in the package draws from one of
    these streams.
    """

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def spawn(self, index: int) -> "SplitMix64":
        """Derived stream for parallel-safe per-item reproducibility."""
        child = SplitMix64(self.next() ^ (index * 0x9E3779B97F4A7C15))
        return child


def derived_rng(seed: int, *indices: int) -> SplitMix64:
    """One deterministic stream per (seed, index path)."""
    rng = SplitMix64(seed)
    for ix in indices:
        rng = SplitMix64(rng.next() ^ ((ix + 1) * 0xD1B54A32D192ED03))
    return rng


def random_element(rng: SplitMix64, field) -> FieldElement:
    return FieldElement(field.random(rng), field)
