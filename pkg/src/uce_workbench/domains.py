"""Exact coefficient domains: Z, Q, GF(p) and Z/m.

Elements are plain Python ints (Z, GF(p), Z/m) or fractions.Fraction (Q),
so arithmetic is exact everywhere.  A CoefficientDomain bundles the ring
operations that the linear algebra layer needs, plus parsing/formatting
for the text interchange format.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class CoefficientDomain:
    """One of Z, Q, GF(p), Z/m; modulus is None for Z and Q."""

    kind: str  # "Z" | "Q" | "GF" | "Zmod"
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "GF", "Zmod"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind == "GF":
            if not (isinstance(self.modulus, int) and _is_prime(self.modulus)):
                raise ValueError(f"GF modulus must be prime, got {self.modulus!r}")
        elif self.kind == "Zmod":
            if not (isinstance(self.modulus, int) and self.modulus >= 2):
                raise ValueError(f"Z/m modulus must be an integer >= 2, got {self.modulus!r}")
        elif self.modulus is not None:
            raise ValueError(f"{self.kind} takes no modulus")

    # -- predicates ----------------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.kind in ("Q", "GF")

    @property
    def is_exact_integers(self) -> bool:
        return self.kind == "Z"

    @property
    def char_modulus(self) -> int:
        """Additive exponent of 1: 0 for Z and Q, p for GF(p), m for Z/m."""
        return 0 if self.modulus is None else self.modulus

    # -- element constructors ------------------------------------------

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def reduce(self, x):
        """Coerce an int/Fraction into canonical form for this domain."""
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"non-integral value {x} in domain {self}")
            x = x.numerator
        return x % self.modulus if self.modulus else x

    # -- arithmetic ----------------------------------------------------

    def add(self, a, b):
        c = a + b
        return c % self.modulus if self.modulus else c

    def sub(self, a, b):
        c = a - b
        return c % self.modulus if self.modulus else c

    def neg(self, a):
        return (-a) % self.modulus if self.modulus else -a

    def mul(self, a, b):
        c = a * b
        return c % self.modulus if self.modulus else c

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        if self.kind == "Z":
            return a in (1, -1)
        if self.kind == "Q":
            return a != 0
        if self.kind == "GF":
            return a % self.modulus != 0
        from math import gcd

        return gcd(a, self.modulus) == 1

    def invert(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit in {self}")
        if self.kind == "Q":
            return 1 / a
        if self.kind == "Z":
            return a
        return pow(a, -1, self.modulus)

    def scale_int(self, k: int, a):
        """k * a for an ordinary integer k."""
        return self.mul(self.reduce(k), a)

    # -- text format ---------------------------------------------------

    def parse_literal(self, text: str):
        """Parse a coefficient literal: integers everywhere, p/q over Q."""
        text = text.strip()
        try:
            if self.kind == "Q":
                return Fraction(text)
            return self.reduce(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad coefficient literal {text!r} for {self}") from exc

    def format_element(self, a) -> str:
        return str(a)

    def __str__(self) -> str:
        if self.kind == "GF":
            return f"GF({self.modulus})"
        if self.kind == "Zmod":
            return f"Z/{self.modulus}"
        return self.kind

    # -- named constructors --------------------------------------------

    @staticmethod
    def integers() -> "CoefficientDomain":
        return CoefficientDomain("Z")

    @staticmethod
    def rationals() -> "CoefficientDomain":
        return CoefficientDomain("Q")

    @staticmethod
    def prime_field(p: int) -> "CoefficientDomain":
        return CoefficientDomain("GF", p)

    @staticmethod
    def integers_mod(m: int) -> "CoefficientDomain":
        return CoefficientDomain("Zmod", m)

    @staticmethod
    def parse(text: str) -> "CoefficientDomain":
        """Parse a ring name: Z, Q, GF(p) or Z/m."""
        t = text.strip()
        if t == "Z":
            return CoefficientDomain.integers()
        if t == "Q":
            return CoefficientDomain.rationals()
        if t.startswith("GF(") and t.endswith(")"):
            try:
                p = int(t[3:-1])
            except ValueError:
                raise ValueError(f"bad ring name {text!r}")
            return CoefficientDomain.prime_field(p)
        if t.startswith("Z/"):
            try:
                m = int(t[2:])
            except ValueError:
                raise ValueError(f"bad ring name {text!r}")
            return CoefficientDomain.integers_mod(m)
        raise ValueError(f"bad ring name {text!r}: expected Z, Q, GF(p) or Z/m")


Z = CoefficientDomain.integers()
Q = CoefficientDomain.rationals()
