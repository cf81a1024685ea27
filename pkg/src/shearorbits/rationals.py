"""Exact arithmetic for rotation numbers.

Rotation numbers live in [0, 1) and are always stored as reduced fractions,
so equality of values is structural equality.  Nothing in this module touches
floating point; Python integers keep every determinant test exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from math import gcd


@total_ordering
@dataclass(frozen=True)
class Rational:
    """Reduced fraction num/den in [0, 1).  Build via make_rational()."""

    num: int
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise ValueError(f"denominator must be positive, got {self.den}")
        if not 0 <= self.num < self.den and not (self.num == 0 and self.den == 1):
            raise ValueError(f"{self.num}/{self.den} is not in [0, 1); use make_rational")
        if gcd(self.num, self.den) != 1:
            raise ValueError(f"{self.num}/{self.den} is not reduced; use make_rational")

    def __lt__(self, other: "Rational") -> bool:
        return self.num * other.den < other.num * self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def __repr__(self) -> str:
        return f"Rational({self.num}, {self.den})"


def make_rational(q: int, p: int) -> Rational:
    """Reduced (q mod p)/p.  The mod-1 wrap makes rotation numbers lift-independent."""
    if p < 1:
        raise ValueError(f"denominator must be positive, got {p}")
    q = q % p
    g = gcd(q, p)
    return Rational(q // g, p // g)


def parse_rational(text: str) -> Rational:
    """Parse the "q/p" wire format (ASCII, no spaces)."""
    parts = text.strip().split("/")
    if len(parts) != 2:
        raise ValueError(f"expected a rational like 'q/p', got {text!r}")
    try:
        q, p = int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"expected a rational like 'q/p', got {text!r}") from None
    return make_rational(q, p)


def farey_determinant(a: Rational, b: Rational) -> int:
    """|a.den*b.num - b.den*a.num|; equals 1 exactly for Farey neighbors."""
    return abs(a.den * b.num - b.den * a.num)


def is_farey_neighbor(a: Rational, b: Rational) -> bool:
    return farey_determinant(a, b) == 1


def mediant(a: Rational, b: Rational) -> Rational:
    """(num+num)/(den+den).  Between Farey neighbors this is the unique
    strictly intermediate rational of minimal denominator."""
    if a == b:
        raise ValueError(f"mediant of equal rationals {a} is undefined")
    return make_rational(a.num + b.num, a.den + b.den)


def weighted_mediant(a: Rational, b: Rational, n: int, m: int) -> Rational:
    """Reduced (n*a.num + m*b.num)/(n*a.den + m*b.den).

    One of n, m may be zero (giving back the other endpoint), but not both.
    """
    if n < 0 or m < 0:
        raise ValueError(f"weights must be non-negative, got ({n}, {m})")
    if n == 0 and m == 0:
        raise ValueError("weights must not both be zero")
    return make_rational(n * a.num + m * b.num, n * a.den + m * b.den)


def rationals_between(a: Rational, b: Rational, max_den: int) -> list[Rational]:
    """All reduced fractions strictly between a and b with denominator <= max_den,
    ascending.  Returns [] unless a < b.

    Walks the Farey sequence F_{max_den}: a Stern-Brocot descent locates the
    consecutive F_{max_den} pair straddling a, then the standard successor
    recurrence (next = k*cur - prev with k = (max_den + prev.den) // cur.den)
    yields terms in order until b is reached.
    """
    if max_den < 1:
        raise ValueError(f"max_den must be positive, got {max_den}")
    if not a < b:
        return []
    ln, ld = 0, 1  # left F_n neighbor, <= a
    cn, cd = 1, 1  # right F_n neighbor, > a (1/1 bounds everything in [0,1))
    while True:
        mn, md = ln + cn, ld + cd
        if md > max_den:
            break
        if mn * a.den <= a.num * md:  # mediant <= a
            ln, ld = mn, md
        else:
            cn, cd = mn, md
    out = []
    while cn * b.den < b.num * cd:  # current < b
        out.append(Rational(cn, cd))
        k = (max_den + ld) // cd
        cn, cd, ln, ld = k * cn - ln, k * cd - ld, cn, cd
    return out


class PairCase(Enum):
    """Which side the short orbit sits on: CASE1 when long < short as values
    (the extra loop attaches from below), CASE2 otherwise."""

    CASE1 = 1
    CASE2 = 2


@dataclass(frozen=True)
class FareyPair:
    """An ordered Farey-neighbor pair: `long` has the larger period (denominator).

    Use FareyPair.of() to build one from two rationals in either order.
    """

    long: Rational
    short: Rational
    direction: PairCase

    def __post_init__(self):
        det = farey_determinant(self.long, self.short)
        if det != 1:
            raise ValueError(f"not Farey neighbors (determinant {det})")
        if self.long.den <= self.short.den:
            raise ValueError(f"long period {self.long.den} must exceed short period {self.short.den}")
        expected = PairCase.CASE1 if self.long < self.short else PairCase.CASE2
        if self.direction is not expected:
            raise ValueError(f"direction {self.direction} inconsistent with values {self.long}, {self.short}")

    @classmethod
    def of(cls, a: Rational, b: Rational) -> "FareyPair":
        det = farey_determinant(a, b)
        if det != 1:
            raise ValueError(f"not Farey neighbors (determinant {det})")
        long, short = (a, b) if a.den > b.den else (b, a)
        direction = PairCase.CASE1 if long < short else PairCase.CASE2
        return cls(long, short, direction)

    @property
    def p1(self) -> int:
        return self.long.den

    @property
    def q1(self) -> int:
        return self.long.num

    @property
    def p2(self) -> int:
        return self.short.den

    @property
    def q2(self) -> int:
        return self.short.num

    @property
    def lo(self) -> Rational:
        return min(self.long, self.short)

    @property
    def hi(self) -> Rational:
        return max(self.long, self.short)

    def contains(self, t: Rational) -> bool:
        """Closed-interval membership between the two rotation numbers."""
        return self.lo <= t <= self.hi

    def __str__(self) -> str:
        return f"{self.long} v {self.short}"


def parse_pair(text: str) -> FareyPair:
    """Parse the "q1/p1 v q2/p2" wire format (order-insensitive)."""
    tokens = text.strip().split()
    if len(tokens) != 3 or tokens[1] != "v":
        raise ValueError(f"expected a pair like 'q1/p1 v q2/p2', got {text!r}")
    return FareyPair.of(parse_rational(tokens[0]), parse_rational(tokens[2]))
