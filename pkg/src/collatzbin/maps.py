"""The Collatz map and its binary reformulation on [1/2, 1).

Three layers, all exact:

* integer maps: the classic step ``collatz_step`` and the reduced step
  ``reduced_step`` that jumps odd-to-odd by stripping every factor of 2;
* the interval map ``binary_step`` acting on :class:`BinaryFraction`,
  conjugate to the reduced map under the embedding ``embed``;
* the piecewise-linear circle map ``circle_step`` (slopes 3/2 and 3/4)
  that the interval map tracks up to an explicit error, together with its
  closed-form iterates, critical points, and inverse.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

from .exact import BinaryFraction, two_adic_valuation

__all__ = [
    "Branch",
    "Family",
    "binary_step",
    "circle_iterate",
    "circle_preimage",
    "circle_step",
    "classify_branch",
    "collatz_step",
    "critical_point",
    "embed",
    "family_member",
    "is_predecessor",
    "mu",
    "reduced_step",
]

_TWO_THIRDS = Fraction(2, 3)


class Branch(Enum):
    """Which arm of the interval map applies at a point."""

    PREDECESSOR = "predecessor"
    LOW = "low"
    HIGH = "high"


class Family(Enum):
    """Suffix tag for the structured start families built from 111000 blocks."""

    ALPHA = "1"
    BETA = "11"
    GAMMA = "111"


def collatz_step(x: int) -> int:
    """One step of the classic map: 3x+1 on odd x, x/2 on even x."""
    if x < 1:
        raise ValueError(f"collatz_step needs a positive integer, got {x}")
    return 3 * x + 1 if x % 2 else x // 2


def reduced_step(x: int) -> int:
    """Odd-to-odd step: form 3x+1 and strip every factor of 2."""
    if x < 1 or x % 2 == 0:
        raise ValueError(f"reduced_step needs a positive odd integer, got {x}")
    t = 3 * x + 1
    return t >> two_adic_valuation(t)


def embed(x: int) -> BinaryFraction:
    """Map a positive integer to [1/2, 1) by shifting out its binary length.

    Factors of 2 are stripped first, so x and 2x embed to the same point and
    every power of two lands on the ground state 1/2.
    """
    if x < 1:
        raise ValueError(f"embed needs a positive integer, got {x}")
    n = x >> two_adic_valuation(x)
    return BinaryFraction(n, n.bit_length())


def _is_predecessor_raw(num: int, ell: int) -> bool:
    # digits "1" + "01"*k  <=>  odd length and 3*num == 2**(ell+1) - 1
    return ell % 2 == 1 and 3 * num == (1 << (ell + 1)) - 1


def is_predecessor(y: BinaryFraction) -> bool:
    """True when y's digits are "1" followed by copies of "01".

    These are exactly the points one reduced step before the ground state
    (including the ground state itself); the interval map sends them
    straight to 1/2.
    """
    return _is_predecessor_raw(y.numerator, y.length)


def classify_branch(y: BinaryFraction) -> Branch:
    """Classify y as PREDECESSOR, or LOW / HIGH as y < 2/3 or y > 2/3.

    A dyadic can never equal 2/3, so the low/high split is a strict
    dichotomy once predecessors are carved out.
    """
    num, ell = y.numerator, y.length
    if _is_predecessor_raw(num, ell):
        return Branch.PREDECESSOR
    # y < 2/3  <=>  3*num < 2**(ell+1)
    return Branch.LOW if 3 * num < (1 << (ell + 1)) else Branch.HIGH


def _binary_step_raw(num: int, ell: int) -> tuple[int, int]:
    """binary_step on the raw (numerator, length) pair; hot-loop form."""
    if ell % 2 == 1 and 3 * num == (1 << (ell + 1)) - 1:
        return 1, 1
    t = 3 * num + 1
    v = (t & -t).bit_length() - 1
    if 3 * num < (1 << (ell + 1)):
        # low arm: (3y + 2**-ell) / 2
        return t >> v, ell + 1 - v
    # high arm: (3y + 2**-ell) / 4
    return t >> v, ell + 2 - v


def binary_step(y: BinaryFraction) -> BinaryFraction:
    """One step of the interval map on [1/2, 1).

    Predecessors of the ground state map to 1/2.  Otherwise the map adds the
    last-place unit to 3y and renormalizes back into [1/2, 1), dividing by 2
    on the low arm (y < 2/3) and by 4 on the high arm (y > 2/3).  On
    numerators this is exactly "3n+1, strip factors of 2", so the map is the
    reduced Collatz step seen through :func:`embed`.
    """
    return BinaryFraction(*_binary_step_raw(y.numerator, y.length))


def circle_step(y: Fraction | int) -> Fraction:
    """One step of the comparison circle map: 3y/2 on [1/2, 2/3), 3y/4 on [2/3, 1)."""
    y = Fraction(y)
    if not Fraction(1, 2) <= y < 1:
        raise ValueError(f"circle_step is defined on [1/2, 1), got {y}")
    return 3 * y / 2 if y < _TWO_THIRDS else 3 * y / 4


def mu(k: int) -> int:
    """floor(k * log2(3)), computed exactly as the bit length of 3**k minus 1."""
    if k < 1:
        raise ValueError("mu needs k >= 1")
    return (3**k).bit_length() - 1


def critical_point(k: int) -> Fraction:
    """The point 2**mu(k) / 3**k in (1/2, 1) where the k-fold circle map folds."""
    if k < 1:
        raise ValueError("critical_point needs k >= 1")
    p = 3**k
    return Fraction(1 << (p.bit_length() - 1), p)


def circle_iterate(y: Fraction | int, k: int) -> Fraction:
    """The k-fold circle map in closed form.

    Equals 3**k * y / 2**mu(k) below the critical point c_k and one further
    halving at or above it; agrees with composing :func:`circle_step` k
    times.
    """
    y = Fraction(y)
    if not Fraction(1, 2) <= y < 1:
        raise ValueError(f"circle_iterate is defined on [1/2, 1), got {y}")
    if k < 1:
        raise ValueError("circle_iterate needs k >= 1")
    p = 3**k
    m = p.bit_length() - 1
    if y < Fraction(1 << m, p):
        return p * y / (1 << m)
    return p * y / (1 << (m + 1))


def circle_preimage(y: Fraction | int) -> Fraction:
    """Inverse of :func:`circle_step`: 2y/3 on [3/4, 1), 4y/3 on [1/2, 3/4)."""
    y = Fraction(y)
    if not Fraction(1, 2) <= y < 1:
        raise ValueError(f"circle_preimage is defined on [1/2, 1), got {y}")
    return 2 * y / 3 if y >= Fraction(3, 4) else 4 * y / 3


def family_member(kind: Family, repetitions: int) -> BinaryFraction:
    """The point whose digits are `repetitions` copies of 111000 plus the family suffix.

    With zero repetitions the families degenerate to 0.1, 0.11, and 0.111.
    """
    if repetitions < 0:
        raise ValueError("repetitions must be >= 0")
    return BinaryFraction.from_bits("111000" * repetitions + kind.value)
