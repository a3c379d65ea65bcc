"""Exact arithmetic on external angles.

An angle is a reduced rational in [0, 1) on the circle R/Z, carried together
with the degree d of the ambient map t -> d*t.  Everything here is exact;
floating point never enters, so partition-boundary decisions (which drive
kneading sequences) are always correct.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Tuple

from .errors import InternalInvariant, NotPeriodic, PreconditionError, ZeroAngle
from .words import KneadingSequence, Word


@dataclass(frozen=True, order=True)
class Angle:
    # 'value' first so dataclass ordering compares angles, not degrees;
    # comparing angles of different degree is guarded in __post_init__ callers.
    value: Fraction
    degree: int

    def __post_init__(self):
        if self.degree < 2:
            raise PreconditionError("degree must be >= 2")
        v = self.value
        if not isinstance(v, Fraction):
            v = Fraction(v)
        v %= 1
        object.__setattr__(self, "value", v)

    @classmethod
    def parse(cls, text: str, degree: int) -> "Angle":
        """Parse "p/q" (or a plain integer numerator, meaning p/1)."""
        try:
            if "/" in text:
                num, den = text.split("/")
                value = Fraction(int(num), int(den))
            else:
                value = Fraction(int(text))
        except (ValueError, ZeroDivisionError):
            raise PreconditionError("cannot parse angle %r" % (text,)) from None
        return cls(value, degree)

    def __str__(self) -> str:
        return "%d/%d" % (self.value.numerator, self.value.denominator)

    def __float__(self) -> float:
        return float(self.value)

    def is_periodic(self) -> bool:
        return gcd(self.value.denominator, self.degree) == 1


def tau_iterate(theta: Angle, k: int = 1) -> Angle:
    """k-fold application of t -> d*t (mod 1)."""
    if k < 0:
        raise PreconditionError("iteration count must be >= 0")
    return Angle(theta.value * theta.degree ** k, theta.degree)


def exact_period(theta: Angle) -> int:
    """Least n >= 1 with d^n * theta = theta (mod 1).

    Equals the multiplicative order of d modulo the reduced denominator.
    """
    q = theta.value.denominator
    d = theta.degree
    if gcd(q, d) != 1:
        raise NotPeriodic("angle %s is not periodic under multiplication by %d"
                          % (theta, d))
    n, power = 1, d % q
    while power != 1 % q:
        power = power * d % q
        n += 1
        if n > q:  # cannot happen; ord divides phi(q) <= q
            raise InternalInvariant("order computation failed for %s" % (theta,))
    return n


def orbit(theta: Angle) -> List[Angle]:
    """The forward orbit [theta, tau(theta), ..., tau^{n-1}(theta)]."""
    n = exact_period(theta)
    out = [theta]
    for _ in range(n - 1):
        out.append(tau_iterate(out[-1]))
    return out


def maximal_in_orbit(theta: Angle) -> Tuple[bool, Angle]:
    """(is theta the orbit maximum?, the orbit maximum)."""
    orb = orbit(theta)
    top = max(orb, key=lambda a: a.value)
    return top.value == theta.value, top


def d_expansion(theta: Angle) -> Word:
    """One exact period of the base-d expansion of a periodic angle."""
    n = exact_period(theta)
    d = theta.degree
    digits = []
    cur = theta
    for _ in range(n):
        scaled = cur.value * d
        digits.append(int(scaled))  # floor: scaled >= 0
        cur = Angle(scaled, d)
    return Word(tuple(digits), d)


def angle_from_word(w: Word) -> Angle:
    """The periodic angle .repeat(w) = sum e_k d^{n-k} / (d^n - 1)."""
    d = w.degree
    n = len(w)
    num = 0
    for e in w.digits:
        num = num * d + e
    return Angle(Fraction(num, d ** n - 1), d)


def _partition_digit(x: Angle, theta: Angle):
    """Label of x in the circle partition cut at (theta+j)/d, j = 0..d-1.

    Returns None exactly on a cut point.  The arc containing 0 gets label 0
    and labels increase counterclockwise, so the arc
    ((theta+j-1)/d, (theta+j)/d) carries label j.
    """
    d = theta.degree
    v = (x.value - theta.value / d) % 1
    scaled = v * d
    if scaled.denominator == 1:
        return None
    return (int(scaled) + 1) % d


def kneading_sequence(theta: Angle) -> KneadingSequence:
    """Kneading sequence nu_1 ... nu_{n-1} * of a periodic angle.

    Digit k is the partition label of tau^{k-1}(theta); the n-th iterate is
    tau^{n-1}(theta), a d-preimage of theta, which lands on a cut point and
    yields the terminal star.  An interior cut-point hit would contradict
    exact period n and aborts loudly.
    """
    if theta.value == 0:
        raise ZeroAngle("the zero angle has no kneading sequence")
    n = exact_period(theta)
    body = []
    cur = theta
    for k in range(1, n):
        digit = _partition_digit(cur, theta)
        if digit is None:
            raise InternalInvariant(
                "cut-point hit at position %d < period %d for angle %s"
                % (k, n, theta))
        body.append(digit)
        cur = tau_iterate(cur)
    if _partition_digit(cur, theta) is not None:
        raise InternalInvariant(
            "expected terminal boundary symbol at position %d for angle %s"
            % (n, theta))
    return KneadingSequence(tuple(body), theta.degree)
