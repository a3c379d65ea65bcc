"""Primitive-vs-satellite classification of periodic angles.

The landing point of the parameter ray at a periodic angle theta is a
parabolic parameter.  For theta maximal in its orbit, the root of a
satellite component forces three combinatorial properties of theta
(cyclic kneading sequence; last expansion digit nu_t - 1; nu_t - 1 within
[0, d-2]).  Their failure therefore certifies a primitive parameter, while
passing yields only a satellite *candidate*.  The one angle certified
satellite outright is the special angle 1 - 1/(d^n - 1), whose landing
point is the root of a component attached to the main cardioid.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .angles import (Angle, angle_from_word, d_expansion, exact_period,
                     kneading_sequence, maximal_in_orbit, tau_iterate)
from .errors import (BoundaryHit, InternalInvariant, NotMaximal,
                     NotSatelliteCandidate, PeriodDrop, PeriodOne,
                     SpecialAngle, ZeroAngle)
from .words import CyclicExpression, KneadingSequence, Word, cyclic_expression


class Verdict(enum.Enum):
    PRIMITIVE_CERTIFIED = "primitive-certified"
    SATELLITE_CANDIDATE = "satellite-candidate"
    SPECIAL_SATELLITE = "special-satellite"


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    theta: Angle
    kneading: KneadingSequence
    expansion: Word
    cyclic: Optional[CyclicExpression] = None
    # SatelliteCandidate extras: candidate parabolic-orbit length and turns
    orbit_length: Optional[int] = None
    turns: Optional[int] = None
    # SpecialSatellite extra: the companion angle
    eta: Optional[Angle] = None
    reason: str = ""

    def to_json(self) -> dict:
        rec = {
            "verdict": self.verdict.value,
            "angle": str(self.theta),
            "degree": self.theta.degree,
            "kneading": str(self.kneading),
            "expansion": str(self.expansion),
            "reason": self.reason,
        }
        if self.cyclic is not None:
            rec["w"] = str(self.cyclic.w)
            rec["t"] = self.cyclic.t
            rec["s"] = self.cyclic.s
        if self.eta is not None:
            rec["eta"] = str(self.eta)
        return rec


def itinerary_of_angle(t: Angle, theta: Angle, length: int) -> Word:
    """Itinerary of the angle t relative to the partition defined by theta.

    The circle is cut at the d preimage angles (theta + k)/d; the arc
    containing 0 is labeled 0 and labels increase counterclockwise.  Digit j
    records the arc containing tau^{j-1}(t).  An iterate falling exactly on
    a cut angle means the corresponding dynamical ray bifurcates or crashes
    into the critical orbit, and is reported as BoundaryHit.
    """
    from .angles import _partition_digit  # shared partition rule

    if theta.value == 0:
        raise ZeroAngle("partition undefined for the zero angle")
    if t.degree != theta.degree:
        raise InternalInvariant("mixed degrees %d vs %d" % (t.degree, theta.degree))
    digits = []
    cur = t
    for j in range(length):
        digit = _partition_digit(cur, theta)
        if digit is None:
            raise BoundaryHit(
                "iterate %d of %s lies on a cut angle of the %s-partition"
                % (j, t, theta))
        digits.append(digit)
        cur = tau_iterate(cur)
    return Word(tuple(digits), theta.degree)


def special_angle(d: int, n: int) -> Angle:
    """1 - 1/(d^n - 1), the angle .repeat((d-1)...(d-1)(d-2))."""
    if n < 2:
        raise PeriodOne("special angle needs period >= 2")
    return Angle(Fraction(d ** n - 2, d ** n - 1), d)


def special_data(d: int, n: int) -> Tuple[Angle, Angle]:
    """The special angle and its companion eta = d*theta - d + 1."""
    theta = special_angle(d, n)
    eta = tau_iterate(theta)  # equals d*theta - (d-1) since theta >= 1 - 1/d
    return theta, eta


def special_word(d: int, n: int) -> Word:
    return Word((d - 1,) * (n - 1) + (d - 2,), d)


def classify_angle(theta: Angle) -> Classification:
    """Classify the landing point of the parameter ray at a maximal angle."""
    n = exact_period(theta)
    if n < 2:
        raise PeriodOne("classification requires exact period >= 2, got %s" % (theta,))
    is_max, top = maximal_in_orbit(theta)
    if not is_max:
        raise NotMaximal("angle %s is not maximal in its orbit (maximum %s)"
                         % (theta, top))

    d = theta.degree
    nu = kneading_sequence(theta)
    expansion = d_expansion(theta)

    if theta.value == Fraction(d ** n - 2, d ** n - 1):
        return Classification(
            Verdict.SPECIAL_SATELLITE, theta, nu, expansion,
            cyclic=cyclic_expression(nu),
            orbit_length=1, turns=n,
            eta=tau_iterate(theta),
            reason="landing point is the root of a period-%d component "
                   "attached to the main cardioid" % n)

    cyc = cyclic_expression(nu)
    if cyc is None:
        return Classification(
            Verdict.PRIMITIVE_CERTIFIED, theta, nu, expansion,
            reason="kneading sequence is acyclic")

    nu_t = cyc.w.digits[-1]
    last = expansion.digits[-1]
    if nu_t < 1:
        return Classification(
            Verdict.PRIMITIVE_CERTIFIED, theta, nu, expansion, cyclic=cyc,
            reason="nu_t - 1 = -1 is not a digit")
    if last != nu_t - 1:
        return Classification(
            Verdict.PRIMITIVE_CERTIFIED, theta, nu, expansion, cyclic=cyc,
            reason="last expansion digit %d differs from nu_t - 1 = %d"
                   % (last, nu_t - 1))
    return Classification(
        Verdict.SATELLITE_CANDIDATE, theta, nu, expansion, cyclic=cyc,
        orbit_length=cyc.t, turns=cyc.s,
        reason="cyclic kneading with matching last digit")


@dataclass(frozen=True)
class BetaFamily:
    """The descending chain of angles used to raise a satellite candidate.

    ``members`` lists (angle, itinerary pair swapped by a loop around its
    landing point) ordered beta_{nu_t-2}, ..., beta_0, beta_{-1}.  All
    members land at primitive parabolic parameters; the first len-1 of them
    are maximal with the same kneading body as theta, while the final
    beta_{-1} is non-maximal and its swap wraps the last digit d-1 -> 0.
    """

    theta: Angle
    members: Tuple[Tuple[Angle, Tuple[Word, Word]], ...]

    @property
    def beta_minus_one(self) -> Angle:
        return self.members[-1][0]

    def to_json(self) -> dict:
        return {
            "angle": str(self.theta),
            "betas": [
                {"beta": str(b), "swap": [str(a), str(bb)]}
                for b, (a, bb) in self.members
            ],
        }


def beta_family(theta: Angle) -> BetaFamily:
    """Construct beta_{nu_t-2}, ..., beta_0, beta_{-1} for a satellite candidate.

    beta_{nu_t-i} repeats w^{s-1} nu_1...nu_{t-1} (nu_t - i) for
    2 <= i <= nu_t: theta's expansion with the last digit lowered.
    beta_{-1} sits one step below beta_0 on the angle ladder:
    beta_{-1} = beta_0 - 1/(d^n - 1), whose expansion word is the body (as a
    base-d integer) minus one, followed by the digit d-1.  When the body
    does not end in 0 this is the word body[:-1] (body[-1]-1) (d-1); when it
    does, the borrow propagates (the body-ends-in-0 case arises e.g. for
    d=3, theta=.repeat(201200)).  Every member is validated: exact period n,
    kneading body equal to theta's, and primitive landing parameters.
    """
    cls = classify_angle(theta)
    if cls.verdict == Verdict.SPECIAL_SATELLITE:
        raise SpecialAngle("beta family undefined at the special angle %s" % (theta,))
    if cls.verdict != Verdict.SATELLITE_CANDIDATE:
        raise NotSatelliteCandidate(
            "%s classifies as %s" % (theta, cls.verdict.value))

    d = theta.degree
    cyc = cls.cyclic
    w, t, s = cyc.w, cyc.t, cyc.s
    n = t * s
    nu_t = w.digits[-1]
    body = cls.kneading.body  # == w^{s-1} nu_1..nu_{t-1} == expansion prefix

    members: List[Tuple[Angle, Tuple[Word, Word]]] = []
    for j in range(nu_t - 2, -1, -1):  # beta_{nu_t-2} down to beta_0
        word = Word(body + (j,), d)
        beta = angle_from_word(word)
        _validate_beta(beta, word, n, expect_maximal=True)
        swap = (Word(body + (j,), d), Word(body + (j + 1,), d))
        members.append((beta, swap))

    body_value = 0
    for e in body:
        body_value = body_value * d + e
    value_m1 = body_value * d - 1  # expansion integer of beta_{-1}
    digits_m1 = []
    for _ in range(n):
        value_m1, r = divmod(value_m1, d)
        digits_m1.append(r)
    word_m1 = Word(tuple(reversed(digits_m1)), d)
    beta_m1 = angle_from_word(word_m1)
    _validate_beta(beta_m1, word_m1, n, expect_maximal=False)
    nu_m1 = kneading_sequence(beta_m1)
    if nu_m1.body != body:
        raise InternalInvariant(
            "beta_{-1} = %s has kneading %s, expected body %s"
            % (beta_m1, nu_m1, Word(body, d)))
    if word_m1.digits[-1] != d - 1:
        raise InternalInvariant("beta_{-1} expansion %s must end in %d"
                                % (word_m1, d - 1))
    # Landing-parameter primitivity via the satellite necessary conditions:
    # the last expansion digit d-1 can only equal nu_t or nu_t - 1 if
    # nu_t = d-1, which forces theta to be the special angle (excluded).
    if cyclic_expression(nu_m1) is not None and nu_t == d - 1:
        raise InternalInvariant(
            "beta_{-1} = %s is not certified primitive; theta %s should "
            "have been special" % (beta_m1, theta))
    swap_m1 = (Word(body + (d - 1,), d), Word(body + (0,), d))
    members.append((beta_m1, swap_m1))
    return BetaFamily(theta, tuple(members))


def _validate_beta(beta: Angle, word: Word, n: int, expect_maximal: bool):
    if exact_period(beta) != n:
        raise PeriodDrop("angle %s = .repeat(%s) has period %d, expected %d"
                         % (beta, word, exact_period(beta), n))
    is_max, _ = maximal_in_orbit(beta)
    if is_max != expect_maximal:
        raise InternalInvariant(
            "angle %s maximality %s contradicts the construction" % (beta, is_max))
    if expect_maximal:
        sub = classify_angle(beta)
        if sub.verdict != Verdict.PRIMITIVE_CERTIFIED:
            raise InternalInvariant(
                "beta member %s classifies as %s, expected primitive"
                % (beta, sub.verdict.value))
