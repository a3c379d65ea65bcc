"""Combinatorial monodromy: loop moves on exact-period itineraries.

A small positive loop in parameter space around a parabolic parameter
permutes the period-n points of the polynomial.  Two move types occur:

* around a primitive parabolic parameter, the parabolic orbit (length n)
  splits pairwise, and the permutation is a product of n disjoint
  transpositions: the printed pair (kneading body + k, kneading body + k+1)
  together with all its shift images.  Points away from the parabolic orbit
  continue holomorphically through the loop and stay put, and the
  permutation must commute with the shift, which forces exactly this
  closure.

* around the special landing point of 1 - 1/(d^n - 1), the period-n cycle
  that splits off the parabolic fixed point is permuted cyclically; points
  in that cycle move by one inverse shift per positive turn, everything
  else is fixed.

The connection algorithm walks any exact-period-n itinerary up to the
special orbit through such moves, raising the digit sum at every
macro-step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .angles import (Angle, angle_from_word, d_expansion, exact_period,
                     kneading_sequence)
from .errors import (BudgetExceeded, InternalInvariant, NotExactPeriod,
                     PreconditionError)
from .parabolic import (Classification, Verdict, beta_family, classify_angle,
                        special_angle, special_word)
from .words import Word

# A point on the period-n cycle splitting off the special parabolic fixed
# point continues, per positive turn, to the point whose itinerary is one
# INVERSE shift away (the polynomial maps the sectors at the parabolic point
# one step clockwise, so the deck direction is -1).  Confirmed against the
# numerical continuation tests.
SPECIAL_CYCLE_STEP = -1

ENUMERATION_BUDGET = 2_000_000  # largest d**n the exhaustive walkers accept


@dataclass(frozen=True)
class MonodromyMove:
    """One positive turn around a parabolic landing point."""

    center: Angle
    kind: str  # "transposition" or "cycle"
    a: Optional[Word] = None
    b: Optional[Word] = None
    orbit_rep: Optional[Word] = None
    winding: int = 1

    def permutation(self) -> Dict[Word, Word]:
        """The full permutation on exact-period-n itineraries, as a sparse map."""
        out: Dict[Word, Word] = {}
        if self.kind == "transposition":
            n = len(self.a)
            for j in range(n):
                u, v = self.a.rotated(j), self.b.rotated(j)
                out[u], out[v] = v, u
            if self.winding % 2 == 0:
                return {}
            return out
        if self.kind == "cycle":
            n = len(self.orbit_rep)
            step = (SPECIAL_CYCLE_STEP * self.winding) % n
            if step == 0:
                return {}
            for w in self.orbit_rep.rotations():
                out[w] = w.rotated(step)
            return out
        raise InternalInvariant("unknown move kind %r" % (self.kind,))

    def apply(self, w: Word) -> Word:
        return self.permutation().get(w, w)

    def to_json(self) -> dict:
        rec = {"center": str(self.center), "kind": self.kind,
               "winding": self.winding}
        if self.kind == "transposition":
            rec["a"], rec["b"] = str(self.a), str(self.b)
        else:
            rec["orbit"] = str(self.orbit_rep)
        return rec


def transposition_move(angle: Angle) -> MonodromyMove:
    """Move around gamma(angle) for an angle landing at a primitive parameter.

    The swapped pair is (kneading body + k, kneading body + k+1 mod d) with
    k the last expansion digit; the wrap k = d-1 -> 0 occurs only for the
    beta_{-1} angles of satellite chains.  Both words must be primitive --
    anything else indicates the angle does not belong here.
    """
    n = exact_period(angle)
    if n < 2:
        raise PreconditionError("period must be >= 2, got %s" % (angle,))
    body = kneading_sequence(angle).body
    k = d_expansion(angle).digits[-1]
    d = angle.degree
    a = Word(body + (k,), d)
    b = Word(body + ((k + 1) % d,), d)
    for word in (a, b):
        if not word.is_primitive():
            raise InternalInvariant(
                "swap word %s at angle %s is not primitive" % (word, angle))
    return MonodromyMove(center=angle, kind="transposition", a=a, b=b)


def move_for_primitive(theta: Angle) -> MonodromyMove:
    """Transposition move for a maximal, primitive-certified angle."""
    cls = classify_angle(theta)
    if cls.verdict != Verdict.PRIMITIVE_CERTIFIED:
        raise PreconditionError(
            "%s classifies as %s, need a primitive-certified angle"
            % (theta, cls.verdict.value))
    move = transposition_move(theta)
    # A maximal primitive word never ends in d-1, so no wrap here.
    if move.a.digits[-1] == theta.degree - 1:
        raise InternalInvariant("unexpected digit wrap at maximal angle %s" % (theta,))
    return move


def special_cycle_move(d: int, n: int, winding: int = 1) -> MonodromyMove:
    """Cycle move around the landing point of the special angle."""
    return MonodromyMove(center=special_angle(d, n), kind="cycle",
                         orbit_rep=special_word(d, n), winding=winding)


@lru_cache(maxsize=65536)
def _classify_max_word(digits: Tuple[int, ...], d: int) -> Classification:
    return classify_angle(angle_from_word(Word(digits, d)))


@lru_cache(maxsize=65536)
def _moves_for_max_word(digits: Tuple[int, ...], d: int) -> Tuple[MonodromyMove, ...]:
    """The macro-step move list at a maximal itinerary (cached: connection
    walks revisit the same maximal words constantly)."""
    cls = _classify_max_word(digits, d)
    if cls.verdict == Verdict.PRIMITIVE_CERTIFIED:
        return (transposition_move(cls.theta),)
    if cls.verdict == Verdict.SATELLITE_CANDIDATE:
        return tuple(transposition_move(beta)
                     for beta, _ in beta_family(cls.theta).members)
    raise InternalInvariant("no moves at the special angle")


@lru_cache(maxsize=262144)
def _cached_permutation(move: MonodromyMove) -> Dict[Word, Word]:
    return move.permutation()


@dataclass
class ConnectionPlan:
    """Moves connecting a start itinerary to the special orbit."""

    source: Word
    target: Word
    moves: List[MonodromyMove] = field(default_factory=list)
    digit_sums: List[int] = field(default_factory=list)

    def apply(self, w: Word) -> Word:
        for move in self.moves:
            w = move.apply(w)
        return w

    def to_json(self) -> dict:
        return {
            "source": str(self.source),
            "target": str(self.target),
            "moves": [m.to_json() for m in self.moves],
            "digit_sums": list(self.digit_sums),
        }


def connect(d: int, n: int, start: Word) -> ConnectionPlan:
    """Walk `start` to the special orbit, raising the digit sum each macro-step.

    Macro-steps follow the two-case scheme: a primitive-certified maximal
    rotation contributes one transposition (+1 on the last digit); a
    satellite candidate contributes its full descending beta chain, whose
    net effect replaces the last digit nu_t - 1 by d - 1.  The trace of
    macro-step digit sums is strictly increasing and capped by the special
    orbit's sum (d-1)n - 1, which also bounds the number of macro-steps.
    """
    if start.degree != d or len(start) != n:
        raise PreconditionError("start word %s does not match d=%d, n=%d"
                                % (start, d, n))
    if not start.is_primitive():
        raise NotExactPeriod("itinerary %s is not of exact period %d" % (start, n))
    if n < 2:
        raise PreconditionError("period must be >= 2")

    target_word = special_word(d, n)
    bound = (d - 1) * n - 1
    plan = ConnectionPlan(source=start, target=start)
    plan.digit_sums.append(start.digit_sum())
    cur = start

    target_rep = target_word.min_rotation()
    while cur.min_rotation() != target_rep:
        top = cur.max_rotation()
        before = cur.digit_sum()
        for move in _moves_for_max_word(top.digits, d):
            plan.moves.append(move)
            cur = _cached_permutation(move).get(cur, cur)
        after = cur.digit_sum()
        if after <= before:
            raise InternalInvariant(
                "digit sum did not increase (%d -> %d) at %s" % (before, after, cur))
        if after > bound:
            raise InternalInvariant(
                "digit sum %d exceeded the bound %d at %s" % (after, bound, cur))
        plan.digit_sums.append(after)

    plan.target = cur
    return plan


def _all_exact_period_words(d: int, n: int) -> List[Word]:
    if d ** n > ENUMERATION_BUDGET:
        raise BudgetExceeded("d^n = %d exceeds the enumeration budget" % (d ** n,))
    out = []
    for value in range(d ** n):
        digits = []
        v = value
        for _ in range(n):
            v, r = divmod(v, d)
            digits.append(r)
        w = Word(tuple(reversed(digits)), d)
        if w.is_primitive():
            out.append(w)
    return out


def maximal_angles(d: int, n: int) -> List[Angle]:
    """All angles of exact period n that are maximal in their orbits."""
    seen = set()
    out = []
    for w in _all_exact_period_words(d, n):
        rep = w.max_rotation()
        if rep.digits in seen:
            continue
        seen.add(rep.digits)
        out.append(angle_from_word(rep))
    return out


def transitivity_certificate(d: int, n: int) -> dict:
    """Build the move graph on all exact-period-n itineraries and check
    connectivity (the combinatorial shadow of irreducibility).

    Edges: the shift-closed transpositions of every maximal
    primitive-certified angle, the full beta chains of every satellite
    candidate, and the special cycle.
    """
    if n < 2:
        raise PreconditionError("period must be >= 2")
    vertices = _all_exact_period_words(d, n)
    index = {w.digits: i for i, w in enumerate(vertices)}

    parent = list(range(len(vertices)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    moves: List[MonodromyMove] = []
    for theta in maximal_angles(d, n):
        cls = _classify_max_word(d_expansion(theta).digits, d)
        if cls.verdict == Verdict.PRIMITIVE_CERTIFIED:
            moves.append(transposition_move(theta))
        elif cls.verdict == Verdict.SATELLITE_CANDIDATE:
            moves.extend(transposition_move(beta)
                         for beta, _ in beta_family(theta).members)
    moves.append(special_cycle_move(d, n))

    edge_count = 0
    for move in moves:
        for u, v in move.permutation().items():
            if u.digits not in index or v.digits not in index:
                raise InternalInvariant(
                    "move %s leaves the exact-period-%d vertex set" % (move, n))
            union(index[u.digits], index[v.digits])
            edge_count += 1

    components = len({find(i) for i in range(len(vertices))})
    return {
        "degree": d,
        "period": n,
        "vertices": len(vertices),
        "moves": len(moves),
        "directed_edges": edge_count,
        "components": components,
        "connected": components == 1,
    }
