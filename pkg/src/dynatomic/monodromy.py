"""Numerical monodromy of the period-n root set along parameter loops.

A closed loop in the parameter plane that avoids collisions of period-n
points lifts to a motion of the full root set of f_c^n(z) = z; traversing
the loop permutes the roots.  The pipeline here mirrors how one checks the
combinatorial loop moves of :mod:`.engine` on the desk:

1. at a base parameter on a parameter ray (far enough out that the Julia
   set is a dust and every periodic point is the landing point of rays),
   each exact-period-n root is labeled with its itinerary by tracing the
   periodic dynamical rays and reading the itinerary of the ray angle;
2. the labeled configuration is transported by predictor-corrector Newton
   continuation along the ray toward the loop's center and onto the circle;
3. the circle is traversed with the same continuation, and the end-to-start
   matching of the configuration is the observed permutation, reported
   against the predicted move.

Rays whose angle eventually maps onto the base angle crash into an iterated
preimage of the critical point instead of landing; their two one-sided
limits land at the two periodic points whose itineraries are the one-sided
itineraries of the angle, and those are exactly the labels no landing ray
delivers.  Tracing a slightly offset angle recovers each one-sided limit
numerically; the itinerary itself is computed exactly from the sided
partition, so the offset only has to keep the landing point within the
matching guard.

Two further wrinkles of the angle -> root correspondence are handled
exactly rather than assumed away: a period-n angle whose itinerary has
lower period lands on a lower-period point (so it labels nothing here),
and several rays may co-land on one root -- in particular at real
parameters every real periodic point catches a complex-conjugate pair of
rays, which can leave whole shift orbits of itineraries without a
period-n ray.  Those roots are landed by rays of period 2n (or 3n) whose
itinerary is n-periodic, and the labeler falls back to enumerating them.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .angles import Angle, _partition_digit, exact_period, tau_iterate
from .config import (DEFAULT_MONODROMY_SCHEDULE, DEFAULT_RAY_SCHEDULE,
                     MonodromySchedule, RaySchedule)
from .dynpoly import parabolic_parameters, periodic_points, refine_parabolic_from_c
from .engine import MonodromyMove, special_cycle_move, transposition_move
from .errors import (Bifurcation, BoundaryHit, BudgetExceeded,
                     ConvergenceError, LabelConflict, NewtonDivergence,
                     PreconditionError, TrackingAmbiguous, UnmatchedRoot)
from .parabolic import Verdict, classify_angle, itinerary_of_angle
from .rays import escape_potential, trace_dynamical_ray, trace_parameter_ray
from .words import Word

__all__ = [
    "RootLabeling", "PermutationReport", "label_roots", "transport_labels",
    "loop_permutation", "expected_move", "monodromy_check",
    "permutation_cycles",
]

# Angular offset used to trace the one-sided limits of a crashing ray.  It
# only needs to be (a) large enough that the offset ray clears the iterated
# preimage of the critical point it no longer hits, and (b) small enough
# that the offset landing point shadows the one-sided limit point well
# inside the matching guard; both leave orders of magnitude of slack at
# the potentials used here.
SIDE_OFFSET = Fraction(1, 2 ** 28)

_MATCH_FACTOR = 0.3  # fraction of the min pairwise gap accepted as "same root"

# Parameters below this escape potential get their labeling anchored at
# this potential on the parameter ray and transported inward; see
# label_roots.  At potential 1 the dust is expanding strongly enough that
# an offset of SIDE_OFFSET resolves far below the root separation.
ANCHOR_POTENTIAL = 1.0


# ---------------------------------------------------------------------------
# orbit derivatives, vectorized over the whole root set

def _orbit_arrays(d: int, c: complex, z: np.ndarray, n: int):
    """F = f^n(z) - z together with dF/dz and dF/dc, elementwise."""
    w = z.copy()
    dz = np.ones_like(z)
    dc = np.zeros_like(z)
    for _ in range(n):
        p = d * w ** (d - 1)
        dz = p * dz
        dc = p * dc + 1.0
        w = w ** d + c
    return w - z, dz - 1.0, dc


def _min_gap(z: np.ndarray) -> float:
    if len(z) < 2:
        return math.inf
    diff = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(diff, np.inf)
    return float(diff.min())


def _match_index(point: complex, roots: np.ndarray, guard: float,
                 what: str) -> int:
    dists = np.abs(roots - point)
    j = int(np.argmin(dists))
    if not dists[j] < guard:
        raise UnmatchedRoot(
            "%s is %.3g away from the nearest period point (guard %.3g)"
            % (what, float(dists[j]), guard))
    return j


def _land_to_root(d: int, n: int, c: complex, estimate: complex,
                  roots: np.ndarray, raw_guard: float, what: str) -> int:
    """Identify which root a ray-landing estimate belongs to.

    Landing extrapolation is only Hoelder-accurate for the offset rays that
    stand in for one-sided limits, so the raw estimate merely has to fall
    within half a root gap; Newton on f^n(z) = z then pins it down and both
    answers must agree.  (A Newton jump across a basin boundary would slip
    past this, but the shift-equivariance sweep at the end of the labeling
    catches any such swap.)
    """
    j = _match_index(estimate, roots, raw_guard, what)
    z = np.array([estimate], dtype=complex)
    z, ok = _newton_polish(d, n, c, z, 1e-13)
    if ok:
        scale = 1.0 + float(np.abs(roots).max())
        dist = abs(complex(z[0]) - roots[j])
        if not dist < 1e-6 * scale:
            raise UnmatchedRoot(
                "%s polished to a point %.3g away from the root it "
                "coarsely matched" % (what, dist))
    return j


# ---------------------------------------------------------------------------
# labeling the roots at a base parameter

def _sided_digit(x: Angle, theta: Angle, side: int) -> int:
    """Partition label of the one-sided limit x +- 0.

    Off the cut points this is the plain partition label; on a cut point
    the + side belongs to the arc starting there and the - side to the arc
    ending there.
    """
    d = theta.degree
    scaled = ((x.value - theta.value / d) % 1) * d
    if scaled.denominator == 1:
        s = int(scaled) % d
        return (s + 1) % d if side > 0 else s
    return (int(scaled) + 1) % d


def _sided_itinerary(t: Angle, theta: Angle, length: int, side: int) -> Word:
    """Itinerary of t +- 0 under angle multiplication (exact arithmetic).

    Every iterate of the offset angle t + side*eps sits on the same side of
    its cut as the limit, since multiplication by d preserves orientation.
    """
    digits = []
    cur = t
    for _ in range(length):
        digits.append(_sided_digit(cur, theta, side))
        cur = tau_iterate(cur)
    return Word(tuple(digits), theta.degree)


def _exact_period_angles(d: int, n: int) -> List[Angle]:
    q = d ** n - 1
    out = []
    for k in range(1, q):
        t = Angle(Fraction(k, q), d)
        if exact_period(t) == n:
            out.append(t)
    return out


def _primitive_words(d: int, n: int) -> List[Word]:
    out = []
    for value in range(d ** n):
        digits = []
        for _ in range(n):
            value, r = divmod(value, d)
            digits.append(r)
        w = Word(tuple(reversed(digits)), d)
        if w.is_primitive():
            out.append(w)
    return out


@dataclass
class RootLabeling:
    """Bijection between exact-period-n itineraries and roots at one c."""

    degree: int
    period: int
    c: complex
    base_angle: Angle
    by_word: Dict[Word, complex]

    def words(self) -> List[Word]:
        return sorted(self.by_word, key=lambda w: w.digits)

    def root_array(self) -> np.ndarray:
        return np.array([self.by_word[w] for w in self.words()], dtype=complex)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "period": self.period,
            "c": [self.c.real, self.c.imag],
            "base_angle": str(self.base_angle),
            "labels": {str(w): [z.real, z.imag]
                       for w, z in sorted(self.by_word.items(),
                                          key=lambda kv: kv[0].digits)},
        }


def label_roots(c: complex, base_angle: Angle, n: int,
                target_potential: float = 1e-7,
                side_offset: Fraction = SIDE_OFFSET,
                schedule: RaySchedule = DEFAULT_RAY_SCHEDULE) -> RootLabeling:
    """Label every exact-period-n root of f_c by its itinerary.

    `c` must escape (lie outside the degree-d connectedness locus); in
    practice it is a point on the parameter ray at `base_angle`, which is
    also the angle defining the itinerary partition.  Each exact-period-n
    dynamical ray is traced and its landing point matched to the nearest
    root; angles whose rays crash contribute their two one-sided limits
    instead.  Duplicate assignments must agree and the resulting map must
    be a bijection compatible with the dynamics (f maps the root labeled w
    to the root labeled by the shift of w), otherwise LabelConflict /
    UnmatchedRoot is raised.

    The one-sided limits are shadowed by rays at slightly offset angles,
    which determine the root only to a precision that degrades with the
    weakest expansion along the Julia set.  Close to the connectedness
    locus (small escape potential) that is not enough, so the labeling is
    then anchored further out on the parameter ray at `base_angle`, where
    expansion is strong, and carried to `c` by Newton continuation -- safe
    because period-n roots never collide outside the connectedness locus.
    """
    d = base_angle.degree
    if n < 2:
        raise PreconditionError("labeling needs period >= 2")
    c = complex(c)
    try:
        potential = escape_potential(d, c, c, maxiter=2048)
    except ConvergenceError:
        raise PreconditionError(
            "base parameter %s does not escape; labeling by ray landing "
            "needs a parameter outside the connectedness locus" % (c,)
        ) from None

    if potential >= ANCHOR_POTENTIAL:
        return _label_direct(c, base_angle, n, target_potential,
                             side_offset, schedule)

    ray = trace_parameter_ray(base_angle, target_potential=0.9 * potential,
                              schedule=schedule)
    anchor: Optional[complex] = None
    via: List[complex] = []
    for pot, z in zip(ray.potentials, ray.samples):
        if pot > ANCHOR_POTENTIAL:
            continue
        if anchor is None:
            anchor = complex(z)
        elif pot > potential:
            via.append(complex(z))
    if anchor is None:  # start_potential below the anchor level
        anchor = complex(ray.samples[0])
    base = _label_direct(anchor, base_angle, n, target_potential,
                         side_offset, schedule)
    return transport_labels(base, c, via=tuple(via))


def _label_direct(c: complex, base_angle: Angle, n: int,
                  target_potential: float, side_offset: Fraction,
                  schedule: RaySchedule) -> RootLabeling:
    d = base_angle.degree
    roots = np.array(periodic_points(d, c, n, exact=True), dtype=complex)
    gap = _min_gap(roots)
    guard = _MATCH_FACTOR * gap
    raw_guard = 0.45 * gap
    offset_schedule = replace(
        schedule, bifurcation_tol=min(schedule.bifurcation_tol, 1e-9))
    # the offset stand-ins for one-sided limits approach their root only
    # Hoelder-slowly, so stop them shallow and let Newton do the rest
    offset_potential = max(target_potential, 1e-5)

    assigned: Dict[Word, int] = {}
    owner: Dict[int, Word] = {}

    def assign(w: Word, idx: int, what: str) -> None:
        if assigned.get(w, idx) != idx:
            raise LabelConflict(
                "%s lands on root %d but itinerary %s was already matched "
                "to root %d" % (what, idx, w, assigned[w]))
        if owner.get(idx, w) != w:
            raise LabelConflict(
                "root %d received itineraries %s and %s (%s)"
                % (idx, owner[idx], w, what))
        assigned[w] = idx
        owner[idx] = w

    def land(t_trace: Angle, w: Word, pot: float, sched: RaySchedule) -> None:
        with warnings.catch_warnings():
            warnings.filterwarnings("ignore", message=".*landing.*",
                                    category=RuntimeWarning)
            try:
                ray = trace_dynamical_ray(c, t_trace, target_potential=pot,
                                          schedule=sched)
            except Bifurcation:
                # a combinatorially landing ray can still brush an iterated
                # preimage of the critical point closer than the default
                # tolerance; a true crash hits it exactly, so retry tight
                ray = trace_dynamical_ray(c, t_trace, target_potential=pot,
                                          schedule=offset_schedule)
        idx = _land_to_root(d, n, c, ray.landing_estimate, roots, raw_guard,
                            "landing of dynamical ray %s" % (t_trace,))
        assign(w, idx, "ray %s" % (t_trace,))

    for t in _exact_period_angles(d, n):
        try:
            w = itinerary_of_angle(t, base_angle, n)
            if w.is_primitive():
                land(t, w, target_potential, schedule)
        except BoundaryHit:
            # the ray at t crashes into an iterated preimage of the
            # critical point; its one-sided limits land instead
            for side in (-1, 1):
                w = _sided_itinerary(t, base_angle, n, side)
                if not w.is_primitive():
                    continue  # the limit lands on a lower-period point
                t_off = Angle(t.value + side * side_offset, d)
                land(t_off, w, offset_potential, offset_schedule)

    # Several rays may co-land on one root (conjugate pairs do at real
    # parameters), which can starve whole shift orbits of period-n angles.
    # Such roots are landed by period-2n (or 3n) rays whose itinerary is
    # n-periodic; sweep those angles for exactly the missing words.
    missing = {w for w in _primitive_words(d, n) if w not in assigned}
    for rep in (2, 3):
        if not missing or d ** (rep * n) - 1 > 65536:
            break
        for t in _exact_period_angles(d, rep * n):
            if not missing:
                break
            try:
                itin = itinerary_of_angle(t, base_angle, rep * n)
            except BoundaryHit:
                continue
            w = Word(itin.digits[:n], d)
            if w not in missing or itin.digits != w.digits * rep:
                continue
            land(t, w, target_potential, schedule)
            missing.discard(w)

    if len(assigned) < len(roots):
        raise UnmatchedRoot(
            "only %d of %d exact-period-%d roots received a label at c=%s"
            % (len(assigned), len(roots), n, c))

    # dynamics consistency: f sends the root labeled w to the root labeled
    # by the shift of w -- an independent check on every single assignment
    for w, idx in assigned.items():
        image = roots[idx] ** d + c
        j = _match_index(image, roots, guard, "f-image of root %s" % (w,))
        if owner[j] != w.rotated(1):
            raise LabelConflict(
                "dynamics violates the labeling: f(root %s) matched root "
                "%s, expected %s" % (w, owner[j], w.rotated(1)))

    by_word = {w: complex(roots[idx]) for w, idx in assigned.items()}
    return RootLabeling(degree=d, period=n, c=c, base_angle=base_angle,
                        by_word=by_word)


# ---------------------------------------------------------------------------
# predictor-corrector continuation of the labeled configuration

def _newton_polish(d: int, n: int, c: complex, z: np.ndarray, tol: float):
    """Up to five Newton sweeps on f_c^n(z) = z; (z, converged)."""
    for _ in range(5):
        F, dFdz, _ = _orbit_arrays(d, c, z, n)
        with np.errstate(all="ignore"):
            step = F / dFdz
        if not np.all(np.isfinite(step)):
            return z, False
        z = z - step
        if float(np.max(np.abs(step))) <= tol:
            return z, True
    return z, False


def _continue_along(d: int, n: int, z0: np.ndarray,
                    path: Callable[[float], complex], base_steps: int,
                    schedule: MonodromySchedule, what: str,
                    recorder: Optional[list] = None) -> np.ndarray:
    """Continue the root vector along c = path(s), s from 0 to 1.

    Each step runs the tangent predictor plus a short Newton correction and
    is accepted only when Newton converged and no root moved further than
    match_factor times the previous minimum pairwise gap (so the
    point-to-point identification cannot jump between roots).  Failed steps
    are halved, up to schedule.max_refine times.
    """
    z = np.array(z0, dtype=complex)
    scale = 1.0 + float(np.abs(z).max())
    tol = schedule.newton_tol * scale
    s_prev = 0.0
    c_prev = path(0.0)
    if recorder is not None:
        recorder.append((0.0, c_prev, z.copy()))
    base_steps = max(1, base_steps)
    agenda = [((k + 1) / base_steps, 0) for k in reversed(range(base_steps))]
    while agenda:
        s, depth = agenda.pop()
        c_new = path(s)
        gap = _min_gap(z)
        F, dFdz, dFdc = _orbit_arrays(d, c_prev, z, n)
        with np.errstate(all="ignore"):
            dzdc = -dFdc / dFdz
        pred = np.where(np.isfinite(dzdc), z + dzdc * (c_new - c_prev), z)
        z_new, ok = _newton_polish(d, n, c_new, pred, tol)
        moved = float(np.max(np.abs(z_new - z))) if ok else math.inf
        if not ok or not moved < schedule.match_factor * gap:
            if depth >= schedule.max_refine:
                if not ok:
                    raise NewtonDivergence(
                        "%s: Newton stalled at s=%.6g (c=%s) after %d "
                        "halvings" % (what, s, c_new, depth))
                raise TrackingAmbiguous(
                    "%s: a root moved %.3g against a pairwise gap of %.3g "
                    "at s=%.6g even at the smallest step"
                    % (what, moved, gap, s))
            agenda.append((s, depth + 1))
            agenda.append((0.5 * (s_prev + s), depth + 1))
            continue
        z, s_prev, c_prev = z_new, s, c_new
        if recorder is not None:
            recorder.append((s, c_new, z.copy()))
    return z


def _polyline(nodes: Sequence[complex]) -> Tuple[Callable[[float], complex], float]:
    """Arc-length parameterization of a polyline, as path(s) with s in [0,1]."""
    pts = [complex(p) for p in nodes]
    if len(pts) < 2:
        raise PreconditionError("polyline needs at least two nodes")
    lengths = [abs(b - a) for a, b in zip(pts, pts[1:])]
    total = sum(lengths)
    if total == 0.0:
        return (lambda s: pts[0]), 0.0
    cum = [0.0]
    for ell in lengths:
        cum.append(cum[-1] + ell)

    def path(s: float) -> complex:
        x = min(max(s, 0.0), 1.0) * total
        for k, ell in enumerate(lengths):
            if x <= cum[k + 1] or k == len(lengths) - 1:
                u = 0.0 if ell == 0.0 else (x - cum[k]) / ell
                return pts[k] + u * (pts[k + 1] - pts[k])
        return pts[-1]

    return path, total


def transport_labels(labeling: RootLabeling, target: complex,
                     via: Sequence[complex] = (),
                     schedule: MonodromySchedule = DEFAULT_MONODROMY_SCHEDULE,
                     ) -> RootLabeling:
    """Continue a labeled configuration to another parameter.

    The path is the polyline labeling.c -> via... -> target; labels follow
    their roots.  The target must be reachable without period-n collisions
    on the way, otherwise continuation aborts (NewtonDivergence /
    TrackingAmbiguous).
    """
    words = labeling.words()
    nodes = [labeling.c, *via, complex(target)]
    path, length = _polyline(nodes)
    steps = max(schedule.base_steps, 4 * (len(nodes) - 1))
    z_end = _continue_along(labeling.degree, labeling.period,
                            labeling.root_array(), path, steps, schedule,
                            "transport to %s" % (target,))

    # shift-equivariance must survive the transport exactly
    tc = complex(target)
    guard = _MATCH_FACTOR * _min_gap(z_end)
    for k, w in enumerate(words):
        image = z_end[k] ** labeling.degree + tc
        j = int(np.argmin(np.abs(z_end - image)))
        if abs(z_end[j] - image) >= guard or words[j] != w.rotated(1):
            raise LabelConflict(
                "transport to %s broke the labeling: f(root %s) does not "
                "match the root labeled %s" % (target, w, w.rotated(1)))
    return RootLabeling(degree=labeling.degree, period=labeling.period,
                        c=tc, base_angle=labeling.base_angle,
                        by_word=dict(zip(words, map(complex, z_end))))


# ---------------------------------------------------------------------------
# loops and the observed permutation

def permutation_cycles(perm: Dict[Word, Word]) -> List[List[Word]]:
    """Nontrivial cycles, each starting at its smallest word, sorted."""
    if sorted(w.digits for w in perm) != sorted(w.digits for w in perm.values()):
        raise PreconditionError("mapping is not a permutation of its keys")
    cycles: List[List[Word]] = []
    seen = set()
    for w in sorted(perm, key=lambda u: u.digits):
        if w in seen or perm[w] == w:
            continue
        cycle = [w]
        seen.add(w)
        u = perm[w]
        while u != w:
            cycle.append(u)
            seen.add(u)
            u = perm[u]
        cycles.append(cycle)
    return cycles


@dataclass
class PermutationReport:
    """Observed vs predicted action of one parameter loop on labeled roots."""

    degree: int
    period: int
    center: complex
    base_point: complex
    radius: float
    turns: int
    labels: Dict[Word, complex]
    observed: Dict[Word, Word]
    predicted: Dict[Word, Word]
    match: bool
    move: Optional[MonodromyMove] = None
    paths: Dict[Word, List[Tuple[float, complex, complex]]] = field(
        default_factory=dict)

    def observed_cycles(self) -> List[List[Word]]:
        return permutation_cycles(self.observed)

    def predicted_cycles(self) -> List[List[Word]]:
        return permutation_cycles(self.predicted)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "period": self.period,
            "center": [self.center.real, self.center.imag],
            "base_point": [self.base_point.real, self.base_point.imag],
            "radius": self.radius,
            "turns": self.turns,
            "cycles": [[str(w) for w in cyc] for cyc in self.observed_cycles()],
            "predicted_cycles": [[str(w) for w in cyc]
                                 for cyc in self.predicted_cycles()],
            "match": self.match,
            "labels": {str(w): [z.real, z.imag]
                       for w, z in sorted(self.labels.items(),
                                          key=lambda kv: kv[0].digits)},
        }

    def path_csv(self, word: Word) -> str:
        """Tracked positions of one root along the loop, as CSV."""
        if word not in self.paths:
            raise PreconditionError("no tracked path for %s" % (word,))
        lines = ["s,c_re,c_im,re,im"]
        for s, c, z in self.paths[word]:
            lines.append("%.17g,%.17g,%.17g,%.17g,%.17g"
                         % (s, c.real, c.imag, z.real, z.imag))
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=8)
def _parabolic_roots(d: int, n: int) -> Tuple[complex, ...]:
    return tuple(parabolic_parameters(d, n).roots)


def _check_loop_disk(d: int, n: int, c0: complex, radius: float) -> None:
    """The loop disk may contain (a refinement of) its own center's
    parabolic parameter but no other one; checked when the exact parameter
    inventory is within budget, skipped otherwise."""
    try:
        known = _parabolic_roots(d, n)
    except BudgetExceeded:
        return
    same = max(1e-5 * (1.0 + abs(c0)), 1e-3 * radius)
    bad = [r for r in known if same <= abs(r - c0) < radius]
    if bad:
        raise PreconditionError(
            "loop disk around %s (radius %g) contains other period-%d "
            "parabolic parameters: %s" % (c0, radius, n, bad))


def loop_permutation(c0: complex, radius: float, labeling: RootLabeling,
                     turns: int = 1,
                     predicted: Optional[MonodromyMove] = None,
                     path_nodes: Sequence[complex] = (),
                     schedule: MonodromySchedule = DEFAULT_MONODROMY_SCHEDULE,
                     check_disk: bool = True) -> PermutationReport:
    """Continue the labeled roots around the circle of `radius` about c0.

    The configuration is transported from the labeling's parameter to the
    circle first (through `path_nodes` if given -- typically samples of the
    parameter ray, the collision-free corridor), then around the circle
    `turns` times (negative = clockwise).  Returns the end-to-start
    permutation together with the prediction of `predicted` (None predicts
    the identity, the right expectation for a loop around a generic
    center).
    """
    d, n = labeling.degree, labeling.period
    c0 = complex(c0)
    if not radius > 0.0:
        raise PreconditionError("loop radius must be positive")
    if turns == 0:
        raise PreconditionError("turns must be a nonzero integer")
    if check_disk:
        _check_loop_disk(d, n, c0, radius)

    ref = complex(path_nodes[-1]) if len(path_nodes) else labeling.c
    if not abs(ref - c0) > radius:
        raise PreconditionError(
            "labeling/approach point %s already lies inside the loop disk"
            % (ref,))
    u = (ref - c0) / abs(ref - c0)
    base_point = c0 + radius * u

    keep = [p for p in path_nodes if abs(complex(p) - c0) > 1.02 * radius]
    at_base = transport_labels(labeling, base_point, via=keep,
                               schedule=schedule)

    words = at_base.words()
    z0 = at_base.root_array()
    phase0 = math.atan2(u.imag, u.real)

    def circle(s: float) -> complex:
        ang = phase0 + 2.0 * math.pi * turns * s
        return c0 + radius * complex(math.cos(ang), math.sin(ang))

    record: List[Tuple[float, complex, np.ndarray]] = []
    z_end = _continue_along(d, n, z0, circle,
                            schedule.base_steps * abs(turns), schedule,
                            "loop around %s" % (c0,), recorder=record)

    gap = _min_gap(z0)
    observed: Dict[Word, Word] = {}
    hit: Dict[int, Word] = {}
    for i, w in enumerate(words):
        j = _match_index(z_end[i], z0, _MATCH_FACTOR * gap,
                         "continued root %s after the loop" % (w,))
        if j in hit:
            raise UnmatchedRoot(
                "roots %s and %s both ended on the start root %s"
                % (hit[j], w, words[j]))
        hit[j] = w
        observed[w] = words[j]

    move_perm = predicted.permutation() if predicted is not None else {}
    predicted_full = {w: move_perm.get(w, w) for w in words}

    paths = {w: [(s, c, complex(zvec[i])) for s, c, zvec in record]
             for i, w in enumerate(words)}
    return PermutationReport(
        degree=d, period=n, center=c0, base_point=base_point, radius=radius,
        turns=turns, labels=dict(at_base.by_word), observed=observed,
        predicted=predicted_full, match=observed == predicted_full,
        move=predicted, paths=paths)


# ---------------------------------------------------------------------------
# the full pipeline for a loop around a parameter-ray landing point

def expected_move(theta: Angle, turns: int = 1) -> MonodromyMove:
    """The engine's prediction for a loop around the landing point of theta."""
    cls = classify_angle(theta)
    if cls.verdict == Verdict.SPECIAL_SATELLITE:
        return special_cycle_move(theta.degree, exact_period(theta),
                                  winding=turns)
    if cls.verdict == Verdict.PRIMITIVE_CERTIFIED:
        return replace(transposition_move(theta), winding=turns)
    raise PreconditionError(
        "%s classifies as %s; no loop prediction is available for a plain "
        "satellite candidate" % (theta, cls.verdict.value))


def monodromy_check(theta: Angle, radius: float = 1e-2,
                    turns: int = 1,
                    base_potential: float = 0.25,
                    target_potential: float = 1e-10,
                    schedule: MonodromySchedule = DEFAULT_MONODROMY_SCHEDULE,
                    ray_schedule: RaySchedule = DEFAULT_RAY_SCHEDULE,
                    ) -> PermutationReport:
    """Trace theta's parameter ray, loop around its landing point, compare.

    The landing estimate is polished to the exact parabolic parameter, the
    roots are labeled on the ray at `base_potential`, transported down the
    ray's own samples (the collision-free corridor into the landing
    point's neighborhood), and continued `turns` times around the circle.
    """
    n = exact_period(theta)
    predicted = expected_move(theta, turns)

    ray = trace_parameter_ray(theta, target_potential=target_potential,
                              schedule=ray_schedule)
    c0, _z0, _res = refine_parabolic_from_c(theta.degree,
                                            ray.landing_estimate, n)

    start = 0
    while (start < len(ray.samples) - 1
           and ray.potentials[start] > base_potential):
        start += 1
    base_c = ray.samples[start]

    corridor = [z for z in ray.samples[start + 1:]
                if abs(z - c0) > max(2.5 * radius, 1e-12)]

    labeling = label_roots(base_c, theta, n, schedule=ray_schedule)
    return loop_permutation(c0, radius, labeling, turns=turns,
                            predicted=predicted, path_nodes=corridor,
                            schedule=schedule)
