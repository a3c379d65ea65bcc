"""Meromorphic quadratic differentials with at most double poles, and the
transfer (pushforward) operator of z^d + c acting on them.

A differential is a finite sum of terms

    c2/(z - a)^2 + c1/(z - a)      (times dz^2)

The pushforward under f has closed forms: a simple pole at `a` moves to a
simple pole at f(a) scaled by 1/f'(a), balanced by an opposite simple pole
at the critical value c; a double pole keeps strength at f(a) and sheds a
simple-pole correction (d-1)/(a f'(a)); the differential dz^2/z is
annihilated.  A brute-force preimage-sum evaluator is kept alongside as an
independent check -- the two routes are compared in the tests and in the
certificates, never merged.
"""

from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .dynpoly import dPn_dc, multiplier, orbit_points
from .errors import (
    BudgetExceeded,
    ConvergenceError,
    DoublePoleAtZero,
    DoublePoleInRegion,
    MultiplierOne,
    NearCriticalValue,
    NotParabolic,
    NotPeriodic,
    PoleCollision,
    PreconditionError,
    RegionNotCompactlyContained,
)

MERGE_TOL = 1e-9

__all__ = [
    "QDTerm",
    "QuadDiff",
    "MuTuple",
    "pushforward",
    "pushforward_bruteforce",
    "qd_norm",
    "NormResult",
    "contraction_check",
    "ContractionReport",
    "case2_certificate",
    "Case2Certificate",
    "double_pole_certificate",
    "DoublePoleCertificate",
]


@dataclass(frozen=True)
class QDTerm:
    pole: complex
    c2: complex  # coefficient of (z-a)^-2
    c1: complex  # coefficient of (z-a)^-1

    def to_json(self) -> dict:
        return {"a": [self.pole.real, self.pole.imag],
                "c2": [self.c2.real, self.c2.imag],
                "c1": [self.c1.real, self.c1.imag]}


class QuadDiff:
    """An immutable sum of double/simple pole terms (times dz^2).

    Terms whose poles agree to within MERGE_TOL are merged on construction,
    and terms whose coefficients both vanish are dropped, so the zero
    differential is the empty sum.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable = ()):
        merged: List[List[complex]] = []
        for item in terms:
            if isinstance(item, QDTerm):
                a, c2, c1 = item.pole, item.c2, item.c1
            else:
                a, c2, c1 = item
            a, c2, c1 = complex(a), complex(c2), complex(c1)
            for slot in merged:
                if abs(slot[0] - a) <= MERGE_TOL * (1.0 + abs(a)):
                    slot[1] += c2
                    slot[2] += c1
                    break
            else:
                merged.append([a, c2, c1])
        kept = [QDTerm(a, c2, c1) for a, c2, c1 in merged
                if abs(c2) > 1e-14 or abs(c1) > 1e-14]
        kept.sort(key=lambda t: (t.pole.real, t.pole.imag))
        self.terms = tuple(kept)

    def __repr__(self) -> str:
        return "QuadDiff(%r)" % (self.terms,)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadDiff) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, z: complex) -> complex:
        out = 0j
        for t in self.terms:
            w = z - t.pole
            out += t.c2 / (w * w) + t.c1 / w
        return out

    def scaled(self, k: complex) -> "QuadDiff":
        return QuadDiff((t.pole, k * t.c2, k * t.c1) for t in self.terms)

    def plus(self, other: "QuadDiff") -> "QuadDiff":
        return QuadDiff([(t.pole, t.c2, t.c1) for t in self.terms] +
                        [(t.pole, t.c2, t.c1) for t in other.terms])

    def max_coeff_distance(self, other: "QuadDiff") -> float:
        """Largest coefficient gap after matching poles across the two sums."""
        theirs = list(other.terms)
        worst = 0.0
        for t in self.terms:
            match = None
            for s in theirs:
                if abs(s.pole - t.pole) <= 1e-7 * (1.0 + abs(t.pole)):
                    match = s
                    break
            if match is None:
                worst = max(worst, abs(t.c2), abs(t.c1))
            else:
                theirs.remove(match)
                worst = max(worst, abs(t.c2 - match.c2), abs(t.c1 - match.c1))
        for s in theirs:
            worst = max(worst, abs(s.c2), abs(s.c1))
        return worst

    def to_json(self) -> list:
        return [t.to_json() for t in self.terms]


def pushforward(d: int, c: complex, q: QuadDiff) -> QuadDiff:
    """Closed-form transfer of q under z -> z^d + c.

    A pole at the critical point is only allowed as the simple pole of
    dz^2/z (which pushes to zero); a double pole there is outside the
    supported shape.
    """
    if d < 2:
        raise PreconditionError("degree must be >= 2")
    out: List[Tuple[complex, complex, complex]] = []
    for t in q.terms:
        a = t.pole
        if abs(a) <= MERGE_TOL:
            if abs(t.c2) > 1e-14:
                raise DoublePoleAtZero(
                    "pushforward undefined for a double pole at the critical point")
            continue  # f_*(dz^2/z) = 0
        fp = d * a ** (d - 1)
        if abs(fp) < 1e-12:
            raise PoleCollision("pole %s is numerically critical" % (a,))
        image = a ** d + c
        simple = (t.c1 - t.c2 * (d - 1) / a) / fp
        out.append((image, t.c2, simple))
        out.append((c, 0j, -simple))
    return QuadDiff(out)


def pushforward_bruteforce(d: int, c: complex, q: QuadDiff, z: complex,
                           tol: float = 1e-9) -> complex:
    """(f_* q)(z) as the raw sum over the d preimages of z.

    Independent of the closed forms above; used to cross-check them.
    """
    if d < 2:
        raise PreconditionError("degree must be >= 2")
    w = z - c
    if abs(w) < tol:
        raise NearCriticalValue(
            "point too close to the critical value for stable preimages")
    r, phi = cmath.polar(w)
    root = r ** (1.0 / d) * cmath.exp(1j * phi / d)
    total = 0j
    for j in range(d):
        zeta = root * cmath.exp(2j * math.pi * j / d)
        fp = d * zeta ** (d - 1)
        total += q(zeta) / (fp * fp)
    return total


# ---------------------------------------------------------------------------
# L^1 norms over disks

def _inv_r_quarter(x: float, y: float) -> float:
    # integral of 1/sqrt(u^2+v^2) over [0,x] x [0,y]
    if x <= 0.0 or y <= 0.0:
        return 0.0
    return x * math.asinh(y / x) + y * math.asinh(x / y)


def _inv_r_rect(x0: float, x1: float, y0: float, y1: float) -> float:
    """Exact integral of 1/|(u,v)| over [x0,x1] x [y0,y1] (pole at origin)."""
    if x0 > x1 or y0 > y1:
        raise PreconditionError("degenerate rectangle")
    xs = sorted({x0, x1} | ({0.0} if x0 < 0.0 < x1 else set()))
    ys = sorted({y0, y1} | ({0.0} if y0 < 0.0 < y1 else set()))
    total = 0.0
    for u0, u1 in zip(xs, xs[1:]):
        for v0, v1 in zip(ys, ys[1:]):
            a0, a1 = sorted((abs(u0), abs(u1)))
            b0, b1 = sorted((abs(v0), abs(v1)))
            total += (_inv_r_quarter(a1, b1) - _inv_r_quarter(a0, b1)
                      - _inv_r_quarter(a1, b0) + _inv_r_quarter(a0, b0))
    return total


def _disk_rect_overlap(R: float, x0: float, x1: float,
                       y0: float, y1: float) -> float:
    """Exact area of [x0,x1] x [y0,y1] intersected with the disk |z| < R."""

    def corner(x: float, y: float) -> float:
        sx = 1.0 if x >= 0 else -1.0
        sy = 1.0 if y >= 0 else -1.0
        x, y = min(abs(x), R), min(abs(y), R)
        u_star = math.sqrt(max(R * R - y * y, 0.0))
        if x <= u_star:
            a = x * y
        else:
            a = (u_star * y
                 + 0.5 * (x * math.sqrt(max(R * R - x * x, 0.0))
                          + R * R * math.asin(x / R))
                 - 0.5 * (u_star * y + R * R * math.asin(u_star / R)))
        return sx * sy * a

    return corner(x1, y1) - corner(x0, y1) - corner(x1, y0) + corner(x0, y0)


@dataclass
class NormResult:
    value: float
    error_estimate: float
    cells: int

    def to_json(self) -> dict:
        return {"value": self.value, "error_estimate": self.error_estimate,
                "cells": self.cells}


def _adaptive_norm(q: QuadDiff, half: float, classify, member,
                   rel_tol: float, max_cells: int,
                   overlap=None) -> NormResult:
    """Integrate |q| over a region inside the box [-half,half]^2.

    `classify(x0,x1,y0,y1)` must answer "inside"/"outside"/"straddle"
    conservatively; `member(x,y)` is the point test used to weight leaf
    cells on the region boundary, and `overlap` (when available) returns
    the exact cell/region intersection area, which makes boundary cells
    converge fast.  Cells containing a simple pole use the exact
    rectangle integral of |c1|/r plus a sampled bounded remainder.
    """

    simple_poles = [t for t in q.terms if abs(t.c1) > 1e-14]

    def smooth_abs(z: complex, skip: QDTerm) -> float:
        # |q| minus its leading 1/r singularity at skip's pole: bounded
        # near the pole, so plain sampling integrates it reliably.
        r = abs(z - skip.pole)
        if r < 1e-15:
            return 0.0
        return abs(q(z)) - abs(skip.c1) / r

    def estimate(x0, x1, y0, y1):
        """(value, error) for one fully-inside cell.

        The 1/r part of the nearest simple pole is always integrated by
        the exact rectangle formula, so a single-pole differential costs
        nothing except region-boundary cells.
        """
        area = (x1 - x0) * (y1 - y0)
        xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        mid = complex(xm, ym)
        qx, qy = 0.25 * (x1 - x0), 0.25 * (y1 - y0)
        pts = [complex(xm - qx, ym - qy), complex(xm + qx, ym - qy),
               complex(xm - qx, ym + qy), complex(xm + qx, ym + qy)]
        t = min(simple_poles, key=lambda s: abs(mid - s.pole)) \
            if simple_poles else None
        if t is not None:
            base = abs(t.c1) * _inv_r_rect(x0 - t.pole.real, x1 - t.pole.real,
                                           y0 - t.pole.imag, y1 - t.pole.imag)
            vals = [smooth_abs(z, t) for z in pts]
            coarse = smooth_abs(mid, t) if abs(mid - t.pole) > 1e-12 \
                else sum(vals) / 4.0
        else:
            base = 0.0
            vals = [abs(q(z)) for z in pts]
            coarse = abs(q(mid))
        fine = sum(vals) / 4.0
        value = base + fine * area
        err = abs(fine - coarse) * area
        return value, err

    def coverage(x0, x1, y0, y1) -> float:
        inside = 0
        for i in range(8):
            for j in range(8):
                x = x0 + (i + 0.5) * (x1 - x0) / 8.0
                y = y0 + (j + 0.5) * (y1 - y0) / 8.0
                if member(x, y):
                    inside += 1
        return inside / 64.0

    def boundary_estimate(x0, x1, y0, y1):
        """(value, error) for a cell crossing the region boundary, or None
        if the overlap turns out to be empty."""
        area = (x1 - x0) * (y1 - y0)
        if overlap is not None:
            ov = overlap(x0, x1, y0, y1)
            quant = 0.0
        else:
            ov = coverage(x0, x1, y0, y1) * area
            quant = 0.2 * area  # pixel-coverage quantization allowance
        if ov <= 0.0:
            return None
        xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        qx, qy = 0.25 * (x1 - x0), 0.25 * (y1 - y0)
        samples = [complex(xm, ym),
                   complex(xm - qx, ym - qy), complex(xm + qx, ym - qy),
                   complex(xm - qx, ym + qy), complex(xm + qx, ym + qy)]
        vals = [abs(q(z)) for z in samples if member(z.real, z.imag)]
        if not vals:
            vals = [abs(q(complex(xm, ym)))]
        mean = sum(vals) / len(vals)
        spread = (max(vals) - min(vals)) if len(vals) > 1 else mean
        value = ov * mean
        err = ov * spread + quant * mean + 1e-300
        return value, err

    heap: List = []
    counter = 0
    total = 0.0
    total_err = 0.0

    def push(x0, x1, y0, y1):
        nonlocal counter, total, total_err
        kind = classify(x0, x1, y0, y1)
        if kind == "outside":
            return
        if kind == "inside":
            value, err = estimate(x0, x1, y0, y1)
        else:
            got = boundary_estimate(x0, x1, y0, y1)
            if got is None:
                return
            value, err = got
        counter += 1
        total += value
        total_err += err
        heapq.heappush(heap, (-err, counter, x0, x1, y0, y1, value, err))

    push(-half, 0.0, -half, 0.0)
    push(0.0, half, -half, 0.0)
    push(-half, 0.0, 0.0, half)
    push(0.0, half, 0.0, half)

    while heap and total_err > rel_tol * max(abs(total), 1e-300):
        if counter > max_cells:
            raise BudgetExceeded(
                "norm integration exceeded %d cells" % max_cells)
        _, _, x0, x1, y0, y1, value, err = heapq.heappop(heap)
        total -= value
        total_err -= err
        if x1 - x0 < 1e-12 * half:
            total += value  # cannot refine further; keep as-is
            continue
        xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        push(x0, xm, y0, ym)
        push(xm, x1, y0, ym)
        push(x0, xm, ym, y1)
        push(xm, x1, ym, y1)
    return NormResult(total, total_err, counter)


def _cell_radius_range(x0, x1, y0, y1) -> Tuple[float, float]:
    corners = [(x0, y0), (x1, y0), (x0, y1), (x1, y1)]
    rmax = max(math.hypot(x, y) for x, y in corners)
    dx = max(x0, 0.0, -x1)
    dy = max(y0, 0.0, -y1)
    return math.hypot(dx, dy), rmax


def qd_norm(q: QuadDiff, radius: float, inner_radius: float = 0.0,
            rel_tol: float = 1e-4, max_cells: int = 400_000) -> NormResult:
    """L^1 norm of |q| over the disk |z| < radius (or the annulus
    inner_radius < |z| < radius when inner_radius > 0).

    Double poles inside the region make the norm infinite and are
    rejected up front.
    """
    if radius <= 0 or inner_radius < 0 or inner_radius >= radius:
        raise PreconditionError("need 0 <= inner_radius < radius")
    for t in q.terms:
        if abs(t.c2) > 1e-14 and \
                inner_radius - MERGE_TOL < abs(t.pole) < radius + MERGE_TOL:
            raise DoublePoleInRegion(
                "double pole at %s lies inside the region" % (t.pole,))
    if q.is_zero():
        return NormResult(0.0, 0.0, 0)

    def classify(x0, x1, y0, y1) -> str:
        rmin, rmax = _cell_radius_range(x0, x1, y0, y1)
        if rmin >= radius or rmax <= inner_radius:
            return "outside"
        if rmax <= radius and rmin >= inner_radius:
            return "inside"
        return "straddle"

    def member(x, y) -> bool:
        rr = x * x + y * y
        return inner_radius * inner_radius < rr < radius * radius

    def overlap(x0, x1, y0, y1) -> float:
        ov = _disk_rect_overlap(radius, x0, x1, y0, y1)
        if inner_radius > 0.0:
            ov -= _disk_rect_overlap(inner_radius, x0, x1, y0, y1)
        return ov

    return _adaptive_norm(q, radius, classify, member, rel_tol, max_cells,
                          overlap=overlap)


def _preimage_norm(q: QuadDiff, d: int, c: complex, radius: float,
                   rel_tol: float = 1e-4,
                   max_cells: int = 400_000) -> NormResult:
    """L^1 norm of |q| over f^{-1}(disk of the given radius), f = z^d + c.

    Cell classification uses the rigorous bounds |z|^d - |c| <= |f(z)|
    <= |z|^d + |c| (and |c| - |z|^d from below); cells the bounds cannot
    settle are refined and finally sampled.
    """
    ac = abs(c)
    half = (radius + ac) ** (1.0 / d)  # preimage fits in this disk
    for t in q.terms:
        if abs(t.c2) > 1e-14 and abs(t.pole ** d + c) < radius + MERGE_TOL:
            raise DoublePoleInRegion(
                "double pole at %s lies inside the preimage region" % (t.pole,))
    if q.is_zero():
        return NormResult(0.0, 0.0, 0)

    def classify(x0, x1, y0, y1) -> str:
        # |f| over the cell lies within max|f'| * (half diagonal) of the
        # midpoint value; this Lipschitz window shrinks with the cell,
        # unlike the coarse |z|^d +- |c| bounds, so classification always
        # resolves away from the region boundary itself.
        rmin, rmax = _cell_radius_range(x0, x1, y0, y1)
        mid = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
        fm = abs(mid ** d + c)
        slack = d * rmax ** (d - 1) * 0.5 * math.hypot(x1 - x0, y1 - y0)
        lo = max(rmin ** d - ac, ac - rmax ** d, fm - slack, 0.0)
        hi = min(rmax ** d + ac, fm + slack)
        if lo >= radius:
            return "outside"
        if hi <= radius:
            return "inside"
        return "straddle"

    def member(x, y) -> bool:
        return abs(complex(x, y) ** d + c) < radius

    return _adaptive_norm(q, half, classify, member, rel_tol, max_cells)


@dataclass
class ContractionReport:
    degree: int
    c: complex
    radius: float
    preimage_radius: float
    norm_outer: float          # ||Q|| over the disk of the given radius
    norm_preimage: float       # ||Q|| over f^{-1}(that disk)
    norm_pushforward: float    # ||f_* Q|| over the disk
    error_estimate: float

    def contracts(self) -> bool:
        eps = self.error_estimate
        return (self.norm_pushforward <= self.norm_preimage + eps
                and self.norm_preimage < self.norm_outer - eps)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "c": [self.c.real, self.c.imag],
            "radius": self.radius,
            "preimage_radius": self.preimage_radius,
            "norm_outer": self.norm_outer,
            "norm_preimage": self.norm_preimage,
            "norm_pushforward": self.norm_pushforward,
            "error_estimate": self.error_estimate,
            "contracts": self.contracts(),
        }


def contraction_check(d: int, c: complex, q: QuadDiff, radius: float,
                      rel_tol: float = 1e-3) -> ContractionReport:
    """Verify the contraction chain ||f_*Q||_V <= ||Q||_U < ||Q||_V.

    V is the disk |z| < radius and U = f^{-1}(V); the precondition
    radius > 1 + |c| makes U compactly contained in V (the preimage sits
    in the disk of radius (radius+|c|)^(1/d) < radius).  Q must carry at
    least one simple pole: the chain is vacuous for Q = 0.
    """
    if d < 2:
        raise PreconditionError("degree must be >= 2")
    if q.is_zero():
        raise PreconditionError("contraction chain is vacuous for Q = 0")
    if radius <= 1.0 + abs(c):
        raise RegionNotCompactlyContained(
            "need radius > 1 + |c| so the preimage is compactly contained")
    pre_radius = (radius + abs(c)) ** (1.0 / d)
    push = pushforward(d, c, q)
    n_outer = qd_norm(q, radius, rel_tol=rel_tol)
    n_pre = _preimage_norm(q, d, c, radius, rel_tol=rel_tol)
    n_push = qd_norm(push, radius, rel_tol=rel_tol)
    err = n_outer.error_estimate + n_pre.error_estimate + n_push.error_estimate
    return ContractionReport(
        degree=d, c=complex(c), radius=radius, preimage_radius=pre_radius,
        norm_outer=n_outer.value, norm_preimage=n_pre.value,
        norm_pushforward=n_push.value, error_estimate=err)


# ---------------------------------------------------------------------------
# invariant-differential certificates at (and near) multiplier-one orbits

@dataclass
class Case2Certificate:
    degree: int
    c: complex
    orbit: List[complex]
    dP_dc: complex
    differential: QuadDiff
    pushed: QuadDiff
    expected: QuadDiff
    residual: float

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "c": [self.c.real, self.c.imag],
            "orbit": [[w.real, w.imag] for w in self.orbit],
            "dP_dc": [self.dP_dc.real, self.dP_dc.imag],
            "differential": self.differential.to_json(),
            "pushed": self.pushed.to_json(),
            "expected": self.expected.to_json(),
            "residual": self.residual,
        }


def case2_certificate(d: int, c: complex, z: complex, n: int,
                      tol: float = 1e-8) -> Case2Certificate:
    """Build the invariant differential of a multiplier-one orbit and verify

        f_* Q = Q - (dP_n/dc) dz^2/(z - c)

    term by term.  Q puts weight rho_k = delta_(n-1)...delta_k on the
    orbit point z_k (deltas are the one-step multipliers); pushing forward
    telescopes those weights one step and the leftover collects exactly
    the parameter derivative of the return map on the simple pole at the
    critical value.  When orbit points coincide (a degenerate orbit of
    lower exact period) the colliding weights merge and may cancel to the
    zero differential, in which case the identity forces dP_n/dc = 0.
    """
    pts = orbit_points(d, c, z, n)
    scale = 1.0 + abs(c)
    back = pts[-1] ** d + c
    if abs(back - z) > 1e-6 * scale:
        raise NotPeriodic("orbit does not close up after %d steps" % n)
    rho = multiplier(d, c, z, n)
    if abs(rho - 1.0) > tol:
        raise NotParabolic("orbit multiplier %s is not 1" % (rho,))
    deltas = [d * w ** (d - 1) for w in pts]
    weights = []
    for k in range(n):
        w = 1.0 + 0j
        for j in range(k, n):
            w *= deltas[j]
        weights.append(w)
    q = QuadDiff((pts[k], 0j, weights[k]) for k in range(n))
    pushed = pushforward(d, c, q)
    dP = dPn_dc(d, c, z, n)
    expected = q.plus(QuadDiff([(c, 0j, -dP)]))
    residual = pushed.max_coeff_distance(expected)
    return Case2Certificate(degree=d, c=complex(c), orbit=pts, dP_dc=dP,
                            differential=q, pushed=pushed, expected=expected,
                            residual=residual)


@dataclass(frozen=True)
class MuTuple:
    """Simple-pole weights of the double-pole invariant differential.

    Valid tuples satisfy mu_(k+1) = mu_k/(d z_k^(d-1)) - (d-1)/(d z_k^d)
    cyclically around the orbit; `recursion_residual` measures the worst
    relative defect.
    """

    values: Tuple[complex, ...]

    def recursion_residual(self, d: int, orbit: Sequence[complex]) -> float:
        m = len(self.values)
        worst = 0.0
        for k in range(m):
            z_k = orbit[k]
            nxt = self.values[k] / (d * z_k ** (d - 1)) \
                - (d - 1) / (d * z_k ** d)
            target = self.values[(k + 1) % m]
            worst = max(worst, abs(nxt - target) / (1.0 + abs(target)))
        return worst

    def total(self) -> complex:
        return sum(self.values)

    def to_json(self) -> list:
        return [[m.real, m.imag] for m in self.values]


@dataclass
class DoublePoleCertificate:
    degree: int
    c: complex
    orbit: List[complex]
    rho: complex
    mu: MuTuple
    sum_mu: complex
    log_derivative: complex   # d(log rho)/dc by finite differences
    rho_dot: complex          # d(rho)/dc from the same route
    differential: QuadDiff
    pushed: QuadDiff
    expected: QuadDiff
    identity_residual: float
    derivative_residual: float

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "c": [self.c.real, self.c.imag],
            "orbit": [[w.real, w.imag] for w in self.orbit],
            "rho": [self.rho.real, self.rho.imag],
            "mu": self.mu.to_json(),
            "sum_mu": [self.sum_mu.real, self.sum_mu.imag],
            "log_derivative": [self.log_derivative.real,
                               self.log_derivative.imag],
            "rho_dot": [self.rho_dot.real, self.rho_dot.imag],
            "identity_residual": self.identity_residual,
            "derivative_residual": self.derivative_residual,
        }


def _continued_multiplier(d: int, c: complex, z_seed: complex, n: int) -> complex:
    """Multiplier of the period-n orbit continued from z_seed at this c."""
    z = z_seed
    for _ in range(60):
        pts = orbit_points(d, c, z, n)
        val = pts[-1] ** d + c - z
        deriv = 1.0 + 0j
        for w in pts:
            deriv *= d * w ** (d - 1)
        deriv -= 1.0
        if abs(deriv) < 1e-14:
            raise ConvergenceError("orbit continuation hit multiplier one")
        step = val / deriv
        z -= step
        if abs(step) < 1e-14 * (1.0 + abs(z)):
            break
    return multiplier(d, c, z, n)


def double_pole_certificate(d: int, c: complex, z: complex, n: int,
                            fd_step: float = 1e-6) -> DoublePoleCertificate:
    """Invariant differential with double poles along a non-parabolic orbit.

    The mu-weights obey mu_(k+1) = mu_k/delta_k - (d-1)/(d z_k^d) around
    the orbit; periodicity pins mu_0 because the homogeneous factor around
    the loop is 1/rho != 1 (the system degenerates as rho -> 1, hence
    the MultiplierOne guard).  The certificate verifies

        f_* Q = Q - (sum_k mu_k) dz^2/(z - c),   sum_k mu_k = rho'/rho

    where rho'/rho is computed independently by central differences of
    the multiplier along the Newton-continued orbit branch (Richardson-
    extrapolated) -- two fully independent routes.
    """
    pts = orbit_points(d, c, z, n)
    scale = 1.0 + abs(c)
    back = pts[-1] ** d + c
    if abs(back - z) > 1e-8 * scale:
        raise NotPeriodic("orbit does not close up after %d steps" % n)
    for i in range(n):
        if abs(pts[i]) < 1e-8:
            raise DoublePoleAtZero("orbit passes through the critical point")
        for j in range(i + 1, n):
            if abs(pts[i] - pts[j]) < 1e-8 * scale:
                raise PoleCollision("orbit points %d and %d coincide" % (i, j))
    rho = multiplier(d, c, z, n)
    if abs(rho - 1.0) < 1e-6:
        raise MultiplierOne(
            "multiplier too close to 1; the mu system is singular")
    deltas = [d * w ** (d - 1) for w in pts]
    # run the affine recursion once from 0 to read off its inhomogeneous
    # part, then solve the fixed-point (periodicity) condition for mu_0
    b = 0j
    A = 1.0 + 0j
    for k in range(n):
        b = b / deltas[k] - (d - 1) / (d * pts[k] ** d)
        A = A / deltas[k]
    mu0 = b / (1.0 - A)
    values = [mu0]
    for k in range(n - 1):
        values.append(values[-1] / deltas[k] - (d - 1) / (d * pts[k] ** d))
    mu = MuTuple(tuple(values))
    if mu.recursion_residual(d, pts) > 1e-10:
        raise ConvergenceError("mu recursion failed to close up")
    q = QuadDiff((pts[k], 1.0 + 0j, values[k]) for k in range(n))
    pushed = pushforward(d, c, q)
    total_mu = mu.total()
    expected = q.plus(QuadDiff([(c, 0j, -total_mu)]))
    identity_residual = pushed.max_coeff_distance(expected)

    def log_rho(cc: complex) -> complex:
        return cmath.log(_continued_multiplier(d, cc, z, n) / rho)

    h = fd_step * scale
    d1 = (log_rho(c + h) - log_rho(c - h)) / (2.0 * h)
    d2 = (log_rho(c + h / 2.0) - log_rho(c - h / 2.0)) / h
    log_derivative = (4.0 * d2 - d1) / 3.0
    derivative_residual = abs(total_mu - log_derivative)
    return DoublePoleCertificate(
        degree=d, c=complex(c), orbit=pts, rho=rho, mu=mu,
        sum_mu=total_mu, log_derivative=log_derivative,
        rho_dot=log_derivative * rho,
        differential=q, pushed=pushed, expected=expected,
        identity_residual=identity_residual,
        derivative_residual=derivative_residual)
