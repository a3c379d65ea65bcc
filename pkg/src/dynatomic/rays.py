"""External-ray tracing for z -> z^d + c in the dynamical and parameter planes.

Near infinity every map f_c(z) = z^d + c is conjugate to w -> w^d via the
Boettcher coordinate phi_c, and the external ray at angle t is the
phi_c-preimage of the straight spoke {r * e^(2 pi i t) : r > 1}.  Rays are
parameterised by the potential G = log|phi_c| and traced down a geometric
ladder of potentials.

Evaluating phi_c close to the Julia set is hopeless (the product expansion
only converges in the far zone), so each rung of the ladder carries the whole
pullback tower

    z_0 = psi_c(exp(d^n G + 2 pi i d^n t)),    z_j^d + c = z_{j-1},

whose bottom z_n is the ray point at potential G.  The top lives in the far
zone, where the inverse coordinate psi_c is computed stably from the product
form and the angle multiplication d^n t (mod 1) is exact rational arithmetic;
every level below takes the d-th root nearest the previous rung's point at
the same level, so the branch is pinned by continuity and never re-derived
from floating-point winding.  Pulling back contracts errors (no level of an
escaping tower expands them), which keeps arbitrarily deep rungs stable in
double precision; Newton on the forward orbit f^n would instead have to
separate roots that cluster at spacing ~1/|(f^n)'| and loses the branch once
that spacing falls below the continuation step.

Parameter rays run the same ladder for c -> phi_c(c), a conformal
isomorphism from the complement of the degree-d Multibrot set onto the
complement of the closed unit disk.  Each rung freezes the far-zone anchor,
Newton-solves tower_bottom(c) = c with the tower differentiated in c by the
backward recursion, and re-freezes the anchor until the pair is
self-consistent.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import numpy as np

from .angles import Angle
from .config import DEFAULT_RAY_SCHEDULE, RaySchedule
from .errors import (Bifurcation, ConvergenceError, NewtonDivergence,
                     PreconditionError, ZeroAngle)

TWO_PI = 2.0 * math.pi

# Extra potential (beyond log(2+|c|)) required before the Boettcher product
# is trusted; at this margin the first factor satisfies |c/z^d| < e^-2.
_FAR_MARGIN = 1.0


class _StepFail(Exception):
    """Internal: one ladder rung did not converge; the caller subdivides."""


def _far_potential(c: complex) -> float:
    return math.log(2.0 + abs(c)) + _FAR_MARGIN


def _bottcher(d: int, c: complex, z: complex) -> complex:
    """phi_c(z) for z in the far zone, via the convergent product form.

    phi_c(z) = z * prod_k (1 + c / y_k^d)^(d^-(k+1)),  y_k = f_c^k(z).

    Raises _StepFail if z is too close in for the expansion to apply.
    """
    if z == 0:
        raise _StepFail("Boettcher product at the origin")
    ac = abs(c)
    w = complex(1.0)
    y = z
    p = 1.0 / d
    for _ in range(600):
        ay = abs(y)
        if ay == 0.0:
            raise _StepFail("orbit hit the origin inside the product")
        # once c/y^d underflows relative precision the remaining factors are 1
        if ac == 0.0 or d * math.log(ay) > min(700.0, math.log(ac) + 45.0):
            break
        yd = y ** d
        u = c / yd
        if abs(u) > 0.5:
            raise _StepFail("not in the far zone (|c/z^d| = %.3g)" % abs(u))
        w *= cmath.exp(p * cmath.log(1.0 + u))
        y = yd + c
        p /= d
    return z * w


def escape_potential(d: int, c: complex, z: complex, maxiter: int = 4096) -> float:
    """Green's function log|phi_c(z)| of an escaping point z.

    Raises ConvergenceError if the orbit has not reached the far zone after
    `maxiter` iterations (i.e. z appears to have bounded orbit).
    """
    if d < 2:
        raise PreconditionError("degree must be >= 2")
    far_radius = math.exp(_far_potential(c))
    y = complex(z)
    for k in range(maxiter):
        if abs(y) >= far_radius:
            return math.log(abs(_bottcher(d, c, y))) / d ** k
        y = y ** d + c
    raise ConvergenceError("orbit did not escape within %d iterations" % maxiter)


def _inverse_bottcher(d: int, c: complex, potential: float, angle: float) -> complex:
    """Solve phi_c(z) = exp(potential + 2 pi i angle) in the far zone."""
    w = cmath.exp(complex(potential, TWO_PI * angle))
    z = w - w ** (2 - d) * (c / d)
    for _ in range(48):
        r = w / _bottcher(d, c, z)
        z *= r
        if abs(r - 1.0) < 5e-15:
            return z
    raise _StepFail("inverse Boettcher iteration stalled")


def _pulled_target(d: int, c: complex, tvalue: Fraction, g: float):
    """Far-zone anchor for the rung at potential g.

    Returns (n, p, ang, z0) with p = d^n g >= far potential, ang the exact
    angle d^n t reduced mod 1, and phi_c(z0) = exp(p + 2 pi i ang).
    """
    far = _far_potential(c)
    n = 0
    p = g
    while p < far:
        p *= d
        n += 1
    ang = float((tvalue * d ** n) % 1)
    return n, p, ang, _inverse_bottcher(d, c, p, ang)


def _angle_gap(a: float, b: float) -> float:
    g = (a - b) % TWO_PI
    if g > math.pi:
        g -= TWO_PI
    return g


def _tower_seeds(n: int, prev) -> List[Optional[complex]]:
    """Continuity seeds for tower levels 1..n from the previous rung.

    `prev` is (n_prev, tower_prev) or None.  Levels with no matching-angle
    counterpart in the previous tower (a fresh tower, or levels gained when
    n grew) get None and fall back to exact-angle root selection, which is
    only ever needed in the far zone.
    """
    if prev is None:
        return [None] * n
    n_prev, tower_prev = prev
    dn = n - n_prev
    seeds: List[Optional[complex]] = []
    for j in range(1, n + 1):
        i = j - dn
        seeds.append(tower_prev[i] if 0 <= i <= n_prev else None)
    return seeds


def _pull_tower(d: int, c: complex, tvalue: Fraction, n: int, top: complex,
                seeds: List[Optional[complex]]) -> List[complex]:
    """Pull the far-zone anchor back n levels: tower[j]^d + c = tower[j-1].

    Each level picks among the d roots: the one nearest its seed (with an
    ambiguity margin -- a seed closer to the midpoint between two roots
    fails the rung), or, for None seeds, the one whose argument matches the
    exact external angle of that level.
    """
    tower = [top]
    if n == 0:
        return tower
    zetas = [cmath.exp(complex(0.0, TWO_PI * k / d)) for k in range(d)]
    x_prev = top
    for j in range(1, n + 1):
        u = x_prev - c
        if u == 0:
            raise _StepFail("pullback ran into the critical value")
        root = u ** (1.0 / d)
        cands = [root * zeta for zeta in zetas]
        seed = seeds[j - 1]
        if seed is None:
            want = TWO_PI * float((tvalue * d ** (n - j)) % 1)
            gaps = [abs(_angle_gap(cmath.phase(x), want)) for x in cands]
            k = min(range(d), key=gaps.__getitem__)
            if gaps[k] > 0.45 * TWO_PI / d:
                raise _StepFail("far-zone angle did not single out a root")
            x = cands[k]
        else:
            dists = [abs(x - seed) for x in cands]
            order = sorted(range(d), key=dists.__getitem__)
            k = order[0]
            if d > 1 and dists[k] > 0.6 * dists[order[1]]:
                raise _StepFail("pullback branch ambiguous at level %d" % j)
            x = cands[k]
        tower.append(x)
        x_prev = x
    return tower


def _solve_dynamical_rung(d: int, c: complex, tvalue: Fraction, g: float, prev):
    """The pullback tower whose bottom is the ray point at potential g."""
    n, p, ang, top = _pulled_target(d, c, tvalue, g)
    tower = _pull_tower(d, c, tvalue, n, top, _tower_seeds(n, prev))
    return tower, n, p, ang


def _pull_tower_dc(d: int, c: complex, tvalue: Fraction, n: int, top: complex,
                   seeds: List[Optional[complex]]):
    """Tower plus d(bottom)/dc with the far anchor held fixed.

    Differentiating z_j^d + c = z_{j-1} backward gives the stable recursion
    z_j' = (z_{j-1}' - 1) / (d z_j^(d-1)) from z_0' = 0.
    """
    tower = _pull_tower(d, c, tvalue, n, top, seeds)
    dx = complex(0.0)
    for j in range(1, n + 1):
        denom = d * tower[j] ** (d - 1)
        if denom == 0:
            raise _StepFail("pullback tower hit the critical point")
        dx = (dx - 1.0) / denom
    return tower, dx


def _newton_tower_start(d: int, thvalue: Fraction, n: int, top: complex,
                        c0: complex, seeds: List[Optional[complex]],
                        schedule: RaySchedule):
    """Newton in c on tower_bottom(c) = c, far anchor frozen at `top`."""
    c = c0
    for _ in range(schedule.newton_maxit):
        tower, dbot = _pull_tower_dc(d, c, thvalue, n, top, seeds)
        f_err = tower[-1] - c
        deriv = dbot - 1.0
        if not abs(deriv) > 1e-9:
            raise _StepFail("degenerate parameter derivative")
        step = f_err / deriv
        c = c - step
        seeds = list(tower[1:])
        if not abs(c) < 1e200:
            raise _StepFail("Newton iterate blew up")
        if abs(step) <= 1e-15 * (1.0 + abs(c)):
            tower = _pull_tower(d, c, thvalue, n, top, seeds)
            return c, tower
    raise _StepFail("Newton did not reach tolerance")


def _ray_residual(d: int, c: complex, top: complex, p: float, ang: float) -> float:
    """Relative defect of the Boettcher equation at the rung's far anchor.

    The pullback to the sample never amplifies it, so this bounds the
    relative defect of the whole tower.
    """
    try:
        ph = _bottcher(d, c, top)
    except _StepFail:
        return math.inf
    w = cmath.exp(complex(p, TWO_PI * ang))
    return abs(ph / w - 1.0)


def _build_ladder(start: float, target: float, schedule: RaySchedule) -> List[float]:
    if not target > 0.0:
        raise PreconditionError("target potential must be positive")
    target = max(target, start * 0.5 ** schedule.landing_levels)
    if target >= start:
        return [target]
    ratio = 0.5 ** (1.0 / max(1, schedule.steps_per_level))
    rungs = [start]
    g = start
    while g * ratio > target * 1.0000001:
        g *= ratio
        rungs.append(g)
    rungs.append(target)
    return rungs


def _walk_ladder(ladder: List[float], schedule: RaySchedule,
                 solve: Callable[[float, object], Tuple[complex, object, tuple]]):
    """Run `solve(g, state)` down the ladder, dyadically subdividing a rung
    (in log-potential) whenever it fails, up to schedule.max_subdivisions."""
    agenda = [(g, 0) for g in reversed(ladder)]
    accepted = []
    prev_g: Optional[float] = None
    state = None
    while agenda:
        g, depth = agenda.pop()
        try:
            sample, new_state, payload = solve(g, state)
        except _StepFail as fail:
            if depth >= schedule.max_subdivisions or prev_g is None:
                raise NewtonDivergence(
                    "ray continuation stalled near potential %.4g (%s)"
                    % (g, fail)) from None
            agenda.append((g, depth + 1))
            agenda.append((math.sqrt(prev_g * g), depth + 1))
            continue
        accepted.append((g, sample, payload))
        prev_g, state = g, new_state
    return accepted


def _aitken(seq: List[complex]) -> List[complex]:
    out = []
    for j in range(len(seq) - 2):
        d2 = seq[j + 2] - 2.0 * seq[j + 1] + seq[j]
        if abs(d2) < 1e-300:
            out.append(seq[j + 2])
        else:
            out.append(seq[j + 2] - (seq[j + 2] - seq[j + 1]) ** 2 / d2)
    return out


def _polyfit_at_zero(xs: np.ndarray, ys: np.ndarray,
                     lo: float, hi: float, order: int) -> Optional[complex]:
    """Constant term of a least-squares polynomial fit on xs in [lo, hi]."""
    mask = (xs >= lo) & (xs <= hi)
    if int(mask.sum()) < order + 2:
        return None
    u = xs[mask] / lo
    V = np.vander(u, order + 1, increasing=True)
    coef, _res, _rank, _sv = np.linalg.lstsq(V, ys[mask], rcond=None)
    return complex(coef[0])


def _slow_landing_fit(potentials: List[float], samples: List[complex]):
    """Extrapolate a parabolic-type tail to its landing point.

    Along a ray landing at a parabolic point the distance to the landing
    point decays like 1/L (or 1/L^2 at a cusp), L = log(1/G), with higher
    corrections that are not always plain powers -- slowly varying
    (logarithmic-type) terms show up, and under those high-order
    interpolation at 0 diverges order by order.  Low-order least-squares
    fits over the deepest octave of 1/L stay stable, so the order (2..6)
    is picked by refitting on a shifted window and keeping the order where
    the two windows agree best; that disagreement is also an honest error
    estimate for the winner.
    """
    xs_all, zs_all = [], []
    for g, z in zip(potentials, samples):
        if g < 0.05:
            xs_all.append(1.0 / -math.log(g))
            zs_all.append(z)
    if len(xs_all) < 6:
        return samples[-1], math.inf
    xs = np.asarray(xs_all)
    zs = np.asarray(zs_all)
    x0 = float(xs.min())
    best_est: complex = samples[-1]
    best_dis = math.inf
    for order in range(2, 7):
        est_a = _polyfit_at_zero(xs, zs, x0, 2.0 * x0, order)
        est_b = _polyfit_at_zero(xs, zs, 1.5 * x0, 3.0 * x0, order)
        if est_a is None or est_b is None:
            continue
        dis = abs(est_a - est_b)
        if dis < best_dis:
            best_est, best_dis = est_a, dis
    return best_est, best_dis


def _extrapolate_landing(potentials: List[float], samples: List[complex],
                         schedule: RaySchedule):
    """Landing estimate from the traced tail.

    Returns (estimate, error_estimate, slow, converged).  A geometric tail
    (repelling landing point) goes through iterated Aitken acceleration on
    the halving-level subsamples; a slow tail (parabolic landing) is
    extrapolated polynomially in 1/log(1/G).
    """
    m = max(1, schedule.steps_per_level)
    idx = list(range(len(samples) - 1, -1, -m))
    idx.reverse()
    pts = max(4, schedule.extrap_points)
    zs = [samples[i] for i in idx][-(pts + 4):]
    if len(zs) < 4:
        err = abs(zs[-1] - zs[0]) if len(zs) > 1 else math.inf
        return samples[-1], err, False, False
    scale = 1.0 + abs(zs[-1])
    diffs = [zs[i + 1] - zs[i] for i in range(len(zs) - 1)]
    if abs(diffs[-1]) < 1e-15 * scale:
        # tail already flat to machine precision
        return zs[-1], abs(diffs[-1]) + 1e-16 * scale, False, True
    ratios = []
    for i in range(len(diffs) - 1):
        if abs(diffs[i]) > 0.0:
            ratios.append(abs(diffs[i + 1]) / abs(diffs[i]))
    tail_ratio = max(ratios[-4:]) if ratios else 1.0
    if tail_ratio < 0.8:
        s1 = _aitken(zs)
        s2 = _aitken(s1) if len(s1) >= 3 else s1
        est = s2[-1]
        err = abs(s2[-1] - s1[-1])
        if len(s2) >= 2:
            err = max(err, 0.5 * abs(s2[-1] - s2[-2]))
        slow = False
    else:
        est, err = _slow_landing_fit(potentials, samples)
        slow = True
    tol = 1e-3 * scale if slow else 1e-6 * scale
    return est, err, slow, err <= tol


@dataclass
class RayPath:
    """A traced external ray.

    Samples run from the starting potential down toward the landing point,
    with `potentials` strictly decreasing.  `residuals` hold the relative
    defect of the Boettcher functional equation at each rung's far-zone
    anchor (the pullback to the sample only contracts it).
    `landing_error` is the extrapolation's own error estimate; when the
    tail decays slower than geometrically the path is marked
    `slow_landing` and `converged` uses the relaxed 1e-3 tolerance.
    """

    angle: Angle
    samples: List[complex]
    potentials: List[float]
    landing_estimate: complex
    converged: bool
    residuals: List[float] = field(default_factory=list)
    landing_error: float = math.inf
    slow_landing: bool = False

    def __len__(self) -> int:
        return len(self.samples)

    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else math.inf

    def to_csv(self) -> str:
        """Serialize as CSV with one `potential,re,im` row per sample."""
        lines = ["potential,re,im"]
        for g, z in zip(self.potentials, self.samples):
            lines.append("%.17g,%.17g,%.17g" % (g, z.real, z.imag))
        return "\n".join(lines) + "\n"

    def svg_polyline(self,
                     transform: Optional[Callable[[complex], Tuple[float, float]]] = None,
                     style: str = 'fill="none" stroke="black" stroke-width="0.5"') -> str:
        """The ray as an SVG <polyline> element (optionally transformed)."""
        pts = []
        for z in self.samples:
            x, y = (z.real, z.imag) if transform is None else transform(z)
            pts.append("%.6g,%.6g" % (x, y))
        return '<polyline %s points="%s"/>' % (style, " ".join(pts))


def _require_angle(t) -> Angle:
    if isinstance(t, Angle):
        return t
    raise PreconditionError(
        "angle must be an Angle instance (it carries the degree d)")


def _hunt_bifurcation(d: int, c: complex, tvalue: Fraction, g_hi: float,
                      state_hi, schedule: RaySchedule, scale: float) -> float:
    """Zoom in on a dip of the tower's distance to the critical point.

    Called when accepted samples show that distance shrinking; locates the
    potential minimizing it.  Raises Bifurcation if the minimum is within
    tolerance of zero (the ray runs into an iterated preimage of 0);
    otherwise returns the smallest distance seen (a false alarm).
    """

    def probe(g: float, st):
        try:
            tower, n, _p, _ang = _solve_dynamical_rung(d, c, tvalue, g, st)
        except _StepFail:
            return None, math.inf
        pts = tower[1:] or tower
        return (n, tower), min(abs(v) for v in pts)

    lo, hi = 0.66 * g_hi, g_hi
    st = state_hi
    floor = math.inf
    for _ in range(48):
        grid = [lo * (hi / lo) ** (k / 11.0) for k in range(12)]
        probes = []
        for g in grid:
            stx, om = probe(g, st)
            probes.append((om, g, stx))
        om_min, g_min, st_min = min(probes, key=lambda v: v[0])
        floor = min(floor, om_min)
        if om_min < schedule.bifurcation_tol * scale and st_min is not None:
            raise Bifurcation(
                "dynamical ray bifurcates at an iterated preimage of the "
                "critical point", point=st_min[1][-1], potential=g_min)
        j = grid.index(g_min)
        if j == 0:
            hi = grid[1]
            lo *= 0.66
        else:
            lo = grid[j - 1]
            hi = grid[min(len(grid) - 1, j + 1)]
        if st_min is not None:
            st = st_min
        if hi - lo < 1e-18 * g_hi:
            break
        if hi - lo < 1e-6 * g_hi and om_min > 64.0 * schedule.bifurcation_tol * scale:
            break  # a genuine but harmless near-miss; stop refining
    return floor


def trace_dynamical_ray(c: complex, t: Angle, target_potential: float = 1e-8,
                        schedule: RaySchedule = DEFAULT_RAY_SCHEDULE) -> RayPath:
    """Trace the dynamical-plane external ray of f_c at angle t.

    Samples go from the schedule's starting potential down to
    `target_potential`; the landing estimate extrapolates the tail.
    Raises Bifurcation (with the offending point and potential) if the ray
    runs into an iterated preimage of the critical point, NewtonDivergence
    if continuation fails outright.
    """
    t = _require_angle(t)
    d = t.degree
    c = complex(c)
    ladder = _build_ladder(schedule.start_potential, target_potential, schedule)
    scale = 1.0 + abs(c)
    omins: List[float] = []
    state = {"best": math.inf}

    def solve(g: float, prev):
        tower, n, p, ang = _solve_dynamical_rung(d, c, t.value, g, prev)
        x = tower[-1]
        pts = tower[1:] or tower
        omin = min(abs(v) for v in pts)
        if omin < schedule.bifurcation_tol * scale:
            raise Bifurcation(
                "dynamical ray bifurcates at an iterated preimage of the "
                "critical point", point=x, potential=g)
        if (len(omins) >= 2 and omin < 0.25 * scale
                and omin < omins[-1] < omins[-2]
                and omin < 0.6 * state["best"]):
            state["best"] = min(
                state["best"],
                _hunt_bifurcation(d, c, t.value, g, (n, tower), schedule, scale))
        omins.append(omin)
        state["best"] = min(state["best"], omin)
        return x, (n, tower), (_ray_residual(d, c, tower[0], p, ang),)

    accepted = _walk_ladder(ladder, schedule, solve)
    potentials = [g for g, _x, _r in accepted]
    samples = [x for _g, x, _r in accepted]
    residuals = [r[0] for _g, _x, r in accepted]
    est, err, slow, conv = _extrapolate_landing(potentials, samples, schedule)
    if slow:
        warnings.warn("slow (parabolic-type) landing of dynamical ray %s; "
                      "tolerance relaxed to 1e-3" % t, RuntimeWarning,
                      stacklevel=2)
    return RayPath(t, samples, potentials, est, conv, residuals, err, slow)


def _solve_parameter_rung(d: int, thvalue: Fraction, g: float, prev,
                          schedule: RaySchedule):
    """One parameter-ray rung: solve phi_c(c) = exp(g + 2 pi i theta).

    The far-zone anchor is frozen, Newton runs on c -> tower_bottom(c), and
    the anchor is re-frozen at the new c until the pair is self-consistent.
    """
    if prev is None:
        w = cmath.exp(complex(g, TWO_PI * float(thvalue % 1)))
        c = w - w ** (2 - d) / d
        tower_state = None
    else:
        n_prev, tower_prev, c = prev
        tower_state = (n_prev, tower_prev)
    last = None
    for _outer in range(10):
        far = _far_potential(c)
        n = 0
        p = g
        while p < far:
            p *= d
            n += 1
        ang = float((thvalue * d ** n) % 1)
        top = _inverse_bottcher(d, c, p, ang)
        seeds = _tower_seeds(n, tower_state)
        c, tower = _newton_tower_start(d, thvalue, n, top, c, seeds, schedule)
        tower_state = (n, tower)
        if last is not None and abs(c - last) <= 1e-15 * (1.0 + abs(c)):
            return c, (n, tower, c), p, ang, tower[0]
        last = c
    raise _StepFail("frozen-target refinement did not settle")


def trace_parameter_ray(theta: Angle, target_potential: float = 1e-8,
                        schedule: RaySchedule = DEFAULT_RAY_SCHEDULE) -> RayPath:
    """Trace the parameter ray of the degree-d Multibrot set at angle theta.

    Solves phi_c(c) = r e^(2 pi i theta) by Newton continuation down the
    potential ladder; the landing estimate approximates the ray's landing
    parameter.  theta = 0 is excluded (ZeroAngle).
    """
    theta = _require_angle(theta)
    if theta.value == 0:
        raise ZeroAngle("parameter ray tracing excludes the zero angle")
    d = theta.degree
    ladder = _build_ladder(schedule.start_potential, target_potential, schedule)

    def solve(g: float, prev):
        cval, st, p, ang, top = _solve_parameter_rung(
            d, theta.value, g, prev, schedule)
        return cval, st, (_ray_residual(d, cval, top, p, ang),)

    accepted = _walk_ladder(ladder, schedule, solve)
    potentials = [g for g, _x, _r in accepted]
    samples = [x for _g, x, _r in accepted]
    residuals = [r[0] for _g, _x, r in accepted]
    est, err, slow, conv = _extrapolate_landing(potentials, samples, schedule)
    if slow:
        warnings.warn("slow (parabolic-type) landing of parameter ray %s; "
                      "tolerance relaxed to 1e-3" % theta, RuntimeWarning,
                      stacklevel=2)
    return RayPath(theta, samples, potentials, est, conv, residuals, err, slow)
