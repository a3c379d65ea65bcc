"""Periodic points, dynatomic factors, and parabolic parameters of z^d + c.

Everything numeric in this module is plain complex/float arithmetic plus
numpy; everything exact goes through `exactpoly`.  The two worlds meet in
`parabolic_parameters`, where an exact integer polynomial in c is built by
modular evaluation-interpolation and then solved numerically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import exactpoly as ep
from .errors import (
    BudgetExceeded,
    ClusterAmbiguous,
    ConvergenceError,
    InternalInvariant,
    MultiplierMismatch,
    NotParabolic,
    NotPeriodic,
    PreconditionError,
)

__all__ = [
    "OrbitData",
    "orbit_points",
    "multiplier",
    "dPn_dc",
    "periodic_points",
    "DynatomicFactor",
    "dynatomic_factor",
    "ParabolicSolve",
    "parabolic_parameters",
    "Jet3",
    "jet_normal_form",
    "orbit_splitting",
    "refine_parabolic",
]


def _check_degree(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise PreconditionError("degree must be an integer >= 2, got %r" % (d,))


# ---------------------------------------------------------------------------
# orbits and derivatives along them

def orbit_points(d: int, c: complex, z: complex, n: int) -> List[complex]:
    """z, f(z), ..., f^(n-1)(z) for f = z^d + c."""
    _check_degree(d)
    out = [complex(z)]
    for _ in range(n - 1):
        out.append(out[-1] ** d + c)
    return out

def multiplier(d: int, c: complex, z: complex, n: int) -> complex:
    pts = orbit_points(d, c, z, n)
    rho = 1.0 + 0j
    for w in pts:
        rho *= d * w ** (d - 1)
    return rho

def dPn_dc(d: int, c: complex, z: complex, n: int) -> complex:
    """Derivative in c of f_c^n(z) - z at frozen z.

    Running the chain rule along the orbit: with D_k = d(f^k(z))/dc,
    D_0 = 0 and D_(k+1) = f'(z_k) D_k + 1.  Since z is held fixed the
    subtracted z contributes nothing.
    """
    _check_degree(d)
    if n < 1:
        raise PreconditionError("n must be >= 1")
    zk = complex(z)
    D = 0j
    for _ in range(n):
        D = d * zk ** (d - 1) * D + 1
        zk = zk ** d + c
    return D


@dataclass
class OrbitData:
    degree: int
    c: complex
    z: complex
    period: int
    points: List[complex]
    multiplier: complex
    dP_dc: complex
    residual: float

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "c": [self.c.real, self.c.imag],
            "z": [self.z.real, self.z.imag],
            "period": self.period,
            "points": [[w.real, w.imag] for w in self.points],
            "multiplier": [self.multiplier.real, self.multiplier.imag],
            "dP_dc": [self.dP_dc.real, self.dP_dc.imag],
            "residual": self.residual,
        }


def orbit_data(d: int, c: complex, z: complex, n: int) -> OrbitData:
    pts = orbit_points(d, c, z, n)
    back = pts[-1] ** d + c
    return OrbitData(
        degree=d, c=complex(c), z=complex(z), period=n, points=pts,
        multiplier=multiplier(d, c, z, n),
        dP_dc=dPn_dc(d, c, z, n),
        residual=abs(back - z),
    )


# ---------------------------------------------------------------------------
# all periodic points at once

_ABERTH_SWEEPS = 400

def _eval_iter(d: int, c: complex, n: int, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """f^n(z) - z and (f^n)'(z) - 1, evaluated by orbit iteration."""
    w = z.copy()
    deriv = np.ones_like(z)
    for _ in range(n):
        deriv = deriv * d * w ** (d - 1)
        w = w ** d + c
    return w - z, deriv - 1.0

def periodic_points(d: int, c: complex, n: int, exact: bool = False,
                    tol: float = 1e-10) -> List[complex]:
    """All d^n fixed points of f_c^n, simultaneously (Ehrlich-Aberth).

    Deterministic: fixed initial circle, fixed sweep order, results sorted
    by (re, im).  With exact=True, points of lower period dividing n are
    dropped by direct orbit tests.
    """
    _check_degree(d)
    if n < 1:
        raise PreconditionError("period must be >= 1")
    m = d ** n
    if m > 4096:
        raise BudgetExceeded("d^n = %d periodic points is beyond the budget" % m)
    r = 1.0 + abs(c) + 0.05
    angles = 2.0 * math.pi * (np.arange(m) + 0.5) / m + 0.33
    z = r * np.exp(1j * angles)
    scale = 1.0 + abs(c)
    for _ in range(_ABERTH_SWEEPS):
        p, dp = _eval_iter(d, c, n, z)
        dp = np.where(np.abs(dp) < 1e-300, 1e-300, dp)
        newton = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = (1.0 / diff).sum(axis=1)
        w = newton / (1.0 - newton * s)
        z = z - w
        if np.max(np.abs(w)) < 1e-15 * scale:
            break
    p, _ = _eval_iter(d, c, n, z)
    worst = float(np.max(np.abs(p)))
    if worst > tol * scale:
        raise ConvergenceError(
            "all-roots iteration left residual %.3e for d=%d c=%s n=%d"
            % (worst, d, c, n))
    roots = list(z)
    if exact:
        keep = []
        for w in roots:
            lower = False
            for k in range(1, n):
                if n % k == 0:
                    pts = orbit_points(d, c, w, k + 1)
                    if abs(pts[-1] - w) < 1e-7 * scale:
                        lower = True
                        break
            if not lower:
                keep.append(w)
        roots = keep
    roots.sort(key=lambda w: (w.real, w.imag))
    return [complex(w) for w in roots]


# ---------------------------------------------------------------------------
# exact dynatomic division

MAX_EXACT_ITERATE = 6

@dataclass
class DynatomicFactor:
    degree: int
    inner_period: int
    outer_factor: int
    quotient: ep.ZCPoly
    numerator: ep.ZCPoly
    divisor: ep.ZCPoly

    @property
    def z_degree(self) -> int:
        return ep.zc_degrees(self.quotient)[0]

    @property
    def c_degree(self) -> int:
        return ep.zc_degrees(self.quotient)[1]

    def evaluate(self, c, z):
        return ep.zc_evaluate(self.quotient, c, z)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "inner_period": self.inner_period,
            "outer_factor": self.outer_factor,
            "z_degree": self.z_degree,
            "c_degree": self.c_degree,
            "quotient": ep.zc_to_json(self.quotient),
        }


def dynatomic_factor(d: int, m: int, s: int) -> DynatomicFactor:
    """The exact quotient (f^(ms)(z) - z) / (f^m(z) - z) over Z[c].

    The divisor is monic in z, so the division lives in (Z[c])[z] and the
    remainder must vanish identically; anything else is a hard error.
    """
    _check_degree(d)
    if m < 1 or s < 1:
        raise PreconditionError("m and s must be positive")
    if d > 3 or m * s > MAX_EXACT_ITERATE:
        raise BudgetExceeded(
            "exact division supported for d <= 3 and m*s <= %d" % MAX_EXACT_ITERATE)
    numerator = ep.zc_add(ep.iterate_map(d, m * s), {1: [-1]})
    divisor = ep.zc_add(ep.iterate_map(d, m), {1: [-1]})
    quotient, remainder = ep.zc_divmod(numerator, divisor)
    if remainder:
        raise InternalInvariant(
            "dynatomic division left a nonzero remainder for d=%d m=%d s=%d"
            % (d, m, s))
    return DynatomicFactor(degree=d, inner_period=m, outer_factor=s,
                           quotient=quotient, numerator=numerator,
                           divisor=divisor)


# ---------------------------------------------------------------------------
# parabolic parameters: Res_z(f^n(z) - z, (f^n)'(z) - 1) as an exact poly in c

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    r, s = n - 1, 0
    while r % 2 == 0:
        r //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, r, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True

def _primes_from(start: int):
    p = start | 1
    while True:
        if _is_prime(p):
            yield p
        p += 2

def _poly_mod(a: Sequence[int], p: int) -> List[int]:
    out = [x % p for x in a]
    while out and out[-1] == 0:
        out.pop()
    return out

def _polymul_mod(a: List[int], b: List[int], p: int) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    while out and out[-1] == 0:
        out.pop()
    return out

def _mod_resultant(a: List[int], b: List[int], p: int) -> int:
    """Resultant over GF(p) by the Euclidean remainder sequence."""
    a = _poly_mod(a, p)
    b = _poly_mod(b, p)
    if not a or not b:
        return 0
    res = 1
    if len(a) < len(b):
        if ((len(a) - 1) * (len(b) - 1)) % 2 == 1:
            res = p - 1
        a, b = b, a
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return res * pow(b[0], da, p) % p
        inv = pow(b[-1], p - 2, p)
        r = list(a)
        while r and len(r) - 1 >= db:
            k = len(r) - 1 - db
            coeff = r[-1] * inv % p
            for j in range(db + 1):
                r[j + k] = (r[j + k] - coeff * b[j]) % p
            while r and r[-1] == 0:
                r.pop()
        if not r:
            return 0
        dr = len(r) - 1
        res = res * pow(b[-1], da - dr, p) % p
        if (da * db) % 2 == 1:
            res = (p - res) % p
        a, b = b, r

def _interp_mod(nodes: Sequence[int], values: Sequence[int], p: int) -> List[int]:
    """Newton interpolation over GF(p); returns dense coefficients."""
    n = len(nodes)
    table = [v % p for v in values]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            denom = (nodes[i] - nodes[i - level]) % p
            table[i] = (table[i] - table[i - 1]) * pow(denom, p - 2, p) % p
    coeffs = [table[n - 1]]
    for i in range(n - 2, -1, -1):
        new = [0] * (len(coeffs) + 1)
        for j, x in enumerate(coeffs):
            new[j + 1] = (new[j + 1] + x) % p
            new[j] = (new[j] - nodes[i] * x) % p
        new[0] = (new[0] + table[i]) % p
        coeffs = new
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs

def _iterate_polys_mod(d: int, n: int, c_value: int, p: int) -> List[List[int]]:
    """Coefficient lists of z, f(z), ..., f^n(z) over GF(p) at c = c_value."""
    cur = [0, 1]
    out = [cur]
    cmod = c_value % p
    for _ in range(n):
        power = cur
        for _ in range(d - 1):
            power = _polymul_mod(power, cur, p)
        nxt = list(power)
        if not nxt:
            nxt = [0]
        nxt[0] = (nxt[0] + cmod) % p
        while nxt and nxt[-1] == 0:
            nxt.pop()
        cur = nxt
        out.append(cur)
    return out

def _resultant_value_mod(d: int, n: int, c_value: int, p: int) -> int:
    chain = _iterate_polys_mod(d, n, c_value, p)
    pn = list(chain[-1])
    while len(pn) < 2:
        pn.append(0)
    pn[1] = (pn[1] - 1) % p
    while pn and pn[-1] == 0:
        pn.pop()
    mult = [1]
    for k in range(n):
        fprime = _polymul_pow_mod(chain[k], d - 1, p)
        term = [x * d % p for x in fprime]
        mult = _polymul_mod(mult, term, p)
    mult = list(mult)
    if not mult:
        mult = [0]
    mult[0] = (mult[0] - 1) % p
    while mult and mult[-1] == 0:
        mult.pop()
    return _mod_resultant(pn, mult, p)

def _polymul_pow_mod(a: List[int], e: int, p: int) -> List[int]:
    out = [1]
    for _ in range(e):
        out = _polymul_mod(out, a, p)
    return out

def _crt_pair(r1: int, m1: int, r2: int, m2: int) -> Tuple[int, int]:
    inv = pow(m1 % m2, -1, m2)
    t = (r2 - r1) % m2 * inv % m2
    return r1 + m1 * t, m1 * m2

def _symmetric(r: int, m: int) -> int:
    return r - m if r > m // 2 else r


MAX_RESULTANT_PERIOD = 4

@dataclass
class ParabolicSolve:
    degree: int
    period: int
    polynomial: List[int]
    roots: List[complex]
    residuals: List[float]

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "period": self.period,
            "c_degree": len(self.polynomial) - 1,
            "polynomial": [str(x) for x in self.polynomial],
            "roots": [[w.real, w.imag] for w in self.roots],
            "residuals": self.residuals,
        }


def parabolic_parameters(d: int, n: int, refine: bool = True) -> ParabolicSolve:
    """Parameters where some orbit of period dividing n has (f^n)' = 1.

    Exact elimination of z between f^n(z) - z and (f^n)'(z) - 1 by modular
    evaluation-interpolation: the resultant is computed over GF(p) at
    integer nodes, interpolated mod p, and lifted by CRT until stable (two
    consecutive agreeing lifts plus two fresh verification primes).  The
    root list is numerical, Newton-polished on the underlying system.
    """
    _check_degree(d)
    if n < 1:
        raise PreconditionError("period must be >= 1")
    if d > 3 or n > MAX_RESULTANT_PERIOD:
        raise BudgetExceeded(
            "exact elimination supported for d <= 3, n <= %d" % MAX_RESULTANT_PERIOD)
    degree_bound = n * (d - 1) * d ** (n - 1)
    nodes = [t - degree_bound // 2 for t in range(degree_bound + 1)]

    prime_iter = _primes_from(1 << 62)
    residues: List[int] = []
    modulus = 1
    combined: List[int] = []
    stable: Optional[List[int]] = None
    for p in prime_iter:
        values = [_resultant_value_mod(d, n, t, p) for t in nodes]
        coeffs_p = _interp_mod(nodes, values, p)
        if not residues:
            combined = list(coeffs_p)
            modulus = p
        else:
            width = max(len(combined), len(coeffs_p))
            combined += [0] * (width - len(combined))
            coeffs_p = coeffs_p + [0] * (width - len(coeffs_p))
            new = []
            for r1, r2 in zip(combined, coeffs_p):
                r, _ = _crt_pair(r1 % modulus, modulus, r2, p)
                new.append(r)
            modulus *= p
            combined = new
        residues.append(p)
        lifted = [_symmetric(r % modulus, modulus) for r in combined]
        if stable is not None and lifted == stable:
            poly = lifted
            # verification with two fresh primes
            ok = True
            for q in (next(prime_iter), next(prime_iter)):
                direct = [_resultant_value_mod(d, n, t, q) for t in nodes]
                recon = [ep.evaluate(poly, t) % q for t in nodes]
                if direct != recon:
                    ok = False
                    break
            if ok:
                break
            stable = None
        else:
            stable = lifted
        if modulus.bit_length() > 65536:
            raise InternalInvariant("modular lift failed to stabilize")
    polynomial = ep.trim(list(poly))

    roots: List[complex] = []
    residuals: List[float] = []
    if len(polynomial) > 1:
        # Every parabolic parameter is a multiple root of the eliminant
        # (the whole cycle contributes), which ruins double-precision
        # companion-matrix rootfinding already at moderate degrees.  Strip
        # multiplicities exactly first; the square-free part has the same
        # distinct roots, all simple.
        sqfree = ep.square_free_part(polynomial)
        top_bits = max(x.bit_length() for x in sqfree)
        shift = max(0, top_bits - 512)
        coeffs = [x / (1 << shift) for x in sqfree]
        raw = np.roots(list(reversed(coeffs)))
        seen: List[complex] = []
        for cand in raw:
            c0 = complex(cand)
            if abs(c0) > 3.0:
                continue
            if refine:
                try:
                    c0, z0, res = refine_parabolic_from_c(d, c0, n)
                except (ConvergenceError, NotParabolic):
                    continue
            else:
                res = float("nan")
            if any(abs(c0 - other) < 1e-6 for other in seen):
                continue
            seen.append(c0)
            roots.append(c0)
            residuals.append(res)
        order = sorted(range(len(roots)), key=lambda i: (roots[i].real, roots[i].imag))
        roots = [roots[i] for i in order]
        residuals = [residuals[i] for i in order]
    return ParabolicSolve(degree=d, period=n, polynomial=polynomial,
                          roots=roots, residuals=residuals)


# ---------------------------------------------------------------------------
# refinement of the parabolic system and jets

def _system_jacobian(d: int, c: complex, z: complex, n: int):
    """Values and Jacobian of (f^n(z) - z, (f^n)'(z) - 1) in (c, z)."""
    pts = orbit_points(d, c, z, n)
    fprimes = [d * w ** (d - 1) for w in pts]
    fseconds = [d * (d - 1) * w ** (d - 2) for w in pts]
    M = 1.0 + 0j
    for fp in fprimes:
        M *= fp
    # product rule over the orbit, with the orbit points' own derivatives
    dM_dc = 0j
    dM_dz = 0j
    for j in range(n):
        rest = 1.0 + 0j
        for k in range(n):
            if k != j:
                rest *= fprimes[k]
        dM_dc += rest * fseconds[j] * _orbit_c_derivative(d, c, z, j)
        dM_dz += rest * fseconds[j] * _orbit_z_derivative(d, c, z, j)
    back = pts[-1] ** d + c
    P = back - z
    dP_dc = dPn_dc(d, c, z, n)
    L = 1.0 + 0j
    for fp in fprimes:
        L *= fp
    dP_dz = L - 1.0
    return P, M - 1.0, dP_dc, dP_dz, dM_dc, dM_dz

def _orbit_c_derivative(d: int, c: complex, z: complex, k: int) -> complex:
    zk = complex(z)
    D = 0j
    for _ in range(k):
        D = d * zk ** (d - 1) * D + 1
        zk = zk ** d + c
    return D

def _orbit_z_derivative(d: int, c: complex, z: complex, k: int) -> complex:
    zk = complex(z)
    L = 1.0 + 0j
    for _ in range(k):
        L *= d * zk ** (d - 1)
        zk = zk ** d + c
    return L

def refine_parabolic(d: int, c: complex, z: complex, n: int,
                     tol: float = 1e-13, max_iter: int = 80
                     ) -> Tuple[complex, complex, float]:
    """Newton for the 2x2 system (f^n(z) = z, (f^n)'(z) = 1)."""
    _check_degree(d)
    c0, z0 = complex(c), complex(z)
    scale = 1.0 + abs(c0)
    for _ in range(max_iter):
        P, Mm1, Pc, Pz, Mc, Mz = _system_jacobian(d, c0, z0, n)
        det = Pc * Mz - Pz * Mc
        if abs(det) < 1e-300:
            raise ConvergenceError("singular Jacobian in parabolic refinement")
        dc = (P * Mz - Pz * Mm1) / det
        dz = (Pc * Mm1 - P * Mc) / det
        c0 -= dc
        z0 -= dz
        if abs(dc) + abs(dz) < tol * scale:
            break
    P, Mm1, *_ = _system_jacobian(d, c0, z0, n)
    res = abs(P) + abs(Mm1)
    # written so that a NaN residual (overflowed iteration) also fails
    if not res <= 1e-8 * scale:
        raise ConvergenceError("parabolic refinement stalled at residual %.3e" % res)
    return c0, z0, res

def refine_parabolic_from_c(d: int, c: complex, n: int
                            ) -> Tuple[complex, complex, float]:
    """Refine from the periodic points closest to multiplier 1.

    There is deliberately no threshold on the seed's multiplier gap: a
    parabolic parameter is a multiple root of the eliminant, so numerical
    root finders deliver it as a cluster of approximations up to ~1e-2
    away, and where the cycle derivative is stiff (real antenna cycles)
    the gap at that distance is already of order several.  Newton still
    converges from there.  What marks a genuinely non-parabolic seed is
    the refinement wandering out of the neighbourhood, which is checked
    after the fact instead.  Several starting orbits are tried because at
    a satellite parameter the merging cycles form a degenerate cluster
    and the single best-multiplier point can be a bad Newton seed.
    """
    pts = periodic_points(d, c, n)
    if not pts:
        raise NotParabolic("no periodic orbit candidates at c=%s" % (c,))
    ranked = sorted(pts, key=lambda w: abs(multiplier(d, c, w, n) - 1.0))
    failure: Optional[str] = None
    for w in ranked[:6]:
        try:
            c1, z1, res = refine_parabolic(d, c, w, n)
        except ConvergenceError as exc:
            failure = str(exc)
            continue
        if abs(c1 - c) > 0.1:
            failure = ("refinement left the neighbourhood of c=%s "
                       "(moved to %s)" % (c, c1))
            continue
        return c1, z1, res
    raise NotParabolic(failure or
                       "no refinable orbit with multiplier near 1 at c=%s" % (c,))


@dataclass(frozen=True)
class Jet3:
    """Order-3 truncated power series a0 + a1 w + a2 w^2."""
    a0: complex
    a1: complex
    a2: complex

    def compose(self, inner: "Jet3") -> "Jet3":
        b0, b1, b2 = inner.a0, inner.a1, inner.a2
        return Jet3(
            self.a0 + self.a1 * b0 + self.a2 * b0 * b0,
            self.a1 * b1 + 2.0 * self.a2 * b0 * b1,
            self.a1 * b2 + self.a2 * (b1 * b1 + 2.0 * b0 * b2),
        )

    def to_json(self) -> dict:
        return {"a0": [self.a0.real, self.a0.imag],
                "a1": [self.a1.real, self.a1.imag],
                "a2": [self.a2.real, self.a2.imag]}


def jet_normal_form(d: int, c: complex, z: complex, m: int, s: int,
                    tol: float = 1e-6) -> Jet3:
    """Jet of f^(ms) around a period-m point whose multiplier is a root
    of unity of order s.

    Expected outcome: linear part 1, vanishing quadratic part -- the jet
    certifies that the s-fold composition has no order-2 obstruction.
    """
    _check_degree(d)
    if m < 1 or s < 2:
        raise PreconditionError("need m >= 1 and s >= 2")
    pts = orbit_points(d, c, z, m * s)
    back = pts[-1] ** d + c
    if abs(back - z) > 1e-5 * (1.0 + abs(c)):
        raise NotPeriodic("point does not close up after %d steps" % (m * s))
    rho = multiplier(d, c, z, m)
    if abs(rho - 1.0) <= tol:
        raise MultiplierMismatch("multiplier is 1; need a primitive root of unity")
    if abs(rho ** s - 1.0) > tol:
        raise MultiplierMismatch(
            "multiplier^s = %s is not 1 within %.1e" % (rho ** s, tol))
    jet = Jet3(0j, 1.0 + 0j, 0j)
    for w in pts:
        local = Jet3(0j, d * w ** (d - 1), d * (d - 1) / 2.0 * w ** (d - 2))
        jet = local.compose(jet)
    a0 = back - z
    return Jet3(a0, jet.a1, jet.a2)


# ---------------------------------------------------------------------------
# how a parabolic orbit splits under perturbation

def orbit_splitting(d: int, c0: complex, n: int, radius: float = 1e-3,
                    phase: float = 0.0) -> List[int]:
    """Cycle lengths of the periodic points that emerge from the parabolic
    orbit at c0 when the parameter moves to c0 + radius*e^(i*phase).

    Returns the sorted list of cycle lengths, one entry per cycle.
    """
    _check_degree(d)
    if radius <= 0:
        raise PreconditionError("radius must be positive")
    c1 = c0 + radius * cmath.exp(1j * phase)
    base = periodic_points(d, c0, n)
    moved = periodic_points(d, c1, n)
    scale = 1.0 + abs(c0)
    # a multiple root comes back from the all-roots solver as a tight fuzzy
    # cluster, so group base points first (single linkage) and match moved
    # points against cluster centers
    eps = 0.01 * scale
    clusters: List[List[complex]] = []
    for w in base:
        for cl in clusters:
            if any(abs(w - v) < eps for v in cl):
                cl.append(w)
                break
        else:
            clusters.append([w])
    centers = [sum(cl) / len(cl) for cl in clusters]
    buckets: dict = {}
    for w in moved:
        idx = min(range(len(centers)), key=lambda i: abs(w - centers[i]))
        buckets.setdefault(idx, []).append(w)
    split_points: List[complex] = []
    for idx, members in buckets.items():
        if len(clusters[idx]) >= 2 and len(members) >= 2:
            split_points.extend(members)
    if not split_points:
        raise NotParabolic(
            "no colliding periodic points near c0=%s for period %d" % (c0, n))
    gaps = [abs(a - b)
            for i, a in enumerate(split_points)
            for b in split_points[i + 1:]]
    guard = 0.3 * min(gaps)
    if guard < 1e-9 * scale:
        raise ClusterAmbiguous(
            "split points are too close to separate at radius %g" % radius)
    # follow the perturbed map through the split points
    remaining = list(split_points)
    lengths: List[int] = []
    while remaining:
        start = remaining.pop()
        w = start
        length = 0
        for _ in range(n + 1):
            w = w ** d + c1
            length += 1
            if abs(w - start) < guard:
                break
        else:
            raise ClusterAmbiguous(
                "orbit through split point failed to close within %d steps" % n)
        # remove the rest of this cycle from the pool
        w = start
        for _ in range(length - 1):
            w = w ** d + c1
            hits = [v for v in remaining if abs(v - w) < guard]
            if len(hits) > 1:
                raise ClusterAmbiguous("two split points within matching guard")
            for v in hits:
                remaining.remove(v)
        lengths.append(length)
    lengths.sort()
    return lengths
