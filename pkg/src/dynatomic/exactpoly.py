"""Exact integer polynomial arithmetic, univariate and bivariate.

This is deliberately small: dense int lists for one variable, and for two
variables a sparse map {z-degree: dense coefficients in c}.  The only
clever part is multiplication, which packs coefficient lists into single
big integers (fixed-width slots) so that CPython's fast big-int product
does the convolution.  Everything is exact; nothing here touches floats.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import InternalInvariant, PreconditionError

IntPoly = List[int]  # dense, index = degree, no trailing zeros


def trim(a: IntPoly) -> IntPoly:
    while a and a[-1] == 0:
        a.pop()
    return a


def add(a: IntPoly, b: IntPoly) -> IntPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return trim(out)


def neg(a: IntPoly) -> IntPoly:
    return [-x for x in a]


def _mul_schoolbook(a: IntPoly, b: IntPoly) -> IntPoly:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def _pack(a: Sequence[int], width: int) -> int:
    buf = bytearray(width * len(a))
    for i, x in enumerate(a):
        buf[i * width:(i + 1) * width] = x.to_bytes(width, "little")
    return int.from_bytes(bytes(buf), "little")


def _unpack(n: int, width: int, count: int) -> IntPoly:
    buf = n.to_bytes(width * count, "little")
    return [int.from_bytes(buf[i * width:(i + 1) * width], "little")
            for i in range(count)]


def _mul_packed(a: IntPoly, b: IntPoly) -> IntPoly:
    """Kronecker-substitution product of two nonnegative-coefficient polys."""
    bound = max(a) * max(b) * min(len(a), len(b)) + 1
    width = (bound.bit_length() + 7) // 8
    count = len(a) + len(b) - 1
    prod = _pack(a, width) * _pack(b, width)
    return trim(_unpack(prod, width, count))


def mul(a: IntPoly, b: IntPoly) -> IntPoly:
    if not a or not b:
        return []
    if len(a) * len(b) <= 256:
        return _mul_schoolbook(a, b)
    # split into nonnegative parts so the packed digits never borrow
    ap = [x if x > 0 else 0 for x in a]
    an = [-x if x < 0 else 0 for x in a]
    bp = [x if x > 0 else 0 for x in b]
    bn = [-x if x < 0 else 0 for x in b]
    out = [0] * (len(a) + len(b) - 1)
    for u, v, sign in ((ap, bp, 1), (an, bn, 1), (ap, bn, -1), (an, bp, -1)):
        if any(u) and any(v):
            for i, x in enumerate(_mul_packed(u, v)):
                out[i] += sign * x
    return trim(out)


def evaluate(a: IntPoly, x: int) -> int:
    out = 0
    for coeff in reversed(a):
        out = out * x + coeff
    return out


# ---------------------------------------------------------------------------
# bivariate: sparse in z, dense integer lists in c

ZCPoly = Dict[int, IntPoly]  # z-degree -> coefficients in c


def zc_trim(p: ZCPoly) -> ZCPoly:
    return {k: v for k, v in p.items() if v}


def zc_add(p: ZCPoly, q: ZCPoly) -> ZCPoly:
    out = dict(p)
    for k, v in q.items():
        out[k] = add(list(out.get(k, [])), v)
    return zc_trim(out)


def zc_mul(p: ZCPoly, q: ZCPoly) -> ZCPoly:
    out: ZCPoly = {}
    for i, a in p.items():
        for j, b in q.items():
            prod = mul(a, b)
            if not prod:
                continue
            k = i + j
            out[k] = add(out[k], prod) if k in out else prod
    return zc_trim(out)


def zc_pow(p: ZCPoly, e: int) -> ZCPoly:
    out: ZCPoly = {0: [1]}
    base = p
    while e:
        if e & 1:
            out = zc_mul(out, base)
        e >>= 1
        if e:
            base = zc_mul(base, base)
    return out


_ITERATE_CACHE: Dict[Tuple[int, int], ZCPoly] = {}

def iterate_map(d: int, n: int) -> ZCPoly:
    """The bivariate polynomial of the n-th iterate of z^d + c.

    Cached; callers must treat the result as immutable.
    """
    key = (d, n)
    cached = _ITERATE_CACHE.get(key)
    if cached is not None:
        return cached
    cur: ZCPoly = {1: [1]}  # z
    for _ in range(n):
        cur = zc_add(zc_pow(cur, d), {0: [0, 1]})
    _ITERATE_CACHE[key] = cur
    return cur


def zc_divmod(num: ZCPoly, den: ZCPoly) -> Tuple[ZCPoly, ZCPoly]:
    """Division in (Z[c])[z] for a divisor whose z-lead is constant +-1."""
    dz = max(den)
    lead = den[dz]
    if lead != [1] and lead != [-1]:
        raise PreconditionError("divisor must be monic in z, lead %r" % (lead,))
    sign = lead[0]
    rem = {k: list(v) for k, v in num.items()}
    quo: ZCPoly = {}
    while rem:
        top = max(rem)
        if top < dz:
            break
        coeff = rem.pop(top)
        if sign < 0:
            coeff = neg(coeff)
        k = top - dz
        quo[k] = add(quo.get(k, []), coeff)
        for j, b in den.items():
            if j == dz:
                continue
            sub = mul(coeff, neg(b))
            if not sub:
                continue
            tgt = j + k
            rem[tgt] = add(rem.get(tgt, []), sub)
            if not rem[tgt]:
                del rem[tgt]
    return zc_trim(quo), zc_trim(rem)


def zc_evaluate(p: ZCPoly, c, z):
    """Evaluate with any number type supporting * and + (complex, Fraction)."""
    out = 0
    for zdeg, coeffs in p.items():
        acc = 0
        for coeff in reversed(coeffs):
            acc = acc * c + coeff
        out += acc * z ** zdeg
    return out


def zc_degrees(p: ZCPoly) -> Tuple[int, int]:
    if not p:
        return -1, -1
    return max(p), max(len(v) - 1 for v in p.values())


def zc_to_json(p: ZCPoly) -> dict:
    return {str(k): [str(x) for x in v] for k, v in sorted(p.items())}


# ---------------------------------------------------------------------------
# integer resultants and interpolation

def _pseudo_rem(a: IntPoly, b: IntPoly) -> IntPoly:
    """prem(a, b) = lc(b)^(deg a - deg b + 1) * a  mod  b, over the integers."""
    da, db = len(a) - 1, len(b) - 1
    lead = b[-1]
    e = da - db + 1
    r = list(a)
    while r and len(r) - 1 >= db:
        k = len(r) - 1 - db
        coeff = r[-1]
        r = [x * lead for x in r]
        for j in range(db + 1):
            r[j + k] -= coeff * b[j]
        trim(r)
        e -= 1
    if e > 0:
        le = lead ** e
        r = [x * le for x in r]
    return trim(r)


def int_derivative(a: IntPoly) -> IntPoly:
    return trim([i * a[i] for i in range(1, len(a))])


def _content(a: IntPoly) -> int:
    g = 0
    for x in a:
        g = math.gcd(g, x)
    return g or 1


def _primitive(a: IntPoly) -> IntPoly:
    g = _content(a)
    p = [x // g for x in a]
    if p and p[-1] < 0:
        p = [-x for x in p]
    return p


def int_divexact(a: IntPoly, b: IntPoly) -> IntPoly:
    """a // b when b divides a exactly over the integers."""
    a, b = trim(list(a)), trim(list(b))
    if not b:
        raise PreconditionError("division by the zero polynomial")
    if not a:
        return []
    q = [0] * (len(a) - len(b) + 1)
    r = list(a)
    lead = b[-1]
    while r and len(r) >= len(b):
        if r[-1] % lead != 0:
            raise InternalInvariant("inexact polynomial division")
        coeff = r[-1] // lead
        k = len(r) - len(b)
        q[k] = coeff
        for j in range(len(b)):
            r[j + k] -= coeff * b[j]
        trim(r)
    if r:
        raise InternalInvariant("inexact polynomial division (remainder)")
    return trim(q)


def int_gcd_poly(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive gcd of integer polynomials (primitive PRS)."""
    a, b = _primitive(trim(list(a))), _primitive(trim(list(b)))
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _primitive(r) if r else []
    return a


def square_free_part(a: IntPoly) -> IntPoly:
    """The product of the distinct irreducible factors, each once."""
    a = trim(list(a))
    if len(a) <= 2:
        return _primitive(a) if a else []
    g = int_gcd_poly(a, int_derivative(a))
    if len(g) == 1:
        return _primitive(a)
    return _primitive(int_divexact(_primitive(a), g))


def int_resultant(a: IntPoly, b: IntPoly) -> int:
    """Exact resultant of integer polynomials (subresultant PRS).

    Classical Brown/Traub bookkeeping.  Validated against Sylvester
    determinants; note sympy's `resultant` disagrees on sign for some
    inputs, so determinants are the oracle of record in the tests.
    """
    a, b = trim(list(a)), trim(list(b))
    if not a or not b:
        return 0
    s = 1
    if len(a) < len(b):
        if ((len(a) - 1) * (len(b) - 1)) % 2 == 1:
            s = -s
        a, b = b, a
    if len(b) == 1:
        return s * b[0] ** (len(a) - 1)
    g, h = 1, 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            s = -s
        r = _pseudo_rem(a, b)
        if not r:
            return 0
        denom = g * h ** delta
        a = b
        b = [x // denom for x in r]
        g = a[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = g ** delta // h ** (delta - 1)
        if len(b) == 1:
            da = len(a) - 1
            num = s * b[0] ** da
            return num // h ** (da - 1) if da > 1 else num


def interpolate_integer_poly(nodes: Sequence[int], values: Sequence[int]) -> IntPoly:
    """The unique degree < len(nodes) polynomial through integer data.

    Newton's divided differences over Fractions; the final coefficients
    must come out integral (they do for our resultants) or we raise.
    """
    n = len(nodes)
    table = [Fraction(v) for v in values]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (nodes[i] - nodes[i - level])
    coeffs: List[Fraction] = [table[n - 1]]
    for i in range(n - 2, -1, -1):
        new = [Fraction(0)] * (len(coeffs) + 1)
        for j, x in enumerate(coeffs):
            new[j + 1] += x
            new[j] -= nodes[i] * x
        new[0] += table[i]
        coeffs = new
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    out = []
    for x in coeffs:
        if x.denominator != 1:
            raise InternalInvariant("interpolation produced non-integer %s" % (x,))
        out.append(int(x))
    return trim(out)
