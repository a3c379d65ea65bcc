import math
import random

import pytest
from scipy.special import ellipe

from dynatomic.dynpoly import (
    parabolic_parameters,
    periodic_points,
    refine_parabolic_from_c,
)
from dynatomic.errors import (
    DoublePoleAtZero,
    DoublePoleInRegion,
    MultiplierOne,
    NearCriticalValue,
    NotParabolic,
    PoleCollision,
    PreconditionError,
    RegionNotCompactlyContained,
)
from dynatomic.quaddiff import (
    MuTuple,
    QuadDiff,
    _disk_rect_overlap,
    _inv_r_rect,
    case2_certificate,
    contraction_check,
    double_pole_certificate,
    pushforward,
    pushforward_bruteforce,
    qd_norm,
)

RABBIT_ROOT = complex(-0.125, 3 * math.sqrt(3) / 8)


def random_simple_q(rng, n_poles=None, spread=1.5):
    terms = []
    for _ in range(n_poles or rng.randint(1, 3)):
        a = complex(rng.uniform(-spread, spread), rng.uniform(-spread, spread))
        if abs(a) < 0.1:
            a += 0.3
        terms.append((a, 0.0,
                      complex(rng.uniform(-1, 1), rng.uniform(-1, 1))))
    return QuadDiff(terms)


# ---------------------------------------------------------------------------
# the transfer operator's closed forms

def test_pushforward_simple_pole_golden():
    # d=2, c=0: pole at 1 is fixed with f'(1)=2
    push = pushforward(2, 0j, QuadDiff([(1.0, 0.0, 1.0)]))
    assert len(push.terms) == 2
    by_pole = {round(t.pole.real, 9): t for t in push.terms}
    assert abs(by_pole[0.0].c1 + 0.5) < 1e-15
    assert abs(by_pole[1.0].c1 - 0.5) < 1e-15
    assert abs(by_pole[0.0].c2) == 0 and abs(by_pole[1.0].c2) == 0


def test_pushforward_double_pole_golden():
    # d=2, c=-3/4: a=-1/2 is fixed with f'(a)=-1, so the double pole stays
    # put and sheds simple poles of strength -(d-1)/(a f'(a)) = -2
    push = pushforward(2, -0.75, QuadDiff([(-0.5, 1.0, 0.0)]))
    by_pole = {round(t.pole.real, 9): t for t in push.terms}
    assert abs(by_pole[-0.5].c2 - 1.0) < 1e-15
    assert abs(by_pole[-0.5].c1 + 2.0) < 1e-15
    assert abs(by_pole[-0.75].c1 - 2.0) < 1e-15


def test_pushforward_kills_dz2_over_z():
    for c in (0j, -0.75 + 0j, 0.3 + 0.4j):
        for d in (2, 3, 5):
            assert pushforward(d, c, QuadDiff([(0.0, 0.0, 1.0)])).is_zero()
    assert abs(pushforward_bruteforce(2, 0j, QuadDiff([(0.0, 0.0, 1.0)]),
                                      1.0 + 0j)) < 1e-15


def test_pushforward_bruteforce_golden():
    # preimages of 4 under z^2 are +-2
    val = pushforward_bruteforce(2, 0j, QuadDiff([(1.0, 0.0, 1.0)]), 4.0 + 0j)
    assert abs(val - 0.5 * (1 / 3 - 1 / 4)) < 1e-14


def test_pushforward_matches_bruteforce():
    # the oracle contract: 50 random (c, Q), 100 random z each
    rng = random.Random(20240817)
    checked = 0
    for _ in range(50):
        d = rng.choice([2, 3, 4, 5])
        c = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        terms = [(0.0, 0.0, rng.uniform(-1, 1))] if rng.random() < 0.3 else []
        q = random_simple_q(rng).plus(QuadDiff(terms))
        push = pushforward(d, c, q)
        for _ in range(100):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if abs(z - c) < 0.05:
                continue
            if push.terms and min(abs(z - t.pole) for t in push.terms) < 0.05:
                continue
            brute = pushforward_bruteforce(d, c, q, z)
            assert abs(push(z) - brute) <= 1e-9 * (1.0 + abs(brute))
            checked += 1
    assert checked > 4000


def test_pushforward_linearity():
    rng = random.Random(5)
    for _ in range(20):
        d = rng.choice([2, 3])
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        q1, q2 = random_simple_q(rng), random_simple_q(rng)
        lhs = pushforward(d, c, q1.plus(q2))
        rhs = pushforward(d, c, q1).plus(pushforward(d, c, q2))
        assert lhs.max_coeff_distance(rhs) < 1e-12


def test_pushforward_moves_every_nonzero_differential():
    # consistency with f_*Q != Q for Q a sum of simple poles
    rng = random.Random(99)
    for _ in range(100):
        d = rng.choice([2, 3])
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        q = random_simple_q(rng)
        if q.is_zero():
            continue
        assert pushforward(d, c, q).max_coeff_distance(q) > 1e-6


def test_pushforward_double_pole_at_zero_rejected():
    with pytest.raises(DoublePoleAtZero):
        pushforward(2, 0.5j, QuadDiff([(0.0, 1.0, 0.0)]))


def test_bruteforce_near_critical_value_rejected():
    with pytest.raises(NearCriticalValue):
        pushforward_bruteforce(2, 0.3 + 0j, QuadDiff([(1.0, 0.0, 1.0)]),
                               0.3 + 1e-12j)


def test_quaddiff_merges_and_cancels():
    q = QuadDiff([(1.0, 0.0, 2.0), (1.0 + 1e-12j, 0.0, -2.0)])
    assert q.is_zero()
    q2 = QuadDiff([(1.0, 1.0, 0.0), (1.0 + 1e-12j, 0.5, 3.0)])
    assert len(q2.terms) == 1
    assert abs(q2.terms[0].c2 - 1.5) < 1e-15


def test_quaddiff_json_shape():
    data = QuadDiff([(1.0 + 2.0j, 3.0, 4.0j)]).to_json()
    assert data == [{"a": [1.0, 2.0], "c2": [3.0, 0.0], "c1": [0.0, 4.0]}]


# ---------------------------------------------------------------------------
# norms

def test_inv_r_rect_goldens():
    # square of side 2 centered at the pole, and one quarter of it
    assert abs(_inv_r_rect(-1, 1, -1, 1) - 8 * math.asinh(1.0)) < 1e-13
    assert abs(_inv_r_rect(0, 1, 0, 1) - 2 * math.asinh(1.0)) < 1e-13


def test_inv_r_rect_additive():
    rng = random.Random(2)
    for _ in range(50):
        x0, x1 = sorted(rng.uniform(-2, 2) for _ in range(2))
        y0, y1 = sorted(rng.uniform(-2, 2) for _ in range(2))
        xm = rng.uniform(x0, x1)
        whole = _inv_r_rect(x0, x1, y0, y1)
        parts = _inv_r_rect(x0, xm, y0, y1) + _inv_r_rect(xm, x1, y0, y1)
        assert abs(whole - parts) < 1e-11 * (1.0 + abs(whole))


def test_disk_rect_overlap():
    assert abs(_disk_rect_overlap(1.0, -1, 1, -1, 1) - math.pi) < 1e-13
    assert abs(_disk_rect_overlap(1.0, 0, 2, -2, 2) - math.pi / 2) < 1e-13
    rng = random.Random(3)
    for _ in range(25):
        R = rng.uniform(0.5, 2.0)
        x0, x1 = sorted(rng.uniform(-2, 2) for _ in range(2))
        y0, y1 = sorted(rng.uniform(-2, 2) for _ in range(2))
        exact = _disk_rect_overlap(R, x0, x1, y0, y1)
        n = 150
        hits = sum(
            1
            for i in range(n)
            for j in range(n)
            if (x0 + (i + 0.5) * (x1 - x0) / n) ** 2
            + (y0 + (j + 0.5) * (y1 - y0) / n) ** 2
            < R * R
        )
        approx = hits / (n * n) * (x1 - x0) * (y1 - y0)
        assert abs(exact - approx) < 0.05 * (0.1 + approx)


def test_norm_dz2_over_z_is_2piR():
    for R in (1.0, 2.5):
        res = qd_norm(QuadDiff([(0.0, 0.0, 1.0)]), R)
        exact = 2 * math.pi * R
        assert abs(res.value - exact) < 1e-3 * exact
        assert abs(res.value - exact) <= res.error_estimate + 1e-6 * exact


def test_norm_annulus():
    res = qd_norm(QuadDiff([(0.0, 0.0, 1.0)]), 2.0, inner_radius=0.5)
    exact = 2 * math.pi * 1.5
    assert abs(res.value - exact) < 1e-3 * exact


def test_norm_offcenter_pole_vs_elliptic_integral():
    # integral of 1/|z-a| over |z|<R equals 4 R E((|a|/R)^2) for |a|<R
    for a, R in ((0.5 + 0j, 2.0), (1.0 + 0.3j, 2.5)):
        res = qd_norm(QuadDiff([(a, 0.0, 1.0)]), R)
        exact = 4 * R * ellipe(abs(a) ** 2 / R ** 2)
        assert abs(res.value - exact) < 1e-3 * exact


def test_norm_region_additivity():
    rng = random.Random(7)
    q = random_simple_q(rng, n_poles=2)
    whole = qd_norm(q, 2.2).value
    parts = qd_norm(q, 1.3).value + qd_norm(q, 2.2, inner_radius=1.3).value
    assert abs(whole - parts) < 3e-3 * whole


def test_norm_zero_differential():
    assert qd_norm(QuadDiff(), 2.0).value == 0.0


def test_norm_rejects_double_pole_inside():
    with pytest.raises(DoublePoleInRegion):
        qd_norm(QuadDiff([(0.5, 1.0, 0.0)]), 1.0)
    # outside the region is fine and finite
    res = qd_norm(QuadDiff([(3.0, 1.0, 0.0)]), 1.0)
    assert 0 < res.value < math.inf


def test_norm_bad_region():
    with pytest.raises(PreconditionError):
        qd_norm(QuadDiff([(0.0, 0.0, 1.0)]), 1.0, inner_radius=1.5)


# ---------------------------------------------------------------------------
# contraction of the transfer operator

def test_contraction_spec_point():
    rep = contraction_check(2, 0j, QuadDiff([(1.0, 0.0, 1.0)]), 3.0)
    assert rep.contracts()
    assert rep.norm_pushforward < rep.norm_preimage + rep.error_estimate
    assert rep.norm_preimage < rep.norm_outer - rep.error_estimate
    assert abs(rep.preimage_radius - math.sqrt(3)) < 1e-12


def test_contraction_random_inputs():
    rng = random.Random(11)
    for _ in range(5):
        d = rng.choice([2, 3])
        c = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        rep = contraction_check(d, c, random_simple_q(rng), 3.0)
        assert rep.contracts()


def test_contraction_guards():
    q = QuadDiff([(1.0, 0.0, 1.0)])
    with pytest.raises(RegionNotCompactlyContained):
        contraction_check(2, 1.5 + 0j, q, 2.0)
    with pytest.raises(PreconditionError):
        contraction_check(2, 0j, QuadDiff(), 3.0)


# ---------------------------------------------------------------------------
# invariant differential at a multiplier-one orbit (simple poles)

def test_case2_fixed_point_at_quarter():
    cert = case2_certificate(2, 0.25, 0.5, 1)
    assert abs(cert.dP_dc - 1.0) < 1e-12
    assert cert.residual < 1e-12
    assert len(cert.differential.terms) == 1
    assert abs(cert.differential.terms[0].c1 - 1.0) < 1e-12


def test_case2_airplane():
    c, z, _ = refine_parabolic_from_c(2, -1.75, 3)
    cert = case2_certificate(2, c, z, 3)
    assert cert.residual < 1e-10
    assert abs(cert.dP_dc) > 0.1
    assert abs(cert.dP_dc.imag) < 1e-8


def test_case2_degenerate_orbit_cancels():
    # at c=-3/4 the "period 2" orbit through -1/2 is the fixed point twice;
    # the weights 1 + f'(-1/2) = 0 cancel, so Q = 0 and dP_2/dc must vanish
    cert = case2_certificate(2, -0.75, -0.5, 2)
    assert cert.differential.is_zero()
    assert abs(cert.dP_dc) < 1e-10
    assert cert.residual < 1e-12


def test_case2_rabbit_root_cancels():
    import cmath
    alpha = (1 - cmath.sqrt(1 - 4 * RABBIT_ROOT)) / 2
    cert = case2_certificate(2, RABBIT_ROOT, alpha, 3)
    assert cert.differential.is_zero()
    assert abs(cert.dP_dc) < 1e-10


def test_case2_period_one_seen_as_three():
    # multiplier-one fixed point of z^3 + 2/(3 sqrt 3): weights merge to
    # 3/(z - alpha) and the identity forces dP_3/dc = 3
    c = 2 / (3 * math.sqrt(3))
    z = 1 / math.sqrt(3)
    cert = case2_certificate(3, c, z, 3)
    assert len(cert.differential.terms) == 1
    assert abs(cert.differential.terms[0].c1 - 3.0) < 1e-10
    assert abs(cert.dP_dc - 3.0) < 1e-10
    assert cert.residual < 1e-10


def test_case2_degree_three_primitive():
    sol = parabolic_parameters(3, 3)
    root = min(sol.roots, key=lambda w: abs(w - (-0.5858 - 0.5538j)))
    c, z, _ = refine_parabolic_from_c(3, root, 3)
    cert = case2_certificate(3, c, z, 3)
    assert cert.residual < 1e-10
    assert abs(cert.dP_dc) > 0.1


def test_case2_rejects_non_parabolic():
    z0 = (-1 + math.sqrt(2)) / 2  # period-2 orbit at c=-5/4, multiplier -1
    with pytest.raises(NotParabolic):
        case2_certificate(2, -1.25, z0, 2)


# ---------------------------------------------------------------------------
# invariant differential with double poles (multiplier != 1)

def test_double_pole_basilica_root():
    # rho(c) = 1 - sqrt(1-4c) gives rho(-3/4) = -1 and rho'(-3/4) = 1,
    # so sum(mu) = rho'/rho = -1
    cert = double_pole_certificate(2, -0.75, -0.5, 1)
    assert abs(cert.rho + 1.0) < 1e-12
    assert abs(cert.sum_mu + 1.0) < 1e-12
    assert abs(cert.rho_dot - 1.0) < 1e-6
    assert cert.identity_residual < 1e-12
    assert cert.derivative_residual < 1e-8
    assert cert.mu.recursion_residual(2, cert.orbit) < 1e-12


def test_double_pole_period_two_tip():
    # at c=-5/4 the period-2 multiplier is 4(c+1), so rho'/rho = 1/(c+1) = -4
    z0 = (-1 + math.sqrt(2)) / 2
    cert = double_pole_certificate(2, -1.25, z0, 2)
    assert abs(cert.rho + 1.0) < 1e-12
    assert abs(cert.sum_mu + 4.0) < 1e-10
    assert cert.identity_residual < 1e-12
    assert cert.derivative_residual < 1e-8


def test_double_pole_rabbit_fixed_point():
    import cmath
    alpha = (1 - cmath.sqrt(1 - 4 * RABBIT_ROOT)) / 2
    cert = double_pole_certificate(2, RABBIT_ROOT, alpha, 1)
    assert abs(abs(cert.rho) - 1.0) < 1e-12  # e^{2 pi i/3}
    assert abs(cert.rho_dot) > 0.1
    assert cert.identity_residual < 1e-12
    assert cert.derivative_residual < 1e-8


def test_double_pole_degree_three():
    pts = periodic_points(3, 0.4, 2, exact=True)
    cert = double_pole_certificate(3, 0.4, pts[0], 2)
    assert cert.identity_residual < 1e-12
    assert cert.derivative_residual < 1e-8
    assert cert.mu.recursion_residual(3, cert.orbit) < 1e-12


def test_double_pole_rejects_multiplier_one():
    c, z, _ = refine_parabolic_from_c(2, -1.75, 3)
    with pytest.raises(MultiplierOne):
        double_pole_certificate(2, c, z, 3)


def test_double_pole_rejects_collisions():
    with pytest.raises(PoleCollision):
        double_pole_certificate(2, -0.75, -0.5, 2)
    with pytest.raises(DoublePoleAtZero):
        double_pole_certificate(2, 0j, 0j, 1)


def test_mu_tuple_detects_corruption():
    cert = double_pole_certificate(2, -1.25, (-1 + math.sqrt(2)) / 2, 2)
    bad = MuTuple((cert.mu.values[0] + 0.1, cert.mu.values[1]))
    assert bad.recursion_residual(2, cert.orbit) > 1e-3
