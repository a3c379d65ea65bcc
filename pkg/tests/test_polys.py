import cmath
import math
import random

import numpy as np
import pytest
import sympy

from dynatomic import exactpoly as ep
from dynatomic.dynpoly import (
    DynatomicFactor,
    Jet3,
    dPn_dc,
    dynatomic_factor,
    jet_normal_form,
    multiplier,
    orbit_points,
    orbit_splitting,
    parabolic_parameters,
    periodic_points,
    refine_parabolic,
)
from dynatomic.errors import (
    BudgetExceeded,
    MultiplierMismatch,
    NotParabolic,
    PreconditionError,
)


def iterate(d, c, z, n):
    for _ in range(n):
        z = z ** d + c
    return z


# ---------------------------------------------------------------------------
# derivative of the return map in c

def test_dPn_dc_matches_finite_differences():
    rng = random.Random(5)
    for _ in range(60):
        d = rng.choice([2, 3, 4])
        n = rng.randint(1, 6)
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        got = dPn_dc(d, c, z, n)
        h = 1e-6
        fd = (iterate(d, c + h, z, n) - iterate(d, c - h, z, n)) / (2 * h)
        assert abs(got - fd) < 1e-4 * (1 + abs(got))


def test_dPn_dc_first_step_is_one():
    assert dPn_dc(2, 0.3 + 0.1j, 0.7, 1) == 1
    assert dPn_dc(5, -2j, 1.5, 1) == 1


def test_dPn_dc_degenerate_at_basilica_root():
    # At c = -3/4 the fixed point -1/2 sits on the period-2 curve as well,
    # and the c-derivative of the second return map vanishes there.
    assert abs(dPn_dc(2, -0.75, -0.5, 2)) < 1e-12


# ---------------------------------------------------------------------------
# simultaneous periodic points

def test_periodic_points_squared_map():
    pts = periodic_points(2, 0, 2)
    want = sorted([0, 1, complex(-0.5, math.sqrt(3) / 2),
                   complex(-0.5, -math.sqrt(3) / 2)],
                  key=lambda w: (w.real, w.imag))
    assert len(pts) == 4
    for a, b in zip(pts, want):
        assert abs(a - b) < 1e-10


def test_periodic_points_exact_filter():
    ex = periodic_points(2, 0, 2, exact=True)
    assert len(ex) == 2
    assert all(abs(w.real + 0.5) < 1e-10 for w in ex)


def test_periodic_points_closed_under_map():
    for d, c, n in [(2, -0.1 + 0.7j, 5), (3, 0.2 - 0.3j, 3), (4, 0.1j, 2)]:
        pts = periodic_points(d, c, n)
        assert len(pts) == d ** n
        for z in pts[::7]:
            image = z ** d + c
            assert min(abs(image - w) for w in pts) < 1e-8


def test_periodic_points_deterministic():
    a = periodic_points(3, 0.1 + 0.2j, 4)
    b = periodic_points(3, 0.1 + 0.2j, 4)
    assert a == b
    assert a == sorted(a, key=lambda w: (w.real, w.imag))


def test_periodic_points_residuals():
    for d, c, n in [(2, -1.7543, 7), (3, -0.1 + 0.75j, 4)]:
        pts = periodic_points(d, c, n)
        scale = 1 + abs(c)
        for z in pts:
            assert abs(iterate(d, c, z, n) - z) < 1e-10 * scale


def test_periodic_points_budget():
    with pytest.raises(BudgetExceeded):
        periodic_points(2, 0, 13)


# ---------------------------------------------------------------------------
# exact dynatomic division

def test_quotient_golden_period_two():
    fac = dynatomic_factor(2, 1, 2)
    assert fac.quotient == {0: [1, 1], 1: [1], 2: [1]}  # z^2 + z + c + 1
    assert fac.z_degree == 2 and fac.c_degree == 1


def test_quotient_trivial_when_s_is_one():
    for d, m in [(2, 1), (2, 3), (3, 2)]:
        fac = dynatomic_factor(d, m, 1)
        assert fac.quotient == {0: [1]}


def test_division_identity_at_random_points():
    # keep |c|, |z| small: the quotient reaches z-degree 726 and float
    # evaluation of such a polynomial is only trustworthy well inside the
    # unit disk
    rng = random.Random(17)
    for d in (2, 3):
        for m in range(1, 7):
            for s in range(1, 7):
                if m * s > 6:
                    continue
                fac = dynatomic_factor(d, m, s)
                checked = 0
                while checked < 3:
                    c = 0.5 * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                    z = 0.5 * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                    num = iterate(d, c, z, m * s) - z
                    den = iterate(d, c, z, m) - z
                    if abs(den) < 1e-3:
                        continue
                    quo = fac.evaluate(c, z)
                    assert abs(quo - num / den) < 1e-7 * (1 + abs(quo))
                    checked += 1


def test_division_budget_guards():
    with pytest.raises(BudgetExceeded):
        dynatomic_factor(4, 1, 1)
    with pytest.raises(BudgetExceeded):
        dynatomic_factor(2, 4, 2)
    with pytest.raises(PreconditionError):
        dynatomic_factor(2, 0, 3)


def test_closure_of_period_one_curve():
    # f_c(z) - z = z^2 - z + c: the period-1 curve is the graph c = z - z^2
    fac = dynatomic_factor(2, 1, 1)
    assert fac.divisor == {0: [0, 1], 1: [-1], 2: [1]}
    rng = random.Random(3)
    for _ in range(10):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        c = z - z ** 2
        assert abs(ep.zc_evaluate(fac.divisor, c, z)) < 1e-9 * (1 + abs(c))


# ---------------------------------------------------------------------------
# parabolic parameters (exact elimination + numerical roots)

def test_parabolic_period_one_golden():
    sol = parabolic_parameters(2, 1)
    assert sol.polynomial == [-1, 4]  # 4c - 1
    assert len(sol.roots) == 1
    assert abs(sol.roots[0] - 0.25) < 1e-10


def test_parabolic_period_two_golden():
    sol = parabolic_parameters(2, 2)
    # (4c+3)^3 (4c-1), expanded
    assert sol.polynomial == [-27, 0, 288, 512, 256]
    assert any(abs(w + 0.75) < 1e-10 for w in sol.roots)
    assert any(abs(w - 0.25) < 1e-10 for w in sol.roots)


def test_parabolic_period_three_roots():
    sol = parabolic_parameters(2, 3)
    assert len(sol.polynomial) - 1 == 12
    rabbit = complex(-0.125, 3 * math.sqrt(3) / 8)
    for target in (-1.75, 0.25, rabbit, rabbit.conjugate()):
        assert min(abs(w - target) for w in sol.roots) < 1e-8
    assert max(sol.residuals) < 1e-8


def test_parabolic_cubic_fixed_points():
    # d=3: fixed points with multiplier one at c = z - z^3, 3z^2 = 1
    sol = parabolic_parameters(3, 1)
    want = 2 / (3 * math.sqrt(3))
    assert len(sol.roots) == 2
    assert min(abs(w - want) for w in sol.roots) < 1e-10
    assert min(abs(w + want) for w in sol.roots) < 1e-10


def test_square_free_part_cross_check():
    x = sympy.symbols("x")
    rng = random.Random(11)
    for _ in range(25):
        factors = [[rng.randint(-4, 4), rng.randint(1, 4)]
                   for _ in range(rng.randint(1, 4))]
        poly = [rng.randint(1, 5)]
        for fac in factors:
            for _ in range(rng.randint(1, 3)):
                poly = ep.mul(poly, fac)
        mine = ep.square_free_part(poly)
        expr = sympy.Poly(list(reversed(poly)), x).sqf_part()
        theirs = [int(v) for v in reversed(expr.all_coeffs())]
        lead = math.gcd(mine[-1], theirs[-1])
        assert [v * (theirs[-1] // lead) for v in mine] == \
               [v * (mine[-1] // lead) for v in theirs]


def test_polynomial_gcd_exact_division_roundtrip():
    rng = random.Random(23)
    for _ in range(25):
        g = [rng.randint(-3, 3) for _ in range(rng.randint(1, 4))] + [rng.randint(1, 3)]
        u = [rng.randint(-3, 3) for _ in range(rng.randint(1, 4))] + [rng.randint(1, 3)]
        a = ep.mul(g, u)
        assert ep.trim(list(ep.int_divexact(a, g))) == ep.trim(list(u))
        # gcd(g*u, 7*g) = g up to content, since 7 is coprime to everything
        assert ep.int_gcd_poly(a, ep.mul(g, [7])) == ep._primitive(g)


def _sympy_resultant_abs(d, n):
    z, c = sympy.symbols("z c")
    f = z
    for _ in range(n):
        f = sympy.expand(f ** d + c)
    deriv = sympy.expand(sympy.diff(f, z))
    res = sympy.resultant(sympy.Poly(f - z, z), sympy.Poly(deriv - 1, z))
    return sympy.Poly(sympy.expand(res), c).all_coeffs()


@pytest.mark.parametrize("d,n", [(2, 1), (2, 2), (3, 1), (2, 3)])
def test_parabolic_polynomial_cross_check(d, n):
    # sympy's resultant convention can differ by a global sign, so compare
    # up to one overall flip
    sol = parabolic_parameters(d, n, refine=False)
    theirs = [int(x) for x in reversed(_sympy_resultant_abs(d, n))]
    mine = sol.polynomial
    assert mine == theirs or mine == [-x for x in theirs]


def _fixed_point_parabolics(d, s):
    # fixed points whose period-s return derivative is 1: solve d z^(d-1) = mu
    # with mu^s = 1, then c = z - z^d
    out = []
    for k in range(s):
        mu = cmath.exp(2j * math.pi * k / s)
        for j in range(d - 1):
            z = (mu / d) ** (1.0 / (d - 1)) * cmath.exp(2j * math.pi * j / (d - 1))
            out.append(z - z ** d)
    return out


def test_parabolic_cubic_period_three_full_inventory():
    # the multiplier map of a cubic hyperbolic component is a double cover,
    # so every period-3 component (4 satellite + 4 primitive) carries two
    # boundary parameters with cycle multiplier one; together with the two
    # period-1 cusps that makes 18 distinct parameters
    sol = parabolic_parameters(3, 3)
    assert len(sol.roots) == 18
    assert max(sol.residuals) < 1e-8
    for target in _fixed_point_parabolics(3, 3):
        assert min(abs(w - target) for w in sol.roots) < 1e-9
    for base in (complex(-0.585855345712523, 0.553775164054958),
                 complex(-0.259818131016733, 1.254855159697731),
                 complex(-0.268323207539630, 1.265464692065808)):
        # frozen from a separate Newton run on (f^3(z)=z, (f^3)'(z)=1)
        for target in (base, base.conjugate(), -base, -base.conjugate()):
            assert min(abs(w - target) for w in sol.roots) < 1e-9


def test_parabolic_quartic_inventory_includes_tangent_window():
    # the real period-4 window opens by a tangent bifurcation whose cycle
    # derivative is very stiff; its parameter used to be dropped
    sol = parabolic_parameters(2, 4)
    assert len(sol.roots) == 8
    assert max(sol.residuals) < 1e-8
    targets = [complex(-1.940550788976150, 0.0), -1.25, -0.75, 0.25,
               complex(0.25, 0.5), complex(0.25, -0.5),
               complex(-0.154724605511925, 1.031047227748952),
               complex(-0.154724605511925, -1.031047227748952)]
    for target in targets:
        assert min(abs(w - target) for w in sol.roots) < 1e-9


def test_parabolic_cubic_period_two_satellite_attachments():
    sol = parabolic_parameters(3, 2)
    assert len(sol.roots) == 6
    for target in _fixed_point_parabolics(3, 2):
        assert min(abs(w - target) for w in sol.roots) < 1e-9


def test_refine_rejects_seed_far_from_parabolic():
    from dynatomic.dynpoly import refine_parabolic_from_c
    with pytest.raises(NotParabolic):
        refine_parabolic_from_c(2, 2.0 + 0j, 2)


def test_parabolic_budget():
    with pytest.raises(BudgetExceeded):
        parabolic_parameters(2, 5)
    with pytest.raises(BudgetExceeded):
        parabolic_parameters(4, 2)


# ---------------------------------------------------------------------------
# refinement, jets, splitting

def test_refine_parabolic_basilica():
    # Within the period-2 system the fixed point -1/2 is a triple root, so
    # the z-coordinate of the Newton limit only resolves to ~sqrt(eps);
    # the parameter coordinate stays sharp.
    c, z, res = refine_parabolic(2, -0.74 + 0.01j, -0.49, 2)
    assert abs(c + 0.75) < 1e-10
    assert abs(z + 0.5) < 2e-6
    assert res < 1e-10


def test_refine_parabolic_airplane_is_sharp():
    # primitive case: the system is regular, both coordinates converge hard
    pts = periodic_points(2, -1.76, 3)
    seed = min(pts, key=lambda w: abs(multiplier(2, -1.76, w, 3) - 1))
    c, z, res = refine_parabolic(2, -1.76, seed, 3)
    assert abs(c + 1.75) < 1e-12
    assert abs(iterate(2, c, z, 3) - z) < 1e-12
    assert res < 1e-12


def test_jet_at_basilica_root():
    jet = jet_normal_form(2, -0.75, -0.5, 1, 2)
    assert abs(jet.a0) < 1e-12
    assert abs(jet.a1 - 1) < 1e-12
    assert abs(jet.a2) < 1e-12


def test_jet_at_rabbit_root():
    c = complex(-0.125, 3 * math.sqrt(3) / 8)
    # fixed point with multiplier a primitive cube root of unity
    rho = cmath.exp(2j * math.pi / 3)
    z = rho / 2  # f'(z) = 2z = rho
    assert abs(iterate(2, c, z, 1) - z) < 1e-12
    jet = jet_normal_form(2, c, z, 1, 3)
    assert abs(jet.a0) < 1e-10
    assert abs(jet.a1 - 1) < 1e-10
    assert abs(jet.a2) < 1e-9


def test_jet_rejects_wrong_multiplier():
    with pytest.raises(MultiplierMismatch):
        jet_normal_form(2, 0.1, periodic_points(2, 0.1, 1)[0], 1, 2)
    with pytest.raises(MultiplierMismatch):
        # multiplier exactly 1 is excluded
        jet_normal_form(2, 0.25, 0.5, 1, 2)


def test_jet_composition_algebra():
    f = Jet3(0.1, 2.0, 0.5)
    g = Jet3(-0.2, 1.5, -1.0)
    h = g.compose(f)
    # compare against direct polynomial composition truncated at order 2
    for w in (0.01, 0.02j, 0.01 - 0.015j):
        inner = f.a0 + f.a1 * w + f.a2 * w * w
        direct = g.a0 + g.a1 * inner + g.a2 * inner * inner
        jet_val = h.a0 + h.a1 * w + h.a2 * w * w
        # discarded terms start at order 3
        assert abs(direct - jet_val) < 10 * abs(w) ** 3


def test_orbit_splitting_basilica():
    lengths = orbit_splitting(2, -0.75, 2)
    assert lengths == [1, 2]


def test_orbit_splitting_airplane():
    lengths = orbit_splitting(2, -1.75, 3)
    assert lengths == [3, 3]


def test_orbit_splitting_rejects_generic_parameter():
    with pytest.raises(NotParabolic):
        orbit_splitting(2, 0.1 + 0.1j, 3)


def test_multiplier_chain_rule():
    c = 0.2 - 0.4j
    pts = periodic_points(2, c, 3, exact=True)
    z = pts[0]
    rho = multiplier(2, c, z, 3)
    want = 1.0
    for w in orbit_points(2, c, z, 3):
        want = want * 2 * w
    assert abs(rho - want) < 1e-12
