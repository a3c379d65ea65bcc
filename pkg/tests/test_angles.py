from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dynatomic import (Angle, angle_from_word, d_expansion, exact_period,
                       kneading_sequence, maximal_in_orbit, tau_iterate)
from dynatomic.errors import NotPeriodic, ZeroAngle
from dynatomic.words import Word


def A(text, d):
    return Angle.parse(text, d)


class TestTau:
    def test_single_step(self):
        assert tau_iterate(A("1/7", 3)).value == Fraction(3, 7)

    def test_zero_fixed(self):
        assert tau_iterate(A("0/1", 2), 5).value == 0

    def test_two_steps(self):
        assert tau_iterate(A("19/80", 3), 2).value == Fraction(11, 80)


class TestExpansion:
    def test_known_expansions(self):
        assert str(d_expansion(A("20/31", 4))) == "22110"
        assert str(d_expansion(A("13/14", 3))) == "221001"
        assert str(d_expansion(A("0/1", 2))) == "0"

    def test_not_periodic(self):
        with pytest.raises(NotPeriodic):
            d_expansion(A("1/6", 2))

    def test_inverse(self):
        assert angle_from_word(Word.parse("221001", 3)).value == Fraction(13, 14)
        assert angle_from_word(Word.parse("10", 2)).value == Fraction(2, 3)
        assert angle_from_word(Word.parse("2221", 3)).value == Fraction(79, 80)

    @given(st.integers(2, 5), st.integers(1, 1000))
    def test_round_trip(self, d, p):
        q = 2 * p + 1
        while q % d == 0:
            q += 2  # keep the denominator coprime to d (q odd handles d=2)
        if Fraction(p, q) >= 1:
            p %= q
        theta = Angle(Fraction(p, q), d)
        if theta.value == 0 or not theta.is_periodic():
            return
        assert angle_from_word(d_expansion(theta)).value == theta.value


class TestOrbit:
    def test_maximality(self):
        assert maximal_in_orbit(A("5/31", 4)) == (False, A("20/31", 4))
        assert maximal_in_orbit(A("2/3", 2)) == (True, A("2/3", 2))
        assert maximal_in_orbit(A("19/80", 3)) == (False, A("57/80", 3))

    def test_period(self):
        assert exact_period(A("1/7", 3)) == 6
        assert exact_period(A("2/3", 2)) == 2
        assert exact_period(A("0/1", 5)) == 1


class TestKneading:
    @pytest.mark.parametrize("text,d,expect", [
        ("1/7", 3, "12102*"),
        ("27/28", 3, "22200*"),
        ("28/31", 4, "3213*"),
        ("13/14", 3, "22100*"),
        ("2/3", 2, "1*"),
        ("6/7", 2, "11*"),
        ("57/80", 3, "201*"),
    ])
    def test_golden(self, text, d, expect):
        assert str(kneading_sequence(A(text, d))) == expect

    def test_zero_rejected(self):
        with pytest.raises(ZeroAngle):
            kneading_sequence(A("0/1", 2))

    def test_body_matches_expansion_prefix(self):
        # realization property: for maximal angles, the kneading body is
        # the expansion without its last digit, and that digit is <= d-2
        for d in (2, 3, 4, 5):
            top = d ** 6 - 1
            for p in range(1, top):
                theta = Angle(Fraction(p, top), d)
                n = exact_period(theta)
                if n < 2 or not maximal_in_orbit(theta)[0]:
                    continue
                exp = d_expansion(theta)
                nu = kneading_sequence(theta)
                assert nu.body == exp.digits[:-1]
                assert exp.digits[-1] <= d - 2
