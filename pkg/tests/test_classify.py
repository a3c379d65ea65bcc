from fractions import Fraction

import pytest

from dynatomic import (Angle, Verdict, angle_from_word, beta_family,
                       classify_angle, d_expansion, exact_period,
                       itinerary_of_angle, kneading_sequence,
                       maximal_in_orbit, special_data)
from dynatomic.errors import (BoundaryHit, NotMaximal, NotSatelliteCandidate,
                              PeriodOne, SpecialAngle)
from dynatomic.words import Word


def A(text, d):
    return Angle.parse(text, d)


class TestItinerary:
    def test_against_exact_arc_membership(self):
        # 2/3 lies in (3/7, 13/14) -> digit 1; its image 1/3 lies in the
        # wrap-around arc through 0 -> digit 0
        got = itinerary_of_angle(A("2/3", 2), A("6/7", 2), 2)
        assert str(got) == "10"

    def test_kneading_consistency(self):
        assert str(itinerary_of_angle(A("1/7", 3), A("1/7", 3), 5)) == "12102"

    def test_zero_angle_is_fixed_in_sector_zero(self):
        assert str(itinerary_of_angle(A("0/1", 2), A("2/3", 2), 3)) == "000"

    def test_boundary_hit(self):
        # 1/3 maps to 2/3 whose partition cut angles include (2/3+1)/2...
        # the angle theta/d itself is a cut point
        with pytest.raises(BoundaryHit):
            itinerary_of_angle(A("1/3", 2), A("2/3", 2), 1)

    def test_matches_kneading_body_everywhere(self):
        for d in (2, 3, 4):
            top = d ** 5 - 1
            for p in range(1, top):
                theta = Angle(Fraction(p, top), d)
                n = exact_period(theta)
                if n < 2:
                    continue
                body = kneading_sequence(theta).body
                assert itinerary_of_angle(theta, theta, n - 1).digits == body


class TestClassify:
    def test_airplane_like_angle_is_primitive(self):
        got = classify_angle(A("4/7", 2))
        assert got.verdict == Verdict.PRIMITIVE_CERTIFIED
        assert str(got.kneading) == "10*"

    def test_special(self):
        got = classify_angle(A("6/7", 2))
        assert got.verdict == Verdict.SPECIAL_SATELLITE
        assert got.eta == A("5/7", 2)

    def test_orbit_of_19_80(self):
        # the maximal representative of the orbit {11,19,33,57}/80 has
        # acyclic kneading 201*, hence a primitive landing parameter; the
        # satellite pair of that orbit is (11/80, 19/80), neither maximal
        got = classify_angle(A("57/80", 3))
        assert got.verdict == Verdict.PRIMITIVE_CERTIFIED
        assert got.reason == "kneading sequence is acyclic"

    def test_satellite_candidate(self):
        theta = angle_from_word(Word.parse("2120", 3))
        assert theta.value == Fraction(69, 80)
        got = classify_angle(theta)
        assert got.verdict == Verdict.SATELLITE_CANDIDATE
        assert (str(got.cyclic.w), got.cyclic.s) == ("21", 2)

    def test_not_maximal_rejected(self):
        with pytest.raises(NotMaximal):
            classify_angle(A("19/80", 3))

    def test_period_one_rejected(self):
        with pytest.raises(PeriodOne):
            classify_angle(A("1/2", 3))

    def test_candidates_always_have_cyclic_kneading(self):
        for d in (2, 3):
            top = d ** 6 - 1
            for p in range(1, top):
                theta = Angle(Fraction(p, top), d)
                if exact_period(theta) < 2 or not maximal_in_orbit(theta)[0]:
                    continue
                got = classify_angle(theta)
                if got.verdict == Verdict.SATELLITE_CANDIDATE:
                    assert got.cyclic is not None
                    assert d_expansion(theta).digits[-1] == \
                        got.cyclic.w.digits[-1] - 1


class TestSpecialData:
    @pytest.mark.parametrize("d,n,theta,eta", [
        (3, 4, "79/80", "77/80"),
        (2, 3, "6/7", "5/7"),
        (2, 2, "2/3", "1/3"),
    ])
    def test_values(self, d, n, theta, eta):
        got_theta, got_eta = special_data(d, n)
        assert got_theta == A(theta, d)
        assert got_eta == A(eta, d)

    def test_eta_in_same_orbit(self):
        for d in (2, 3, 4):
            for n in range(2, 7):
                theta, eta = special_data(d, n)
                orbit_values = set()
                cur = theta
                for _ in range(exact_period(theta)):
                    orbit_values.add(cur.value)
                    cur = Angle(cur.value * d, d)
                assert eta.value in orbit_values


class TestBetaFamily:
    def test_single_beta_chain(self):
        theta = angle_from_word(Word.parse("2120", 3))
        fam = beta_family(theta)
        assert len(fam.members) == 1  # nu_t = 1: only beta_{-1}
        beta, (a, b) = fam.members[0]
        assert beta.value == Fraction(17, 20)
        assert str(d_expansion(beta)) == "2112"
        assert (str(a), str(b)) == ("2122", "2120")

    def test_rejects_primitive(self):
        with pytest.raises(NotSatelliteCandidate):
            beta_family(A("3/4", 3))  # expansion 20, kneading 2*: last digit 0 != 1

    def test_rejects_special(self):
        with pytest.raises(SpecialAngle):
            beta_family(A("6/7", 2))

    def test_degree_four_family(self):
        # .repeat(32) = 14/15 is the special angle at this degree/period, so
        # the chain contract rejects it; the nu_t = 2 candidate .repeat(21)
        # produces the two-member chain beta_0, beta_{-1}
        with pytest.raises(SpecialAngle):
            beta_family(angle_from_word(Word.parse("32", 4)))
        theta = angle_from_word(Word.parse("21", 4))
        fam = beta_family(theta)
        words = [str(d_expansion(beta)) for beta, _ in fam.members]
        assert words == ["20", "13"]

    def test_borrowing_case(self):
        # kneading body ends in 0, so beta_{-1} needs a base-d borrow:
        # theta = .repeat(201200) has body 20120 and beta_{-1} = .repeat(201122)
        theta = angle_from_word(Word.parse("201200", 3))
        got = classify_angle(theta)
        assert got.verdict == Verdict.SATELLITE_CANDIDATE
        fam = beta_family(theta)
        beta, (a, b) = fam.members[-1]
        assert str(d_expansion(beta)) == "201122"
        assert kneading_sequence(beta).body == got.kneading.body
        assert (str(a), str(b)) == ("201202", "201200")

    def test_family_invariants_small_range(self):
        for d in (2, 3):
            top = d ** 6 - 1
            for p in range(1, top):
                theta = Angle(Fraction(p, top), d)
                if exact_period(theta) < 2 or not maximal_in_orbit(theta)[0]:
                    continue
                if classify_angle(theta).verdict != Verdict.SATELLITE_CANDIDATE:
                    continue
                fam = beta_family(theta)
                n = exact_period(theta)
                body = kneading_sequence(theta).body
                for beta, _ in fam.members:
                    assert exact_period(beta) == n
                    assert kneading_sequence(beta).body == body
