"""Tests for local points, obstruction reports, and the twist family of
the quartic curves ell*Y^2 = Z^4 - p."""

from fractions import Fraction

import pytest

from localglobal.reichardt_lind import (
    DensityReport,
    LocalPoint,
    NoPoint,
    TwistParams,
    density_experiment,
    exhaustive_search,
    forced_section_invariants,
    local_point,
    model_smoothness_check,
    point_obstruction,
    twist_conditions,
    twist_search,
    verify_local_point,
)
from localglobal.symbols import REAL_PLACE, InvariantValue, Place, hilbert2

RL = TwistParams(2, 17)
ZERO = InvariantValue.zero()
HALF = InvariantValue.half()


class TestTwistParams:
    def test_valid(self):
        assert RL.bad_finite_places == (Place.finite(2), Place.finite(17))
        assert TwistParams(6, 73).bad_finite_places == (
            Place.finite(2),
            Place.finite(3),
            Place.finite(73),
        )

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            TwistParams(4, 17)  # not squarefree
        with pytest.raises(ValueError):
            TwistParams(2, 15)  # not prime
        with pytest.raises(ValueError):
            TwistParams(34, 17)  # not coprime
        with pytest.raises(ValueError):
            TwistParams(0, 17)


class TestLocalPoint:
    def test_point_at_p(self):
        pt = local_point(RL, 17)
        assert isinstance(pt, LocalPoint)
        assert verify_local_point(RL, pt)
        assert not pt.y.is_zero

    def test_point_at_two(self):
        pt = local_point(RL, 2)
        assert isinstance(pt, LocalPoint)
        assert verify_local_point(RL, pt)
        # the dyadic points sit over z^4 = 17 mod 32, i.e. v(z) = 0,
        # and have y of even positive valuation
        assert pt.z.valuation() == 0
        assert pt.y.valuation() > 0 and pt.y.valuation() % 2 == 0

    def test_point_at_real_place(self):
        pt = local_point(RL, "infinity")
        assert pt.chart == "real"
        assert verify_local_point(RL, pt)
        assert Fraction(pt.z) ** 4 > 17

    def test_points_at_good_places(self):
        for q in (3, 5, 7, 11, 13, 97):
            pt = local_point(RL, q)
            assert isinstance(pt, LocalPoint), f"missing point at {q}"
            assert verify_local_point(RL, pt)

    def test_no_dyadic_point_for_odd_twist_nine_mod_sixteen(self):
        tw = TwistParams(11, 41)  # 41 = 9 mod 16
        assert isinstance(local_point(tw, 2, allow_y_zero=True), NoPoint)

    def test_y_zero_point_only_when_allowed(self):
        # 17 = 1 mod 16 is a fourth power in Q_2: with y = 0 allowed the
        # search may return the ramification-free point on the z-axis
        pt = local_point(RL, 2, allow_y_zero=True)
        assert isinstance(pt, LocalPoint)
        pt_strict = local_point(RL, 2)
        assert not pt_strict.y.is_zero

    def test_variants_give_distinct_points(self):
        seen = set()
        for variant in range(6):
            pt = local_point(RL, 17, variant=variant)
            seen.add((pt.y.unit_residue(2), pt.z.unit_residue(2)))
        assert len(seen) >= 3


class TestPointObstruction:
    def test_reichardt_lind_total(self):
        rep = point_obstruction(RL)
        assert rep.total == frozenset({HALF})
        assert rep.verdict == "obstructed"

    def test_contribution_at_two_vanishes(self):
        rep = point_obstruction(RL)
        assert rep.contribution(2) == frozenset({ZERO})
        assert rep.contribution(17) == frozenset({HALF})
        assert rep.contribution(REAL_PLACE) == frozenset({ZERO})

    def test_good_place_contribution_vanishes(self):
        rep = point_obstruction(RL, places=(2, 7, 17, REAL_PLACE))
        assert rep.contribution(7) == frozenset({ZERO})
        assert rep.total == frozenset({HALF})

    def test_total_constant_across_twenty_adelic_points(self):
        totals = {point_obstruction(RL, variant=i).total for i in range(20)}
        assert totals == {frozenset({HALF})}


class TestForcedSectionInvariants:
    def test_reichardt_lind_sets(self):
        rep = forced_section_invariants(RL)
        assert rep.contribution(17) == frozenset({HALF})
        assert rep.contribution(2) == frozenset({ZERO})
        assert rep.contribution(REAL_PLACE) == frozenset({ZERO})
        assert rep.total == frozenset({HALF})
        assert rep.verdict == "obstructed"

    def test_twisted_examples_obstructed(self):
        for ell, p in ((6, 73), (11, 97), (19, 17)):
            rep = forced_section_invariants(TwistParams(ell, p))
            assert rep.verdict == "obstructed", (ell, p)

    def test_point_invariant_lies_in_forced_set(self):
        forced = forced_section_invariants(RL)
        points = point_obstruction(RL)
        for place, values in points.contributions:
            assert values <= forced.contribution(place)

    def test_rejected_primes_have_zero_in_forced_set(self):
        # p = 1 mod 8 where ell is a fourth power mod p: the forced set
        # at p contains 0, so the sum can vanish and nothing is excluded
        for p in (73, 89):
            tw = TwistParams(2, p)
            assert not twist_conditions(tw).quartic_nonresidue
            rep = forced_section_invariants(tw)
            assert ZERO in rep.contribution(p)


class TestTwistConditions:
    def test_reichardt_lind_all_hold(self):
        tc = twist_conditions(RL)
        assert tc.all_satisfied

    def test_seventy_three_fails_quartic_condition(self):
        tc = twist_conditions(TwistParams(2, 73))
        assert not tc.quartic_nonresidue
        assert not tc.all_satisfied
        assert tc.odd_prime_coprime and tc.square_mod_ell_primes

    def test_nineteen_seventeen_all_hold(self):
        assert twist_conditions(TwistParams(19, 17)).all_satisfied

    def test_search_ell_two(self):
        assert twist_search(2, 100) == [17, 41, 97]

    def test_search_other_twists(self):
        assert 97 in twist_search(11, 100)
        assert 73 in twist_search(6, 100)

    def test_search_rejects_non_squarefree(self):
        with pytest.raises(ValueError):
            twist_search(12, 100)


class TestDensity:
    def test_small_exact(self):
        rep = density_experiment(2, 20)
        assert isinstance(rep, DensityReport)
        assert rep.valid_count == 1 and rep.prime_count == 8
        assert rep.ratio == Fraction(1, 8) == rep.predicted

    def test_prediction_exponents(self):
        assert density_experiment(2, 50).predicted == Fraction(1, 8)
        assert density_experiment(11, 50).predicted == Fraction(1, 32)
        assert density_experiment(6, 50).predicted == Fraction(1, 16)

    def test_moderate_range_tracks_prediction(self):
        rep = density_experiment(2, 20000)
        assert abs(rep.ratio - rep.predicted) <= rep.predicted * Fraction(15, 100)

    def test_rejects_bad_ell(self):
        with pytest.raises(ValueError):
            density_experiment(12, 100)  # not squarefree
        with pytest.raises(ValueError):
            density_experiment(5, 100)  # odd factor 1 mod 4


class TestGlobalSearches:
    def test_exhaustive_empty(self):
        assert exhaustive_search(200) == []
        assert exhaustive_search(0) == []

    def test_control_equation_solution_excluded_by_nonzero_y(self):
        # with 17 replaced by 16 the tuple (y, z0, z1) = (0, 2, 1) solves
        # the equation but is excluded by the y != 0 requirement
        assert 2 * 0**2 == 2**4 - 16 * 1**4
        assert exhaustive_search(2, ell=2, rhs=16) == []

    def test_rejects_negative_bound(self):
        with pytest.raises(ValueError):
            exhaustive_search(-1)


class TestSmoothness:
    def test_good_reduction_smooth(self):
        assert model_smoothness_check(3)
        assert model_smoothness_check(5)
        assert model_smoothness_check(13)

    def test_bad_reduction_rejected(self):
        with pytest.raises(ValueError):
            model_smoothness_check(2)
        with pytest.raises(ValueError):
            model_smoothness_check(17)
