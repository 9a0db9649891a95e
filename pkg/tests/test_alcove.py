"""Root data, linkage folding, weight ideals, fattening, bound battery.

Frozen values derived by hand before running the code.  Positive root counts
and Coxeter numbers: A1 (1, 2), A2 (3, 3), A3 (6, 4), B2 (4, 4), B3 (9, 6),
C3 (9, 6), D4 (12, 6), F4 (24, 12), G2 (6, 6), E6 (36, 12), E7 (63, 18),
E8 (120, 30).  In B2 the maximal short root is alpha_1 + alpha_2 with coroot
(2, 1); in G2 it is 2 alpha_1 + alpha_2 with coroot (2, 3).

Type A1 at e = 5, one coordinate: lam = 3 folds through (4) -> (-4), so the
antidominant representative is -5 at length 1; lam = 5 folds (6) -> (-6) ->
(-4), representative -5 at length 2; lam = 7 folds (8) -> (-8) -> (-2),
representative -3 at length 2 and depth floor(8/5) = 1; lam = 4 is singular
on the wall (x, alpha^v) = 5, shifted point (5) -> (-5), representative -6,
facet ((1,), 1), strict length 1.  The fattening map sends c to
8 - (c mod 5) + 5 floor(c/5): images of 3 and 7 are 5 and 11.  The
restricted ideal is {0..4} with a1 = 0; one fattening step of the regular
restricted ideal {0, 1, 2, 3} gives {0, 1, 2, 3, 5, 6, 7, 8} with a1 = 1,
operationally fat but not literally fat (the literal test needs the
singular weight 4).  For the regular ideal {0, 1, 2, 3, 5, 6, 7, 8} at
p = 5: Jantzen bound 25 holds everywhere, a1 values (1, 2), extension
vanishing 1 < 4, cover condition 3 < 8, depths 0 on 0..3 and 1 on 5..8 so
the global dimension bound is 2, the growth row at m = 0 is 2 < 3 strict,
and the restricted-ideal threshold at m = -1 fails (1 < 1 is false), which
is why that bound is only asserted for subsets of the restricted ideal.

Type A2: mu = 0 precedes lam = (1, 1) although no intermediate step is
dominant, so closure must pass through non-dominant states; the closure of
(2, 2) is the five weights (0,0), (1,1), (0,3), (3,0), (2,2).  At e = 3 the
weight (1, 1) has shifted pairings (2, 2, 4), crossing walls m = 0 of both
simple roots and m = 0, 1 of the highest root: length 4, depth 1.
"""

import pytest
from fractions import Fraction
from hypothesis import given, settings
from hypothesis import strategies as st

from grkoszul.errors import InputFormatError, InternalCheckError, PreconditionError
from grkoszul.alcove import (
    AffineWeylElement,
    Weight,
    WeightIdealSet,
    a1_value,
    base_interior_point,
    bounds_report,
    compose,
    dominance_and_regularity,
    dominance_leq,
    dominant_conjugate,
    element_inverse,
    fatten,
    fe_image,
    gamma_res,
    gamma_res_reg,
    hyperplane_length,
    ideal_closure,
    identity_element,
    is_regular,
    jantzen_region,
    linkage,
    partition_translate,
    restricted_weights,
    root_datum_build,
    wall_reflections,
    weyl_orbit,
)


@pytest.fixture(scope="module")
def a1():
    return root_datum_build("A", 1)


@pytest.fixture(scope="module")
def a2():
    return root_datum_build("A", 2)


def w(*coords):
    return Weight(tuple(coords))


class TestRootData:
    @pytest.mark.parametrize("lie_type,rank,roots,h", [
        ("A", 1, 1, 2), ("A", 2, 3, 3), ("A", 3, 6, 4),
        ("B", 2, 4, 4), ("B", 3, 9, 6), ("C", 3, 9, 6),
        ("D", 4, 12, 6), ("F", 4, 24, 12), ("G", 2, 6, 6),
        ("E", 6, 36, 12), ("E", 7, 63, 18), ("E", 8, 120, 30),
    ])
    def test_root_counts_and_coxeter_numbers(self, lie_type, rank, roots, h):
        rd = root_datum_build(lie_type, rank)
        assert len(rd.positive_roots) == roots
        assert rd.coxeter_number == h

    def test_unsupported_types_are_input_errors(self):
        for lie_type, rank in [("H", 3), ("A", 0), ("B", 1), ("D", 3), ("E", 9)]:
            with pytest.raises(InputFormatError):
                root_datum_build(lie_type, rank)

    def test_b2_max_short_root(self):
        rd = root_datum_build("B", 2)
        assert rd.max_short_root == (1, 1)
        assert rd.coroot((1, 1)) == (2, 1)

    def test_g2_max_short_root(self):
        rd = root_datum_build("G", 2)
        assert rd.max_short_root == (2, 1)
        assert rd.coroot((2, 1)) == (2, 3)

    def test_a2_star_swaps_coordinates(self, a2):
        assert a2.star(w(2, 0)) == w(0, 2)
        assert a2.w0(a2.rho) == w(-1, -1)

    def test_a1_simple_root_and_pairing(self, a1):
        assert a1.simple_root(0) == w(2)
        assert a1.pairing(w(3), (1,)) == 3
        assert a1.to_root_coords(w(2)) == (Fraction(1),)

    def test_inner_product_symmetry(self, a2):
        x, y = w(1, 2), w(3, 1)
        assert a2.inner(x, y) == a2.inner(y, x)
        # (rho, rho) in A2 is 2 (each simple root has squared length 2).
        assert a2.inner(a2.rho, a2.rho) == 2


class TestDominanceAndRegularity:
    def test_a1_dominance(self, a1):
        assert dominance_leq(a1, w(5), w(7))
        assert not dominance_leq(a1, w(5), w(6))
        assert not dominance_leq(a1, w(7), w(5))

    def test_a2_zero_below_rho(self, a2):
        assert dominance_leq(a2, w(0, 0), w(1, 1))
        assert not dominance_leq(a2, w(1, 1), w(0, 0))

    def test_a1_regularity_report(self, a1):
        rep = dominance_and_regularity(a1, 5, w(4))
        assert rep.dominant and not rep.regular
        rep = dominance_and_regularity(a1, 5, w(9))
        assert not rep.regular
        assert rep.restricted_part == w(4)
        assert rep.quotient_part == w(1)
        assert not rep.restricted
        assert dominance_and_regularity(a1, 5, w(7)).regular
        assert dominance_and_regularity(a1, 5, w(3)).restricted

    def test_star_in_report(self, a2):
        rep = dominance_and_regularity(a2, 3, w(2, 0))
        assert rep.star == w(0, 2)

    @given(a=st.integers(-3, 3), b=st.integers(-3, 3),
           c=st.integers(-3, 3), d=st.integers(-3, 3))
    @settings(max_examples=60, deadline=None)
    def test_dominance_antisymmetry(self, a, b, c, d):
        rd = root_datum_build("A", 2)
        x, y = w(a, b), w(c, d)
        if dominance_leq(rd, x, y) and dominance_leq(rd, y, x):
            assert x == y

    def test_dominant_conjugate(self, a2):
        assert dominant_conjugate(a2, w(-1, 1)) == w(1, 0)
        assert dominant_conjugate(a2, w(2, 1)) == w(2, 1)

    def test_weyl_orbit_sizes(self, a1, a2):
        assert weyl_orbit(a1, w(3)) == (w(-3), w(3))
        assert len(weyl_orbit(a2, w(1, 0))) == 3
        assert weyl_orbit(a2, w(0, 0)) == (w(0, 0),)
        assert len(weyl_orbit(root_datum_build("G", 2), w(1, 1))) == 12


class TestAffineElements:
    def test_wall_reflections_have_length_one(self, a2):
        for refl in wall_reflections(a2, 3):
            assert refl.separation_length(a2, 3) == 1

    def test_identity_has_length_zero(self, a1):
        e = identity_element(1)
        assert e.separation_length(a1, 5) == 0

    def test_compose_and_inverse(self, a2):
        s = wall_reflections(a2, 3)
        x = compose(a2, 3, s[0], compose(a2, 3, s[2], s[1]))
        assert x.separation_length(a2, 3) == x.length
        inv = element_inverse(a2, 3, x)
        assert compose(a2, 3, inv, x) == identity_element(2)
        assert inv.length == x.length

    def test_affine_wall_translation_is_in_e_root_lattice(self, a1):
        s_aff = wall_reflections(a1, 5)[1]
        assert s_aff.translation == (-10,)
        assert s_aff.dot(a1, w(-7)) == w(-5)
        assert s_aff.dot(a1, w(-6)) == w(-6)

    def test_length_subadditivity(self, a2):
        s = wall_reflections(a2, 3)
        x = compose(a2, 3, s[0], s[2])
        y = compose(a2, 3, s[1], x)
        assert y.length <= x.length + 1

    @given(word=st.lists(st.integers(0, 2), max_size=6))
    @settings(max_examples=40, deadline=None)
    def test_separation_recount_matches_cached_length(self, word):
        rd = root_datum_build("A", 2)
        walls = wall_reflections(rd, 3)
        elem = identity_element(2)
        for i in word:
            elem = compose(rd, 3, elem, walls[i])
        assert elem.separation_length(rd, 3) == elem.length

    def test_badly_cached_length_is_caught(self, a1):
        fake = AffineWeylElement(((1,),), (0,), 7)
        with pytest.raises(InternalCheckError):
            fake.separation_length(a1, 5)

    def test_translation_outside_lattice_rejected(self, a1):
        stray = AffineWeylElement(((1,),), (3,), 0)
        with pytest.raises(PreconditionError):
            stray.separation_length(a1, 5)


class TestLinkage:
    def test_a1_regular_weights(self, a1):
        res = linkage(a1, 5, w(3))
        assert res.lambda_minus == w(-5)
        assert res.length == 1
        assert res.regular and res.facet == ()

        res = linkage(a1, 5, w(5))
        assert res.lambda_minus == w(-5)
        assert res.length == 2

        res = linkage(a1, 5, w(7))
        assert res.lambda_minus == w(-3)
        assert res.length == 2
        assert res.depth == 1

    def test_a1_singular_weight(self, a1):
        res = linkage(a1, 5, w(4))
        assert not res.regular
        assert res.lambda_minus == w(-6)
        assert res.facet == (((1,), 1),)
        assert res.length == 1
        assert res.depth is None
        assert res.w.dot(a1, res.lambda_minus) == w(4)

    def test_same_orbit_weights_share_representative(self, a1):
        assert linkage(a1, 5, w(3)).lambda_minus == linkage(a1, 5, w(5)).lambda_minus
        assert linkage(a1, 5, w(7)).lambda_minus == linkage(a1, 5, w(1)).lambda_minus

    def test_a2_length_and_depth(self, a2):
        res = linkage(a2, 3, w(1, 1))
        assert res.length == 4
        assert res.depth == 1
        assert res.w.separation_length(a2, 3) == 4
        assert res.w.dot(a2, res.lambda_minus) == w(1, 1)

    def test_antidominant_weights_have_length_zero(self, a2):
        res = linkage(a2, 3, w(-1, -1))
        assert res.length == 0
        assert res.lambda_minus == w(-1, -1)

    @given(a=st.integers(0, 9))
    @settings(max_examples=30, deadline=None)
    def test_a1_carrier_roundtrip(self, a):
        rd = root_datum_build("A", 1)
        res = linkage(rd, 5, w(a))
        assert res.w.dot(rd, res.lambda_minus) == w(a)
        assert res.w.separation_length(rd, 5) == res.length

    @given(a=st.integers(0, 6), b=st.integers(0, 6))
    @settings(max_examples=40, deadline=None)
    def test_a2_depth_matches_length_parity_free_recount(self, a, b):
        # Depth counts hyperplanes below the weight (positive side), length
        # counts hyperplanes separating from the base cell; for dominant
        # regular weights both count the same walls of type m >= 1, and
        # length additionally counts the m = 0 walls.
        rd = root_datum_build("A", 2)
        res = linkage(rd, 3, w(a, b))
        if res.regular:
            assert res.length == res.depth + len(rd.positive_roots)


class TestIdealsAndClosure:
    def test_a2_closure_passes_through_nondominant_states(self, a2):
        ideal = ideal_closure(a2, 3, [w(1, 1)])
        assert ideal.weights == (w(0, 0), w(1, 1))

    def test_a2_closure_of_two_two(self, a2):
        ideal = ideal_closure(a2, 3, [w(2, 2)])
        assert ideal.weights == (w(0, 0), w(0, 3), w(1, 1), w(2, 2), w(3, 0))

    def test_closure_idempotent(self, a2):
        ideal = ideal_closure(a2, 3, [w(2, 2)])
        again = ideal_closure(a2, 3, ideal.weights)
        assert again.weights == ideal.weights

    def test_closed_flag_is_verified(self, a1):
        with pytest.raises(InputFormatError):
            WeightIdealSet(a1, 5, (w(2),), closed=True)
        ok = WeightIdealSet(a1, 5, (w(2),), closed=False)
        assert w(2) in ok and w(0) not in ok

    def test_regular_only_rejects_singular_members(self, a1):
        with pytest.raises(InputFormatError):
            WeightIdealSet(a1, 5, (w(4),), closed=False, regular_only=True)

    def test_nondominant_weights_rejected(self, a1):
        with pytest.raises(InputFormatError):
            WeightIdealSet(a1, 5, (w(-1),), closed=False)
        with pytest.raises(InputFormatError):
            ideal_closure(a1, 5, [w(-2)])

    def test_restricted_ideals_a1(self, a1):
        assert [x.coordinates for x in restricted_weights(a1, 5)] == [
            (0,), (1,), (2,), (3,), (4,)]
        assert gamma_res(a1, 5).weights == (w(0), w(1), w(2), w(3), w(4))
        assert gamma_res_reg(a1, 5).weights == (w(0), w(1), w(2), w(3))

    def test_jantzen_region_a1(self, a1):
        region = jantzen_region(a1, 5)
        assert len(region) == 25
        assert w(24) in region and w(25) not in region

    @given(coords=st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)),
                           min_size=1, max_size=3))
    @settings(max_examples=30, deadline=None)
    def test_closure_idempotence_property(self, coords):
        rd = root_datum_build("A", 2)
        ideal = ideal_closure(rd, 3, [Weight(c) for c in coords])
        assert ideal_closure(rd, 3, ideal.weights).weights == ideal.weights


class TestFattening:
    def test_a1_fattening_images(self, a1):
        assert fe_image(a1, 5, w(3)) == w(5)
        assert fe_image(a1, 5, w(7)) == w(11)
        assert fe_image(a1, 5, w(0)) == w(8)

    def test_fe_rejects_nondominant(self, a1):
        with pytest.raises(PreconditionError):
            fe_image(a1, 5, w(-1))

    def test_a1_restricted_a1_values(self, a1):
        assert a1_value(a1, 5, gamma_res(a1, 5).weights) == 0
        report = fatten(a1, 5, gamma_res(a1, 5), 0)
        assert report.a1_values == (0, 1)
        assert report.stages[1].weights == tuple(w(c) for c in range(9))

    def test_a1_regular_restricted_fattening(self, a1):
        report = fatten(a1, 5, gamma_res_reg(a1, 5), 0)
        assert report.stages[0].weights == (w(0), w(1), w(2), w(3))
        assert report.stages[1].weights == tuple(
            w(c) for c in (0, 1, 2, 3, 5, 6, 7, 8))
        assert report.a1_values == (0, 1)
        assert report.efat_operational
        assert not report.efat_literal

    def test_fatten_depth_minus_one_is_plain_closure(self, a1):
        report = fatten(a1, 5, gamma_res(a1, 5), -1)
        assert len(report.stages) == 1

    @given(a=st.integers(0, 8), b=st.integers(0, 8))
    @settings(max_examples=40, deadline=None)
    def test_fattening_preserves_regularity(self, a, b):
        rd = root_datum_build("A", 2)
        lam = w(a, b)
        if is_regular(rd, 3, lam):
            assert is_regular(rd, 3, fe_image(rd, 3, lam))


class TestBounds:
    def test_a1_regular_ideal_battery(self, a1):
        gamma = WeightIdealSet(a1, 5, tuple(w(c) for c in (0, 1, 2, 3, 5, 6, 7, 8)),
                               closed=True, regular_only=True)
        report = bounds_report(a1, 5, gamma)
        assert report.jantzen_bound == 25
        assert all(ok for _, ok in report.jantzen_membership)
        assert report.a1_values == (1, 2)
        assert report.ext_vanishing == (1, 4, True)
        assert report.cover_condition == (3, 8, True)
        assert dict(report.depth_values) == {
            w(0): 0, w(1): 0, w(2): 0, w(3): 0,
            w(5): 1, w(6): 1, w(7): 1, w(8): 1}
        assert report.max_depth == 1
        assert report.global_dim_bound == 2
        assert report.growth_rows == ((0, 2, 3, True),)
        assert not report.restricted_subset
        assert report.threshold_rows == ((-1, 1, 1, False), (0, 2, 3, True))
        assert report.pair_rows == ((0, True, 3, 8, True),)
        assert dict(report.thresholds) == {"2h-2": 2, "4h-5": 3, "2N(h-1)-1": 3}

    def test_a1_restricted_ideal_battery(self, a1):
        report = bounds_report(a1, 5, gamma_res(a1, 5))
        assert report.a1_values == (0, 1)
        assert report.restricted_subset
        assert report.threshold_rows == ((-1, 0, 1, True), (0, 1, 3, True))
        assert report.growth_rows == ((0, 1, 2, True),)
        assert report.pair_rows == ((0, True, 1, 8, True),)
        assert report.ext_vanishing == (0, 4, True)
        assert report.cover_condition == (1, 8, True)
        assert report.max_depth == 0 and report.global_dim_bound == 0

    def test_supplied_n_overrides_threshold_table(self, a1):
        report = bounds_report(a1, 5, gamma_res(a1, 5), supplied_n=3)
        assert dict(report.thresholds)["2N(h-1)-1"] == 5

    def test_a2_regular_restricted_battery_runs(self):
        rd = root_datum_build("A", 2)
        report = bounds_report(rd, 7, gamma_res_reg(rd, 7), m_max=1)
        assert report.restricted_subset
        assert len(report.growth_rows) == 2
        assert len(report.threshold_rows) == 3
        assert all(ok for _, _, _, ok in report.threshold_rows)

    def test_mismatched_e_rejected(self, a1):
        with pytest.raises(PreconditionError):
            bounds_report(a1, 7, gamma_res(a1, 5))


class TestPartitions:
    def test_two_row_examples(self):
        assert partition_translate(2, 2, [2, 0], 5) == (w(2), True)
        assert partition_translate(2, 2, [1, 1], 5)[0] == w(0)
        weight, chamber = partition_translate(2, 5, [5, 0], 5)
        assert weight == w(5) and chamber

    def test_chamber_regularity_failure(self):
        # Residues of parts (5, 0) mod 3 are 5 - 1 = 1 and 0 - 2 = 1: they
        # collide, so the chamber flag drops; for (3, 0) they are 2 and 1.
        assert not partition_translate(2, 5, [5, 0], 3)[1]
        assert partition_translate(2, 3, [3, 0], 3)[1]

    def test_three_rows(self):
        weight, _ = partition_translate(3, 6, [3, 2, 1], 5)
        assert weight == w(1, 1)

    def test_invalid_partitions(self):
        with pytest.raises(InputFormatError):
            partition_translate(2, 3, [1, 2], 5)
        with pytest.raises(InputFormatError):
            partition_translate(2, 4, [2, 1], 5)
        with pytest.raises(InputFormatError):
            partition_translate(2, 6, [3, 2, 1], 5)
        with pytest.raises(InputFormatError):
            partition_translate(1, 2, [2], 5)
        with pytest.raises(InputFormatError):
            partition_translate(2, 2, [2, -1, 1], 5)


class TestInteriorPoint:
    def test_base_point_is_interior(self, a2):
        point = base_interior_point(a2, 3)
        for root in a2.positive_roots:
            value = a2.shifted_pairing(point, root)
            assert -3 < value < 0

    def test_hyperplane_length_of_translation(self, a1):
        # Translation by e alpha moves the base cell across 2 hyperplanes
        # for the single positive root: levels m = 0 and m = 1... the
        # shifted interior point sits at -5/2, its image at 15/2, crossing
        # m = 0 and m = 1: exactly 2.
        assert hyperplane_length(a1, 5, ((1,),), (10,)) == 2
