from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropfan import lattice as la
from tropfan.classify2d import (
    ConventionPair,
    assemble_strongly_regular,
    balanced_sector_sets,
    certified_planes,
    choose_convention_pair,
    enumerate_planes_case1,
    enumerate_planes_case2,
    enumerate_planes_lemma47a,
    facet_bound_check,
    fan_from_planes,
    gallery_2d,
    gallery_coverage,
    lemma47b_sweep,
    lemma47c_sweep,
    matches_profile,
    plane_arrangement,
    plane_key,
    plane_profile,
)
from tropfan.errors import ConventionViolation, NotRegularSequence, SearchBoundExceeded
from tropfan.fan import WeightedFan, check_balanced, validate
from tropfan.trop import Binomial, max_of, self_products

from .strategies import convention_pairs, int_vectors

STD4 = ConventionPair.standard(4, 2)
HALF_PLANES = WeightedFan.build(
    3,
    [(1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (0, 0, -1)],
    [(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)],
    [1] * 6,
    dim=2,
)
W1W2 = WeightedFan.build(
    4,
    [(1, 0, 0, 0), (0, 1, 0, 0), (-1, 0, 0, 0), (0, -1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (0, 0, -1, 0), (0, 0, 0, -1)],
    [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6), (6, 7), (4, 7)],
    [1] * 8,
    dim=2,
)


class TestConventionPair:
    def test_rejects_dependent(self):
        with pytest.raises(ConventionViolation):
            ConventionPair([(1, 0, 0)], [(2, 0, 0), (0, 1, 0)])

    def test_standard(self):
        assert STD4.T1 == max_of((0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0))
        assert STD4.lineality() == (((0, 0, 1, 0), (0, 0, 0, 1)), ((1, 0, 0, 0), (0, 1, 0, 0)))

    def test_choose_drops_redundant(self):
        M1 = max_of((0, 0, 0), (1, 0, 0), (0, 1, 0))
        M2 = max_of((0, 0, 0), (0, 0, 1), (1, 0, 1))
        P = choose_convention_pair(M1, M2)
        assert la.rank(P.matrix) == 3
        assert set(P.vs) <= set(M1.functionals) and set(P.ws) <= set(M2.functionals)

    def test_choose_fails_when_flat(self):
        with pytest.raises(ConventionViolation):
            choose_convention_pair(max_of((0, 0, 0), (1, 0, 0)), max_of((0, 0, 0), (0, 0, 1)))


class TestPlaneProfile:
    def test_lineality_plane(self):
        assert plane_profile(STD4, (0, 0, 1, 0), (0, 0, 0, 1)) == (0, 0, 1)

    @pytest.mark.parametrize("a,b", [(0, 0), (1, 2), (3, 5), (-4, 7)])
    def test_counterexample_family_ab(self, a, b):
        p = plane_profile(STD4, (1, 1, 0, 0), (a, b, 0, -1))
        assert p[1] == 1 and p[2] == 0

    @pytest.mark.parametrize("a,b,c,d", [(1, 0, 0, 1), (2, 3, 1, 1), (1, -4, 5, 2), (3, 7, -2, 9)])
    def test_counterexample_family_abcd(self, a, b, c, d):
        p = plane_profile(STD4, (a, b, 0, 0), (0, 0, c, d))
        assert p[0] == 0 == p[2]

    @given(st.data())
    def test_mixed_area_agrees_with_products(self, data):
        P = data.draw(convention_pairs(ns=(3, 4)))
        a = data.draw(int_vectors(P.n, -3, 3))
        b = data.draw(int_vectors(P.n, -3, 3))
        if la.rank([a, b]) < 2:
            return
        assert plane_profile(P, a, b) == plane_profile(P, a, b, method="mixed-area")

    def test_independent_of_generators(self):
        assert plane_profile(STD4, (1, 1, 0, 0), (0, 0, 1, 1)) == plane_profile(STD4, (2, 2, 1, 1), (1, 1, 1, 1))

    def test_key_is_span(self):
        assert plane_key([(2, 0, 0), (0, 2, 0)]) == plane_key([(1, 1, 0), (1, -1, 0)])

    def test_matches_profile(self):
        assert matches_profile((1, 1, 0), "1,1,<=1")
        assert not matches_profile((1, 1, 2), "1,1,<=1")


class TestCase1:
    def test_nine_planes(self):
        got = {c.span for c in enumerate_planes_case1(STD4)}
        e = la.identity(4)
        rho2 = [e[0], e[1], la.add(e[0], e[1])]
        rho1 = [e[2], e[3], la.add(e[2], e[3])]
        assert got == {plane_key([r1, r2]) for r1 in rho1 for r2 in rho2}

    def test_non_integral_inverse_skips(self):
        P = ConventionPair([(2, 1, 0)], [(0, 1, 0), (0, 0, 1)])
        raw = enumerate_planes_case1(P, filtered=False)
        # M^{-1}(1,0,0) = (1/2, 0, 0) is not integral
        assert raw == []

    def test_profiles_are_case1(self):
        assert all(c.profile == (0, 1, 0) for c in enumerate_planes_case1(STD4))


class TestCurveEnumerations:
    def test_profiles(self):
        for c in enumerate_planes_case2(STD4):
            assert matches_profile(c.profile, "1,1,<=1") or matches_profile(c.profile, "<=1,1,1")
            assert len(c.generators) == 3
            assert la.is_zero(la.add(la.add(c.generators[0], c.generators[1]), c.generators[2]))

    def test_lemma47a_contains_lineality(self):
        spans = {c.span: c.profile for c in enumerate_planes_lemma47a(STD4)}
        assert spans[((0, 0, 1, 0), (0, 0, 0, 1))] == (0, 0, 1)
        assert spans[((1, 0, 0, 0), (0, 1, 0, 0))] == (1, 0, 0)

    def test_half_plane_facets_are_certified(self):
        P = choose_convention_pair(max_of((0, 0, 0), (1, 0, 0), (0, 1, 0)), max_of((0, 0, 0), (0, 0, 1)))
        spans = {c.span for c in certified_planes(P)}
        for s in HALF_PLANES.facets:
            assert plane_key([HALF_PLANES.rays[i] for i in s]) in spans

    @settings(max_examples=15)
    @given(convention_pairs())
    def test_sweeps_empty(self, P):
        assert lemma47b_sweep(P) == []
        assert lemma47c_sweep(P) == []

    @settings(max_examples=15)
    @given(convention_pairs(ns=(3, 4)))
    def test_soundness(self, P):
        for c in certified_planes(P):
            assert plane_profile(P, *c.span) == c.profile
            assert c.profile[1] <= 1 and c.profile[0] <= 1 and c.profile[2] <= 1

    def test_small_brute_force(self):
        # every plane spanned by vectors in [-1,1]^4 with a target profile is certified
        spans = {c.span for c in certified_planes(STD4)}
        vecs = [v for v in product((-1, 0, 1), repeat=4) if any(v)]
        for i, a in enumerate(vecs):
            for b in vecs[i + 1 :]:
                if la.rank([a, b]) < 2:
                    continue
                p = plane_profile(STD4, a, b, method="mixed-area")
                if p[1] == 1 and p[0] <= 1 and p[2] <= 1 or p in ((0, 0, 1), (1, 0, 0)):
                    assert plane_key([a, b]) in spans, (a, b, p)


class TestGallery2D:
    def test_half_planes(self):
        g = gallery_2d(HALF_PLANES, Binomial((0, 0, 0), (1, 0, 0)), Binomial((0, 0, 0), (0, 0, 1)))
        assert g.facets == {(0, 3), (0, 4), (2, 3), (2, 4)}

    def test_transversal_plane(self):
        F = fan_from_planes([((1, 0, 0), (0, 0, 1))])
        g = gallery_2d(F, Binomial((0, 0, 0), (1, 0, 0)), Binomial((0, 0, 0), (0, 0, 1)))
        assert g.facets == set(F.facets)

    def test_not_regular(self):
        with pytest.raises(NotRegularSequence):
            gallery_2d(HALF_PLANES, Binomial((0, 0, 0), (1, 0, 0)), Binomial((0, 0, 0), (2, 0, 0)))


class TestFacetBounds:
    def test_half_planes(self):
        P = choose_convention_pair(max_of((0, 0, 0), (1, 0, 0), (0, 1, 0)), max_of((0, 0, 0), (0, 0, 1)))
        _, rep = facet_bound_check(P, HALF_PLANES)
        assert all(r.ok for r in rep)

    def test_w1_w2(self):
        total, rep = facet_bound_check(STD4, W1W2)
        assert total == (1, 0, 1)
        assert all(r.ok for r in rep)
        assert {r.profile for r in rep} == {(1, 0, 0), (0, 0, 1)}

    def test_single_plane_equality(self):
        F = fan_from_planes([((1, 0, 0, 0), (0, 0, 1, 0))])
        total, rep = facet_bound_check(STD4, F)
        assert all(r.profile == total for r in rep)


class TestFanFromPlanes:
    def test_disjoint_planes(self):
        F = fan_from_planes([((1, 0, 0, 0), (0, 1, 0, 0)), ((0, 0, 1, 0), (0, 0, 0, 1))])
        assert len(F.facets) == 8
        assert check_balanced(F).balanced
        assert self_products(STD4.T1, STD4.T2, F) == (1, 0, 1)

    def test_single_plane(self):
        F = fan_from_planes([((1, 2, 3), (0, 1, 1))])
        assert len(F.facets) == 4 and not validate(F)

    def test_planes_through_a_line(self):
        # whole planes always balance; the common line becomes a ray of both
        F = fan_from_planes([((1, 0, 0), (0, 1, 0)), ((1, 0, 0), (0, 0, 1))])
        assert check_balanced(F).balanced
        assert (1, 0, 0) in F.rays and (-1, 0, 0) in F.rays

    def test_half_plane_sector_sets(self):
        # three planes through e3 admit the three half-planes of the Example 4.1 shape
        arr = plane_arrangement([((1, 0, 0), (0, 0, 1)), ((0, 1, 0), (0, 0, 1)), ((1, 1, 0), (0, 0, 1))])
        sols = balanced_sector_sets(arr)
        supports = []
        for s in sols:
            F = arr.fan(s)
            assert check_balanced(F).balanced
            supports.append(len(F.facets))
        assert 6 in supports


class TestAssembly:
    P3 = choose_convention_pair(max_of((0, 0, 0), (1, 0, 0), (0, 1, 0)), max_of((0, 0, 0), (0, 0, 1)))

    def test_r3_cycles_certified(self):
        res = assemble_strongly_regular(self.P3, 2, workers=1)
        assert res.cycles
        for c in res.cycles:
            F = c.fan
            assert not validate(F) and check_balanced(F).balanced
            assert self_products(self.P3.T1, self.P3.T2, F) == c.profile
            assert c.profile[1] == 1
            assert set(F.weights) == {1}
            assert {s for s, _ in c.coverage} == set(F.facets)
            _, rep = facet_bound_check(self.P3, F)
            assert all(r.ok for r in rep)

    def test_single_case1_plane_qualifies(self):
        L11 = plane_key([(1, 0, 0, 0), (0, 0, 1, 0)])
        planes = [c for c in certified_planes(STD4) if c.span == L11]
        res = assemble_strongly_regular(STD4, 1, planes=planes, workers=1)
        assert [c.profile for c in res.cycles] == [(0, 1, 0)]

    def test_hodge_counterexample_recorded(self):
        planes = [c for c in enumerate_planes_lemma47a(STD4)]
        res = assemble_strongly_regular(STD4, 2, planes=planes, workers=1)
        assert not res.cycles
        assert [c.profile for c in res.hodge_counterexamples] == [(1, 0, 1)]

    def test_empty(self):
        assert assemble_strongly_regular(self.P3, 0).cycles == []

    def test_budget(self):
        with pytest.raises(SearchBoundExceeded):
            assemble_strongly_regular(STD4, 4)

    def test_coverage_on_example(self):
        cover = gallery_coverage(self.P3, fan_from_planes([((1, 0, 0), (0, 0, 1))]))
        assert len(cover) == 4

    def test_parallel_matches_serial(self):
        a = assemble_strongly_regular(self.P3, 3, workers=1)
        b = assemble_strongly_regular(self.P3, 3, workers=2)
        assert a.cycles == b.cycles and a.hodge_counterexamples == b.hodge_counterexamples
