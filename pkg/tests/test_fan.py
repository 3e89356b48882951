import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropfan import lattice as la
from tropfan.errors import NotOneDimensional
from tropfan.fan import (
    Cone,
    WeightedFan,
    as_cycle,
    check_balanced,
    cycles_equal,
    normal_vector,
    plane_fan,
    pushforward,
    refine_by,
    validate,
)
from tropfan.trop import max_of

from .strategies import balanced_1d_fans, balanced_2d_fans, tr_functions


def example_fan():
    rays = [(1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (0, 0, -1)]
    cones = [(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)]
    return WeightedFan.build(3, rays, cones, [1] * 6)


class TestValidate:
    def test_example_valid(self):
        assert validate(example_fan()) == []

    def test_interior_ray(self):
        # (3,1) lies strictly between (1,0) and (2,1)
        F = WeightedFan.build(2, [(1, 0), (2, 1), (3, 1)], [(0, 1), (2,)], [1], dim=2)
        axioms = {d.axiom for d in validate(F)}
        assert "face-intersection" in axioms

    def test_listed_ray_outside_cone(self):
        # (1,1) is outside <(1,0),(2,1)>, so only purity fails
        F = WeightedFan.build(2, [(1, 0), (2, 1), (1, 1)], [(0, 1), (2,)], [1], dim=2)
        assert {d.axiom for d in validate(F)} == {"pure-dimensional"}

    def test_zero_weight(self):
        F = WeightedFan.one_dimensional(2, [(1, 0), (-1, 0)], [1, 0])
        assert [d.axiom for d in validate(F)] == ["positive-weight"]

    def test_non_primitive(self):
        F = WeightedFan.one_dimensional(2, [(2, 0), (-1, 0)], [1, 1])
        assert validate(F)[0].axiom == "primitive"

    def test_overlapping_cones(self):
        F = WeightedFan.build(2, [(1, 0), (0, 1), (1, 1), (-1, 0)], [(0, 1), (2, 3)], [1, 1])
        assert any(d.axiom == "face-intersection" for d in validate(F))

    def test_crossing_planes(self):
        # these planes meet in a line that misses one of the cones
        F = WeightedFan.build(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)], [(0, 1), (2, 3)], [1, 1])
        assert validate(F) == []
        # interiors cross along (1,1,1)
        G = WeightedFan.build(3, [(1, 0, 0), (0, 1, 1), (0, 1, 0), (1, 0, 1)], [(0, 1), (2, 3)], [1, 1])
        assert any(d.axiom == "face-intersection" for d in validate(G))

    def test_shared_edge_ok(self):
        F = WeightedFan.build(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1), (0, 2)], [1, 1])
        assert validate(F) == []

    def test_dependent_generators(self):
        F = WeightedFan.build(2, [(1, 0), (-1, 0)], [(0, 1)], [1])
        assert validate(F)[0].axiom == "strong-convexity"

    @given(balanced_2d_fans())
    def test_generated_fans_valid(self, F):
        assert validate(F) == []


class TestBalancing:
    def test_tripod(self):
        F = WeightedFan.one_dimensional(2, [(1, 0), (0, 1), (-1, -1)], [1, 1, 1])
        assert check_balanced(F).balanced

    def test_unbalanced_pair(self):
        rep = check_balanced(WeightedFan.one_dimensional(2, [(1, 0), (0, 1)], [1, 1]))
        assert not rep.balanced
        assert rep.failures == [()]

    def test_example_fan(self):
        rep = check_balanced(example_fan())
        assert rep.balanced and len(rep.residuals) == 5

    def test_normal_vector(self):
        # Z_sigma / Z_tau for the cone <(1,0,0),(1,2,0)>
        v = normal_vector((1, 0, 0), (1, 2, 0))
        assert la.lattice_index([(1, 0, 0), v, (0, 0, 1)]) == 1
        assert la.coordinates_in_basis((1, 2, 0), ((1, 0, 0), v))[1] > 0

    def test_half_plane_unbalanced(self):
        F = WeightedFan.build(2, [(1, 0), (0, 1), (-1, 0)], [(0, 1), (1, 2)], [1, 1])
        assert not check_balanced(F).balanced

    @given(balanced_2d_fans())
    def test_generated_balanced(self, F):
        assert check_balanced(F).balanced


class TestRefine:
    def test_one_dimensional_identity(self):
        F = WeightedFan.one_dimensional(2, [(1, 0), (-1, 0)], [1, 1])
        assert refine_by(F, max_of((0, 0), (1, 3))) == F

    def test_quadrant(self):
        F = WeightedFan.build(2, [(1, 0), (0, 1)], [(0, 1)], [1])
        G = refine_by(F, max_of((0, 0), (1, -1)))
        assert (1, 1) in G.rays and len(G.facets) == 2

    def test_example_fan_unchanged(self):
        F = example_fan()
        G = refine_by(F, max_of((0, 0, 0), (0, 0, 1)))
        assert set(G.rays) == set(F.rays) and len(G.facets) == 6

    @given(balanced_2d_fans(), st.data())
    def test_refinement_properties(self, F, data):
        T = data.draw(tr_functions(F.n))
        G = refine_by(F, T)
        assert check_balanced(G).balanced
        assert validate(G) == []
        for a, b in G.facets:
            x, y = G.rays[a], G.rays[b]
            mid = la.add(x, y)
            chosen = T.argmax(mid)
            for p in (la.add(la.scale(2, x), y), la.add(x, la.scale(2, y))):
                assert T.argmax(p) == chosen
            # every new cone sits inside an old one
            assert any(Cone(tuple(F.rays[i] for i in c)).contains(mid) for c in F.facets)


class TestPushforward:
    def test_projection(self):
        F = WeightedFan.one_dimensional(2, [(1, 1), (-1, -1)], [1, 1])
        G = pushforward([(1, 0)], F)
        assert as_cycle(G) == {(1,): 1, (-1,): 1}

    def test_stretch(self):
        F = WeightedFan.one_dimensional(2, [(1, 0), (-1, 0)], [1, 1])
        G = pushforward([(2, 0), (0, 1)], F)
        assert as_cycle(G) == {(1, 0): 2, (-1, 0): 2}
        assert check_balanced(G).balanced

    def test_bergman_projection(self):
        # coordinates of a class: e_1, e_2, e_3 and the ray with sum zero
        F = WeightedFan.one_dimensional(
            4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (-1, -1, -1, 0), (0, 0, 0, 1), (0, 0, 0, -1)], [1] * 6
        )
        G = pushforward([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)], F)
        assert as_cycle(G) == {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1, (-1, -1, -1): 1}

    def test_needs_curve(self):
        with pytest.raises(NotOneDimensional):
            pushforward([(1, 0, 0)], plane_fan((1, 0, 0), (0, 1, 0)))

    @given(balanced_1d_fans(), st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=3))
    def test_preserves_balancing(self, F, rows):
        f = [tuple(r[: F.n]) for r in rows]
        assert check_balanced(pushforward(f, F)).balanced


def test_cycles_equal_merges_rays():
    A = WeightedFan.one_dimensional(2, [(1, 0), (1, 0), (-1, 0)], [1, 1, 2])
    B = WeightedFan.one_dimensional(2, [(-1, 0), (1, 0)], [2, 2])
    assert cycles_equal(A, B)
