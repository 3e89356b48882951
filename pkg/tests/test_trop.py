import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropfan import lattice as la
from tropfan.errors import Unbalanced
from tropfan.fan import WeightedFan, ZeroCycle, as_cycle, plane_fan, refine_by, union
from tropfan.trop import (
    EQ,
    GE,
    INCOMPARABLE,
    LE,
    Binomial,
    TRFunction,
    compare,
    hypersurface,
    intersection_number,
    max_of,
    newton_polytope,
    normalize,
    product_1d,
    product_2d,
    product_2d_full,
    projection_formula_check,
    reduce,
    self_products,
    stable_intersect,
)

from .strategies import balanced_1d_fans, balanced_2d_fans, int_vectors, tr_functions
from .test_fan import example_fan

M1 = max_of((0, 0, 0), (1, 0, 0))
M2 = max_of((0, 0, 0), (0, 0, 1))


def coordinate_union_4d():
    return union(plane_fan((0, 0, 1, 0), (0, 0, 0, 1)), plane_fan((1, 0, 0, 0), (0, 1, 0, 0)))


class TestTRFunction:
    def test_evaluation(self):
        T = max_of((0, 0), (1, -1))
        assert T((3, 1)) == 2 and T((0, 5)) == 0

    def test_normalize_examples(self):
        assert normalize(max_of((1, 0), (0, 1))) == max_of((0, 0), (-1, 1))
        assert normalize(max_of((0, 0), (1, 0))) == max_of((0, 0), (1, 0))

    def test_normalize_product_unchanged(self):
        T = max_of((1, 1, 0), (2, 0, 0), (0, 1, 0))
        N = normalize(T)
        assert N.is_nonnegative
        assert as_cycle(product_2d(T, example_fan())) == as_cycle(product_2d(N, example_fan()))

    def test_binomial(self):
        b = Binomial((1, 0), (0, 1))
        assert b((2, 5)) == 5 and b.function == max_of((1, 0), (0, 1))
        with pytest.raises(ValueError):
            Binomial((1, 0), (1, 0))

    def test_reduce(self):
        T = max_of((0, 0), (2, 0), (1, 0), (0, 2), (1, 1))
        R, dropped = reduce(T)
        assert set(dropped) == {(1, 0), (1, 1)}
        assert set(newton_polytope(T).vertices) == set(R.functionals)


class TestCompare:
    def test_examples(self):
        assert compare(max_of((0, 0), (1, 0)), max_of((0, 0), (1, 0), (0, 1))) == LE
        assert compare(max_of((0, 0), (1, 1)), max_of((0, 0), (2, 0), (0, 2))) == LE
        assert compare(max_of((0, 0), (1, 0)), max_of((0, 0), (0, 1))) == INCOMPARABLE
        assert compare(max_of((0, 0), (2, 0), (0, 2)), max_of((0, 0), (1, 1))) == GE
        assert compare(max_of((0, 0), (2, 0), (1, 0)), max_of((0, 0), (2, 0))) == EQ

    @given(tr_functions(2), tr_functions(2), st.lists(int_vectors(2, -6, 6), min_size=5, max_size=5))
    def test_matches_pointwise(self, A, B, points):
        rel = compare(A, B)
        if rel in (LE, EQ):
            assert all(A(p) <= B(p) for p in points)
        if rel in (GE, EQ):
            assert all(A(p) >= B(p) for p in points)


class TestProduct1D:
    def test_curve_coordinates(self):
        F = WeightedFan.one_dimensional(
            3, [(1, 0, 0), (-1, 0, 2), (0, 1, 0), (0, -1, 0), (0, 0, -1)], [1, 1, 1, 1, 2]
        )
        assert product_1d(max_of((0, 0, 0), (-1, 0, 0)), F) == ZeroCycle(1)

    def test_spec_curve_is_unbalanced(self):
        F = WeightedFan.one_dimensional(3, [(1, 0, 0), (-1, 0, 2), (0, 1, 0), (0, -1, 0)], [1] * 4)
        with pytest.raises(Unbalanced):
            product_1d(max_of((0, 0, 0), (-1, 0, 0)), F)

    def test_tripod(self):
        F = WeightedFan.one_dimensional(2, [(1, 0), (0, 1), (-1, -1)], [1, 1, 1])
        assert product_1d(max_of((0, 0), (1, 0)), F).weight == 1

    def test_vanishing(self):
        F = WeightedFan.one_dimensional(3, [(0, 0, 1), (0, 0, -1)], [1, 1])
        assert product_1d(max_of((0, 0, 0), (1, 0, 0), (0, 1, 0)), F).weight == 0


class TestProduct2D:
    def test_example_products(self):
        F = example_fan()
        assert as_cycle(product_2d(M2, F)) == {(1, 0, 0): 1, (0, 1, 0): 1, (-1, -1, 0): 1}
        assert as_cycle(product_2d(M1, F)) == {(0, 0, 1): 1, (0, 0, -1): 1}

    def test_constant_function(self):
        assert as_cycle(product_2d(max_of((0, 0, 0)), example_fan())) == {}

    def test_zero_rays_reported(self):
        res = product_2d_full(M1, example_fan())
        assert (1, 0, 0) in res.zero_rays

    def test_intersection_numbers(self):
        F = example_fan()
        assert intersection_number([M1, M2], F) == 1
        assert intersection_number([M1, M1], F) == 0
        # the exact value of M2.M2.F: M2.F lies in {x_3 = 0}
        assert intersection_number([M2, M2], F) == 0

    def test_disjoint_planes(self):
        F = coordinate_union_4d()
        T1 = max_of((0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0))
        T2 = max_of((0, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
        assert self_products(T1, T2, F) == (1, 0, 1)


class TestStableIntersection:
    def test_example_fan(self):
        F = example_fan()
        assert as_cycle(stable_intersect(F, M2, seed=3)) == as_cycle(product_2d(M2, F))

    def test_plane_hyperplane(self):
        L = plane_fan((1, 1, 0, 0), (0, 0, 0, -1))
        res = stable_intersect(L, max_of((0, 0, 0, 0), (0, 0, 0, 1)))
        assert as_cycle(res) == {(1, 1, 0, 0): 1, (-1, -1, 0, 0): 1}
        # restricted to the positive half the single ray <(1,1,0,0)> has weight 1
        assert as_cycle(res)[(1, 1, 0, 0)] == 1

    def test_transverse_lines(self):
        F = WeightedFan.one_dimensional(2, [(1, 0), (-1, 0)], [1, 1])
        # V(max(0, x_1)) is the line spanned by e_2
        assert stable_intersect(F, max_of((0, 0), (1, 0))) == ZeroCycle(1)
        # a line against itself moves off and meets nothing
        assert stable_intersect(F, max_of((0, 0), (0, 1))) == ZeroCycle(0)

    def test_hypersurface_weights(self):
        H = hypersurface(max_of((0, 0), (2, 0), (0, 1)))
        assert sorted(f.weight for f in H.facets) == [1, 1, 2]
        # the square has four edges, the diagonals are not facets
        assert len(hypersurface(max_of((0, 0), (1, 0), (0, 1), (1, 1))).facets) == 4


@given(balanced_2d_fans(), st.data())
def test_stable_intersection_matches_product(F, data):
    T = data.draw(tr_functions(F.n))
    assert as_cycle(stable_intersect(F, T, seed=data.draw(st.integers(0, 99)))) == as_cycle(product_2d(T, F))


@given(balanced_1d_fans(), st.data())
def test_stable_intersection_matches_product_1d(F, data):
    T = data.draw(tr_functions(F.n))
    assert stable_intersect(F, T) == product_1d(T, F)


@given(balanced_2d_fans(), st.data())
def test_products_nonnegative_and_balanced(F, data):
    T = data.draw(tr_functions(F.n))
    P = product_2d(T, F)
    assert all(w > 0 for w in P.weights)
    assert product_1d(T, P).weight >= 0


@given(balanced_2d_fans(), st.data())
def test_shift_invariance_and_commutativity(F, data):
    T1 = data.draw(tr_functions(F.n))
    T2 = data.draw(tr_functions(F.n))
    L = data.draw(int_vectors(F.n, -3, 3))
    a = intersection_number([T1, T2], F)
    assert a == intersection_number([T2, T1], F)
    assert a == intersection_number([T1.plus(L), T2], F)
    assert a == intersection_number([T1, T2.plus(L)], F)


@given(balanced_2d_fans(), st.data())
def test_representative_independence(F, data):
    T = data.draw(tr_functions(F.n))
    aux = data.draw(tr_functions(F.n))
    assert as_cycle(product_2d(T, refine_by(F, aux))) == as_cycle(product_2d(T, F))


class TestProjectionFormula:
    def test_identity(self):
        F = WeightedFan.one_dimensional(2, [(1, 0), (0, 1), (-1, -1)], [1, 1, 1])
        assert projection_formula_check(la.identity(2), max_of((0, 0), (1, 0)), F)

    def test_zero_map(self):
        F = WeightedFan.one_dimensional(2, [(1, 0), (0, 1), (-1, -1)], [1, 1, 1])
        assert projection_formula_check(((0, 0),), max_of((0,), (1,)), F)

    def test_bergman_projection(self):
        rays = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (-1, -1, -1, 0), (0, 0, 0, 1), (0, 0, 0, -1)]
        F = WeightedFan.one_dimensional(4, rays, [1] * 6)
        f = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))
        assert projection_formula_check(f, max_of((0, 0, 0), (-1, -1, -1)), F)

    @given(balanced_1d_fans(3), st.data())
    def test_generated(self, F, data):
        rows = data.draw(st.lists(int_vectors(3, -3, 3), min_size=1, max_size=3))
        T = data.draw(tr_functions(len(rows)))
        assert projection_formula_check(rows, T, F)


def test_dimension_mismatch_rejected():
    from tropfan.errors import DimensionMismatch

    line = WeightedFan.one_dimensional(2, [(1, 0), (-1, 0)], [1, 1])
    with pytest.raises(DimensionMismatch):
        product_1d(max_of((0, 0, 0), (1, 0, 0)), line)
