"""Bundled worked examples with their expected numbers.

Each fixture computes a small JSON-able value and compares it with the
expected one; :func:`run_all` collects the results in a fixed order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from . import lattice as la
from .classify1d import canonical_partition, minimal_model, thm31_coordinates
from .classify2d import ConventionPair, enumerate_planes_case1, plane_key, plane_profile
from .fan import WeightedFan, plane_fan
from .trop import cycle_of, max_of, product_1d, product_2d, self_products, stable_intersect

DEFAULT_SEED = 20240601

TRIPOD = WeightedFan.one_dimensional(2, [(1, 0), (0, 1), (-1, -1)], [1, 1, 1])
NORMAL_FORM = WeightedFan.one_dimensional(
    3, [(1, 0, 0), (-1, 0, 2), (0, 1, 0), (0, -1, 0), (0, 0, -1)], [1, 1, 2, 2, 2]
)
HALF_PLANES = WeightedFan.build(
    3,
    [(1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (0, 0, -1)],
    [(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)],
    [1] * 6,
    dim=2,
)
LINEALITY_UNION = WeightedFan.build(
    4,
    [(1, 0, 0, 0), (0, 1, 0, 0), (-1, 0, 0, 0), (0, -1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (0, 0, -1, 0), (0, 0, 0, -1)],
    [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6), (6, 7), (4, 7)],
    [1] * 8,
    dim=2,
)
STD4 = ConventionPair.standard(4, 2)


@dataclass(frozen=True)
class FixtureResult:
    name: str
    computed: Any
    expected: Any

    @property
    def passed(self) -> bool:
        return self.computed == self.expected

    def to_json(self) -> dict:
        return {"name": self.name, "computed": self.computed, "expected": self.expected, "passed": self.passed}


def simplex_curve(seed: int) -> FixtureResult:
    return FixtureResult("simplex-curve", product_1d(max_of((0, 0), (1, 0)), TRIPOD).weight, 1)


def normal_form_curve(seed: int) -> FixtureResult:
    P = canonical_partition(NORMAL_FORM)
    _, G, m = thm31_coordinates(NORMAL_FORM, max_of((0, 0, 0), (1, 0, 0)))
    model = minimal_model(NORMAL_FORM)
    computed = {
        "classes": [list(c) for c in P.classes],
        "nongallery": list(P.nongallery),
        "second_ray": list(G.rays[1]),
        "m": m,
        "model_rank": len(model.matrix),
    }
    expected = {"classes": [[0, 1]], "nongallery": [2, 3, 4], "second_ray": [-1, 0, 2], "m": 2, "model_rank": 1}
    return FixtureResult("normal-form-curve", computed, expected)


def three_half_planes(seed: int) -> FixtureResult:
    M1 = max_of((0, 0, 0), (1, 0, 0))
    M2 = max_of((0, 0, 0), (0, 0, 1))
    return FixtureResult("three-half-planes", list(self_products(M1, M2, HALF_PLANES)), [0, 1, 1])


def line_family(seed: int) -> FixtureResult:
    computed, expected = {}, {}
    for a, b in [(0, 0), (1, 2), (3, 5), (-4, 7)]:
        _, t12, t22 = plane_profile(STD4, (1, 1, 0, 0), (a, b, 0, -1))
        L = plane_key([(1, 1, 0, 0), (a, b, 0, -1)])
        stable = cycle_of(stable_intersect(plane_fan(*L), STD4.T2, seed=seed))
        direct = cycle_of(product_2d(STD4.T2, plane_fan(*L)))
        key = f"{a},{b}"
        computed[key] = [t12, t22, stable == direct]
        expected[key] = [1, 0, True]
    return FixtureResult("line-family", computed, expected)


def split_planes(seed: int) -> FixtureResult:
    computed, expected = {}, {}
    for a, b, c, d in [(1, 0, 0, 1), (2, 3, 1, 1), (1, -4, 5, 2), (3, 7, -2, 9)]:
        t11, _, t22 = plane_profile(STD4, (a, b, 0, 0), (0, 0, c, d))
        computed[f"{a},{b},{c},{d}"] = [t11, t22]
        expected[f"{a},{b},{c},{d}"] = [0, 0]
    return FixtureResult("split-planes", computed, expected)


def coordinate_intersections(seed: int) -> FixtureResult:
    got = sorted([list(v) for v in c.span] for c in enumerate_planes_case1(STD4))
    e = la.identity(4)
    want = sorted(
        [list(v) for v in plane_key([r1, r2])]
        for r2 in (e[0], e[1], la.add(e[0], e[1]))
        for r1 in (e[2], e[3], la.add(e[2], e[3]))
    )
    return FixtureResult("coordinate-intersections", {"count": len(got), "planes": got}, {"count": 9, "planes": want})


def lineality_union(seed: int) -> FixtureResult:
    return FixtureResult("lineality-union", list(self_products(STD4.T1, STD4.T2, LINEALITY_UNION)), [1, 0, 1])


FIXTURES: tuple[Callable[[int], FixtureResult], ...] = (
    simplex_curve,
    normal_form_curve,
    three_half_planes,
    line_family,
    split_planes,
    coordinate_intersections,
    lineality_union,
)


def run_all(seed: int = DEFAULT_SEED) -> list[FixtureResult]:
    return [f(seed) for f in FIXTURES]
