"""Tropical regular functions and their intersection products with fans."""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import lattice as la
from .errors import (
    DimensionMismatch,
    GenericityFailure,
    NegativeWeight,
    NoSolution,
    Unbalanced,
)
from .fan import WeightedFan, ZeroCycle, as_cycle, check_balanced, normal_vector, pushforward, refine_by
from .lattice import Vector

LE, GE, EQ, INCOMPARABLE = "LE", "GE", "EQ", "INCOMPARABLE"


@dataclass(frozen=True)
class TRFunction:
    """``x -> max_i l_i(x)`` for finitely many integer functionals ``l_i``."""

    functionals: tuple[Vector, ...]

    def __init__(self, functionals: Iterable[Sequence[int]]):
        fs = tuple(sorted({la.vec(l) for l in functionals}))
        if not fs:
            raise ValueError("a TR function needs at least one functional")
        if len({len(l) for l in fs}) != 1:
            raise DimensionMismatch("functionals of differing dimension")
        object.__setattr__(self, "functionals", fs)

    @property
    def n(self) -> int:
        return len(self.functionals[0])

    def __call__(self, x: Sequence) -> int:
        return max(sum(a * b for a, b in zip(l, x)) for l in self.functionals)

    def argmax(self, x: Sequence) -> list[int]:
        vals = [sum(a * b for a, b in zip(l, x)) for l in self.functionals]
        top = max(vals)
        return [i for i, v in enumerate(vals) if v == top]

    def achieving(self, x: Sequence) -> Vector:
        """First functional attaining the maximum at ``x``."""
        return self.functionals[self.argmax(x)[0]]

    @property
    def is_nonnegative(self) -> bool:
        return tuple(0 for _ in range(self.n)) in self.functionals

    def plus(self, L: Sequence[int]) -> "TRFunction":
        return TRFunction(la.add(l, L) for l in self.functionals)

    def pullback(self, f: Sequence[Sequence[int]]) -> "TRFunction":
        return TRFunction(la.compose_functional(l, f) for l in self.functionals)

    def restrict(self, basis: Sequence[Sequence[int]]) -> "TRFunction":
        """The function in the coordinates of ``basis`` (``x -> T(sum x_i b_i)``)."""
        return TRFunction(tuple(la.dot(l, b) for b in basis) for l in self.functionals)

    def __repr__(self) -> str:
        return f"TRFunction({list(self.functionals)})"


@dataclass(frozen=True)
class Binomial:
    l: Vector
    h: Vector

    def __post_init__(self):
        if tuple(self.l) == tuple(self.h):
            raise ValueError("a binomial needs two distinct functionals")

    @property
    def function(self) -> TRFunction:
        return TRFunction([self.l, self.h])

    def __call__(self, x) -> int:
        return max(la.dot(self.l, x), la.dot(self.h, x))


def max_of(*functionals: Sequence[int]) -> TRFunction:
    return TRFunction(functionals)


def normalize(T: TRFunction) -> TRFunction:
    """Shift ``T`` by a linear function so that it contains the zero functional.

    A function that already contains zero is returned unchanged; otherwise the
    smallest functional in reversed-coordinate order is subtracted.
    """
    if T.is_nonnegative:
        return T
    base = min(T.functionals, key=lambda l: tuple(reversed(l)))
    return TRFunction(la.sub(l, base) for l in T.functionals)


# --- Newton polytopes ----------------------------------------------------------


def in_convex_hull(p: Sequence, points: Sequence[Sequence]) -> bool:
    """Exact test whether ``p`` is a convex combination of ``points``."""
    p = tuple(Fraction(x) for x in p)
    pts = [tuple(Fraction(x) for x in q) for q in points]
    if not pts:
        return False
    if p in pts:
        return True
    dim = len(p)
    # Caratheodory: some affinely independent subset already works
    for size in range(2, min(len(pts), dim + 1) + 1):
        for sub in combinations(pts, size):
            a = [[q[j] for q in sub] for j in range(dim)] + [[1] * size]
            b = list(p) + [1]
            try:
                lam = la.solve_rational(a, b)
            except NoSolution:
                continue
            if all(x >= 0 for x in lam):
                return True
    return False


@dataclass(frozen=True)
class NewtonPolytope:
    vertices: tuple[Vector, ...]

    def contains(self, p: Sequence[int]) -> bool:
        return in_convex_hull(p, self.vertices)

    @property
    def dim(self) -> int:
        v0 = self.vertices[0]
        return la.rank([la.sub(v, v0) for v in self.vertices[1:]]) if len(self.vertices) > 1 else 0


def newton_polytope(T: TRFunction) -> NewtonPolytope:
    fs = T.functionals
    verts = tuple(l for i, l in enumerate(fs) if not in_convex_hull(l, fs[:i] + fs[i + 1 :]))
    return NewtonPolytope(verts)


def reduce(T: TRFunction) -> tuple[TRFunction, tuple[Vector, ...]]:
    """Drop functionals that never attain the maximum alone; returns ``(T', dropped)``."""
    verts = newton_polytope(T).vertices
    dropped = tuple(l for l in T.functionals if l not in verts)
    return TRFunction(verts), dropped


def compare(T1: TRFunction, T2: TRFunction) -> str:
    """Pointwise order between two TR functions via Newton-polytope containment."""
    le = all(in_convex_hull(l, T2.functionals) for l in T1.functionals)
    ge = all(in_convex_hull(l, T1.functionals) for l in T2.functionals)
    if le and ge:
        return EQ
    if le:
        return LE
    if ge:
        return GE
    return INCOMPARABLE


def minkowski_dim(T1: TRFunction, T2: TRFunction) -> int:
    """Dimension of ``Newt(T1) + Newt(T2)``."""
    pts = [la.add(a, b) for a in T1.functionals for b in T2.functionals]
    return la.rank([la.sub(p, pts[0]) for p in pts[1:]]) if len(pts) > 1 else 0


# --- intersection products -----------------------------------------------------


def _require_same_space(T: TRFunction, F: WeightedFan) -> None:
    if T.n != F.n:
        raise DimensionMismatch(f"function on R^{T.n} against a fan in R^{F.n}")


def _require_balanced(F: WeightedFan) -> None:
    rep = check_balanced(F)
    if not rep.balanced:
        raise Unbalanced(f"fan is not balanced at {rep.failures}", rep.failures)


def product_1d(T: TRFunction, F: WeightedFan, *, check: bool = True) -> ZeroCycle:
    """Weight at the origin of ``T . F`` for a 1-dimensional fan."""
    if F.dim != 1:
        raise DimensionMismatch("product_1d needs a 1-dimensional fan")
    _require_same_space(T, F)
    if check:
        _require_balanced(F)
    total = tuple(0 for _ in range(F.n))
    value = 0
    for r, w in zip(F.rays, F.weights):
        value += w * T(r)
        total = la.add(total, la.scale(w, r))
    return ZeroCycle(value - T(total))


@dataclass(frozen=True)
class Product2D:
    cycle: WeightedFan
    zero_rays: tuple[Vector, ...]


def product_2d_full(T: TRFunction, F: WeightedFan, *, check: bool = True) -> Product2D:
    if F.dim != 2:
        raise DimensionMismatch("product_2d needs a 2-dimensional fan")
    _require_same_space(T, F)
    if check:
        _require_balanced(F)
    G = refine_by(F, T)
    weights: dict[Vector, int] = {}
    for i, u in enumerate(G.rays):
        star = G.adjacent(i)
        if not star:
            continue
        total = tuple(0 for _ in range(G.n))
        value = 0
        for (p, q), w in star:
            other = G.rays[q if p == i else p]
            nv = la.scale(w, normal_vector(u, other))
            # T is linear on the cone; its interior point u + other picks the functional
            l_sigma = T.achieving(la.add(u, other))
            value += la.dot(l_sigma, nv)
            total = la.add(total, nv)
        l_tau = T.achieving(u)
        wt = value - la.dot(l_tau, total)
        if wt < 0:
            raise NegativeWeight(f"weight {wt} at ray {u}; T is not convex on the star")
        weights[u] = weights.get(u, 0) + wt
    zero = tuple(sorted(r for r, w in weights.items() if w == 0))
    return Product2D(WeightedFan.from_cycle(F.n, weights), zero)


def product_2d(T: TRFunction, F: WeightedFan, *, check: bool = True) -> WeightedFan:
    """The 1-cycle ``T . F`` (rays of weight zero dropped)."""
    return product_2d_full(T, F, check=check).cycle


def product(T: TRFunction, F: WeightedFan, *, check: bool = True):
    return product_1d(T, F, check=check) if F.dim == 1 else product_2d(T, F, check=check)


def intersection_number(Ts: Sequence[TRFunction], F: WeightedFan) -> int:
    """Degree of ``T_1 ... T_k . F`` with ``k = dim F``."""
    if len(Ts) != F.dim:
        raise DimensionMismatch(f"{len(Ts)} functions for a {F.dim}-dimensional fan")
    if F.dim == 2:
        return product_1d(Ts[0], product_2d(Ts[1], F), check=False).weight
    return product_1d(Ts[0], F).weight


def self_products(T1: TRFunction, T2: TRFunction, F: WeightedFan) -> tuple[int, int, int]:
    """``(T1 T1 F, T1 T2 F, T2 T2 F)`` for a 2-dimensional fan."""
    P1 = product_2d(T1, F)
    P2 = product_2d(T2, F)
    return (
        product_1d(T1, P1, check=False).weight,
        product_1d(T1, P2, check=False).weight,
        product_1d(T2, P2, check=False).weight,
    )


def projection_formula_check(f: Sequence[Sequence[int]], T: TRFunction, C: WeightedFan) -> bool:
    """Compare ``T . f_*C`` with ``f^*T . C`` for a 1-dimensional cycle ``C``."""
    lhs = product_1d(T, pushforward(f, C)).weight
    rhs = product_1d(T.pullback(f), C).weight
    return lhs == rhs


# --- hypersurfaces and stable intersection ---------------------------------------


@dataclass(frozen=True)
class HypersurfaceFacet:
    """Region ``{l_i = l_j >= l_k}`` of a tropical hypersurface."""

    i: int
    j: int
    normal: Vector
    weight: int


@dataclass(frozen=True)
class Hypersurface:
    function: TRFunction
    facets: tuple[HypersurfaceFacet, ...]


def _is_edge(p: Vector, q: Vector, others: Sequence[Vector]) -> bool:
    # [p, q] is an edge iff p stays a vertex after collapsing the direction p - q
    d = la.sub(p, q)
    j = next(k for k, x in enumerate(d) if x)

    def proj(x):
        c = Fraction(x[j], d[j])
        return tuple(x[k] - c * d[k] for k in range(len(x)) if k != j)

    return not in_convex_hull(proj(p), [proj(r) for r in others])


def hypersurface(T: TRFunction) -> Hypersurface:
    """Codimension-one locus where the maximum of ``T`` is attained twice."""
    R, _ = reduce(T)
    fs = R.functionals
    facets = []
    for i, j in combinations(range(len(fs)), 2):
        others = [fs[k] for k in range(len(fs)) if k not in (i, j)]
        if _is_edge(fs[i], fs[j], others):
            d = la.sub(fs[i], fs[j])
            facets.append(HypersurfaceFacet(i, j, d, la.content(d)))
    return Hypersurface(R, tuple(facets))


def _fan_faces(F: WeightedFan) -> list[tuple[Vector, ...]]:
    faces: list[tuple[Vector, ...]] = [()]
    used = sorted({i for c in F.facets for i in c})
    faces += [(F.rays[i],) for i in used]
    if F.dim == 2:
        faces += [tuple(F.rays[i] for i in c) for c in F.facets]
    return faces


def is_generic_shift(F: WeightedFan, H: Hypersurface, v: Sequence[int]) -> bool:
    """Certify that ``H + v`` meets every face of ``F`` transversally or not at all.

    For each face ``tau`` and each independent set ``S`` of edge directions
    of the Newton polytope, the affine space ``S = S(v)`` must either meet
    ``span(tau)`` in the expected dimension or miss it.
    """
    dirs = sorted({la.primitive(f.normal) for f in H.facets})
    for gens in _fan_faces(F):
        k = len(gens)
        for size in range(1, k + 2):
            for S in combinations(dirs, size):
                if la.rank(S) < size:
                    continue
                cols = [tuple(la.dot(s, g) for s in S) for g in gens]
                r = la.rank(cols) if cols else 0
                if r == size:
                    continue
                sv = tuple(la.dot(s, v) for s in S)
                if la.rank(cols + [sv]) == r:
                    return False
    return True


def _interval(p0, delta, constraints):
    """Range of ``lam`` with ``g . (p0 + lam delta) >= c`` for all ``(g, c)``."""
    lo, hi = None, None
    for g, c in constraints:
        base = g[0] * p0[0] + g[1] * p0[1]
        slope = g[0] * delta[0] + g[1] * delta[1]
        if slope == 0:
            if base < c:
                return None
            continue
        bound = Fraction(c - base, slope)
        if slope > 0:
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def _shifted_intersection(F: WeightedFan, H: Hypersurface, v: Vector):
    fs = H.function.functionals
    if F.dim == 1:
        total = 0
        for r, w in zip(F.rays, F.weights):
            for f in H.facets:
                dr = la.dot(f.normal, r)
                if dr == 0:
                    continue
                c = Fraction(la.dot(f.normal, v), dr)
                if c <= 0:
                    continue
                x = [c * ri - vi for ri, vi in zip(r, v)]
                li = fs[f.i]
                if all(sum((a - b) * y for a, b, y in zip(li, lk, x)) >= 0 for lk in fs):
                    total += w * f.weight * abs(la.dot(la.primitive(f.normal), r))
        return ZeroCycle(total)

    out: dict[Vector, int] = defaultdict(int)
    for (ia, ib), w in zip(F.facets, F.weights):
        a, b = F.rays[ia], F.rays[ib]
        zbasis = la.saturated_basis([a, b])
        for f in H.facets:
            d = f.normal
            da, db, dv = la.dot(d, a), la.dot(d, b), la.dot(d, v)
            if da == 0 and db == 0:
                continue
            p0 = (Fraction(dv, da), Fraction(0)) if da else (Fraction(0), Fraction(dv, db))
            delta = (db, -da)
            li = fs[f.i]
            cons = [((1, 0), 0), ((0, 1), 0)]
            for lk in fs:
                e = la.sub(li, lk)
                cons.append(((la.dot(e, a), la.dot(e, b)), la.dot(e, v)))
            iv = _interval(p0, delta, cons)
            if iv is None:
                continue
            lo, hi = iv
            mult = w * f.weight * la.lattice_index(list(zbasis) + list(la.kernel_basis([la.primitive(d)])))
            for unbounded, sgn in ((hi is None, 1), (lo is None, -1)):
                if unbounded:
                    direction = la.add(la.scale(sgn * delta[0], a), la.scale(sgn * delta[1], b))
                    out[la.primitive(direction)] += mult
    return WeightedFan.from_cycle(F.n, out)


def stable_intersect(
    F: WeightedFan,
    T: TRFunction,
    *,
    seed: int = 0,
    bound: int = 10**6,
    retries: int = 32,
):
    """Stable intersection of ``F`` with the hypersurface of ``T``.

    The hypersurface is moved by a random integer vector, the shift is
    certified generic, and the limit of the shifted intersection is returned:
    a 1-cycle when ``F`` is 2-dimensional, a :class:`ZeroCycle` otherwise.
    """
    H = hypersurface(T)
    if not H.facets:
        return ZeroCycle(0) if F.dim == 1 else WeightedFan.from_cycle(F.n, {})
    rng = random.Random(seed)
    for _ in range(retries):
        v = tuple(rng.randint(-bound, bound) for _ in range(F.n))
        if is_generic_shift(F, H, v):
            return _shifted_intersection(F, H, v)
    raise GenericityFailure(f"no certified generic shift after {retries} attempts")


def cycle_of(X) -> dict:
    """Normalised comparison key for products: a dict of ray weights or an int."""
    if isinstance(X, ZeroCycle):
        return {(): X.weight}
    return as_cycle(X)


# --- planar mixed areas -----------------------------------------------------------


def _hull_2d(points: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    pts = sorted({(int(p[0]), int(p[1])) for p in points})
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def double_area(points: Sequence[Sequence[int]]) -> int:
    """Twice the area of the convex hull of planar lattice points."""
    h = _hull_2d(points)
    if len(h) < 3:
        return 0
    s = 0
    for (x1, y1), (x2, y2) in zip(h, h[1:] + h[:1]):
        s += x1 * y2 - x2 * y1
    return abs(s)


def mixed_area(P: Sequence[Sequence[int]], Q: Sequence[Sequence[int]]) -> int:
    """Normalised mixed area ``MV(P, Q)``; ``MV(P, P)`` is twice the area of ``P``.

    For planar TR functions with Newton polygons ``P`` and ``Q`` this is the
    intersection number ``T_P . T_Q . [R^2]``.
    """
    sums = [(p[0] + q[0], p[1] + q[1]) for p in P for q in Q]
    return (double_area(sums) - double_area(P) - double_area(Q)) // 2
