"""Weighted rational fans of dimension at most two."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import lattice as la
from .errors import DimensionMismatch, NoSolution, NotOneDimensional, ZeroVector
from .lattice import Vector


@dataclass(frozen=True)
class Cone:
    """A cone given by its primitive generators (0, 1 or 2 of them)."""

    generators: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.generators)

    def contains(self, x: Sequence[int]) -> bool:
        if not self.generators:
            return not any(x)
        if len(self.generators) == 1:
            (g,) = self.generators
            c = _ray_coordinate(x, g)
            return c is not None and c >= 0
        coords = cone_coordinates(x, *self.generators)
        return coords is not None and coords[0] >= 0 and coords[1] >= 0


@dataclass(frozen=True)
class ZeroCycle:
    """A multiple of the origin."""

    weight: int


@dataclass(frozen=True)
class WeightedFan:
    """Pure-dimensional rational fan with integer weights on its facets.

    ``cones`` lists cones as sorted tuples of ray indices; the facets are the
    cones of size ``dim`` and ``weights`` runs parallel to them.  Faces need
    not be listed.  Stored fans carry positive weights; computed products may
    contain zeros until they are pruned.
    """

    n: int
    rays: tuple[Vector, ...]
    cones: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...]
    dim: int

    @classmethod
    def one_dimensional(cls, n: int, rays: Iterable[Sequence[int]], weights: Iterable[int]) -> "WeightedFan":
        rays = tuple(la.vec(r) for r in rays)
        return cls(n, rays, tuple((i,) for i in range(len(rays))), tuple(weights), 1)

    @classmethod
    def from_cycle(cls, n: int, cycle: Mapping[Vector, int]) -> "WeightedFan":
        """1-dimensional fan from a ``{primitive ray: weight}`` map (zeros dropped)."""
        items = sorted((r, w) for r, w in cycle.items() if w != 0)
        return cls.one_dimensional(n, [r for r, _ in items], [w for _, w in items])

    @classmethod
    def build(cls, n: int, rays, cones, weights, dim: int | None = None) -> "WeightedFan":
        rays = tuple(la.vec(r) for r in rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in cones)
        if dim is None:
            dim = max((len(c) for c in cones), default=1)
        return cls(int(n), rays, cones, tuple(int(w) for w in weights), dim)

    @property
    def facets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c for c in self.cones if len(c) == self.dim)

    def facet_weights(self) -> dict[tuple[int, ...], int]:
        return dict(zip(self.facets, self.weights))

    def cone(self, idx: tuple[int, ...]) -> Cone:
        return Cone(tuple(self.rays[i] for i in idx))

    def adjacent(self, ray: int) -> list[tuple[tuple[int, ...], int]]:
        """Facets containing ``ray`` with their weights (the star of the ray)."""
        return [(c, w) for c, w in zip(self.facets, self.weights) if ray in c]

    def with_weights(self, weights: Iterable[int]) -> "WeightedFan":
        return WeightedFan(self.n, self.rays, self.cones, tuple(weights), self.dim)


def empty_cycle(n: int) -> WeightedFan:
    return WeightedFan(n, (), (), (), 1)


def plane_fan(a: Sequence[int], b: Sequence[int]) -> WeightedFan:
    """Weight-1 plane spanned by ``a`` and ``b`` as four pointed cones.

    The cones use a lattice basis of the saturated plane lattice.
    """
    c1, c2 = la.saturated_basis([a, b])
    rays = (c1, c2, la.neg(c1), la.neg(c2))
    cones = ((0, 1), (1, 2), (2, 3), (0, 3))
    return WeightedFan.build(len(c1), rays, cones, (1, 1, 1, 1), dim=2)


# --- geometry helpers --------------------------------------------------------


def _ray_coordinate(x: Sequence[int], g: Sequence[int]) -> Fraction | None:
    """``c`` with ``x == c*g`` or None."""
    if la.rank([g, x]) > 1:
        return None
    for xi, gi in zip(x, g):
        if gi:
            return Fraction(xi, gi)
    return Fraction(0)


def cone_coordinates(x: Sequence[int], a: Sequence[int], b: Sequence[int]) -> tuple[Fraction, Fraction] | None:
    """Coefficients ``(s, t)`` with ``x == s*a + t*b``, or None off the plane."""
    try:
        s, t = la.coordinates_in_basis(x, (a, b))
    except NoSolution:
        return None
    return s, t


@lru_cache(maxsize=65536)
def normal_vector(u: Vector, other: Vector) -> Vector:
    """Primitive generator from the ray ``u`` towards the cone ``<u, other>``.

    The result is a lattice vector of the cone's plane whose class generates
    ``Z_sigma / Z_tau``, oriented towards ``other``.
    """
    basis = la.saturated_basis([u, other])
    b = la.complete_basis(u, basis)
    _, beta = la.coordinates_in_basis(other, (u, b))
    return b if beta > 0 else la.neg(b)


# --- validation --------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    axiom: str
    cones: tuple[tuple[int, ...], ...]
    message: str


def validate(F: WeightedFan) -> list[Diagnostic]:
    """Check the fan axioms; an empty list means the fan is valid."""
    out: list[Diagnostic] = []

    def bad(axiom, cones, msg):
        out.append(Diagnostic(axiom, tuple(cones), msg))

    for i, r in enumerate(F.rays):
        if len(r) != F.n:
            bad("dimension", [(i,)], f"ray {r} does not live in R^{F.n}")
        elif not any(r):
            bad("strong-convexity", [(i,)], "zero ray generator")
        elif la.content(r) != 1:
            bad("primitive", [(i,)], f"ray generator {r} is not primitive")
    if out:
        return out

    seen_rays: dict[Vector, int] = {}
    for i, r in enumerate(F.rays):
        if r in seen_rays:
            bad("face-intersection", [(seen_rays[r],), (i,)], f"ray {r} listed twice")
        seen_rays[r] = i

    for c in F.cones:
        if not c or len(c) > 2 or any(not 0 <= i < len(F.rays) for i in c):
            bad("face-closure", [c], f"cone {c} does not reference 1 or 2 known rays")
    if F.dim not in (1, 2) or any(len(c) > F.dim for c in F.cones):
        bad("pure-dimensional", F.cones, f"unsupported dimension {F.dim}")
    if out:
        return out

    facets = F.facets
    if len(F.weights) != len(facets):
        bad("positive-weight", facets, f"{len(F.weights)} weights for {len(facets)} facets")
    else:
        for c, w in zip(facets, F.weights):
            if w <= 0:
                bad("positive-weight", [c], f"facet {c} has weight {w}")
    if len(set(facets)) != len(facets):
        bad("face-intersection", facets, "facet listed twice")

    if F.dim == 2:
        for c in facets:
            if c[0] == c[1] or la.rank([F.rays[c[0]], F.rays[c[1]]]) < 2:
                bad("strong-convexity", [c], f"cone {c} is not strongly convex")
        in_facet = {i for c in facets for i in c}
        for c in F.cones:
            if len(c) == 1 and c[0] not in in_facet:
                bad("pure-dimensional", [c], f"ray {c[0]} is not contained in any facet")
        for i in range(len(F.rays)):
            if i not in in_facet and (i,) not in F.cones:
                bad("pure-dimensional", [(i,)], f"ray {i} is not contained in any facet")
        if any(d.axiom == "strong-convexity" for d in out):
            return out
        rays_listed = sorted(set(range(len(F.rays))))
        for c in facets:
            cone = F.cone(c)
            for i in rays_listed:
                if i not in c and cone.contains(F.rays[i]):
                    bad("face-intersection", [c, (i,)], f"ray {i} meets cone {c} outside a common face")
        for x in range(len(facets)):
            for y in range(x + 1, len(facets)):
                msg = _facet_intersection_problem(F, facets[x], facets[y])
                if msg:
                    bad("face-intersection", [facets[x], facets[y]], msg)
    return out


def _facet_intersection_problem(F: WeightedFan, c1, c2) -> str | None:
    a, b = (F.rays[i] for i in c1)
    c, d = (F.rays[i] for i in c2)
    r = la.rank([a, b, c, d])
    if r == 2:
        s1, s2 = F.cone(c1), F.cone(c2)
        common = {g for g in (a, b, c, d) if s1.contains(g) and s2.contains(g)}
        if len(common) > 1:
            return "cones overlap in a two-dimensional region"
        if common:
            (g,) = common
            if g not in (a, b) or g not in (c, d):
                return "cones meet along a ray that is not a common face"
        return None
    if r == 4:
        return None
    # planes meet in a line; find its direction
    k = la.kernel_basis(la.transpose([a, b, la.neg(c), la.neg(d)]))
    (s, t, p, q) = k[0]
    signs = [x for x in (s, t, p, q) if x != 0]
    if not (all(x > 0 for x in signs) or all(x < 0 for x in signs)):
        # the common line does not meet both cones on the same side
        same_side = (s >= 0 and t >= 0 and p >= 0 and q >= 0) or (s <= 0 and t <= 0 and p <= 0 and q <= 0)
        if not same_side:
            return None
    if (s != 0 and t != 0) or (p != 0 and q != 0):
        return "cones meet along a ray that is not a common face"
    return None


# --- balancing ---------------------------------------------------------------


@dataclass
class BalanceReport:
    balanced: bool
    residuals: dict = field(default_factory=dict)
    """Per codimension-one face: the weighted sum of normal vectors."""

    failures: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.balanced


def check_balanced(F: WeightedFan) -> BalanceReport:
    if F.dim == 1:
        total = tuple(sum(w * r[j] for r, w in zip(F.rays, F.weights)) for j in range(F.n))
        ok = not any(total)
        return BalanceReport(ok, {(): total}, [] if ok else [()])
    residuals = {}
    failures = []
    for i, u in enumerate(F.rays):
        star = F.adjacent(i)
        if not star:
            continue
        total = tuple(0 for _ in range(F.n))
        for c, w in star:
            other = F.rays[c[0] if c[1] == i else c[1]]
            total = la.add(total, la.scale(w, normal_vector(u, other)))
        residuals[(i,)] = total
        if la.rank([u, total]) > 1:
            failures.append((i,))
    return BalanceReport(not failures, residuals, failures)


# --- refinement --------------------------------------------------------------


def _argmax(functionals, x) -> list[int]:
    vals = [la.dot(l, x) for l in functionals]
    top = max(vals)
    return [i for i, v in enumerate(vals) if v == top]


def refine_by(F: WeightedFan, T) -> WeightedFan:
    """Subdivide ``F`` so that the max-of-linear function ``T`` is linear on every cone.

    ``T`` is anything exposing a ``functionals`` tuple.
    """
    if F.dim == 1:
        return F
    funcs = T.functionals
    rays = list(F.rays)
    index = {r: i for i, r in enumerate(rays)}
    cones: list[tuple[int, ...]] = []
    weights: list[int] = []
    for (ia, ib), w in zip(F.facets, F.weights):
        a, b = rays[ia], rays[ib]
        cuts: dict[Vector, Fraction] = {}
        for x in range(len(funcs)):
            for y in range(x + 1, len(funcs)):
                diff = la.sub(funcs[x], funcs[y])
                da, db = la.dot(diff, a), la.dot(diff, b)
                if da * db >= 0:
                    continue
                # s*da + t*db == 0 with s, t > 0
                s, t = abs(db), abs(da)
                r = la.primitive(la.add(la.scale(s, a), la.scale(t, b)))
                if x in _argmax(funcs, r):
                    cuts[r] = Fraction(t, s)
        chain = [ia]
        for r, _ in sorted(cuts.items(), key=lambda kv: kv[1]):
            if r not in index:
                index[r] = len(rays)
                rays.append(r)
            chain.append(index[r])
        chain.append(ib)
        for p, q in zip(chain, chain[1:]):
            cones.append(tuple(sorted((p, q))))
            weights.append(w)
    extra = [c for c in F.cones if len(c) < F.dim]
    return WeightedFan.build(F.n, rays, extra + cones, weights, dim=2)


# --- pushforward -------------------------------------------------------------


def pushforward(f: Sequence[Sequence[int]], F: WeightedFan) -> WeightedFan:
    """Image of a 1-dimensional fan under the integer linear map ``f``."""
    if F.dim != 1:
        raise NotOneDimensional("pushforward is implemented for 1-dimensional fans")
    if f and len(f[0]) != F.n:
        raise DimensionMismatch(f"map expects R^{len(f[0])}, fan lives in R^{F.n}")
    m = len(f)
    image: dict[Vector, int] = defaultdict(int)
    for r, w in zip(F.rays, F.weights):
        img = la.matvec(f, r)
        if not any(img):
            continue
        image[la.primitive(img)] += w * la.stretch(img)
    return WeightedFan.from_cycle(m, image)


# --- 1-cycles as maps ----------------------------------------------------------


def as_cycle(F: WeightedFan) -> dict[Vector, int]:
    """``{primitive ray: weight}`` with equal rays merged and zeros dropped."""
    if F.dim != 1:
        raise NotOneDimensional("only 1-cycles compare ray by ray")
    out: dict[Vector, int] = defaultdict(int)
    for r, w in zip(F.rays, F.weights):
        try:
            out[la.primitive(r)] += w
        except ZeroVector:
            continue
    return {r: w for r, w in sorted(out.items()) if w != 0}


def cycles_equal(A: WeightedFan, B: WeightedFan) -> bool:
    return A.n == B.n and as_cycle(A) == as_cycle(B)


def union(*fans: WeightedFan) -> WeightedFan:
    """Formal sum of fans whose cones already meet along common faces.

    Rays are merged by value and weights of identical facets add up.  No
    common refinement is attempted; run :func:`validate` on the result when
    the inputs might cross.
    """
    if not fans:
        raise ValueError("union of no fans")
    n, dim = fans[0].n, fans[0].dim
    rays: list[Vector] = []
    index: dict[Vector, int] = {}
    weights: dict[tuple[int, ...], int] = defaultdict(int)
    for F in fans:
        if F.n != n or F.dim != dim:
            raise DimensionMismatch("fans of different ambient space or dimension")
        for c, w in zip(F.facets, F.weights):
            key = []
            for i in c:
                r = F.rays[i]
                if r not in index:
                    index[r] = len(rays)
                    rays.append(r)
                key.append(index[r])
            weights[tuple(sorted(key))] += w
    facets = sorted(c for c, w in weights.items() if w)
    return WeightedFan.build(n, rays, facets, [weights[c] for c in facets], dim=dim)
