"""Planes with prescribed intersection profiles and strongly regular 2-cycles.

Throughout, a pair of non-negative TR functions ``T1 = max(0, v_1..v_k)`` and
``T2 = max(0, w_1..w_{n-k})`` is fixed whose ``n`` nonzero functionals form a
basis of ``Q^n``.  The *profile* of a 2-cycle ``F`` is the triple
``(T1.T1.F, T1.T2.F, T2.T2.F)``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations, product
from math import comb
from typing import Iterable, Iterator, Sequence

from . import lattice as la
from .errors import (
    ConventionViolation,
    NotRegularSequence,
    SearchBoundExceeded,
    StructureViolation,
    Unbalanced,
)
from .fan import WeightedFan, check_balanced, normal_vector, plane_fan, validate
from .lattice import Vector
from .trop import Binomial, TRFunction, intersection_number, mixed_area, normalize, self_products

Profile = tuple[int, int, int]


# --- the fixed pair ------------------------------------------------------------


@dataclass(frozen=True)
class ConventionPair:
    vs: tuple[Vector, ...]
    ws: tuple[Vector, ...]

    def __post_init__(self):
        object.__setattr__(self, "vs", tuple(la.vec(v) for v in self.vs))
        object.__setattr__(self, "ws", tuple(la.vec(w) for w in self.ws))
        if not self.vs or not self.ws:
            raise ConventionViolation("both functions need a nonzero functional")
        rows = self.vs + self.ws
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ConventionViolation("functionals of differing dimension")
        if len(rows) != n or la.rank(rows) != n:
            raise ConventionViolation("the nonzero functionals must form a basis of Q^n")

    @classmethod
    def standard(cls, n: int, k: int) -> "ConventionPair":
        e = la.identity(n)
        return cls(e[:k], e[k:])

    @property
    def n(self) -> int:
        return len(self.vs[0])

    @property
    def k(self) -> int:
        return len(self.vs)

    @property
    def matrix(self) -> tuple[Vector, ...]:
        return self.vs + self.ws

    @property
    def T1(self) -> TRFunction:
        return TRFunction((tuple(0 for _ in range(self.n)),) + self.vs)

    @property
    def T2(self) -> TRFunction:
        return TRFunction((tuple(0 for _ in range(self.n)),) + self.ws)

    def swapped(self) -> "ConventionPair":
        return ConventionPair(self.ws, self.vs)

    def lineality(self) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
        """Bases of ``W1 = ker(v_*)`` and ``W2 = ker(w_*)``."""
        return la.hnf_basis(la.kernel_basis(self.vs)), la.hnf_basis(la.kernel_basis(self.ws))


def choose_convention_pair(M1: TRFunction, M2: TRFunction) -> ConventionPair:
    """Pick ``T_i <= M_i`` (after normalising) whose nonzero functionals form a basis.

    Subsets are tried by increasing size of the ``M1`` part, then
    lexicographically; the first working choice is returned.
    """
    A = [l for l in normalize(M1).functionals if any(l)]
    B = [l for l in normalize(M2).functionals if any(l)]
    n = M1.n
    for k in range(1, n):
        for S1 in combinations(A, k):
            for S2 in combinations(B, n - k):
                if la.rank(S1 + S2) == n:
                    return ConventionPair(S1, S2)
    raise ConventionViolation("no independent choice of functionals; Newt(M1)+Newt(M2) is not full-dimensional")


# --- plane profiles --------------------------------------------------------------


def plane_key(gens: Sequence[Sequence[int]]) -> tuple[Vector, Vector]:
    """Canonical basis of the saturated lattice of the rational plane ``<gens>``."""
    basis = la.saturated_basis([la.vec(g) for g in gens])
    if len(basis) != 2:
        raise ValueError("generators do not span a plane")
    return basis  # already in Hermite normal form


def plane_profile(pair: ConventionPair, a: Sequence[int], b: Sequence[int], *, method: str = "products") -> Profile:
    """Profile of the weight-1 plane ``<a, b>``.

    ``method="products"`` evaluates the products on the plane as a fan;
    ``method="mixed-area"`` uses mixed areas of the restricted Newton polygons,
    which is much faster and agrees exactly.
    """
    if method == "products":
        return self_products(pair.T1, pair.T2, plane_fan(a, b))
    if method != "mixed-area":
        raise ValueError(f"unknown method {method!r}")
    if la.rank([a, b]) != 2:
        raise ValueError("generators do not span a plane")
    d = la.index_in_saturation([a, b])
    P = [(la.dot(l, a), la.dot(l, b)) for l in pair.T1.functionals]
    Q = [(la.dot(l, a), la.dot(l, b)) for l in pair.T2.functionals]
    vals = (mixed_area(P, P), mixed_area(P, Q), mixed_area(Q, Q))
    # the coordinates of <a, b> see the plane lattice with index d
    return tuple(v // d for v in vals)  # type: ignore[return-value]


@dataclass(frozen=True)
class PlaneCandidate:
    span: tuple[Vector, Vector]
    generators: tuple[Vector, ...]
    provenance: str
    data: tuple[tuple[str, tuple], ...]
    profile: Profile

    def to_json(self) -> dict:
        return {
            "span": [list(v) for v in self.span],
            "generators": [list(v) for v in self.generators],
            "provenance": self.provenance,
            "data": {k: list(v) for k, v in self.data},
            "profile": list(self.profile),
        }


def _dedupe(cands: Iterable[PlaneCandidate]) -> list[PlaneCandidate]:
    seen: dict[tuple, PlaneCandidate] = {}
    for c in cands:
        seen.setdefault(c.span, c)
    return [seen[k] for k in sorted(seen)]


def _solve_columns(pair: ConventionPair, columns: Sequence[Sequence[int]]) -> tuple[Vector, ...] | None:
    """Integral primitive vectors ``r`` with ``M r = column``, or None."""
    inv = _inverse(pair.matrix)
    out = []
    for col in columns:
        r = [sum(x * c for x, c in zip(row, col)) for row in inv]
        if any(x.denominator != 1 for x in r):
            return None
        v = tuple(int(x) for x in r)
        if la.is_zero(v) or la.content(v) != 1:
            return None
        out.append(v)
    return tuple(out)


_INV_CACHE: dict = {}


def _inverse(m):
    if m not in _INV_CACHE:
        _INV_CACHE[m] = la.inverse_rational(m)
    return _INV_CACHE[m]


def _nonempty_subsets(m: int) -> Iterator[tuple[int, ...]]:
    for size in range(1, m + 1):
        yield from combinations(range(m), size)


# --- case 1: T1.L and T2.L are single lines ------------------------------------


def enumerate_planes_case1(pair: ConventionPair, *, filtered: bool = True) -> list[PlaneCandidate]:
    """Planes ``<rho_1, rho_2>`` with ``M rho_2 = (x_A, 0)`` and ``M rho_1 = (0, x_B)``.

    With ``filtered`` only profile ``(0, 1, 0)`` survives.
    """
    k, n = pair.k, pair.n
    out = []
    for A in _nonempty_subsets(k):
        col2 = tuple(1 if i in A else 0 for i in range(k)) + (0,) * (n - k)
        r2 = _solve_columns(pair, [col2])
        if r2 is None:
            continue
        for B in _nonempty_subsets(n - k):
            col1 = (0,) * k + tuple(1 if j in B else 0 for j in range(n - k))
            r1 = _solve_columns(pair, [col1])
            if r1 is None:
                continue
            gens = (r1[0], r2[0])
            prof = plane_profile(pair, *gens, method="mixed-area")
            if filtered and prof != (0, 1, 0):
                continue
            data = (("A", tuple(i + 1 for i in A)), ("B", tuple(j + 1 for j in B)))
            out.append(PlaneCandidate(plane_key(gens), gens, "case1", data, prof))
    return _dedupe(out)


# --- Bergman-curve tables ----------------------------------------------------------


def _bergman_side(m: int) -> Iterator[tuple[tuple, tuple, tuple[tuple[int, int, int], ...]]]:
    """Value tables on three rays when ``max(0, f_1..f_m)`` cuts a Bergman curve.

    ``r_1`` is the ray of value 1; each element of ``Delta`` is sent to ``r_2``
    or ``r_3`` where it takes the value -1.  Yields ``(Delta, D2, rows)``.
    """
    for delta in _nonempty_subsets(m):
        for parts in product((2, 3), repeat=len(delta)):
            d2 = tuple(i for i, p in zip(delta, parts) if p == 2)
            rows = []
            for i in range(m):
                if i not in delta:
                    rows.append((0, 0, 0))
                elif i in d2:
                    rows.append((1, -1, 0))
                else:
                    rows.append((1, 0, -1))
            yield delta, d2, tuple(rows)


def _degree_one_side(m: int) -> Iterator[tuple[int, tuple, tuple, tuple[tuple[int, int, int], ...]]]:
    """Tables when ``max(0, f_1..f_m)`` has degree 1 on the curve: value 1 at ``r_{j*}``."""
    for jstar in range(3):
        others = [j for j in range(3) if j != jstar]
        for delta in _nonempty_subsets(m):
            for parts in product(others, repeat=len(delta)):
                where = dict(zip(delta, parts))
                rows = []
                for i in range(m):
                    row = [0, 0, 0]
                    if i in where:
                        row[jstar] = 1
                        row[where[i]] = -1
                    rows.append(tuple(row))
                yield jstar, delta, tuple(where[i] for i in delta), tuple(rows)


def _zero_side(m: int):
    yield (), (), tuple((0, 0, 0) for _ in range(m))


def _curve_planes(pair: ConventionPair, tag: str, bergman_first: bool, other_tables) -> Iterator[PlaneCandidate]:
    k, n = pair.k, pair.n
    m_b = k if bergman_first else n - k
    m_o = n - k if bergman_first else k
    for delta, d2, brows in _bergman_side(m_b):
        d3 = tuple(i for i in delta if i not in d2)
        for otable in other_tables(m_o):
            orows = otable[-1]
            rows = brows + orows if bergman_first else orows + brows
            cols = [tuple(r[j] for r in rows) for j in range(3)]
            rs = _solve_columns(pair, cols)
            if rs is None or la.rank(rs) != 2:
                continue
            data = [
                ("Delta", tuple(i + 1 for i in delta)),
                ("Delta2", tuple(i + 1 for i in d2)),
                ("Delta3", tuple(i + 1 for i in d3)),
            ]
            if len(otable) == 4:
                jstar, odelta, targets, _ = otable
                data += [
                    ("jstar", (jstar + 1,)),
                    ("DeltaOther", tuple(i + 1 for i in odelta)),
                    ("targets", tuple(t + 1 for t in targets)),
                ]
            prof = plane_profile(pair, rs[0], rs[1], method="mixed-area")
            yield PlaneCandidate(plane_key(rs[:2]), rs, tag, tuple(data), prof)


def enumerate_planes_case2(pair: ConventionPair, *, filtered: bool = True) -> list[PlaneCandidate]:
    """Planes on which one function cuts a Bergman curve and the other has degree 1.

    Survivors have profile ``(1, 1, <=1)`` (``T1`` side) or ``(<=1, 1, 1)``
    (the swapped run).
    """
    out = []
    for c in _curve_planes(pair, "case2", True, _degree_one_side):
        if not filtered or (c.profile[0] == 1 and c.profile[1] == 1 and c.profile[2] <= 1):
            out.append(c)
    for c in _curve_planes(pair, "case2-swapped", False, _degree_one_side):
        if not filtered or (c.profile[2] == 1 and c.profile[1] == 1 and c.profile[0] <= 1):
            out.append(c)
    return _dedupe(out)


def enumerate_planes_lemma47a(pair: ConventionPair, *, filtered: bool = True) -> list[PlaneCandidate]:
    """Planes of profile ``(0, 0, 1)`` and, swapped, ``(1, 0, 0)``."""
    out = []
    for c in _curve_planes(pair, "lemma47a", False, _zero_side):
        if not filtered or c.profile == (0, 0, 1):
            out.append(c)
    for c in _curve_planes(pair, "lemma47a-swapped", True, _zero_side):
        if not filtered or c.profile == (1, 0, 0):
            out.append(c)
    return _dedupe(out)


def _lineality_candidates(pair: ConventionPair) -> list[PlaneCandidate]:
    out = []
    for tag, W in zip(("W1", "W2"), pair.lineality()):
        if len(W) == 2:
            out.append(PlaneCandidate(plane_key(W), tuple(W), tag, (), plane_profile(pair, *W, method="mixed-area")))
    return out


def _all_raw(pair: ConventionPair) -> list[PlaneCandidate]:
    return (
        enumerate_planes_case1(pair, filtered=False)
        + enumerate_planes_case2(pair, filtered=False)
        + enumerate_planes_lemma47a(pair, filtered=False)
        + _lineality_candidates(pair)
    )


def lemma47b_sweep(pair: ConventionPair) -> list[PlaneCandidate]:
    """Candidates of profile ``(0, 0, 0)``; expected to be empty."""
    return _dedupe(c for c in _all_raw(pair) if c.profile == (0, 0, 0))


def lemma47c_sweep(pair: ConventionPair) -> list[PlaneCandidate]:
    """Candidates of profile ``(1, 0, 1)``; expected to be empty."""
    return _dedupe(c for c in _all_raw(pair) if c.profile == (1, 0, 1))


def certified_planes(pair: ConventionPair) -> list[PlaneCandidate]:
    """Every plane that can carry a facet of a strongly regular 2-cycle."""
    return _dedupe(
        enumerate_planes_case1(pair) + enumerate_planes_case2(pair) + enumerate_planes_lemma47a(pair)
    )


def matches_profile(profile: Profile, pattern: str) -> bool:
    """``pattern`` like ``"0,1,0"`` or ``"1,1,<=1"``."""
    parts = pattern.split(",")
    if len(parts) != 3:
        raise ValueError(f"bad profile pattern {pattern!r}")
    for v, p in zip(profile, parts):
        p = p.strip()
        if p.startswith("<="):
            if not v <= int(p[2:]):
                return False
        elif v != int(p):
            return False
    return True


# --- galleries of 2-cycles ------------------------------------------------------


@dataclass(frozen=True)
class Gallery2D:
    binomials: tuple[Binomial, Binomial]
    facets: frozenset[tuple[int, ...]]
    rays: tuple[int, ...]


def gallery_2d(F: WeightedFan, L1: Binomial, L2: Binomial) -> Gallery2D:
    """Facets of ``F`` transversal to ``V(L1) & V(L2)``, with structure checks."""
    if intersection_number([L1.function, L2.function], F) != 1:
        raise NotRegularSequence("L1 . L2 . F is not 1")
    d1, d2 = la.sub(L1.l, L1.h), la.sub(L2.l, L2.h)
    common = la.kernel_basis([d1, d2])
    facets = set()
    for sigma, w in zip(F.facets, F.weights):
        gens = [F.rays[i] for i in sigma]
        transversal = la.rank(gens + list(common)) == F.n
        by_product = intersection_number([L1.function, L2.function], plane_fan(*gens)) == 1
        if transversal != by_product:
            raise StructureViolation(f"facet {sigma}: dimension and product criteria disagree")
        if transversal:
            if w != 1:
                raise StructureViolation(f"gallery facet {sigma} has weight {w}")
            facets.add(sigma)
    rays = sorted({i for s in facets for i in s})
    for i in rays:
        if sum(1 for s in facets if i in s) != 2:
            raise StructureViolation(f"gallery ray {F.rays[i]} is not in exactly two gallery facets")
    return Gallery2D((L1, L2), frozenset(facets), tuple(rays))


@dataclass(frozen=True)
class FacetBound:
    facet: tuple[int, ...]
    profile: Profile
    ok: bool


def facet_bound_check(pair: ConventionPair, F: WeightedFan) -> tuple[Profile, list[FacetBound]]:
    """Compare the profile of ``F`` with the profile of each facet's plane."""
    total = self_products(pair.T1, pair.T2, F)
    out = []
    for sigma in F.facets:
        p = plane_profile(pair, *(F.rays[i] for i in sigma))
        out.append(FacetBound(sigma, p, all(a <= b for a, b in zip(p, total))))
    return total, out


def binomials_of(T: TRFunction) -> list[Binomial]:
    return [Binomial(a, b) for a, b in combinations(T.functionals, 2)]


def gallery_coverage(pair: ConventionPair, F: WeightedFan) -> dict[tuple[int, ...], tuple[int, int]]:
    """For each facet, the first binomial pair whose gallery contains it.

    Binomials are numbered in the order ``binomials(T1) + binomials(T2)``; pairs
    within ``T1``, across, and within ``T2`` are all tried.
    """
    bins = binomials_of(pair.T1) + binomials_of(pair.T2)
    cover: dict[tuple[int, ...], tuple[int, int]] = {}
    for i, j in combinations(range(len(bins)), 2):
        if len(cover) == len(F.facets):
            break
        if intersection_number([bins[i].function, bins[j].function], F) != 1:
            continue
        for s in gallery_2d(F, bins[i], bins[j]).facets:
            cover.setdefault(s, (i, j))
    return dict(sorted(cover.items()))


# --- planes into fans ------------------------------------------------------------


def _angle_cmp(p, q) -> int:
    def half(v):
        return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1

    hp, hq = half(p), half(q)
    if hp != hq:
        return hp - hq
    cross = p[0] * q[1] - p[1] * q[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


@dataclass(frozen=True)
class Arrangement:
    """Planes subdivided along their mutual intersection lines."""

    n: int
    planes: tuple[tuple[Vector, Vector], ...]
    rays: tuple[Vector, ...]
    sectors: tuple[tuple[int, int, int], ...]  # (plane index, ray index, ray index)

    def fan(self, chosen: Iterable[int] | None = None) -> WeightedFan:
        idx = range(len(self.sectors)) if chosen is None else sorted(chosen)
        used = sorted({r for s in idx for r in self.sectors[s][1:]})
        pos = {r: i for i, r in enumerate(used)}
        cones = [tuple(sorted((pos[self.sectors[s][1]], pos[self.sectors[s][2]]))) for s in idx]
        order = sorted(range(len(cones)), key=lambda i: cones[i])
        return WeightedFan.build(
            self.n, [self.rays[r] for r in used], [cones[i] for i in order], [1] * len(cones), dim=2
        )


def plane_arrangement(planes: Sequence[Sequence[Sequence[int]]]) -> Arrangement:
    keys = [plane_key(p) for p in planes]
    if len(set(keys)) != len(keys):
        raise ValueError("planes must be pairwise distinct")
    n = len(keys[0][0])
    rays: list[Vector] = []
    index: dict[Vector, int] = {}

    def ray_id(v: Vector) -> int:
        if v not in index:
            index[v] = len(rays)
            rays.append(v)
        return index[v]

    sectors = []
    for p, (c1, c2) in enumerate(keys):
        lines = set()
        for q, (d1, d2) in enumerate(keys):
            if q == p or la.rank([c1, c2, d1, d2]) != 3:
                continue
            s, t, _, _ = la.kernel_basis(la.transpose([c1, c2, la.neg(d1), la.neg(d2)]))[0]
            u = la.primitive(la.add(la.scale(s, c1), la.scale(t, c2)))
            lines.add(max(u, la.neg(u)))
        for c in (c1, c2):
            if len(lines) >= 2:
                break
            if all(la.rank([c, u]) == 2 for u in lines):
                lines.add(c)
        dirs = [d for u in lines for d in (u, la.neg(u))]
        coords = {d: tuple(int(x) for x in la.coordinates_in_basis(d, (c1, c2))) for d in dirs}
        ordered = sorted(dirs, key=lambda d: cmp_to_key(_angle_cmp)(coords[d]))
        for a, b in zip(ordered, ordered[1:] + ordered[:1]):
            sectors.append((p, ray_id(a), ray_id(b)))
    return Arrangement(n, tuple(keys), tuple(rays), tuple(sectors))


def _balancing_rows(arr: Arrangement) -> list[list[int]]:
    rows = []
    for r, u in enumerate(arr.rays):
        star = [(s, sec[2] if sec[1] == r else sec[1]) for s, sec in enumerate(arr.sectors) if r in sec[1:]]
        for f in la.kernel_basis([u]):
            row = [0] * len(arr.sectors)
            for s, other in star:
                row[s] = la.dot(f, normal_vector(u, arr.rays[other]))
            if any(row):
                rows.append(row)
    return rows


def balanced_sector_sets(arr: Arrangement, *, cover_all: bool = True, max_free: int = 20) -> list[tuple[int, ...]]:
    """All 0/1 choices of sectors forming a balanced fan with weights 1.

    With ``cover_all`` every plane must contribute at least one sector.
    """
    m = len(arr.sectors)
    rows = _balancing_rows(arr)
    red, pivots = la.rref(rows) if rows else ([], [])
    free = [j for j in range(m) if j not in pivots]
    if len(free) > max_free:
        raise SearchBoundExceeded(f"{len(free)} free sectors exceed the search bound {max_free}")
    plane_of = [s[0] for s in arr.sectors]
    out = []
    for bits in product((0, 1), repeat=len(free)):
        x = [0] * m
        for j, b in zip(free, bits):
            x[j] = b
        ok = True
        for row, p in zip(red, pivots):
            v = -sum(row[j] * x[j] for j in free)
            if v not in (0, 1):
                ok = False
                break
            x[p] = int(v)
        if not ok or not any(x):
            continue
        if cover_all and {plane_of[j] for j in range(m) if x[j]} != set(range(len(arr.planes))):
            continue
        out.append(tuple(j for j in range(m) if x[j]))
    return sorted(out)


def fan_from_planes(planes: Sequence[Sequence[Sequence[int]]]) -> WeightedFan:
    """The union of whole planes, subdivided along their intersection lines."""
    if not planes:
        raise ValueError("no planes")
    F = plane_arrangement(planes).fan()
    bad = validate(F)
    if bad:
        raise StructureViolation(f"arrangement is not a fan: {bad[0].message}")
    rep = check_balanced(F)
    if not rep.balanced:
        raise Unbalanced(f"unbalanced at {rep.failures}", rep.failures)
    return F


# --- assembly --------------------------------------------------------------------


@dataclass(frozen=True)
class AssembledCycle:
    fan: WeightedFan
    planes: tuple[int, ...]  # indices into the certified plane list
    profile: Profile
    plane_profiles: tuple[Profile, ...]
    coverage: tuple[tuple[tuple[int, ...], tuple[int, int]], ...] = ()

    @property
    def strongly_regular(self) -> bool:
        a, b, c = self.profile
        return b == 1 and a <= 1 and c <= 1

    @property
    def hodge_violation(self) -> bool:
        a, b, c = self.profile
        return b * b < a * c


@dataclass
class AssemblyResult:
    planes: list[PlaneCandidate]
    cycles: list[AssembledCycle] = field(default_factory=list)
    hodge_counterexamples: list[AssembledCycle] = field(default_factory=list)
    subsets_searched: int = 0
    balanced_found: int = 0


def _subset_cycles(args) -> list[tuple[tuple[int, ...], WeightedFan, Profile]]:
    pair, spans, subset, max_free = args
    arr = plane_arrangement([spans[i] for i in subset])
    found = []
    for chosen in balanced_sector_sets(arr, max_free=max_free):
        F = arr.fan(chosen)
        found.append((subset, F, self_products(pair.T1, pair.T2, F)))
    return found


def _threads() -> int:
    env = os.environ.get("TROPFAN_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def assemble_strongly_regular(
    pair: ConventionPair,
    max_planes: int,
    *,
    max_subsets: int = 50_000,
    max_free: int = 20,
    planes: Sequence[PlaneCandidate] | None = None,
    workers: int | None = None,
) -> AssemblyResult:
    """Search sector subfans over subsets of at most ``max_planes`` certified planes.

    Each balanced weight-1 subfan is kept when it is strongly regular
    (``T1.T2 = 1``, ``T1.T1 <= 1``, ``T2.T2 <= 1``) and recorded separately
    when it violates ``(T1.T2)^2 >= (T1.T1)(T2.T2)``.
    """
    cands = list(planes) if planes is not None else certified_planes(pair)
    if max_planes < 1:
        return AssemblyResult(cands)
    total = sum(comb(len(cands), s) for s in range(1, max_planes + 1))
    if total > max_subsets:
        raise SearchBoundExceeded(
            f"{len(cands)} planes give {total} subsets of size <= {max_planes}, above the bound {max_subsets}"
        )
    spans = [c.span for c in cands]
    jobs = [(pair, spans, sub, max_free) for s in range(1, max_planes + 1) for sub in combinations(range(len(cands)), s)]
    workers = workers or _threads()
    if workers > 1 and len(jobs) > 64:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            batches = list(ex.map(_subset_cycles, jobs, chunksize=32))
    else:
        batches = [_subset_cycles(j) for j in jobs]
    res = AssemblyResult(cands, subsets_searched=len(jobs))
    for batch in batches:
        for subset, F, prof in batch:
            res.balanced_found += 1
            cyc = AssembledCycle(F, subset, prof, tuple(cands[i].profile for i in subset))
            if cyc.hodge_violation:
                res.hodge_counterexamples.append(cyc)
            if cyc.strongly_regular:
                cover = tuple(gallery_coverage(pair, F).items())
                res.cycles.append(
                    AssembledCycle(F, subset, prof, cyc.plane_profiles, cover)
                )
    return res


__all__ = [
    "ConventionPair",
    "PlaneCandidate",
    "Gallery2D",
    "Arrangement",
    "AssembledCycle",
    "AssemblyResult",
    "choose_convention_pair",
    "plane_key",
    "plane_profile",
    "enumerate_planes_case1",
    "enumerate_planes_case2",
    "enumerate_planes_lemma47a",
    "lemma47b_sweep",
    "lemma47c_sweep",
    "certified_planes",
    "matches_profile",
    "gallery_2d",
    "facet_bound_check",
    "gallery_coverage",
    "binomials_of",
    "plane_arrangement",
    "balanced_sector_sets",
    "fan_from_planes",
    "assemble_strongly_regular",
]
