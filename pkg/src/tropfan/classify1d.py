"""Galleries, canonical partitions and minimal models of 1-dimensional fans."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from . import lattice as la
from .errors import (
    AmbientSpaceNotSpanned,
    FactorizationFailed,
    NoSolution,
    NotBergmanImage,
    NotOneDimensional,
    NotRegular,
    NotRegularFunction,
    RayNotInClass,
    Unbalanced,
)
from .fan import WeightedFan, check_balanced, pushforward
from .lattice import Matrix, Vector
from .trop import EQ, LE, TRFunction, compare, normalize, product_1d


@dataclass(frozen=True)
class Gallery1D:
    """Pair of rays ``a < b`` and the functional with ``l(v_a) = 1``, ``l(v_b) = -1``."""

    l: Vector
    a: int
    b: int

    def oriented(self, a: int) -> Vector:
        """The gallery functional taking the value 1 on ray ``a``."""
        if a == self.a:
            return self.l
        if a == self.b:
            return la.neg(self.l)
        raise RayNotInClass(a)


@dataclass(frozen=True)
class CanonicalPartition:
    classes: tuple[tuple[int, ...], ...]
    nongallery: tuple[int, ...]
    class_galleries: tuple[tuple[Gallery1D, ...], ...]

    def class_of(self, ray: int) -> int:
        for k, c in enumerate(self.classes):
            if ray in c:
                return k
        raise RayNotInClass(ray)

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.classes)


@dataclass(frozen=True)
class MinimalModel:
    matrix: Matrix
    image: WeightedFan
    class_blocks: tuple[tuple[int, int], ...]
    partition: CanonicalPartition


def _require_curve(F: WeightedFan) -> None:
    if F.dim != 1:
        raise NotOneDimensional("expected a 1-dimensional fan")
    rep = check_balanced(F)
    if not rep.balanced:
        raise Unbalanced("fan is not balanced", rep.failures)
    if la.rank(F.rays) < F.n:
        raise AmbientSpaceNotSpanned(f"rays span a proper subspace of R^{F.n}")


def gallery_functional(F: WeightedFan, a: int, b: int) -> Vector | None:
    """Integer ``l`` with ``l(v_a) = 1``, ``l(v_b) = -1`` and zero on other rays."""
    if F.weights[a] != 1 or F.weights[b] != 1:
        return None
    cons = [(r, 1 if i == a else -1 if i == b else 0) for i, r in enumerate(F.rays)]
    try:
        return la.solve_dual(cons)
    except NoSolution:
        return None


def find_galleries(F: WeightedFan) -> tuple[Gallery1D, ...]:
    _require_curve(F)
    out = []
    for a, b in combinations(range(len(F.rays)), 2):
        l = gallery_functional(F, a, b)
        if l is not None:
            out.append(Gallery1D(l, a, b))
    return tuple(out)


def canonical_partition(F: WeightedFan, galleries: Sequence[Gallery1D] | None = None) -> CanonicalPartition:
    if galleries is None:
        galleries = find_galleries(F)
    parent = list(range(len(F.rays)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in galleries:
        ra, rb = find(g.a), find(g.b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    in_gallery = {i for g in galleries for i in (g.a, g.b)}
    groups: dict[int, list[int]] = {}
    for i in sorted(in_gallery):
        groups.setdefault(find(i), []).append(i)
    classes = tuple(tuple(v) for _, v in sorted(groups.items()))
    per_class = tuple(tuple(g for g in galleries if g.a in c) for c in classes)
    nongallery = tuple(i for i in range(len(F.rays)) if i not in in_gallery)
    return CanonicalPartition(classes, nongallery, per_class)


def _class_functionals(F: WeightedFan, P: CanonicalPartition, k: int) -> dict[int, Vector]:
    """``{j: h_j}`` with ``h_j(v_j) = 1``, ``h_j(v_r) = -1`` for the representative ``r``."""
    cls = P.classes[k]
    r = cls[0]
    by_pair = {(g.a, g.b): g for g in P.class_galleries[k]}
    return {j: by_pair[(r, j)].oriented(j) for j in cls[1:]}


def pair_functional(F: WeightedFan, P: CanonicalPartition, i: int, j: int) -> Vector:
    """``l_ij`` built from representative galleries by differencing."""
    k = P.class_of(i)
    if j not in P.classes[k] or i == j:
        raise RayNotInClass(j)
    h = _class_functionals(F, P, k)
    r = P.classes[k][0]
    if i == r:
        l = la.neg(h[j])
    elif j == r:
        l = h[i]
    else:
        l = la.sub(h[i], h[j])
    for t, v in enumerate(F.rays):
        expected = 1 if t == i else -1 if t == j else 0
        if la.dot(l, v) != expected:
            raise NotRegular(f"pair ({i}, {j}) does not carry a gallery")
    return l


def m_max(F: WeightedFan, ray: int, partition: CanonicalPartition | None = None) -> TRFunction:
    """The largest non-negative TR function with ``M . F = 1`` and ``M(v_ray) = 1``."""
    P = partition or canonical_partition(F)
    k = P.class_of(ray)
    zero = (0,) * F.n
    return TRFunction([zero] + [pair_functional(F, P, ray, j) for j in P.classes[k] if j != ray])


@dataclass(frozen=True)
class RegularityWitness:
    regular: bool
    product: int
    ray: int | None = None
    binomial: Vector | None = None
    gallery: Gallery1D | None = None
    class_index: int | None = None


def is_regular_function(F: WeightedFan, M: TRFunction, partition: CanonicalPartition | None = None) -> RegularityWitness:
    """Decide ``M . F == 1`` and extract the gallery that ``M`` reveals."""
    M = normalize(M)
    prod = product_1d(M, F).weight
    if prod != 1:
        return RegularityWitness(False, prod)
    values = [M(v) for v in F.rays]
    a = next(i for i, x in enumerate(values) if x)
    l = next(f for f in M.functionals if la.dot(f, F.rays[a]) == 1)
    b = next(i for i, v in enumerate(F.rays) if la.dot(l, v) == -1)
    g = Gallery1D(l, a, b) if a < b else Gallery1D(la.neg(l), b, a)
    P = partition or canonical_partition(F)
    return RegularityWitness(True, 1, a, l, g, P.class_of(a))


def characterize_class_functions(F: WeightedFan, ray: int, M: TRFunction, partition=None) -> bool:
    """Whether ``M`` lies below ``M_max(ray)``."""
    return compare(normalize(M), m_max(F, ray, partition)) in (LE, EQ)


def in_class_set(F: WeightedFan, ray: int, M: TRFunction) -> bool:
    """Membership in the set of functions with ``M . F = 1`` and ``M(v_ray) = 1``."""
    M = normalize(M)
    return product_1d(M, F).weight == 1 and M(F.rays[ray]) == 1


# --- Bergman sums ----------------------------------------------------------------


@dataclass(frozen=True)
class BergmanSum:
    ok: bool
    groups: tuple[tuple[int, ...], ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _matroid_components(vectors: Sequence[Vector]) -> list[list[int]]:
    basis: list[int] = []
    for i, v in enumerate(vectors):
        if la.rank([vectors[j] for j in basis] + [v]) > len(basis):
            basis.append(i)
    parent = list(range(len(vectors)))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for e in range(len(vectors)):
        if e in basis:
            continue
        coeffs = la.coordinates_in_basis(vectors[e], [vectors[j] for j in basis])
        for j, c in zip(basis, coeffs):
            if c:
                ra, rb = find(e), find(j)
                parent[max(ra, rb)] = min(ra, rb)
    comps: dict[int, list[int]] = {}
    for i in range(len(vectors)):
        comps.setdefault(find(i), []).append(i)
    return [sorted(c) for _, c in sorted(comps.items())]


def is_bergman_sum(F: WeightedFan) -> BergmanSum:
    """Split a 1-dimensional fan into unimodular 1-dimensional Bergman fans."""
    if F.dim != 1:
        return BergmanSum(False, reason="not one-dimensional")
    if not F.rays:
        return BergmanSum(False, reason="empty fan")
    if any(w != 1 for w in F.weights):
        return BergmanSum(False, reason="weights must all be 1")
    groups = _matroid_components(F.rays)
    bases = []
    for g in groups:
        vs = [F.rays[i] for i in g]
        if len(g) < 2 or any(sum(v[t] for v in vs) for t in range(F.n)):
            return BergmanSum(False, reason=f"group {g} does not sum to zero")
        if la.rank(vs) != len(g) - 1:
            return BergmanSum(False, reason=f"group {g} has the wrong rank")
        for sub in combinations(vs, len(g) - 1):
            if la.index_in_saturation(sub) != 1:
                return BergmanSum(False, reason=f"group {g} is not saturated (index violation)")
        bases.extend(vs[:-1])
    if la.lattice_index(bases) != 1:
        return BergmanSum(False, reason="group lattices do not form a direct sum of Z^n")
    return BergmanSum(True, tuple(tuple(g) for g in groups))


# --- minimal model ---------------------------------------------------------------


def minimal_model(F: WeightedFan, partition: CanonicalPartition | None = None) -> MinimalModel:
    P = partition or canonical_partition(F)
    if not P.classes:
        raise NotRegular("the fan has no galleries")
    rows: list[Vector] = []
    blocks = []
    for k, cls in enumerate(P.classes):
        h = _class_functionals(F, P, k)
        start = len(rows)
        rows.extend(h[j] for j in cls[1:])
        blocks.append((start, len(rows)))
    matrix = tuple(rows)
    image = pushforward(matrix, F)
    if not is_bergman_sum(image):
        raise NotRegular("projection of the classes is not a Bergman sum")
    return MinimalModel(matrix, image, tuple(blocks), P)


def factor_projection(F: WeightedFan, pi: Sequence[Sequence[int]], model: MinimalModel | None = None) -> Matrix:
    """Integer ``psi`` with ``psi . pi_F == pi`` for a projection onto a Bergman sum."""
    pi = tuple(la.vec(r) for r in pi)
    G = pushforward(pi, F)
    dec = is_bergman_sum(G)
    if not dec:
        raise NotBergmanImage(dec.reason)
    model = model or minimal_model(F)
    piF = model.matrix
    d, r = len(piF), len(pi)
    model_rays = model.image.rays
    psi = [[0] * d for _ in range(r)]
    for group in dec.groups:
        targets = [G.rays[i] for i in group]
        fibre = [i for i, v in enumerate(F.rays) if any(la.matvec(pi, v)) and la.primitive(la.matvec(pi, v)) in targets]
        if len(fibre) != len(group):
            raise FactorizationFailed(f"fibre of summand {group} has {len(fibre)} rays")
        images = [la.matvec(piF, F.rays[i]) for i in fibre]
        if any(not any(x) for x in images):
            raise FactorizationFailed("fibre ray is collapsed by the minimal model")
        images = [la.primitive(x) for x in images]
        base = images[-1]
        for j, rj in enumerate(images[:-1]):
            cons = [(m, 1 if m == rj else -1 if m == base else 0) for m in model_rays]
            try:
                lj = la.solve_dual(cons)
            except NoSolution as exc:
                raise FactorizationFailed(f"no model gallery between {rj} and {base}") from exc
            col = la.matvec(pi, F.rays[fibre[j]])
            for a in range(r):
                for b in range(d):
                    psi[a][b] += col[a] * lj[b]
    psi_m = tuple(tuple(row) for row in psi)
    for v in F.rays:
        if la.matvec(psi_m, la.matvec(piF, v)) != la.matvec(pi, v):
            raise FactorizationFailed(f"psi . pi_F differs from pi on {v}")
    return psi_m


def lift_function(F: WeightedFan, M: TRFunction, model: MinimalModel | None = None) -> TRFunction:
    """``M'`` on the model space with ``M = M' . pi_F`` and ``M' . pi_F(F) = 1``."""
    M = normalize(M)
    if not is_regular_function(F, M).regular:
        raise NotRegularFunction("M . F is not 1")
    model = model or minimal_model(F)
    piT = la.transpose(model.matrix)
    lifted = []
    for f in M.functionals:
        try:
            c = la.solve_rational(piT, f)
        except NoSolution as exc:
            raise NotRegularFunction(f"functional {f} is not a combination of model rows") from exc
        if any(x.denominator != 1 for x in c):
            raise NotRegularFunction(f"functional {f} lifts only rationally")
        lifted.append(tuple(int(x) for x in c))
    Mp = TRFunction(lifted)
    if product_1d(Mp, model.image).weight != 1:
        raise NotRegularFunction("lift does not meet the model in degree 1")
    return Mp


# --- structure checks -------------------------------------------------------------


@dataclass(frozen=True)
class ClassSpanReport:
    class_rays: tuple[int, ...]
    galleries: int
    span_dim: int
    expected: int
    sums_to_zero: bool

    @property
    def matches(self) -> bool:
        return self.span_dim == self.expected


@dataclass(frozen=True)
class SpanReport:
    hypothesis_holds: bool
    classes: tuple[ClassSpanReport, ...]
    note: str = ""


def check_prop_317(F: WeightedFan) -> SpanReport:
    """Compare the span dimension of each class with ``|P_m| + 1``.

    Irreducibility is the caller's assertion.  A class whose rays sum to zero
    is a balanced sub-fan, which witnesses reducibility and explains a
    mismatch.
    """
    P = canonical_partition(F)
    if any(len(c) == len(F.rays) for c in P.classes):
        return SpanReport(False, (), "the fan consists of a single class")
    reports = []
    for c in P.classes:
        vs = [F.rays[i] for i in c]
        zero = not any(sum(v[t] for v in vs) for t in range(F.n))
        reports.append(ClassSpanReport(c, len(c) - 1, la.rank(vs), len(c), zero))
    return SpanReport(True, tuple(reports))


def thm31_coordinates(F: WeightedFan, M: TRFunction | None = None) -> tuple[Matrix, WeightedFan, int]:
    """Unimodular ``T`` putting a gallery into the form ``e_1``, ``(-1, 0, ..., 0, m)``.

    All remaining rays land in ``e_1^perp``.  The gallery comes from the
    witness of ``M`` when given, otherwise from the first gallery found.
    """
    if M is not None:
        w = is_regular_function(F, M)
        if not w.regular:
            raise NotRegularFunction("M . F is not 1")
        a, l = w.ray, w.binomial
        b = next(i for i, v in enumerate(F.rays) if la.dot(l, v) == -1)
    else:
        gs = find_galleries(F)
        if not gs:
            raise NotRegular("the fan has no galleries")
        g = gs[0]
        a, b, l = g.a, g.b, g.l
    basis = (F.rays[a],) + la.kernel_basis([l])
    T = la.integral_inverse(la.transpose(basis))
    c = la.matvec(T, F.rays[b])
    U, m = la.unimodular_to_last(c[1:])
    block = ((1,) + (0,) * (F.n - 1),) + tuple((0,) + row for row in U)
    T = la.matmul(block, T)
    rays = tuple(la.matvec(T, v) for v in F.rays)
    order = [a, b] + [i for i in range(len(rays)) if i not in (a, b)]
    G = WeightedFan.one_dimensional(F.n, [rays[i] for i in order], [F.weights[i] for i in order])
    return T, G, m


__all__ = [
    "BergmanSum",
    "CanonicalPartition",
    "Gallery1D",
    "MinimalModel",
    "RegularityWitness",
    "canonical_partition",
    "characterize_class_functions",
    "check_prop_317",
    "factor_projection",
    "find_galleries",
    "in_class_set",
    "is_bergman_sum",
    "is_regular_function",
    "lift_function",
    "m_max",
    "minimal_model",
    "pair_functional",
    "thm31_coordinates",
]
