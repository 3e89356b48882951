"""Exact integer and rational linear algebra.

Vectors of ``Z^n`` and of its dual are plain tuples of Python ints; matrices
are tuples of row tuples.  Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NoSolution, ZeroMatrix, ZeroVector

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]

# A lattice vector and a linear functional share one representation; the
# names only document intent at call sites.
LatticeVector = Vector
LinearFunctional = Vector
IntMatrix = Matrix


class _Infinite:
    """Index of a sublattice that does not have full rank."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Infinite"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


def vec(values: Iterable[int]) -> Vector:
    return tuple(int(v) for v in values)


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def add(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def scale(c: int, a: Sequence[int]) -> Vector:
    return tuple(c * x for x in a)


def neg(a: Sequence[int]) -> Vector:
    return tuple(-x for x in a)


def is_zero(a: Sequence[int]) -> bool:
    return not any(a)


def content(a: Sequence[int]) -> int:
    return reduce(gcd, a, 0)


def primitive(v: Sequence[int]) -> Vector:
    """Divide ``v`` by the gcd of its coordinates (sign preserved)."""
    g = content(v)
    if g == 0:
        raise ZeroVector(f"cannot take the primitive vector of {tuple(v)}")
    return tuple(x // g for x in v)


def stretch(v: Sequence[int]) -> int:
    """The positive integer ``s`` with ``v = s * primitive(v)``."""
    return content(v)


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return tuple(dot(row, v) for row in a)


def compose_functional(l: Sequence[int], f: Sequence[Sequence[int]]) -> Vector:
    """Pull back a functional on the target of ``f`` to its source: ``l o f``."""
    return tuple(sum(l[i] * f[i][j] for i in range(len(f))) for j in range(len(f[0])))


def _check_rectangular(a: Sequence[Sequence[int]]) -> int:
    if not a:
        raise DimensionMismatch("empty matrix")
    width = len(a[0])
    for row in a:
        if len(row) != width:
            raise DimensionMismatch("rows of differing length")
    return width


def det(a: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss elimination)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    if any(len(r) != n for r in m):
        raise DimensionMismatch("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def hermite_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form with transformation.

    Returns ``(H, U)`` where ``U`` is unimodular and ``H == U * A``.  Nonzero
    rows of ``H`` come first, pivots are positive and strictly move right, and
    entries above each pivot are reduced into ``[0, pivot)``.
    """
    n = _check_rectangular(a)
    m = len(a)
    if all(x == 0 for row in a for x in row):
        raise ZeroMatrix("Hermite form of the zero matrix is not defined here")
    h = [list(r) for r in a]
    u = [list(r) for r in identity(m)]
    p = 0
    for col in range(n):
        if p == m:
            break
        for i in range(p + 1, m):
            b = h[i][col]
            if b == 0:
                continue
            a0 = h[p][col]
            g, x, y = egcd(a0, b)
            s, t = -b // g, a0 // g
            for mat in (h, u):
                rp, ri = mat[p], mat[i]
                mat[p] = [x * c + y * d for c, d in zip(rp, ri)]
                mat[i] = [s * c + t * d for c, d in zip(rp, ri)]
        if h[p][col] == 0:
            continue
        if h[p][col] < 0:
            h[p] = [-c for c in h[p]]
            u[p] = [-c for c in u[p]]
        piv = h[p][col]
        for i in range(p):
            q = h[i][col] // piv
            if q:
                h[i] = [c - q * d for c, d in zip(h[i], h[p])]
                u[i] = [c - q * d for c, d in zip(u[i], u[p])]
        p += 1
    return tuple(map(tuple, h)), tuple(map(tuple, u))


def hnf_basis(gens: Sequence[Sequence[int]]) -> Matrix:
    """Canonical basis (nonzero HNF rows) of the lattice spanned by ``gens``."""
    if not gens or all(x == 0 for g in gens for x in g):
        return ()
    h, _ = hermite_form(gens)
    return tuple(r for r in h if any(r))


def kernel_basis(a: Sequence[Sequence[int]], n: int | None = None) -> tuple[Vector, ...]:
    """Basis of the saturated lattice ``{v in Z^n : A v = 0}``.

    ``n`` is only needed when ``A`` has no rows.
    """
    if not a:
        if n is None:
            raise DimensionMismatch("kernel of an empty matrix needs the ambient dimension")
        return identity(n)
    n = _check_rectangular(a)
    if all(x == 0 for row in a for x in row):
        return identity(n)
    h, u = hermite_form(transpose(a))
    return tuple(u[i] for i in range(n) if not any(h[i]))


def saturated_basis(gens: Sequence[Sequence[int]], n: int | None = None) -> tuple[Vector, ...]:
    """Basis of ``Z^n`` intersected with the rational span of ``gens``."""
    if n is None:
        n = _check_rectangular(gens)
    nonzero = [g for g in gens if any(g)]
    if not nonzero:
        return ()
    orth = kernel_basis(nonzero)
    if not orth:
        return identity(n)
    return hnf_basis(kernel_basis(orth))


def _maximal_minor_gcd(rows: Sequence[Sequence[int]]) -> int:
    d = len(rows)
    n = len(rows[0])
    g = 0
    for cols in combinations(range(n), d):
        g = gcd(g, det([[r[c] for c in cols] for r in rows]))
        if g == 1:
            break
    return g


def lattice_index(gens: Sequence[Sequence[int]]):
    """Index ``[Z^n : <gens>]``, or :data:`INFINITE` for a rank-deficient span."""
    if not gens:
        raise DimensionMismatch("lattice_index needs at least one generator")
    n = _check_rectangular(gens)
    basis = hnf_basis(gens)
    if len(basis) < n:
        return INFINITE
    idx = 1
    for i, row in enumerate(basis):
        idx *= row[i]
    return idx


def index_in_saturation(gens: Sequence[Sequence[int]]) -> int:
    """Index of ``<gens>`` inside ``Z^n`` intersected with its rational span.

    This is the product of the nonzero elementary divisors, computed as the
    gcd of the maximal minors of a basis.
    """
    basis = hnf_basis(gens)
    if not basis:
        raise ZeroMatrix("index of the zero lattice")
    return _maximal_minor_gcd(basis)


# --- rational linear algebra -------------------------------------------------


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    width = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def solve_rational(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...]:
    """Unique rational solution of ``A x = b``.

    Raises :class:`NoSolution` with reason ``inconsistent`` or
    ``underdetermined``.
    """
    n = _check_rectangular(a)
    aug = [list(r) + [rhs] for r, rhs in zip(a, b)]
    red, piv = rref(aug)
    if n in piv:
        raise NoSolution(NoSolution.INCONSISTENT)
    if len(piv) < n:
        raise NoSolution(NoSolution.UNDERDETERMINED, f"rank {len(piv)} < {n}")
    return tuple(row[n] for row in red)


def solve_dual(constraints: Sequence[tuple[Sequence[int], int]]) -> Vector:
    """Integer functional ``l`` with ``l(v) == c`` for every pair ``(v, c)``."""
    if not constraints:
        raise NoSolution(NoSolution.UNDERDETERMINED, "no constraints")
    vs = [tuple(v) for v, _ in constraints]
    widths = {len(v) for v in vs}
    if len(widths) != 1:
        raise DimensionMismatch("constraint vectors of differing dimension")
    sol = solve_rational(vs, [c for _, c in constraints])
    if any(x.denominator != 1 for x in sol):
        raise NoSolution(NoSolution.NON_INTEGRAL, str(tuple(str(x) for x in sol)))
    return tuple(int(x) for x in sol)


def coordinates_in_basis(v: Sequence[int], basis: Sequence[Sequence[int]]) -> tuple[Fraction, ...]:
    """Rational coefficients of ``v`` in terms of independent ``basis`` vectors."""
    return solve_rational(transpose(basis), v)


def inverse_rational(a: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(a)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise NoSolution(NoSolution.UNDERDETERMINED, "singular matrix")
    return tuple(tuple(row[n:]) for row in red)


def integral_inverse(a: Sequence[Sequence[int]]) -> Matrix:
    inv = inverse_rational(a)
    if any(x.denominator != 1 for row in inv for x in row):
        raise NoSolution(NoSolution.NON_INTEGRAL, "matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def complete_basis(u: Sequence[int], lattice_basis: Sequence[Sequence[int]]) -> Vector:
    """Given primitive ``u`` in a rank-2 lattice, return ``b`` with ``{u, b}`` a basis."""
    c1, c2 = lattice_basis
    x, y = coordinates_in_basis(u, (c1, c2))
    if x.denominator != 1 or y.denominator != 1:
        raise DimensionMismatch(f"{tuple(u)} is not in the given lattice")
    g, p, q = egcd(int(x), int(y))
    if g != 1:
        raise ZeroVector(f"{tuple(u)} is not primitive in its plane")
    # det [[x, y], [-q, p]] = x*p + y*q = 1
    return add(scale(-q, c1), scale(p, c2))


def unimodular_to_last(c: Sequence[int]) -> tuple[Matrix, int]:
    """Unimodular ``U`` with ``U c == (0, ..., 0, m)`` and ``m = gcd(c) >= 0``."""
    k = len(c)
    if k == 0:
        return (), 0
    if not any(c):
        return identity(k), 0
    h, u = hermite_form(tuple((x,) for x in c))
    # h == (m, 0, ..., 0)^T; rotate the first row to the bottom
    order = list(range(1, k)) + [0]
    return tuple(u[i] for i in order), h[0][0]
