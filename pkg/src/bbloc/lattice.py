"""Exact rational linear algebra over weight lattices.

Everything is built on ``fractions.Fraction``: weights are fixed-length
tuples of rationals, matrices are sequences of weights, and no operation
ever rounds.  These are the primitives the rest of the package uses for
determinants, barycentric solves, greedy bases and lattice volumes.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd

Rat = Fraction
Weight = tuple  # fixed-length tuple of Fraction


class DimensionMismatch(ValueError):
    """Inputs disagree about the ambient dimension."""


class NoBasisError(ValueError):
    """The given vectors do not span their ambient space."""


def rat(value) -> Rat:
    """Coerce ints, floats are refused, strings like '2/3', to Fraction."""
    if isinstance(value, Rat):
        return value
    if isinstance(value, int):
        return Rat(value)
    if isinstance(value, str):
        return Rat(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def weight(coords) -> Weight:
    return tuple(rat(c) for c in coords)


def wadd(a: Weight, b: Weight) -> Weight:
    if len(a) != len(b):
        raise DimensionMismatch(f"weight dims {len(a)} != {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def wsub(a: Weight, b: Weight) -> Weight:
    if len(a) != len(b):
        raise DimensionMismatch(f"weight dims {len(a)} != {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def wscale(c, a: Weight) -> Weight:
    c = rat(c)
    return tuple(c * x for x in a)


def wdot(a: Weight, b: Weight) -> Rat:
    if len(a) != len(b):
        raise DimensionMismatch(f"weight dims {len(a)} != {len(b)}")
    return sum((x * y for x, y in zip(a, b)), Rat(0))


def is_zero(a: Weight) -> bool:
    return all(x == 0 for x in a)


def det(rows) -> Rat:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    rows = [list(map(rat, r)) for r in rows]
    n = len(rows)
    for r in rows:
        if len(r) != n:
            raise DimensionMismatch("determinant needs a square matrix")
    if n == 0:
        return Rat(1)
    m = rows
    sign = 1
    prev = Rat(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Rat(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _reduce_against(v, pivots):
    """Eliminate v against pivot rows; returns the reduced vector."""
    v = list(v)
    for row, col in pivots:
        if v[col] != 0:
            c = v[col] / row[col]
            for j in range(len(v)):
                v[j] -= c * row[j]
    return v


def _pivot_col(v):
    for j, x in enumerate(v):
        if x != 0:
            return j
    return None


def lex_first_basis(vectors) -> list:
    """Indices of the lexicographically first basis in the given order.

    Greedy scan: an index is kept iff its vector is independent of the
    vectors already kept.  Raises NoBasisError when the input does not
    span its ambient space.
    """
    vectors = [weight(v) for v in vectors]
    if not vectors:
        raise NoBasisError("no vectors given")
    dim = len(vectors[0])
    pivots = []
    kept = []
    for idx, v in enumerate(vectors):
        if len(v) != dim:
            raise DimensionMismatch("mixed vector dimensions")
        red = _reduce_against(v, pivots)
        col = _pivot_col(red)
        if col is not None:
            pivots.append((red, col))
            kept.append(idx)
        if len(kept) == dim:
            break
    if len(kept) != dim:
        raise NoBasisError(f"vectors span rank {len(kept)} < {dim}")
    return kept


def rank(rows) -> int:
    pivots = []
    for v in rows:
        red = _reduce_against(weight(v), pivots)
        col = _pivot_col(red)
        if col is not None:
            pivots.append((red, col))
    return len(pivots)


def affine_rank(points) -> int:
    """Dimension of the affine span of the given points (-1 if empty)."""
    points = [weight(p) for p in points]
    if not points:
        return -1
    return rank([wsub(p, points[0]) for p in points[1:]])


def solve_exact(rows, rhs):
    """One exact solution x of rows·x = rhs, or None if inconsistent.

    Free variables are set to zero.  ``rows`` is a list of row vectors.
    """
    rows = [list(map(rat, r)) + [rat(b)] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) - 1 if rows else 0
    pivots = []  # (row index in echelon list, column)
    echelon = []
    for r in rows:
        red = _reduce_against(r, [(e, c) for e, c in zip(echelon, [p[1] for p in pivots])])
        col = _pivot_col(red[:ncols])
        if col is not None:
            echelon.append(red)
            pivots.append((len(echelon) - 1, col))
        elif red[ncols] != 0:
            return None
    x = [Rat(0)] * ncols
    for i, col in reversed(pivots):
        row = echelon[i]
        s = row[ncols] - sum(row[j] * x[j] for j in range(col + 1, ncols))
        x[col] = s / row[col]
    return x


def rational_kernel(rows) -> list:
    """Basis of the right kernel of the matrix given by ``rows``."""
    rows = [list(map(rat, r)) for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    echelon = []
    pivcols = []
    for r in rows:
        red = _reduce_against(r, list(zip(echelon, pivcols)))
        col = _pivot_col(red)
        if col is not None:
            echelon.append(red)
            pivcols.append(col)
    free = [j for j in range(ncols) if j not in pivcols]
    basis = []
    for f in free:
        v = [Rat(0)] * ncols
        v[f] = Rat(1)
        for row, col in reversed(list(zip(echelon, pivcols))):
            v[col] = -sum(row[j] * v[j] for j in range(ncols) if j != col) / row[col]
        basis.append(tuple(v))
    return basis


def in_affine_hull(p, points) -> bool:
    points = [weight(q) for q in points]
    if not points:
        return False
    return affine_rank(points + [weight(p)]) == affine_rank(points)


def barycentric(p, vertices):
    """Coefficients c with sum 1, c >= 0 and sum c_i v_i = p, else None.

    For affinely independent vertices the coefficients are unique.  For
    dependent ones any single witness may be returned; callers that need
    certainty about hull membership should enumerate independent subsets.
    """
    p = weight(p)
    vertices = [weight(v) for v in vertices]
    if not vertices:
        return None
    d = len(p)
    rows = [[v[i] for v in vertices] for i in range(d)]
    rows.append([Rat(1)] * len(vertices))
    rhs = list(p) + [Rat(1)]
    sol = solve_exact(rows, rhs)
    if sol is None:
        return None
    if any(c < 0 for c in sol):
        return None
    return sol


def in_convex_hull(p, points) -> bool:
    """Exact hull membership via Caratheodory over independent subsets."""
    p = weight(p)
    points = [weight(q) for q in points]
    d = len(p)
    for k in range(1, min(len(points), d + 1) + 1):
        for sub in combinations(points, k):
            if affine_rank(sub) != k - 1:
                continue
            if barycentric(p, list(sub)) is not None:
                return True
    return False


def normalized_volume(vertices) -> Rat:
    """|det(v_1-v_0, ..., v_d-v_0)| of d+1 points in dimension d."""
    vertices = [weight(v) for v in vertices]
    if not vertices:
        raise DimensionMismatch("no vertices")
    d = len(vertices[0])
    if len(vertices) != d + 1:
        raise DimensionMismatch(f"need {d + 1} points in dimension {d}")
    return abs(det([wsub(v, vertices[0]) for v in vertices[1:]]))


def lattice_simplex_volume(vertices) -> int:
    """Normalized volume of a lattice simplex inside its own affine span.

    For k+1 integer points it is the gcd of all k x k minors of the edge
    matrix, which equals the volume measured against the induced lattice
    (saturation of the edge span).  Returns 0 for degenerate input.
    """
    vertices = [weight(v) for v in vertices]
    k = len(vertices) - 1
    if k < 0:
        raise DimensionMismatch("no vertices")
    if k == 0:
        return 1
    edges = [wsub(v, vertices[0]) for v in vertices[1:]]
    for e in edges:
        for x in e:
            if x.denominator != 1:
                raise ValueError("lattice volume needs integer coordinates")
    d = len(edges[0])
    if k > d:
        return 0
    g = 0
    for cols in combinations(range(d), k):
        minor = det([[e[c] for c in cols] for e in edges])
        g = gcd(g, abs(int(minor)))
    return g


def primitive_direction(vec) -> Weight:
    """Shortest integer vector pointing the same way as vec."""
    vec = weight(vec)
    if is_zero(vec):
        raise ValueError("zero vector has no primitive form")
    from math import lcm

    denom = lcm(*[x.denominator for x in vec])
    ints = [int(x * denom) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(Rat(x // g) for x in ints)


def primitive(vec) -> Weight:
    """Primitive integer vector up to sign, first nonzero entry positive."""
    out = primitive_direction(vec)
    for x in out:
        if x != 0:
            if x < 0:
                out = tuple(-y for y in out)
            break
    return out
