"""Compactly supported measures as formal sums of simplex pushforwards.

A measure term (v, vertices) means v times the pushforward of Lebesgue
measure on the standard n-simplex under the affine map sending the
standard vertices to the given weights.  Densities are evaluated
exactly: directly when n equals the ambient dimension, and by the
degree-reducing simplex-spline recursion when n exceeds it.  The
classical alternating fixed-point formula is implemented alongside as
an independent route to the same function.
"""

from dataclasses import dataclass
from itertools import combinations
from math import ceil, factorial, floor

from .lattice import (
    Rat,
    affine_rank,
    barycentric,
    det,
    in_affine_hull,
    rank,
    solve_exact,
    wdot,
    weight,
    wsub,
)


class NonGenericPointError(ValueError):
    """The point lies on a wall (an affine hull of few vertices)."""


class DegenerateConeError(ValueError):
    """A fixed point's tangent cone is not simplicial full-dimensional."""


@dataclass(frozen=True)
class DHMeasure:
    terms: tuple  # tuple of (v: int, vertices: tuple of Weight)
    ambient_dim: int
    simplex_dim: int

    def __post_init__(self):
        for v, verts in self.terms:
            if v < 1:
                raise ValueError("term coefficients must be positive integers")
            if len(verts) != self.simplex_dim + 1:
                raise ValueError("term vertex count must be simplex_dim + 1")
            for w in verts:
                if len(w) != self.ambient_dim:
                    raise ValueError("vertex dimension mismatch")


@dataclass(frozen=True)
class ConeTerm:
    sign: int
    apex: tuple
    generators: tuple


def dh_from_model(model) -> DHMeasure:
    """One term per maximal chain: its coefficient and vertex weights."""
    from .coefficients import chain_v

    terms = []
    for chain in model.maximal_chains():
        v = chain_v(model, chain)
        verts = tuple(model.fixed_point(f).phi_T for f in chain)
        terms.append((v, verts))
    return DHMeasure(tuple(terms), model.ambient_dim, model.dim_x)


def total_mass(measure: DHMeasure) -> Rat:
    """Sum of v / n!, the mass of each simplex pushforward being 1/n!."""
    n = measure.simplex_dim
    return sum((Rat(v) for v, _ in measure.terms), Rat(0)) / factorial(n)


def restrict_torus(measure: DHMeasure, projection) -> DHMeasure:
    """Push the measure forward along a full-row-rank linear map."""
    rows = [weight(r) for r in projection]
    if rows and rank(rows) != len(rows):
        raise ValueError("projection must have full row rank")
    terms = []
    for v, verts in measure.terms:
        terms.append((v, tuple(tuple(wdot(r, w) for r in rows) for w in verts)))
    return DHMeasure(tuple(terms), len(rows), measure.simplex_dim)


def _affine_coordinates(p, points):
    """Affine combination of ``points`` giving p (signs unconstrained)."""
    d = len(p)
    rows = [[pt[i] for pt in points] for i in range(d)]
    rows.append([Rat(1)] * len(points))
    return solve_exact(rows, list(p) + [Rat(1)])


def assert_generic(p, vertices, ambient_dim):
    """Reject p lying on any affine hull of at most ambient_dim vertices."""
    p = weight(p)
    vertices = sorted(set(vertices))
    for k in range(1, min(len(vertices), ambient_dim) + 1):
        for sub in combinations(vertices, k):
            if in_affine_hull(p, list(sub)):
                raise NonGenericPointError(
                    f"point lies on the affine hull of {k} vertices"
                )


def simplex_density(vertices, p, ambient_dim, _memo=None) -> Rat:
    """Density at p of the standard-simplex Lebesgue pushforward.

    Exact at generic p.  Base case n = d is indicator/|det|; for n > d
    one knot is removed per step, the value being the affine-coordinate
    average of the subsimplex values divided by n - d.  Degenerate
    vertex sets contribute zero (their image is a null set avoided by
    generic points).
    """
    if _memo is None:
        _memo = {}
    vertices = tuple(weight(v) for v in vertices)
    p = weight(p)
    d = ambient_dim
    key = tuple(sorted(vertices))
    if key in _memo:
        return _memo[key]
    n = len(vertices) - 1
    if n < d or affine_rank(vertices) < d:
        _memo[key] = Rat(0)
        return _memo[key]
    if n == d:
        vol = abs(det([wsub(v, vertices[0]) for v in vertices[1:]]))
        bc = barycentric(p, vertices)
        value = Rat(0) if bc is None else Rat(1) / vol
        _memo[key] = value
        return value
    pivot = []
    pivot_idx = []
    for i, v in enumerate(vertices):
        if affine_rank(pivot + [v]) > affine_rank(pivot):
            pivot.append(v)
            pivot_idx.append(i)
        if len(pivot) == d + 1:
            break
    coords = _affine_coordinates(p, pivot)
    total = Rat(0)
    for mu, i in zip(coords, pivot_idx):
        if mu == 0:
            continue
        sub = vertices[:i] + vertices[i + 1 :]
        total += mu * simplex_density(sub, p, d, _memo)
    value = total / (n - d)
    _memo[key] = value
    return value


def density_at(measure: DHMeasure, p) -> Rat:
    """Exact density of the measure at a generic point."""
    p = weight(p)
    if len(p) != measure.ambient_dim:
        raise ValueError("point dimension mismatch")
    if measure.simplex_dim < measure.ambient_dim:
        raise ValueError(
            "measure is singular (simplex dimension below ambient dimension)"
        )
    all_vertices = {w for _, verts in measure.terms for w in verts}
    assert_generic(p, all_vertices, measure.ambient_dim)
    memo = {}
    total = Rat(0)
    for v, verts in measure.terms:
        total += v * simplex_density(verts, p, measure.ambient_dim, memo)
    return total


def alternating_density_at(points, v_vec, p) -> Rat:
    """Signed sum of orthant-cone densities over the fixed points.

    Each fixed point needs exactly ambient-dimension many tangent
    weights forming a nondegenerate cone; the direction ``v_vec`` must
    pair nonzero with every tangent weight.
    """
    p = weight(p)
    v_vec = weight(v_vec)
    d = len(p)
    total = Rat(0)
    for fp in points:
        if fp.tangent_weights is None:
            raise DegenerateConeError(f"fixed point {fp.id} lacks tangent weights")
        lams = [weight(w) for w in fp.tangent_weights]
        if len(lams) != d:
            raise DegenerateConeError(
                f"fixed point {fp.id}: {len(lams)} tangent weights in dimension {d}"
            )
        pairings = [wdot(v_vec, lam) for lam in lams]
        if any(x == 0 for x in pairings):
            raise ValueError(f"direction vector pairs to zero at {fp.id}")
        gens = [
            lam if pair > 0 else tuple(-x for x in lam)
            for lam, pair in zip(lams, pairings)
        ]
        vol = det(gens)
        if vol == 0:
            raise DegenerateConeError(f"fixed point {fp.id}: degenerate cone")
        rows = [[g[i] for g in gens] for i in range(d)]
        r = solve_exact(rows, list(wsub(p, fp.phi_T)))
        if any(x == 0 for x in r):
            raise NonGenericPointError(f"point lies on a cone wall of {fp.id}")
        if all(x > 0 for x in r):
            sign = 1
            for x in pairings:
                if x < 0:
                    sign = -sign
            total += Rat(sign) / abs(vol)
    return total


def cone_terms(points, v_vec) -> list:
    """The signed cone data the alternating formula sums over."""
    v_vec = weight(v_vec)
    out = []
    for fp in points:
        lams = [weight(w) for w in fp.tangent_weights or ()]
        pairings = [wdot(v_vec, lam) for lam in lams]
        sign = 1
        gens = []
        for lam, pair in zip(lams, pairings):
            if pair < 0:
                sign = -sign
                gens.append(tuple(-x for x in lam))
            else:
                gens.append(lam)
        out.append(ConeTerm(sign, fp.phi_T, tuple(gens)))
    return out


def ehrhart_density_estimate(model, p, scale) -> Rat:
    """Independent weight-count oracle for toric densities.

    Counts lattice points of scale*P in a box around scale*p and
    normalizes by the box's own lattice count.  The box is sized from
    the exact distance of p to the boundary so it sits entirely inside
    (or outside) the polytope.
    """
    P = model.polytope
    p = weight(p)
    d = P.dim
    r_in = P.inner_box_radius(p)
    if r_in > 0:
        r = min(r_in, Rat(1, 2))
    else:
        r_out = P.outer_box_radius(p)
        if r_out == 0:
            raise NonGenericPointError("point is on the polytope boundary")
        r = min(r_out, Rat(1, 2))
    n = int(scale)
    ranges = []
    for i in range(d):
        lo = ceil(n * (p[i] - r))
        hi = floor(n * (p[i] + r))
        if hi < lo:
            raise NonGenericPointError(
                "sampling box resolves no lattice points at this scale"
            )
        ranges.append(range(lo, hi + 1))
    ineqs = P.facet_inequalities()
    count = 0
    box = 0

    def walk(i, partial):
        nonlocal count, box
        if i == d:
            box += 1
            mu = weight(partial)
            if all(wdot(nrm, mu) <= n * c for nrm, c in ineqs):
                count += 1
            return
        for x in ranges[i]:
            walk(i + 1, partial + [x])

    walk(0, [])
    if box == 0:
        raise NonGenericPointError("empty sampling box")
    return Rat(count, box)
