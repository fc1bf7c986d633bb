"""Exact face lattices of low-dimensional lattice polytopes.

Supports ambient dimension 1, 2 and 3 by direct supporting-hyperplane
enumeration; higher dimensions are accepted only with a user-supplied
face list.  Faces are identified with frozensets of vertex indices and
always include the polytope itself and every vertex singleton (never
the empty set).
"""

from itertools import combinations

from .lattice import (
    Rat,
    affine_rank,
    det,
    wdot,
    weight,
    wsub,
)


class PolytopeError(ValueError):
    pass


def _cross3(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


class Polytope:
    """Convex hull data for a full-dimensional polytope given by vertices.

    ``facet_data`` holds (normal, offset) pairs with <normal, x> <= offset
    on the polytope and equality exactly on the facet.
    """

    def __init__(self, vertices, faces=None):
        self.vertices = tuple(weight(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise PolytopeError("repeated vertices")
        if not self.vertices:
            raise PolytopeError("no vertices")
        self.dim = len(self.vertices[0])
        for v in self.vertices:
            if len(v) != self.dim:
                raise PolytopeError("mixed coordinate dimensions")
        if affine_rank(self.vertices) != self.dim:
            raise PolytopeError("polytope is not full-dimensional")
        if faces is not None:
            self.faces = frozenset(frozenset(f) for f in faces)
            self._facet_data = None
            self._facet_sets = None
        elif self.dim <= 3:
            self._build_faces()
        else:
            raise PolytopeError("dimension > 3 needs an explicit face list")
        full = frozenset(range(len(self.vertices)))
        if full not in self.faces:
            raise PolytopeError("face list must contain the whole polytope")

    # -- construction -------------------------------------------------

    def _build_faces(self):
        n = len(self.vertices)
        if self.dim == 1:
            if n != 2:
                raise PolytopeError("a segment has exactly two vertices")
            self.faces = frozenset(
                [frozenset([0]), frozenset([1]), frozenset([0, 1])]
            )
            lo, hi = (0, 1) if self.vertices[0][0] < self.vertices[1][0] else (1, 0)
            self._facet_data = [
                ((Rat(-1),), -self.vertices[lo][0]),
                ((Rat(1),), self.vertices[hi][0]),
            ]
            return
        facets = {}
        size = self.dim
        for idx in combinations(range(n), size):
            pts = [self.vertices[i] for i in idx]
            normal = self._normal(pts)
            if normal is None:
                continue
            c = wdot(normal, pts[0])
            vals = [wdot(normal, v) for v in self.vertices]
            if all(x <= c for x in vals):
                pass
            elif all(x >= c for x in vals):
                normal = tuple(-x for x in normal)
                c = -c
                vals = [-x for x in vals]
            else:
                continue
            on = frozenset(i for i, x in enumerate(vals) if x == c)
            facets[on] = (normal, c)
        if not facets:
            raise PolytopeError("no supporting facets found")
        for i in range(n):
            if sum(1 for f in facets if i in f) < self.dim:
                raise PolytopeError(
                    f"vertex {i} is not extreme (lies on < {self.dim} facets)"
                )
        faces = set(facets)
        frontier = set(facets)
        while frontier:
            new = set()
            for f in frontier:
                for g in facets:
                    h = f & g
                    if h and h not in faces:
                        new.add(h)
            faces |= new
            frontier = new
        faces.add(frozenset(range(n)))
        self.faces = frozenset(faces)
        self._facet_data = [facets[f] for f in sorted(facets, key=sorted)]
        self._facet_sets = sorted(facets, key=sorted)

    def _normal(self, pts):
        if self.dim == 2:
            d = wsub(pts[1], pts[0])
            if d == (Rat(0), Rat(0)):
                return None
            return (-d[1], d[0])
        a = wsub(pts[1], pts[0])
        b = wsub(pts[2], pts[0])
        nrm = _cross3(a, b)
        if all(x == 0 for x in nrm):
            return None
        return nrm

    # -- queries -------------------------------------------------------

    def face_dim(self, face) -> int:
        return affine_rank([self.vertices[i] for i in face])

    def facet_inequalities(self):
        if self._facet_data is None:
            raise PolytopeError("no inequality data (explicit face list)")
        return list(self._facet_data)

    def contains(self, p) -> bool:
        p = weight(p)
        return all(wdot(nrm, p) <= c for nrm, c in self.facet_inequalities())

    def strictly_contains(self, p) -> bool:
        p = weight(p)
        return all(wdot(nrm, p) < c for nrm, c in self.facet_inequalities())

    def inner_box_radius(self, p) -> Rat:
        """Largest r with the L-inf ball of radius r around p inside."""
        p = weight(p)
        best = None
        for nrm, c in self.facet_inequalities():
            norm1 = sum(abs(x) for x in nrm)
            r = (c - wdot(nrm, p)) / norm1
            best = r if best is None else min(best, r)
        return best

    def outer_box_radius(self, p) -> Rat:
        """Largest r with the L-inf ball of radius r around p disjoint from P.

        Returns 0 when p is inside or on the boundary.
        """
        p = weight(p)
        best = Rat(0)
        for nrm, c in self.facet_inequalities():
            norm1 = sum(abs(x) for x in nrm)
            r = (wdot(nrm, p) - c) / norm1
            best = max(best, r)
        return best

    def volume(self) -> Rat:
        """Euclidean volume, exact, by a fan over facets from vertex 0."""
        if self.dim == 1:
            return abs(self.vertices[1][0] - self.vertices[0][0])
        if self._facet_sets is None:
            raise PolytopeError("volume needs computed facets (dimension <= 3)")
        apex = self.vertices[0]
        total = Rat(0)
        factorial = 1
        for k in range(2, self.dim + 1):
            factorial *= k
        for fset in self._facet_sets:
            if 0 in fset:
                continue
            for simplex in self._triangulate_face(fset):
                pts = [self.vertices[i] for i in simplex]
                vol = abs(det([wsub(q, apex) for q in pts]))
                total += vol
        return total / factorial

    def _triangulate_face(self, fset):
        """Fan triangulation of a facet into (dim)-point simplices."""
        idx = sorted(fset)
        if self.dim == 2:
            yield idx
            return
        # dim 3: order the facet polygon cyclically, then fan from idx[0]
        cyc = self._cycle_order(idx)
        for i in range(1, len(cyc) - 1):
            yield [cyc[0], cyc[i], cyc[i + 1]]

    def _cycle_order(self, idx):
        """Cyclic vertex order of a 2-face (dim 3 only)."""
        edges = [
            f
            for f in self.faces
            if f < frozenset(idx) and len(f) == 2 and self.face_dim(f) == 1
        ]
        adj = {i: [] for i in idx}
        for e in edges:
            a, b = sorted(e)
            adj[a].append(b)
            adj[b].append(a)
        start = idx[0]
        order = [start]
        prev = None
        while len(order) < len(idx):
            nxts = [x for x in adj[order[-1]] if x != prev]
            prev = order[-1]
            order.append(nxts[0])
        return order

    def edges_at(self, i) -> list:
        """1-dimensional faces through vertex i, as sorted index pairs."""
        out = []
        for f in self.faces:
            if i in f and len(f) == 2 and self.face_dim(f) == 1:
                out.append(tuple(sorted(f)))
        return sorted(out)
