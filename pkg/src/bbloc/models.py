"""Model classes for the three supported inputs.

A model packages a finite set of torus-fixed points (with their moment
images and one-parameter pairings) together with enough geometry to
answer iterated-closure questions:

* ``SRModel`` -- unions of coordinate subspaces indexed by a simplicial
  complex; component handles are faces of the complex.
* ``ToricModel`` -- the projective toric variety of a lattice polytope;
  component handles are faces of the polytope (vertex index sets).
* ``GenericModel`` -- user-supplied fixed points and maximal chains with
  their coefficients, optionally decorated with witness data.

All three expose the same small oracle surface (top components, B-B
components inside a component, hyperplane-section components with
multiplicities, dimensions, degrees) that the coefficient layer runs
the witness recursion on.
"""

import json
import string
from fractions import Fraction

from .complexes import FixedPoint, SimplicialComplex, Witness
from .lattice import (
    Rat,
    lattice_simplex_volume,
    normalized_volume,
    primitive_direction,
    rat,
    wdot,
    weight,
    wsub,
)
from .polytope import Polytope


class ValidationError(ValueError):
    pass


class UnknownVertexError(ValueError):
    pass


class NotAMultipleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Stanley-Reisner models


class SRModel:
    """Union of coordinate subspaces of P(A^n) attached to a complex.

    Vertices are 1..n; ``phi_S`` must be strictly increasing (injectivity
    is what matters, increasing is a convenient normalization).  The
    default torus is the full scaling torus, vertex i mapping to e_i.
    """

    kind = "sr"

    def __init__(self, delta: SimplicialComplex, phi_S=None, phi_T=None, name=""):
        self.name = name
        self.delta = delta
        n = len(delta.vertices)
        if sorted(delta.vertices) != list(range(1, n + 1)):
            raise ValidationError("SR vertices must be 1..n")
        self.n = n
        if phi_S is None:
            phi_S = list(range(n))
        phi_S = [rat(x) for x in phi_S]
        if len(phi_S) != n or any(a >= b for a, b in zip(phi_S, phi_S[1:])):
            raise ValidationError("phi_S must be strictly increasing, one per vertex")
        if phi_T is None:
            phi_T = [
                tuple(Rat(1) if j == i else Rat(0) for j in range(n))
                for i in range(n)
            ]
        else:
            phi_T = [weight(w) for w in phi_T]
            if len(phi_T) != n:
                raise ValidationError("phi_T needs one weight per vertex")
        self.fixed_points = [
            FixedPoint(i + 1, phi_T[i], phi_S[i]) for i in range(n)
        ]
        self._by_id = {fp.id: fp for fp in self.fixed_points}
        self.dim_x = delta.dim()
        self.ambient_dim = len(phi_T[0]) if n else 0
        self.supports_witnesses = True
        self._cc = None

    def fixed_point(self, fid) -> FixedPoint:
        return self._by_id[fid]

    def ids(self):
        return [fp.id for fp in self.fixed_points]

    def closure_complex(self) -> SimplicialComplex:
        if self._cc is None:
            self._cc = sr_closure_complex(self)
        return self._cc

    def maximal_chains(self):
        size = self.dim_x + 1
        return sorted(
            tuple(sorted(f)) for f in self.delta.faces if len(f) == size
        )

    # -- component oracle ----------------------------------------------

    def top_components(self):
        from .complexes import facets

        return [(f, 1) for f in sorted(facets(self.delta), key=sorted)]

    def bb_components(self, handle, fid):
        if fid not in handle:
            return []
        return [frozenset(v for v in handle if v >= fid)]

    def section_components(self, handle):
        if len(handle) <= 1:
            return []
        return [(handle - {min(handle)}, 1)]

    def component_dim(self, handle) -> int:
        return len(handle) - 1

    def component_min(self, handle):
        return min(handle)

    def component_degree(self, handle) -> int:
        return 1


def sr_iterated_closure(model: SRModel, chain) -> set:
    """Faces of the complex with the chain as their initial string.

    The family {F : F = chain + larger elements}; it is nonempty exactly
    when the chain is a face.  The empty chain yields every face.
    """
    chain = tuple(chain)
    if any(a >= b for a, b in zip(chain, chain[1:])):
        raise ValidationError("chain must be strictly increasing")
    if not chain:
        return set(model.delta.faces)
    top = chain[-1]
    cset = set(chain)
    out = set()
    for face in model.delta.faces:
        if cset <= face and all(v > top for v in face - cset):
            out.add(face)
    return out


def sr_closure_complex(model: SRModel) -> SimplicialComplex:
    """Rebuild the chain complex from iterated-closure nonemptiness.

    Grows increasing vertex tuples depth-first, keeping a tuple iff its
    iterated closure is nonempty; emptiness is monotone under extension,
    so empty branches are pruned.  The result is asserted equal to the
    defining complex before being returned.
    """
    found = set()

    def grow(chain):
        for nxt in range(chain[-1] + 1 if chain else 1, model.n + 1):
            cand = chain + (nxt,)
            if sr_iterated_closure(model, cand):
                found.add(frozenset(cand))
                grow(cand)

    grow(())
    rebuilt = SimplicialComplex(model.delta.vertices, found)
    if rebuilt != model.delta:
        raise AssertionError("iterated-closure complex differs from input complex")
    return rebuilt


# ---------------------------------------------------------------------------
# Toric models


class ToricModel:
    """Projective toric variety of a full-dimensional lattice polytope.

    ``s_direction`` is an integer covector taking pairwise distinct
    values on the vertices, so every face has a well-defined bottom
    vertex.  Fixed points carry the primitive edge directions at each
    vertex as tangent data (the honest tangent weights at the simple
    vertices; degenerate-cone rejection handles the rest).
    """

    kind = "toric"

    def __init__(
        self,
        polytope_vertices,
        s_direction,
        labels=None,
        faces=None,
        tangent_cone=None,
        name="",
    ):
        self.name = name
        self.tangent_cone = tangent_cone
        verts = [weight(v) for v in polytope_vertices]
        for v in verts:
            for x in v:
                if x.denominator != 1:
                    raise ValidationError("polytope vertices must be lattice points")
        self.polytope = Polytope(verts, faces=faces)
        d = self.polytope.dim
        self.xi = weight(s_direction)
        if len(self.xi) != d:
            raise ValidationError("s_direction dimension mismatch")
        values = [wdot(self.xi, v) for v in verts]
        if len(set(values)) != len(values):
            raise ValidationError("s_direction is not generic: repeated vertex values")
        if labels is None:
            if len(verts) <= 26:
                labels = list(string.ascii_lowercase[: len(verts)])
            else:
                labels = [f"v{i}" for i in range(len(verts))]
        if len(labels) != len(verts) or len(set(labels)) != len(labels):
            raise ValidationError("labels must be distinct, one per vertex")
        self.labels = list(labels)
        self._index = {lab: i for i, lab in enumerate(labels)}
        self.fixed_points = []
        for i, lab in enumerate(labels):
            self.fixed_points.append(
                FixedPoint(lab, verts[i], values[i], self._tangent_at(i))
            )
        self.fixed_points.sort(key=lambda fp: fp.phi_S)
        self._by_id = {fp.id: fp for fp in self.fixed_points}
        self.dim_x = d
        self.ambient_dim = d
        self.supports_witnesses = True
        self._chains = None
        self._cc = None

    def _tangent_at(self, i):
        dirs = []
        for a, b in self.polytope.edges_at(i):
            other = b if a == i else a
            dirs.append(
                primitive_direction(
                    wsub(self.polytope.vertices[other], self.polytope.vertices[i])
                )
            )
        return tuple(dirs)

    def fixed_point(self, fid) -> FixedPoint:
        return self._by_id[fid]

    def ids(self):
        return [fp.id for fp in self.fixed_points]

    def vertex_index(self, fid) -> int:
        if fid not in self._index:
            raise UnknownVertexError(f"unknown vertex {fid!r}")
        return self._index[fid]

    def is_smooth(self) -> bool:
        """Every vertex simple with its primitive edge directions a basis."""
        from .lattice import det

        d = self.dim_x
        for fp in self.fixed_points:
            if len(fp.tangent_weights) != d:
                return False
            if abs(det(list(fp.tangent_weights))) != 1:
                return False
        return True

    def bottom(self, face):
        """Vertex index minimizing the s-pairing on the face."""
        return min(face, key=lambda i: wdot(self.xi, self.polytope.vertices[i]))

    def _all_chains(self):
        """Every closure chain, as a tuple of vertex indices."""
        if self._chains is not None:
            return self._chains
        all_faces = sorted(self.polytope.faces, key=sorted)
        chains = []

        def descend(chain, region):
            starts = sorted({self.bottom(F) for F in region})
            for v in starts:
                if chain and wdot(self.xi, self.polytope.vertices[v]) <= wdot(
                    self.xi, self.polytope.vertices[chain[-1]]
                ):
                    continue
                selected = [F for F in region if self.bottom(F) == v]
                if not selected:
                    continue
                sub = [G for G in all_faces if any(G <= F for F in selected)]
                chains.append(chain + (v,))
                descend(chain + (v,), sub)

        descend((), all_faces)
        self._chains = chains
        return chains

    def closure_complex(self) -> SimplicialComplex:
        if self._cc is None:
            faces = [frozenset(self.labels[i] for i in c) for c in self._all_chains()]
            self._cc = SimplicialComplex(self.labels, faces)
        return self._cc

    def maximal_chains(self):
        out = []
        for c in self._all_chains():
            if len(c) == self.dim_x + 1:
                out.append(tuple(self.labels[i] for i in c))
        return sorted(out, key=lambda ch: [self.fixed_point(f).phi_S for f in ch])

    # -- component oracle ----------------------------------------------

    def top_components(self):
        return [(frozenset(range(len(self.polytope.vertices))), 1)]

    def bb_components(self, handle, fid):
        v = self.vertex_index(fid)
        inside = [
            F
            for F in self.polytope.faces
            if F <= handle and self.bottom(F) == v
        ]
        out = [F for F in inside if not any(F < G for G in inside)]
        return sorted(out, key=sorted)

    def section_components(self, handle):
        q = self.polytope.face_dim(handle)
        mn = self.bottom(handle)
        out = []
        for F in self.polytope.faces:
            if F < handle and mn not in F and self.polytope.face_dim(F) == q - 1:
                out.append((F, self._facet_height(handle, F, mn)))
        return sorted(out, key=lambda t: sorted(t[0]))

    def _facet_height(self, handle, facet, apex_idx):
        """Lattice distance from the apex vertex to the facet's affine span,
        measured inside the face's own lattice."""
        pts = [self.polytope.vertices[i] for i in sorted(facet)]
        base = [pts[0]]
        from .lattice import affine_rank

        for p in pts[1:]:
            if affine_rank(base + [p]) > affine_rank(base):
                base.append(p)
        apex = self.polytope.vertices[apex_idx]
        vol_base = lattice_simplex_volume(base)
        vol_pyr = lattice_simplex_volume([apex] + base)
        height = Fraction(vol_pyr, vol_base)
        if height.denominator != 1 or height == 0:
            raise AssertionError("facet height must be a positive integer")
        return int(height)

    def component_dim(self, handle) -> int:
        return self.polytope.face_dim(handle)

    def component_min(self, handle):
        return self.labels[self.bottom(handle)]

    def component_degree(self, handle) -> int:
        """Normalized volume of the face against its induced lattice."""
        q = self.polytope.face_dim(handle)
        if q == 0:
            return 1
        total = 0
        for chain in self._face_pulling(handle):
            pts = [self.polytope.vertices[i] for i in chain]
            total += lattice_simplex_volume(pts)
        return total

    def _face_pulling(self, handle):
        """Maximal pulling chains of a face, as vertex index tuples."""
        q = self.polytope.face_dim(handle)
        faces = [F for F in self.polytope.faces if F <= handle]
        out = []

        def descend(chain, region):
            if len(chain) == q + 1:
                out.append(chain)
                return
            starts = sorted({self.bottom(F) for F in region})
            for v in starts:
                if chain and v == chain[-1]:
                    continue
                selected = [F for F in region if self.bottom(F) == v]
                if not selected:
                    continue
                sub = [G for G in faces if any(G <= F for F in selected)]
                descend(chain + (v,), sub)

        descend((), faces)
        return out


def toric_bb_faces(model: ToricModel, fid) -> set:
    """All faces of the polytope whose bottom vertex is the given one."""
    v = model.vertex_index(fid)
    return {F for F in model.polytope.faces if model.bottom(F) == v}


def pulling_triangulation(model: ToricModel):
    """Maximal closure chains; their simplices triangulate the polytope."""
    return model.maximal_chains()


def toric_v(model: ToricModel, chain) -> int:
    """Normalized volume of the chain's vertex simplex."""
    pts = [model.fixed_point(f).phi_T for f in chain]
    vol = normalized_volume(pts)
    if vol == 0:
        raise AssertionError("pulled chain gave a degenerate simplex")
    if vol.denominator != 1:
        raise AssertionError("lattice simplex with non-integer volume")
    return int(vol)


def chevalley_v(f0: FixedPoint, f1: FixedPoint, edge_tangent) -> int:
    """The integer m with phi_T(f1) - phi_T(f0) = m * (-edge_tangent).

    ``edge_tangent`` is the tangent weight at f1 along the invariant
    curve down to f0; smoothness of the ambient component at f1 makes
    the difference a positive multiple of its negative.
    """
    diff = wsub(f1.phi_T, f0.phi_T)
    direction = tuple(-x for x in weight(edge_tangent))
    m = None
    for a, b in zip(diff, direction):
        if b == 0:
            if a != 0:
                raise NotAMultipleError(f"{diff} is not a multiple of {direction}")
            continue
        q = a / b
        if m is None:
            m = q
        elif q != m:
            raise NotAMultipleError(f"{diff} is not a multiple of {direction}")
    if m is None or m <= 0 or m.denominator != 1:
        raise NotAMultipleError(f"{diff} is not a positive integer multiple of {direction}")
    return int(m)


# ---------------------------------------------------------------------------
# Generic models


class GenericModel:
    """Fixed points plus explicit maximal chains and coefficients.

    Witness data (component names with per-step multiplicities) and
    component degrees are optional; operations that need them raise when
    they are missing.  ``unverified`` marks example data shipped without
    computed verification.
    """

    kind = "generic"

    def __init__(
        self,
        fixed_points,
        maximal_chains,
        dim_x=None,
        component_degrees=None,
        tangent_cone=None,
        unverified=False,
        name="",
    ):
        self.name = name
        self.fixed_points = sorted(fixed_points, key=lambda fp: fp.phi_S)
        if len({fp.phi_S for fp in self.fixed_points}) != len(self.fixed_points):
            raise ValidationError("phi_S values must be pairwise distinct")
        self._by_id = {fp.id: fp for fp in self.fixed_points}
        if len(self._by_id) != len(self.fixed_points):
            raise ValidationError("fixed point ids must be distinct")
        self.declared_v = {}
        self.witness_data = {}
        chains = []
        for entry in maximal_chains:
            chain, v, wits = entry
            chain = tuple(chain)
            if any(f not in self._by_id for f in chain):
                raise ValidationError(f"chain {chain} references unknown fixed points")
            order = [self._by_id[f].phi_S for f in chain]
            if any(a >= b for a, b in zip(order, order[1:])):
                raise ValidationError(f"chain {chain} is not strictly phi_S-increasing")
            if v < 1:
                raise ValidationError(f"chain {chain} has v = {v} < 1")
            self.declared_v[chain] = int(v)
            if wits is not None:
                wlist = []
                for comps, mults in wits:
                    if len(comps) != len(chain) or len(mults) != len(chain):
                        raise ValidationError("witness length must match its chain")
                    if any(m < 1 for m in mults):
                        raise ValidationError("witness multiplicities must be >= 1")
                    wlist.append(
                        Witness(tuple(zip(chain, comps)), tuple(int(m) for m in mults))
                    )
                total = sum(w.product() for w in wlist)
                if total != v:
                    raise ValidationError(
                        f"chain {chain}: witness products sum to {total}, v = {v}"
                    )
                self.witness_data[chain] = wlist
            chains.append(chain)
        if dim_x is None:
            dim_x = max((len(c) for c in chains), default=1) - 1
        self.dim_x = dim_x
        for c in chains:
            if len(c) > dim_x + 1:
                raise ValidationError(f"chain {c} longer than 1 + dim")
        self.ambient_dim = len(self.fixed_points[0].phi_T) if self.fixed_points else 0
        self.component_degrees = dict(component_degrees or {})
        self.tangent_cone = tangent_cone
        self.unverified = bool(unverified)
        self.supports_witnesses = False
        self._cc = None

    def fixed_point(self, fid) -> FixedPoint:
        if fid not in self._by_id:
            raise UnknownVertexError(f"unknown fixed point {fid!r}")
        return self._by_id[fid]

    def ids(self):
        return [fp.id for fp in self.fixed_points]

    def closure_complex(self) -> SimplicialComplex:
        if self._cc is None:
            self._cc = SimplicialComplex.from_facets(
                [frozenset(c) for c in self.declared_v], vertices=self.ids()
            )
        return self._cc

    def maximal_chains(self):
        out = [c for c in self.declared_v if len(c) == self.dim_x + 1]
        return sorted(out, key=lambda ch: [self.fixed_point(f).phi_S for f in ch])


def load_generic(data) -> GenericModel:
    """Validate and build a GenericModel from decoded JSON data."""
    fps = []
    for entry in data["fixed_points"]:
        tw = entry.get("tangent_weights")
        fps.append(
            FixedPoint(
                entry["id"],
                weight(entry["phi_T"]),
                rat(entry["phi_S"]),
                tuple(weight(w) for w in tw) if tw is not None else None,
            )
        )
    chains = []
    for entry in data["maximal_chains"]:
        wits = None
        if entry.get("witnesses") is not None:
            wits = [
                (w["components"], w["multiplicities"]) for w in entry["witnesses"]
            ]
        chains.append((tuple(entry["points"]), int(entry["v"]), wits))
    return GenericModel(
        fps,
        chains,
        dim_x=data.get("dim_x"),
        component_degrees=data.get("component_degrees"),
        tangent_cone=data.get("tangent_cone"),
        unverified=data.get("unverified", False),
        name=data.get("name", ""),
    )


# ---------------------------------------------------------------------------
# File loading


def load_model(data):
    """Build a model from a decoded JSON dict (see the README schemas)."""
    kind = data.get("kind")
    if kind == "sr":
        n = int(data["vertices"])
        delta = SimplicialComplex.from_facets(
            [frozenset(f) for f in data["facets"]],
            vertices=range(1, n + 1),
        )
        return SRModel(
            delta,
            phi_S=data.get("phi_S"),
            phi_T=[weight(w) for w in data["phi_T"]] if data.get("phi_T") else None,
            name=data.get("name", ""),
        )
    if kind == "toric":
        faces = data.get("faces")
        return ToricModel(
            data["polytope_vertices"],
            data["s_direction"],
            labels=data.get("labels"),
            faces=[frozenset(f) for f in faces] if faces else None,
            tangent_cone=data.get("tangent_cone"),
            name=data.get("name", ""),
        )
    if kind == "generic":
        return load_generic(data)
    raise ValidationError(f"unknown model kind {kind!r}")


def load_model_file(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}")
    try:
        return load_model(data)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{path}: malformed model file ({exc})")
