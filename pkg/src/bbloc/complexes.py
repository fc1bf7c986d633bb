"""Simplicial complexes on labeled vertex sets, chains and witnesses.

Vertices are opaque ids carrying a one-parameter weight ``phi_S`` that
orders them; a closure chain is a strictly increasing id sequence.  The
complex itself is plain combinatorics: a downward-closed family of
nonempty faces.
"""

from dataclasses import dataclass

from .lattice import Rat, Weight


class NotAPosetError(ValueError):
    """Relation input contains a cycle."""


@dataclass(frozen=True)
class FixedPoint:
    """A torus-fixed point: id, moment image, 1-psg pairing, tangent data.

    ``tangent_weights``, when present, lists the nonzero weights of the
    torus on the tangent space at the point (used by the alternating
    formula and fixed-point sums).
    """

    id: object
    phi_T: Weight
    phi_S: Rat
    tangent_weights: tuple | None = None

    def __post_init__(self):
        if self.tangent_weights is not None:
            for w in self.tangent_weights:
                if all(x == 0 for x in w):
                    raise ValueError(f"fixed point {self.id}: zero tangent weight")


@dataclass(frozen=True)
class Witness:
    """A chain decorated by nested irreducible components.

    ``steps`` pairs each chain point with the component handle it is the
    minimum of.  ``multiplicities`` is present only for dimension-graded
    witnesses (component dimension dropping by one each step).
    """

    steps: tuple  # tuple of (id, handle)
    multiplicities: tuple | None = None

    @property
    def chain(self):
        return tuple(f for f, _ in self.steps)

    def product(self) -> int:
        if self.multiplicities is None:
            raise ValueError("witness carries no multiplicities")
        out = 1
        for m in self.multiplicities:
            out *= m
        return out


def check_complex(faces):
    """Return None if the family is downward closed, else a missing subset.

    The empty face is treated as implicitly present.
    """
    family = {frozenset(f) for f in faces if f}
    for face in sorted(family, key=lambda f: (len(f), sorted(map(str, f)))):
        for v in sorted(face, key=str):
            sub = face - {v}
            if sub and sub not in family:
                return sub
    return None


class SimplicialComplex:
    def __init__(self, vertices, faces):
        self.vertices = tuple(vertices)
        vs = set(self.vertices)
        fam = set()
        for f in faces:
            f = frozenset(f)
            if not f:
                continue
            if not f <= vs:
                raise ValueError(f"face {sorted(map(str, f))} uses unknown vertices")
            fam.add(f)
        bad = check_complex(fam)
        if bad is not None:
            raise ValueError(f"not downward closed: missing {sorted(map(str, bad))}")
        self.faces = frozenset(fam)

    @classmethod
    def from_facets(cls, facets, vertices=None):
        fam = set()
        for f in facets:
            f = frozenset(f)
            stack = [f]
            while stack:
                g = stack.pop()
                if not g or g in fam:
                    continue
                fam.add(g)
                for v in g:
                    stack.append(g - {v})
        if vertices is None:
            vertices = sorted({v for f in fam for v in f}, key=str)
        return cls(vertices, fam)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and self.faces == other.faces

    def __hash__(self):
        return hash((frozenset(self.vertices), self.faces))

    def __repr__(self):
        return f"SimplicialComplex({len(self.vertices)} vertices, {len(self.faces)} faces)"

    def dim(self) -> int:
        if not self.faces:
            return -1
        return max(len(f) for f in self.faces) - 1

    def has_face(self, face) -> bool:
        face = frozenset(face)
        if not face:
            return True
        return face in self.faces


def facets(complex: SimplicialComplex) -> set:
    """Faces not properly contained in another face."""
    out = set()
    for f in complex.faces:
        if not any(f < g for g in complex.faces):
            out.add(f)
    return out


def is_pure(complex: SimplicialComplex, expected_dim: int) -> bool:
    """True iff every facet has expected_dim + 1 vertices."""
    fs = facets(complex)
    if not fs:
        return expected_dim == -1
    return all(len(f) == expected_dim + 1 for f in fs)


def cone_points(complex: SimplicialComplex) -> set:
    """Vertices v with F + {v} a face for every face F not containing v."""
    out = set()
    for v in complex.vertices:
        if frozenset([v]) not in complex.faces:
            continue
        if all(f | {v} in complex.faces for f in complex.faces if v not in f):
            out.add(v)
    return out


def order_complex(relations, elements=None) -> SimplicialComplex:
    """Complex whose faces are the chains of the poset generated by relations.

    ``relations`` is an iterable of pairs (a, b) meaning a < b.  A cycle in
    the transitive closure raises NotAPosetError.
    """
    rel = {tuple(r) for r in relations}
    elems = set(elements) if elements is not None else set()
    for a, b in rel:
        elems.add(a)
        elems.add(b)
    less = {e: set() for e in elems}
    for a, b in rel:
        less[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in elems:
            grow = set()
            for b in less[a]:
                grow |= less[b]
            if not grow <= less[a]:
                less[a] |= grow
                changed = True
    for a in elems:
        if a in less[a]:
            raise NotAPosetError(f"cycle through {a!r}")

    def comparable(a, b):
        return b in less[a] or a in less[b]

    ordered = sorted(elems, key=str)
    chains = []

    def extend(chain, start):
        for i in range(start, len(ordered)):
            e = ordered[i]
            if all(comparable(e, c) for c in chain):
                chains.append(chain + [e])
                extend(chain + [e], i + 1)

    extend([], 0)
    return SimplicialComplex(ordered, [frozenset(c) for c in chains])
