import pathlib
import random
from fractions import Fraction

import pytest

from bbloc.models import load_model_file

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

TORIC_NAMES = ["p1", "p2", "square", "p1xp1", "f1-trapezoid", "octahedron-tilted"]
SMOOTH_TORIC_NAMES = ["p1", "p2", "square", "p1xp1", "f1-trapezoid"]


def fixture_path(name):
    return FIXTURES / f"{name}.json"


def load_fixture(name):
    return load_model_file(fixture_path(name))


@pytest.fixture
def rng():
    return random.Random(20080131)


def random_interior_points(model, rng, count, predicate=None):
    """Generic rational points strictly inside the model's polytope."""
    from bbloc.measures import NonGenericPointError, assert_generic

    P = model.polytope
    verts = P.vertices
    pts = []
    images = {fp.phi_T for fp in model.fixed_points}
    while len(pts) < count:
        coeffs = [Fraction(rng.randint(1, 60), rng.randint(61, 120)) for _ in verts]
        total = sum(coeffs)
        p = tuple(
            sum((c * v[i] for c, v in zip(coeffs, verts)), Fraction(0))
            for i in range(P.dim)
        )
        if not P.strictly_contains(p):
            continue
        try:
            assert_generic(p, images, P.dim)
        except NonGenericPointError:
            continue
        if predicate is not None and not predicate(p):
            continue
        pts.append(p)
    return pts


def random_outside_points(model, rng, count):
    from bbloc.measures import NonGenericPointError, assert_generic

    P = model.polytope
    span = int(max(abs(x) for v in P.vertices for x in v)) + 1
    images = {fp.phi_T for fp in model.fixed_points}
    pts = []
    while len(pts) < count:
        p = tuple(
            Fraction(rng.randint(-6 * span, 6 * span), rng.randint(2, 7))
            for _ in range(P.dim)
        )
        if P.contains(p):
            continue
        try:
            assert_generic(p, images, P.dim)
        except NonGenericPointError:
            continue
        pts.append(p)
    return pts
