import pytest

from bbloc.complexes import (
    FixedPoint,
    NotAPosetError,
    SimplicialComplex,
    check_complex,
    cone_points,
    facets,
    is_pure,
    order_complex,
)

HOLLOW = SimplicialComplex.from_facets([{"a", "b"}, {"a", "c"}, {"b", "c"}])
SOLID = SimplicialComplex.from_facets([{"a", "b", "c"}])


class TestCheckComplex:
    def test_valid_with_empty_face(self):
        assert check_complex([set(), {"a"}, {"b"}, {"a", "b"}]) is None

    def test_missing_subset(self):
        assert check_complex([{"a", "b"}]) == frozenset({"a"}) or check_complex(
            [{"a", "b"}]
        ) == frozenset({"b"})

    def test_hollow_triangle(self):
        assert check_complex(HOLLOW.faces) is None

    def test_constructor_rejects_violation(self):
        with pytest.raises(ValueError):
            SimplicialComplex(["a", "b"], [{"a", "b"}])


class TestFacets:
    def test_solid_triangle(self):
        assert facets(SOLID) == {frozenset({"a", "b", "c"})}

    def test_hollow_triangle(self):
        assert facets(HOLLOW) == {
            frozenset({"a", "b"}),
            frozenset({"a", "c"}),
            frozenset({"b", "c"}),
        }

    def test_cone_over_hollow_triangle(self):
        cone = SimplicialComplex.from_facets(
            [{"a", "b", "x"}, {"a", "c", "x"}, {"b", "c", "x"}]
        )
        assert len(facets(cone)) == 3
        assert all(len(f) == 3 for f in facets(cone))


class TestPurity:
    def test_hollow_triangle_pure_dim_one(self):
        assert is_pure(HOLLOW, 1)
        assert not is_pure(HOLLOW, 2)

    def test_segment_with_isolated_vertex(self):
        c = SimplicialComplex.from_facets([{"a", "b"}, {"z"}])
        assert not is_pure(c, 1)


class TestConePoints:
    def test_apex(self):
        cone = SimplicialComplex.from_facets(
            [{"a", "b", "x"}, {"a", "c", "x"}, {"b", "c", "x"}]
        )
        assert cone_points(cone) == {"x"}

    def test_hollow_triangle_has_none(self):
        assert cone_points(HOLLOW) == set()


class TestOrderComplex:
    def test_antichain(self):
        c = order_complex([], elements=["a", "b"])
        assert c.faces == frozenset({frozenset({"a"}), frozenset({"b"})})

    def test_total_order(self):
        c = order_complex([("a", "b"), ("b", "c")])
        assert c == SimplicialComplex.from_facets([{"a", "b", "c"}])

    def test_cycle_detected(self):
        with pytest.raises(NotAPosetError):
            order_complex([("a", "b"), ("b", "a")])

    def test_bruhat_order_s3(self):
        # covering relations of the symmetric group on three letters
        covers = [
            ("e", "s1"),
            ("e", "s2"),
            ("s1", "s1s2"),
            ("s1", "s2s1"),
            ("s2", "s1s2"),
            ("s2", "s2s1"),
            ("s1s2", "w0"),
            ("s2s1", "w0"),
        ]
        c = order_complex(covers)
        assert len(c.vertices) == 6
        top = facets(c)
        assert len(top) == 4
        assert all(len(f) == 4 for f in top)


def test_fixed_point_rejects_zero_tangent():
    with pytest.raises(ValueError):
        FixedPoint("f", (0,), 0, tangent_weights=((0,),))
