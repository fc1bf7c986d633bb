import pytest

from bbloc.complexes import SimplicialComplex
from bbloc.models import SRModel, ValidationError, sr_closure_complex, sr_iterated_closure

from conftest import load_fixture


def hollow():
    return load_fixture("hollow-triangle")


class TestIteratedClosure:
    def test_hollow_triangle_edge(self):
        assert sr_iterated_closure(hollow(), (1, 2)) == {frozenset({1, 2})}

    def test_hollow_triangle_full_chain_empty(self):
        assert sr_iterated_closure(hollow(), (1, 2, 3)) == set()

    def test_empty_chain_gives_everything(self):
        m = hollow()
        assert sr_iterated_closure(m, ()) == set(m.delta.faces)

    def test_skipped_vertex_still_supported(self):
        m = SRModel(SimplicialComplex.from_facets([{1, 2, 3}]))
        assert sr_iterated_closure(m, (1, 3)) == {frozenset({1, 3})}
        assert sr_iterated_closure(m, (2,)) == {frozenset({2}), frozenset({2, 3})}


class TestClosureComplex:
    def test_hollow_triangle(self):
        m = hollow()
        assert sr_closure_complex(m) == m.delta

    def test_solid_simplex(self):
        m = SRModel(SimplicialComplex.from_facets([{1, 2, 3, 4}]))
        assert sr_closure_complex(m) == m.delta

    def test_random_ten_vertex_complex(self, rng):
        facets = [frozenset(rng.sample(range(1, 11), rng.randint(1, 4))) for _ in range(6)]
        delta = SimplicialComplex.from_facets(facets, vertices=range(1, 11))
        m = SRModel(delta)
        assert sr_closure_complex(m) == delta


class TestValidation:
    def test_phi_s_must_increase(self):
        delta = SimplicialComplex.from_facets([{1, 2}])
        with pytest.raises(ValidationError):
            SRModel(delta, phi_S=[1, 1])

    def test_vertices_must_be_one_to_n(self):
        delta = SimplicialComplex.from_facets([{2, 5}])
        with pytest.raises(ValidationError):
            SRModel(delta)

    def test_custom_weights(self):
        delta = SimplicialComplex.from_facets([{1, 2}])
        m = SRModel(delta, phi_T=[(0,), (2,)])
        assert m.ambient_dim == 1
        assert m.fixed_point(2).phi_T == (2,)
