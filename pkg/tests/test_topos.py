import itertools
import random

import pytest
from hypothesis import given, settings

from rgraph_topos import corpus
from rgraph_topos.core import (
    ShapeError,
    ValidationError,
    complete,
    compose,
    count_hom,
    discrete,
    edge_graph,
    empty_graph,
    hom,
    identity,
    is_isomorphic,
    k2_graph,
    morphism_problems,
    omega_graph,
    terminal_graph,
)
from rgraph_topos.lemmas import is_complete
from rgraph_topos.topos import (
    bang,
    characteristic,
    count_subobjects,
    edge_points,
    exponential,
    global_elements,
    is_mono,
    make_subgraph,
    pair,
    product,
    product_map,
    pullback_along_true,
    subobject_from_characteristic,
    subobjects,
    transpose,
    untranspose,
    verify_classifier,
    verify_exponential_ump,
    verify_product_ump,
)

from oracles import naive_subobject_count
from strategies import rgraphs


class TestBang:
    def test_bang_of_terminal_is_identity(self):
        assert bang(terminal_graph()) == identity(terminal_graph())

    def test_bang_of_k2(self):
        b = bang(k2_graph())
        assert set(b.vertex_map.values()) == {"!1"}
        assert set(b.edge_map.values()) == {"loop@!1"}
        assert not morphism_problems(b)

    def test_unique_map_to_terminal(self, small_corpus):
        for g in small_corpus:
            hs = hom(g, terminal_graph())
            assert len(hs) == 1 and hs[0] == bang(g)


class TestProducts:
    def test_k2_squared_counts(self):
        # componentwise: 2*2 vertices, 4*4 edges
        p = product(k2_graph(), k2_graph()).object
        assert (p.n_vertices, p.n_edges) == (4, 16)

    def test_unit_law(self):
        assert is_isomorphic(product(terminal_graph(), edge_graph()).object, edge_graph())[0]

    def test_pair_ids_and_loops(self):
        p = product(edge_graph(), k2_graph()).object
        assert "(s,1)" in p.vindex
        assert p.loop_of["(t,2)"] == "(loop@t,loop@2)"
        e = p.edge("(1_E,1>2)")
        assert (e.src, e.tgt) == ("(s,1)", "(t,2)")

    def test_pair_requires_equal_domains(self):
        with pytest.raises(ShapeError):
            pair(identity(edge_graph()), identity(k2_graph()))

    def test_ump_small(self):
        graphs = [terminal_graph(), edge_graph(), k2_graph(), discrete(2)]
        report = verify_product_ump(graphs)
        assert report.passed and report.checked == len(graphs) ** 3

    def test_ump_unit_pair(self):
        assert verify_product_ump([terminal_graph(), edge_graph()]).passed

    def test_projections_recover_factors(self):
        bundle = product(edge_graph(), k2_graph())
        for f in hom(k2_graph(), edge_graph()):
            for g in hom(k2_graph(), k2_graph()):
                h = pair(f, g, bundle)
                assert compose(bundle.proj_left, h) == f
                assert compose(bundle.proj_right, h) == g


class TestExponentials:
    def test_power_one_is_base(self):
        assert is_isomorphic(exponential(k2_graph(), terminal_graph()).object, k2_graph())[0]

    def test_k2_to_k2(self):
        obj = exponential(k2_graph(), k2_graph()).object
        assert (obj.n_vertices, obj.n_edges) == (4, 16)

    def test_k2_to_e(self):
        assert exponential(k2_graph(), edge_graph()).object.n_vertices == 4

    def test_empty_power_gives_terminal(self):
        assert is_isomorphic(exponential(omega_graph(), empty_graph()).object, terminal_graph())[0]

    @pytest.mark.parametrize(
        "base, power",
        [
            (k2_graph(), edge_graph()),
            (omega_graph(), edge_graph()),
            (omega_graph(), k2_graph()),
            (corpus.parallel_pair(), edge_graph()),
            (edge_graph(), corpus.extra_loop()),
        ],
    )
    def test_sizes_match_presheaf_formula(self, base, power):
        # vertices of B^A are maps 1 x A -> B, edges are maps E x A -> B
        obj = exponential(base, power).object
        assert obj.n_vertices == count_hom(product(terminal_graph(), power).object, base)
        assert obj.n_edges == count_hom(product(edge_graph(), power).object, base)

    def test_distinguished_loop_is_own_edge_map(self):
        bundle = exponential(omega_graph(), edge_graph())
        for i, phi in enumerate(bundle.vertex_index):
            k = bundle.object.loops[i]
            assert bundle.edge_data[k] == (i, i, phi.emap)

    def test_global_elements_are_hom(self):
        bundle = exponential(omega_graph(), k2_graph())
        points = global_elements(bundle.object)
        assert len(points) == len(hom(k2_graph(), omega_graph()))
        assert [bundle.morphism_at(p.vmap[0]) for _, p in points] == list(bundle.vertex_index)

    def test_eval_is_a_morphism(self):
        for base, power in [(k2_graph(), edge_graph()), (omega_graph(), k2_graph())]:
            assert not morphism_problems(exponential(base, power).eval)

    def test_transpose_of_eval_is_identity(self):
        bundle = exponential(k2_graph(), terminal_graph())
        assert transpose(bundle.eval, bundle, bundle.object) == identity(bundle.object)

    def test_transpose_rejects_wrong_domain(self):
        bundle = exponential(k2_graph(), edge_graph())
        with pytest.raises(ShapeError):
            transpose(identity(k2_graph()), bundle, k2_graph())

    def test_round_trip_sampled(self):
        x, a, b = edge_graph(), edge_graph(), omega_graph()
        bundle = exponential(b, a)
        fs = list(hom(product(x, a).object, b))
        for f in random.Random(0).sample(fs, 10):
            h = transpose(f, bundle, x)
            assert untranspose(h, bundle) == f
            triangle = compose(bundle.eval, product_map(h, identity(a), product(x, a), bundle.product))
            assert triangle == f

    def test_currying_counts(self):
        graphs = [terminal_graph(), edge_graph(), k2_graph(), discrete(2)]
        for x, a, b in itertools.product(graphs, repeat=3):
            bundle = exponential(b, a)
            assert count_hom(product(x, a).object, b) == count_hom(x, bundle.object)

    def test_ump_e_e_k2(self):
        report = verify_exponential_ump([(edge_graph(), edge_graph(), k2_graph())])
        assert report.passed and report.details["round_trips"] == 1

    @pytest.mark.parametrize("a", corpus.topos_corpus(3))
    def test_completeness_transport(self, a):
        assert is_complete(exponential(k2_graph(), a).object)


class TestPoints:
    def test_global_elements(self):
        assert len(global_elements(k2_graph())) == 2
        assert [v for v, _ in global_elements(omega_graph())] == ["true", "false"]

    def test_edge_points_of_omega(self):
        pts = edge_points(omega_graph())
        assert len(pts) == 5
        assert [e for e, _ in pts] == [e.id for e in omega_graph().edges]


class TestSubobjects:
    def test_identity_is_mono_bang_is_not(self):
        assert is_mono(identity(k2_graph()))
        assert not is_mono(bang(k2_graph()))

    def test_subobjects_of_e(self):
        subs = subobjects(edge_graph())
        assert naive_subobject_count(edge_graph()) == 5
        assert [s.describe() for s in subs] == ["", "s", "t", "s,t", "s,t;1_E"]

    @settings(max_examples=60, deadline=None)
    @given(rgraphs(max_vertices=3, max_edges=3))
    def test_count_matches_naive(self, g):
        assert len(subobjects(g)) == count_subobjects(g) == naive_subobject_count(g)

    def test_make_subgraph_validation(self):
        with pytest.raises(ValidationError, match="without both endpoints"):
            make_subgraph(edge_graph(), ["s"], ["1_E"])


class TestClassifier:
    def test_full_subobject(self):
        g = k2_graph()
        chi = characteristic(make_subgraph(g, g.vertices, [e.id for e in g.edges]))
        assert set(chi.vertex_map.values()) == {"true"}
        assert set(chi.edge_map.values()) == {"loop@true"}

    def test_empty_subobject_is_false_constant(self):
        g = edge_graph()
        chi = characteristic(make_subgraph(g, []))
        assert set(chi.vertex_map.values()) == {"false"}
        assert set(chi.edge_map.values()) == {"loop@false"}

    def test_vertices_without_arrow(self):
        chi = characteristic(make_subgraph(edge_graph(), ["s", "t"]))
        assert chi.edge("1_E") == "extra@true"
        assert subobject_from_characteristic(chi) == make_subgraph(edge_graph(), ["s", "t"])

    def test_crossing_edges(self):
        g = k2_graph()
        chi = characteristic(make_subgraph(g, ["1"]))
        assert chi.edge("1>2") == "true>false"
        assert chi.edge("2>1") == "false>true"

    @pytest.mark.parametrize("g, n", [(edge_graph(), 5), (terminal_graph(), 2)])
    def test_round_trip_over_all_characteristic_maps(self, g, n):
        chis = hom(g, omega_graph())
        assert len(chis) == n == len(subobjects(g))
        assert {characteristic(subobject_from_characteristic(c)) for c in chis} == set(chis)

    def test_pullback_object(self):
        s = make_subgraph(edge_graph(), ["s", "t"], ["1_E"])
        pb = pullback_along_true(characteristic(s))
        assert (pb.n_vertices, pb.n_edges) == (2, 3)

    def test_corpus_sweep(self):
        graphs = [empty_graph(), terminal_graph(), edge_graph(), k2_graph(), discrete(2)]
        report = verify_classifier(graphs)
        assert report.passed and report.checked == 5

    def test_classifier_with_extra_loops(self):
        assert verify_classifier([omega_graph(), corpus.extra_loop(), complete(3)]).passed
