"""Predimension, sparsity classes, and 2-orientations."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramseykit import InvalidInput, Structure
from ramseykit.amalgamation import AmalgamationProblem, free_amalgam
from ramseykit.catalog import make_clique, make_graph, make_path
from ramseykit.orientations import (
    C0,
    CF,
    LEQ_D,
    LEQ_S,
    BoundExceeded,
    OrientedGraph,
    class_membership,
    enumerate_2orientations,
    find_2orientation,
    predimension,
    substructure_order,
)
from ramseykit.structures import EMBEDDING, EmbeddingMap, induced_substructure


def bowtie():
    return make_graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])


def test_predimension_values():
    assert predimension(bowtie()) == 4
    assert predimension(make_clique(5)) == 0
    assert predimension(make_clique(6)) == -3
    assert predimension(make_graph(1, [])) == 2


def test_predimension_rejects_loops():
    lang = make_graph(1, []).language
    with pytest.raises(InvalidInput):
        predimension(Structure(lang, 2, {"E": {(0, 0)}}))


def test_class_membership_c0():
    assert class_membership(bowtie(), C0) == (True, None)
    assert class_membership(make_clique(5), C0) == (True, None)
    member, witness = class_membership(make_clique(6), C0)
    assert member is False and witness == frozenset(range(6))


def test_class_membership_cf():
    assert class_membership(make_graph(1, []), CF) == (True, None)
    member, witness = class_membership(make_clique(5), CF)
    assert member is False and witness == frozenset(range(5))
    # Base 2 keeps K4 inside: delta = 2 >= log2(4).
    assert class_membership(make_clique(4), CF, log_base=2) == (True, None)


def test_class_membership_bound():
    with pytest.raises(BoundExceeded):
        class_membership(make_graph(13, []), C0)


def test_oriented_graph_validation():
    path = make_path(3)
    good = OrientedGraph(path, frozenset({(0, 1), (1, 2)}))
    assert good.is_2orientation()
    with pytest.raises(InvalidInput):
        OrientedGraph(path, frozenset({(0, 1)}))
    with pytest.raises(InvalidInput):
        OrientedGraph(path, frozenset({(0, 1), (1, 0), (1, 2)}))


def test_roots_and_multiplicities():
    o = OrientedGraph(make_path(3), frozenset({(0, 1), (1, 2)}))
    assert o.roots() == {0: 1, 1: 1, 2: 2}
    assert sum(o.roots().values()) == predimension(make_path(3))
    assert o.roots_of(0) == frozenset({0, 1, 2})
    assert o.roots_of(2) == frozenset({2})
    assert o.is_successor_closed({2})
    assert not o.is_successor_closed({1})
    assert o.is_successor_closed({1, 2})


def test_find_2orientation_k5_tight():
    got = find_2orientation(make_clique(5))
    assert got is not None
    assert all(got.outdegree(v) == 2 for v in range(5))
    assert got.roots() == {}
    assert sum(got.roots().values()) == predimension(make_clique(5))


def test_find_2orientation_k6_infeasible():
    assert find_2orientation(make_clique(6)) is None


def test_find_2orientation_with_closed_set():
    got = find_2orientation(make_path(3), closed={1})
    assert got is not None
    assert got.orientation == frozenset({(0, 1), (2, 1)})
    assert got.is_successor_closed({1})


def test_find_2orientation_d_closed():
    got = find_2orientation(make_path(3), closed={2}, d_closed=True)
    assert got is not None
    assert got.orientation == frozenset({(0, 1), (1, 2)})
    assert got.is_successor_d_closed({2})


def test_enumerate_2orientations_path():
    all_of_them = list(enumerate_2orientations(make_path(3)))
    assert len(all_of_them) == 4  # every edge free, no outdegree pressure
    constrained = list(enumerate_2orientations(make_path(3), closed={1}))
    assert len(constrained) == 1


def test_c0_equals_2orientable_on_atlas():
    # Every graph on up to 6 vertices, straight from the atlas.
    from networkx.generators.atlas import graph_atlas_g

    checked = 0
    for nxg in graph_atlas_g():
        n = nxg.number_of_nodes()
        if n > 6:
            break
        g = make_graph(n, list(nxg.edges()))
        member, _ = class_membership(g, C0)
        oriented = find_2orientation(g)
        assert member == (oriented is not None)
        if oriented is not None:
            assert sum(oriented.roots().values()) == predimension(g)
        checked += 1
    assert checked == 209


def test_substructure_order_examples():
    path = make_path(3)
    assert substructure_order(path, range(3), LEQ_S)
    assert substructure_order(path, range(3), LEQ_D)
    edge = make_graph(2, [(0, 1)])
    assert substructure_order(edge, [0], LEQ_D)
    assert not substructure_order(make_clique(5), [0, 1], LEQ_S)
    with pytest.raises(BoundExceeded):
        substructure_order(make_graph(13, []), [0], LEQ_S)


def test_leq_d_implies_leq_s():
    g = bowtie()
    for k in range(g.size + 1):
        from itertools import combinations

        for subset in combinations(range(g.size), k):
            if substructure_order(g, subset, LEQ_D):
                assert substructure_order(g, subset, LEQ_S)


def glued_over(a_vertices, b):
    base, _ = induced_substructure(b, a_vertices)
    inc = EmbeddingMap(base, b, tuple(sorted(a_vertices)), EMBEDDING)
    return free_amalgam(AmalgamationProblem(base, b, b, inc, inc))


def test_free_amalgam_over_leq_s_base_stays_in_c0():
    # Glue two copies of b over a <=_s base and rebuild the 2-orientation
    # the way the corollary's proof does: agreeing orientations on the base.
    cases = [(make_path(3), (0,)), (make_path(3), (0, 2)), (bowtie(), (2,))]
    for b, a_vertices in cases:
        assert class_membership(b, C0)[0]
        assert substructure_order(b, a_vertices, LEQ_S)
        c, beta1, beta2 = glued_over(a_vertices, b)
        member, _ = class_membership(c, C0)
        assert member

        base, _ = induced_substructure(b, a_vertices)
        ordered_base = tuple(sorted(a_vertices))
        for base_orientation in enumerate_2orientations(base):
            base_arcs = frozenset(
                (ordered_base[u], ordered_base[v])
                for u, v in base_orientation.orientation
            )
            sides = []
            for _ in range(2):
                found = None
                for cand in enumerate_2orientations(b, closed=set(a_vertices)):
                    restricted = frozenset(
                        (u, v)
                        for u, v in cand.orientation
                        if u in set(a_vertices) and v in set(a_vertices)
                    )
                    if restricted == base_arcs:
                        found = cand
                        break
                sides.append(found)
            if sides[0] is None or sides[1] is None:
                continue
            arcs = {
                (beta1(u), beta1(v)) for u, v in sides[0].orientation
            } | {
                (beta2(u), beta2(v)) for u, v in sides[1].orientation
            }
            glued = OrientedGraph(c, frozenset(arcs))
            assert glued.is_2orientation()
            break
        else:
            pytest.fail("no agreeing pair of orientations found")


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_random_graphs_membership_vs_orientation(data):
    n = data.draw(st.integers(min_value=1, max_value=6))
    edges = data.draw(
        st.sets(
            st.tuples(
                st.integers(min_value=0, max_value=n - 1),
                st.integers(min_value=0, max_value=n - 1),
            ).filter(lambda p: p[0] != p[1]),
            max_size=12,
        )
    )
    g = make_graph(n, edges)
    member, witness = class_membership(g, C0)
    oriented = find_2orientation(g)
    assert member == (oriented is not None)
    if witness is not None:
        inside = set(witness)
        m = sum(
            1
            for u, v in g.rels["E"]
            if u < v and u in inside and v in inside
        )
        assert 2 * len(inside) - m < 0
