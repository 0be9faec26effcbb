"""Arrow checking, Ramsey degrees, tangent numbers, trees of types."""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramseykit import (
    InvalidInput,
    Language,
    SearchCapExceeded,
    Structure,
    enumerate_embeddings,
)
from ramseykit.arrows import (
    ColoringWitness,
    abc_hypergraph,
    check_arrow,
    devlin_degree,
    ramsey_degree_in,
    tangent_numbers,
    tree_of_types,
)
from ramseykit.catalog import (
    make_chain,
    make_clique,
    make_graph,
    make_path,
    ordered_edge,
    ordered_vertex,
)


def ordered_clique(n):
    return make_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)], ordered=True)


# Hypergraph construction ------------------------------------------------------


def test_abc_hypergraph_triangle():
    h = abc_hypergraph(ordered_vertex(), ordered_edge(), ordered_clique(3))
    assert len(h.vertices) == 3
    assert len(h.hyperedges) == 3
    assert all(len(e) == 2 for e in h.hyperedges)
    assert sorted(map(sorted, h.hyperedges)) == [[0, 1], [0, 2], [1, 2]]
    assert h.multiplicities == (1, 1, 1)


def test_abc_hypergraph_no_b_copies():
    h = abc_hypergraph(ordered_vertex(), ordered_clique(3), ordered_edge())
    assert h.hyperedges == ()


def test_abc_hypergraph_a_equals_b_singletons():
    chain = make_chain(3)
    h = abc_hypergraph(chain, chain, make_chain(4))
    assert all(len(e) == 1 for e in h.hyperedges)


def test_abc_hypergraph_multiplicity_counts_embeddings():
    # Unordered edge into unordered triangle: each 2-subset is hit by two
    # embeddings of the edge (one per orientation of the a-copy inside).
    edge = make_graph(2, [(0, 1)])
    h = abc_hypergraph(edge, edge, make_clique(3))
    assert len(h.vertices) == 6
    assert len(h.hyperedges) == 3
    assert h.multiplicities == (2, 2, 2)


# Plain arrow ------------------------------------------------------------------


def test_arrow_chains_pigeonhole():
    assert check_arrow(make_chain(1), make_chain(3), make_chain(5), 2) is None
    got = check_arrow(make_chain(1), make_chain(3), make_chain(4), 2)
    assert got is not None
    assert got.assignment == (0, 0, 1, 1)
    assert got.replay(abc_hypergraph(make_chain(1), make_chain(3), make_chain(4)))


def test_arrow_ordered_cliques_r33():
    assert check_arrow(ordered_edge(), ordered_clique(3), ordered_clique(6), 2) is None
    got = check_arrow(ordered_edge(), ordered_clique(3), ordered_clique(5), 2)
    assert got is not None
    h = abc_hypergraph(ordered_edge(), ordered_clique(3), ordered_clique(5))
    assert got.replay(h)
    # Independent oracle: the lexicographically least bad coloring over all
    # 2^10 assignments, first color pinned to 0.
    edges = h.hyperedges
    expected = None
    for bits in product((0, 1), repeat=9):
        cand = (0,) + bits
        if all(len({cand[i] for i in e}) == 2 for e in edges):
            expected = cand
            break
    assert got.assignment == expected
    # Both color classes are triangle-free pentagon graphs on the K5 pairs.
    for color in (0, 1):
        chosen = [i for i, c in enumerate(got.assignment) if c == color]
        assert len(chosen) == 5


def test_arrow_nonrigid_a_fails():
    # a has an automorphism, so two embeddings share every image; coloring
    # them apart defeats any c.
    edge = make_graph(2, [(0, 1)])
    path = make_path(3)
    got = check_arrow(edge, path, path, 2)
    assert got is not None

    # Construct the observation's coloring: least embedding per image gets 0,
    # the others 1.
    h = abc_hypergraph(edge, path, path)
    assignment = []
    least = {}
    for emb in h.vertices:
        key = frozenset(emb.map)
        if key not in least:
            least[key] = emb.map
    for emb in h.vertices:
        assignment.append(0 if least[frozenset(emb.map)] == emb.map else 1)
    witness = ColoringWitness(2, tuple(assignment))
    assert witness.replay(h)


def test_arrow_r1_fails_only_without_b_copies():
    assert check_arrow(make_chain(1), make_chain(3), make_chain(3), 1) is None
    got = check_arrow(make_chain(1), make_chain(4), make_chain(3), 1)
    assert got is not None and got.assignment == (0, 0, 0)


def test_arrow_monotone_in_colors():
    instances = [
        (make_chain(1), make_chain(3), make_chain(5)),
        (ordered_edge(), ordered_clique(3), ordered_clique(6)),
        (make_chain(1), make_chain(2), make_chain(3)),
    ]
    for a, b, c in instances:
        for r in (3, 2):
            if check_arrow(a, b, c, r) is None:
                assert check_arrow(a, b, c, r - 1) is None


def test_arrow_invariant_under_renaming():
    a, b, c = make_chain(1), make_chain(3), make_chain(4)

    def permute(s, perm):
        rels = {
            name: {tuple(perm[x] for x in t) for t in s.rels[name]}
            for name in s.language.relation_names
        }
        return Structure(s.language, s.size, rels)

    got = check_arrow(a, b, c, 2)
    moved = check_arrow(permute(a, [0]), permute(b, [2, 0, 1]), permute(c, [3, 1, 0, 2]), 2)
    assert (got is None) == (moved is None)


def test_arrow_search_cap():
    with pytest.raises(SearchCapExceeded):
        check_arrow(make_chain(1), make_chain(3), make_chain(6), 2, node_cap=3)


# Ramsey degrees ---------------------------------------------------------------


def test_degree_one_iff_arrow_holds():
    report = ramsey_degree_in(make_chain(1), make_chain(3), make_chain(5), 2)
    assert report.t == 1
    # The failing coloring one level down is the trivial one: every copy of b
    # sees at least one color.
    assert report.witness_below is not None and report.witness_below.t == 0

    report = ramsey_degree_in(make_chain(1), make_chain(3), make_chain(4), 2)
    assert report.t == 2
    assert report.witness_below is not None
    assert report.witness_below.t == 1
    assert report.witness_below.replay(
        abc_hypergraph(make_chain(1), make_chain(3), make_chain(4))
    )


def test_degree_a_equals_b():
    chain = make_chain(2)
    report = ramsey_degree_in(chain, chain, make_chain(4), 2)
    assert report.t == 1


def test_degree_copy_counting():
    # a = unordered edge has 2 automorphisms; both embeddings of every copy
    # can always be colored apart, so t = 2 and the copy degree is 1.
    edge = make_graph(2, [(0, 1)])
    report = ramsey_degree_in(edge, edge, make_clique(3), 2)
    assert report.t == 2
    assert report.copy_degree == Fraction(1)


def test_degree_no_b_copies_is_zero():
    report = ramsey_degree_in(ordered_vertex(), ordered_clique(3), ordered_edge(), 2)
    assert report.t == 0


# Tangent numbers ---------------------------------------------------------------


def test_tangent_numbers_known_values():
    assert tangent_numbers(7) == [1, 2, 16, 272, 7936, 353792, 22368256]
    assert tangent_numbers(9)[7:] == [1903757312, 209865342976]
    assert devlin_degree(2) == 4
    assert devlin_degree(1) == 1


def test_tangent_numbers_validation():
    with pytest.raises(InvalidInput):
        tangent_numbers(0)


# Trees of types -----------------------------------------------------------------


def test_tree_of_types_edgeless():
    tree = tree_of_types(make_graph(4, []), 4)
    for m in range(4):
        assert tree.classes(m) == (frozenset(range(m, 4)),)
    assert tree.classes(4) == ()


def test_tree_of_types_path():
    tree = tree_of_types(make_path(3), 2)
    assert tree.classes(0) == (frozenset({0, 1, 2}),)
    assert tree.classes(1) == (frozenset({1}), frozenset({2}))
    assert tree.classes(2) == (frozenset({2}),)
    assert tree.leq((0, 0), (1, 0)) and tree.leq((0, 0), (1, 1))
    assert not tree.leq((1, 0), (1, 1))
    assert tree.parent(1, 0) == 0
    assert tree.leq((1, 1), (2, 0))
    assert not tree.leq((1, 0), (2, 0))


def test_tree_of_types_rejects_functions():
    lang_f = Structure(Language(functions=(("F", 1),)), 1, {}, {"F": {}})
    with pytest.raises(InvalidInput):
        tree_of_types(lang_f, 0)
    with pytest.raises(InvalidInput):
        tree_of_types(make_path(3), 5)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_tree_levels_partition_and_nest(data):
    n = data.draw(st.integers(min_value=1, max_value=5))
    edges = data.draw(
        st.sets(
            st.tuples(
                st.integers(min_value=0, max_value=n - 1),
                st.integers(min_value=0, max_value=n - 1),
            ).filter(lambda p: p[0] != p[1]),
            max_size=6,
        )
    )
    tree = tree_of_types(make_graph(n, edges), n)
    for m in range(n + 1):
        union = set()
        for cls in tree.classes(m):
            assert not (union & cls)
            union |= cls
        assert union == set(range(m, n))
    # Finer levels refine coarser ones on the surviving vertices.
    for m in range(1, n + 1):
        for i in range(len(tree.classes(m))):
            assert tree.parent(m, i) is not None


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=5), st.integers(min_value=2, max_value=3))
def test_arrow_agrees_with_degree(n, r):
    a, b, c = make_chain(1), make_chain(2), make_chain(n)
    holds = check_arrow(a, b, c, r) is None
    report = ramsey_degree_in(a, b, c, r)
    assert holds == (report.t <= 1)
