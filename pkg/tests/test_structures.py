"""Core structure model: embeddings, closure, irreducibility, classification."""

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramseykit.catalog import make_chain, make_clique, make_cycle, make_graph, make_path
from ramseykit.errors import InvalidInput, NotClosed
from ramseykit.structures import (
    EMBEDDING,
    HOM_EMBEDDING,
    HOMOMORPHISM,
    ISOMORPHISM,
    MONOMORPHISM,
    U_CLOSED_EMBEDDING,
    Language,
    Structure,
    _KIND_RANK,
    automorphisms,
    classify_map,
    enumerate_embeddings,
    enumerate_partial_automorphisms,
    gaifman_graph,
    generated_closure,
    induced_substructure,
    is_irreducible,
    is_ordered,
    validate_structure,
)

FUN_LANG = Language(functions=(("F", 2),))


def test_language_rejects_duplicate_names():
    with pytest.raises(InvalidInput):
        Language(relations=(("R", 2), ("R", 3)))
    with pytest.raises(InvalidInput):
        Language(relations=(("R", 2),), functions=(("R", 1),))


def test_language_rejects_bad_arities():
    with pytest.raises(InvalidInput):
        Language(relations=(("R", 0),))
    # Nullary functions are allowed.
    Language(functions=(("c", 0),))


def test_structure_defaults_and_validation():
    s = make_path(3)
    report = validate_structure(s)
    assert report.valid and not report.ordered
    bad = Structure(s.language, 2, {"E": [(0, 5)]})
    report = validate_structure(bad)
    assert not report.valid
    assert any("out of range" in p for p in report.problems)


def test_is_ordered():
    assert is_ordered(make_chain(4))
    assert is_ordered(make_clique(3, ordered=True))
    assert not is_ordered(make_clique(3))
    # Missing pair: not total.
    partial = Structure(Language(relations=(("<", 2),)), 3, {"<": [(0, 1)]})
    assert not is_ordered(partial)
    # Cyclic: (0,1),(1,2),(2,0) has the right count but is not antisymmetric-transitive.
    cyc = Structure(Language(relations=(("<", 2),)), 3, {"<": [(0, 1), (1, 2), (2, 0)]})
    assert not is_ordered(cyc)


def test_embedding_count_edge_into_triangle():
    edge = make_clique(2)
    triangle = make_clique(3)
    embs = enumerate_embeddings(edge, triangle)
    assert len(embs) == 6
    maps = [e.map for e in embs]
    assert maps == sorted(maps)


def test_embedding_count_chain2_into_chain4():
    embs = enumerate_embeddings(make_chain(2), make_chain(4))
    # Order-preserving injections of a 2-chain into a 4-chain: C(4,2) = 6.
    assert len(embs) == 6
    assert all(e.map[0] < e.map[1] for e in embs)


def test_four_cycle_automorphisms():
    autos = automorphisms(make_cycle(4))
    assert len(autos) == 8
    assert all(a.kind == ISOMORPHISM for a in autos)
    assert autos[0].map == (0, 1, 2, 3)


def test_empty_structure_has_one_automorphism():
    empty = make_graph(0, [])
    assert len(automorphisms(empty)) == 1


def test_single_edge_partial_automorphisms():
    edge = make_clique(2)
    pas = enumerate_partial_automorphisms(edge)
    # Empty map, 4 vertex maps, id and swap on the edge: 7 total.
    assert len(pas) == 7
    assert pas[0].domain == () and pas[0].image == ()


def test_three_chain_single_vertex_partial_automorphisms():
    pas = enumerate_partial_automorphisms(make_chain(3), max_domain=1)
    singletons = [p for p in pas if len(p.domain) == 1]
    assert len(singletons) == 9


def test_generated_closure():
    s = Structure(FUN_LANG, 3, funs={"F": {(0, 1): [2], (2, 2): [0]}})
    assert generated_closure(s, [0]) == frozenset({0})
    assert generated_closure(s, [0, 1]) == frozenset({0, 1, 2})
    assert generated_closure(s, [2]) == frozenset({0, 2})


def test_induced_substructure_raises_when_not_closed():
    s = Structure(FUN_LANG, 3, funs={"F": {(0, 1): [2]}})
    with pytest.raises(NotClosed):
        induced_substructure(s, [0, 1])
    sub, old2new = induced_substructure(s, [0, 2])
    assert sub.size == 2 and old2new == {0: 0, 2: 1}


def test_gaifman_graph_function_entries():
    # F(0,1) = {2} forces a triangle on {0,1,2}.
    s = Structure(FUN_LANG, 3, funs={"F": {(0, 1): [2]}})
    g = gaifman_graph(s)
    assert g.rels["E"] == frozenset(
        {(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)}
    )


def test_irreducibility_path_witness():
    irr, witness = is_irreducible(make_path(3))
    assert not irr
    assert witness == ((0, 1), (1, 2))
    assert is_irreducible(make_clique(3))[0]
    assert is_irreducible(make_clique(1))[0]
    assert is_irreducible(make_graph(0, []))[0]


def test_irreducibility_with_functions():
    s = Structure(FUN_LANG, 3, funs={"F": {(0, 1): [2]}})
    irr, _ = is_irreducible(s)
    assert irr
    # Two disjoint entries: reducible.
    t = Structure(
        Language(functions=(("F", 1),)), 4, funs={"F": {(0,): [1], (2,): [3]}}
    )
    irr, witness = is_irreducible(t)
    assert not irr
    x, y = witness
    assert set(x) | set(y) == {0, 1, 2, 3}


def test_classification_ladder():
    edge = make_clique(2)
    triangle = make_clique(3)
    c4 = make_cycle(4)
    # Quotient of the 4-cycle onto an edge: hom-embedding, not injective.
    assert classify_map((0, 1, 0, 1), c4, edge) == HOM_EMBEDDING
    # Inclusion of an edge into a triangle: embedding, not onto.
    assert classify_map((0, 1), edge, triangle) == EMBEDDING
    # Identity on the triangle.
    assert classify_map((0, 1, 2), triangle, triangle) == ISOMORPHISM
    # Collapse of a non-edge pair in the path is a homomorphism only if
    # the image respects edges; path 0-1-2 folded onto an edge works.
    assert classify_map((0, 1, 0), make_path(3), edge) == HOM_EMBEDDING
    # Two isolated vertices into an edge injectively: adds a relation,
    # so not an embedding, but each singleton restricts fine.
    iso2 = make_graph(2, [])
    assert classify_map((0, 1), iso2, edge) == HOM_EMBEDDING
    # Non-homomorphism: edge to non-edge.
    assert classify_map((0, 2), edge, make_path(3)) is None


def test_classification_monomorphism_and_homomorphism():
    # In a loop-free graph every irreducible substructure is a clique, so
    # every graph homomorphism is a hom-embedding; weaker kinds need more
    # symbols.  Ordered graphs make every pair irreducible via "<".
    ordered_nonedge = make_graph(2, [], ordered=True)
    ordered_edge = make_clique(2, ordered=True)
    assert classify_map((0, 1), ordered_nonedge, ordered_edge) == MONOMORPHISM
    # A ternary tuple collapsed onto two vertices: plain homomorphism.
    tern = Language(relations=(("R", 3),))
    a = Structure(tern, 3, {"R": [(0, 1, 2)]})
    b = Structure(tern, 2, {"R": [(0, 1, 0)]})
    assert classify_map((0, 1, 0), a, b) == HOMOMORPHISM
    # Graph homs are always hom-embeddings, injective or not.
    c4 = make_cycle(4)
    k3 = make_clique(3)
    assert classify_map((0, 1, 2, 1), c4, k3) == HOM_EMBEDDING
    assert classify_map((1, 0, 3), make_path(3), c4) == EMBEDDING


def test_function_homomorphism_exact_equality():
    a = Structure(FUN_LANG, 3, funs={"F": {(0, 1): [2]}})
    b = Structure(FUN_LANG, 3, funs={"F": {(0, 1): [2], (1, 0): [2]}})
    # Identity fails: F_b(1,0) nonempty while F_a(1,0) empty.
    assert classify_map((0, 1, 2), a, b) is None
    assert classify_map((0, 1, 2), b, b) == ISOMORPHISM
    c = Structure(FUN_LANG, 4, funs={"F": {(0, 1): [2, 3]}})
    # Value sets of different sizes under an injection cannot match exactly.
    assert classify_map((0, 1, 2), a, c) is None


def test_u_closed_embedding_relational_encoding():
    # R encodes a unary function: arity 2, last coordinate is the value.
    lang = Language(relations=(("R", 2),))
    b = Structure(lang, 3, {"R": [(0, 1), (1, 2)]})
    a = Structure(lang, 2, {"R": [(0, 1)]})
    # Image {0,1} is not closed: R(1,2) sends 1 outside.
    assert classify_map((0, 1), a, b, u_symbols=["R"]) == EMBEDDING
    # Image {1,2} is closed (no R-tuple starts at 2).
    a2 = Structure(lang, 2, {"R": [(0, 1)]})
    assert classify_map((1, 2), a2, b, u_symbols=["R"]) == U_CLOSED_EMBEDDING
    # Without u_symbols the stronger kind is never reported.
    assert classify_map((1, 2), a2, b) == EMBEDDING


def test_enumerate_embeddings_with_projection():
    # Source over the plain graph language, target carrying extra unary
    # partition predicates: only source symbols participate in checking.
    lang = Language(relations=(("E", 2), ("P0", 1), ("P1", 1)))
    b = Structure(
        lang,
        4,
        {"E": [(0, 2), (2, 0), (1, 3), (3, 1)], "P0": [(0,), (1,)], "P1": [(2,), (3,)]},
    )
    a = make_clique(2)
    all_embs = enumerate_embeddings(a, b)
    assert len(all_embs) == 4
    constrained = enumerate_embeddings(a, b, projection={0: "P0", 1: "P1"})
    assert [e.map for e in constrained] == [(0, 2), (1, 3)]


def test_ordered_structures_are_rigid():
    for s in (make_chain(3), make_clique(3, ordered=True), make_path(4, ordered=True)):
        assert len(automorphisms(s)) == 1


# Property tests ------------------------------------------------------------


@st.composite
def small_graphs(draw, max_n=4):
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    return make_graph(n, edges)


@st.composite
def small_fun_structures(draw, max_n=4):
    n = draw(st.integers(min_value=1, max_value=max_n))
    entries = {}
    n_entries = draw(st.integers(min_value=0, max_value=3))
    for _ in range(n_entries):
        args = (
            draw(st.integers(min_value=0, max_value=n - 1)),
            draw(st.integers(min_value=0, max_value=n - 1)),
        )
        value = draw(
            st.sets(st.integers(min_value=0, max_value=n - 1), min_size=1, max_size=2)
        )
        entries[args] = value
    return Structure(FUN_LANG, n, funs={"F": entries})


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=3), small_graphs(max_n=4))
def test_enumerate_matches_bruteforce_classification(a, b):
    got = {e.map for e in enumerate_embeddings(a, b)}
    expected = set()
    for f in product(range(b.size), repeat=a.size):
        kind = classify_map(f, a, b)
        if kind is not None and _KIND_RANK[kind] >= _KIND_RANK[EMBEDDING]:
            expected.add(f)
    assert got == expected


@settings(max_examples=60, deadline=None)
@given(small_fun_structures(), st.data())
def test_closure_is_monotone_idempotent_extensive(s, data):
    seed = data.draw(
        st.sets(st.integers(min_value=0, max_value=s.size - 1), max_size=s.size)
    )
    bigger = data.draw(
        st.sets(st.integers(min_value=0, max_value=s.size - 1), max_size=s.size)
    )
    cl = generated_closure(s, seed)
    assert seed <= cl
    assert generated_closure(s, cl) == cl
    if seed <= bigger:
        assert cl <= generated_closure(s, bigger)


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=5))
def test_relational_irreducible_iff_gaifman_complete(s):
    irr, witness = is_irreducible(s)
    g = gaifman_graph(s)
    n = s.size
    complete = all(
        (u, v) in g.rels["E"] for u in range(n) for v in range(u + 1, n)
    )
    assert irr == complete
    if not irr:
        x, y = witness
        assert set(x) | set(y) == set(range(n))
        assert len(x) < n and len(y) < n
        entries = [set(t) for _, t in s.entries()]
        assert all(e <= set(x) or e <= set(y) for e in entries)
