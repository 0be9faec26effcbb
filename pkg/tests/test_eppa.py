"""EPPA witness checks and the n-partite tournament construction."""

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramseykit import (
    GRAPH_LANGUAGE,
    EMBEDDING,
    EmbeddingMap,
    InvalidInput,
    PartialAutomorphism,
    SizeCapExceeded,
    Structure,
    classify_map,
)
from ramseykit.amalgamation import GRADE_NONE, AmalgamationProblem, is_amalgam
from ramseykit.catalog import (
    ORDERED_GRAPH_LANGUAGE,
    ORIENTED_GRAPH_LANGUAGE,
    make_empty_graph,
    make_graph,
    make_oriented_graph,
    make_path,
)
from ramseykit.eppa import (
    CoherenceReport,
    EppaInstance,
    IncompleteTable,
    NotNPartiteTournament,
    check_coherence,
    extend_to_automorphism,
    is_eppa_witness,
    is_irreducible_faithful,
    npartite_tournament_witness,
    table_replays,
    validate_npartite_tournament,
)


def identity_instance(s, table=None):
    return EppaInstance(s, s, EmbeddingMap(s, s, range(s.size), EMBEDDING), table)


# Extension search ---------------------------------------------------------------


def test_extend_to_automorphism_path():
    p3 = make_path(3)
    assert extend_to_automorphism(p3, {}) == (0, 1, 2)
    assert extend_to_automorphism(p3, {0: 2}) == (2, 1, 0)
    assert extend_to_automorphism(p3, {0: 1}) is None
    assert extend_to_automorphism(p3, {0: 0, 2: 0}) is None
    with pytest.raises(InvalidInput):
        extend_to_automorphism(p3, {0: 7})


# Witness checking ---------------------------------------------------------------


def test_eppa_single_edge():
    edge = make_graph(2, [(0, 1)])
    report = is_eppa_witness(identity_instance(edge))
    assert report.ok and report.failing is None
    assert len(report.table) == 7
    # The one-point flip extends to the swap, everything else to the first
    # automorphism that fits.
    assert report.table[PartialAutomorphism(edge, (0,), (1,))] == (1, 0)
    assert report.table[PartialAutomorphism(edge, (), ())] == (0, 1)
    assert table_replays(identity_instance(edge, report.table))


def test_eppa_path_fails():
    p3 = make_path(3)
    report = is_eppa_witness(identity_instance(p3))
    assert not report.ok and report.table is None
    # No automorphism moves an endpoint to the middle.
    assert report.failing == PartialAutomorphism(p3, (0,), (1,))


def test_eppa_empty_small():
    empty = Structure(GRAPH_LANGUAGE, 0)
    b = make_path(2)
    inst = EppaInstance(empty, b, EmbeddingMap(empty, b, (), EMBEDDING))
    report = is_eppa_witness(inst)
    assert report.ok
    assert report.table == {PartialAutomorphism(empty, (), ()): (0, 1)}


def test_eppa_instance_rejects_non_embedding():
    edge = make_graph(2, [(0, 1)])
    blank = make_empty_graph(2)
    with pytest.raises(InvalidInput):
        EppaInstance(edge, blank, EmbeddingMap(edge, blank, (0, 1), EMBEDDING))
    with pytest.raises(InvalidInput):
        EppaInstance(edge, edge, EmbeddingMap(edge, edge, (0, 0), EMBEDDING))


# Coherence ----------------------------------------------------------------------


def test_coherence_identity_table():
    one = make_empty_graph(1)
    report = is_eppa_witness(identity_instance(one))
    inst = identity_instance(one, report.table)
    assert check_coherence(inst) == CoherenceReport(True, None)


def test_coherence_violating_pair():
    edge = make_graph(2, [(0, 1)])
    base = is_eppa_witness(identity_instance(edge)).table
    flip = PartialAutomorphism(edge, (0,), (1,))
    back = PartialAutomorphism(edge, (1,), (0,))
    table = {p: (0, 1) for p in base}
    table[flip] = (1, 0)
    report = check_coherence(identity_instance(edge, table))
    # flip then back composes to the identity on {0}, whose entry is the
    # identity, but the entries compose to swap o id = swap.
    assert not report.ok
    assert report.violating == (flip, back)


def test_coherence_is_not_extension():
    # Both one-point flips assigned the swap and the full swap assigned the
    # identity: the composition law holds everywhere, yet the table does not
    # replay because the swap entry does not extend the swap.
    edge = make_graph(2, [(0, 1)])
    base = is_eppa_witness(identity_instance(edge)).table
    flip = PartialAutomorphism(edge, (0,), (1,))
    back = PartialAutomorphism(edge, (1,), (0,))
    swap = PartialAutomorphism(edge, (0, 1), (1, 0))
    table = {p: (0, 1) for p in base}
    table[flip] = (1, 0)
    table[back] = (1, 0)
    inst = identity_instance(edge, table)
    assert check_coherence(inst).ok
    assert not table_replays(inst)
    assert table_replays(identity_instance(edge, base))
    # Sanity: the honest table really maps the swap to the swap.
    assert base[swap] == (1, 0)


def test_coherence_requires_total_table():
    edge = make_graph(2, [(0, 1)])
    base = is_eppa_witness(identity_instance(edge)).table
    missing = PartialAutomorphism(edge, (0,), (1,))
    partial_table = {p: g for p, g in base.items() if p != missing}
    with pytest.raises(IncompleteTable) as err:
        check_coherence(identity_instance(edge, partial_table))
    assert err.value.missing == missing
    with pytest.raises(IncompleteTable) as err:
        check_coherence(identity_instance(edge, None))
    assert err.value.missing == PartialAutomorphism(edge, (), ())


# Irreducible-structure faithfulness ---------------------------------------------


def test_faithful_self_witness():
    edge = make_graph(2, [(0, 1)])
    assert is_irreducible_faithful(identity_instance(edge)).ok


def test_faithful_two_disjoint_edges():
    # The witness swap moves the second edge onto the included one.
    b = make_graph(4, [(0, 1), (2, 3)])
    a = make_graph(2, [(0, 1)])
    inst = EppaInstance(a, b, EmbeddingMap(a, b, (0, 1), EMBEDDING))
    assert is_irreducible_faithful(inst).ok


def test_faithful_fails_on_stranded_triangle():
    # An edge next to a disjoint triangle: nothing maps triangle vertices
    # into the edge, and the scan reports the least stranded piece.
    b = make_graph(5, [(0, 1), (2, 3), (2, 4), (3, 4)])
    a = make_graph(2, [(0, 1)])
    inst = EppaInstance(a, b, EmbeddingMap(a, b, (0, 1), EMBEDDING))
    report = is_irreducible_faithful(inst)
    assert not report.ok
    assert report.failing == (2,)


# n-partite tournament validation -------------------------------------------------


def test_npartite_validation_errors():
    lone = make_oriented_graph(2, [(0, 1)])
    with pytest.raises(NotNPartiteTournament):
        validate_npartite_tournament(lone, [[0, 1]])
    with pytest.raises(NotNPartiteTournament):
        validate_npartite_tournament(make_oriented_graph(2, []), [[0], [1]])
    with pytest.raises(NotNPartiteTournament):
        validate_npartite_tournament(lone, [[0, 1], [0]])
    both = Structure(ORIENTED_GRAPH_LANGUAGE, 2, {"arc": [(0, 1), (1, 0)]})
    with pytest.raises(NotNPartiteTournament):
        validate_npartite_tournament(both, [[0], [1]])
    loop = Structure(ORIENTED_GRAPH_LANGUAGE, 2, {"arc": [(0, 1), (1, 1)]})
    with pytest.raises(NotNPartiteTournament):
        validate_npartite_tournament(loop, [[0], [1]])
    ordered = make_graph(2, [(0, 1)], ordered=True)
    assert ordered.language == ORDERED_GRAPH_LANGUAGE
    with pytest.raises(NotNPartiteTournament):
        validate_npartite_tournament(ordered, [[0], [1]])
    # A transitive triangle on singleton parts is a valid 3-partite
    # tournament, not an error.
    tri = make_oriented_graph(3, [(0, 1), (0, 2), (1, 2)])
    assert validate_npartite_tournament(tri, [[0], [1], [2]]) == ((0,), (1,), (2,))


def test_npartite_validation_accepts_and_normalizes():
    a = make_oriented_graph(3, [(0, 2), (2, 1)])
    assert validate_npartite_tournament(a, [[1, 0], [2]]) == ((0, 1), (2,))


def test_npartite_validation_rejects_inside_arc():
    a = Structure(ORIENTED_GRAPH_LANGUAGE, 3, {"arc": [(0, 1), (0, 2), (1, 2)]})
    with pytest.raises(NotNPartiteTournament):
        validate_npartite_tournament(a, [[0, 1], [2]])


# Witness construction ------------------------------------------------------------


def test_witness_two_singletons():
    a = make_oriented_graph(2, [(0, 1)])
    w = npartite_tournament_witness(a, [[0], [1]])
    assert w.padded == a and w.placement == (0, 1)
    assert w.b.size == 4
    assert w.labels == ((0, (0,)), (0, (1,)), (1, (0,)), (1, (1,)))
    assert w.b.rels["arc"] == frozenset({(0, 2), (2, 1), (1, 3), (3, 0)})
    assert w.b_parts == ((0, 1), (2, 3))
    assert w.psi.map == (0, 2)
    assert w.inclusion.map == (0, 2)

    inst = EppaInstance(w.padded, w.b, w.psi)
    report = is_eppa_witness(inst)
    assert report.ok
    assert table_replays(EppaInstance(w.padded, w.b, w.psi, report.table))


def test_witness_pads_uneven_parts():
    a = make_oriented_graph(3, [(0, 2), (2, 1)])
    w = npartite_tournament_witness(a, [[0, 1], [2]])
    assert w.padded.size == 4
    assert w.parts == ((0, 1), (2, 3))
    assert w.placement == (0, 1, 2)
    # Pad vertex 3 joins the tournament with ascending arcs.
    assert w.padded.rels["arc"] == frozenset({(0, 2), (2, 1), (0, 3), (1, 3)})
    assert w.b.size == 16
    assert [len(p) for p in w.b_parts] == [8, 8]
    # The witness certifies the original input too, pads and all.
    report = is_eppa_witness(EppaInstance(a, w.b, w.inclusion))
    assert report.ok


def test_witness_respects_part_order():
    a = make_oriented_graph(2, [(0, 1)])
    w = npartite_tournament_witness(a, [[1], [0]])
    # Part order drives the renumbering: vertex 1 comes first.
    assert w.placement == (1, 0)
    assert w.padded.rels["arc"] == frozenset({(1, 0)})


def test_witness_size_cap():
    a = make_oriented_graph(3, [(0, 2), (2, 1)])
    with pytest.raises(SizeCapExceeded):
        npartite_tournament_witness(a, [[0, 1], [2]], max_vertices=8)


def all_npartite_instances(shapes):
    """Every orientation of the cross-part pairs for each part shape."""
    for shape in shapes:
        parts = []
        start = 0
        for size in shape:
            parts.append(list(range(start, start + size)))
            start += size
        total = start
        part_of = {v: i for i, p in enumerate(parts) for v in p}
        pairs = [
            (u, v)
            for u in range(total)
            for v in range(u + 1, total)
            if part_of[u] != part_of[v]
        ]
        for bits in product((0, 1), repeat=len(pairs)):
            arcs = [
                (u, v) if bit == 0 else (v, u)
                for (u, v), bit in zip(pairs, bits)
            ]
            yield make_oriented_graph(total, arcs), parts


def test_witness_certifies_all_tiny_tournaments():
    checked = 0
    for a, parts in all_npartite_instances([(1, 1), (2, 1), (1, 1, 1)]):
        w = npartite_tournament_witness(a, parts)
        validate_npartite_tournament(w.b, w.b_parts)
        report = is_eppa_witness(EppaInstance(a, w.b, w.inclusion))
        assert report.ok, (a.rels, parts)
        checked += 1
    assert checked == 2 + 4 + 8


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_witness_output_valid_random(data):
    shape = data.draw(
        st.lists(st.integers(1, 2), min_size=2, max_size=3), label="shape"
    )
    parts = []
    start = 0
    for size in shape:
        parts.append(list(range(start, start + size)))
        start += size
    part_of = {v: i for i, p in enumerate(parts) for v in p}
    pairs = [
        (u, v)
        for u in range(start)
        for v in range(u + 1, start)
        if part_of[u] != part_of[v]
    ]
    bits = data.draw(
        st.lists(st.integers(0, 1), min_size=len(pairs), max_size=len(pairs)),
        label="orientations",
    )
    arcs = [(u, v) if b == 0 else (v, u) for (u, v), b in zip(pairs, bits)]
    a = make_oriented_graph(start, arcs)
    w = npartite_tournament_witness(a, parts)
    validate_npartite_tournament(w.b, w.b_parts)
    width = max(len(p) for p in parts)
    assert w.b.size == w.padded.size * 2 ** (w.padded.size - width)
    assert len(set(w.labels)) == w.b.size
    assert classify_map(w.psi.map, w.padded, w.b) == EMBEDDING
    assert classify_map(w.inclusion.map, a, w.b) == EMBEDDING


# EPPA plus joint embedding yields amalgamation -----------------------------------


def test_jep_plus_eppa_gives_amalgam():
    # Two bipartite tournaments over a shared single-arc base, jointly
    # embedded side by side; the witness of the joint structure absorbs the
    # mismatch by extending one partial automorphism.
    base = make_oriented_graph(2, [(0, 1)])
    b1 = make_oriented_graph(2, [(0, 1)])
    b2 = make_oriented_graph(2, [(1, 0)])
    alpha1 = EmbeddingMap(base, b1, (0, 1), EMBEDDING)
    alpha2 = EmbeddingMap(base, b2, (1, 0), EMBEDDING)

    joint = make_oriented_graph(4, [(0, 1), (3, 2), (0, 3), (2, 1)])
    beta1p = (0, 1)
    beta2p = (2, 3)
    assert classify_map(beta1p, b1, joint) == EMBEDDING
    assert classify_map(beta2p, b2, joint) == EMBEDDING

    w = npartite_tournament_witness(joint, [[0, 2], [1, 3]])
    incl = w.inclusion.map
    pins = {
        incl[beta1p[alpha1.map[x]]]: incl[beta2p[alpha2.map[x]]]
        for x in range(base.size)
    }
    theta = extend_to_automorphism(w.b, pins)
    assert theta is not None

    beta1 = tuple(theta[incl[v]] for v in beta1p)
    beta2 = tuple(incl[v] for v in beta2p)
    problem = AmalgamationProblem(base, b1, b2, alpha1, alpha2)
    assert is_amalgam(w.b, problem, beta1, beta2) != GRADE_NONE
