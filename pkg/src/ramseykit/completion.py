"""Completion algorithms: metric, equivalence, linear order, poset extension,
C-relations, and the ordered-Boolean-algebra / rigid-surjection correspondence.

All distances are exact rationals; nothing here touches floating point.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence, Union

from .errors import InvalidInput
from .structures import (
    EMBEDDING,
    HOM_EMBEDDING,
    _KIND_RANK,
    EmbeddingMap,
    Language,
    Structure,
    classify_map,
    is_ordered,
)


class NotRelational(InvalidInput):
    """The operation only supports purely relational languages."""


class NotHomomorphismEmbedding(InvalidInput):
    """The supplied map is not a homomorphism-embedding."""


# Edge-labelled graphs -------------------------------------------------------


def _pair(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise InvalidInput(f"self-pair ({u},{v}) not allowed")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class EdgeLabelledGraph:
    """Partial symmetric labelling of vertex pairs; labels are opaque values
    (exact rationals for metric work, "E"/"N" for equivalences)."""

    size: int
    labels: dict

    def __post_init__(self):
        norm = {}
        for (u, v), label in self.labels.items():
            u, v = int(u), int(v)
            if not (0 <= u < self.size and 0 <= v < self.size):
                raise InvalidInput(f"pair ({u},{v}) out of range")
            key = _pair(u, v)
            if key in norm and norm[key] != label:
                raise InvalidInput(f"conflicting labels for pair {key}")
            norm[key] = label
        object.__setattr__(self, "labels", norm)

    def label(self, u: int, v: int):
        if u == v:
            return None
        return self.labels.get(_pair(u, v))

    def alphabet(self) -> list:
        return sorted(set(self.labels.values()))

    def is_complete(self) -> bool:
        return len(self.labels) == self.size * (self.size - 1) // 2


def labelled_graph_to_structure(g: EdgeLabelledGraph, extra_labels=()) -> Structure:
    """One symmetric binary relation per label, named d_<num>_<den>."""
    names = {}
    for label in sorted(set(g.alphabet()) | set(extra_labels)):
        f = Fraction(label)
        names[label] = f"d_{f.numerator}_{f.denominator}"
    lang = Language(relations=tuple((names[l], 2) for l in sorted(names)))
    rels = {name: set() for name in lang.relation_names}
    for (u, v), label in g.labels.items():
        rels[names[label]].update([(u, v), (v, u)])
    return Structure(lang, g.size, rels)


def structure_to_labelled_graph(s: Structure) -> EdgeLabelledGraph:
    labels = {}
    for name, arity in s.language.relations:
        if not name.startswith("d_"):
            continue
        parts = name.split("_")
        if len(parts) != 3 or arity != 2:
            raise InvalidInput(f"bad distance relation name {name!r}")
        value = Fraction(int(parts[1]), int(parts[2]))
        for u, v in s.rels[name]:
            key = _pair(u, v)
            if key in labels and labels[key] != value:
                raise InvalidInput(f"pair {key} carries two labels")
            labels[key] = value
    return EdgeLabelledGraph(s.size, labels)


@dataclass(frozen=True)
class NonMetricCycleWitness:
    """Cycle whose heaviest edge outweighs the rest combined; labels[i] sits
    on the edge (cycle[i], cycle[i+1 mod k])."""

    cycle: tuple[int, ...]
    labels: tuple

    def __post_init__(self):
        labels = tuple(Fraction(l) for l in self.labels)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "cycle", tuple(int(v) for v in self.cycle))
        if len(self.cycle) != len(labels) or len(labels) < 3:
            raise InvalidInput("cycle and labels must align, length >= 3")
        if not labels[0] > sum(labels[1:]):
            raise InvalidInput("first label must exceed the sum of the rest")


def _nonmetric_cycles_in(g: EdgeLabelledGraph) -> Optional[tuple[tuple[int, ...], tuple]]:
    """Shortest, then lexicographically least simple non-metric cycle, as a
    canonical vertex sequence (min vertex first, second < last)."""
    n = g.size
    adj = {v: sorted(u for u in range(n) if g.label(u, v) is not None) for v in range(n)}

    for k in range(3, n + 1):
        best = None

        def extend(seq: list[int]):
            nonlocal best
            if best is not None and tuple(seq) > best[: len(seq)]:
                return
            if len(seq) == k:
                if g.label(seq[-1], seq[0]) is None:
                    return
                labels = [g.label(seq[i], seq[(i + 1) % k]) for i in range(k)]
                if max(labels) > sum(labels) - max(labels):
                    cand = tuple(seq)
                    if best is None or cand < best:
                        best = cand
                return
            for u in adj[seq[-1]]:
                if u <= seq[0] or u in seq:
                    continue
                seq.append(u)
                extend(seq)
                seq.pop()

        for v0 in range(n):
            extend([v0])
        if best is not None:
            # Both traversal directions were searched, so best is canonical.
            labels = tuple(g.label(best[i], best[(i + 1) % k]) for i in range(k))
            return best, labels
    return None


def _rotate_heaviest_first(cycle: tuple[int, ...], labels: tuple) -> NonMetricCycleWitness:
    k = len(cycle)
    top = max(labels)
    candidates = []
    for direction in (1, -1):
        seq = cycle if direction == 1 else (cycle[0],) + tuple(reversed(cycle[1:]))
        labs = tuple(
            labels[i] if direction == 1 else labels[(k - 1 - i) % k]
            for i in range(k)
        )
        # labs[i] is the label of (seq[i], seq[i+1]) in either direction.
        for r in range(k):
            if labs[r] == top:
                candidates.append(
                    (
                        tuple(seq[(r + i) % k] for i in range(k)),
                        tuple(labs[(r + i) % k] for i in range(k)),
                    )
                )
    candidates.sort()
    cyc, labs = candidates[0]
    return NonMetricCycleWitness(cyc, labs)


def complete_metric(
    g: EdgeLabelledGraph,
) -> Union[EdgeLabelledGraph, NonMetricCycleWitness]:
    """Shortest-path completion capped by the largest present label, or the
    minimal non-metric cycle when no completion exists.

    Success preserves every input label exactly (a strong completion).
    """
    for label in g.labels.values():
        if not isinstance(label, (Fraction, int)) or Fraction(label) <= 0:
            raise InvalidInput(f"metric labels must be positive rationals, got {label!r}")
    if g.size < 1:
        return EdgeLabelledGraph(g.size, {})
    if not g.labels:
        cap = Fraction(1)
    else:
        cap = max(Fraction(l) for l in g.labels.values())
    n = g.size
    inf = None
    dist = [[inf] * n for _ in range(n)]
    for v in range(n):
        dist[v][v] = Fraction(0)
    for (u, v), label in g.labels.items():
        dist[u][v] = dist[v][u] = Fraction(label)
    for w in range(n):
        for u in range(n):
            duw = dist[u][w]
            if duw is inf:
                continue
            for v in range(n):
                if dist[w][v] is inf:
                    continue
                cand = duw + dist[w][v]
                if dist[u][v] is inf or cand < dist[u][v]:
                    dist[u][v] = cand

    for (u, v), label in g.labels.items():
        if dist[u][v] < Fraction(label):
            found = _nonmetric_cycles_in(g)
            assert found is not None, "violated label implies a non-metric cycle"
            return _rotate_heaviest_first(*found)

    completed = {}
    for u in range(n):
        for v in range(u + 1, n):
            d = dist[u][v]
            completed[(u, v)] = cap if d is inf else min(cap, d)
    return EdgeLabelledGraph(n, completed)


def nonmetric_cycle_family(labels: Sequence, max_length: int) -> list[Structure]:
    """All non-metric cycles with the given label set, up to max_length
    vertices, as structures with one relation per label.

    Deduplicated up to rotation and reflection of the label sequence.
    """
    labels = sorted(Fraction(l) for l in set(labels))
    out = []
    seen = set()
    for k in range(3, max_length + 1):
        for combo in product(labels, repeat=k):
            if not combo[0] > sum(combo[1:]):
                continue
            orbit = []
            for r in range(k):
                rot = combo[r:] + combo[:r]
                orbit.append(rot)
                orbit.append((rot[0],) + tuple(reversed(rot[1:])))
            key = (k, min(orbit))
            if key in seen:
                continue
            seen.add(key)
            g = EdgeLabelledGraph(
                k, {(i, (i + 1) % k): combo[i] for i in range(k)}
            )
            out.append(labelled_graph_to_structure(g, extra_labels=labels))
    return out


# Equivalences ---------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceObstacle:
    """A cycle with one N edge and the E-path joining its endpoints."""

    cycle: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if self.labels[0] != "N" or any(l != "E" for l in self.labels[1:]):
            raise InvalidInput("obstacle must be one N edge plus an E path")


def complete_equivalence(
    g: EdgeLabelledGraph,
) -> Union[EdgeLabelledGraph, EquivalenceObstacle]:
    """Complete an {E,N}-labelled graph to an equivalence pattern, or return
    the cycle (one N edge, rest E) witnessing impossibility."""
    for label in g.labels.values():
        if label not in ("E", "N"):
            raise InvalidInput(f"labels must be 'E' or 'N', got {label!r}")
    n = g.size
    comp = list(range(n))

    def find(v):
        while comp[v] != v:
            comp[v] = comp[comp[v]]
            v = comp[v]
        return v

    for (u, v), label in sorted(g.labels.items()):
        if label == "E":
            ru, rv = find(u), find(v)
            if ru != rv:
                comp[max(ru, rv)] = min(ru, rv)

    for (u, v), label in sorted(g.labels.items()):
        if label == "N" and find(u) == find(v):
            # Shortest E-path u..v, least-id BFS tie-break.
            adj = {
                w: sorted(
                    x
                    for x in range(n)
                    if g.label(w, x) == "E"
                )
                for w in range(n)
            }
            parent = {u: None}
            queue = deque([u])
            while queue:
                w = queue.popleft()
                if w == v:
                    break
                for x in adj[w]:
                    if x not in parent:
                        parent[x] = w
                        queue.append(x)
            path = []
            w = v
            while w is not None:
                path.append(w)
                w = parent[w]
            # path is v..u; cycle lists the N edge first, then E edges back.
            cycle = (u, v) + tuple(path[1:-1])
            return EquivalenceObstacle(cycle, ("N",) + ("E",) * (len(cycle) - 1))

    completed = {}
    for u in range(n):
        for v in range(u + 1, n):
            completed[(u, v)] = "E" if find(u) == find(v) else "N"
    return EdgeLabelledGraph(n, completed)


# Linear orders and posets ----------------------------------------------------


@dataclass(frozen=True)
class OrderReflexivePair:
    vertex: int


@dataclass(frozen=True)
class OrderSymmetricPair:
    pair: tuple[int, int]


@dataclass(frozen=True)
class OrderCycle:
    cycle: tuple[int, ...]


@dataclass(frozen=True)
class InvariantViolation:
    clause: int
    pair: tuple[int, int]


OrderWitness = Union[OrderReflexivePair, OrderSymmetricPair, OrderCycle]


def _least_cycle(n: int, edges: frozenset) -> tuple[int, ...]:
    """Shortest, then lex-least oriented cycle (length >= 3 assumed)."""
    succ = {v: sorted(u for u in range(n) if (v, u) in edges) for v in range(n)}
    for k in range(3, n + 1):
        for v0 in range(n):

            def dfs(seq):
                if len(seq) == k:
                    return seq if (seq[-1], seq[0]) in edges else None
                for u in succ[seq[-1]]:
                    if u > seq[0] and u not in seq:
                        got = dfs(seq + [u])
                        if got:
                            return got
                return None

            got = dfs([v0])
            if got:
                return tuple(got)
    raise AssertionError("no oriented cycle found in a cyclic relation")


def extend_linear_order(s: Structure) -> Union[Structure, OrderWitness]:
    """Extend the partial strict order "<" of s to a linear order via a
    stable least-id-first topological sort; everything else is untouched.

    Returns the least witness (reflexive pair, symmetric pair, or oriented
    cycle) when no extension exists.
    """
    if not s.language.is_relation("<") or s.language.arity("<") != 2:
        raise InvalidInput('structure must carry a binary relation "<"')
    lt = s.rels["<"]
    for v in range(s.size):
        if (v, v) in lt:
            return OrderReflexivePair(v)
    for u, v in sorted(lt):
        if (v, u) in lt and u < v:
            return OrderSymmetricPair((u, v))

    succ = {v: [] for v in range(s.size)}
    indeg = {v: 0 for v in range(s.size)}
    for u, v in lt:
        succ[u].append(v)
        indeg[v] += 1
    ready = [v for v in range(s.size) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    if len(order) < s.size:
        remaining = [v for v in range(s.size) if v not in order]
        core = frozenset(t for t in lt if t[0] in remaining and t[1] in remaining)
        return OrderCycle(_least_cycle(s.size, core))

    pos = {v: i for i, v in enumerate(order)}
    new_lt = {(u, v) for u in range(s.size) for v in range(s.size) if pos[u] < pos[v]}
    rels = dict(s.rels)
    rels["<"] = new_lt
    return Structure(s.language, s.size, rels, s.funs)


def transitive_closure(pairs: frozenset, n: int) -> frozenset:
    reach = {v: set() for v in range(n)}
    for u, v in pairs:
        reach[u].add(v)
    changed = True
    while changed:
        changed = False
        for u in range(n):
            extra = set()
            for v in reach[u]:
                extra |= reach[v] - reach[u]
            if extra:
                reach[u] |= extra
                changed = True
    return frozenset((u, v) for u in range(n) for v in reach[u])


def complete_poset_linext(
    s: Structure,
) -> Union[Structure, OrderWitness, InvariantViolation]:
    """Close "<<" transitively and extend "<" to a linear order containing it.

    Checks two preconditions first: (1) << is contained in <; (2) no pair
    gained by the transitive closure of << conflicts with < (present in <
    already, or present in < reversed).
    """
    for name in ("<", "<<"):
        if not s.language.is_relation(name) or s.language.arity(name) != 2:
            raise InvalidInput(f'structure must carry a binary relation "{name}"')
    lt = s.rels["<"]
    ll = s.rels["<<"]
    for u, v in sorted(ll):
        if (u, v) not in lt:
            return InvariantViolation(1, (u, v))
    closure = transitive_closure(ll, s.size)
    for u, v in sorted(closure - ll):
        if (u, v) in lt or (v, u) in lt:
            return InvariantViolation(2, (u, v))
    rels = dict(s.rels)
    rels["<<"] = closure
    rels["<"] = lt | closure
    widened = Structure(s.language, s.size, rels, s.funs)
    return extend_linear_order(widened)


# C-relations ------------------------------------------------------------------


@dataclass(frozen=True)
class CRelationReport:
    ok: bool
    axiom: Optional[int] = None  # 1..5; 6 means the convex-order clause
    witness: Optional[tuple] = None


def check_c_relation(s: Structure) -> CRelationReport:
    """Evaluate the five leaf-tree axioms on C, plus convexity when < exists."""
    if not s.language.is_relation("C") or s.language.arity("C") != 3:
        raise InvalidInput('structure must carry a ternary relation "C"')
    c = s.rels["C"]
    n = s.size
    rng = range(n)
    for a, b, x in product(rng, repeat=3):
        if ((a, b, x) in c) != ((a, x, b) in c):
            return CRelationReport(False, 1, (a, b, x))
    for a, b, x in product(rng, repeat=3):
        if (a, b, x) in c and (b, a, x) in c:
            return CRelationReport(False, 2, (a, b, x))
    for a, b, x in product(rng, repeat=3):
        if (a, b, x) not in c:
            continue
        for d in rng:
            if (a, d, x) not in c and (d, b, x) not in c:
                return CRelationReport(False, 3, (a, b, x, d))
    for a, b in product(rng, repeat=2):
        if a != b and (a, b, b) not in c:
            return CRelationReport(False, 4, (a, b, b))
    for a, b, x in product(rng, repeat=3):
        if a != b and b != x:
            if (a, b, x) not in c and (b, a, x) not in c and (x, a, b) not in c:
                return CRelationReport(False, 5, (a, b, x))
    if s.language.is_relation("<"):
        lt = s.rels["<"]
        for a, b, x in product(rng, repeat=3):
            if (a, b, x) in c and (b, x) in lt:
                if not ((a, b) in lt or (x, a) in lt):
                    return CRelationReport(False, 6, (a, b, x))
    return CRelationReport(True)


# Rigid surjections and ordered Boolean algebras -----------------------------


def enumerate_rigid_surjections(m_atoms: int, k_atoms: int) -> list[tuple[int, ...]]:
    """All surjections m -> k whose classes first appear in increasing order."""
    if not (m_atoms >= k_atoms >= 1):
        raise InvalidInput("need m >= k >= 1")
    out = []
    for g in product(range(k_atoms), repeat=m_atoms):
        if set(g) != set(range(k_atoms)):
            continue
        firsts = [g.index(i) for i in range(k_atoms)]
        if firsts == sorted(firsts):
            out.append(g)
    return out


BA_LANGUAGE = Language(
    relations=(("<", 2),),
    functions=(("join", 2), ("meet", 2), ("neg", 1), ("zero", 0), ("one", 0)),
)

BA_MAX_ATOMS = 4  # materialized algebras stay desk-sized (<= 16 vertices)


def _ba_less(x: int, y: int) -> bool:
    """Vertex x (a subset bitmask) precedes y iff the least differing atom
    belongs to x."""
    if x == y:
        return False
    diff = x ^ y
    low = diff & -diff
    return bool(x & low)


def boolean_algebra_structure(k_atoms: int) -> Structure:
    """The ordered Boolean algebra on k atoms; vertex i is the subset with
    bitmask i."""
    if not (1 <= k_atoms <= BA_MAX_ATOMS):
        raise InvalidInput(f"atom count must be in 1..{BA_MAX_ATOMS}")
    size = 1 << k_atoms
    full = size - 1
    lt = {(x, y) for x in range(size) for y in range(size) if _ba_less(x, y)}
    funs = {
        "join": {(x, y): [x | y] for x in range(size) for y in range(size)},
        "meet": {(x, y): [x & y] for x in range(size) for y in range(size)},
        "neg": {(x,): [full ^ x] for x in range(size)},
        "zero": {(): [0]},
        "one": {(): [full]},
    }
    return Structure(BA_LANGUAGE, size, {"<": lt}, funs)


def rigid_surjection_to_embedding(g: Sequence[int], m_atoms: int, k_atoms: int) -> tuple[int, ...]:
    """X -> preimage of X: subsets of the k atoms into subsets of the m atoms."""
    g = tuple(g)
    out = []
    for x in range(1 << k_atoms):
        image = 0
        for j in range(m_atoms):
            if x & (1 << g[j]):
                image |= 1 << j
        out.append(image)
    return tuple(out)


def embedding_to_rigid_surjection(f: Sequence[int], m_atoms: int, k_atoms: int) -> tuple[int, ...]:
    """Recover g from f via atom images: g(j) = i iff atom j lies in f({a_i})."""
    g = [None] * m_atoms
    for i in range(k_atoms):
        atom_image = f[1 << i]
        for j in range(m_atoms):
            if atom_image & (1 << j):
                if g[j] is not None:
                    raise InvalidInput("atom images overlap; not an embedding image")
                g[j] = i
    if any(v is None for v in g):
        raise InvalidInput("atom images do not cover all atoms")
    return tuple(g)


def ba_embedding_correspondence(
    m_atoms: int, k_atoms: int
) -> list[tuple[tuple[int, ...], EmbeddingMap]]:
    """Pair every rigid surjection with its certified ordered-BA embedding.

    Raises when certification or the round-trip identity fails.
    """
    a = boolean_algebra_structure(k_atoms)
    b = boolean_algebra_structure(m_atoms)
    out = []
    for g in enumerate_rigid_surjections(m_atoms, k_atoms):
        f = rigid_surjection_to_embedding(g, m_atoms, k_atoms)
        kind = classify_map(f, a, b)
        if kind is None or _KIND_RANK[kind] < _KIND_RANK[EMBEDDING]:
            raise AssertionError(f"induced map of {g} failed certification: {kind}")
        back = embedding_to_rigid_surjection(f, m_atoms, k_atoms)
        if back != g:
            raise AssertionError(f"round-trip mismatch: {g} -> {back}")
        out.append((g, EmbeddingMap(a, b, f, EMBEDDING)))
    return out


# Injectivization of homomorphism-embeddings ----------------------------------


def injectivize_homomorphism_embedding(
    a: Structure,
    f: Sequence[int],
    b: Structure,
    context: Optional[Sequence[Structure]] = None,
) -> tuple[Structure, EmbeddingMap]:
    """Split collisions of a homomorphism-embedding one image class at a time
    by doubling the target over the rest, until the map is injective.

    The doubling is an explicit free (hence strong) amalgam; the context
    catalog is accepted for interface compatibility but never consulted.
    """
    del context
    if not a.language.is_relational() or not b.language.is_relational():
        raise NotRelational("only relational languages are supported")
    f = tuple(int(v) for v in f)
    kind = classify_map(f, a, b)
    if kind is None or _KIND_RANK[kind] < _KIND_RANK[HOM_EMBEDDING]:
        raise NotHomomorphismEmbedding(f"map classifies as {kind}")

    from .amalgamation import AmalgamationProblem, free_amalgam
    from .structures import induced_substructure

    current = list(f)
    target = b
    while True:
        classes: dict[int, list[int]] = {}
        for v, image in enumerate(current):
            classes.setdefault(image, []).append(v)
        collided = sorted(z for z, vs in classes.items() if len(vs) > 1)
        if not collided:
            break
        z = collided[0]
        group = classes[z]
        y = group[-1]
        keep_images = sorted({current[v] for v in range(a.size) if v not in group})
        overlap, old2new = induced_substructure(target, keep_images)
        inc = sorted(keep_images)
        e1 = EmbeddingMap(overlap, target, tuple(inc), EMBEDDING)
        doubled, beta1, beta2 = free_amalgam(
            AmalgamationProblem(overlap, target, target, e1, e1)
        )
        current = [
            beta2.map[current[v]] if v == y else beta1.map[current[v]]
            for v in range(a.size)
        ]
        target = doubled

    kind = classify_map(tuple(current), a, target)
    assert kind is not None and _KIND_RANK[kind] >= _KIND_RANK[HOM_EMBEDDING]
    return target, EmbeddingMap(a, target, tuple(current), HOM_EMBEDDING)


# Equivalences as structures with imaginary vertices ---------------------------

EQUIV_LANGUAGE = Language(relations=(("E", 2), ("N", 2), ("<", 2)))
IMAGINARY_LANGUAGE = Language(
    relations=(("O", 1), ("I", 1), ("<", 2)), functions=(("F", 1),)
)


def _equivalence_classes(s: Structure) -> list[list[int]]:
    comp = list(range(s.size))

    def find(v):
        while comp[v] != v:
            comp[v] = comp[comp[v]]
            v = comp[v]
        return v

    for u, v in s.rels["E"]:
        ru, rv = find(u), find(v)
        if ru != rv:
            comp[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for v in range(s.size):
        groups.setdefault(find(v), []).append(v)
    return [sorted(g) for g in sorted(groups.values())]


def validate_convex_equivalence(s: Structure) -> None:
    """s must be a complete {E,N}-graph, E transitive, < linear and convex."""
    if s.language != EQUIV_LANGUAGE:
        raise InvalidInput("expected the E/N/< language")
    e, nn = s.rels["E"], s.rels["N"]
    for name, rel in (("E", e), ("N", nn)):
        for u, v in rel:
            if u == v:
                raise InvalidInput(f"{name} must be irreflexive, got ({u},{v})")
            if (v, u) not in rel:
                raise InvalidInput(f"{name} must be stored symmetrically at ({u},{v})")
    for u in range(s.size):
        for v in range(u + 1, s.size):
            if ((u, v) in e) == ((u, v) in nn):
                raise InvalidInput(f"pair ({u},{v}) must have exactly one of E, N")
    for u, v in e:
        for w in range(s.size):
            if w not in (u, v) and (v, w) in e and (u, w) not in e:
                raise InvalidInput(f"E not transitive at ({u},{v},{w})")
    if not is_ordered(s):
        raise InvalidInput("< must be a linear order")
    lt = s.rels["<"]
    for group in _equivalence_classes(s):
        inside = set(group)
        for u in group:
            for v in group:
                for w in range(s.size):
                    if w not in inside and (u, w) in lt and (w, v) in lt:
                        raise InvalidInput(f"class {group} is not an interval (split by {w})")


def equivalence_to_imaginary(s: Structure) -> Structure:
    """Add one imaginary vertex per equivalence class; originals keep their
    ids and order, come first, and point to their class via F."""
    validate_convex_equivalence(s)
    lt = s.rels["<"]
    # Convexity makes "all members smaller" a total order on classes; the
    # position of any one member decides it.
    position = {v: sum((w, v) in lt for w in range(s.size)) for v in range(s.size)}
    classes = sorted(_equivalence_classes(s), key=lambda g: position[g[0]])
    n = s.size
    class_vertex = {i: n + i for i in range(len(classes))}
    member_class = {}
    for i, group in enumerate(classes):
        for v in group:
            member_class[v] = i
    size = n + len(classes)
    new_lt = set(lt)
    for v in range(n):
        for i in range(len(classes)):
            new_lt.add((v, class_vertex[i]))
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            new_lt.add((class_vertex[i], class_vertex[j]))
    rels = {
        "O": {(v,) for v in range(n)},
        "I": {(class_vertex[i],) for i in range(len(classes))},
        "<": new_lt,
    }
    funs = {"F": {(v,): [class_vertex[member_class[v]]] for v in range(n)}}
    return Structure(IMAGINARY_LANGUAGE, size, rels, funs)


def imaginary_to_equivalence(s: Structure) -> Structure:
    """Forget the imaginary vertices; originals become a complete {E,N}-graph
    (same class ⟺ E) and keep their order."""
    if s.language != IMAGINARY_LANGUAGE:
        raise InvalidInput("expected the O/I/F/< language")
    originals = sorted(v for (v,) in s.rels["O"])
    imaginaries = {v for (v,) in s.rels["I"]}
    if set(originals) | imaginaries != set(range(s.size)) or set(originals) & imaginaries:
        raise InvalidInput("O and I must partition the vertex set")
    for v in originals:
        if len(s.fun("F", (v,))) != 1 or not s.fun("F", (v,)) <= imaginaries:
            raise InvalidInput(f"F({v}) must be a single imaginary vertex")
    for v in imaginaries:
        if s.fun("F", (v,)):
            raise InvalidInput("imaginary vertices carry no F value")
    old2new = {v: i for i, v in enumerate(originals)}
    e, nn, lt = set(), set(), set()
    for u in originals:
        for v in originals:
            if u == v:
                continue
            same = s.fun("F", (u,)) == s.fun("F", (v,))
            (e if same else nn).add((old2new[u], old2new[v]))
            if (u, v) in s.rels["<"]:
                lt.add((old2new[u], old2new[v]))
    return Structure(EQUIV_LANGUAGE, len(originals), {"E": e, "N": nn, "<": lt})
