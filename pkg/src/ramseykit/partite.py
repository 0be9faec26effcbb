"""Partite systems and the partite-amalgamation construction kit.

A partite system is a structure whose vertices are split into named
partitions, one unary predicate per partition, with an explicit projection.
On top of that this module builds: coordinatewise powers, the partite lemma
(relations generated by parameter-word images) and its induced variant
(full power relations), picture steps that glue free-amalgam extensions onto
the lemma's core, the iterated construction with a full replayable trace,
sparsening with tree-amalgam certificates, and the recursive pipeline that
keeps designated "function-encoding" relations closed throughout.

Vertex-numbering conventions, relied on by traces and tests:
  - powers list partitions in predicate order, each partition's functions in
    lexicographic order of their value tuples;
  - initial pictures are copy-major (one block per embedding of b into the
    target, in lexicographic embedding order);
  - picture steps number the lemma core first, then each free-amalgam
    extension's fresh vertices in canonical parameter-word order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Mapping, Optional, Sequence, Union

from .errors import InvalidInput, RamseykitError, SizeCapExceeded
from .amalgamation import (
    AmalgamationProblem,
    TreeAmalgamSpec,
    TreeJoin,
    TreeLeaf,
    free_amalgam,
    tree_amalgam,
)
from .completion import extend_linear_order
from .halesjewett import enumerate_parameter_words, hj_number
from .structures import (
    EMBEDDING,
    HOM_EMBEDDING,
    U_CLOSED_EMBEDDING,
    _KIND_RANK,
    _closed_subsets,
    EmbeddingMap,
    Language,
    Structure,
    classify_map,
    enumerate_embeddings,
    gaifman_graph,
    image_is_u_closed,
    induced_substructure,
    is_irreducible,
    is_ordered,
)

MODE_FULL = "full"
MODE_WITNESS = "witness"

ENUM_EMBEDDINGS = "embeddings"
ENUM_MONOTONE = "monotone"


class EmptyAlphabet(RamseykitError):
    """The partite lemma got no embeddings of the transversal system."""


class NoEmbeddings(RamseykitError):
    """A construction target admits no copy of the glued structure."""


class MissingWitness(RamseykitError):
    """A tree-likeness check was given no witness for some substructure."""

    def __init__(self, subset):
        self.subset = tuple(sorted(subset))
        super().__init__(f"no tree-amalgam witness supplied for {self.subset}")


@dataclass(frozen=True)
class SizeCaps:
    """Hard limits; constructions abort with SizeCapExceeded instead of thrashing."""

    max_vertices: int = 20000
    max_tuples: int = 500000
    max_steps: int = 256


DEFAULT_CAPS = SizeCaps()


# Partite systems -------------------------------------------------------------


def partite_language(base: Language, predicates: Sequence[str]) -> Language:
    return base.with_relations(tuple((p, 1) for p in predicates))


def _predicate_names(count: int, prefix: str = "p") -> tuple[str, ...]:
    return tuple(f"{prefix}{j}" for j in range(count))


@dataclass(frozen=True)
class PartiteSystem:
    """A structure over base_language plus one unary predicate per partition.

    projection[v] names the partition holding vertex v; the predicate
    relations are expected to agree with it (validate_partite checks).
    """

    base_language: Language
    predicates: tuple[str, ...]
    structure: Structure
    projection: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "predicates", tuple(self.predicates))
        object.__setattr__(self, "projection", tuple(str(p) for p in self.projection))
        if self.structure.language != partite_language(self.base_language, self.predicates):
            raise InvalidInput("structure language must be the base language plus the predicates")
        if len(self.projection) != self.structure.size:
            raise InvalidInput("projection length differs from vertex count")
        known = set(self.predicates)
        for p in self.projection:
            if p not in known:
                raise InvalidInput(f"projection names unknown predicate {p!r}")

    @property
    def size(self) -> int:
        return self.structure.size

    def partition(self, predicate: str) -> tuple[int, ...]:
        return tuple(v for v in range(self.size) if self.projection[v] == predicate)

    def l_reduct(self) -> Structure:
        rels = {n: self.structure.rels[n] for n in self.base_language.relation_names}
        funs = {n: self.structure.funs[n] for n in self.base_language.function_names}
        return Structure(self.base_language, self.size, rels, funs)

    def positions(self) -> tuple[int, ...]:
        """Projection as predicate indices (vertex i of a target structure)."""
        index = {p: j for j, p in enumerate(self.predicates)}
        return tuple(index[p] for p in self.projection)


def make_partite_system(
    base_language: Language,
    predicates: Sequence[str],
    projection: Sequence[str],
    rels: Optional[Mapping] = None,
    funs: Optional[Mapping] = None,
) -> PartiteSystem:
    """Assemble a system, deriving the predicate contents from the projection."""
    predicates = tuple(predicates)
    projection = tuple(str(p) for p in projection)
    contents = dict(rels or {})
    for p in predicates:
        contents[p] = [(v,) for v in range(len(projection)) if projection[v] == p]
    s = Structure(partite_language(base_language, predicates), len(projection), contents, funs)
    return PartiteSystem(base_language, predicates, s, projection)


@dataclass(frozen=True)
class PartiteReport:
    valid: bool
    transversal: bool
    problems: tuple[str, ...]


def validate_partite(
    b: PartiteSystem,
    over: Optional[Structure] = None,
    u_symbols: Optional[Sequence[str]] = None,
) -> PartiteReport:
    """Check unique membership, tuple transversality, the projection property
    over a target, and transversality of designated value sets."""
    s = b.structure
    problems: list[str] = []
    for v in range(s.size):
        holding = [p for p in b.predicates if (v,) in s.rels[p]]
        if holding != [b.projection[v]]:
            problems.append(
                f"vertex {v} lies in predicates {holding}, projection says {b.projection[v]!r}"
            )
    base_symbols = set(b.base_language.relation_names) | set(b.base_language.function_names)
    for name, t in s.entries():
        if name not in base_symbols:
            continue
        by_part: dict[str, int] = {}
        clash = None
        for x in set(t):
            p = b.projection[x]
            if p in by_part:
                clash = p
                break
            by_part[p] = x
        if clash is not None:
            problems.append(f"{name} entry {t} meets partition {clash!r} twice")
    if over is not None:
        if len(b.predicates) != over.size:
            problems.append(
                f"{len(b.predicates)} predicates against a target on {over.size} vertices"
            )
        else:
            kind = classify_map(b.positions(), b.l_reduct(), over)
            if kind is None or _KIND_RANK[kind] < _KIND_RANK[HOM_EMBEDDING]:
                problems.append(f"projection classifies as {kind}, not a homomorphism-embedding")
    for name in u_symbols or ():
        if s.language.is_relation(name):
            if s.language.arity(name) < 2:
                raise InvalidInput(f"designated symbol {name!r} must have arity >= 2")
            groups: dict[tuple[int, ...], set[int]] = {}
            for t in s.rels[name]:
                groups.setdefault(t[:-1], set()).add(t[-1])
        elif s.language.is_function(name):
            groups = {args: set(value) for args, value in s.funs[name].items()}
        else:
            raise InvalidInput(f"designated symbol {name!r} not in the language")
        for prefix in sorted(groups):
            values = groups[prefix]
            parts = [b.projection[v] for v in values]
            if len(set(parts)) != len(parts):
                problems.append(
                    f"{name} values {sorted(values)} at {prefix} are not transversal"
                )
    transversal = s.size == len(b.predicates) and len(set(b.projection)) == s.size
    return PartiteReport(not problems, transversal, tuple(problems))


# Powers ----------------------------------------------------------------------


def _power_vertices(b: PartiteSystem, n: int) -> list[tuple[str, tuple[int, ...]]]:
    verts = []
    for p in b.predicates:
        part = b.partition(p)
        verts.extend((p, f) for f in product(part, repeat=n))
    return verts


def power(b: PartiteSystem, n: int, caps: SizeCaps = DEFAULT_CAPS) -> PartiteSystem:
    """Coordinatewise power: partition p becomes all functions n -> B_p.

    A tuple is in a relation iff every coordinate slice is; function values
    are the functions picking a member value at every coordinate.
    """
    if n < 1:
        raise InvalidInput(f"power needs n >= 1, got {n}")
    report = validate_partite(b)
    if not report.valid:
        raise InvalidInput("power needs a valid partite system: " + report.problems[0])
    total = sum(len(b.partition(p)) ** n for p in b.predicates)
    if total > caps.max_vertices:
        raise SizeCapExceeded(f"power would have {total} vertices", caps.max_vertices)
    verts = _power_vertices(b, n)
    index = {pv: i for i, pv in enumerate(verts)}
    projection = tuple(p for p, _ in verts)
    s = b.structure

    def lift(pattern: tuple[str, ...], choices: Sequence[tuple[int, ...]]) -> tuple[int, ...]:
        return tuple(
            index[(pattern[j], tuple(c[j] for c in choices))] for j in range(len(pattern))
        )

    rels: dict[str, list[tuple[int, ...]]] = {}
    budget = caps.max_tuples
    for name in b.base_language.relation_names:
        by_pattern: dict[tuple[str, ...], list[tuple[int, ...]]] = {}
        for t in s.rels[name]:
            by_pattern.setdefault(tuple(b.projection[x] for x in t), []).append(t)
        out = []
        for pattern in sorted(by_pattern):
            cls = sorted(by_pattern[pattern])
            budget -= len(cls) ** n
            if budget < 0:
                raise SizeCapExceeded(f"power relation {name} exceeds the tuple cap", caps.max_tuples)
            for choices in product(cls, repeat=n):
                out.append(lift(pattern, choices))
        rels[name] = out

    funs: dict[str, dict[tuple[int, ...], set[int]]] = {}
    part_sets = {p: set(b.partition(p)) for p in b.predicates}
    for name in b.base_language.function_names:
        by_pattern = {}
        for args in s.funs[name]:
            by_pattern.setdefault(tuple(b.projection[x] for x in args), []).append(args)
        entries: dict[tuple[int, ...], set[int]] = {}
        for pattern in sorted(by_pattern):
            cls = sorted(by_pattern[pattern])
            for choices in product(cls, repeat=n):
                values: set[int] = set()
                for p in b.predicates:
                    slots = [sorted(set(s.funs[name][c]) & part_sets[p]) for c in choices]
                    if all(slots):
                        values.update(index[(p, f)] for f in product(*slots))
                if values:
                    entries[lift(pattern, choices)] = values
        funs[name] = entries

    return make_partite_system(b.base_language, b.predicates, projection, rels, funs)


# The partite lemma and its induced variant -----------------------------------


@dataclass
class PartiteWitnesses:
    """The lemma's embeddings, keyed by letter tuples over the alphabet.

    Words are tuples of alphabet indices; parameter words use None at
    parameter positions.  The law f_W o phi = e_{W(phi)} holds throughout.
    """

    alphabet: tuple[EmbeddingMap, ...]
    word_embeddings: dict[tuple[int, ...], EmbeddingMap]
    pword_embeddings: dict[tuple[Optional[int], ...], EmbeddingMap]


@dataclass
class PartiteLemmaResult:
    system: PartiteSystem
    witnesses: PartiteWitnesses
    mode: str
    exponent: int


@lru_cache(maxsize=None)
def _full_mode_threshold(sigma_size: int) -> Optional[int]:
    """Least exponent that certifies the full pigeonhole, when cheap to know."""
    if sigma_size <= 2:
        return hj_number(sigma_size, 2)
    return None


RELATIONS_GENERATED = "generated"
RELATIONS_POWER = "power"


def _lemma_core(
    a_sys: PartiteSystem,
    b_sys: PartiteSystem,
    n: int,
    relation_mode: str,
    u_symbols: Optional[Sequence[str]],
    caps: SizeCaps,
) -> PartiteLemmaResult:
    """Shared engine: power vertex set; relations either the full power
    relations or exactly the parameter-word images of b's tuples."""
    if n < 1:
        raise InvalidInput(f"exponent must be >= 1, got {n}")
    sigma = enumerate_embeddings(a_sys.structure, b_sys.structure, u_closed=u_symbols or None)
    if not sigma:
        raise EmptyAlphabet("no embeddings of the transversal system into the compound")
    k = len(sigma)

    verts = _power_vertices(b_sys, n)
    if len(verts) > caps.max_vertices:
        raise SizeCapExceeded(f"core would have {len(verts)} vertices", caps.max_vertices)
    index = {pv: i for i, pv in enumerate(verts)}
    projection = tuple(p for p, _ in verts)
    av = {a_sys.projection[v]: v for v in range(a_sys.size)}

    def word_map(letters: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(
            index[(a_sys.projection[v], tuple(sigma[c].map[v] for c in letters))]
            for v in range(a_sys.size)
        )

    def pword_map(letters: tuple[Optional[int], ...]) -> tuple[int, ...]:
        out = []
        for u in range(b_sys.size):
            p = b_sys.projection[u]
            coord = tuple(u if c is None else sigma[c].map[av[p]] for c in letters)
            out.append(index[(p, coord)])
        return tuple(out)

    words = list(product(range(k), repeat=n))
    pwords = [w.letters for w in enumerate_parameter_words(k, n)]

    if relation_mode == RELATIONS_POWER:
        c_sys = power(b_sys, n, caps)
    elif relation_mode == RELATIONS_GENERATED:
        rels: dict[str, set[tuple[int, ...]]] = {
            name: set() for name in b_sys.base_language.relation_names
        }
        funs: dict[str, dict[tuple[int, ...], set[int]]] = {
            name: {} for name in b_sys.base_language.function_names
        }
        budget = caps.max_tuples
        for letters in pwords:
            f = pword_map(letters)
            for name in b_sys.base_language.relation_names:
                content = rels[name]
                budget -= len(b_sys.structure.rels[name])
                if budget < 0:
                    raise SizeCapExceeded("generated relations exceed the tuple cap", caps.max_tuples)
                content.update(tuple(f[x] for x in t) for t in b_sys.structure.rels[name])
            for name in b_sys.base_language.function_names:
                for args, value in b_sys.structure.funs[name].items():
                    image = tuple(f[x] for x in args)
                    funs[name].setdefault(image, set()).update(f[v] for v in value)
        c_sys = make_partite_system(b_sys.base_language, b_sys.predicates, projection, rels, funs)
    else:
        raise InvalidInput(f"unknown relation mode {relation_mode!r}")

    expected = U_CLOSED_EMBEDDING if u_symbols else EMBEDDING

    def certify(m: tuple[int, ...], source: Structure) -> EmbeddingMap:
        kind = classify_map(m, source, c_sys.structure, u_symbols=u_symbols)
        assert kind is not None and _KIND_RANK[kind] >= _KIND_RANK[expected], (
            f"witness {m} classifies as {kind}, wanted at least {expected}"
        )
        return EmbeddingMap(source, c_sys.structure, m, kind)

    word_embeddings = {w: certify(word_map(w), a_sys.structure) for w in words}
    pword_embeddings = {w: certify(pword_map(w), b_sys.structure) for w in pwords}

    threshold = _full_mode_threshold(k)
    mode = MODE_FULL if threshold is not None and n >= threshold else MODE_WITNESS
    witnesses = PartiteWitnesses(tuple(sigma), word_embeddings, pword_embeddings)
    return PartiteLemmaResult(c_sys, witnesses, mode, n)


def partite_lemma(
    a: PartiteSystem,
    b: PartiteSystem,
    n: int,
    caps: SizeCaps = DEFAULT_CAPS,
) -> PartiteLemmaResult:
    """Core with relations generated by the parameter-word images only.

    The full coloring guarantee needs an exponent reaching the pigeonhole
    threshold for the alphabet size; the result's mode records whether that
    is certain (full) or delegated to an external check (witness).
    """
    if a.base_language != b.base_language or a.predicates != b.predicates:
        raise InvalidInput("both systems must share the base language and predicate list")
    ra = validate_partite(a)
    if not ra.valid or not ra.transversal:
        raise InvalidInput("the first argument must be a valid transversal system")
    rb = validate_partite(b)
    if not rb.valid:
        raise InvalidInput("invalid compound system: " + rb.problems[0])
    return _lemma_core(a, b, n, RELATIONS_GENERATED, None, caps)


def _transversal_over(a: Structure, predicates: Sequence[str]) -> PartiteSystem:
    """The system putting vertex i of a into the i-th predicate."""
    if a.size != len(predicates):
        raise InvalidInput("need exactly one predicate per vertex")
    return make_partite_system(
        a.language, predicates, tuple(predicates), rels=a.rels, funs=a.funs
    )


def induced_partite_lemma(
    a: Structure,
    b: PartiteSystem,
    n: int,
    u_symbols: Optional[Sequence[str]] = None,
    caps: SizeCaps = DEFAULT_CAPS,
) -> PartiteLemmaResult:
    """Core = the full power of b; alphabet = projection-respecting embeddings.

    With u_symbols the alphabet keeps only closed embeddings and every
    witness is certified closed; b must then have transversal value sets.
    """
    if a.language != b.base_language:
        raise InvalidInput("the anchor must be over the system's base language")
    report = validate_partite(b, over=a, u_symbols=u_symbols)
    if not report.valid:
        raise InvalidInput("invalid system over the anchor: " + report.problems[0])
    a_sys = _transversal_over(a, b.predicates)
    result = _lemma_core(a_sys, b, n, RELATIONS_POWER, u_symbols, caps)
    if u_symbols:
        check = validate_partite(result.system, over=a, u_symbols=u_symbols)
        assert check.valid, f"power lost value-set transversality: {check.problems}"
    return result


# Picture steps ---------------------------------------------------------------


@dataclass
class PictureStep:
    """One free-amalgamation round: the record needed to replay it."""

    alpha_positions: tuple[int, ...]
    alpha: Optional[EmbeddingMap]
    exponent: int
    mode: str
    core_size: int
    inner_vertices: tuple[int, ...]
    extensions: dict[tuple[Optional[int], ...], EmbeddingMap]


@dataclass
class PictureResult:
    system: PartiteSystem
    step: PictureStep
    mode: str


def _picture_step(
    a: Structure,
    b_sys: PartiteSystem,
    alpha_positions: tuple[int, ...],
    policy: Callable[[int], int],
    relation_mode: str,
    u_symbols: Optional[Sequence[str]],
    alpha_closed: bool,
    caps: SizeCaps,
    alpha_emb: Optional[EmbeddingMap] = None,
    vacuous_ok: bool = False,
) -> tuple[PartiteSystem, PictureStep, str]:
    """Restrict to the partitions alpha hits, run the lemma core, then glue a
    fresh copy of the compound over every parameter-word embedding.

    A placement whose restriction meets no copy of the anchor has nothing to
    force; with vacuous_ok the picture comes back unchanged, recorded as a
    step of exponent 0 with no extensions.
    """
    pred_index = {p: j for j, p in enumerate(b_sys.predicates)}
    hit = set(alpha_positions)
    if len(hit) != len(alpha_positions):
        raise InvalidInput("alpha must be injective on predicate positions")
    inner = tuple(
        v for v in range(b_sys.size) if pred_index[b_sys.projection[v]] in hit
    )
    inner_set = set(inner)
    bprime_struct, _ = induced_substructure(b_sys.structure, inner)

    # Rebuild the restriction as a system over the anchor's own predicates.
    inner_names = _predicate_names(a.size, prefix="t")
    back = {alpha_positions[j]: j for j in range(a.size)}
    reduct = {
        name: [t for t in bprime_struct.rels[name]]
        for name in b_sys.base_language.relation_names
    }
    refuns = {
        name: bprime_struct.funs[name] for name in b_sys.base_language.function_names
    }
    inner_proj = tuple(
        inner_names[back[pred_index[b_sys.projection[v]]]] for v in inner
    )
    bprime_sys = make_partite_system(b_sys.base_language, inner_names, inner_proj, reduct, refuns)
    a_sys = _transversal_over(a, inner_names)
    try:
        n = policy(_alphabet_size(a_sys, bprime_sys, u_symbols))
    except EmptyAlphabet:
        if not vacuous_ok:
            raise
        step = PictureStep(
            alpha_positions=tuple(alpha_positions),
            alpha=alpha_emb,
            exponent=0,
            mode=MODE_FULL,
            core_size=b_sys.size,
            inner_vertices=inner,
            extensions={},
        )
        return b_sys, step, MODE_FULL
    core = _lemma_core(a_sys, bprime_sys, n, relation_mode, u_symbols, caps)

    # Re-house the core over the original predicate list.
    core_proj = tuple(
        b_sys.predicates[alpha_positions[inner_names.index(p)]]
        for p in core.system.projection
    )
    current = make_partite_system(
        b_sys.base_language,
        b_sys.predicates,
        core_proj,
        {name: core.system.structure.rels[name] for name in b_sys.base_language.relation_names},
        {name: core.system.structure.funs[name] for name in b_sys.base_language.function_names},
    )
    projection = list(current.projection)
    struct = current.structure

    appended = [v for v in range(b_sys.size) if v not in inner_set]
    ext_maps: dict[tuple[Optional[int], ...], tuple[int, ...]] = {}
    for letters, f_w in core.witnesses.pword_embeddings.items():
        if u_symbols and not image_is_u_closed(f_w.image(), struct, u_symbols):
            continue
        if struct.size + len(appended) > caps.max_vertices:
            raise SizeCapExceeded("picture exceeds the vertex cap", caps.max_vertices)
        problem = AmalgamationProblem(
            bprime_struct,
            struct,
            b_sys.structure,
            EmbeddingMap(bprime_struct, struct, f_w.map, EMBEDDING),
            EmbeddingMap(bprime_struct, b_sys.structure, inner, EMBEDDING),
        )
        struct, _, beta2 = free_amalgam(problem)
        ext_maps[letters] = beta2.map
        projection.extend(b_sys.projection[v] for v in appended)

    result = PartiteSystem(b_sys.base_language, b_sys.predicates, struct, tuple(projection))
    extensions: dict[tuple[Optional[int], ...], EmbeddingMap] = {}
    wanted = U_CLOSED_EMBEDDING if (u_symbols and alpha_closed) else EMBEDDING
    for letters, m in ext_maps.items():
        kind = classify_map(m, b_sys.structure, struct, u_symbols=u_symbols)
        assert kind is not None and _KIND_RANK[kind] >= _KIND_RANK[wanted], (
            f"extension {letters} classifies as {kind}, wanted at least {wanted}"
        )
        extensions[letters] = EmbeddingMap(b_sys.structure, struct, m, kind)

    step = PictureStep(
        alpha_positions=tuple(alpha_positions),
        alpha=alpha_emb,
        exponent=core.exponent,
        mode=core.mode,
        core_size=core.system.size,
        inner_vertices=inner,
        extensions=extensions,
    )
    return result, step, core.mode


def _alphabet_size(
    a_sys: PartiteSystem, b_sys: PartiteSystem, u_symbols: Optional[Sequence[str]]
) -> int:
    sigma = enumerate_embeddings(a_sys.structure, b_sys.structure, u_closed=u_symbols or None)
    if not sigma:
        raise EmptyAlphabet("no embeddings of the transversal system into the compound")
    return len(sigma)


def picture_lemma(
    a: Structure,
    d: Structure,
    b: PartiteSystem,
    alpha: EmbeddingMap,
    n: int,
    u_symbols: Optional[Sequence[str]] = None,
    caps: SizeCaps = DEFAULT_CAPS,
) -> PictureResult:
    """One picture step over an explicit target, with input validation."""
    report = validate_partite(b, over=d, u_symbols=u_symbols)
    if not report.valid:
        raise InvalidInput("invalid system over the target: " + report.problems[0])
    if alpha.source is not a or alpha.target is not d:
        raise InvalidInput("alpha must map the anchor into the target")
    if not alpha.verify():
        raise InvalidInput("alpha is not a certified embedding")
    closed = bool(u_symbols) and image_is_u_closed(alpha.image(), d, u_symbols)
    system, step, mode = _picture_step(
        a,
        b,
        alpha.map,
        lambda _sigma: n,
        RELATIONS_POWER,
        u_symbols,
        closed,
        caps,
        alpha_emb=alpha,
    )
    return PictureResult(system, step, mode)


# The iterated construction ----------------------------------------------------


@dataclass
class ConstructionTrace:
    target: Structure
    pictures: tuple[PartiteSystem, ...]
    steps: tuple[PictureStep, ...]


@dataclass
class ConstructionResult:
    trace: ConstructionTrace
    final: Structure
    mode: str


def _normalize_policy(n_policy) -> Callable[[int], int]:
    if callable(n_policy):
        return n_policy
    if isinstance(n_policy, int):
        if n_policy < 1:
            raise InvalidInput(f"exponent policy must be >= 1, got {n_policy}")
        return lambda _sigma: n_policy
    if n_policy == "hj":
        return lambda sigma: _full_mode_threshold(sigma) or 1
    raise InvalidInput(f"unusable exponent policy {n_policy!r}")


def _initial_picture(
    b: Structure,
    beta_maps: Sequence[tuple[int, ...]],
    predicates: tuple[str, ...],
    caps: SizeCaps,
) -> PartiteSystem:
    """Copy-major disjoint union, one copy of b per placement map."""
    copies = len(beta_maps)
    if copies * b.size > caps.max_vertices:
        raise SizeCapExceeded("initial picture exceeds the vertex cap", caps.max_vertices)
    rels = {name: [] for name in b.language.relation_names}
    funs: dict[str, dict[tuple[int, ...], list[int]]] = {
        name: {} for name in b.language.function_names
    }
    projection = []
    for c, beta in enumerate(beta_maps):
        off = c * b.size
        projection.extend(predicates[beta[v]] for v in range(b.size))
        for name in b.language.relation_names:
            rels[name].extend(tuple(off + x for x in t) for t in b.rels[name])
        for name in b.language.function_names:
            for args, value in b.funs[name].items():
                funs[name][tuple(off + x for x in args)] = [off + v for v in value]
    return make_partite_system(b.language, predicates, tuple(projection), rels, funs)


def _order_ranks(s: Structure) -> tuple[int, ...]:
    """rank[v] = position of v in the linear order "<" of s."""
    if not is_ordered(s):
        raise InvalidInput("a linear order on every vertex is required here")
    below = [0] * s.size
    for u, v in s.rels["<"]:
        below[v] += 1
    return tuple(below)


def induced_construction(
    a: Structure,
    b: Structure,
    d: Union[Structure, int],
    n_policy,
    enumeration: str = ENUM_EMBEDDINGS,
    caps: SizeCaps = DEFAULT_CAPS,
) -> ConstructionResult:
    """Iterate picture steps over a target, one per placement of the anchor.

    enumeration="embeddings": placements are embeddings a -> d that extend to
    a copy of b, the initial picture has one copy of b per embedding b -> d,
    and cores carry full power relations.
    enumeration="monotone": placements are order-preserving injections into
    the predicate positions (d may be a bare position count), and cores carry
    only the generated relations.
    """
    policy = _normalize_policy(n_policy)
    if enumeration == ENUM_EMBEDDINGS:
        if not isinstance(d, Structure):
            raise InvalidInput("this enumeration needs a target structure")
        if a.language != b.language or b.language != d.language:
            raise InvalidInput("anchor, compound, and target must share a language")
        predicates = _predicate_names(d.size)
        betas = enumerate_embeddings(b, d)
        if not betas:
            raise NoEmbeddings("the target contains no copy of the compound")
        beta_sets = [set(e.map) for e in betas]
        alphas = [
            (e.map, e)
            for e in enumerate_embeddings(a, d)
            if any(set(e.map) <= s for s in beta_sets)
        ]
        beta_maps = [e.map for e in betas]
        relation_mode = RELATIONS_POWER
        target = d
    elif enumeration == ENUM_MONOTONE:
        if a.language != b.language:
            raise InvalidInput("anchor and compound must share a language")
        count = d.size if isinstance(d, Structure) else int(d)
        if count < b.size:
            raise NoEmbeddings("fewer positions than compound vertices")
        predicates = _predicate_names(count)
        rank_a = _order_ranks(a)
        rank_b = _order_ranks(b)
        beta_maps = [
            tuple(t[rank_b[v]] for v in range(b.size))
            for t in combinations(range(count), b.size)
        ]
        alphas = [
            (tuple(t[rank_a[v]] for v in range(a.size)), None)
            for t in combinations(range(count), a.size)
        ]
        relation_mode = RELATIONS_GENERATED
        target = _positions_structure(a.language, count)
    else:
        raise InvalidInput(f"unknown enumeration {enumeration!r}")

    if len(alphas) > caps.max_steps:
        raise SizeCapExceeded(f"{len(alphas)} picture steps", caps.max_steps)
    current = _initial_picture(b, beta_maps, predicates, caps)
    pictures = [current]
    steps = []
    modes = []
    for positions, emb in alphas:
        current, step, mode = _picture_step(
            a, current, positions, policy, relation_mode, None, False, caps,
            alpha_emb=emb, vacuous_ok=True,
        )
        pictures.append(current)
        steps.append(step)
        modes.append(mode)
    overall = MODE_FULL if all(m == MODE_FULL for m in modes) else MODE_WITNESS
    trace = ConstructionTrace(target, tuple(pictures), tuple(steps))
    return ConstructionResult(trace, pictures[-1].l_reduct(), overall)


def _positions_structure(language: Language, count: int) -> Structure:
    """Bare predicate positions with their natural order, other symbols empty."""
    rels = {}
    if language.is_relation("<"):
        rels["<"] = [(i, j) for i in range(count) for j in range(count) if i < j]
    return Structure(language, count, rels)


def trace_lines(result: ConstructionResult) -> tuple[str, ...]:
    """Replayable text form of a trace; equal traces render identically."""
    lines = [
        "trace v1",
        f"target {result.trace.target.size}",
        f"mode {result.mode}",
        f"pictures {' '.join(str(p.size) for p in result.trace.pictures)}",
    ]
    for i, step in enumerate(result.trace.steps):
        lines.append(
            f"step {i} alpha {','.join(map(str, step.alpha_positions))}"
            f" exponent {step.exponent} mode {step.mode}"
            f" core {step.core_size}"
            f" inner {','.join(map(str, step.inner_vertices))}"
        )
        for letters, emb in step.extensions.items():
            word = ".".join("*" if x is None else str(x) for x in letters)
            lines.append(f"  extend {word} {','.join(map(str, emb.map))}")
    lines.append(f"final {result.final.size}")
    return tuple(lines)


# Sparsening -------------------------------------------------------------------


@dataclass
class TreeWitness:
    """A tree-amalgam recipe plus a map of the substructure into its evaluation."""

    spec: TreeAmalgamSpec
    map: tuple[int, ...]


@dataclass
class SparsenResult:
    structure: Structure
    certificate: EmbeddingMap
    traces: tuple[ConstructionTrace, ...]
    tree_witnesses: dict[tuple[int, ...], TreeWitness]
    extension_certificates: dict[tuple[int, ...], EmbeddingMap]
    mode: str


def _irreducible_subsets(s: Structure) -> list[tuple[int, ...]]:
    """Nonempty vertex sets inducing irreducible substructures, size then lex."""
    if s.language.is_relational():
        g = gaifman_graph(s)
        adj = {v: set() for v in range(s.size)}
        for u, v in g.rels["E"]:
            adj[u].add(v)
        out: list[tuple[int, ...]] = []

        def grow(base: tuple[int, ...], cands: set[int]):
            for v in sorted(cands):
                cur = base + (v,)
                out.append(cur)
                grow(cur, {w for w in cands & adj[v] if w > v})

        grow((), set(range(s.size)))
    else:
        out = []
        for sub in _closed_subsets(s):
            if not sub:
                continue
            part, _ = induced_substructure(s, sub)
            if is_irreducible(part)[0]:
                out.append(sub)
    return sorted(out, key=lambda t: (len(t), t))


@dataclass
class _Partial:
    """A recipe node together with its evaluation and a map into it."""

    recipe: Union[TreeJoin, TreeLeaf]
    result: Structure
    fmap: dict[int, int]


def _leaf_partial(b: Structure, fmap: dict[int, int]) -> _Partial:
    return _Partial(TreeLeaf(), b, fmap)


def _join_partials(
    ambient: Structure, left: _Partial, right: _Partial, shared: Sequence[int]
) -> _Partial:
    shared = sorted(shared)
    overlap, _ = induced_substructure(ambient, shared)
    f1 = tuple(left.fmap[v] for v in shared)
    f2 = tuple(right.fmap[v] for v in shared)
    recipe = TreeJoin(overlap, left.recipe, right.recipe, f1, f2)
    problem = AmalgamationProblem(
        overlap,
        left.result,
        right.result,
        EmbeddingMap(overlap, left.result, f1, EMBEDDING),
        EmbeddingMap(overlap, right.result, f2, EMBEDDING),
    )
    merged, beta1, beta2 = free_amalgam(problem)
    fmap = {v: beta1.map[i] for v, i in left.fmap.items()}
    fmap.update({v: beta2.map[i] for v, i in right.fmap.items()})
    return _Partial(recipe, merged, fmap)


class _WitnessBuilder:
    """Tree-amalgam witnesses for small substructures of an iterated output.

    Implements the case analysis over the stored traces: collapse through the
    projection, pull back along a glued copy, read a core off the placement
    that spawned it, or split along one copy and rejoin the halves.
    """

    def __init__(self, a: Structure, b: Structure, levels: list[Structure],
                 traces: list[ConstructionTrace]):
        self.a = a
        self.b = b
        self.levels = levels  # levels[i] = the i-th iterate, levels[0] the root
        self.traces = traces  # traces[i] built levels[i+1] over levels[i]
        self._betas: dict[int, list[EmbeddingMap]] = {}

    def beta_into(self, i: int) -> list[EmbeddingMap]:
        if i not in self._betas:
            self._betas[i] = enumerate_embeddings(self.b, self.levels[i])
        return self._betas[i]

    def level(self, i: int, subset: tuple[int, ...]) -> _Partial:
        if not subset:
            return _leaf_partial(self.b, {})
        assert i >= 1, f"substructure {subset} survives to the construction root"
        trace = self.traces[i - 1]
        partial = self.picture(i, len(trace.steps), subset)
        return self._cover(self.levels[i], partial, subset)

    def picture(self, i: int, j: int, subset: tuple[int, ...]) -> _Partial:
        trace = self.traces[i - 1]
        ps = trace.pictures[j]
        ambient = ps.l_reduct()
        if j == 0:
            # Disjoint copies: per-copy leaves joined over nothing.
            k = self.b.size
            groups: dict[int, list[int]] = {}
            for v in subset:
                groups.setdefault(v // k, []).append(v)
            parts = [
                _leaf_partial(self.b, {v: v % k for v in groups[c]})
                for c in sorted(groups)
            ]
            out = parts[0]
            for nxt in parts[1:]:
                out = _join_partials(ambient, out, nxt, [])
            return out

        step = trace.steps[j - 1]
        prev = trace.pictures[j - 1]
        proj = ps.positions()

        collapsed = sorted({proj[v] for v in subset})
        if len(collapsed) < len(subset):
            sub = self.level(i - 1, tuple(collapsed))
            return _Partial(sub.recipe, sub.result, {v: sub.fmap[proj[v]] for v in subset})

        for letters in step.extensions:
            image = step.extensions[letters].map
            if set(subset) <= set(image):
                back = {image[v]: v for v in range(prev.size)}
                sub = self.picture(i, j - 1, tuple(sorted(back[v] for v in subset)))
                return _Partial(sub.recipe, sub.result, {v: sub.fmap[back[v]] for v in subset})

        if all(v < step.core_size for v in subset):
            # The whole piece projects into the placement, hence into one copy.
            beta = next(
                e for e in self.beta_into(i - 1)
                if set(step.alpha_positions) <= set(e.map)
            )
            back = {e: w for w, e in enumerate(beta.map)}
            return _leaf_partial(self.b, {v: back[proj[v]] for v in subset})

        block = prev.size - len(step.inner_vertices)
        fresh = [v for v in subset if v >= step.core_size]
        owner = (fresh[0] - step.core_size) // block
        letters = list(step.extensions)[owner]
        image = set(step.extensions[letters].map)
        lo = step.core_size + owner * block
        hi = lo + block
        e_part = tuple(sorted(set(subset) & image))
        f_part = tuple(sorted(v for v in subset if not lo <= v < hi))
        shared = sorted(set(e_part) & set(f_part))
        left = self._through_target(i, proj, e_part)
        right = self._through_target(i, proj, f_part)
        if shared:
            left = self._cover(ambient, left, e_part)
            right = self._cover(ambient, right, f_part)
        return _join_partials(ambient, left, right, shared)

    def _through_target(self, i: int, proj: tuple[int, ...], subset: tuple[int, ...]) -> _Partial:
        sub = self.level(i - 1, tuple(sorted({proj[v] for v in subset})))
        return _Partial(sub.recipe, sub.result, {v: sub.fmap[proj[v]] for v in subset})

    def _cover(self, ambient: Structure, partial: _Partial, subset: Sequence[int]) -> _Partial:
        """Glue copies of b until every placed piece of a sits inside a copy of a."""
        subset = sorted(subset)
        e0 = None
        for size in range(1, min(len(subset), self.a.size) + 1):
            for s in combinations(subset, size):
                piece, _ = induced_substructure(ambient, s)
                hs = enumerate_embeddings(piece, self.a)
                if not hs:
                    continue
                placed = {partial.fmap[v] for v in s}
                if any(placed <= set(e.map) for e in enumerate_embeddings(self.a, partial.result)):
                    continue
                if e0 is None:
                    embs = enumerate_embeddings(self.a, self.b)
                    assert embs, "cannot cover placements: b contains no copy of a"
                    e0 = embs[0]
                pins = sorted(placed)
                base, old2new = induced_substructure(partial.result, pins)
                # Identify the placed piece with its copy inside a fresh b.
                spot = {partial.fmap[v]: e0.map[hs[0].map[s.index(v)]] for v in s}
                problem = AmalgamationProblem(
                    base,
                    partial.result,
                    self.b,
                    EmbeddingMap(base, partial.result, pins, EMBEDDING),
                    EmbeddingMap(base, self.b, tuple(spot[p] for p in pins), EMBEDDING),
                )
                merged, beta1, beta2 = free_amalgam(problem)
                recipe = TreeJoin(
                    base,
                    partial.recipe,
                    TreeLeaf(),
                    tuple(pins),
                    tuple(spot[p] for p in pins),
                )
                fmap = {v: beta1.map[i] for v, i in partial.fmap.items()}
                partial = _Partial(recipe, merged, fmap)
        return partial


def sparsen(
    a: Structure,
    b: Structure,
    c0: Structure,
    n: int,
    n_policy,
    caps: SizeCaps = DEFAULT_CAPS,
) -> SparsenResult:
    """Iterate the construction n times, then glue a copy of b over every
    irreducible substructure; certify the projection, the copies, and a
    tree-amalgam witness for every substructure on at most n vertices."""
    irr, split = is_irreducible(a)
    if not irr:
        raise InvalidInput(f"the anchor must be irreducible, found split {split}")
    if n < 0:
        raise InvalidInput(f"need n >= 0, got {n}")
    if n == 0:
        ident = EmbeddingMap(c0, c0, tuple(range(c0.size)), EMBEDDING)
        return SparsenResult(c0, ident, (), {}, {}, MODE_FULL)

    levels = [c0]
    traces: list[ConstructionTrace] = []
    modes = []
    for _ in range(n):
        res = induced_construction(a, b, levels[-1], n_policy, caps=caps)
        traces.append(res.trace)
        levels.append(res.final)
        modes.append(res.mode)

    # Compose the per-iteration projections down to the root.
    total = list(range(levels[-1].size))
    for trace in reversed(traces):
        proj = trace.pictures[-1].positions()
        total = [proj[v] for v in total]

    cn = levels[-1]
    builder = _WitnessBuilder(a, b, levels, traces)
    root_betas = enumerate_embeddings(b, c0)

    current = cn
    total_map = list(total)
    glue_records: list[tuple[tuple[int, ...], tuple[int, ...], int]] = []
    for e_verts in _irreducible_subsets(cn):
        shadow = [total_map[v] for v in e_verts]
        beta = next(
            (be for be in root_betas if set(shadow) <= set(be.map)), None
        )
        assert beta is not None, f"irreducible {e_verts} projects outside every copy"
        back = {img: w for w, img in enumerate(beta.map)}
        base, _ = induced_substructure(current, e_verts)
        if current.size + b.size - len(e_verts) > caps.max_vertices:
            raise SizeCapExceeded("sparsening exceeds the vertex cap", caps.max_vertices)
        problem = AmalgamationProblem(
            base,
            current,
            b,
            EmbeddingMap(base, current, e_verts, EMBEDDING),
            EmbeddingMap(base, b, tuple(back[total_map[v]] for v in e_verts), EMBEDDING),
        )
        current, _, beta2 = free_amalgam(problem)
        fresh_start = current.size - (b.size - len(e_verts))
        glue_records.append((e_verts, beta2.map, fresh_start))
        total_map.extend(
            beta.map[v] for v in range(b.size)
            if beta2.map[v] >= fresh_start
        )

    kind = classify_map(total_map, current, c0)
    assert kind is not None and _KIND_RANK[kind] >= _KIND_RANK[HOM_EMBEDDING], (
        f"composed projection classifies as {kind}"
    )
    certificate = EmbeddingMap(current, c0, tuple(total_map), kind)

    fresh_owner: dict[int, int] = {}
    for idx, (_, m, fresh_start) in enumerate(glue_records):
        for v in m:
            if v >= fresh_start:
                fresh_owner[v] = idx

    def final_witness(subset: tuple[int, ...]) -> _Partial:
        news = [v for v in subset if v in fresh_owner]
        if not news:
            return builder.level(n, subset)
        idx = fresh_owner[news[0]]
        e_verts, m, fresh_start = glue_records[idx]
        image = set(m)
        piece = sorted(set(subset) & image)
        back = {img: w for w, img in enumerate(m)}
        left = _leaf_partial(b, {v: back[v] for v in piece})
        rest = tuple(v for v in subset if not (v in image and v >= fresh_start))
        if not rest:
            return left
        right = final_witness(rest)
        shared = sorted(set(piece) & set(rest))
        return _join_partials(current, left, right, shared)

    tree_witnesses: dict[tuple[int, ...], TreeWitness] = {}
    for subset in _closed_subsets(current):
        if not 1 <= len(subset) <= n:
            continue
        partial = builder._cover(current, final_witness(subset), subset)
        wmap = tuple(partial.fmap[v] for v in subset)
        spec = TreeAmalgamSpec(b, partial.recipe)
        sub, _ = induced_substructure(current, subset)
        got = classify_map(wmap, sub, partial.result)
        assert got is not None and _KIND_RANK[got] >= _KIND_RANK[HOM_EMBEDDING], (
            f"witness for {subset} classifies as {got}"
        )
        tree_witnesses[subset] = TreeWitness(spec, wmap)

    extension_certificates: dict[tuple[int, ...], EmbeddingMap] = {}
    for e_verts, m, _fresh in glue_records:
        kind = classify_map(m, b, current)
        assert kind is not None and _KIND_RANK[kind] >= _KIND_RANK[EMBEDDING], (
            f"glued copy over {e_verts} classifies as {kind}"
        )
        extension_certificates[e_verts] = EmbeddingMap(b, current, m, kind)
    mode = MODE_FULL if all(m == MODE_FULL for m in modes) else MODE_WITNESS
    return SparsenResult(
        current, certificate, tuple(traces), tree_witnesses, extension_certificates, mode
    )


# Tree-likeness validation ------------------------------------------------------


@dataclass
class TreelikeVerdict:
    valid: bool
    failing_clause: Optional[str] = None


@dataclass
class TreelikeReport:
    valid: bool
    verdicts: dict[tuple[int, ...], TreelikeVerdict] = field(default_factory=dict)


def _same_structure(s: Structure, t: Structure) -> bool:
    return (
        s.language == t.language
        and s.size == t.size
        and s.rels == t.rels
        and s.funs == t.funs
    )


def is_locally_treelike(
    c: Structure,
    a: Structure,
    b: Structure,
    n: int,
    witnesses: Mapping[tuple[int, ...], TreeWitness],
) -> TreelikeReport:
    """Validate supplied per-substructure witnesses: the map must be a
    homomorphism-embedding into the evaluated tree amalgam of copies of b,
    and every placed piece of every copy of a must land inside a copy of a."""
    alphas = enumerate_embeddings(a, c)
    verdicts: dict[tuple[int, ...], TreelikeVerdict] = {}
    for subset in _closed_subsets(c):
        if not 1 <= len(subset) <= n:
            continue
        if subset not in witnesses:
            raise MissingWitness(subset)
        w = witnesses[subset]
        if not _same_structure(w.spec.leaf, b):
            verdicts[subset] = TreelikeVerdict(False, "leaf-structure")
            continue
        try:
            evaluated, _ = tree_amalgam(w.spec)
        except RamseykitError:
            verdicts[subset] = TreelikeVerdict(False, "spec")
            continue
        sub, _ = induced_substructure(c, subset)
        kind = classify_map(w.map, sub, evaluated)
        if kind is None or _KIND_RANK[kind] < _KIND_RANK[HOM_EMBEDDING]:
            verdicts[subset] = TreelikeVerdict(False, "homomorphism-embedding")
            continue
        placement = dict(zip(subset, w.map))
        targets = [set(e.map) for e in enumerate_embeddings(a, evaluated)]
        ok = True
        for alpha in alphas:
            placed = {placement[v] for v in subset if v in set(alpha.map)}
            if placed and not any(placed <= t for t in targets):
                ok = False
                break
        verdicts[subset] = (
            TreelikeVerdict(True) if ok else TreelikeVerdict(False, "alpha-covering")
        )
    return TreelikeReport(all(v.valid for v in verdicts.values()), verdicts)


# Recursive closed construction --------------------------------------------------


@dataclass
class ClosedStepRecord:
    alpha: EmbeddingMap
    obrazek: PartiteSystem
    obrazek_step: PictureStep
    kept_vertices: tuple[int, ...]
    inner_alphas: tuple[EmbeddingMap, ...]
    inner_pictures: tuple[PartiteSystem, ...]
    inner_steps: tuple[PictureStep, ...]
    copy_embeddings: tuple[EmbeddingMap, ...]
    picture: PartiteSystem
    u_transversal: bool


@dataclass
class ClosedConstructionResult:
    structure: Structure
    target: Structure
    delegate: Optional[ConstructionResult]
    steps: tuple[ClosedStepRecord, ...]
    mode: str


def _derive_target(a: Structure, b: Structure, n_policy, caps: SizeCaps) -> Structure:
    """An ordered target built by the order-preserving replay, linearized."""
    res = induced_construction(
        a, b, b.size + 1, n_policy, enumeration=ENUM_MONOTONE, caps=caps
    )
    extended = extend_linear_order(res.final)
    if not isinstance(extended, Structure):
        raise RamseykitError(f"derived target is not order-extendable: {extended}")
    return extended


def _restrict_system(
    ps: PartiteSystem, kept: Sequence[int], images: Sequence[frozenset[int]]
) -> PartiteSystem:
    """Keep only the listed vertices and the entries inside a single image."""
    kept = sorted(kept)
    old2new = {v: i for i, v in enumerate(kept)}
    inside = set(kept)
    rels = {}
    for name in ps.base_language.relation_names:
        rels[name] = [
            tuple(old2new[x] for x in t)
            for t in ps.structure.rels[name]
            if set(t) <= inside and any(set(t) <= img for img in images)
        ]
    funs: dict[str, dict[tuple[int, ...], list[int]]] = {}
    for name in ps.base_language.function_names:
        entries = {}
        for args, value in ps.structure.funs[name].items():
            if set(args) <= inside:
                keep = [
                    v for v in value
                    if v in inside and any(set(args) | {v} <= img for img in images)
                ]
                if keep:
                    entries[tuple(old2new[x] for x in args)] = [old2new[v] for v in keep]
        funs[name] = entries
    projection = tuple(ps.projection[v] for v in kept)
    return make_partite_system(ps.base_language, ps.predicates, projection, rels, funs)


def recursive_closed_construction(
    a: Structure,
    b: Structure,
    u_symbols: Sequence[str],
    n_policy,
    d: Optional[Structure] = None,
    caps: SizeCaps = DEFAULT_CAPS,
) -> ClosedConstructionResult:
    """The pipeline that keeps designated relations closed.

    Without designated symbols this is exactly the plain iterated
    construction over the same target.  Otherwise every placement of the
    anchor gets a little picture, pruned to the closed copy images, and the
    half-closed inner loop rebuilds the picture over it; every intermediate
    picture is checked for value-set transversality.
    """
    if a.language != b.language:
        raise InvalidInput("anchor and compound must share a language")
    if not is_ordered(a) or not is_ordered(b):
        raise InvalidInput("both inputs must carry linear orders")
    u_symbols = tuple(u_symbols)
    for name in u_symbols:
        if name == "<":
            raise InvalidInput("the order symbol cannot be designated")
        if not a.language.is_relation(name) or a.language.arity(name) < 2:
            raise InvalidInput(f"designated symbol {name!r} must be a relation of arity >= 2")
    policy = _normalize_policy(n_policy)
    if d is None:
        d = _derive_target(a, b, n_policy, caps)

    if not u_symbols:
        inner = induced_construction(a, b, d, n_policy, caps=caps)
        extended = extend_linear_order(inner.final)
        if not isinstance(extended, Structure):
            raise RamseykitError("construction output is not order-extendable")
        return ClosedConstructionResult(extended, d, inner, (), inner.mode)

    predicates = _predicate_names(d.size)
    betas = enumerate_embeddings(b, d)
    if not betas:
        raise NoEmbeddings("the target contains no copy of the compound")
    current = _initial_picture(b, [e.map for e in betas], predicates, caps)
    alphas = enumerate_embeddings(a, d)
    if len(alphas) > caps.max_steps:
        raise SizeCapExceeded(f"{len(alphas)} placements", caps.max_steps)

    records: list[ClosedStepRecord] = []
    modes = []
    lp = current.structure.language
    for alpha in alphas:
        obrazek, ostep, omode = _picture_step(
            a, current, alpha.map, policy, RELATIONS_POWER, u_symbols,
            image_is_u_closed(alpha.image(), d, u_symbols), caps, alpha_emb=alpha,
            vacuous_ok=True,
        )
        if ostep.exponent == 0:
            modes.append(omode)
            records.append(
                ClosedStepRecord(
                    alpha=alpha,
                    obrazek=obrazek,
                    obrazek_step=ostep,
                    kept_vertices=tuple(range(obrazek.size)),
                    inner_alphas=(),
                    inner_pictures=(),
                    inner_steps=(),
                    copy_embeddings=(),
                    picture=current,
                    u_transversal=True,
                )
            )
            continue
        closed_images = [
            frozenset(e.map)
            for e in ostep.extensions.values()
            if image_is_u_closed(frozenset(e.map), obrazek.structure, u_symbols)
        ]
        kept = sorted({v for img in closed_images for v in img})
        if not kept:
            raise RamseykitError("pruning removed the whole little picture")
        pruned = _restrict_system(obrazek, kept, closed_images)

        anchor = make_partite_system(
            a.language,
            predicates,
            tuple(predicates[alpha.map[j]] for j in range(a.size)),
            rels=a.rels,
            funs=a.funs,
        )
        inner_names = _predicate_names(pruned.size, prefix="q")
        p_embs = enumerate_embeddings(current.structure, pruned.structure)
        if not p_embs:
            raise NoEmbeddings("pruned little picture lost every copy of the picture")
        inner_alphas = tuple(
            e
            for e in enumerate_embeddings(
                anchor.structure, pruned.structure, u_closed=u_symbols
            )
            if any(set(e.map) <= set(be.map) for be in p_embs)
        )
        q = _initial_picture(
            current.structure, [e.map for e in p_embs], inner_names, caps
        )
        copy_maps = [
            tuple(range(c * current.size, (c + 1) * current.size))
            for c in range(len(p_embs))
        ]
        inner_pictures = [q]
        inner_steps = []
        for ia in inner_alphas:
            q, istep, imode = _picture_step(
                anchor.structure, q, ia.map, policy, RELATIONS_POWER,
                u_symbols, True, caps, vacuous_ok=True,
            )
            inner_pictures.append(q)
            inner_steps.append(istep)
            modes.append(imode)
        modes.append(omode)

        copy_embeddings = []
        for m in copy_maps:
            kind = classify_map(m, current.structure, inner_pictures[0].structure, u_symbols=u_symbols)
            assert kind is not None and _KIND_RANK[kind] >= _KIND_RANK[U_CLOSED_EMBEDDING]
            copy_embeddings.append(
                EmbeddingMap(current.structure, inner_pictures[0].structure, m, kind)
            )
        for istep in inner_steps:
            copy_embeddings.extend(istep.extensions.values())

        # Down from the q-predicates to the original predicate list.
        fs = q.structure
        rels = {name: fs.rels[name] for name in lp.relation_names}
        funs = {name: fs.funs[name] for name in lp.function_names}
        flat = Structure(lp, fs.size, rels, funs)
        projection = []
        for v in range(flat.size):
            holding = [p for p in predicates if (v,) in flat.rels[p]]
            assert len(holding) == 1, f"vertex {v} lost its partition"
            projection.append(holding[0])
        base_rels = {
            name: flat.rels[name] for name in b.language.relation_names
        }
        base_funs = {name: flat.funs[name] for name in b.language.function_names}
        nxt = make_partite_system(
            b.language, predicates, tuple(projection), base_rels, base_funs
        )
        report = validate_partite(nxt, over=d, u_symbols=u_symbols)
        records.append(
            ClosedStepRecord(
                alpha=alpha,
                obrazek=obrazek,
                obrazek_step=ostep,
                kept_vertices=tuple(kept),
                inner_alphas=inner_alphas,
                inner_pictures=tuple(inner_pictures),
                inner_steps=tuple(inner_steps),
                copy_embeddings=tuple(copy_embeddings),
                picture=nxt,
                u_transversal=report.valid,
            )
        )
        assert report.valid, f"picture lost transversality: {report.problems}"
        current = nxt

    extended = extend_linear_order(current.l_reduct())
    if not isinstance(extended, Structure):
        raise RamseykitError("construction output is not order-extendable")
    mode = MODE_FULL if all(m == MODE_FULL for m in modes) else MODE_WITNESS
    return ClosedConstructionResult(extended, d, None, tuple(records), mode)
