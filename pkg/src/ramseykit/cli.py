"""Deterministic command line front end.

Exit codes: 0 the checked property holds or the construction succeeded,
1 the property fails (a replayable certificate is printed), 2 invalid
input, 3 a search or size cap was exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import certificates as certs
from .amalgamation import (
    AmalgamationProblem,
    TreeAmalgamSpec,
    TreeJoin,
    TreeLeaf,
    free_amalgam,
    tree_amalgam,
)
from .arrows import check_arrow, ramsey_degree_in, tangent_numbers
from .certificates import _en_labelled_graph
from .completion import (
    EdgeLabelledGraph,
    check_c_relation,
    complete_equivalence,
    complete_metric,
    complete_poset_linext,
    enumerate_rigid_surjections,
    extend_linear_order,
    structure_to_labelled_graph,
)
from .eppa import (
    EppaInstance,
    check_coherence,
    is_eppa_witness,
    npartite_tournament_witness,
)
from .errors import InvalidInput, RamseykitError, SearchCapExceeded, SizeCapExceeded
from .files import (
    file_for,
    parse_structure_file,
    read_structure_file,
    serialize_structure_file,
    write_structure_file,
)
from .halesjewett import hj_number
from .orientations import (
    BoundExceeded,
    class_membership,
    find_2orientation,
    predimension,
    substructure_order,
)
from .partite import (
    DEFAULT_CAPS,
    ENUM_EMBEDDINGS,
    ENUM_MONOTONE,
    PartiteSystem,
    SizeCaps,
    induced_construction,
    partite_lemma,
    picture_lemma,
    recursive_closed_construction,
    sparsen,
    trace_lines,
)
from .structures import (
    EmbeddingMap,
    Language,
    Structure,
    classify_map,
    enumerate_embeddings,
    validate_structure,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_CAP = 3


def _load_structure(path) -> Structure:
    return read_structure_file(path).only_structure()[1]


def _ints(text: str) -> tuple[int, ...]:
    if text in ("", "-"):
        return ()
    return tuple(int(w) for w in text.replace(",", " ").split())


def _print_structure(s: Structure, name: str = "out") -> None:
    sys.stdout.write(serialize_structure_file(file_for({name: s})))


def _emit(cert: certs.Certificate, path, failing: bool) -> None:
    """Failures always print their certificate; --cert also writes it."""
    text = certs.serialize_certificate(cert)
    if failing:
        sys.stdout.write(text)
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _save_structure(path, s: Structure, name: str = "out") -> None:
    write_structure_file(path, file_for({name: s}))


def _system_from(path, predicates: str) -> PartiteSystem:
    sf = read_structure_file(path)
    _, s = sf.only_structure()
    preds = tuple(predicates.split(","))
    for p in preds:
        if not s.language.is_relation(p) or s.language.arity(p) != 1:
            raise InvalidInput(f"predicate {p!r} is not a unary relation of the input")
    base = Language(
        tuple((r, a) for r, a in s.language.relations if r not in preds),
        s.language.functions,
    )
    projection = []
    for v in range(s.size):
        owners = [p for p in preds if (v,) in s.rels[p]]
        if len(owners) != 1:
            raise InvalidInput(f"vertex {v} lies in {len(owners)} predicates")
        projection.append(owners[0])
    return PartiteSystem(base, preds, s, tuple(projection))


def _caps_from(args) -> SizeCaps:
    return SizeCaps(
        max_vertices=args.max_vertices,
        max_tuples=args.max_tuples,
        max_steps=args.max_steps,
    )


def _policy_from(text: str):
    return text if text == "hj" else int(text)


# Subcommand handlers -------------------------------------------------------------


def _cmd_validate(args) -> int:
    bad = 0
    for path in args.files:
        sf = read_structure_file(path)
        for name, s in sf.structures.items():
            report = validate_structure(s)
            if report.valid:
                print(f"{path}:{name} ok")
            else:
                bad += 1
                for problem in report.problems:
                    print(f"{path}:{name} {problem}")
    return EXIT_INVALID if bad else EXIT_OK


def _cmd_emb(args) -> int:
    a = _load_structure(args.a)
    b = _load_structure(args.b)
    projection = None
    if args.projection:
        projection = {}
        for part in args.projection.split(","):
            v, name = part.split(":")
            projection[int(v)] = name
    u_closed = args.closed.split(",") if args.closed else None
    found = enumerate_embeddings(a, b, projection=projection, u_closed=u_closed)
    print(f"embeddings {len(found)}")
    for e in found:
        print(" ".join(str(v) for v in e.map))
    if args.cert and found:
        _emit(
            certs.embedding_certificate(
                a, b, found[0].map, found[0].kind, u_closed or ()
            ),
            args.cert,
            failing=False,
        )
    return EXIT_OK


def _cmd_amalgam(args) -> int:
    if args.tree:
        evaluated, leaves = _run_tree_spec(args.tree)
        print(f"vertices {evaluated.size}")
        for e in leaves:
            print("leaf " + " ".join(str(v) for v in e.map))
        if args.out:
            _save_structure(args.out, evaluated)
        else:
            _print_structure(evaluated)
        return EXIT_OK
    base = _load_structure(args.base)
    left = _load_structure(args.left)
    right = _load_structure(args.right)

    def as_map(text, target, name):
        m = _ints(text)
        kind = classify_map(m, base, target)
        if kind is None:
            raise InvalidInput(f"--{name} is not a homomorphism")
        return EmbeddingMap(base, target, m, kind)

    problem = AmalgamationProblem(
        base, left, right, as_map(args.alpha1, left, "alpha1"), as_map(args.alpha2, right, "alpha2")
    )
    amalgam, beta1, beta2 = free_amalgam(problem)
    print("beta1 " + " ".join(str(v) for v in beta1.map))
    print("beta2 " + " ".join(str(v) for v in beta2.map))
    if args.out:
        _save_structure(args.out, amalgam)
    else:
        _print_structure(amalgam)
    return EXIT_OK


def _run_tree_spec(path):
    """Tree spec file: a structure file, then `tree` lines building nodes.

    tree leaf
    tree join LEFT RIGHT OVERLAP F1 F2

    LEFT/RIGHT are node indices, OVERLAP a structure name, F1/F2 comma maps.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    struct_lines = []
    tree_lines = []
    for raw in text.split("\n"):
        stripped = raw.split("#", 1)[0].strip()
        if stripped.startswith("tree"):
            tree_lines.append(stripped)
        else:
            struct_lines.append(raw)
    sf = parse_structure_file("\n".join(struct_lines))
    if "leaf" not in sf.structures:
        raise InvalidInput("tree spec needs a structure named 'leaf'")
    nodes = []
    for line in tree_lines:
        words = line.split()
        if words[:2] == ["tree", "leaf"] and len(words) == 2:
            nodes.append(TreeLeaf())
        elif words[:2] == ["tree", "join"] and len(words) == 7:
            li, ri = int(words[2]), int(words[3])
            overlap = words[4]
            if overlap not in sf.structures:
                raise InvalidInput(f"unknown overlap structure {overlap!r}")
            if not (0 <= li < len(nodes)) or not (0 <= ri < len(nodes)):
                raise InvalidInput(f"node index out of range in {line!r}")
            nodes.append(
                TreeJoin(
                    sf.structures[overlap],
                    nodes[li],
                    nodes[ri],
                    _ints(words[5]),
                    _ints(words[6]),
                )
            )
        else:
            raise InvalidInput(f"bad tree line {line!r}")
    if not nodes:
        raise InvalidInput("tree spec has no tree lines")
    return tree_amalgam(TreeAmalgamSpec(sf.structures["leaf"], nodes[-1]))


def _cmd_arrow(args) -> int:
    a = _load_structure(args.a)
    b = _load_structure(args.b)
    c = _load_structure(args.c)
    witness = check_arrow(a, b, c, args.colors, node_cap=args.node_cap)
    cert = certs.arrow_certificate(a, b, c, args.colors, witness)
    if args.degree:
        report = ramsey_degree_in(a, b, c, args.colors, node_cap=args.node_cap)
        print(f"degree {report.t}")
    if witness is None:
        print("holds")
        _emit(cert, args.cert, failing=False)
        return EXIT_OK
    _emit(cert, args.cert, failing=True)
    return EXIT_FAIL


def _cmd_partite(args) -> int:
    caps = _caps_from(args)
    if args.mode == "lemma":
        a = _system_from(args.inputs[0], args.predicates)
        b = _system_from(args.inputs[1], args.predicates)
        res = partite_lemma(a, b, args.exponent, caps=caps)
        print(f"mode {res.mode}")
        print(f"core {res.system.structure.size}")
        print(f"words {len(res.witnesses.word_embeddings)}")
        print(f"pwords {len(res.witnesses.pword_embeddings)}")
        if args.cert:
            letters, fw = sorted(res.witnesses.pword_embeddings.items())[0]
            _emit(
                certs.embedding_certificate(fw.source, fw.target, fw.map, fw.kind),
                args.cert,
                failing=False,
            )
        return EXIT_OK
    if args.mode == "picture":
        a = _load_structure(args.inputs[0])
        d = _load_structure(args.inputs[1])
        b = _system_from(args.inputs[2], args.predicates)
        alpha_map = _ints(args.alpha)
        kind = classify_map(alpha_map, a, d)
        if kind is None:
            raise InvalidInput("--alpha is not even a homomorphism")
        alpha = EmbeddingMap(a, d, alpha_map, kind)
        res = picture_lemma(a, d, b, alpha, args.exponent, caps=caps)
        print(f"mode {res.mode}")
        print(f"core {res.step.core_size}")
        print(f"picture {res.system.structure.size}")
        print(f"extensions {len(res.step.extensions)}")
        return EXIT_OK
    if args.mode == "induced":
        a = _load_structure(args.inputs[0])
        b = _load_structure(args.inputs[1])
        if args.positions:
            d = args.positions
            enumeration = ENUM_MONOTONE
        else:
            d = _load_structure(args.inputs[2])
            enumeration = ENUM_EMBEDDINGS
        policy = _policy_from(args.exponent_policy)
        res = induced_construction(a, b, d, policy, enumeration=enumeration, caps=caps)
        for line in trace_lines(res):
            print(line)
        if args.cert:
            _emit(
                certs.trace_certificate(a, b, d, policy, enumeration, res),
                args.cert,
                failing=False,
            )
        if args.out:
            _save_structure(args.out, res.final)
        return EXIT_OK
    if args.mode == "sparsen":
        a = _load_structure(args.inputs[0])
        b = _load_structure(args.inputs[1])
        c0 = _load_structure(args.inputs[2])
        policy = _policy_from(args.exponent_policy)
        res = sparsen(a, b, c0, args.iterations, policy, caps=caps)
        print(f"mode {res.mode}")
        print(f"vertices {res.structure.size}")
        print(f"certificate {res.certificate.kind}")
        print(f"witnesses {len(res.tree_witnesses)}")
        print(f"copies {len(res.extension_certificates)}")
        if args.cert:
            w = res.certificate
            _emit(
                certs.embedding_certificate(w.source, w.target, w.map, w.kind),
                args.cert,
                failing=False,
            )
        if args.out:
            _save_structure(args.out, res.structure)
        return EXIT_OK
    if args.mode == "closed":
        a = _load_structure(args.inputs[0])
        b = _load_structure(args.inputs[1])
        d = _load_structure(args.target) if args.target else None
        policy = _policy_from(args.exponent_policy)
        symbols = args.symbols.split(",") if args.symbols else []
        res = recursive_closed_construction(a, b, symbols, policy, d=d, caps=caps)
        print(f"mode {res.mode}")
        print(f"target {res.target.size}")
        print(f"vertices {res.structure.size}")
        print(f"steps {len(res.steps)}")
        if args.out:
            _save_structure(args.out, res.structure)
        return EXIT_OK
    raise InvalidInput(f"unknown partite mode {args.mode!r}")


def _cmd_complete(args) -> int:
    s = _load_structure(args.file)
    if args.what == "metric":
        outcome = complete_metric(structure_to_labelled_graph(s))
        cert = certs.metric_certificate(s, outcome)
        if isinstance(outcome, EdgeLabelledGraph):
            for (u, v), label in sorted(outcome.labels.items()):
                print(f"edge {u} {v} {label}")
            _emit(cert, args.cert, failing=False)
            return EXIT_OK
        _emit(cert, args.cert, failing=True)
        return EXIT_FAIL
    if args.what == "equiv":
        outcome = complete_equivalence(_en_labelled_graph(s))
        cert = certs.equiv_certificate(s, outcome)
        if isinstance(outcome, EdgeLabelledGraph):
            for (u, v), label in sorted(outcome.labels.items()):
                print(f"edge {u} {v} {label}")
            _emit(cert, args.cert, failing=False)
            return EXIT_OK
        _emit(cert, args.cert, failing=True)
        return EXIT_FAIL
    if args.what == "order":
        outcome = extend_linear_order(s)
        cert = certs.order_certificate(s, outcome)
        if isinstance(outcome, Structure):
            _print_structure(outcome)
            _emit(cert, args.cert, failing=False)
            return EXIT_OK
        _emit(cert, args.cert, failing=True)
        return EXIT_FAIL
    if args.what == "poset":
        outcome = complete_poset_linext(s)
        cert = certs.poset_certificate(s, outcome)
        if isinstance(outcome, Structure):
            _print_structure(outcome)
            _emit(cert, args.cert, failing=False)
            return EXIT_OK
        _emit(cert, args.cert, failing=True)
        return EXIT_FAIL
    if args.what == "crel":
        report = check_c_relation(s)
        cert = certs.crel_certificate(s, report)
        if report.ok:
            print("holds")
            _emit(cert, args.cert, failing=False)
            return EXIT_OK
        _emit(cert, args.cert, failing=True)
        return EXIT_FAIL
    raise InvalidInput(f"unknown completion {args.what!r}")


def _cmd_ba_corr(args) -> int:
    surjections = enumerate_rigid_surjections(args.m, args.k)
    from .completion import ba_embedding_correspondence

    pairs = ba_embedding_correspondence(args.m, args.k)
    assert len(pairs) == len(surjections)
    print(f"count {len(pairs)}")
    for g, e in pairs:
        print(" ".join(str(v) for v in g) + " -> " + " ".join(str(v) for v in e.map))
    if args.cert:
        _emit(certs.ba_certificate(args.m, args.k, len(pairs)), args.cert, failing=False)
    return EXIT_OK


def _cmd_eppa(args) -> int:
    if args.mode == "npartite":
        a = _load_structure(args.inputs[0])
        parts = [_ints(p) for p in args.parts.split("|")]
        witness = npartite_tournament_witness(a, parts, max_vertices=args.max_vertices)
        print(f"witness {witness.b.size}")
        print("inclusion " + " ".join(str(v) for v in witness.inclusion.map))
        if args.out:
            _save_structure(args.out, witness.b)
        if not args.check:
            return EXIT_OK
        inst = EppaInstance(a, witness.b, witness.inclusion)
        report = is_eppa_witness(inst)
        cert = certs.eppa_certificate(inst, report)
        if report.ok:
            print("holds")
            _emit(cert, args.cert, failing=False)
            return EXIT_OK
        _emit(cert, args.cert, failing=True)
        return EXIT_FAIL
    small = _load_structure(args.inputs[0])
    witness = _load_structure(args.inputs[1])
    inclusion = _ints(args.inclusion)
    kind = classify_map(inclusion, small, witness)
    if kind is None:
        raise InvalidInput("--inclusion is not a homomorphism")
    inst = EppaInstance(small, witness, EmbeddingMap(small, witness, inclusion, kind))
    report = is_eppa_witness(inst)
    if args.mode == "check":
        cert = certs.eppa_certificate(inst, report)
        if report.ok:
            print("holds")
            _emit(cert, args.cert, failing=False)
            return EXIT_OK
        _emit(cert, args.cert, failing=True)
        return EXIT_FAIL
    if args.mode == "coherence":
        if not report.ok:
            cert = certs.eppa_certificate(inst, report)
            _emit(cert, args.cert, failing=True)
            return EXIT_FAIL
        tabled = EppaInstance(
            small, witness, inst.inclusion, table=report.table
        )
        coherent = check_coherence(tabled)
        cert = certs.coherence_certificate(tabled, coherent)
        if coherent.ok:
            print("coherent")
            _emit(cert, args.cert, failing=False)
            return EXIT_OK
        _emit(cert, args.cert, failing=True)
        return EXIT_FAIL
    raise InvalidInput(f"unknown eppa mode {args.mode!r}")


def _cmd_orient(args) -> int:
    g = _load_structure(args.file)
    if args.mode == "delta":
        print(f"delta {predimension(g)}")
        return EXIT_OK
    if args.mode == "class":
        ok, violating = class_membership(g, which=args.which, bound=args.bound)
        if ok:
            print("member")
            return EXIT_OK
        cert = certs.orientation_certificate(g, violating)
        _emit(cert, args.cert, failing=True)
        return EXIT_FAIL
    if args.mode == "orient":
        closed = set(_ints(args.closed)) if args.closed else None
        oriented = find_2orientation(g, closed=closed, d_closed=args.d_closed)
        if oriented is not None:
            cert = certs.orientation_certificate(g, oriented)
            for u, v in sorted(oriented.orientation):
                print(f"arc {u} {v}")
            _emit(cert, args.cert, failing=False)
            return EXIT_OK
        ok, violating = class_membership(g, bound=args.bound)
        if not ok:
            cert = certs.orientation_certificate(g, violating)
            _emit(cert, args.cert, failing=True)
            return EXIT_FAIL
        # constrained failure: delta >= 0 everywhere, so there is no compact
        # counting witness; report the constraint that could not be met
        print("no orientation under the given constraints")
        return EXIT_FAIL
    if args.mode == "order":
        subset = _ints(args.subset)
        which = "leq_s" if args.which_order == "s" else "leq_d"
        holds = substructure_order(g, subset, which=which, bound=args.bound)
        cert = certs.suborder_certificate(g, subset, which, holds)
        if holds:
            print("holds")
            _emit(cert, args.cert, failing=False)
            return EXIT_OK
        _emit(cert, args.cert, failing=True)
        return EXIT_FAIL
    raise InvalidInput(f"unknown orient mode {args.mode!r}")


def _cmd_tangent(args) -> int:
    values = tangent_numbers(args.k)
    print(" ".join(str(v) for v in values))
    if args.cert:
        _emit(certs.tangent_certificate(args.k, values), args.cert, failing=False)
    return EXIT_OK


def _cmd_hj(args) -> int:
    value = hj_number(args.sigma, args.colors, cap=args.cap, node_cap=args.node_cap)
    if value is None:
        print(f"none within cap {args.cap}")
        return EXIT_CAP
    print(f"value {value}")
    if args.cert:
        _emit(
            certs.hj_certificate(args.sigma, args.colors, args.cap, value),
            args.cert,
            failing=False,
        )
    return EXIT_OK


def _cmd_verify(args) -> int:
    cert = certs.read_certificate(args.cert)
    result = certs.verify_certificate(cert)
    print(f"verdict {result.verdict}")
    if result.detail:
        print(result.detail)
    return EXIT_OK if result.ok else EXIT_FAIL


# Parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramseykit",
        description="Finite-structure Ramsey constructions with replayable certificates.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="reserved; all engines are single threaded for reproducibility",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate structure files")
    p.add_argument("files", nargs="+")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("emb", help="enumerate embeddings of A into B")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--projection", help="vertex:predicate constraints, comma separated")
    p.add_argument("--closed", help="keep only U-closed images, comma separated symbols")
    p.add_argument("--cert")
    p.set_defaults(handler=_cmd_emb)

    p = sub.add_parser("amalgam", help="free or tree amalgamation")
    p.add_argument("base", nargs="?")
    p.add_argument("left", nargs="?")
    p.add_argument("right", nargs="?")
    p.add_argument("--alpha1", default="")
    p.add_argument("--alpha2", default="")
    p.add_argument("--tree", help="tree spec file (structures plus tree lines)")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_amalgam)

    p = sub.add_parser("arrow", help="check C -> (B)^A_r")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--degree", action="store_true")
    p.add_argument("--node-cap", type=int, default=10**7)
    p.add_argument("--cert")
    p.set_defaults(handler=_cmd_arrow)

    p = sub.add_parser("partite", help="partite lemma and constructions")
    p.add_argument("mode", choices=["lemma", "picture", "induced", "sparsen", "closed"])
    p.add_argument("inputs", nargs="*")
    p.add_argument("--predicates", default="", help="partition predicate names")
    p.add_argument("--exponent", type=int, default=1)
    p.add_argument("--exponent-policy", default="1", help="integer or 'hj'")
    p.add_argument("--alpha", default="", help="placement map for picture mode")
    p.add_argument("--positions", type=int, help="monotone target size for induced mode")
    p.add_argument("--iterations", type=int, default=1)
    p.add_argument("--symbols", default="", help="designated symbols for closed mode")
    p.add_argument("--target", help="prebuilt target file for closed mode")
    p.add_argument("--max-vertices", type=int, default=DEFAULT_CAPS.max_vertices)
    p.add_argument("--max-tuples", type=int, default=DEFAULT_CAPS.max_tuples)
    p.add_argument("--max-steps", type=int, default=DEFAULT_CAPS.max_steps)
    p.add_argument("--cert")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_partite)

    p = sub.add_parser("complete", help="completion procedures")
    p.add_argument("what", choices=["metric", "equiv", "order", "poset", "crel"])
    p.add_argument("file")
    p.add_argument("--cert")
    p.set_defaults(handler=_cmd_complete)

    p = sub.add_parser("ba-corr", help="rigid surjections vs ordered BA embeddings")
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--cert")
    p.set_defaults(handler=_cmd_ba_corr)

    p = sub.add_parser("eppa", help="extension property for partial automorphisms")
    p.add_argument("mode", choices=["check", "coherence", "npartite"])
    p.add_argument("inputs", nargs="+")
    p.add_argument("--inclusion", default="")
    p.add_argument("--parts", default="", help="partition blocks like 0,1|2,3")
    p.add_argument("--check", action="store_true", help="verify the built witness")
    p.add_argument("--max-vertices", type=int, default=4096)
    p.add_argument("--cert")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_eppa)

    p = sub.add_parser("orient", help="predimension and 2-orientations")
    p.add_argument("mode", choices=["delta", "class", "orient", "order"])
    p.add_argument("file")
    p.add_argument("--which", choices=["C0", "CF"], default="C0")
    p.add_argument("--which-order", choices=["s", "d"], default="s")
    p.add_argument("--closed", default="")
    p.add_argument("--d-closed", action="store_true")
    p.add_argument("--subset", default="")
    p.add_argument("--bound", type=int, default=12)
    p.add_argument("--cert")
    p.set_defaults(handler=_cmd_orient)

    p = sub.add_parser("tangent", help="tangent number sequence")
    p.add_argument("k", type=int)
    p.add_argument("--cert")
    p.set_defaults(handler=_cmd_tangent)

    p = sub.add_parser("hj", help="Hales-Jewett numbers by exhaustive search")
    p.add_argument("sigma", type=int)
    p.add_argument("colors", type=int)
    p.add_argument("--cap", type=int, default=6)
    p.add_argument("--node-cap", type=int, default=10**7)
    p.add_argument("--cert")
    p.set_defaults(handler=_cmd_hj)

    p = sub.add_parser("verify", help="replay a serialized certificate")
    p.add_argument("cert")
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads != 1:
        print("error: only --threads 1 is supported")
        return EXIT_INVALID
    try:
        return args.handler(args)
    except (SizeCapExceeded, SearchCapExceeded, BoundExceeded) as e:
        print(f"cap exceeded: {e}")
        return EXIT_CAP
    except FileNotFoundError as e:
        print(f"error: {e}")
        return EXIT_INVALID
    except RamseykitError as e:
        print(f"error: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
