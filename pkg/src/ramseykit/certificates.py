"""Serialized, replayable certificates for check outcomes.

A certificate is a line-oriented text block:

    cert <kind> v1
    expect <verdict>
    <key> <value ...>          (kind-specific, keys may repeat)
    language ...               (embedded structure file to end of text)

verify_certificate replays the claim: structural witnesses (colorings,
orientations, completions, embeddings) are checked directly without
re-running any search; search results are recomputed with the recorded
parameters.  The replayed verdict must equal the `expect` line.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .arrows import ColoringWitness, abc_hypergraph, check_arrow, tangent_numbers
from .completion import (
    EdgeLabelledGraph,
    check_c_relation,
    complete_poset_linext,
    embedding_to_rigid_surjection,
    enumerate_rigid_surjections,
    extend_linear_order,
    boolean_algebra_structure,
    rigid_surjection_to_embedding,
    structure_to_labelled_graph,
    InvariantViolation,
    NonMetricCycleWitness,
    OrderCycle,
    OrderReflexivePair,
    OrderSymmetricPair,
)
from .eppa import EppaInstance, is_eppa_witness
from .errors import InvalidInput
from .files import StructureFile, parse_structure_file, serialize_structure_file
from .halesjewett import hj_number
from .orientations import OrientedGraph, predimension, undirected_edges
from .partite import ENUM_EMBEDDINGS, ENUM_MONOTONE, induced_construction, trace_lines
from .structures import (
    EMBEDDING,
    ISOMORPHISM,
    U_CLOSED_EMBEDDING,
    _KIND_RANK,
    PartialAutomorphism,
    Structure,
    classify_map,
    enumerate_partial_automorphisms,
)

VERSION = "v1"

KINDS = (
    "arrow",
    "tangent",
    "hj",
    "embedding",
    "order",
    "poset",
    "metric",
    "equiv",
    "crel",
    "orientation",
    "suborder",
    "eppa",
    "coherence",
    "trace",
    "ba",
)


@dataclass(frozen=True)
class Certificate:
    kind: str
    expect: str
    fields: tuple[tuple[str, str], ...]
    file: Optional[StructureFile]

    def get(self, key: str) -> str:
        hits = [v for k, v in self.fields if k == key]
        if len(hits) != 1:
            raise InvalidInput(f"certificate needs exactly one {key!r} line, found {len(hits)}")
        return hits[0]

    def get_optional(self, key: str) -> Optional[str]:
        hits = [v for k, v in self.fields if k == key]
        if len(hits) > 1:
            raise InvalidInput(f"certificate has {len(hits)} {key!r} lines")
        return hits[0] if hits else None

    def get_all(self, key: str) -> list[str]:
        return [v for k, v in self.fields if k == key]

    def structure(self, name: str) -> Structure:
        if self.file is None or name not in self.file.structures:
            raise InvalidInput(f"certificate lacks embedded structure {name!r}")
        return self.file.structures[name]


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    verdict: str
    detail: str = ""


def _ints(text: str) -> tuple[int, ...]:
    if text == "-":
        return ()
    try:
        return tuple(int(w) for w in text.replace(",", " ").split())
    except ValueError:
        raise InvalidInput(f"bad integer list {text!r}") from None


def _fmt_ints(values) -> str:
    seq = tuple(values)
    return ",".join(str(v) for v in seq) if seq else "-"


def _pairs(text: str) -> frozenset:
    out = set()
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        t = _ints(part)
        if len(t) != 2:
            raise InvalidInput(f"bad pair {part!r}")
        out.add(t)
    return frozenset(out)


def _fmt_pairs(pairs) -> str:
    return "; ".join(f"{u} {v}" for u, v in sorted(pairs)) or "-"


def _bundle(named: dict[str, Structure]) -> StructureFile:
    sf = StructureFile()
    lang_names: dict = {}
    for name, s in named.items():
        if s.language not in lang_names:
            lang_names[s.language] = f"L{len(lang_names)}"
            sf.add_language(lang_names[s.language], s.language)
    for name, s in named.items():
        sf.add_structure(name, lang_names[s.language], s)
    return sf


def serialize_certificate(cert: Certificate) -> str:
    if cert.kind not in KINDS:
        raise InvalidInput(f"unknown certificate kind {cert.kind!r}")
    lines = [f"cert {cert.kind} {VERSION}", f"expect {cert.expect}"]
    lines += [f"{k} {v}" for k, v in cert.fields]
    body = "\n".join(lines) + "\n"
    if cert.file is not None:
        body += serialize_structure_file(cert.file)
    return body


def parse_certificate(text: str) -> Certificate:
    lines = text.split("\n")
    header = None
    expect = None
    fields: list[tuple[str, str]] = []
    rest_start = None
    for i, raw in enumerate(lines):
        line = raw.split("#", 1)[0].rstrip()
        probe = line.strip()
        if not probe:
            continue
        head = probe.split(None, 1)[0]
        if header is None:
            words = probe.split()
            if head != "cert" or len(words) != 3 or words[2] != VERSION:
                raise InvalidInput("certificate must start with: cert <kind> v1")
            if words[1] not in KINDS:
                raise InvalidInput(f"unknown certificate kind {words[1]!r}")
            header = words[1]
            continue
        if head in ("language", "structure"):
            rest_start = i
            break
        if head == "expect":
            if expect is not None:
                raise InvalidInput("exactly one expect line required")
            expect = probe.split(None, 1)[1].strip() if " " in probe else ""
            if not expect:
                raise InvalidInput("expect line needs a verdict")
            continue
        # the value is everything after "key ", kept verbatim so that
        # payload lines with significant leading spaces survive
        body = line.lstrip()
        value = body[len(head):]
        fields.append((head, value[1:] if value.startswith(" ") else value))
    if header is None:
        raise InvalidInput("empty certificate")
    if expect is None:
        raise InvalidInput("certificate lacks an expect line")
    sf = None
    if rest_start is not None:
        sf = parse_structure_file("\n".join(lines[rest_start:]))
    return Certificate(header, expect, tuple(fields), sf)


def read_certificate(path) -> Certificate:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_certificate(fh.read())


def write_certificate(path, cert: Certificate) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_certificate(cert))


# Writers ------------------------------------------------------------------------


def arrow_certificate(
    a: Structure,
    b: Structure,
    c: Structure,
    colors: int,
    witness: Optional[ColoringWitness],
) -> Certificate:
    fields = [("colors", str(colors))]
    if witness is None:
        expect = "holds"
    else:
        expect = "fails"
        fields.append(("assignment", _fmt_ints(witness.assignment)))
        fields.append(("t", str(witness.t)))
    return Certificate(
        "arrow", expect, tuple(fields), _bundle({"a": a, "b": b, "c": c})
    )


def tangent_certificate(k: int, values: Sequence[int]) -> Certificate:
    fields = (("k", str(k)), ("values", " ".join(str(v) for v in values)))
    return Certificate("tangent", "holds", fields, None)


def hj_certificate(sigma: int, colors: int, cap: int, value: Optional[int]) -> Certificate:
    fields = (
        ("sigma", str(sigma)),
        ("colors", str(colors)),
        ("cap", str(cap)),
        ("value", "none" if value is None else str(value)),
    )
    return Certificate("hj", "holds", fields, None)


def embedding_certificate(
    source: Structure,
    target: Structure,
    emb_map: Sequence[int],
    kind: str,
    u_symbols: Sequence[str] = (),
) -> Certificate:
    fields = [("map", _fmt_ints(emb_map)), ("kind", kind)]
    if u_symbols:
        fields.append(("closed", " ".join(u_symbols)))
    return Certificate(
        "embedding",
        "holds",
        tuple(fields),
        _bundle({"source": source, "target": target}),
    )


def order_certificate(g: Structure, outcome) -> Certificate:
    if isinstance(outcome, Structure):
        fields = (("linear", _fmt_pairs(outcome.rels["<"])),)
        return Certificate("order", "completed", fields, _bundle({"g": g}))
    fields = [_order_witness_field(outcome)]
    return Certificate("order", "fails", tuple(fields), _bundle({"g": g}))


def _order_witness_field(w) -> tuple[str, str]:
    if isinstance(w, OrderReflexivePair):
        return ("reflexive", str(w.vertex))
    if isinstance(w, OrderSymmetricPair):
        return ("symmetric", _fmt_ints(w.pair))
    if isinstance(w, OrderCycle):
        return ("cycle", _fmt_ints(w.cycle))
    raise InvalidInput(f"unknown order witness {w!r}")


def poset_certificate(g: Structure, outcome) -> Certificate:
    if isinstance(outcome, Structure):
        fields = (("linear", _fmt_pairs(outcome.rels["<"])),)
        return Certificate("poset", "completed", fields, _bundle({"g": g}))
    if isinstance(outcome, InvariantViolation):
        fields = (("clause", str(outcome.clause)), ("pair", _fmt_ints(outcome.pair)))
        return Certificate("poset", "fails", fields, _bundle({"g": g}))
    return Certificate(
        "poset", "fails", (_order_witness_field(outcome),), _bundle({"g": g})
    )


def metric_certificate(g: Structure, outcome) -> Certificate:
    if isinstance(outcome, EdgeLabelledGraph):
        fields = tuple(
            ("edge", f"{u} {v} {label}")
            for (u, v), label in sorted(outcome.labels.items())
        )
        return Certificate("metric", "completed", fields, _bundle({"g": g}))
    fields = (
        ("cycle", _fmt_ints(outcome.cycle)),
        ("cyclabels", " ".join(str(l) for l in outcome.labels)),
    )
    return Certificate("metric", "fails", fields, _bundle({"g": g}))


def equiv_certificate(g: Structure, outcome) -> Certificate:
    if isinstance(outcome, EdgeLabelledGraph):
        fields = tuple(
            ("edge", f"{u} {v} {label}")
            for (u, v), label in sorted(outcome.labels.items())
        )
        return Certificate("equiv", "completed", fields, _bundle({"g": g}))
    fields = (
        ("cycle", _fmt_ints(outcome.cycle)),
        ("cyclabels", " ".join(outcome.labels)),
    )
    return Certificate("equiv", "fails", fields, _bundle({"g": g}))


def crel_certificate(g: Structure, report) -> Certificate:
    if report.ok:
        return Certificate("crel", "holds", (), _bundle({"g": g}))
    fields = (
        ("axiom", str(report.axiom)),
        ("witness", _fmt_ints(report.witness or ())),
    )
    return Certificate("crel", "fails", fields, _bundle({"g": g}))


def orientation_certificate(g: Structure, outcome) -> Certificate:
    if isinstance(outcome, OrientedGraph):
        fields = tuple(("arc", f"{u} {v}") for u, v in sorted(outcome.orientation))
        return Certificate("orientation", "oriented", fields, _bundle({"g": g}))
    fields = (("violation", _fmt_ints(sorted(outcome))),)
    return Certificate("orientation", "fails", fields, _bundle({"g": g}))


def suborder_certificate(g: Structure, subset, which: str, holds: bool) -> Certificate:
    fields = (("subset", _fmt_ints(sorted(subset))), ("which", which))
    expect = "holds" if holds else "fails"
    return Certificate("suborder", expect, fields, _bundle({"g": g}))


def eppa_certificate(inst: EppaInstance, report) -> Certificate:
    fields = [("inclusion", _fmt_ints(inst.inclusion.map))]
    if report.ok:
        expect = "holds"
        for p, auto in report.table.items():
            fields.append(
                ("row", f"{_fmt_ints(p.domain)} {_fmt_ints(p.image)} {_fmt_ints(auto)}")
            )
    else:
        expect = "fails"
        fields.append(
            ("failing", f"{_fmt_ints(report.failing.domain)} {_fmt_ints(report.failing.image)}")
        )
    return Certificate(
        "eppa",
        expect,
        tuple(fields),
        _bundle({"small": inst.small, "witness": inst.witness}),
    )


def coherence_certificate(inst: EppaInstance, report) -> Certificate:
    fields = [("inclusion", _fmt_ints(inst.inclusion.map))]
    if report.ok:
        expect = "coherent"
    else:
        expect = "incoherent"
        f, g = report.violating
        fields.append(("f", f"{_fmt_ints(f.domain)} {_fmt_ints(f.image)}"))
        fields.append(("g", f"{_fmt_ints(g.domain)} {_fmt_ints(g.image)}"))
    return Certificate(
        "coherence",
        expect,
        tuple(fields),
        _bundle({"small": inst.small, "witness": inst.witness}),
    )


def trace_certificate(
    a: Structure,
    b: Structure,
    d,
    policy,
    enumeration: str,
    result,
) -> Certificate:
    fields = [("policy", str(policy)), ("enumeration", enumeration)]
    named = {"a": a, "b": b}
    if isinstance(d, Structure):
        named["d"] = d
    else:
        fields.append(("positions", str(int(d))))
    fields += [("line", line) for line in trace_lines(result)]
    fields.append(("mode", result.mode))
    return Certificate("trace", "succeeded", tuple(fields), _bundle(named))


def ba_certificate(m_atoms: int, k_atoms: int, count: int) -> Certificate:
    fields = (("m", str(m_atoms)), ("k", str(k_atoms)), ("count", str(count)))
    return Certificate("ba", "holds", fields, None)


# Verifiers ----------------------------------------------------------------------


def _verify_arrow(cert: Certificate) -> VerifyResult:
    a, b, c = (cert.structure(n) for n in "abc")
    r = int(cert.get("colors"))
    if cert.expect == "fails":
        witness = ColoringWitness(
            r, _ints(cert.get("assignment")), int(cert.get_optional("t") or 1)
        )
        h = abc_hypergraph(a, b, c)
        if witness.replay(h):
            return VerifyResult(True, "fails")
        return VerifyResult(False, "invalid-witness", "recorded coloring does not spread")
    got = check_arrow(a, b, c, r)
    verdict = "holds" if got is None else "fails"
    return VerifyResult(verdict == cert.expect, verdict)


def _verify_tangent(cert: Certificate) -> VerifyResult:
    k = int(cert.get("k"))
    recorded = [int(w) for w in cert.get("values").split()]
    got = tangent_numbers(k)
    if got == recorded:
        return VerifyResult(cert.expect == "holds", "holds")
    return VerifyResult(False, "differs", f"recomputed {got}")


def _verify_hj(cert: Certificate) -> VerifyResult:
    raw = cert.get("value")
    recorded = None if raw == "none" else int(raw)
    got = hj_number(int(cert.get("sigma")), int(cert.get("colors")), cap=int(cert.get("cap")))
    if got == recorded:
        return VerifyResult(cert.expect == "holds", "holds")
    return VerifyResult(False, "differs", f"recomputed {got}")


def _verify_embedding(cert: Certificate) -> VerifyResult:
    source = cert.structure("source")
    target = cert.structure("target")
    closed = cert.get_optional("closed")
    u_symbols = tuple(closed.split()) if closed else None
    claimed = cert.get("kind")
    if claimed not in _KIND_RANK:
        return VerifyResult(False, "invalid-witness", f"unknown kind {claimed!r}")
    got = classify_map(_ints(cert.get("map")), source, target, u_symbols=u_symbols)
    if got is not None and _KIND_RANK[got] >= _KIND_RANK[claimed]:
        return VerifyResult(cert.expect == "holds", "holds")
    return VerifyResult(False, "fails", f"map classifies as {got}")


def _verify_order(cert: Certificate) -> VerifyResult:
    g = cert.structure("g")
    got = extend_linear_order(g)
    if isinstance(got, Structure):
        verdict = "completed"
        match = (
            cert.expect == "completed"
            and got.rels["<"] == _pairs(cert.get("linear"))
        )
    else:
        verdict = "fails"
        match = cert.expect == "fails" and _order_witness_field(got) in cert.fields
    return VerifyResult(match, verdict)


def _verify_poset(cert: Certificate) -> VerifyResult:
    g = cert.structure("g")
    got = complete_poset_linext(g)
    if isinstance(got, Structure):
        verdict = "completed"
        match = (
            cert.expect == "completed"
            and got.rels["<"] == _pairs(cert.get("linear"))
        )
    elif isinstance(got, InvariantViolation):
        verdict = "fails"
        match = (
            cert.expect == "fails"
            and cert.get_optional("clause") == str(got.clause)
            and _ints(cert.get_optional("pair") or "-") == got.pair
        )
    else:
        verdict = "fails"
        match = cert.expect == "fails" and _order_witness_field(got) in cert.fields
    return VerifyResult(match, verdict)


def _verify_metric(cert: Certificate) -> VerifyResult:
    g = structure_to_labelled_graph(cert.structure("g"))
    if cert.expect == "fails":
        cycle = _ints(cert.get("cycle"))
        labels = tuple(Fraction(w) for w in cert.get("cyclabels").split())
        try:
            NonMetricCycleWitness(cycle, labels)
        except InvalidInput as e:
            return VerifyResult(False, "invalid-witness", str(e))
        k = len(cycle)
        for i in range(k):
            u, v = cycle[i], cycle[(i + 1) % k]
            if g.label(u, v) != labels[i]:
                return VerifyResult(
                    False, "invalid-witness", f"edge ({u},{v}) does not carry {labels[i]}"
                )
        return VerifyResult(True, "fails")
    labels = {}
    for entry in cert.get_all("edge"):
        u, v, label = entry.split()
        labels[(int(u), int(v))] = Fraction(label)
    completed = EdgeLabelledGraph(g.size, labels)
    if not completed.is_complete():
        return VerifyResult(False, "invalid-witness", "labelling is not complete")
    for (u, v), label in g.labels.items():
        if completed.label(u, v) != Fraction(label):
            return VerifyResult(False, "invalid-witness", f"input label ({u},{v}) changed")
    for u in range(g.size):
        for v in range(u + 1, g.size):
            for w in range(g.size):
                if w in (u, v):
                    continue
                if completed.label(u, v) > completed.label(u, w) + completed.label(w, v):
                    return VerifyResult(
                        False, "invalid-witness", f"triangle ({u},{v},{w}) violated"
                    )
    return VerifyResult(True, "completed")


def _en_labelled_graph(s: Structure) -> EdgeLabelledGraph:
    labels = {}
    for name in ("E", "N"):
        if not s.language.is_relation(name):
            continue
        for u, v in s.rels[name]:
            key = (min(u, v), max(u, v))
            if labels.get(key, name) != name:
                raise InvalidInput(f"pair {key} carries both labels")
            labels[key] = name
    return EdgeLabelledGraph(s.size, labels)


def _verify_equiv(cert: Certificate) -> VerifyResult:
    g = _en_labelled_graph(cert.structure("g"))
    if cert.expect == "fails":
        cycle = _ints(cert.get("cycle"))
        labels = tuple(cert.get("cyclabels").split())
        if labels[0] != "N" or any(l != "E" for l in labels[1:]):
            return VerifyResult(False, "invalid-witness", "not one N edge plus an E path")
        k = len(cycle)
        for i in range(k):
            u, v = cycle[i], cycle[(i + 1) % k]
            if g.label(u, v) != labels[i]:
                return VerifyResult(
                    False, "invalid-witness", f"edge ({u},{v}) does not carry {labels[i]}"
                )
        return VerifyResult(True, "fails")
    labels = {}
    for entry in cert.get_all("edge"):
        u, v, label = entry.split()
        labels[(int(u), int(v))] = label
    completed = EdgeLabelledGraph(g.size, labels)
    if not completed.is_complete():
        return VerifyResult(False, "invalid-witness", "labelling is not complete")
    if any(label not in ("E", "N") for label in completed.labels.values()):
        return VerifyResult(False, "invalid-witness", "labels must be E or N")
    for (u, v), label in g.labels.items():
        if completed.label(u, v) != label:
            return VerifyResult(False, "invalid-witness", f"input label ({u},{v}) changed")
    for u in range(g.size):
        for v in range(g.size):
            for w in range(g.size):
                if len({u, v, w}) < 3:
                    continue
                if completed.label(u, v) == "E" and completed.label(v, w) == "E":
                    if completed.label(u, w) != "E":
                        return VerifyResult(
                            False, "invalid-witness", f"transitivity fails at ({u},{v},{w})"
                        )
    return VerifyResult(True, "completed")


def _verify_crel(cert: Certificate) -> VerifyResult:
    report = check_c_relation(cert.structure("g"))
    if report.ok:
        return VerifyResult(cert.expect == "holds", "holds")
    match = (
        cert.expect == "fails"
        and cert.get_optional("axiom") == str(report.axiom)
        and _ints(cert.get_optional("witness") or "-") == tuple(report.witness or ())
    )
    return VerifyResult(match, "fails")


def _verify_orientation(cert: Certificate) -> VerifyResult:
    g = cert.structure("g")
    if cert.expect == "fails":
        subset = set(_ints(cert.get("violation")))
        if not subset <= set(range(g.size)):
            return VerifyResult(False, "invalid-witness", "violation set out of range")
        m = sum(
            1 for u, v in undirected_edges(g) if u in subset and v in subset
        )
        if 2 * len(subset) - m < 0:
            return VerifyResult(True, "fails")
        return VerifyResult(False, "invalid-witness", "recorded set has delta >= 0")
    arcs = frozenset(tuple(_ints(entry)) for entry in cert.get_all("arc"))
    try:
        oriented = OrientedGraph(g, arcs)
    except InvalidInput as e:
        return VerifyResult(False, "invalid-witness", str(e))
    if not oriented.is_2orientation():
        return VerifyResult(False, "invalid-witness", "some outdegree exceeds two")
    if sum(oriented.roots().values()) != predimension(g):
        return VerifyResult(False, "invalid-witness", "root multiplicities do not sum to delta")
    return VerifyResult(cert.expect == "oriented", "oriented")


def _verify_eppa(cert: Certificate) -> VerifyResult:
    small = cert.structure("small")
    witness = cert.structure("witness")
    inclusion = _ints(cert.get("inclusion"))
    inc_kind = classify_map(inclusion, small, witness)
    if inc_kind is None or _KIND_RANK[inc_kind] < _KIND_RANK[EMBEDDING]:
        return VerifyResult(False, "invalid-witness", "inclusion is not an embedding")
    if cert.expect == "fails":
        dom_txt, img_txt = cert.get("failing").split()
        try:
            inst = EppaInstance(
                small,
                witness,
                _as_embedding(small, witness, inclusion),
            )
        except InvalidInput as e:
            return VerifyResult(False, "invalid-witness", str(e))
        report = is_eppa_witness(inst)
        match = (
            not report.ok
            and report.failing.domain == _ints(dom_txt)
            and report.failing.image == _ints(img_txt)
        )
        return VerifyResult(match, "fails")
    table = {}
    for row in cert.get_all("row"):
        dom_txt, img_txt, auto_txt = row.split()
        table[(_ints(dom_txt), _ints(img_txt))] = _ints(auto_txt)
    for p in enumerate_partial_automorphisms(small):
        key = (p.domain, p.image)
        if key not in table:
            return VerifyResult(
                False, "invalid-witness", f"table misses partial map {key}"
            )
        auto = table[key]
        if classify_map(auto, witness, witness) != ISOMORPHISM:
            return VerifyResult(
                False, "invalid-witness", f"row {key} is not an automorphism"
            )
        for v, w in zip(p.domain, p.image):
            if auto[inclusion[v]] != inclusion[w]:
                return VerifyResult(
                    False, "invalid-witness", f"row {key} does not extend its map"
                )
    return VerifyResult(cert.expect == "holds", "holds")


def _as_embedding(small, witness, inclusion):
    from .structures import EmbeddingMap

    kind = classify_map(inclusion, small, witness)
    return EmbeddingMap(small, witness, inclusion, kind)


def _verify_trace(cert: Certificate) -> VerifyResult:
    a = cert.structure("a")
    b = cert.structure("b")
    enumeration = cert.get("enumeration")
    if enumeration == ENUM_MONOTONE:
        d = int(cert.get("positions"))
    elif enumeration == ENUM_EMBEDDINGS:
        d = cert.structure("d")
    else:
        return VerifyResult(False, "invalid-witness", f"unknown enumeration {enumeration!r}")
    raw_policy = cert.get("policy")
    policy = raw_policy if raw_policy == "hj" else int(raw_policy)
    result = induced_construction(a, b, d, policy, enumeration=enumeration)
    recorded = cert.get_all("line")
    got = list(trace_lines(result))
    if got != recorded:
        return VerifyResult(False, "differs", "trace lines changed on replay")
    if result.mode != cert.get("mode"):
        return VerifyResult(False, "differs", "mode changed on replay")
    return VerifyResult(cert.expect == "succeeded", "succeeded")


def _verify_ba(cert: Certificate) -> VerifyResult:
    m, k = int(cert.get("m")), int(cert.get("k"))
    count = int(cert.get("count"))
    a = boolean_algebra_structure(k)
    b = boolean_algebra_structure(m)
    surjections = enumerate_rigid_surjections(m, k)
    if len(surjections) != count:
        return VerifyResult(False, "differs", f"recomputed {len(surjections)} surjections")
    for g in surjections:
        f = rigid_surjection_to_embedding(g, m, k)
        kind = classify_map(f, a, b)
        if kind is None or _KIND_RANK[kind] < _KIND_RANK[EMBEDDING]:
            return VerifyResult(False, "invalid-witness", f"{g} does not induce an embedding")
        if embedding_to_rigid_surjection(f, m, k) != g:
            return VerifyResult(False, "invalid-witness", f"round-trip fails for {g}")
    return VerifyResult(cert.expect == "holds", "holds")


def _verify_suborder(cert: Certificate) -> VerifyResult:
    from .orientations import substructure_order

    g = cert.structure("g")
    subset = _ints(cert.get("subset"))
    which = cert.get("which")
    holds = substructure_order(g, subset, which=which)
    verdict = "holds" if holds else "fails"
    return VerifyResult(verdict == cert.expect, verdict)


def _verify_coherence(cert: Certificate) -> VerifyResult:
    from .eppa import check_coherence

    small = cert.structure("small")
    witness = cert.structure("witness")
    inclusion = _ints(cert.get("inclusion"))
    inc_kind = classify_map(inclusion, small, witness)
    if inc_kind is None or _KIND_RANK[inc_kind] < _KIND_RANK[EMBEDDING]:
        return VerifyResult(False, "invalid-witness", "inclusion is not an embedding")
    inst = EppaInstance(small, witness, _as_embedding(small, witness, inclusion))
    report = is_eppa_witness(inst)
    if not report.ok:
        return VerifyResult(False, "invalid-witness", "not an extension witness at all")
    tabled = EppaInstance(small, witness, inst.inclusion, table=report.table)
    coherent = check_coherence(tabled)
    if coherent.ok:
        return VerifyResult(cert.expect == "coherent", "coherent")
    f, g = coherent.violating
    if cert.expect != "incoherent":
        return VerifyResult(False, "incoherent")
    match = (
        cert.get("f") == f"{_fmt_ints(f.domain)} {_fmt_ints(f.image)}"
        and cert.get("g") == f"{_fmt_ints(g.domain)} {_fmt_ints(g.image)}"
    )
    return VerifyResult(match, "incoherent")


_VERIFIERS = {
    "arrow": _verify_arrow,
    "tangent": _verify_tangent,
    "hj": _verify_hj,
    "embedding": _verify_embedding,
    "order": _verify_order,
    "poset": _verify_poset,
    "metric": _verify_metric,
    "equiv": _verify_equiv,
    "crel": _verify_crel,
    "orientation": _verify_orientation,
    "suborder": _verify_suborder,
    "eppa": _verify_eppa,
    "coherence": _verify_coherence,
    "trace": _verify_trace,
    "ba": _verify_ba,
}


def verify_certificate(cert: Certificate) -> VerifyResult:
    if cert.kind not in _VERIFIERS:
        raise InvalidInput(f"unknown certificate kind {cert.kind!r}")
    return _VERIFIERS[cert.kind](cert)
