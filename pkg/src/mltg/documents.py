"""Plain-text documents for hierarchies and rules, plus their JSON mirror.

Both formats are line oriented.  A hierarchy document lists graph blocks
top-down, one per level, the last block being the subject graph typed over
the chain formed by the others (a single-block document is its own depth-0
chain).  A rule document holds a META section declaring the rule's typing
chain, then FROM and TO sections declaring the two sides.

    graph generic_plant @ L1
    node Machine
    arrow creates: Machine -> Part
    type Machine @ L0:EClass
    const Machine              (rule META only)

    typing L2 -> L1            (hierarchy only: explicit override)
    map has => creates

Typing is declared through direct types only; the full typing family is
completed by composition.  Explicit ``typing`` blocks replace one completed
morphism wholesale, which is chiefly useful for writing deliberately
invalid documents that the validator should reject.

Canonical serialisation emits sorted elements and direct types and no
override blocks, so parse(serialize(model)) is the identity and
serialize(parse(doc)) is byte-identical on canonical documents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .chains import (
    DirectType,
    MultilevelTyping,
    TypingChain,
    ValidationReport,
    complete_direct_types,
    direct_type,
    validate_chain,
)
from .errors import ChainAxiomViolation, DanglingTypeReference, ParseError
from .graphs import ARROW, NODE, ElementId, Graph, PartialGraphMorphism, arrow_id, node_id
from .rules import Rule, build_rule

_GRAPH_RE = re.compile(r"^graph\s+(\S+)\s*@\s*L(\d+)$")
_NODE_RE = re.compile(r"^node\s+([^:@\s]+)$")
_ARROW_RE = re.compile(r"^arrow\s+([^:\s]+)\s*:\s*([^:@\s]+)\s*->\s*([^:@\s]+)$")
_TYPE_RE = re.compile(r"^type\s+(?:(node|arrow)\s+)?([^:@\s]+)\s*@\s*L(\d+):(\S+)$")
_CONST_RE = re.compile(r"^const\s+(?:(node|arrow)\s+)?([^:@\s]+)$")
_TYPING_RE = re.compile(r"^typing\s+L(\d+)\s*->\s*L(\d+)$")
_MAP_RE = re.compile(r"^map\s+(?:(node|arrow)\s+)?([^:@\s]+)\s*=>\s*(\S+)$")
_RULE_RE = re.compile(r"^rule\s+(\S+)$")
_SECTIONS = ("META", "FROM", "TO")


@dataclass
class TypeAnnotation:
    kind: str | None
    name: str
    level: int
    typename: str
    line: int


@dataclass
class GraphBlock:
    """One graph declaration with its annotations, as written."""

    name: str
    level: int
    line: int
    nodes: list[str] = field(default_factory=list)
    arrows: dict[str, tuple[str, str]] = field(default_factory=dict)
    types: list[TypeAnnotation] = field(default_factory=list)
    constants: list[tuple[str | None, str, int]] = field(default_factory=list)

    def to_graph(self) -> Graph:
        return Graph.of(self.nodes, self.arrows)

    def resolve_kind(self, kind: str | None, name: str, line: int) -> str:
        """Disambiguate a bare element reference against the block contents."""
        if kind is not None:
            present = name in self.nodes if kind == NODE else name in self.arrows
            if not present:
                raise ParseError(f"graph {self.name} has no {kind} named {name}", line)
            return kind
        is_node, is_arrow = name in self.nodes, name in self.arrows
        if is_node and is_arrow:
            raise ParseError(f"{name} names both a node and an arrow; say 'node {name}' or 'arrow {name}'", line)
        if not is_node and not is_arrow:
            raise ParseError(f"graph {self.name} has no element named {name}", line)
        return NODE if is_node else ARROW


@dataclass
class TypingOverride:
    upper: int
    lower: int
    line: int
    entries: list[tuple[str | None, str, str, int]] = field(default_factory=list)


@dataclass
class HierarchyDocument:
    """Parsed but not yet elaborated hierarchy file."""

    blocks: list[GraphBlock]
    overrides: list[TypingOverride]


@dataclass
class RuleDocument:
    name: str
    meta: list[GraphBlock]
    lhs: GraphBlock
    rhs: GraphBlock


@dataclass(frozen=True)
class Hierarchy:
    """Elaborated hierarchy: the typing chain plus the typed subject graph.

    ``names`` lists the document's graph names top-down.  When it has one
    more entry than the chain has levels, the last entry names the subject;
    otherwise the subject is the chain's own bottom graph.
    """

    names: tuple[str, ...]
    chain: TypingChain
    subject: MultilevelTyping

    @property
    def subject_name(self) -> str:
        return self.names[-1]

    @property
    def has_separate_subject(self) -> bool:
        return len(self.names) == self.chain.depth + 2


def _logical_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def _parse_blocks(lines: list[tuple[int, str]], allow_overrides: bool, allow_constants: bool):
    blocks: list[GraphBlock] = []
    overrides: list[TypingOverride] = []
    current: GraphBlock | None = None
    override: TypingOverride | None = None
    for lineno, line in lines:
        if m := _GRAPH_RE.match(line):
            current = GraphBlock(m.group(1), int(m.group(2)), lineno)
            override = None
            blocks.append(current)
            continue
        if m := _TYPING_RE.match(line):
            if not allow_overrides:
                raise ParseError("typing overrides are not allowed here", lineno)
            override = TypingOverride(int(m.group(1)), int(m.group(2)), lineno)
            current = None
            overrides.append(override)
            continue
        if m := _MAP_RE.match(line):
            if override is None:
                raise ParseError("map line outside a typing block", lineno)
            override.entries.append((m.group(1), m.group(2), m.group(3), lineno))
            continue
        if current is None:
            raise ParseError(f"unexpected line outside a graph block: {line!r}", lineno)
        if m := _NODE_RE.match(line):
            if m.group(1) in current.nodes:
                raise ParseError(f"duplicate node {m.group(1)} in graph {current.name}", lineno)
            current.nodes.append(m.group(1))
        elif m := _ARROW_RE.match(line):
            name, s, t = m.groups()
            if name in current.arrows:
                raise ParseError(f"duplicate arrow {name} in graph {current.name}", lineno)
            current.arrows[name] = (s, t)
        elif m := _TYPE_RE.match(line):
            current.types.append(TypeAnnotation(m.group(1), m.group(2), int(m.group(3)), m.group(4), lineno))
        elif m := _CONST_RE.match(line):
            if not allow_constants:
                raise ParseError("const declarations belong in a rule's META section", lineno)
            current.constants.append((m.group(1), m.group(2), lineno))
        else:
            raise ParseError(f"cannot parse line: {line!r}", lineno)
    return blocks, overrides


def parse_hierarchy_document(text: str) -> HierarchyDocument:
    blocks, overrides = _parse_blocks(_logical_lines(text), allow_overrides=True, allow_constants=False)
    if not blocks:
        raise ParseError("a hierarchy document needs at least one graph block")
    for position, block in enumerate(blocks):
        if block.level != position:
            raise ParseError(
                f"graph {block.name} is declared at level {block.level} but sits at position {position}",
                block.line,
            )
    return HierarchyDocument(blocks, overrides)


def _direct_types_of(block: GraphBlock) -> dict[ElementId, DirectType]:
    out: dict[ElementId, DirectType] = {}
    for ann in block.types:
        kind = block.resolve_kind(ann.kind, ann.name, ann.line)
        elem = ElementId(kind, ann.name)
        if elem in out:
            raise ParseError(f"{elem} has two direct-type annotations", ann.line)
        out[elem] = DirectType(ann.level, ElementId(kind, ann.typename))
    return out


def _build_graphs(blocks: list[GraphBlock]) -> list[Graph]:
    graphs = []
    for block in blocks:
        try:
            graphs.append(block.to_graph())
        except Exception as exc:
            raise ParseError(f"graph {block.name}: {exc}", block.line) from None
    return graphs


def _chain_of(blocks: list[GraphBlock], overrides: list[TypingOverride]) -> TypingChain:
    graphs = _build_graphs(blocks)
    direct = {
        (level, elem): dt
        for level, block in enumerate(blocks)
        for elem, dt in _direct_types_of(block).items()
    }
    typings = complete_direct_types(graphs, direct)
    for ov in overrides:
        j, i = ov.upper, ov.lower
        if not 0 <= i < j < len(graphs):
            raise ParseError(f"typing override L{j} -> L{i} does not name two chain levels", ov.line)
        node_map, arrow_map = {}, {}
        for kind, name, target, lineno in ov.entries:
            kind = blocks[j].resolve_kind(kind, name, lineno)
            if ElementId(kind, target) not in graphs[i]:
                raise DanglingTypeReference(f"override maps {name} to missing {kind} {target} at level {i}")
            (node_map if kind == NODE else arrow_map)[name] = target
        typings[(j, i)] = PartialGraphMorphism.of(graphs[j], graphs[i], node_map, arrow_map)
    chain = TypingChain(graphs, typings)
    report = validate_chain(chain)
    if not report.ok:
        raise ChainAxiomViolation(str(report), report)
    return chain


def elaborate_hierarchy(doc: HierarchyDocument) -> Hierarchy:
    """Turn a parsed document into a validated chain and typed subject."""
    if len(doc.blocks) == 1:
        block = doc.blocks[0]
        if block.types:
            raise ParseError("a single-graph document has no level to type over", block.types[0].line)
        graph = _build_graphs(doc.blocks)[0]
        chain = _chain_of(doc.blocks, doc.overrides)
        subject = MultilevelTyping.from_direct_types(
            graph, chain, {e: DirectType(0, e) for e in graph.elements()}
        )
        return Hierarchy((block.name,), chain, subject)

    chain_blocks, subject_block = doc.blocks[:-1], doc.blocks[-1]
    for ov in doc.overrides:
        if ov.upper >= len(chain_blocks):
            raise ParseError("typing overrides apply to chain levels, not the subject", ov.line)
    chain = _chain_of(chain_blocks, doc.overrides)
    subject_graph = _build_graphs([subject_block])[0]
    subject = MultilevelTyping.from_direct_types(subject_graph, chain, _direct_types_of(subject_block))
    return Hierarchy(tuple(b.name for b in doc.blocks), chain, subject)


def parse_hierarchy(text: str) -> Hierarchy:
    """Parse and elaborate in one go; the usual entry point."""
    return elaborate_hierarchy(parse_hierarchy_document(text))


def parse_rule_document(text: str) -> RuleDocument:
    lines = _logical_lines(text)
    if not lines or not (m := _RULE_RE.match(lines[0][1])):
        raise ParseError("a rule document starts with 'rule <name>'", lines[0][0] if lines else 1)
    name = m.group(1)
    sections: dict[str, list[tuple[int, str]]] = {}
    label = None
    for lineno, line in lines[1:]:
        if line in _SECTIONS:
            if line in sections:
                raise ParseError(f"duplicate {line} section", lineno)
            label = line
            sections[label] = []
            continue
        if label is None:
            raise ParseError("rule content before the META section", lineno)
        sections[label].append((lineno, line))
    missing = [s for s in _SECTIONS if s not in sections]
    if missing:
        raise ParseError(f"rule {name} is missing sections: {', '.join(missing)}")

    meta, _ = _parse_blocks(sections["META"], allow_overrides=False, allow_constants=True)
    if not meta:
        raise ParseError("META must declare at least one graph")
    for position, block in enumerate(meta):
        if block.level != position:
            raise ParseError(f"META graph {block.name} out of order", block.line)

    sides = []
    for label in ("FROM", "TO"):
        body = [(lineno, line) for lineno, line in sections[label]]
        block = GraphBlock(name=label, level=0, line=0)
        parsed, _ = _parse_blocks(
            [(body[0][0] if body else 1, f"graph {label} @ L0")] + body,
            allow_overrides=False,
            allow_constants=False,
        )
        sides.append(parsed[0])
    return RuleDocument(name, meta, sides[0], sides[1])


def elaborate_rule(doc: RuleDocument) -> Rule:
    mm = _chain_of(doc.meta, [])
    constants = frozenset(
        (level, ElementId(block.resolve_kind(kind, name, lineno), name))
        for level, block in enumerate(doc.meta)
        for kind, name, lineno in block.constants
    )
    typings = []
    for block in (doc.lhs, doc.rhs):
        graph = _build_graphs([block])[0]
        typings.append(MultilevelTyping.from_direct_types(graph, mm, _direct_types_of(block)))
    return build_rule(doc.name, typings[0], typings[1], constants)


def parse_rule(text: str) -> Rule:
    return elaborate_rule(parse_rule_document(text))


# ---------------------------------------------------------------------------
# Serialisation


def _needs_kind(graph: Graph, name: str) -> bool:
    return name in graph.nodes and name in graph.arrows


def _serialize_graph_body(graph: Graph, types: dict[ElementId, DirectType]) -> list[str]:
    lines = [f"node {n}" for n in sorted(graph.nodes)]
    lines += [f"arrow {a}: {s} -> {t}" for a, (s, t) in sorted(graph.arrows.items())]
    for elem in sorted(types, key=lambda e: (e.kind != NODE, e.name)):
        dt = types[elem]
        kind = f"{elem.kind} " if _needs_kind(graph, elem.name) else ""
        lines.append(f"type {kind}{elem.name} @ L{dt.level}:{dt.element.name}")
    return lines


def serialize_hierarchy(h: Hierarchy) -> str:
    """Canonical text form: sorted elements, direct types only."""
    chunks = []
    for level in range(h.chain.depth + 1):
        graph = h.chain.graph(level)
        types = {}
        if level > 0:
            for elem in graph.elements():
                dt = direct_type(h.chain, level, elem)
                if dt is not None:
                    types[elem] = dt
        block = [f"graph {h.names[level]} @ L{level}"]
        block += _serialize_graph_body(graph, types)
        chunks.append("\n".join(block))
    if h.has_separate_subject:
        types = {}
        for elem in h.subject.subject.elements():
            dt = h.subject.direct_type_of(elem)
            if dt is not None:
                types[elem] = DirectType(dt.level, dt.element)
        block = [f"graph {h.subject_name} @ L{h.chain.depth + 1}"]
        block += _serialize_graph_body(h.subject.subject, types)
        chunks.append("\n".join(block))
    return "\n\n".join(chunks) + "\n"


def hierarchy_to_json(h: Hierarchy) -> dict:
    """JSON mirror of the canonical document."""
    out = {"graphs": []}
    for level in range(h.chain.depth + 1):
        graph = h.chain.graph(level)
        types = {}
        if level > 0:
            for elem in graph.elements():
                dt = direct_type(h.chain, level, elem)
                if dt is not None:
                    types[str(elem)] = {"level": dt.level, "element": dt.element.name}
        out["graphs"].append(_graph_json(h.names[level], level, graph, types))
    if h.has_separate_subject:
        types = {
            str(elem): {"level": dt.level, "element": dt.element.name}
            for elem in h.subject.subject.elements()
            if (dt := h.subject.direct_type_of(elem)) is not None
        }
        out["graphs"].append(
            _graph_json(h.subject_name, h.chain.depth + 1, h.subject.subject, types)
        )
    return out


def _graph_json(name: str, level: int, graph: Graph, types: dict) -> dict:
    return {
        "name": name,
        "level": level,
        "nodes": sorted(graph.nodes),
        "arrows": {a: {"src": s, "tgt": t} for a, (s, t) in sorted(graph.arrows.items())},
        "types": types,
    }


def report_to_json(report: ValidationReport) -> list[dict]:
    return [
        {
            "axiom": issue.axiom,
            "levels": list(issue.levels),
            "element": str(issue.element) if issue.element else None,
            "message": issue.message,
        }
        for issue in report
    ]


def bump_name(name: str) -> str:
    """Successor name for result documents: trailing integer + 1, else _1."""
    m = re.match(r"^(.*?)(\d+)$", name)
    if m:
        return f"{m.group(1)}{int(m.group(2)) + 1}"
    return f"{name}_1"
