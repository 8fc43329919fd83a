"""Typing chains, typing chain morphisms, and reducts.

A typing chain stacks graphs ``G_n .. G_0`` (index 0 is the most abstract,
top level) and relates every pair of levels by a partial typing morphism.
Three axioms govern the family: every level is totally typed over the top,
typing composes consistently downward (transitive), and any two typings of
the same element are related through the intermediate level (connex).

All morphism families are stored fully materialised, one partial morphism
per level pair, so the axioms can be checked directly.  The alternative
fringe representation (one direct type per element) is supported through
the ``from_direct_types`` constructors, which complete the family by
composing along each element's direct type and then validate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    ChainAxiomViolation,
    ChainMismatch,
    DanglingTypeReference,
    DepthMismatch,
    HomomorphismViolation,
    NotASubgraph,
    SignatureMismatch,
    UnknownElement,
)
from .graphs import (
    ARROW,
    NODE,
    ElementId,
    Graph,
    GraphMorphism,
    PartialGraphMorphism,
    compose_partial,
    eq_partial,
    leq_partial,
)


@dataclass(frozen=True)
class ValidationIssue:
    """One violated chain axiom with its witnessing levels and element."""

    axiom: str
    levels: tuple[int, ...]
    element: ElementId | None
    message: str

    def __str__(self) -> str:
        where = ",".join(str(l) for l in self.levels)
        elem = f" at {self.element}" if self.element else ""
        return f"[{self.axiom}] levels ({where}){elem}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    def __iter__(self):
        return iter(self.issues)

    def __str__(self) -> str:
        return "valid" if self.ok else "\n".join(str(i) for i in self.issues)


@dataclass(frozen=True)
class DirectType:
    """The type of an element at the nearest level above that defines it."""

    level: int
    element: ElementId


@dataclass(frozen=True)
class TypingChain:
    """Graphs ``G_n .. G_0`` with one partial typing morphism per level pair.

    ``graphs[i]`` is the graph at level ``i``; ``typings[(j, i)]`` types
    level ``j`` over level ``i`` for every ``j > i``.  Construction checks
    shapes and signatures only; the axioms are the business of
    :func:`validate_chain`.
    """

    graphs: tuple[Graph, ...]
    typings: Mapping[tuple[int, int], PartialGraphMorphism] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        object.__setattr__(self, "typings", dict(self.typings))
        if not self.graphs:
            raise DepthMismatch("a typing chain needs at least the top graph")
        n = self.depth
        expected = {(j, i) for j in range(1, n + 1) for i in range(j)}
        if set(self.typings) != expected:
            raise SignatureMismatch("typing family must cover exactly the level pairs j > i")
        for (j, i), tau in self.typings.items():
            if tau.dom != self.graphs[j] or tau.cod != self.graphs[i]:
                raise SignatureMismatch(f"typing {j}->{i} does not run between the level graphs")

    def __hash__(self) -> int:
        return hash((self.graphs, tuple(sorted(self.typings.items(), key=lambda kv: kv[0]))))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TypingChain):
            return NotImplemented
        return self.graphs == other.graphs and self.typings == other.typings

    @property
    def depth(self) -> int:
        return len(self.graphs) - 1

    def graph(self, level: int) -> Graph:
        return self.graphs[level]

    def typing(self, j: int, i: int) -> PartialGraphMorphism:
        return self.typings[(j, i)]

    @classmethod
    def single(cls, top: Graph) -> "TypingChain":
        return cls((top,), {})

    @classmethod
    def from_direct_types(
        cls,
        graphs: Sequence[Graph],
        direct: Mapping[tuple[int, ElementId], DirectType],
    ) -> "TypingChain":
        """Complete a direct-type fringe into a full typing family.

        ``direct`` assigns each element of each graph below the top its
        direct type; the remaining typings are obtained by composing along
        that assignment.  The completed chain is validated and rejected as a
        whole if any axiom fails.
        """
        graphs = tuple(graphs)
        chain = cls(graphs, complete_direct_types(graphs, direct))
        report = validate_chain(chain)
        if not report.ok:
            raise ChainAxiomViolation(str(report), report)
        return chain


def _type_vectors(
    graphs: Sequence[Graph],
    direct: Mapping[tuple[int, ElementId], DirectType],
) -> dict[tuple[int, ElementId], dict[int, ElementId]]:
    """Per-element typing across all levels, derived from direct types.

    The vector of an element typed directly at level ``d`` extends the
    vector of its direct type: wherever the type is typed, so is the
    element.  Levels are processed top-down so type vectors above are
    already complete.
    """
    vectors: dict[tuple[int, ElementId], dict[int, ElementId]] = {}
    for level, g in enumerate(graphs):
        for elem in g.elements():
            if level == 0:
                vectors[(0, elem)] = {}
                continue
            dt = direct.get((level, elem))
            if dt is None:
                vectors[(level, elem)] = {}
                continue
            if not 0 <= dt.level < level:
                raise DanglingTypeReference(
                    f"{elem} at level {level} declares a type at level {dt.level}, which is not above it"
                )
            if dt.element.kind != elem.kind:
                raise DanglingTypeReference(f"{elem} cannot be typed by the {dt.element.kind} {dt.element.name}")
            if dt.element not in graphs[dt.level]:
                raise DanglingTypeReference(f"{elem} references missing {dt.element} at level {dt.level}")
            vec = {dt.level: dt.element}
            for k, v in vectors[(dt.level, dt.element)].items():
                vec[k] = v
            vectors[(level, elem)] = vec
    return vectors


def complete_direct_types(
    graphs: Sequence[Graph],
    direct: Mapping[tuple[int, ElementId], DirectType],
) -> dict[tuple[int, int], PartialGraphMorphism]:
    """Typing family obtained by composing along the direct-type fringe."""
    return _typings_from_vectors(graphs, _type_vectors(graphs, direct))


def _typings_from_vectors(
    graphs: Sequence[Graph],
    vectors: Mapping[tuple[int, ElementId], Mapping[int, ElementId]],
) -> dict[tuple[int, int], PartialGraphMorphism]:
    typings = {}
    for j in range(1, len(graphs)):
        for i in range(j):
            node_map, arrow_map = {}, {}
            for elem in graphs[j].elements():
                img = vectors[(j, elem)].get(i)
                if img is None:
                    continue
                (node_map if elem.kind == NODE else arrow_map)[elem.name] = img.name
            try:
                typings[(j, i)] = PartialGraphMorphism.of(graphs[j], graphs[i], node_map, arrow_map)
            except (HomomorphismViolation, NotASubgraph) as exc:
                raise ChainAxiomViolation(f"typing {j}->{i} is not a graph morphism: {exc}") from exc
    return typings


def validate_chain(chain: TypingChain) -> ValidationReport:
    """Check the total/transitive/connex axioms, reporting every violation."""
    issues: list[ValidationIssue] = []
    n = chain.depth
    for j in range(1, n + 1):
        tau = chain.typing(j, 0)
        if not tau.is_total():
            for elem in chain.graph(j).elements():
                if not tau.defines(elem):
                    issues.append(
                        ValidationIssue("total", (j, 0), elem, "element has no type at the top level")
                    )
    for k in range(2, n + 1):
        for j in range(1, k):
            for i in range(j):
                composite = compose_partial(chain.typing(k, j), chain.typing(j, i))
                direct = chain.typing(k, i)
                for elem in composite.defined_on.elements():
                    if not direct.defines(elem):
                        issues.append(
                            ValidationIssue("transitive", (k, j, i), elem, "composite typing is not subsumed")
                        )
                    elif composite.apply(elem) != direct.apply(elem):
                        issues.append(
                            ValidationIssue("transitive", (k, j, i), elem, "composite typing disagrees")
                        )
                overlap = chain.typing(k, j).defined_on.intersect(direct.defined_on)
                for elem in overlap.elements():
                    if not composite.defines(elem):
                        issues.append(
                            ValidationIssue(
                                "connex", (k, j, i), elem, "typed at both levels but not through the middle one"
                            )
                        )
    return ValidationReport(tuple(issues))


def direct_type(chain: TypingChain, level: int, elem: ElementId) -> DirectType | None:
    """Type at the greatest level below ``level`` defining the element.

    Returns ``None`` only for elements no typing covers, which a valid
    chain never produces at levels above the top.
    """
    if elem not in chain.graph(level):
        raise UnknownElement(f"{elem} is not at level {level}")
    for i in range(level - 1, -1, -1):
        tau = chain.typing(level, i)
        if tau.defines(elem):
            return DirectType(i, tau.apply(elem))
    return None


def transitive_types(chain: TypingChain, level: int, elem: ElementId) -> list[tuple[int, ElementId]]:
    """All types strictly below the direct one, deepest first."""
    dt = direct_type(chain, level, elem)
    if dt is None:
        return []
    out = []
    for i in range(dt.level - 1, -1, -1):
        tau = chain.typing(level, i)
        if tau.defines(elem):
            out.append((i, tau.apply(elem)))
    return out


@dataclass(frozen=True, eq=False)
class InclusionChain(TypingChain):
    """Typing chain whose graphs are subgraphs of its level-0 graph and whose
    typings are the intersection inclusions."""

    @property
    def host(self) -> Graph:
        return self.graphs[0]

    @classmethod
    def on(cls, host: Graph, subgraphs: Sequence[Graph]) -> "InclusionChain":
        """Extend subgraphs ``[H_n .. H_1]`` of ``host`` into an inclusion chain."""
        for sub in subgraphs:
            if not sub.is_subgraph_of(host):
                raise NotASubgraph("inclusion chain members must be subgraphs of the host")
        graphs = (host, *reversed(tuple(subgraphs)))
        typings = {}
        for j in range(1, len(graphs)):
            for i in range(j):
                overlap = graphs[j].intersect(graphs[i])
                typings[(j, i)] = PartialGraphMorphism(
                    graphs[j], graphs[i], overlap, GraphMorphism.inclusion(overlap, graphs[i])
                )
        return cls(graphs, typings)

    def level_of(self, elem: ElementId) -> int:
        """Greatest level whose subgraph still contains the element."""
        if elem not in self.host:
            raise UnknownElement(f"{elem} is not in the host graph")
        return max(i for i, g in enumerate(self.graphs) if elem in g)


def inclusion_chain(host: Graph, subgraphs: Sequence[Graph]) -> InclusionChain:
    return InclusionChain.on(host, subgraphs)


@dataclass(frozen=True)
class LevelMap:
    """Monotone relabelling of levels ``[n] -> [m]`` anchored at the top.

    The gap law ``f(j) - f(i) >= j - i`` keeps distinct levels separated, so
    a rule written over a short chain can sink into a taller one without
    collapsing levels.
    """

    source_depth: int
    target_depth: int
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source_depth + 1:
            raise DepthMismatch("level map must assign every source level")
        if self.images and self.images[0] != 0:
            raise DepthMismatch("level maps are anchored: the top level maps to the top")
        for i in range(self.source_depth):
            if self.images[i + 1] - self.images[i] < 1:
                raise DepthMismatch("level maps must advance by at least one per level")
        if any(v > self.target_depth for v in self.images):
            raise DepthMismatch("level map overshoots the target depth")

    def __call__(self, i: int) -> int:
        return self.images[i]

    @classmethod
    def identity(cls, n: int) -> "LevelMap":
        return cls(n, n, tuple(range(n + 1)))

    def then(self, other: "LevelMap") -> "LevelMap":
        if self.target_depth != other.source_depth:
            raise DepthMismatch("level maps do not compose")
        return LevelMap(self.source_depth, other.target_depth, tuple(other.images[v] for v in self.images))

    def image_levels(self) -> frozenset[int]:
        return frozenset(self.images)


@dataclass(frozen=True)
class TypingChainMorphism:
    """Level map plus one total homomorphism per source level.

    ``maps[i]`` runs from the source level-``i`` graph into the target graph
    at level ``levels(i)``.  Construction checks signatures; the
    compatibility law is checked by :func:`check_compatibility` and enforced
    by :meth:`checked`.
    """

    src: TypingChain
    dst: TypingChain
    levels: LevelMap
    maps: tuple[GraphMorphism, ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        if self.levels.source_depth != self.src.depth or self.levels.target_depth != self.dst.depth:
            raise DepthMismatch("level map does not fit the two chains")
        if len(self.maps) != self.src.depth + 1:
            raise DepthMismatch("one graph morphism per source level is required")
        for i, m in enumerate(self.maps):
            if m.dom != self.src.graph(i) or m.cod != self.dst.graph(self.levels(i)):
                raise SignatureMismatch(f"map at level {i} does not run between the mapped level graphs")

    def __hash__(self) -> int:
        return hash((self.src, self.dst, self.levels, self.maps))

    @classmethod
    def checked(
        cls,
        src: TypingChain,
        dst: TypingChain,
        levels: LevelMap,
        maps: Iterable[GraphMorphism],
    ) -> "TypingChainMorphism":
        morphism = cls(src, dst, levels, tuple(maps))
        bad = check_compatibility(morphism)
        if bad:
            raise ChainAxiomViolation("; ".join(str(b) for b in bad))
        return morphism

    @classmethod
    def identity(cls, chain: TypingChain) -> "TypingChainMorphism":
        return cls(
            chain,
            chain,
            LevelMap.identity(chain.depth),
            tuple(GraphMorphism.identity(chain.graph(i)) for i in range(chain.depth + 1)),
        )

    def map(self, i: int) -> GraphMorphism:
        return self.maps[i]

    def is_reduct(self) -> bool:
        """True iff every level is the full preimage of its target level.

        Meaningful for morphisms between inclusion chains: being a reduct is
        equivalent to closedness plus levelwise pullback squares.
        """
        phi0 = self.maps[0]
        for j in range(1, self.src.depth + 1):
            if phi0.preimage_of(self.dst.graph(self.levels(j))) != self.src.graph(j):
                return False
            expected = phi0.restrict_to(self.src.graph(j), self.dst.graph(self.levels(j)))
            if self.maps[j] != expected:
                return False
        return True


def check_compatibility(m: TypingChainMorphism) -> list[ValidationIssue]:
    """Violations of the ordering law relating the two typing families.

    For every pair ``j > i`` the source typing followed by the level-``i``
    map must be extended by the level-``j`` map followed by the target
    typing.
    """
    issues = []
    for j in range(1, m.src.depth + 1):
        for i in range(j):
            lhs = compose_partial(m.src.typing(j, i), PartialGraphMorphism.from_total(m.maps[i]))
            rhs = compose_partial(
                PartialGraphMorphism.from_total(m.maps[j]),
                m.dst.typing(m.levels(j), m.levels(i)),
            )
            if not leq_partial(lhs, rhs):
                witness = next(
                    (
                        e
                        for e in lhs.defined_on.elements()
                        if not rhs.defines(e) or lhs.apply(e) != rhs.apply(e)
                    ),
                    None,
                )
                issues.append(
                    ValidationIssue("compatibility", (j, i), witness, "typing does not carry over the morphism")
                )
    return issues


def is_closed(m: TypingChainMorphism) -> bool:
    """True iff the compatibility law holds with equality at every pair."""
    for j in range(1, m.src.depth + 1):
        for i in range(j):
            lhs = compose_partial(m.src.typing(j, i), PartialGraphMorphism.from_total(m.maps[i]))
            rhs = compose_partial(
                PartialGraphMorphism.from_total(m.maps[j]),
                m.dst.typing(m.levels(j), m.levels(i)),
            )
            if not eq_partial(lhs, rhs):
                return False
    return True


def compose_chain_morphisms(a: TypingChainMorphism, b: TypingChainMorphism) -> TypingChainMorphism:
    """Compose levelwise: the second family is sampled at the mapped levels."""
    if a.dst != b.src:
        raise ChainMismatch("chain morphisms do not share the middle chain")
    return TypingChainMorphism(
        a.src,
        b.dst,
        a.levels.then(b.levels),
        tuple(a.maps[i].then(b.maps[a.levels(i)]) for i in range(a.src.depth + 1)),
    )


@dataclass(frozen=True)
class ReductResult:
    chain: InclusionChain
    morphism: TypingChainMorphism


def reduct(target: InclusionChain, phi0: GraphMorphism, levels: LevelMap) -> ReductResult:
    """Pull an inclusion chain back along a homomorphism into its host.

    Level ``j`` of the result is the full preimage of the target graph at
    level ``levels(j)``; the morphism maps are the restrictions of ``phi0``.
    The result is always a closed chain morphism whose squares are pullbacks.
    """
    if phi0.cod != target.host:
        raise SignatureMismatch("reduct base must map into the host of the target chain")
    if levels.target_depth != target.depth:
        raise DepthMismatch("level map does not reach the target chain's depth")
    subgraphs = [phi0.preimage_of(target.graph(levels(j))) for j in range(levels.source_depth, 0, -1)]
    chain = InclusionChain.on(phi0.dom, subgraphs)
    maps = tuple(
        phi0.restrict_to(chain.graph(j), target.graph(levels(j))) for j in range(levels.source_depth + 1)
    )
    return ReductResult(chain, TypingChainMorphism(chain, target, levels, maps))


@dataclass(frozen=True)
class MultilevelTyping:
    """A graph typed over a chain: an inclusion chain on the subject plus an
    identity-levels chain morphism into the target chain.

    Level ``i`` of the inclusion chain collects the subject elements that
    have a type at target level ``i``.
    """

    subject: Graph
    chain: InclusionChain
    typing: TypingChainMorphism

    def __post_init__(self):
        if self.chain.host != self.subject:
            raise SignatureMismatch("inclusion chain must live on the subject graph")
        if self.typing.src != self.chain:
            raise SignatureMismatch("typing morphism must start at the subject's inclusion chain")
        if self.typing.levels != LevelMap.identity(self.chain.depth):
            raise DepthMismatch("a multilevel typing uses the identity level map")

    @property
    def target(self) -> TypingChain:
        return self.typing.dst

    @property
    def depth(self) -> int:
        return self.chain.depth

    def level_graph(self, i: int) -> Graph:
        return self.chain.graph(i)

    def type_at(self, elem: ElementId, level: int) -> ElementId | None:
        if elem not in self.level_graph(level):
            return None
        return self.typing.map(level).apply(elem)

    def direct_type_of(self, elem: ElementId) -> DirectType:
        """Deepest type of a subject element; level 0 at the latest, since
        the bottom of the inclusion chain is the whole subject."""
        for i in range(self.depth, 0, -1):
            if elem in self.level_graph(i):
                return DirectType(i, self.typing.map(i).apply(elem))
        return DirectType(0, self.typing.map(0).apply(elem))

    @classmethod
    def from_direct_types(
        cls,
        subject: Graph,
        target: TypingChain,
        direct: Mapping[ElementId, DirectType],
    ) -> "MultilevelTyping":
        """Type a subject over a chain from one direct type per element.

        Each element must name a type somewhere in the target chain; its
        remaining types follow by composing with the chain's own typings.
        """
        vectors: dict[ElementId, dict[int, ElementId]] = {}
        for elem in subject.elements():
            dt = direct.get(elem)
            if dt is None:
                vectors[elem] = {}
                continue
            if not 0 <= dt.level <= target.depth:
                raise DanglingTypeReference(f"{elem} references level {dt.level}, outside the chain")
            if dt.element.kind != elem.kind or dt.element not in target.graph(dt.level):
                raise DanglingTypeReference(f"{elem} references missing {dt.element} at level {dt.level}")
            vec = {dt.level: dt.element}
            for i in range(dt.level - 1, -1, -1):
                tau = target.typing(dt.level, i)
                if tau.defines(dt.element):
                    vec[i] = tau.apply(dt.element)
            vectors[elem] = vec

        maps_raw: list[tuple[dict[str, str], dict[str, str]]] = []
        for i in range(target.depth + 1):
            node_map = {e.name: v[i].name for e, v in vectors.items() if e.kind == NODE and i in v}
            arrow_map = {e.name: v[i].name for e, v in vectors.items() if e.kind == ARROW and i in v}
            maps_raw.append((node_map, arrow_map))
        try:
            subgraphs = [
                subject.restrict(maps_raw[i][0].keys(), maps_raw[i][1].keys())
                for i in range(target.depth, 0, -1)
            ]
            chain = InclusionChain.on(subject, subgraphs)
            maps = [
                GraphMorphism(chain.graph(i), target.graph(i), *maps_raw[i])
                for i in range(target.depth + 1)
            ]
        except (HomomorphismViolation, NotASubgraph) as exc:
            raise ChainAxiomViolation(f"direct types do not induce a typing morphism: {exc}") from exc
        return cls(subject, chain, TypingChainMorphism.checked(chain, target, LevelMap.identity(target.depth), maps))
