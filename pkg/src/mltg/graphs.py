"""Finite directed multigraphs and their (total and partial) homomorphisms.

A graph is a finite set of named nodes plus a finite set of named arrows,
each arrow carrying a source and a target node.  Node and arrow names live
in disjoint namespaces: a node ``x`` and an arrow ``x`` may coexist.

Partial homomorphisms are represented by an explicit *domain of definition*
subgraph together with a total homomorphism out of it, so the subgraph
invariant (arrows defined only when their endpoints are) is directly
assertable rather than implied by an option-valued map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import (
    CodomainMismatch,
    HomomorphismViolation,
    NotASubgraph,
    NotInclusion,
    SignatureMismatch,
    UnknownElement,
)

NODE = "node"
ARROW = "arrow"


@dataclass(frozen=True, order=True)
class ElementId:
    """A named node or arrow; ``kind`` is ``"node"`` or ``"arrow"``."""

    kind: str
    name: str

    def __str__(self) -> str:
        return f"{self.kind}:{self.name}"


def node_id(name: str) -> ElementId:
    return ElementId(NODE, name)


def arrow_id(name: str) -> ElementId:
    return ElementId(ARROW, name)


@dataclass(frozen=True)
class Graph:
    """Finite directed multigraph with named nodes and arrows."""

    nodes: frozenset[str]
    arrows: Mapping[str, tuple[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "arrows", dict(self.arrows))
        for a, (s, t) in self.arrows.items():
            if s not in self.nodes or t not in self.nodes:
                raise NotASubgraph(f"arrow {a}: {s} -> {t} has endpoints outside the node set")

    def __hash__(self) -> int:
        return hash((self.nodes, tuple(sorted(self.arrows.items()))))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.nodes == other.nodes and self.arrows == other.arrows

    @classmethod
    def of(cls, nodes: Iterable[str] = (), arrows: Mapping[str, tuple[str, str]] | None = None) -> "Graph":
        return cls(frozenset(nodes), dict(arrows or {}))

    @classmethod
    def empty(cls) -> "Graph":
        return cls(frozenset(), {})

    def src(self, arrow: str) -> str:
        return self.arrows[arrow][0]

    def tgt(self, arrow: str) -> str:
        return self.arrows[arrow][1]

    def elements(self) -> Iterator[ElementId]:
        for n in sorted(self.nodes):
            yield node_id(n)
        for a in sorted(self.arrows):
            yield arrow_id(a)

    def __contains__(self, elem: ElementId) -> bool:
        if elem.kind == NODE:
            return elem.name in self.nodes
        return elem.name in self.arrows

    def size(self) -> tuple[int, int]:
        return len(self.nodes), len(self.arrows)

    def is_subgraph_of(self, host: "Graph") -> bool:
        """True iff nodes/arrows are subsets of the host's and src/tgt agree."""
        if not self.nodes <= host.nodes:
            return False
        return all(a in host.arrows and host.arrows[a] == st for a, st in self.arrows.items())

    def restrict(self, nodes: Iterable[str], arrows: Iterable[str]) -> "Graph":
        """Subgraph on the given member sets; fails if arrows lose an endpoint."""
        ns = frozenset(nodes) & self.nodes
        ar = {a: self.arrows[a] for a in arrows if a in self.arrows}
        return Graph(ns, ar)

    def intersect(self, other: "Graph") -> "Graph":
        """Elementwise intersection of two subgraphs of a common host."""
        ns = self.nodes & other.nodes
        ar = {a: st for a, st in self.arrows.items() if other.arrows.get(a) == st}
        return Graph(ns, ar)

    def union(self, other: "Graph") -> "Graph":
        """Shared-name union; a common arrow name must agree on endpoints."""
        for a, st in other.arrows.items():
            if a in self.arrows and self.arrows[a] != st:
                raise CodomainMismatch(f"arrow {a} has conflicting endpoints in the two graphs")
        ar = dict(self.arrows)
        ar.update(other.arrows)
        return Graph(self.nodes | other.nodes, ar)


def is_subgraph(g: Graph, h: Graph) -> bool:
    """Containment check underpinning every inclusion in the engine."""
    return g.is_subgraph_of(h)


@dataclass(frozen=True)
class GraphMorphism:
    """Total graph homomorphism: node and arrow maps preserving src/tgt."""

    dom: Graph
    cod: Graph
    node_map: Mapping[str, str]
    arrow_map: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "node_map", dict(self.node_map))
        object.__setattr__(self, "arrow_map", dict(self.arrow_map))
        if set(self.node_map) != self.dom.nodes:
            missing = self.dom.nodes ^ set(self.node_map)
            raise HomomorphismViolation(f"node map is not total on the domain ({sorted(missing)})")
        if set(self.arrow_map) != set(self.dom.arrows):
            missing = set(self.dom.arrows) ^ set(self.arrow_map)
            raise HomomorphismViolation(f"arrow map is not total on the domain ({sorted(missing)})")
        for n, img in self.node_map.items():
            if img not in self.cod.nodes:
                raise HomomorphismViolation(f"node {n} maps outside the codomain")
        for a, img in self.arrow_map.items():
            if img not in self.cod.arrows:
                raise HomomorphismViolation(f"arrow {a} maps outside the codomain")
            if self.cod.src(img) != self.node_map[self.dom.src(a)] or self.cod.tgt(img) != self.node_map[self.dom.tgt(a)]:
                raise HomomorphismViolation(f"arrow {a} -> {img} breaks the homomorphism law")

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, tuple(sorted(self.node_map.items())), tuple(sorted(self.arrow_map.items()))))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphMorphism):
            return NotImplemented
        return (self.dom, self.cod, self.node_map, self.arrow_map) == (other.dom, other.cod, other.node_map, other.arrow_map)

    @classmethod
    def identity(cls, g: Graph) -> "GraphMorphism":
        return cls(g, g, {n: n for n in g.nodes}, {a: a for a in g.arrows})

    @classmethod
    def inclusion(cls, sub: Graph, host: Graph) -> "GraphMorphism":
        if not sub.is_subgraph_of(host):
            raise NotASubgraph("inclusion requested from a graph that is not a subgraph")
        return cls(sub, host, {n: n for n in sub.nodes}, {a: a for a in sub.arrows})

    def is_inclusion(self) -> bool:
        return (
            self.dom.is_subgraph_of(self.cod)
            and all(k == v for k, v in self.node_map.items())
            and all(k == v for k, v in self.arrow_map.items())
        )

    def apply(self, elem: ElementId) -> ElementId:
        try:
            if elem.kind == NODE:
                return node_id(self.node_map[elem.name])
            return arrow_id(self.arrow_map[elem.name])
        except KeyError:
            raise UnknownElement(f"{elem} is not in the domain") from None

    def then(self, other: "GraphMorphism") -> "GraphMorphism":
        """Diagrammatic composition: apply self first, then other."""
        if self.cod != other.dom:
            raise CodomainMismatch("composition requires matching middle graph")
        return GraphMorphism(
            self.dom,
            other.cod,
            {n: other.node_map[v] for n, v in self.node_map.items()},
            {a: other.arrow_map[v] for a, v in self.arrow_map.items()},
        )

    def restrict_to(self, sub: Graph, cod: Graph | None = None) -> "GraphMorphism":
        """Restriction to a subgraph of the domain, optionally corestricted."""
        if not sub.is_subgraph_of(self.dom):
            raise NotASubgraph("restriction requested outside the domain")
        target = self.cod if cod is None else cod
        return GraphMorphism(
            sub,
            target,
            {n: self.node_map[n] for n in sub.nodes},
            {a: self.arrow_map[a] for a in sub.arrows},
        )

    def image_of(self, sub: Graph) -> Graph:
        """Image of a subgraph of the domain, as a subgraph of the codomain."""
        ns = {self.node_map[n] for n in sub.nodes}
        ar = {self.arrow_map[a]: self.cod.arrows[self.arrow_map[a]] for a in sub.arrows}
        return Graph(frozenset(ns), ar)

    def image(self) -> Graph:
        return self.image_of(self.dom)

    def preimage_of(self, sub: Graph) -> Graph:
        """Preimage of a subgraph of the codomain; always a subgraph of dom."""
        ns = {n for n, v in self.node_map.items() if v in sub.nodes}
        ar = {a: self.dom.arrows[a] for a, v in self.arrow_map.items() if v in sub.arrows}
        return Graph(frozenset(ns), ar)


@dataclass(frozen=True)
class PartialGraphMorphism:
    """Partial homomorphism: a definition subgraph plus a total map out of it."""

    dom: Graph
    cod: Graph
    defined_on: Graph
    mapping: GraphMorphism

    def __post_init__(self):
        if not self.defined_on.is_subgraph_of(self.dom):
            raise NotASubgraph("domain of definition is not a subgraph of the domain")
        if self.mapping.dom != self.defined_on or self.mapping.cod != self.cod:
            raise SignatureMismatch("inner map must run from the definition subgraph into the codomain")

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, self.defined_on, self.mapping))

    @classmethod
    def from_total(cls, m: GraphMorphism) -> "PartialGraphMorphism":
        return cls(m.dom, m.cod, m.dom, m)

    @classmethod
    def identity(cls, g: Graph) -> "PartialGraphMorphism":
        return cls.from_total(GraphMorphism.identity(g))

    @classmethod
    def of(cls, dom: Graph, cod: Graph, node_map: Mapping[str, str], arrow_map: Mapping[str, str]) -> "PartialGraphMorphism":
        """Build from partial maps; the definition subgraph is their support."""
        d = dom.restrict(node_map.keys(), arrow_map.keys())
        if set(node_map) - dom.nodes or set(arrow_map) - set(dom.arrows):
            raise UnknownElement("partial map mentions elements outside the domain graph")
        if d.size() != (len(node_map), len(arrow_map)):
            raise NotASubgraph("arrow mapped while one of its endpoints is not")
        return cls(dom, cod, d, GraphMorphism(d, cod, node_map, arrow_map))

    @classmethod
    def undefined(cls, dom: Graph, cod: Graph) -> "PartialGraphMorphism":
        empty = Graph.empty()
        return cls(dom, cod, empty, GraphMorphism(empty, cod, {}, {}))

    def is_total(self) -> bool:
        return self.defined_on == self.dom

    def defines(self, elem: ElementId) -> bool:
        return elem in self.defined_on

    def apply(self, elem: ElementId) -> ElementId | None:
        """Image of an element, or None outside the domain of definition."""
        if elem not in self.dom:
            raise UnknownElement(f"{elem} is not in the domain graph")
        if elem not in self.defined_on:
            return None
        return self.mapping.apply(elem)

    def same_signature(self, other: "PartialGraphMorphism") -> bool:
        return self.dom == other.dom and self.cod == other.cod


def compose_partial(phi: PartialGraphMorphism, psi: PartialGraphMorphism) -> PartialGraphMorphism:
    """Compose two partial homomorphisms.

    The result is defined exactly on the part of ``phi``'s definition
    subgraph whose image lands inside ``psi``'s; in particular it is defined
    wherever ``phi`` is when ``psi`` is total.
    """
    if phi.cod != psi.dom:
        raise CodomainMismatch("codomain of the first must be the domain of the second")
    nodes = {n for n in phi.defined_on.nodes if phi.mapping.node_map[n] in psi.defined_on.nodes}
    arrows = {a for a in phi.defined_on.arrows if phi.mapping.arrow_map[a] in psi.defined_on.arrows}
    d = phi.dom.restrict(nodes, arrows)
    node_map = {n: psi.mapping.node_map[phi.mapping.node_map[n]] for n in d.nodes}
    arrow_map = {a: psi.mapping.arrow_map[phi.mapping.arrow_map[a]] for a in d.arrows}
    return PartialGraphMorphism(phi.dom, psi.cod, d, GraphMorphism(d, psi.cod, node_map, arrow_map))


def leq_partial(phi: PartialGraphMorphism, chi: PartialGraphMorphism) -> bool:
    """Definedness order: ``phi`` is below ``chi`` iff ``chi`` extends it."""
    if not phi.same_signature(chi):
        raise SignatureMismatch("ordered morphisms must share domain and codomain")
    if not phi.defined_on.is_subgraph_of(chi.defined_on):
        return False
    return all(
        phi.mapping.node_map[n] == chi.mapping.node_map[n] for n in phi.defined_on.nodes
    ) and all(phi.mapping.arrow_map[a] == chi.mapping.arrow_map[a] for a in phi.defined_on.arrows)


def eq_partial(phi: PartialGraphMorphism, chi: PartialGraphMorphism) -> bool:
    """Equality as partial morphisms: same signature, definition and values."""
    return leq_partial(phi, chi) and leq_partial(chi, phi)


def require_inclusion(m: GraphMorphism, what: str = "morphism") -> None:
    if not m.is_inclusion():
        raise NotInclusion(f"{what} must be an inclusion")
