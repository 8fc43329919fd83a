"""Cospan transformation rules over a shared typing chain.

A rule consists of a left-hand side ``L`` and a right-hand side ``R``, both
multilevel typed over the same chain, glued into their union ``I`` by
shared names.  Elements of ``L`` outside ``R`` are deleted by the rule,
elements of ``R`` outside ``L`` are created.  The two typings must cohere
on the overlap so that ``I`` carries a unique induced typing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chains import (
    InclusionChain,
    LevelMap,
    MultilevelTyping,
    TypingChain,
    TypingChainMorphism,
)
from .errors import CoherenceViolation, DepthMismatch, TypingDisagreement
from .graphs import ElementId, Graph, GraphMorphism


@dataclass(frozen=True)
class Rule:
    """Validated cospan rule with its derived union typing.

    ``embed_lhs`` and ``embed_rhs`` are the inclusion chain morphisms of the
    two sides into the union chain; ``constants`` lists elements of the
    rule's typing chain that a match may only send to equally named
    elements.
    """

    name: str
    lhs: Graph
    rhs: Graph
    union: Graph
    mm: TypingChain
    typing_lhs: MultilevelTyping
    typing_rhs: MultilevelTyping
    typing_union: MultilevelTyping
    embed_lhs: TypingChainMorphism
    embed_rhs: TypingChainMorphism
    constants: frozenset[tuple[int, ElementId]] = frozenset()

    @property
    def depth(self) -> int:
        return self.mm.depth

    def deleted_elements(self) -> frozenset[ElementId]:
        """Elements of the union absent from the right-hand side."""
        return frozenset(e for e in self.union.elements() if e not in self.rhs)

    def added_elements(self) -> frozenset[ElementId]:
        """Elements of the union absent from the left-hand side."""
        return frozenset(e for e in self.union.elements() if e not in self.lhs)


def rule_deletes(rule: Rule) -> frozenset[ElementId]:
    return rule.deleted_elements()


def _element_names(g: Graph) -> frozenset[ElementId]:
    return frozenset(g.elements())


def build_rule(
    name: str,
    typing_lhs: MultilevelTyping,
    typing_rhs: MultilevelTyping,
    constants: frozenset[tuple[int, ElementId]] = frozenset(),
) -> Rule:
    """Glue two coherently typed sides into a rule.

    Shared names identify shared elements.  For every level the two sides
    must agree on which shared elements are typed there and on their types;
    the union then carries the unique typing restricting to both sides.
    """
    if typing_lhs.target != typing_rhs.target:
        raise DepthMismatch("the two sides must be typed over the same chain")
    mm = typing_lhs.target
    n = mm.depth
    lhs, rhs = typing_lhs.subject, typing_rhs.subject
    union = lhs.union(rhs)

    shared = _element_names(lhs) & _element_names(rhs)
    for i in range(n + 1):
        li = _element_names(typing_lhs.level_graph(i))
        ri = _element_names(typing_rhs.level_graph(i))
        for elem in sorted(shared):
            if (elem in li) != (elem in ri):
                side = "left" if elem in li else "right"
                raise CoherenceViolation(
                    f"rule {name}: {elem} is typed at level {i} only on the {side}-hand side"
                )
            if elem in li and typing_lhs.type_at(elem, i) != typing_rhs.type_at(elem, i):
                raise TypingDisagreement(
                    f"rule {name}: {elem} has different level-{i} types on the two sides"
                )

    union_subgraphs = []
    union_maps = []
    for i in range(n + 1):
        li_graph = typing_lhs.level_graph(i)
        ri_graph = typing_rhs.level_graph(i)
        ui = li_graph.union(ri_graph)
        union_subgraphs.append(ui)
        node_map = dict(typing_rhs.typing.map(i).node_map)
        node_map.update(typing_lhs.typing.map(i).node_map)
        arrow_map = dict(typing_rhs.typing.map(i).arrow_map)
        arrow_map.update(typing_lhs.typing.map(i).arrow_map)
        union_maps.append(GraphMorphism(ui, mm.graph(i), node_map, arrow_map))

    union_chain = InclusionChain.on(union, list(reversed(union_subgraphs[1:])))
    typing_union = MultilevelTyping(
        union,
        union_chain,
        TypingChainMorphism.checked(union_chain, mm, LevelMap.identity(n), union_maps),
    )

    embed_lhs = TypingChainMorphism(
        typing_lhs.chain,
        union_chain,
        LevelMap.identity(n),
        tuple(
            GraphMorphism.inclusion(typing_lhs.level_graph(i), union_chain.graph(i)) for i in range(n + 1)
        ),
    )
    embed_rhs = TypingChainMorphism(
        typing_rhs.chain,
        union_chain,
        LevelMap.identity(n),
        tuple(
            GraphMorphism.inclusion(typing_rhs.level_graph(i), union_chain.graph(i)) for i in range(n + 1)
        ),
    )
    return Rule(
        name=name,
        lhs=lhs,
        rhs=rhs,
        union=union,
        mm=mm,
        typing_lhs=typing_lhs,
        typing_rhs=typing_rhs,
        typing_union=typing_union,
        embed_lhs=embed_lhs,
        embed_rhs=embed_rhs,
        constants=frozenset(constants),
    )
