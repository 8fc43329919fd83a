"""Categorical constructions on finite graphs.

Three constructions carry the whole engine: componentwise pullbacks, the
pushout of an inclusion against an arbitrary homomorphism, and the final
pullback complement used for deletion.  All three are deterministic; fresh
names produced by the pushout are derived from the input names alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import CodomainMismatch, IdentificationConflict, PullbackViolation
from .graphs import Graph, GraphMorphism, require_inclusion


def _pair(x: str, y: str) -> str:
    return f"({x},{y})"


def pullback(f: GraphMorphism, g: GraphMorphism) -> tuple[Graph, GraphMorphism, GraphMorphism]:
    """Componentwise pullback of a cospan ``f: X -> Z <- Y :g``.

    Nodes are the pairs ``(x,y)`` with equal image, arrows likewise; the
    returned morphisms are the two projections.
    """
    if f.cod != g.cod:
        raise CodomainMismatch("pullback requires a common codomain")
    nodes = {}
    for x in sorted(f.dom.nodes):
        for y in sorted(g.dom.nodes):
            if f.node_map[x] == g.node_map[y]:
                nodes[_pair(x, y)] = (x, y)
    arrows = {}
    for a in sorted(f.dom.arrows):
        for b in sorted(g.dom.arrows):
            if f.arrow_map[a] == g.arrow_map[b]:
                arrows[_pair(a, b)] = (a, b)
    graph = Graph(
        frozenset(nodes),
        {
            n: (_pair(f.dom.src(a), g.dom.src(b)), _pair(f.dom.tgt(a), g.dom.tgt(b)))
            for n, (a, b) in arrows.items()
        },
    )
    p1 = GraphMorphism(graph, f.dom, {n: x for n, (x, _) in nodes.items()}, {n: a for n, (a, _) in arrows.items()})
    p2 = GraphMorphism(graph, g.dom, {n: y for n, (_, y) in nodes.items()}, {n: b for n, (_, b) in arrows.items()})
    return graph, p1, p2


def _freshen(wanted: list[str], taken: set[str]) -> dict[str, str]:
    """Deterministic renaming: a colliding name gets the smallest free ``#k``."""
    renames: dict[str, str] = {}
    reserved = set(taken) | set(wanted)
    for name in sorted(wanted):
        if name not in taken:
            renames[name] = name
            continue
        k = 2
        while f"{name}#{k}" in reserved:
            k += 1
        renames[name] = f"{name}#{k}"
        reserved.add(f"{name}#{k}")
    return renames


@dataclass(frozen=True)
class PushoutResult:
    """Pushout ``P`` of an inclusion ``G -> H`` against ``mu: G -> K``.

    ``keep`` embeds ``K`` into ``P`` (always an inclusion); ``extend`` maps
    ``H`` into ``P``, acting as ``mu`` on ``G`` and injectively on the rest.
    ``renamed`` lists the new-element names freshened apart from ``K``.
    """

    graph: Graph
    keep: GraphMorphism
    extend: GraphMorphism
    renamed: Mapping[str, str]


def pushout_inclusion(lam: GraphMorphism, mu: GraphMorphism) -> PushoutResult:
    """Pushout of the span ``H <- G -> K`` where ``lam: G -> H`` is an inclusion.

    The result keeps ``K`` verbatim and adds the part of ``H`` outside ``G``,
    its names freshened apart from ``K``; endpoints that lay in ``G`` are
    redirected through ``mu``.
    """
    require_inclusion(lam, "left leg of the pushout")
    if lam.dom != mu.dom:
        raise CodomainMismatch("the two legs must share their domain")
    g, h, k = lam.dom, lam.cod, mu.cod

    new_nodes = sorted(h.nodes - g.nodes)
    new_arrows = sorted(set(h.arrows) - set(g.arrows))
    node_names = _freshen(new_nodes, set(k.nodes))
    arrow_names = _freshen(new_arrows, set(k.arrows))

    def node_in_p(x: str) -> str:
        return mu.node_map[x] if x in g.nodes else node_names[x]

    nodes = set(k.nodes) | {node_names[n] for n in new_nodes}
    arrows = dict(k.arrows)
    for a in new_arrows:
        arrows[arrow_names[a]] = (node_in_p(h.src(a)), node_in_p(h.tgt(a)))
    p = Graph(frozenset(nodes), arrows)

    keep = GraphMorphism.inclusion(k, p)
    extend = GraphMorphism(
        h,
        p,
        {n: node_in_p(n) for n in h.nodes},
        {a: (mu.arrow_map[a] if a in g.arrows else arrow_names[a]) for a in h.arrows},
    )
    renamed = {old: new for old, new in {**node_names, **arrow_names}.items() if old != new}
    return PushoutResult(p, keep, extend, renamed)


@dataclass(frozen=True)
class FpbcResult:
    """Final pullback complement of ``R -> I -> D``.

    ``graph`` is what survives deletion, ``embed`` its inclusion into ``D``,
    ``co_match`` the (always total) restriction of the original map to ``R``.
    ``dangling`` records arrows removed because an endpoint was deleted.
    """

    graph: Graph
    embed: GraphMorphism
    co_match: GraphMorphism
    dangling: frozenset[str]


def final_pullback_complement(rho: GraphMorphism, delta: GraphMorphism) -> FpbcResult:
    """Delete the image of ``I`` minus ``R`` from ``D``, dangling arrows included.

    Raises :class:`IdentificationConflict` when a deleted element shares its
    image with a preserved one; in that case no complement exists.
    """
    require_inclusion(rho, "preserved part of a deletion")
    if rho.cod != delta.dom:
        raise CodomainMismatch("deletion legs must be composable")
    r, i, d = rho.dom, rho.cod, delta.cod

    gone_nodes = {delta.node_map[x] for x in i.nodes - r.nodes}
    gone_arrows = {delta.arrow_map[a] for a in set(i.arrows) - set(r.arrows)}
    for y in sorted(r.nodes):
        if delta.node_map[y] in gone_nodes:
            raise IdentificationConflict(f"node {y} is preserved but identified with a deleted node")
    for b in sorted(r.arrows):
        if delta.arrow_map[b] in gone_arrows:
            raise IdentificationConflict(f"arrow {b} is preserved but identified with a deleted arrow")

    nodes = d.nodes - gone_nodes
    dangling = {
        a for a, (s, t) in d.arrows.items() if a not in gone_arrows and (s in gone_nodes or t in gone_nodes)
    }
    arrows = {a: st for a, st in d.arrows.items() if a not in gone_arrows and a not in dangling}
    t_graph = Graph(frozenset(nodes), arrows)

    embed = GraphMorphism.inclusion(t_graph, d)
    co_match = GraphMorphism(
        r,
        t_graph,
        {y: delta.node_map[y] for y in r.nodes},
        {b: delta.arrow_map[b] for b in r.arrows},
    )

    # The square just built must be a pullback: exactly the preserved part of
    # I may land inside the complement.
    back = delta.preimage_of(t_graph)
    if back != r:
        raise PullbackViolation("deletion square is not a pullback")
    return FpbcResult(t_graph, embed, co_match, frozenset(dangling))
