"""Seeded random instance generators.

Chains, typings and rule applications are generated valid by construction:
typing is assigned as one direct type per element, always grounded through
a single-node-plus-loop top graph so that every arrow can be typed at
level 0.  Deletions, level gaps, non-injective matches and name collisions
with the host all occur with tunable probability.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from mltg.chains import (
    DirectType,
    InclusionChain,
    LevelMap,
    MultilevelTyping,
    TypingChain,
    TypingChainMorphism,
    complete_direct_types,
    reduct,
)
from mltg.graphs import ARROW, NODE, ElementId, Graph, GraphMorphism, PartialGraphMorphism
from mltg.matching import MatchCandidate, enumerate_level_maps
from mltg.rules import Rule, build_rule


def random_graph(rng: random.Random, max_nodes: int = 5, max_arrows: int = 6, prefix: str = "n") -> Graph:
    count = rng.randint(0, max_nodes)
    nodes = [f"{prefix}{k}" for k in range(count)]
    arrows = {}
    if nodes:
        for k in range(rng.randint(0, max_arrows)):
            arrows[f"{prefix}e{k}"] = (rng.choice(nodes), rng.choice(nodes))
    return Graph.of(nodes, arrows)


def random_subgraph(rng: random.Random, host: Graph, keep: float = 0.6) -> Graph:
    nodes = {n for n in host.nodes if rng.random() < keep}
    arrows = {
        a: (s, t) for a, (s, t) in host.arrows.items() if s in nodes and t in nodes and rng.random() < keep
    }
    return Graph(frozenset(nodes), arrows)


def random_hom_into(
    rng: random.Random, cod: Graph, max_nodes: int = 3, max_arrows: int = 3, prefix: str = "x"
) -> GraphMorphism | None:
    """A fresh domain graph together with a homomorphism into ``cod``."""
    if not cod.nodes:
        return GraphMorphism(Graph.empty(), cod, {}, {})
    count = rng.randint(0, max_nodes)
    nodes = [f"{prefix}{k}" for k in range(count)]
    node_map = {n: rng.choice(sorted(cod.nodes)) for n in nodes}
    arrows = {}
    arrow_map = {}
    for k in range(rng.randint(0, max_arrows)):
        if not nodes:
            break
        s, t = rng.choice(nodes), rng.choice(nodes)
        fits = sorted(b for b, (bs, bt) in cod.arrows.items() if bs == node_map[s] and bt == node_map[t])
        if not fits:
            continue
        name = f"{prefix}e{k}"
        arrows[name] = (s, t)
        arrow_map[name] = rng.choice(fits)
    dom = Graph.of(nodes, arrows)
    return GraphMorphism(dom, cod, node_map, arrow_map)


# ---------------------------------------------------------------------------
# Chains and typings


def _vec_of(target: TypingChain, dt: DirectType) -> dict[int, ElementId]:
    vec = {dt.level: dt.element}
    for i in range(dt.level - 1, -1, -1):
        tau = target.typing(dt.level, i)
        if tau.defines(dt.element):
            vec[i] = tau.apply(dt.element)
    return vec


def _random_direct_types(
    rng: random.Random, subject: Graph, target: TypingChain, top_level: int
) -> dict[ElementId, DirectType]:
    """Assign one direct type per element, arrows constrained by endpoints."""
    direct: dict[ElementId, DirectType] = {}
    vectors: dict[ElementId, dict[int, ElementId]] = {}
    for n in sorted(subject.nodes):
        level = rng.randint(0, top_level)
        pool = sorted(target.graph(level).nodes)
        while not pool:
            level = rng.randint(0, top_level)
            pool = sorted(target.graph(level).nodes)
        dt = DirectType(level, ElementId(NODE, rng.choice(pool)))
        direct[ElementId(NODE, n)] = dt
        vectors[ElementId(NODE, n)] = _vec_of(target, dt)
    for a, (s, t) in sorted(subject.arrows.items()):
        sv, tv = vectors[ElementId(NODE, s)], vectors[ElementId(NODE, t)]
        options = []
        for level in range(min(top_level, max(sv), max(tv)) + 1):
            if level not in sv or level not in tv:
                continue
            for b, (bs, bt) in sorted(target.graph(level).arrows.items()):
                if bs == sv[level].name and bt == tv[level].name:
                    options.append(DirectType(level, ElementId(ARROW, b)))
        direct[ElementId(ARROW, a)] = rng.choice(options)
    return direct


def random_chain(rng: random.Random, depth: int, max_nodes: int = 4, max_arrows: int = 4) -> TypingChain:
    """A valid chain whose top graph is one node with a loop, so every
    element at every level is groundable."""
    graphs = [Graph.of({"A"}, {"r": ("A", "A")})]
    direct: dict[tuple[int, ElementId], DirectType] = {}
    for level in range(1, depth + 1):
        g = random_graph(rng, max_nodes, max_arrows, prefix=f"g{level}_")
        if not g.nodes:
            g = Graph.of({f"g{level}_0"})
        prefix = TypingChain(tuple(graphs), complete_direct_types(tuple(graphs), direct))
        for elem, dt in _random_direct_types(rng, g, prefix, level - 1).items():
            direct[(level, elem)] = dt
        graphs.append(g)
    return TypingChain.from_direct_types(graphs, direct)


def random_multilevel_typing(
    rng: random.Random, target: TypingChain, max_nodes: int = 5, max_arrows: int = 6, prefix: str = "s"
) -> MultilevelTyping:
    subject = random_graph(rng, max_nodes, max_arrows, prefix=prefix)
    if not subject.nodes:
        subject = Graph.of({f"{prefix}0"})
    direct = _random_direct_types(rng, subject, target, target.depth)
    return MultilevelTyping.from_direct_types(subject, target, direct)


def random_inclusion_chain(rng: random.Random, depth: int, max_nodes: int = 5, max_arrows: int = 6) -> InclusionChain:
    host = random_graph(rng, max_nodes, max_arrows, prefix="h")
    return InclusionChain.on(host, [random_subgraph(rng, host) for _ in range(depth)])


# ---------------------------------------------------------------------------
# Applications


def _renamed_copy(chain: TypingChain, levels: LevelMap, prefix: str) -> tuple[TypingChain, list[GraphMorphism]]:
    """A renamed sub-chain at the mapped levels plus the un-renaming maps."""

    def rename_graph(g: Graph) -> Graph:
        return Graph(
            frozenset(prefix + n for n in g.nodes),
            {prefix + a: (prefix + s, prefix + t) for a, (s, t) in g.arrows.items()},
        )

    graphs = [rename_graph(chain.graph(levels(i))) for i in range(levels.source_depth + 1)]
    typings = {}
    for j in range(1, levels.source_depth + 1):
        for i in range(j):
            tau = chain.typing(levels(j), levels(i))
            node_map = {prefix + k: prefix + v for k, v in tau.mapping.node_map.items()}
            arrow_map = {prefix + k: prefix + v for k, v in tau.mapping.arrow_map.items()}
            typings[(j, i)] = PartialGraphMorphism.of(graphs[j], graphs[i], node_map, arrow_map)
    copy = TypingChain(tuple(graphs), typings)
    unrename = [
        GraphMorphism(
            graphs[i],
            chain.graph(levels(i)),
            {prefix + n: n for n in chain.graph(levels(i)).nodes},
            {prefix + a: a for a in chain.graph(levels(i)).arrows},
        )
        for i in range(levels.source_depth + 1)
    ]
    return copy, unrename


@dataclass
class GeneratedApplication:
    rule: Rule
    host: MultilevelTyping
    match: MatchCandidate


def random_application(rng: random.Random, allow_conflicts: bool = False) -> GeneratedApplication:
    """A rule, a typed host, and a valid match, all drawn at random.

    The rule's typing chain is a renamed copy of the host chain restricted
    to the mapped levels, so the chain morphism part of the match is the
    un-renaming embedding.  When ``allow_conflicts`` is false the deletion
    set avoids elements the match identifies with preserved ones.
    """
    m = rng.randint(1, 3)
    tg = random_chain(rng, m)
    host = random_multilevel_typing(rng, tg)
    n = rng.randint(1, m)
    f = rng.choice(enumerate_level_maps(n, m))
    mm, unrename = _renamed_copy(tg, f, "mm_")
    beta = TypingChainMorphism(mm, tg, f, tuple(unrename))

    mu = random_hom_into(rng, host.subject, max_nodes=3, max_arrows=3, prefix="l")
    l_graph = mu.dom
    red = reduct(host.chain, mu, f)
    l_chain = red.chain
    sigma_l = []
    for i in range(n + 1):
        src = l_chain.graph(i)
        host_map = host.typing.map(f(i))
        sigma_l.append(
            GraphMorphism(
                src,
                mm.graph(i),
                {x: "mm_" + host_map.node_map[mu.node_map[x]] for x in src.nodes},
                {x: "mm_" + host_map.arrow_map[mu.arrow_map[x]] for x in src.arrows},
            )
        )
    typing_lhs = MultilevelTyping(
        l_graph, l_chain, TypingChainMorphism(l_chain, mm, LevelMap.identity(n), sigma_l)
    )

    # Right-hand side: drop part of L, then graft on fresh elements.  Unless
    # conflicts are wanted, only elements with a unique host image may be
    # deleted; arrows forced out by a deleted endpoint are then safe too.
    def unique_image(name: str, kind: str) -> bool:
        if kind == NODE:
            return sum(1 for y in l_graph.nodes if mu.node_map[y] == mu.node_map[name]) == 1
        return sum(1 for b in l_graph.arrows if mu.arrow_map[b] == mu.arrow_map[name]) == 1

    deleted_nodes = {
        x
        for x in sorted(l_graph.nodes)
        if rng.random() < 0.25 and (allow_conflicts or unique_image(x, NODE))
    }
    deleted_arrows = set()
    for a in sorted(l_graph.arrows):
        s, t = l_graph.arrows[a]
        if s in deleted_nodes or t in deleted_nodes:
            deleted_arrows.add(a)
        elif rng.random() < 0.2 and (allow_conflicts or unique_image(a, ARROW)):
            deleted_arrows.add(a)

    kept = l_graph.restrict(l_graph.nodes - deleted_nodes, set(l_graph.arrows) - deleted_arrows)
    direct_rhs: dict[ElementId, DirectType] = {}
    for elem in kept.elements():
        dt = typing_lhs.direct_type_of(elem)
        direct_rhs[elem] = DirectType(dt.level, dt.element)

    new_nodes = []
    for k in range(rng.randint(0, 2)):
        # Reuse a host name occasionally to exercise freshening.
        name = rng.choice(sorted(host.subject.nodes)) if rng.random() < 0.3 and host.subject.nodes else f"new{k}"
        while name in kept.nodes or name in [n for n, _ in new_nodes]:
            name = f"new{k}" if name != f"new{k}" else f"new{k}x"
        level = rng.randint(0, n)
        pool = sorted(mm.graph(level).nodes)
        new_nodes.append((name, DirectType(level, ElementId(NODE, rng.choice(pool)))))

    rhs_nodes = set(kept.nodes) | {name for name, _ in new_nodes}
    rhs_arrows = dict(kept.arrows)
    for elem, dt in new_nodes:
        direct_rhs[ElementId(NODE, elem)] = dt

    node_vecs = {
        name: _vec_of(mm, direct_rhs[ElementId(NODE, name)]) for name in sorted(rhs_nodes)
    }
    for k in range(rng.randint(0, 2)):
        pool = sorted(rhs_nodes)
        if not pool:
            break
        s, t = rng.choice(pool), rng.choice(pool)
        name = f"newe{k}"
        if name in rhs_arrows:
            continue
        sv, tv = node_vecs[s], node_vecs[t]
        options = []
        for level in range(n + 1):
            if level not in sv or level not in tv:
                continue
            for b, (bs, bt) in sorted(mm.graph(level).arrows.items()):
                if bs == sv[level].name and bt == tv[level].name:
                    options.append(DirectType(level, ElementId(ARROW, b)))
        if not options:
            continue
        # Creating an arrow between two kept nodes must not duplicate a kept
        # arrow's identity; fresh names keep it distinct.
        rhs_arrows[name] = (s, t)
        direct_rhs[ElementId(ARROW, name)] = rng.choice(options)

    rhs = Graph(frozenset(rhs_nodes), rhs_arrows)
    typing_rhs = MultilevelTyping.from_direct_types(rhs, mm, direct_rhs)
    rule = build_rule(f"gen_{rng.randrange(10**6)}", typing_lhs, typing_rhs)
    match = MatchCandidate(mu, beta, red.morphism)
    return GeneratedApplication(rule, host, match)
