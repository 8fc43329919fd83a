"""Match enumeration for multilevel typed rules.

A match pairs a homomorphism of the rule's left-hand side into the host
graph with a chain morphism of the rule's typing chain into the host's.
Two conditions make the pair a match: the left-hand side's inclusion chain
must be exactly the preimage of the host's (reduct), and typing must carry
over levelwise (type compatibility).

The searches are exhaustive backtracking over sorted candidates, so results
come out in a stable order: level maps lexicographically, then chain
morphism families, then element maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .chains import (
    LevelMap,
    MultilevelTyping,
    TypingChain,
    TypingChainMorphism,
    reduct,
)
from .errors import DepthExceedsTarget
from .graphs import ARROW, NODE, ElementId, Graph, GraphMorphism, arrow_id, node_id
from .rules import Rule


def enumerate_level_maps(n: int, m: int) -> list[LevelMap]:
    """All anchored gap-respecting maps ``[n] -> [m]``, lexicographically.

    The pairwise gap law reduces to consecutive levels advancing by at
    least one, so candidates extend one level at a time.
    """
    if n > m:
        raise DepthExceedsTarget(f"no level maps from depth {n} into depth {m}")
    out: list[LevelMap] = []

    def extend(prefix: list[int]) -> None:
        if len(prefix) == n + 1:
            out.append(LevelMap(n, m, tuple(prefix)))
            return
        i = len(prefix)
        for v in range(prefix[-1] + 1, m - (n - i) + 1):
            extend(prefix + [v])

    extend([0])
    return out


def graph_homomorphisms(
    dom: Graph,
    cod: Graph,
    node_candidates: Mapping[str, Iterable[str]] | None = None,
    arrow_candidates: Mapping[str, Iterable[str]] | None = None,
) -> Iterator[GraphMorphism]:
    """Exhaustive backtracking enumeration of total homomorphisms.

    Arrows are assigned first, pinning their endpoints as they go; isolated
    nodes are filled in afterwards.  Optional per-element candidate sets
    narrow the search (used for constants and type-driven pruning).
    """
    allowed_nodes = {
        n: sorted(set(node_candidates[n]) & cod.nodes) if node_candidates and n in node_candidates else sorted(cod.nodes)
        for n in dom.nodes
    }
    allowed_arrows = {
        a: sorted(set(arrow_candidates[a]) & set(cod.arrows))
        if arrow_candidates and a in arrow_candidates
        else sorted(cod.arrows)
        for a in dom.arrows
    }
    arrows = sorted(dom.arrows)
    nodes = sorted(dom.nodes)

    allowed_node_sets = {n: set(vs) for n, vs in allowed_nodes.items()}

    def assign_arrows(idx: int, node_map: dict[str, str], arrow_map: dict[str, str]) -> Iterator[GraphMorphism]:
        if idx == len(arrows):
            yield from assign_nodes(0, node_map, arrow_map)
            return
        a = arrows[idx]
        s, t = dom.arrows[a]
        for b in allowed_arrows[a]:
            bs, bt = cod.arrows[b]
            if bs not in allowed_node_sets[s] or bt not in allowed_node_sets[t]:
                continue
            pinned: dict[str, str] = {}
            consistent = True
            for key, val in ((s, bs), (t, bt)):
                seen = node_map.get(key, pinned.get(key))
                if seen is None:
                    pinned[key] = val
                elif seen != val:
                    consistent = False
                    break
            if not consistent:
                continue
            node_map.update(pinned)
            arrow_map[a] = b
            yield from assign_arrows(idx + 1, node_map, arrow_map)
            del arrow_map[a]
            for k in pinned:
                del node_map[k]

    def assign_nodes(idx: int, node_map: dict[str, str], arrow_map: dict[str, str]) -> Iterator[GraphMorphism]:
        while idx < len(nodes) and nodes[idx] in node_map:
            idx += 1
        if idx == len(nodes):
            yield GraphMorphism(dom, cod, dict(node_map), dict(arrow_map))
            return
        n = nodes[idx]
        for v in allowed_nodes[n]:
            node_map[n] = v
            yield from assign_nodes(idx + 1, node_map, arrow_map)
            del node_map[n]

    yield from assign_arrows(0, {}, {})


def _constant_candidates(
    graph: Graph, level: int, constants: frozenset[tuple[int, ElementId]]
) -> tuple[dict[str, list[str]], dict[str, list[str]]]:
    nodes = {e.name: [e.name] for lvl, e in constants if lvl == level and e.kind == NODE and e in graph}
    arrows = {e.name: [e.name] for lvl, e in constants if lvl == level and e.kind == ARROW and e in graph}
    return nodes, arrows


def enumerate_chain_morphisms(
    mm: TypingChain,
    tg: TypingChain,
    levels: LevelMap,
    constants: frozenset[tuple[int, ElementId]] = frozenset(),
) -> list[TypingChainMorphism]:
    """All chain morphisms ``mm -> tg`` over a fixed level map.

    Families are grown from the top level downwards; each new level is
    checked against all earlier ones, so incompatible prefixes are cut off
    early.  Constant elements may only map to equally named targets.
    """
    n = mm.depth
    results: list[TypingChainMorphism] = []

    def level_maps(i: int) -> Iterator[GraphMorphism]:
        node_fixed, arrow_fixed = _constant_candidates(mm.graph(i), i, constants)
        yield from graph_homomorphisms(mm.graph(i), tg.graph(levels(i)), node_fixed, arrow_fixed)

    def compatible(maps: Sequence[GraphMorphism], j: int) -> bool:
        # Ordering law between the new level j and every level above it.
        for i in range(j):
            tau_mm = mm.typing(j, i)
            tau_tg = tg.typing(levels(j), levels(i))
            for elem in tau_mm.defined_on.elements():
                image = maps[j].apply(elem)
                if not tau_tg.defines(image):
                    return False
                if tau_tg.apply(image) != maps[i].apply(tau_mm.apply(elem)):
                    return False
        return True

    def extend(maps: list[GraphMorphism]) -> None:
        j = len(maps)
        if j == n + 1:
            results.append(TypingChainMorphism(mm, tg, levels, tuple(maps)))
            return
        for candidate in level_maps(j):
            maps.append(candidate)
            if compatible(maps, j):
                extend(maps)
            maps.pop()

    extend([])
    return results


@dataclass(frozen=True)
class MatchIssue:
    """One failed match condition with the witnessing level and element."""

    condition: str
    level: int
    element: ElementId | None
    message: str

    def __str__(self) -> str:
        elem = f" at {self.element}" if self.element else ""
        return f"[{self.condition}] level {self.level}{elem}: {self.message}"


@dataclass(frozen=True)
class MatchCandidate:
    """A verified match: element map, chain morphism, and the induced reduct
    morphism between the two inclusion chains."""

    mu: GraphMorphism
    beta: TypingChainMorphism
    mu_chain: TypingChainMorphism

    @property
    def levels(self) -> LevelMap:
        return self.beta.levels


def check_match(
    rule: Rule,
    host: MultilevelTyping,
    mu: GraphMorphism,
    beta: TypingChainMorphism,
) -> list[MatchIssue]:
    """Diagnose the two match conditions; an empty list means a valid match."""
    issues: list[MatchIssue] = []
    f = beta.levels
    for i in range(1, rule.depth + 1):
        preimage = mu.preimage_of(host.level_graph(f(i)))
        li = rule.typing_lhs.level_graph(i)
        if preimage != li:
            witness = next(
                (e for e in preimage.elements() if e not in li),
                next((e for e in li.elements() if e not in preimage), None),
            )
            issues.append(
                MatchIssue("reduct", i, witness, "left-hand side level is not the preimage of the host level")
            )
    for i in range(rule.depth + 1):
        li = rule.typing_lhs.level_graph(i)
        for elem in li.elements():
            expected = beta.map(i).apply(rule.typing_lhs.type_at(elem, i))
            mapped = mu.apply(elem)
            actual = host.type_at(mapped, f(i)) if mapped in host.level_graph(f(i)) else None
            if actual != expected:
                issues.append(
                    MatchIssue("type-compatibility", i, elem, "host type disagrees with the translated rule type")
                )
    return issues


def _mu_candidates(
    rule: Rule, host: MultilevelTyping, beta: TypingChainMorphism
) -> tuple[dict[str, list[str]], dict[str, list[str]]] | None:
    """Per-element host candidates implied by the two match conditions.

    An element typed at rule level ``i`` must land on a host element typed
    at level ``f(i)`` with the translated type; an element untyped at ``i``
    must avoid host level ``f(i)`` entirely.
    """
    f = beta.levels
    node_cands: dict[str, list[str]] = {}
    arrow_cands: dict[str, list[str]] = {}
    for elem in rule.lhs.elements():
        pool = host.subject.nodes if elem.kind == NODE else set(host.subject.arrows)
        allowed = set(pool)
        for i in range(1, rule.depth + 1):
            level_graph = host.level_graph(f(i))
            members = level_graph.nodes if elem.kind == NODE else set(level_graph.arrows)
            if elem in rule.typing_lhs.level_graph(i):
                want = beta.map(i).apply(rule.typing_lhs.type_at(elem, i))
                typed_right = {
                    name
                    for name in members
                    if host.type_at(ElementId(elem.kind, name), f(i)) == want
                }
                allowed &= typed_right
            else:
                allowed -= members
        want0 = beta.map(0).apply(rule.typing_lhs.type_at(elem, 0))
        allowed = {name for name in allowed if host.type_at(ElementId(elem.kind, name), 0) == want0}
        if not allowed:
            return None
        (node_cands if elem.kind == NODE else arrow_cands)[elem.name] = sorted(allowed)
    return node_cands, arrow_cands


def iter_matches(rule: Rule, host: MultilevelTyping) -> Iterator[MatchCandidate]:
    """Lazily enumerate all matches of a rule into a typed host graph."""
    tg = host.target
    for f in enumerate_level_maps(rule.depth, tg.depth):
        for beta in enumerate_chain_morphisms(rule.mm, tg, f, rule.constants):
            candidates = _mu_candidates(rule, host, beta)
            if candidates is None:
                continue
            for mu in graph_homomorphisms(rule.lhs, host.subject, *candidates):
                if check_match(rule, host, mu, beta):
                    continue
                mu_chain = reduct(host.chain, mu, f).morphism
                yield MatchCandidate(mu, beta, mu_chain)


def find_matches(rule: Rule, host: MultilevelTyping) -> list[MatchCandidate]:
    return list(iter_matches(rule, host))
