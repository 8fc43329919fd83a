"""Rule application: extend the host by a pushout, then delete by a final
pullback complement.

Only one pushout is ever computed, at the bottom level; every higher level
of the extended chain is the union of the surviving host level with the
image of the rule's union chain, and levels the rule does not reach are
carried over untouched.  Deletion mirrors this: the complement is computed
once at the bottom and intersected upwards, its typing borrowed from the
extended chain.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chains import (
    InclusionChain,
    LevelMap,
    MultilevelTyping,
    TypingChainMorphism,
)
from .errors import MatchInvalid, PullbackViolation
from .graphs import Graph, GraphMorphism
from .limits import final_pullback_complement, pushout_inclusion
from .matching import MatchCandidate, check_match
from .rules import Rule


@dataclass(frozen=True)
class PushoutStep:
    """Extended host typing with the two embeddings produced alongside it."""

    d: MultilevelTyping
    host_embedding: TypingChainMorphism
    union_embedding: TypingChainMorphism
    trace: tuple[str, ...]


@dataclass(frozen=True)
class ApplicationResult:
    """Everything a rule application produces.

    ``d`` is the host extended by the created elements, ``t`` the final
    result after deletion.  The four chain morphisms connect the stages:
    host into extension, rule union into extension, result into extension,
    and right-hand side into result (the co-match).
    """

    d: MultilevelTyping
    t: MultilevelTyping
    host_embedding: TypingChainMorphism
    union_embedding: TypingChainMorphism
    result_embedding: TypingChainMorphism
    co_match: TypingChainMorphism
    trace: tuple[str, ...]

    @property
    def result(self) -> Graph:
        return self.t.subject


def _fmt_elements(graph_or_names) -> str:
    if isinstance(graph_or_names, Graph):
        names = sorted(graph_or_names.nodes) + sorted(graph_or_names.arrows)
    else:
        names = sorted(graph_or_names)
    return "{" + ", ".join(names) + "}"


def pushout_step(rule: Rule, match: MatchCandidate, host: MultilevelTyping) -> PushoutStep:
    """Glue the rule's union graph onto the host along the match.

    New elements keep their rule-side names unless the host already uses
    them, in which case they are freshened deterministically; the trace
    records every renaming.
    """
    issues = check_match(rule, host, match.mu, match.beta)
    if issues:
        raise MatchInvalid(issues)

    f = match.levels
    m = host.depth
    n = rule.depth
    trace: list[str] = []

    lam0 = GraphMorphism.inclusion(rule.lhs, rule.union)
    po = pushout_inclusion(lam0, match.mu)
    d0, keep, extend = po.graph, po.keep, po.extend
    for old, new in sorted(po.renamed.items()):
        trace.append(f"renamed {old} -> {new} (name taken in the host)")
    added0 = {extend.node_map[x] for x in rule.union.nodes - rule.lhs.nodes}
    added_arrows0 = {extend.arrow_map[a] for a in set(rule.union.arrows) - set(rule.lhs.arrows)}
    trace.append(f"extended host with {_fmt_elements(added0 | added_arrows0)}")

    mapped = {f(i): i for i in range(n + 1)}
    d_levels: list[Graph] = []
    for a in range(m + 1):
        if a == 0:
            d_levels.append(d0)
        elif a in mapped:
            i = mapped[a]
            image = extend.image_of(rule.typing_union.level_graph(i))
            d_levels.append(host.level_graph(a).union(image))
        else:
            d_levels.append(host.level_graph(a))
    for a in range(1, m + 1):
        if a in mapped:
            new_here = sorted(
                (d_levels[a].nodes - host.level_graph(a).nodes)
                | (set(d_levels[a].arrows) - set(host.level_graph(a).arrows))
            )
            trace.append(f"level {a}: joined rule level {mapped[a]}, new {_fmt_elements(new_here)}")
        else:
            trace.append(f"level {a}: untouched (not reached by the rule)")

    d_chain = InclusionChain.on(d0, list(reversed(d_levels[1:])))

    # Typing of the extension: host elements keep their types, created
    # elements get the translated types of their rule-side originals.
    new_origin_nodes = {extend.node_map[x]: x for x in rule.union.nodes - rule.lhs.nodes}
    new_origin_arrows = {extend.arrow_map[a]: a for a in set(rule.union.arrows) - set(rule.lhs.arrows)}
    sigma_maps: list[GraphMorphism] = []
    for a in range(m + 1):
        host_map = host.typing.map(a)
        node_map = dict(host_map.node_map)
        arrow_map = dict(host_map.arrow_map)
        if a in mapped:
            i = mapped[a]
            sigma_i = rule.typing_union.typing.map(i)
            beta_i = match.beta.map(i)
            for name in d_levels[a].nodes - host.level_graph(a).nodes:
                origin = new_origin_nodes[name]
                node_map[name] = beta_i.node_map[sigma_i.node_map[origin]]
            for name in set(d_levels[a].arrows) - set(host.level_graph(a).arrows):
                origin = new_origin_arrows[name]
                arrow_map[name] = beta_i.arrow_map[sigma_i.arrow_map[origin]]
        sigma_maps.append(GraphMorphism(d_levels[a], host.target.graph(a), node_map, arrow_map))

    d = MultilevelTyping(
        d0,
        d_chain,
        TypingChainMorphism.checked(d_chain, host.target, LevelMap.identity(m), sigma_maps),
    )
    host_embedding = TypingChainMorphism(
        host.chain,
        d_chain,
        LevelMap.identity(m),
        tuple(GraphMorphism.inclusion(host.level_graph(a), d_levels[a]) for a in range(m + 1)),
    )
    union_embedding = TypingChainMorphism(
        rule.typing_union.chain,
        d_chain,
        f,
        tuple(
            extend.restrict_to(rule.typing_union.level_graph(i), d_levels[f(i)]) for i in range(n + 1)
        ),
    )
    return PushoutStep(d, host_embedding, union_embedding, tuple(trace))


def fpbc_step(
    d: MultilevelTyping,
    rule: Rule,
    union_embedding: TypingChainMorphism,
) -> tuple[MultilevelTyping, TypingChainMorphism, TypingChainMorphism, tuple[str, ...]]:
    """Remove the deleted part of the rule image from the extended host.

    Deletion happens once at the bottom graph; every level above is cut
    down by intersection and keeps the typing it already had.  Raises
    :class:`IdentificationConflict` when the match identified a deleted
    element with a preserved one.
    """
    m = d.depth
    f = union_embedding.levels
    trace: list[str] = []

    rho0 = GraphMorphism.inclusion(rule.rhs, rule.union)
    delta0 = union_embedding.map(0)
    fp = final_pullback_complement(rho0, delta0)
    t0 = fp.graph

    removed = (d.subject.nodes - t0.nodes) | (set(d.subject.arrows) - set(t0.arrows))
    if removed:
        trace.append(f"deleted {_fmt_elements(removed)}")
    if fp.dangling:
        trace.append(f"dropped dangling arrows {_fmt_elements(fp.dangling)}")
    if not removed:
        trace.append("nothing to delete; result equals the extension")

    t_levels = [t0] + [t0.intersect(d.level_graph(a)) for a in range(1, m + 1)]
    t_chain = InclusionChain.on(t0, list(reversed(t_levels[1:])))
    sigma_t = [d.typing.map(a).restrict_to(t_levels[a]) for a in range(m + 1)]
    t = MultilevelTyping(
        t0,
        t_chain,
        TypingChainMorphism.checked(t_chain, d.target, LevelMap.identity(m), sigma_t),
    )

    result_embedding = TypingChainMorphism(
        t_chain,
        d.chain,
        LevelMap.identity(m),
        tuple(GraphMorphism.inclusion(t_levels[a], d.level_graph(a)) for a in range(m + 1)),
    )

    co_maps = []
    for i in range(rule.depth + 1):
        ri = rule.typing_rhs.level_graph(i)
        target_level = t_levels[f(i)]
        if fp.co_match.preimage_of(target_level) != ri:
            raise PullbackViolation(f"right-hand side level {i} is not the preimage of the result level")
        co_maps.append(fp.co_match.restrict_to(ri, target_level))
    co_match = TypingChainMorphism(rule.typing_rhs.chain, t_chain, f, tuple(co_maps))
    return t, result_embedding, co_match, tuple(trace)


def apply_rule(rule: Rule, match: MatchCandidate, host: MultilevelTyping) -> ApplicationResult:
    """Full application: pushout step followed by the deletion step."""
    step = pushout_step(rule, match, host)
    t, result_embedding, co_match, fpbc_trace = fpbc_step(step.d, rule, step.union_embedding)
    return ApplicationResult(
        d=step.d,
        t=t,
        host_embedding=step.host_embedding,
        union_embedding=step.union_embedding,
        result_embedding=result_embedding,
        co_match=co_match,
        trace=step.trace + fpbc_trace,
    )
