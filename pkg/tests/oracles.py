"""Independent verification oracles for the categorical constructions.

Everything here recomputes properties from first principles: homomorphism
enumeration is a nodes-first brute-force search (the engine matches
arrows-first), universal properties are checked by enumerating cones and
cocones from a fixed pool of small tip graphs, and pullback complements
are enumerated from the defining fiber conditions.  None of it calls into
the engine's own search or construction paths.
"""

from __future__ import annotations

from itertools import product

from mltg.graphs import Graph, GraphMorphism

# ---------------------------------------------------------------------------
# Brute-force homomorphism enumeration (nodes first, plain filtering)


def brute_homomorphisms(dom: Graph, cod: Graph) -> list[GraphMorphism]:
    """Every total homomorphism dom -> cod, by exhaustive assignment."""
    nodes = sorted(dom.nodes)
    arrows = sorted(dom.arrows)
    out = []
    for node_images in product(sorted(cod.nodes), repeat=len(nodes)):
        nm = dict(zip(nodes, node_images))
        arrow_choices = []
        ok = True
        for a in arrows:
            s, t = dom.arrows[a]
            fits = [b for b, (bs, bt) in sorted(cod.arrows.items()) if bs == nm[s] and bt == nm[t]]
            if not fits:
                ok = False
                break
            arrow_choices.append(fits)
        if not ok:
            continue
        for arrow_images in product(*arrow_choices):
            out.append(GraphMorphism(dom, cod, nm, dict(zip(arrows, arrow_images))))
    return out


def maps_with_fibers(
    dom: Graph,
    cod: Graph,
    node_fiber: dict[str, list[str]],
    arrow_fiber: dict[str, list[str]],
) -> list[GraphMorphism]:
    """All homomorphisms dom -> cod whose values lie in the given fibers."""
    nodes = sorted(dom.nodes)
    arrows = sorted(dom.arrows)
    out = []
    node_pools = [node_fiber.get(n, []) for n in nodes]
    for node_images in product(*node_pools):
        nm = dict(zip(nodes, node_images))
        pools = []
        ok = True
        for a in arrows:
            s, t = dom.arrows[a]
            fits = [b for b in arrow_fiber.get(a, []) if cod.arrows[b] == (nm[s], nm[t])]
            if not fits:
                ok = False
                break
            pools.append(fits)
        if not ok:
            continue
        for arrow_images in product(*pools):
            out.append(GraphMorphism(dom, cod, nm, dict(zip(arrows, arrow_images))))
    return out


# ---------------------------------------------------------------------------
# Tip graphs for cone/cocone enumeration (all within four nodes)

_N = Graph.of({"q0"})
_NN = Graph.of({"q0", "q1"})
_E = Graph.of({"q0", "q1"}, {"qe": ("q0", "q1")})
_LOOP = Graph.of({"q0"}, {"qe": ("q0", "q0")})
_PATH = Graph.of({"q0", "q1", "q2"}, {"qe": ("q0", "q1"), "qf": ("q1", "q2")})
_PAR = Graph.of({"q0", "q1"}, {"qe": ("q0", "q1"), "qf": ("q0", "q1")})

CONE_TIPS = (Graph.empty(), _N, _E, _LOOP, _PAR)
COCONE_TIPS = (_N, _NN, _E, _LOOP, _PATH)


# ---------------------------------------------------------------------------
# Universal property of the pullback


def count_mediating_to_pullback(p, p1, p2, q1, q2) -> int:
    """Morphisms u with u;p1 = q1 and u;p2 = q2, counted via fibers."""
    tip = q1.dom
    node_fiber = {
        n: [x for x in sorted(p.nodes) if p1.node_map[x] == q1.node_map[n] and p2.node_map[x] == q2.node_map[n]]
        for n in tip.nodes
    }
    arrow_fiber = {
        a: [x for x in sorted(p.arrows) if p1.arrow_map[x] == q1.arrow_map[a] and p2.arrow_map[x] == q2.arrow_map[a]]
        for a in tip.arrows
    }
    return len(maps_with_fibers(tip, p, node_fiber, arrow_fiber))


def check_pullback_universal(f, g, p, p1, p2) -> list[str]:
    """Exhaustively verify the pullback square over the cone-tip pool."""
    problems = []
    if p1.then(f) != p2.then(g):
        problems.append("projection square does not commute")
    for tip in CONE_TIPS:
        for q1 in brute_homomorphisms(tip, f.dom):
            # The second leg is forced into the fibers of g over f's values.
            node_fiber = {
                n: [y for y in sorted(g.dom.nodes) if g.node_map[y] == f.node_map[q1.node_map[n]]]
                for n in tip.nodes
            }
            arrow_fiber = {
                a: [b for b in sorted(g.dom.arrows) if g.arrow_map[b] == f.arrow_map[q1.arrow_map[a]]]
                for a in tip.arrows
            }
            for q2 in maps_with_fibers(tip, g.dom, node_fiber, arrow_fiber):
                count = count_mediating_to_pullback(p, p1, p2, q1, q2)
                if count != 1:
                    problems.append(f"cone from {tip.size()} has {count} mediating morphisms")
    return problems


# ---------------------------------------------------------------------------
# Universal property of the pushout


def count_mediating_from_pushout(result, lam, mu, z1, z2) -> int:
    """Morphisms u with extend;u = z1 and keep;u = z2, counted via fibers."""
    p = result.graph
    z = z1.cod
    node_fiber: dict[str, list[str]] = {}
    for x in p.nodes:
        want = set()
        for h_node, img in result.extend.node_map.items():
            if img == x:
                want.add(z1.node_map[h_node])
        for k_node, img in result.keep.node_map.items():
            if img == x:
                want.add(z2.node_map[k_node])
        node_fiber[x] = sorted(want) if len(want) == 1 else ([] if want else sorted(z.nodes))
    arrow_fiber: dict[str, list[str]] = {}
    for a in p.arrows:
        want = set()
        for h_arrow, img in result.extend.arrow_map.items():
            if img == a:
                want.add(z1.arrow_map[h_arrow])
        for k_arrow, img in result.keep.arrow_map.items():
            if img == a:
                want.add(z2.arrow_map[k_arrow])
        arrow_fiber[a] = sorted(want) if len(want) == 1 else ([] if want else sorted(z.arrows))
    return len(maps_with_fibers(p, z, node_fiber, arrow_fiber))


def check_pushout_universal(lam, mu, result) -> list[str]:
    """Exhaustively verify the pushout square over the cotip pool."""
    problems = []
    if not all(result.extend.node_map[n] == result.keep.node_map[mu.node_map[n]] for n in lam.dom.nodes):
        problems.append("pushout square does not commute on nodes")
    if not all(result.extend.arrow_map[a] == result.keep.arrow_map[mu.arrow_map[a]] for a in lam.dom.arrows):
        problems.append("pushout square does not commute on arrows")
    covered_nodes = set(result.extend.node_map.values()) | set(result.keep.node_map.values())
    covered_arrows = set(result.extend.arrow_map.values()) | set(result.keep.arrow_map.values())
    if covered_nodes != result.graph.nodes or covered_arrows != set(result.graph.arrows):
        problems.append("the two legs are not jointly surjective")
    for z in COCONE_TIPS:
        for z1 in brute_homomorphisms(lam.cod, z):
            # Second leg constrained on the image of the shared part.
            forced_nodes: dict[str, list[str]] = {}
            for y in mu.cod.nodes:
                want = {z1.node_map[x] for x in lam.dom.nodes if mu.node_map[x] == y}
                forced_nodes[y] = sorted(want) if len(want) == 1 else ([] if want else sorted(z.nodes))
            forced_arrows: dict[str, list[str]] = {}
            for b in mu.cod.arrows:
                want = {z1.arrow_map[x] for x in lam.dom.arrows if mu.arrow_map[x] == b}
                forced_arrows[b] = sorted(want) if len(want) == 1 else ([] if want else sorted(z.arrows))
            for z2 in maps_with_fibers(mu.cod, z, forced_nodes, forced_arrows):
                count = count_mediating_from_pushout(result, lam, mu, z1, z2)
                if count != 1:
                    problems.append(f"cocone into {z.size()} has {count} mediating morphisms")
    return problems


# ---------------------------------------------------------------------------
# Pullback complements and finality


def is_pullback_complement(rho, delta, t_graph: Graph, theta: GraphMorphism, nu: GraphMorphism) -> bool:
    """Definition check: the square commutes and its pullback is the
    preserved part, witnessed elementwise."""
    r = rho.dom
    for y in r.nodes:
        if theta.node_map[nu.node_map[y]] != delta.node_map[y]:
            return False
    for b in r.arrows:
        if theta.arrow_map[nu.arrow_map[b]] != delta.arrow_map[b]:
            return False
    # Pullback of (theta, delta) must be R, projections rho and nu: for every
    # element of I the theta-fiber over its delta-image is a single point if
    # the element is preserved and empty otherwise.
    for y in rho.cod.nodes:
        fiber = [x for x in t_graph.nodes if theta.node_map[x] == delta.node_map[y]]
        if y in r.nodes and fiber != [nu.node_map[y]]:
            return False
        if y not in r.nodes and fiber:
            return False
    for b in rho.cod.arrows:
        fiber = [x for x in t_graph.arrows if theta.arrow_map[x] == delta.arrow_map[b]]
        if b in r.arrows and fiber != [nu.arrow_map[b]]:
            return False
        if b not in r.arrows and fiber:
            return False
    return True


def enumerate_pullback_complements(rho, delta, max_extra_nodes: int = 1, max_extra_arrows: int = 1):
    """All pullback complements of ``rho;delta`` up to bounded extra junk.

    The fiber conditions force one element over each preserved image and
    none over each deleted one; everything else must sit over parts of the
    codomain that the middle graph does not reach.  Candidates are built
    from that analysis and then re-checked against the plain definition.
    """
    r, i, d = rho.dom, rho.cod, delta.cod
    kept_node_imgs = sorted({delta.node_map[y] for y in r.nodes})
    kept_arrow_imgs = sorted({delta.arrow_map[b] for b in r.arrows})
    free_nodes = sorted(d.nodes - {delta.node_map[x] for x in i.nodes})
    free_arrows = sorted(set(d.arrows) - {delta.arrow_map[x] for x in i.arrows})

    core_nodes = {img: f"t{k}" for k, img in enumerate(kept_node_imgs)}
    results = []

    junk_node_options = [()]
    for dn in free_nodes:
        junk_node_options.append((dn,))
    if max_extra_nodes < 1:
        junk_node_options = [()]

    for junk_nodes in junk_node_options:
        theta_nodes = {name: img for img, name in core_nodes.items()}
        for k, dn in enumerate(junk_nodes):
            theta_nodes[f"j{k}"] = dn

        def fiber_of(d_node: str) -> list[str]:
            return [name for name, img in theta_nodes.items() if img == d_node]

        arrow_options = [()]
        if max_extra_arrows >= 1:
            for da in free_arrows:
                s_fib, t_fib = fiber_of(d.src(da)), fiber_of(d.tgt(da))
                for s_name in s_fib:
                    for t_name in t_fib:
                        arrow_options.append(((da, s_name, t_name),))
        for junk_arrows in arrow_options:
            arrows = {}
            theta_arrows = {}
            ok = True
            for k, img in enumerate(kept_arrow_imgs):
                s_fib, t_fib = fiber_of(d.src(img)), fiber_of(d.tgt(img))
                if len(s_fib) != 1 or len(t_fib) != 1:
                    ok = False
                    break
                arrows[f"e{k}"] = (s_fib[0], t_fib[0])
                theta_arrows[f"e{k}"] = img
            if not ok:
                continue
            for k, (da, s_name, t_name) in enumerate(junk_arrows):
                arrows[f"g{k}"] = (s_name, t_name)
                theta_arrows[f"g{k}"] = da
            t_graph = Graph(frozenset(theta_nodes), arrows)
            theta = GraphMorphism(t_graph, d, theta_nodes, theta_arrows)
            nu = GraphMorphism(
                r,
                t_graph,
                {y: core_nodes[delta.node_map[y]] for y in r.nodes},
                {b: next(e for e, img in theta_arrows.items() if img == delta.arrow_map[b]) for b in r.arrows},
            )
            if is_pullback_complement(rho, delta, t_graph, theta, nu):
                results.append((t_graph, theta, nu))
    return results


def check_fpbc_final(rho, delta, fp) -> list[str]:
    """The engine's complement must absorb every enumerated complement
    through exactly one commuting morphism."""
    problems = []
    if not is_pullback_complement(rho, delta, fp.graph, fp.embed, fp.co_match):
        problems.append("engine output is not a pullback complement")
    for t_graph, theta, nu in enumerate_pullback_complements(rho, delta):
        # theta-images must land in the final complement, and the forced
        # corestriction must be the only commuting morphism.
        into = {}
        ok = True
        for n in t_graph.nodes:
            if theta.node_map[n] not in fp.graph.nodes:
                ok = False
                break
            into[n] = theta.node_map[n]
        arrows_into = {}
        if ok:
            for a in t_graph.arrows:
                if theta.arrow_map[a] not in fp.graph.arrows:
                    ok = False
                    break
                arrows_into[a] = theta.arrow_map[a]
        if not ok:
            problems.append("an alternative complement does not embed into the final one")
            continue
        h = GraphMorphism(t_graph, fp.graph, into, arrows_into)
        if any(h.node_map[nu.node_map[y]] != fp.co_match.node_map[y] for y in rho.dom.nodes) or any(
            h.arrow_map[nu.arrow_map[b]] != fp.co_match.arrow_map[b] for b in rho.dom.arrows
        ):
            problems.append("mediating morphism does not commute with the co-matches")
        # Uniqueness: embed is injective, so any commuting h' equals h.
        node_fiber = {n: [x for x in fp.graph.nodes if fp.embed.node_map[x] == theta.node_map[n]] for n in t_graph.nodes}
        arrow_fiber = {
            a: [x for x in fp.graph.arrows if fp.embed.arrow_map[x] == theta.arrow_map[a]] for a in t_graph.arrows
        }
        if len(maps_with_fibers(t_graph, fp.graph, node_fiber, arrow_fiber)) != 1:
            problems.append("mediating morphism into the final complement is not unique")
    return problems


# ---------------------------------------------------------------------------
# Explicit levelwise pushout (the construction the engine avoids)


def spec_freshen(wanted: list[str], taken: set[str]) -> dict[str, str]:
    """Reference renaming rule: smallest free ``#k`` suffix, k from 2."""
    renames = {}
    reserved = set(taken) | set(wanted)
    for name in sorted(wanted):
        if name not in taken:
            renames[name] = name
            continue
        k = 2
        while f"{name}#{k}" in reserved:
            k += 1
        renames[name] = f"{name}#{k}"
        reserved.add(renames[name])
    return renames


def global_renames(l0: Graph, i0: Graph, host: Graph) -> tuple[dict[str, str], dict[str, str]]:
    """One renaming for all levels, computed from the bottom graphs: this is
    the disjointness assumption made concrete."""
    return (
        spec_freshen(sorted(i0.nodes - l0.nodes), set(host.nodes)),
        spec_freshen(sorted(set(i0.arrows) - set(l0.arrows)), set(host.arrows)),
    )


def explicit_levelwise_pushout(
    l_i: Graph,
    i_i: Graph,
    mu_i: GraphMorphism,
    node_names: dict[str, str],
    arrow_names: dict[str, str],
) -> Graph:
    """Pushout at one level under a shared renaming of the new elements."""
    new_nodes = sorted(i_i.nodes - l_i.nodes)
    new_arrows = sorted(set(i_i.arrows) - set(l_i.arrows))

    def resolve(x: str) -> str:
        return mu_i.node_map[x] if x in l_i.nodes else node_names[x]

    nodes = set(mu_i.cod.nodes) | {node_names[n] for n in new_nodes}
    arrows = dict(mu_i.cod.arrows)
    for a in new_arrows:
        arrows[arrow_names[a]] = (resolve(i_i.src(a)), resolve(i_i.tgt(a)))
    return Graph(frozenset(nodes), arrows)
