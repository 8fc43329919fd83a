"""Multilevel typed graph transformation engine.

Graphs are typed over typing chains; rules are cospans of multilevel typed
graphs over their own chain; matching relates the two chains through a
level map, and application rewrites the host by a pushout followed by a
final pullback complement, keeping every level consistently typed.
"""

from .chains import (
    DirectType,
    InclusionChain,
    LevelMap,
    MultilevelTyping,
    ReductResult,
    TypingChain,
    TypingChainMorphism,
    ValidationIssue,
    ValidationReport,
    check_compatibility,
    complete_direct_types,
    compose_chain_morphisms,
    direct_type,
    inclusion_chain,
    is_closed,
    reduct,
    transitive_types,
    validate_chain,
)
from .documents import (
    Hierarchy,
    HierarchyDocument,
    RuleDocument,
    hierarchy_to_json,
    parse_hierarchy,
    parse_rule,
    serialize_hierarchy,
)
from .dot import export_dot
from .errors import (
    ChainAxiomViolation,
    ChainMismatch,
    CodomainMismatch,
    CoherenceViolation,
    DanglingTypeReference,
    DepthExceedsTarget,
    DepthMismatch,
    HomomorphismViolation,
    IdentificationConflict,
    MatchInvalid,
    MltgError,
    NotASubgraph,
    NotInclusion,
    ParseError,
    PullbackViolation,
    SignatureMismatch,
    TypingDisagreement,
    UnknownElement,
)
from .graphs import (
    ElementId,
    Graph,
    GraphMorphism,
    PartialGraphMorphism,
    arrow_id,
    compose_partial,
    eq_partial,
    is_subgraph,
    leq_partial,
    node_id,
)
from .limits import (
    FpbcResult,
    PushoutResult,
    final_pullback_complement,
    pullback,
    pushout_inclusion,
)
from .matching import (
    MatchCandidate,
    MatchIssue,
    check_match,
    enumerate_chain_morphisms,
    enumerate_level_maps,
    find_matches,
    graph_homomorphisms,
    iter_matches,
)
from .rewriting import ApplicationResult, PushoutStep, apply_rule, fpbc_step, pushout_step
from .rules import Rule, build_rule, rule_deletes

__all__ = [name for name in dir() if not name.startswith("_")]
