"""Command-line workflow: validate, match, apply, export-dot.

Exit codes: 0 success, 1 validation failure, 2 no match, 3 deletion
conflict (the pullback complement does not exist), 4 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chains import validate_chain
from .documents import (
    Hierarchy,
    bump_name,
    hierarchy_to_json,
    parse_hierarchy,
    parse_rule,
    report_to_json,
    serialize_hierarchy,
)
from .dot import export_dot
from .errors import (
    ChainAxiomViolation,
    DanglingTypeReference,
    IdentificationConflict,
    MltgError,
    ParseError,
)
from .matching import MatchCandidate, find_matches
from .rewriting import apply_rule

OK, INVALID, NO_MATCH, CONFLICT, BAD_INPUT = 0, 1, 2, 3, 4


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _emit_error(kind: str, exc: Exception, as_json: bool, code: int) -> int:
    if as_json:
        print(json.dumps({"error": {"type": kind, "message": str(exc)}}, indent=2))
    else:
        print(f"error ({kind}): {exc}", file=sys.stderr)
    return code


def _load_hierarchy(path: str) -> Hierarchy:
    return parse_hierarchy(_read(path))


def _match_json(index: int, match: MatchCandidate) -> dict:
    return {
        "index": index,
        "levels": list(match.levels.images),
        "beta": {
            str(i): {
                "nodes": dict(sorted(match.beta.map(i).node_map.items())),
                "arrows": dict(sorted(match.beta.map(i).arrow_map.items())),
            }
            for i in range(match.beta.src.depth + 1)
        },
        "mu": {
            "nodes": dict(sorted(match.mu.node_map.items())),
            "arrows": dict(sorted(match.mu.arrow_map.items())),
        },
    }


def _print_match(index: int, match: MatchCandidate) -> None:
    f = match.levels
    print(f"match {index}")
    print("  levels: " + " ".join(f"{i}->{f(i)}" for i in range(f.source_depth + 1)))
    for i in range(match.beta.src.depth + 1):
        beta_i = match.beta.map(i)
        pairs = [f"{k}->{v}" for k, v in sorted(beta_i.node_map.items())]
        pairs += [f"{k}->{v}" for k, v in sorted(beta_i.arrow_map.items())]
        print(f"  beta {i}: " + (", ".join(pairs) if pairs else "(empty)"))
    pairs = [f"{k}->{v}" for k, v in sorted(match.mu.node_map.items())]
    pairs += [f"{k}->{v}" for k, v in sorted(match.mu.arrow_map.items())]
    print("  mu: " + (", ".join(pairs) if pairs else "(empty)"))


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        hierarchy = _load_hierarchy(args.hierarchy)
    except (ParseError, DanglingTypeReference) as exc:
        return _emit_error("parse", exc, args.json, BAD_INPUT)
    except ChainAxiomViolation as exc:
        if args.json:
            issues = report_to_json(exc.report) if exc.report else [{"message": str(exc)}]
            print(json.dumps({"ok": False, "issues": issues}, indent=2))
        else:
            print(str(exc))
        return INVALID
    report = validate_chain(hierarchy.chain)
    if args.json:
        print(json.dumps({"ok": report.ok, "issues": report_to_json(report)}, indent=2))
    else:
        depth = hierarchy.chain.depth
        print(f"ok: chain depth {depth}, subject {hierarchy.subject_name}" if report.ok else str(report))
    return OK if report.ok else INVALID


def _collect_matches(rule, hierarchies: list[tuple[str, Hierarchy]], limit: int | None):
    found = []
    for path, hierarchy in hierarchies:
        for match in find_matches(rule, hierarchy.subject):
            found.append((path, hierarchy, match))
            if limit is not None and len(found) >= limit:
                return found
    return found


def cmd_match(args: argparse.Namespace) -> int:
    try:
        rule = parse_rule(_read(args.rule))
        hierarchies = [(path, _load_hierarchy(path)) for path in args.hierarchy]
    except (ParseError, DanglingTypeReference) as exc:
        return _emit_error("parse", exc, args.json, BAD_INPUT)
    except (ChainAxiomViolation, MltgError) as exc:
        return _emit_error("invalid", exc, args.json, INVALID)
    found = _collect_matches(rule, hierarchies, args.limit)
    if args.json:
        payload = [dict(_match_json(i, m), hierarchy=path) for i, (path, _, m) in enumerate(found)]
        print(json.dumps(payload, indent=2))
    else:
        for i, (path, _, match) in enumerate(found):
            if len(hierarchies) > 1:
                print(f"# {path}")
            _print_match(i, match)
        if not found:
            print("no matches")
    return OK if found else NO_MATCH


def cmd_apply(args: argparse.Namespace) -> int:
    try:
        rule = parse_rule(_read(args.rule))
        hierarchy = _load_hierarchy(args.hierarchy)
    except (ParseError, DanglingTypeReference) as exc:
        return _emit_error("parse", exc, args.json, BAD_INPUT)
    except (ChainAxiomViolation, MltgError) as exc:
        return _emit_error("invalid", exc, args.json, INVALID)
    matches = find_matches(rule, hierarchy.subject)
    if args.match_index >= len(matches):
        msg = f"requested match {args.match_index} but found {len(matches)}"
        return _emit_error("no-match", MltgError(msg), args.json, NO_MATCH)
    try:
        outcome = apply_rule(rule, matches[args.match_index], hierarchy.subject)
    except IdentificationConflict as exc:
        return _emit_error("identification-conflict", exc, args.json, CONFLICT)

    if hierarchy.has_separate_subject:
        names = hierarchy.names[:-1] + (bump_name(hierarchy.subject_name),)
    else:
        names = hierarchy.names + (bump_name(hierarchy.names[-1]),)
    result = Hierarchy(names, hierarchy.chain, outcome.t)
    text = serialize_hierarchy(result)
    if args.json:
        print(json.dumps({"hierarchy": hierarchy_to_json(result), "trace": list(outcome.trace)}, indent=2))
    elif args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.trace and not args.json:
        for line in outcome.trace:
            print(f"trace: {line}", file=sys.stderr)
    if args.out and args.json:
        Path(args.out).write_text(text, encoding="utf-8")
    return OK


def cmd_export_dot(args: argparse.Namespace) -> int:
    try:
        hierarchy = _load_hierarchy(args.hierarchy)
    except (ParseError, DanglingTypeReference) as exc:
        return _emit_error("parse", exc, False, BAD_INPUT)
    except (ChainAxiomViolation, MltgError) as exc:
        return _emit_error("invalid", exc, False, INVALID)
    text = export_dot(hierarchy)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mltg", description="Multilevel typed graph transformations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a hierarchy document against the chain axioms")
    p.add_argument("--hierarchy", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("match", help="list matches of a rule into one or more hierarchies")
    p.add_argument("--rule", required=True)
    p.add_argument("--hierarchy", action="append", required=True)
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_match)

    p = sub.add_parser("apply", help="apply a rule at a chosen match and write the result")
    p.add_argument("--rule", required=True)
    p.add_argument("--hierarchy", required=True)
    p.add_argument("--match-index", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_apply)

    p = sub.add_parser("export-dot", help="render a hierarchy as a layered DOT graph")
    p.add_argument("--hierarchy", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_export_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
