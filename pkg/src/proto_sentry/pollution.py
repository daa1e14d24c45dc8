"""Injection-sink detection: member writes whose base can be a prototype.

The defining pattern is a write ``obj[p][q] = v`` where the base carries the
proto label. The general query reports every such write; the priority query
additionally requires the property name and the assigned value to carry
input within one calling context, which is the shape an attacker needs to
plant an arbitrary key on ``Object.prototype``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .callgraph import CallGraph, EntryPointPath, entry_point_paths
from .frontend.ast import AstNode
from .frontend.model import ProgramModel, SourceUnit
from .taint.engine import (
    ParamSeed,
    Span,
    TaintSpec,
    TaintState,
    TaintStep,
    TransitionRule,
    reconstruct_path,
    run_taint,
)
from .taint.labels import INPUT, PROTO
from .taint.summaries import SummaryCatalog

GENERAL = "general"
PRIORITY = "priority"
EXPORTED_FUNCTIONS = "exported"
ANY_FUNCTIONS = "any"

QUERY_KINDS = (GENERAL, PRIORITY)
SEED_MODES = (EXPORTED_FUNCTIONS, ANY_FUNCTIONS)

# findings in files matching these globs get tagged, never dropped
DEFAULT_TEST_GLOBS = ("test/**", "**/*.test.js")
DEFAULT_CLIENT_GLOBS = ("client/**", "public/**")

TAG_TESTING = "testing-code"
TAG_CLIENT = "client-side"


def _glob_to_regex(pattern: str) -> re.Pattern[str]:
    out = []
    i = 0
    while i < len(pattern):
        ch = pattern[i]
        if ch == "*":
            if pattern[i:i + 2] == "**":
                out.append(".*")
                i += 2
                # collapse the separator after "**/" so "**/x" matches "x"
                if pattern[i:i + 1] == "/":
                    out[-1] = "(.*/)?"
                    i += 1
                continue
            out.append("[^/]*")
        elif ch == "?":
            out.append("[^/]")
        else:
            out.append(re.escape(ch))
        i += 1
    return re.compile("^" + "".join(out) + "$")


def match_globs(path: str, globs: tuple[str, ...]) -> bool:
    normal = path.replace("\\", "/").lstrip("./")
    return any(_glob_to_regex(g).match(normal) for g in globs)


@dataclass
class Finding:
    kind: str
    path: str
    start: int
    end: int
    line: int
    col: int
    mode: str
    controlled: dict[str, bool]
    flow: list[TaintStep]
    alternates: int = 0
    tags: list[str] = field(default_factory=list)

    @property
    def location(self) -> str:
        return f"{self.path}:{self.line}:{self.col}"

    @property
    def span(self) -> Span:
        return (self.path, self.start, self.end)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "location": self.location,
            "span": {"path": self.path, "start": self.start, "end": self.end},
            "mode": self.mode,
            "controlled": dict(self.controlled),
            "flow": [s.to_dict() for s in self.flow],
            "alternates": self.alternates,
            "tags": list(self.tags),
        }

    def text_line(self) -> str:
        # deferred import: reporting imports this module for the types
        from .reporting import finding_text_line
        return finding_text_line(self.to_dict())


@dataclass
class ProtoWriteLint:
    """A direct write through __proto__ or constructor.prototype."""

    path: str
    start: int
    end: int
    line: int
    col: int
    snippet: str

    @property
    def location(self) -> str:
        return f"{self.path}:{self.line}:{self.col}"

    def to_dict(self) -> dict:
        return {
            "location": self.location,
            "span": {"path": self.path, "start": self.start, "end": self.end},
            "snippet": self.snippet,
        }


def _seed_functions(graph: CallGraph, mode: str) -> list[ParamSeed]:
    if mode == EXPORTED_FUNCTIONS:
        ids = sorted(graph.exports)
    else:
        ids = sorted(fid for fid, (_, fn) in graph.functions.items()
                     if fn.kind == "function")
    return [ParamSeed(fid, frozenset({INPUT})) for fid in ids]


def _write_value(unit: SourceUnit, write: AstNode) -> AstNode | None:
    """The expression assigned at a member-write, when one exists."""
    for assign in unit.ast.find("assignment"):
        if assign.children[0] is write:
            return assign.children[1]
    return None


def _priority_contexts(state: TaintState, path: str, base: AstNode,
                       prop: AstNode | None, value: AstNode | None) -> list:
    """Contexts where proto on the base coincides with input on both the
    property name and the assigned value. Conjunction is per context so two
    unrelated call sites cannot combine into a spurious finding."""
    if prop is None or value is None:
        return []
    base_by = state.labels_of_node_by_ctx(path, base.node_id)
    prop_by = state.labels_of_node_by_ctx(path, prop.node_id)
    value_by = state.labels_of_node_by_ctx(path, value.node_id)
    out = []
    for ctx, labels in base_by.items():
        if PROTO not in labels:
            continue
        if INPUT in prop_by.get(ctx, ()) and INPUT in value_by.get(ctx, ()):
            out.append(ctx)
    return out


def _proto_contexts(state: TaintState, path: str, base: AstNode) -> list:
    return [ctx for ctx, labels
            in state.labels_of_node_by_ctx(path, base.node_id).items()
            if PROTO in labels]


def _sink_flow(state: TaintState, unit: SourceUnit, write: AstNode,
               base: AstNode) -> list[TaintStep]:
    flow = reconstruct_path(state, unit.path, base.node_id, PROTO)
    sink = TaintStep(
        from_span=flow.target_span,
        to_span=(unit.path, write.start, write.end),
        rule="sink",
    )
    return list(flow.steps) + [sink]


def detect_pollution(model: ProgramModel, graph: CallGraph, mode: str,
                     kind: str, *,
                     summaries: SummaryCatalog | None = None,
                     transitions: tuple[TransitionRule, ...] | None = None,
                     context_depth: int = 1,
                     return_pruning: bool = True,
                     budget: int | None = None,
                     test_globs: tuple[str, ...] = DEFAULT_TEST_GLOBS,
                     client_globs: tuple[str, ...] = DEFAULT_CLIENT_GLOBS,
                     diagnostics: dict | None = None,
                     ) -> list[Finding]:
    """Report member writes whose base can alias a prototype.

    mode picks the seeded entry set (exported functions or every function);
    kind picks the query (general: proto base suffices; priority: the
    property name and value must also carry input in the same context).
    When a diagnostics dict is passed, it receives an "incomplete" flag
    telling whether the analysis budget ran out before the fixpoint.
    """
    if mode not in SEED_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if kind not in QUERY_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if diagnostics is not None:
        diagnostics.setdefault("incomplete", False)
    if not model.units:
        return []
    seeds = _seed_functions(graph, mode)
    entry_functions = None
    if return_pruning and mode == EXPORTED_FUNCTIONS and graph.exports:
        entry_functions = frozenset(graph.exports)
    spec_kwargs = dict(
        sources=seeds,
        context_depth=context_depth,
        entry_functions=entry_functions,
    )
    if summaries is not None:
        spec_kwargs["summaries"] = summaries
    if transitions is not None:
        spec_kwargs["transitions"] = transitions
    if budget is not None:
        spec_kwargs["budget"] = budget
    state = run_taint(model, graph, TaintSpec(**spec_kwargs))
    if diagnostics is not None and state.incomplete:
        diagnostics["incomplete"] = True

    findings: list[Finding] = []
    seen: set[Span] = set()
    for unit in model.units:
        for write in unit.ast.find("member-write"):
            base, prop = write.children[0], write.children[1]
            proto_ctxs = _proto_contexts(state, unit.path, base)
            if not proto_ctxs:
                continue
            value = _write_value(unit, write)
            priority_ctxs = _priority_contexts(state, unit.path, base,
                                               prop, value)
            if kind == PRIORITY:
                matched = priority_ctxs
            else:
                matched = proto_ctxs
            if not matched:
                continue
            span: Span = (unit.path, write.start, write.end)
            if span in seen:
                continue
            seen.add(span)
            prop_labels = state.labels_of_node(unit.path, prop.node_id)
            value_labels = (state.labels_of_node(unit.path, value.node_id)
                            if value is not None else frozenset())
            line, col = unit.line_col(write.start)
            # at most one category so tagged findings partition cleanly
            tags = []
            if match_globs(unit.path, test_globs):
                tags.append(TAG_TESTING)
            elif match_globs(unit.path, client_globs):
                tags.append(TAG_CLIENT)
            findings.append(Finding(
                kind=kind,
                path=unit.path,
                start=write.start,
                end=write.end,
                line=line,
                col=col,
                mode=mode,
                controlled={
                    "base": True,
                    "propertyName": INPUT in prop_labels,
                    "value": INPUT in value_labels,
                },
                flow=_sink_flow(state, unit, write, base),
                alternates=len(matched) - 1,
                tags=tags,
            ))
    findings.sort(key=lambda f: (f.path, f.start, f.end))
    return findings


def detect_pollution_with_entries(
        model: ProgramModel, graph: CallGraph, kind: str, *,
        limit: int = 5, **kwargs,
) -> list[tuple[Finding, list[EntryPointPath]]]:
    """Any-function findings paired with call paths from graph roots down
    to the function containing each sink."""
    findings = detect_pollution(model, graph, ANY_FUNCTIONS, kind, **kwargs)
    out = []
    for finding in findings:
        fid = graph.function_at(finding.path, finding.start)
        paths = entry_point_paths(graph, fid, limit=limit) if fid else []
        out.append((finding, paths))
    return out


_PROTO_NAMES = ("__proto__",)


def _literal_prop_name(node: AstNode) -> str | None:
    if not node.attrs.get("computed"):
        return node.attrs.get("prop_name")
    prop = node.children[1]
    if prop.kind == "literal" and isinstance(prop.attrs.get("value"), str):
        return prop.attrs["value"]
    return None


def _chain_hits_prototype(node: AstNode) -> bool:
    # x.__proto__...  or  x.constructor.prototype...
    cur = node
    while cur.kind in ("member-read", "member-write"):
        name = _literal_prop_name(cur)
        if name in _PROTO_NAMES:
            return True
        if name == "prototype":
            base = cur.children[0]
            if base.kind in ("member-read", "member-write") and \
                    _literal_prop_name(base) == "constructor":
                return True
        cur = cur.children[0]
    return False


def lint_literal_proto_writes(model: ProgramModel) -> list[ProtoWriteLint]:
    """Flag writes that name the prototype outright; the taint queries do
    not special-case these strings, so the lint keeps them visible."""
    out = []
    for unit in model.units:
        for write in unit.ast.find("member-write"):
            if not _chain_hits_prototype(write):
                continue
            line, col = unit.line_col(write.start)
            out.append(ProtoWriteLint(
                path=unit.path,
                start=write.start,
                end=write.end,
                line=line,
                col=col,
                snippet=unit.text[write.start:write.end],
            ))
    out.sort(key=lambda l: (l.path, l.start))
    return out
