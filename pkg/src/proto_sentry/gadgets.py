"""Gadget detection: property reads that can fall through to the prototype.

Given a set of property names known (or suspected) to be pollutable, find
reads of those properties reachable from the entry set, mark their results
polluted, and track the marks into calls the codebase cannot resolve. A
write of a polluted value into an object marks that object receiver, so a
sink receiving either label is reported together with the read that fed it.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

from .callgraph import (
    CALLBACK_BUILTINS,
    CallGraph,
    UNKNOWN_CALLEE,
)
from .frontend.ast import AstNode, canonical_number
from .frontend.model import ProgramModel, SourceUnit
from .taint.engine import (
    NodeSeed,
    Span,
    TaintSpec,
    TaintState,
    TaintStep,
    TransitionRule,
    reconstruct_path,
    run_taint,
)
from .taint.labels import POLLUTED, RECEIVER
from .taint.summaries import SummaryCatalog, load_catalog

logger = logging.getLogger(__name__)

DEFAULT_SINK_NAMES = frozenset({
    "exec", "execSync", "execFile", "execFileSync", "spawn", "spawnSync",
    "fork", "eval", "Function",
})

# calls the engine models itself; never sinks
_MODELED_METHODS = CALLBACK_BUILTINS | {"bind"}

# lower rank wins when several reads feed the same sink
SEED_RANK = {"member-read": 0, "destructuring": 1, "indexed": 2, "for-in": 3}


@dataclass(frozen=True)
class SinkPolicy:
    unresolved_callees: bool = True
    explicit: frozenset[str] = DEFAULT_SINK_NAMES


@dataclass(frozen=True)
class GadgetQueryInput:
    properties: frozenset[str]
    # None means the exported functions of the analyzed program
    entry_set: frozenset[str] | None = None
    sink_policy: SinkPolicy = field(default_factory=SinkPolicy)


@dataclass
class GadgetFinding:
    property: str
    read_site: Span
    read_location: str
    seed_kind: str
    entry: str
    sink_call: Span
    sink_location: str
    callee: str
    sink_arg_index: int
    sink_arg_labels: list[str]
    flow: list[TaintStep]

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "read_site": {
                "path": self.read_site[0], "start": self.read_site[1],
                "end": self.read_site[2], "location": self.read_location,
            },
            "seed_kind": self.seed_kind,
            "entry": self.entry,
            "sink": {
                "path": self.sink_call[0], "start": self.sink_call[1],
                "end": self.sink_call[2], "location": self.sink_location,
                "callee": self.callee, "arg_index": self.sink_arg_index,
                "labels": list(self.sink_arg_labels),
            },
            "flow": [s.to_dict() for s in self.flow],
        }


# -- syntactic dominance ---------------------------------------------------------


def _parent_map(unit: SourceUnit) -> dict[int, AstNode]:
    parents: dict[int, AstNode] = {}
    for node in unit.ast.walk():
        for child in node.children:
            parents[child.node_id] = node
    return parents


def _guarded_slot(parent: AstNode, child: AstNode) -> bool:
    """Whether the child may be skipped at runtime although the parent runs."""
    kind = parent.kind
    idx = next(i for i, c in enumerate(parent.children) if c is child)
    if kind == "if":
        return idx >= 1
    if kind == "while":
        return idx == 1
    if kind == "for":
        # init runs unconditionally and the test at least once; the body
        # and the update expression may never run
        last = len(parent.children) - 1
        if idx == last:
            return True
        return bool(parent.attrs.get("has_update")) and idx == last - 1
    if kind in ("for-in", "for-of"):
        return idx in (0, 2)
    if kind == "do-while":
        return False
    if kind == "try":
        # the finalizer always runs; block and handler may be cut short
        if parent.attrs.get("has_finalizer") and child is parent.children[-1]:
            return False
        return True
    if kind == "switch":
        return idx >= 1
    if kind == "logical":
        return idx == 1
    if kind == "conditional":
        return idx >= 1
    return False


def _enclosing_function(node: AstNode, parents: dict[int, AstNode]) -> AstNode | None:
    cur = parents.get(node.node_id)
    while cur is not None and cur.kind not in ("function", "program"):
        cur = parents.get(cur.node_id)
    return cur


def _guards(node: AstNode, parents: dict[int, AstNode]) -> frozenset[int] | None:
    """Conditional ancestors up to the enclosing function; None when the
    chain crosses a nested function (different frame, no dominance)."""
    out: set[int] = set()
    cur = node
    parent = parents.get(cur.node_id)
    while parent is not None and parent.kind != "program":
        if parent.kind == "function":
            return frozenset(out)
        if _guarded_slot(parent, cur):
            out.add(parent.node_id)
        cur = parent
        parent = parents.get(cur.node_id)
    return frozenset(out)


def _literal_name(node: AstNode) -> str | None:
    """Constant property name of a member access, if any."""
    if not node.attrs.get("computed"):
        return node.attrs.get("prop_name")
    prop = node.children[1]
    if prop.kind == "literal":
        value = prop.attrs.get("value")
        if isinstance(value, str):
            return value
        if prop.attrs.get("literal_kind") == "number":
            return canonical_number(value)
    return None


class _UnitSeeds:
    """Per-unit candidate reads plus the definite-assignment records used
    to filter reads the object provably answers itself."""

    def __init__(self, unit: SourceUnit):
        self.unit = unit
        self.parents = _parent_map(unit)
        # (binding_id, name) -> list of (start, guards) for definite writes
        self.definites: dict[tuple[int, str], list[tuple[int, frozenset[int]]]] = {}
        # name -> list of (node, seed_kind, base_binding_id | None)
        self.reads: dict[str, list[tuple[AstNode, str, int | None]]] = {}
        self.for_in_lefts: list[AstNode] = []
        self._collect()

    def _record_definite(self, binding_id: int, name: str, site: AstNode) -> None:
        guards = _guards(site, self.parents)
        if guards is None:
            return
        self.definites.setdefault((binding_id, name), []).append(
            (site.start, guards))

    def _object_keys(self, literal: AstNode) -> list[str]:
        names = []
        for prop in literal.children:
            if prop.kind != "property" or prop.attrs.get("property_kind") != "init":
                continue
            key = prop.attrs.get("key_name")
            if key is not None:
                names.append(key)
        return names

    def _binding_id(self, node: AstNode) -> int | None:
        if node.kind != "identifier":
            return None
        binding = self.unit.scopes.binding_for(node)
        return binding.binding_id if binding is not None else None

    def _collect(self) -> None:
        scopes = self.unit.scopes
        for node in self.unit.ast.walk():
            if node.kind == "member-write":
                bid = self._binding_id(node.children[0])
                name = _literal_name(node)
                if bid is not None and name is not None:
                    self._record_definite(bid, name, node)
            elif node.kind == "assignment":
                target, value = node.children
                bid = self._binding_id(target)
                if bid is not None and value.kind == "object-literal":
                    for key in self._object_keys(value):
                        self._record_definite(bid, key, node)
            elif node.kind == "declarator":
                pattern = node.children[0]
                bid = self._binding_id(pattern)
                if bid is not None and node.attrs.get("has_init") and \
                        node.children[1].kind == "object-literal":
                    for key in self._object_keys(node.children[1]):
                        self._record_definite(bid, key, node)
            elif node.kind == "member-read":
                name = _literal_name(node)
                if name is None:
                    continue
                kind = "member-read"
                if node.attrs.get("computed") and \
                        node.children[1].kind == "literal" and \
                        node.children[1].attrs.get("literal_kind") == "number":
                    kind = "indexed"
                self.reads.setdefault(name, []).append(
                    (node, kind, self._binding_id(node.children[0])))
            elif node.kind == "pattern-property":
                key = node.attrs.get("key_name")
                if key is None:
                    continue
                value_bid = self._destructured_value_binding(node)
                self.reads.setdefault(key, []).append(
                    (node, "destructuring", value_bid))
            elif node.kind in ("for-in",):
                left = node.children[0]
                for ident in _pattern_identifiers(left):
                    self.for_in_lefts.append(ident)

    def _destructured_value_binding(self, prop: AstNode) -> int | None:
        # pattern-property -> object-pattern -> declarator/assignment
        parent = self.parents.get(prop.node_id)
        if parent is None or parent.kind != "object-pattern":
            return None
        holder = self.parents.get(parent.node_id)
        if holder is None:
            return None
        if holder.kind == "declarator" and holder.attrs.get("has_init"):
            return self._binding_id(holder.children[1])
        if holder.kind == "assignment":
            return self._binding_id(holder.children[1])
        return None

    def dominated(self, read: AstNode, base_binding: int | None,
                  name: str) -> bool:
        """True when a definite assignment of the property on the same
        binding precedes the read on every path; the object then answers
        the read itself and the prototype never supplies the value."""
        if base_binding is None:
            return False
        writes = self.definites.get((base_binding, name))
        if not writes:
            return False
        read_guards = _guards(read, self.parents)
        if read_guards is None:
            return False
        for start, guards in writes:
            if start < read.start and guards <= read_guards:
                return True
        return False


def _pattern_identifiers(node: AstNode) -> list[AstNode]:
    out = []
    stack = [node]
    while stack:
        cur = stack.pop()
        if cur.kind == "identifier":
            out.append(cur)
        elif cur.kind == "var-decl":
            stack.extend(cur.children)
        elif cur.kind == "declarator":
            stack.append(cur.children[0])
        elif cur.kind in ("object-pattern", "array-pattern", "rest-element",
                          "default-pattern"):
            stack.extend(cur.children)
        elif cur.kind == "pattern-property":
            stack.append(cur.children[-1])
    return out


# -- reachability ---------------------------------------------------------


def _adjacency(graph: CallGraph) -> dict[str, list[str]]:
    adj: dict[str, list[str]] = {}
    for edge in graph.edges:
        adj.setdefault(edge.caller, []).append(edge.callee)
    return adj


def _reach_from(adj: dict[str, list[str]], start: str) -> set[str]:
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in adj.get(cur, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


# -- sinks ---------------------------------------------------------


def _site_edges(graph: CallGraph) -> dict[tuple[str, tuple[int, int]], set[str]]:
    out: dict[tuple[str, tuple[int, int]], set[str]] = {}
    for edge in graph.edges:
        info = graph.nodes.get(edge.caller)
        if info is None or info.path is None:
            continue
        out.setdefault((info.path, edge.site), set()).add(edge.callee)
    return out


def _callee_name(call: AstNode) -> str | None:
    callee = call.children[0]
    if callee.kind == "identifier":
        return callee.attrs.get("name")
    if callee.kind in ("member-read", "member-write"):
        return _literal_name(callee)
    return None


def _is_sink(call: AstNode, path: str, policy: SinkPolicy,
             edges: dict[tuple[str, tuple[int, int]], set[str]],
             catalog: SummaryCatalog) -> bool:
    callee = call.children[0]
    if call.kind == "call":
        if catalog.matches_any(call):
            return False
        if callee.kind in ("member-read", "member-write") and \
                callee.attrs.get("prop_name") in _MODELED_METHODS:
            return False
    resolved = edges.get((path, (call.start, call.end)), set())
    if resolved - {UNKNOWN_CALLEE}:
        return False  # at least one callee has an implementation here
    name = _callee_name(call)
    if policy.unresolved_callees:
        return True
    return name is not None and name in policy.explicit


# -- the analysis ---------------------------------------------------------


def analyze_gadgets(model: ProgramModel, graph: CallGraph,
                    query: GadgetQueryInput, *,
                    summaries: SummaryCatalog | None = None,
                    transitions: tuple[TransitionRule, ...] | None = None,
                    context_depth: int = 1,
                    budget: int | None = None,
                    diagnostics: dict | None = None) -> list[GadgetFinding]:
    """Report unresolved calls receiving values derived from reads of the
    queried properties, one finding per (property, entry, sink)."""
    if not query.properties:
        raise ValueError("gadget query needs at least one property name")
    if diagnostics is not None:
        diagnostics.setdefault("incomplete", False)
    entries = query.entry_set
    if entries is None:
        entries = frozenset(graph.exports)
    if not entries:
        logger.warning("no entry functions for gadget query; nothing to analyze")
        return []

    adj = _adjacency(graph)
    reach_by_entry = {e: _reach_from(adj, e) for e in sorted(entries)}

    def entry_reaching(fid: str | None) -> str | None:
        if fid is None:
            return None
        for e in sorted(entries):
            if fid in reach_by_entry[e]:
                return e
        return None

    catalog = summaries if summaries is not None else load_catalog()
    edges = _site_edges(graph)
    unit_seeds = {unit.path: _UnitSeeds(unit) for unit in model.units}
    units = {unit.path: unit for unit in model.units}

    findings: list[GadgetFinding] = []
    for prop in sorted(query.properties):
        seeds: list[NodeSeed] = []
        # (path, start, end) of the seed node -> seed kind
        seed_kinds: dict[Span, str] = {}
        for path, us in sorted(unit_seeds.items()):
            candidates = list(us.reads.get(prop, ()))
            for ident in us.for_in_lefts:
                candidates.append((ident, "for-in", None))
            for node, kind, base_bid in candidates:
                if kind in ("member-read", "indexed", "destructuring") and \
                        us.dominated(node, base_bid, prop):
                    continue
                fid = graph.function_at(path, node.start)
                if entry_reaching(fid) is None:
                    continue
                seeds.append(NodeSeed(path, node.node_id, frozenset({POLLUTED})))
                span: Span = (path, node.start, node.end)
                have = seed_kinds.get(span)
                if have is None or SEED_RANK[kind] < SEED_RANK[have]:
                    seed_kinds[span] = kind
        if not seeds:
            continue

        spec_kwargs = dict(sources=seeds, context_depth=context_depth)
        if summaries is not None:
            spec_kwargs["summaries"] = summaries
        if transitions is not None:
            spec_kwargs["transitions"] = transitions
        if budget is not None:
            spec_kwargs["budget"] = budget
        state = run_taint(model, graph, TaintSpec(**spec_kwargs))
        if diagnostics is not None and state.incomplete:
            diagnostics["incomplete"] = True

        best: dict[tuple[str, str, Span], tuple[tuple, GadgetFinding]] = {}
        for path, unit in sorted(units.items()):
            for call in unit.ast.walk():
                if call.kind not in ("call", "new"):
                    continue
                if not _is_sink(call, path, query.sink_policy, edges, catalog):
                    continue
                for index, arg in enumerate(call.children[1:]):
                    marks = state.labels_of_node(path, arg.node_id) & \
                        frozenset({POLLUTED, RECEIVER})
                    if not marks:
                        continue
                    label = POLLUTED if POLLUTED in marks else RECEIVER
                    chain = reconstruct_path(state, path, arg.node_id, label)
                    read_site = chain.source_span
                    read_fid = graph.function_at(read_site[0], read_site[1])
                    entry = entry_reaching(read_fid)
                    if entry is None:
                        continue
                    seed_kind = seed_kinds.get(read_site)
                    if seed_kind is None:
                        continue
                    call_span: Span = (path, call.start, call.end)
                    flow = list(chain.steps) + [TaintStep(
                        from_span=chain.target_span, to_span=call_span,
                        rule="sink")]
                    rl, rc = units[read_site[0]].line_col(read_site[1])
                    sl, sc = unit.line_col(call.start)
                    finding = GadgetFinding(
                        property=prop,
                        read_site=read_site,
                        read_location=f"{read_site[0]}:{rl}:{rc}",
                        seed_kind=seed_kind,
                        entry=entry,
                        sink_call=call_span,
                        sink_location=f"{path}:{sl}:{sc}",
                        callee=_callee_name(call) or "<expression>",
                        sink_arg_index=index,
                        sink_arg_labels=sorted(marks),
                        flow=flow,
                    )
                    key = (prop, entry, call_span)
                    rank = (SEED_RANK[seed_kind], len(flow), read_site, index)
                    have = best.get(key)
                    if have is None or rank < have[0]:
                        best[key] = (rank, finding)
        findings.extend(f for _, f in best.values())

    findings.sort(key=lambda f: (f.property, f.sink_call, f.entry))
    return findings


def affected_exports(graph: CallGraph,
                     findings: list[GadgetFinding]) -> dict[str, set[str]]:
    """For each property, every exported function with a call path to one
    of its read sites."""
    adj = _adjacency(graph)
    reach = {e: _reach_from(adj, e) for e in sorted(graph.exports)}
    out: dict[str, set[str]] = {}
    for finding in findings:
        exports = out.setdefault(finding.property, set())
        read_fid = graph.function_at(finding.read_site[0], finding.read_site[1])
        if read_fid is None:
            continue
        for export, reachable in reach.items():
            if read_fid in reachable:
                exports.add(export)
    return out
