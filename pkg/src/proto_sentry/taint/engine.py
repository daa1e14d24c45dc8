"""Multi-label taint propagation over the normalized syntax tree.

The engine assigns label sets to *cells* and grows them to a least fixpoint.
A cell is one of:

``("expr", path, node_id, ctx)``        value of an expression node
``("bind", path, binding_id, ctx)``     value of a local binding
``("gbind", name)``                     value of a global binding (per name)
``("field", path, binding_id, name)``   constant-named property of a binding
                                        (``"*"`` is the dynamic-write wildcard)
``("ret", path, fn_node_id, ctx)``      joined return value of a function

``ctx`` is a tuple of call sites ``(path, call_node_id)`` truncated to the
configured depth.  Bindings that are captured by nested functions, declared
at module level, or global are context-collapsed to ``()``; seeds are written
to the ``()`` cell so they are visible under every context.  Field cells are
context-free by design.

Propagation is monotone: labels are only ever added, the lattice is a finite
powerset per cell, so the worklist terminates.  Each flow into a cell records
a provenance entry ``(pred_cell, pred_label, rule, site)``; seeded labels
record ``(None, None, "source", site)``.  Path reconstruction runs a
breadth-first search backward over provenance, which yields a step-minimal
path with deterministic tie-breaking on site spans.

Two label transitions are rule-driven and can be switched off per run:

* ``input-to-proto``: a computed member read whose property expression
  carries ``input`` makes the read result carry ``proto``.
* ``polluted-receiver``: storing a ``polluted`` (or already ``receiver``)
  value into an object, via member write or literal containment, makes the
  containing object carry ``receiver``.

Everything else is value flow: assignment, parameter passing, returns,
destructuring, conditional/logical joins, and the builtin summary edges.
String-producing operators only pass the stringy labels; member reads pass
the deep labels of the base.  See :mod:`proto_sentry.taint.labels`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Union

from ..frontend.ast import AstNode, canonical_number, function_body, function_params
from ..frontend.model import ProgramModel, SourceUnit
from ..frontend.scopes import Binding
from ..callgraph import CALLBACK_BUILTINS, CallGraph, _UnitIndex
from .labels import ALL_LABELS, DEEP_LABELS, EMPTY, INPUT, POLLUTED, PROTO, RECEIVER, STRINGY_LABELS
from .summaries import BuiltinSummary, SummaryCatalog, load_catalog

Cell = tuple
Span = tuple[str, int, int]
Ctx = tuple[tuple[str, int], ...]

DEFAULT_BUDGET = 1_000_000


# -- specification ---------------------------------------------------------------


@dataclass(frozen=True)
class ParamSeed:
    """Seed every parameter (and the arguments object) of one function."""

    function_id: str
    labels: frozenset[str]


@dataclass(frozen=True)
class NodeSeed:
    """Seed one syntax node; applied whenever the node is evaluated."""

    path: str
    node_id: int
    labels: frozenset[str]


@dataclass(frozen=True)
class BindingSeed:
    path: str
    binding_id: int
    labels: frozenset[str]


Source = Union[ParamSeed, NodeSeed, BindingSeed]


@dataclass(frozen=True)
class TransitionRule:
    """A label rewrite: any label from ``consumes`` present -> add ``produces``."""

    name: str
    consumes: frozenset[str]
    produces: str

    def __post_init__(self) -> None:
        if not self.consumes:
            raise ValueError("transition must consume at least one label")
        if self.produces not in ALL_LABELS:
            raise ValueError(f"unknown produced label: {self.produces}")


INPUT_TO_PROTO = TransitionRule("input-to-proto", frozenset({INPUT}), PROTO)
POLLUTED_RECEIVER = TransitionRule("polluted-receiver", frozenset({POLLUTED, RECEIVER}), RECEIVER)


def default_transitions() -> tuple[TransitionRule, ...]:
    return (INPUT_TO_PROTO, POLLUTED_RECEIVER)


@dataclass
class TaintSpec:
    sources: list[Source] = field(default_factory=list)
    transitions: tuple[TransitionRule, ...] = field(default_factory=default_transitions)
    # (path, node_id) pairs whose expression value is forced label-free
    sanitizers: frozenset[tuple[str, int]] = frozenset()
    context_depth: int = 1
    summaries: SummaryCatalog | None = None
    # roots for return-edge pruning; None propagates every return edge
    entry_functions: frozenset[str] | None = None
    budget: int = DEFAULT_BUDGET

    def has_transition(self, name: str) -> bool:
        return any(t.name == name for t in self.transitions)


# -- state ---------------------------------------------------------------


# (pred_cell, pred_label, rule, site); pred_cell is None for seeded labels
ProvEntry = tuple[Cell | None, str | None, str, Span]


@dataclass
class TaintState:
    labels: dict[Cell, set[str]] = field(default_factory=dict)
    provenance: dict[tuple[Cell, str], list[ProvEntry]] = field(default_factory=dict)
    spans: dict[Cell, Span] = field(default_factory=dict)
    node_cells: dict[tuple[str, int], list[Cell]] = field(default_factory=dict)
    incomplete: bool = False

    def labels_of_cell(self, cell: Cell) -> frozenset[str]:
        return frozenset(self.labels.get(cell, EMPTY))

    def labels_of_node(self, path: str, node_id: int) -> frozenset[str]:
        out: set[str] = set()
        for cell in self.node_cells.get((path, node_id), ()):
            out |= self.labels.get(cell, set())
        return frozenset(out)

    def labels_of_node_by_ctx(self, path: str, node_id: int) -> dict[Ctx, frozenset[str]]:
        out: dict[Ctx, frozenset[str]] = {}
        for cell in self.node_cells.get((path, node_id), ()):
            out[cell[3]] = frozenset(self.labels.get(cell, EMPTY))
        return out

    def labels_of_binding(self, path: str, binding_id: int) -> frozenset[str]:
        out: set[str] = set()
        for cell, labels in self.labels.items():
            if cell[0] == "bind" and cell[1] == path and cell[2] == binding_id:
                out |= labels
        return frozenset(out)

    def cells_with_label(self, label: str) -> list[Cell]:
        return [c for c, ls in self.labels.items() if label in ls]


# -- path reconstruction ---------------------------------------------------------------


@dataclass(frozen=True)
class TaintStep:
    from_span: Span
    to_span: Span
    rule: str

    def to_dict(self) -> dict:
        return {
            "from": {"path": self.from_span[0], "start": self.from_span[1], "end": self.from_span[2]},
            "to": {"path": self.to_span[0], "start": self.to_span[1], "end": self.to_span[2]},
            "rule": self.rule,
        }


@dataclass
class TaintPath:
    label: str
    target_span: Span
    source_span: Span
    steps: list[TaintStep]

    @property
    def length(self) -> int:
        return len(self.steps)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "source": {"path": self.source_span[0], "start": self.source_span[1], "end": self.source_span[2]},
            "target": {"path": self.target_span[0], "start": self.target_span[1], "end": self.target_span[2]},
            "steps": [s.to_dict() for s in self.steps],
        }


def reconstruct_path(state: TaintState, path: str, node_id: int, label: str) -> TaintPath:
    """Shortest provenance chain (by step count) from a source to the node.

    Raises ``ValueError`` when the node does not carry the label.  A node
    that is itself a source yields a zero-step path.
    """
    starts = [
        cell for cell in state.node_cells.get((path, node_id), ())
        if label in state.labels.get(cell, ())
    ]
    if not starts:
        raise ValueError(f"node {path}:{node_id} does not carry label {label!r}")

    target_span = state.spans[starts[0]]
    queue: deque[tuple[Cell, str]] = deque()
    parent: dict[tuple[Cell, str], tuple[tuple[Cell, str] | None, ProvEntry]] = {}
    for cell in sorted(starts, key=str):
        node = (cell, label)
        if node not in parent:
            parent[node] = (None, ("", "", "", ("", 0, 0)))
            queue.append(node)

    found: tuple[Cell, str] | None = None
    source_entry: ProvEntry | None = None
    while queue and found is None:
        node = queue.popleft()
        cell, lab = node
        entries = sorted(
            state.provenance.get((cell, lab), ()),
            key=lambda e: (e[3], e[2], str(e[0])),
        )
        for entry in entries:
            pred_cell, pred_label, _rule, _site = entry
            if pred_cell is None:
                found = node
                source_entry = entry
                break
            nxt = (pred_cell, pred_label)
            if nxt not in parent:
                parent[nxt] = (node, entry)
                queue.append(nxt)
    if found is None:
        # labels without a seeded origin would violate provenance completeness
        raise ValueError(f"no source found for label {label!r} at {path}:{node_id}")

    steps: list[TaintStep] = []
    node = found
    while True:
        successor, entry = parent[node]
        if successor is None:
            break
        pred_cell = entry[0]
        steps.append(TaintStep(
            from_span=state.spans.get(pred_cell, ("", 0, 0)),
            to_span=entry[3],
            rule=entry[2],
        ))
        node = successor
    return TaintPath(
        label=label,
        target_span=target_span,
        source_span=state.spans.get(found[0], ("", 0, 0)),
        steps=steps,
    )


# -- engine ---------------------------------------------------------------


class BudgetExceeded(Exception):
    pass


Activation = tuple[str, int, Ctx]  # (path, fn node_id, ctx)
# an evaluated call argument: (node or None, its cell, its labels)
Actual = tuple["AstNode | None", Cell, frozenset[str]]

_CALL_SHIFT = ("call", "apply", "bind")


def _push_ctx(ctx: Ctx, site: tuple[str, int], depth: int) -> Ctx:
    if depth <= 0:
        return ()
    return tuple((*ctx, site))[-depth:]


class _Engine:
    def __init__(self, model: ProgramModel, graph: CallGraph, spec: TaintSpec):
        self.model = model
        self.graph = graph
        self.spec = spec
        self.catalog = spec.summaries if spec.summaries is not None else load_catalog()
        self.depth = spec.context_depth
        self.state = TaintState()
        self.readers: dict[Cell, set[Activation]] = {}
        self.queue: deque[Activation] = deque()
        self.queued: set[Activation] = set()
        self.known: set[Activation] = set()
        self.steps = 0
        self.node_seeds: dict[tuple[str, int], frozenset[str]] = {}
        self.fields_by_binding: dict[tuple[str, int], set[str]] = {}
        # activations that performed a dynamic (any-name) field read per binding
        self.dynamic_readers: dict[tuple[str, int], set[Activation]] = {}
        self.units: dict[str, SourceUnit] = {u.path: u for u in model.units}
        self.indexes: dict[str, _UnitIndex] = dict(graph.unit_indexes)
        for unit in model.units:
            if unit.path not in self.indexes:
                self.indexes[unit.path] = _UnitIndex(unit)
        self.fn_by_id: dict[tuple[str, int], AstNode] = {}
        self.fid_of: dict[tuple[str, int], str] = {}
        for fid, (unit, fn) in graph.functions.items():
            self.fn_by_id[(unit.path, fn.node_id)] = fn
            self.fid_of[(unit.path, fn.node_id)] = fid
        self.edges_at: dict[tuple[str, int, int], list[str]] = {}
        for edge in graph.edges:
            info = graph.nodes.get(edge.caller)
            if info is None or info.path is None:
                continue
            key = (info.path, edge.site[0], edge.site[1])
            callees = self.edges_at.setdefault(key, [])
            if edge.callee not in callees:
                callees.append(edge.callee)
        for callees in self.edges_at.values():
            callees.sort()
        if spec.entry_functions is None:
            self.return_allowed: set[str] | None = None
        else:
            self.return_allowed = self._reachable(spec.entry_functions)
        self.input_to_proto = spec.has_transition("input-to-proto")
        self.polluted_receiver = spec.has_transition("polluted-receiver")

    # -- plumbing ---------------------------------------------------------

    def _reachable(self, roots: Iterable[str]) -> set[str]:
        seen = set(roots)
        work = deque(seen)
        out_edges: dict[str, list[str]] = {}
        for edge in self.graph.edges:
            out_edges.setdefault(edge.caller, []).append(edge.callee)
        while work:
            fid = work.popleft()
            for callee in out_edges.get(fid, ()):
                if callee not in seen:
                    seen.add(callee)
                    work.append(callee)
        return seen

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.spec.budget:
            raise BudgetExceeded()

    def enqueue(self, act: Activation) -> None:
        self.known.add(act)
        if act not in self.queued:
            self.queued.add(act)
            self.queue.append(act)

    def activate(self, act: Activation) -> None:
        # discovery sites must not re-enqueue an activation that already ran;
        # otherwise direct recursion ping-pongs forever without any cell
        # changing. Re-runs happen only through reader wakeups.
        if act not in self.known:
            self.enqueue(act)

    def read_cell(self, cell: Cell, act: Activation) -> frozenset[str]:
        self.readers.setdefault(cell, set()).add(act)
        return frozenset(self.state.labels.get(cell, EMPTY))

    def store(self, cell: Cell, span: Span,
              info: dict[str, tuple[Cell | None, str | None, str]], site: Span) -> None:
        if not info:
            self.state.spans.setdefault(cell, span)
            return
        self.state.spans.setdefault(cell, span)
        have = self.state.labels.setdefault(cell, set())
        changed = False
        for label, (pred_cell, pred_label, rule) in info.items():
            # provenance is recorded only at first derivation, which keeps the
            # provenance graph acyclic: every entry points at a strictly older
            # (cell, label) pair
            if label not in have:
                have.add(label)
                changed = True
                entry: ProvEntry = (pred_cell, pred_label, rule, site)
                self.state.provenance.setdefault((cell, label), []).append(entry)
        if changed:
            for reader in self.readers.get(cell, ()):
                self.enqueue(reader)

    def flow(self, src_cell: Cell, labels: Iterable[str], dst_cell: Cell,
             dst_span: Span, rule: str, site: Span) -> None:
        info = {label: (src_cell, label, rule) for label in labels}
        self.store(dst_cell, dst_span, info, site)

    def seed(self, cell: Cell, span: Span, labels: Iterable[str]) -> None:
        info = {label: (None, None, "source") for label in labels}
        self.store(cell, span, info, span)

    def binding_cell(self, unit: SourceUnit, binding: Binding, ctx: Ctx) -> Cell:
        if binding.is_global or binding.owner is None:
            cell: Cell = ("gbind", binding.name)
            self.state.spans.setdefault(cell, (unit.path, binding.declared_at,
                                               binding.declared_at + len(binding.name)))
            return cell
        if binding.captured or binding.owner.kind == "program":
            ctx = ()
        cell = ("bind", unit.path, binding.binding_id, ctx)
        self.state.spans.setdefault(cell, (unit.path, binding.declared_at,
                                           binding.declared_at + len(binding.name)))
        return cell

    def field_read_cell(self, unit: SourceUnit, binding: Binding, name: str) -> Cell:
        cell: Cell = ("field", unit.path, binding.binding_id, name)
        self.state.spans.setdefault(cell, (unit.path, binding.declared_at,
                                           binding.declared_at + len(binding.name)))
        return cell

    def field_cell(self, unit: SourceUnit, binding: Binding, name: str) -> Cell:
        """Field cell for a write; new names wake up dynamic readers."""
        cell = self.field_read_cell(unit, binding, name)
        key = (unit.path, binding.binding_id)
        known = self.fields_by_binding.setdefault(key, set())
        if name not in known:
            known.add(name)
            for act in self.dynamic_readers.get(key, ()):
                self.enqueue(act)
        return cell

    def ret_cell(self, path: str, fn: AstNode, ctx: Ctx) -> Cell:
        cell: Cell = ("ret", path, fn.node_id, ctx)
        self.state.spans.setdefault(cell, (path, fn.start, fn.end))
        return cell

    # -- seeding ---------------------------------------------------------

    def preload_sources(self) -> None:
        for src in self.spec.sources:
            if isinstance(src, NodeSeed):
                key = (src.path, src.node_id)
                self.node_seeds[key] = self.node_seeds.get(key, frozenset()) | src.labels
            elif isinstance(src, BindingSeed):
                unit = self.units.get(src.path)
                if unit is None:
                    continue
                binding = next((b for b in unit.scopes.bindings
                                if b.binding_id == src.binding_id), None)
                if binding is None:
                    continue
                cell = self.binding_cell(unit, binding, ())
                self.seed(cell, self.state.spans[cell], src.labels)
            elif isinstance(src, ParamSeed):
                self._seed_params(src)

    def _seed_params(self, src: ParamSeed) -> None:
        entry = self.graph.functions.get(src.function_id)
        if entry is None:
            return
        unit, fn = entry
        if fn.kind != "function":
            return
        for param in function_params(fn):
            for ident in self._pattern_identifiers(param):
                binding = unit.scopes.binding_for(ident)
                if binding is None:
                    continue
                cell = self.binding_cell(unit, binding, ())
                self.seed(cell, (unit.path, ident.start, ident.end), src.labels)
        for binding in unit.scopes.owned_bindings.get(fn.node_id, ()):
            if binding.kind == "arguments":
                cell = self.binding_cell(unit, binding, ())
                self.seed(cell, (unit.path, fn.start, fn.start), src.labels)

    @staticmethod
    def _pattern_identifiers(pattern: AstNode) -> list[AstNode]:
        out = []
        stack = [pattern]
        while stack:
            node = stack.pop()
            if node.kind == "identifier":
                out.append(node)
            elif node.kind == "pattern-property":
                stack.append(node.children[-1])
            elif node.kind == "default-pattern":
                stack.append(node.children[0])
            elif node.kind in ("object-pattern", "array-pattern", "rest-element"):
                stack.extend(reversed(node.children))
        return out

    # -- main loop ---------------------------------------------------------

    def run(self) -> TaintState:
        self.preload_sources()
        for fid in sorted(self.graph.functions):
            unit, fn = self.graph.functions[fid]
            self.activate((unit.path, fn.node_id, ()))
        try:
            while self.queue:
                act = self.queue.popleft()
                self.queued.discard(act)
                path, fn_id, ctx = act
                unit = self.units[path]
                fn = self.fn_by_id.get((path, fn_id))
                if fn is None:
                    fn = unit.ast if fn_id == unit.ast.node_id else None
                if fn is None:
                    continue
                _Pass(self, unit, fn, ctx, act).run()
        except BudgetExceeded:
            self.state.incomplete = True
        return self.state


class _Pass:
    """One monotone evaluation of a function body under one context."""

    def __init__(self, engine: _Engine, unit: SourceUnit, fn: AstNode, ctx: Ctx,
                 act: Activation):
        self.e = engine
        self.unit = unit
        self.fn = fn
        self.ctx = ctx
        self.act = act
        self.path = unit.path

    # -- cell helpers ------------------------------------------------------

    def expr_cell(self, node: AstNode) -> Cell:
        cell: Cell = ("expr", self.path, node.node_id, self.ctx)
        key = (self.path, node.node_id)
        cells = self.e.state.node_cells.setdefault(key, [])
        if cell not in cells:
            cells.append(cell)
        self.e.state.spans.setdefault(cell, (self.path, node.start, node.end))
        return cell

    def span(self, node: AstNode) -> Span:
        return (self.path, node.start, node.end)

    def read_binding(self, node: AstNode) -> tuple[Cell | None, frozenset[str]]:
        binding = self.unit.scopes.binding_for(node)
        if binding is None:
            return None, EMPTY
        cell = self.e.binding_cell(self.unit, binding, self.ctx)
        labels = self.e.read_cell(cell, self.act)
        base = self.e.binding_cell(self.unit, binding, ())
        if base != cell:
            labels |= self.e.read_cell(base, self.act)
            # context cell mirrors the seed labels so per-context queries see them
            self.e.flow(base, self.e.read_cell(base, self.act), cell,
                        self.e.state.spans[cell], "read", self.span(node))
        return cell, frozenset(labels)

    # -- entry ------------------------------------------------------------

    def run(self) -> None:
        if self.fn.kind == "program":
            for stmt in self.fn.children:
                self.stmt(stmt)
            return
        for param in function_params(self.fn):
            self.param_defaults(param)
        body = function_body(self.fn)
        if self.fn.attrs.get("is_expression_body"):
            cell, labels = self.eval(body)
            ret = self.e.ret_cell(self.path, self.fn, self.ctx)
            self.e.flow(cell, labels, ret, self.e.state.spans[ret], "return", self.span(body))
        else:
            self.stmt(body)

    def param_defaults(self, pattern: AstNode) -> None:
        if pattern.kind == "default-pattern":
            inner, default = pattern.children
            cell, labels = self.eval(default)
            self.distribute(inner, None, [(cell, labels, "default")], self.span(pattern))
        elif pattern.kind in ("object-pattern", "array-pattern"):
            for child in pattern.children:
                if child.kind == "pattern-property":
                    self.param_defaults(child.children[-1])
                elif child.kind != "hole":
                    self.param_defaults(child)
        elif pattern.kind == "rest-element":
            self.param_defaults(pattern.children[0])

    # -- statements ---------------------------------------------------------

    def stmt(self, n: AstNode) -> None:
        k = n.kind
        if k == "var-decl":
            for decl in n.children:
                self.declarator(decl)
        elif k == "expr-stmt":
            self.eval(n.children[0])
        elif k == "block":
            for s in n.children:
                self.stmt(s)
        elif k == "if":
            self.eval(n.children[0])
            self.stmt(n.children[1])
            if n.attrs.get("has_alternate"):
                self.stmt(n.children[2])
        elif k == "while":
            self.eval(n.children[0])
            self.stmt(n.children[1])
        elif k == "do-while":
            self.stmt(n.children[0])
            self.eval(n.children[1])
        elif k == "for":
            idx = 0
            if n.attrs.get("has_init"):
                init = n.children[idx]
                idx += 1
                if init.kind == "var-decl":
                    self.stmt(init)
                else:
                    self.eval(init)
            if n.attrs.get("has_test"):
                self.eval(n.children[idx])
                idx += 1
            if n.attrs.get("has_update"):
                self.eval(n.children[idx])
                idx += 1
            self.stmt(n.children[idx])
        elif k in ("for-in", "for-of"):
            self.for_each(n)
        elif k == "return":
            ret = self.e.ret_cell(self.path, self.fn, self.ctx)
            if n.attrs.get("has_argument"):
                cell, labels = self.eval(n.children[0])
                self.e.flow(cell, labels, ret, self.e.state.spans[ret], "return", self.span(n))
            else:
                self.e.state.spans.setdefault(ret, (self.path, self.fn.start, self.fn.end))
        elif k == "throw":
            self.eval(n.children[0])
        elif k == "try":
            self.stmt(n.children[0])
            idx = 1
            if n.attrs.get("has_handler"):
                handler = n.children[idx]
                idx += 1
                self.stmt(handler.children[-1])
            if n.attrs.get("has_finalizer"):
                self.stmt(n.children[idx])
        elif k == "switch":
            self.eval(n.children[0])
            for case in n.children[1:]:
                start = 0
                if case.attrs.get("has_test"):
                    self.eval(case.children[0])
                    start = 1
                for s in case.children[start:]:
                    self.stmt(s)
        elif k == "labeled":
            self.stmt(n.children[0])
        elif k in ("export-named", "export-default"):
            if n.children:
                child = n.children[0]
                if child.kind in ("var-decl", "function", "class"):
                    if child.kind == "var-decl":
                        self.stmt(child)
                    elif child.kind == "class":
                        self.class_node(child)
                else:
                    self.eval(child)
        elif k == "class":
            self.class_node(n)
        elif k == "function":
            pass  # own activation
        elif k in ("empty", "debugger", "break", "continue", "import-decl", "export-all"):
            pass
        else:
            for child in n.children:
                if child.kind == "function":
                    continue
                self.stmt(child) if child.kind in _STMT_KINDS else self.eval(child)

    def class_node(self, n: AstNode) -> None:
        start = 1 if n.attrs.get("has_superclass") else 0
        if start:
            self.eval(n.children[0])
        for member in n.children[start:]:
            if member.kind == "class-field" and member.attrs.get("has_value"):
                self.eval(member.children[-1])

    def declarator(self, n: AstNode) -> None:
        pattern = n.children[0]
        if not n.attrs.get("has_init"):
            self.distribute(pattern, None, [], self.span(n))
            return
        init = n.children[1]
        cell, labels = self.eval(init)
        self.distribute(pattern, init, [(cell, labels, "assign")], self.span(n))

    def for_each(self, n: AstNode) -> None:
        left, right, body = n.children
        rcell, rl = self.eval(right)
        if n.kind == "for-in":
            labels = rl & frozenset({INPUT, POLLUTED})
            rule = "for-in-key"
        else:
            labels = rl & DEEP_LABELS
            rule = "for-of-elem"
        sources = [(rcell, labels, rule)]
        if n.kind == "for-of" and right.kind == "identifier":
            binding = self.unit.scopes.binding_for(right)
            if binding is not None:
                key = (self.path, binding.binding_id)
                self.e.dynamic_readers.setdefault(key, set()).add(self.act)
                for name in sorted(self.e.fields_by_binding.get(key, ())):
                    fcell = self.e.field_read_cell(self.unit, binding, name)
                    sources.append((fcell, self.e.read_cell(fcell, self.act), "field-load"))
        if left.kind == "var-decl":
            pattern = left.children[0].children[0]
            self.distribute(pattern, None, sources, self.span(n))
        elif left.kind == "member-write":
            self.member_store(left, sources, self.span(n))
        else:
            self.distribute(left, None, sources, self.span(n))
        self.stmt(body)

    # -- pattern flow ------------------------------------------------------

    def distribute(self, pattern: AstNode, value_node: AstNode | None,
                   sources: list[tuple[Cell, frozenset[str], str]], site: Span) -> None:
        seeds = self.e.node_seeds.get((self.path, pattern.node_id))
        if pattern.kind == "identifier":
            binding = self.unit.scopes.binding_for(pattern)
            if binding is None:
                return
            bcell = self.e.binding_cell(self.unit, binding, self.ctx)
            for cell, labels, rule in sources:
                self.e.flow(cell, labels, bcell, self.e.state.spans[bcell], rule, site)
            if seeds:
                self.e.seed(bcell, (self.path, pattern.start, pattern.end), seeds)
            if value_node is not None and value_node.kind == "object-literal":
                self.bind_object_fields(binding, value_node)
        elif pattern.kind == "default-pattern":
            inner, default = pattern.children
            dcell, dl = self.eval(default)
            self.distribute(inner, None, sources + [(dcell, dl, "default")], site)
        elif pattern.kind == "object-pattern":
            value_binding = None
            if value_node is not None and value_node.kind == "identifier":
                value_binding = self.unit.scopes.binding_for(value_node)
            for prop in pattern.children:
                if prop.kind == "rest-element":
                    deep = [(c, l & DEEP_LABELS, "destructure") for c, l, _ in sources]
                    self.distribute(prop.children[0], None, deep, site)
                    continue
                key_name = prop.attrs.get("key_name")
                if prop.attrs.get("computed") and key_name is None and prop.children:
                    self.eval(prop.children[0])
                inner = prop.children[-1]
                inner_sources = [(c, l & DEEP_LABELS, "destructure") for c, l, _ in sources]
                if value_binding is not None and key_name is not None:
                    for fname in (key_name, "*"):
                        fcell = self.e.field_read_cell(self.unit, value_binding, fname)
                        inner_sources.append(
                            (fcell, self.e.read_cell(fcell, self.act), "field-load"))
                prop_seeds = self.e.node_seeds.get((self.path, prop.node_id))
                if prop_seeds:
                    scell = self.expr_cell(prop)
                    self.e.seed(scell, (self.path, prop.start, prop.end), prop_seeds)
                    inner_sources.append((scell, prop_seeds, "read"))
                self.distribute(inner, None, inner_sources, site)
        elif pattern.kind == "array-pattern":
            value_binding = None
            if value_node is not None and value_node.kind == "identifier":
                value_binding = self.unit.scopes.binding_for(value_node)
            index = 0
            for elem in pattern.children:
                if elem.kind == "hole":
                    index += 1
                    continue
                if elem.kind == "rest-element":
                    deep = [(c, l & DEEP_LABELS, "destructure") for c, l, _ in sources]
                    self.distribute(elem.children[0], None, deep, site)
                    continue
                inner_sources = [(c, l & DEEP_LABELS, "destructure") for c, l, _ in sources]
                if value_binding is not None:
                    for fname in (canonical_number(index), "*"):
                        fcell = self.e.field_read_cell(self.unit, value_binding, fname)
                        inner_sources.append(
                            (fcell, self.e.read_cell(fcell, self.act), "field-load"))
                self.distribute(elem, None, inner_sources, site)
                index += 1
        elif pattern.kind == "member-write":
            self.member_store(pattern, sources, site)

    def bind_object_fields(self, binding: Binding, literal: AstNode) -> None:
        for prop in literal.children:
            if prop.attrs.get("property_kind") != "init":
                continue
            key = prop.attrs.get("key_name")
            if key is None:
                continue
            value = prop.children[-1]
            vcell = ("expr", self.path, value.node_id, self.ctx)
            labels = self.e.read_cell(vcell, self.act)
            fcell = self.e.field_cell(self.unit, binding, key)
            self.e.flow(vcell, labels, fcell, self.e.state.spans[fcell],
                        "field-store", (self.path, prop.start, prop.end))

    # -- member writes ------------------------------------------------------

    def member_store(self, target: AstNode,
                     sources: list[tuple[Cell, frozenset[str], str]], site: Span) -> None:
        base = target.children[0]
        bcell, bl = self.eval(base)
        prop = target.children[1]
        prop_name = target.attrs.get("prop_name")
        pl: frozenset[str] = EMPTY
        if target.attrs.get("computed"):
            pcell, pl = self.eval(prop)
        mw_cell = self.expr_cell(target)
        for cell, labels, rule in sources:
            self.e.flow(cell, labels, mw_cell, self.e.state.spans[mw_cell], rule, site)
        binding = None
        if base.kind == "identifier":
            binding = self.unit.scopes.binding_for(base)
        if binding is not None:
            if prop_name is not None:
                fcell = self.e.field_cell(self.unit, binding, prop_name)
                for cell, labels, _ in sources:
                    self.e.flow(cell, labels, fcell, self.e.state.spans[fcell],
                                "field-store", site)
            elif pl & frozenset({INPUT, POLLUTED}):
                fcell = self.e.field_cell(self.unit, binding, "*")
                for cell, labels, _ in sources:
                    self.e.flow(cell, labels, fcell, self.e.state.spans[fcell],
                                "wildcard-store", site)
        if self.e.polluted_receiver:
            for cell, labels, _ in sources:
                hit = labels & frozenset({POLLUTED, RECEIVER})
                if not hit:
                    continue
                witness = sorted(hit)[0]
                info = {RECEIVER: (cell, witness, "receiver-write")}
                self.e.store(bcell, self.e.state.spans[bcell], info, site)
                if binding is not None:
                    bind_cell = self.e.binding_cell(self.unit, binding, self.ctx)
                    self.e.store(bind_cell, self.e.state.spans[bind_cell], info, site)

    # -- expressions ---------------------------------------------------------

    def eval(self, n: AstNode) -> tuple[Cell, frozenset[str]]:
        self.e.tick()
        cell = self.expr_cell(n)
        if (self.path, n.node_id) in self.e.spec.sanitizers:
            self.eval_children_only(n)
            return cell, EMPTY
        seeds = self.e.node_seeds.get((self.path, n.node_id))
        if seeds:
            self.e.seed(cell, self.span(n), seeds)
        k = n.kind
        handler = getattr(self, "eval_" + k.replace("-", "_"), None)
        if handler is not None:
            handler(n, cell)
        else:
            self.eval_children_only(n)
        return cell, self.e.read_cell(cell, self.act)

    def eval_children_only(self, n: AstNode) -> None:
        for child in n.children:
            if child.kind != "function":
                self.eval(child)

    def eval_identifier(self, n: AstNode, cell: Cell) -> None:
        src, labels = self.read_binding(n)
        if src is not None:
            self.e.flow(src, labels, cell, self.span(n), "read", self.span(n))

    def eval_literal(self, n: AstNode, cell: Cell) -> None:
        pass

    def eval_this(self, n: AstNode, cell: Cell) -> None:
        pass

    def eval_super(self, n: AstNode, cell: Cell) -> None:
        pass

    def eval_function(self, n: AstNode, cell: Cell) -> None:
        pass  # bodies run as their own activations

    def eval_class(self, n: AstNode, cell: Cell) -> None:
        self.class_node(n)

    def eval_template_literal(self, n: AstNode, cell: Cell) -> None:
        for child in n.children:
            ccell, cl = self.eval(child)
            self.e.flow(ccell, cl & STRINGY_LABELS, cell, self.span(n),
                        "template", self.span(n))

    def eval_tagged_template(self, n: AstNode, cell: Cell) -> None:
        self.eval(n.children[0])
        self.eval(n.children[1])

    def eval_binary(self, n: AstNode, cell: Cell) -> None:
        for child in n.children:
            ccell, cl = self.eval(child)
            self.e.flow(ccell, cl & STRINGY_LABELS, cell, self.span(n),
                        "binary", self.span(n))

    def eval_logical(self, n: AstNode, cell: Cell) -> None:
        for child in n.children:
            ccell, cl = self.eval(child)
            self.e.flow(ccell, cl, cell, self.span(n), "branch", self.span(n))

    def eval_conditional(self, n: AstNode, cell: Cell) -> None:
        self.eval(n.children[0])
        for child in n.children[1:]:
            ccell, cl = self.eval(child)
            self.e.flow(ccell, cl, cell, self.span(n), "branch", self.span(n))

    def eval_sequence(self, n: AstNode, cell: Cell) -> None:
        last: tuple[Cell, frozenset[str]] | None = None
        for child in n.children:
            last = self.eval(child)
        if last is not None:
            self.e.flow(last[0], last[1], cell, self.span(n), "sequence", self.span(n))

    def eval_await(self, n: AstNode, cell: Cell) -> None:
        if n.children:
            ccell, cl = self.eval(n.children[0])
            self.e.flow(ccell, cl, cell, self.span(n), "await", self.span(n))

    def eval_yield(self, n: AstNode, cell: Cell) -> None:
        if n.children:
            self.eval(n.children[0])

    def eval_unary(self, n: AstNode, cell: Cell) -> None:
        self.eval(n.children[0])

    def eval_update(self, n: AstNode, cell: Cell) -> None:
        target = n.children[0]
        if target.kind == "member-write":
            self.member_store(target, [], self.span(n))
        elif target.kind == "identifier":
            self.read_binding(target)

    def eval_spread(self, n: AstNode, cell: Cell) -> None:
        ccell, cl = self.eval(n.children[0])
        self.e.flow(ccell, cl, cell, self.span(n), "spread", self.span(n))

    def eval_array_literal(self, n: AstNode, cell: Cell) -> None:
        for elem in n.children:
            if elem.kind == "hole":
                continue
            ccell, cl = self.eval(elem)
            self.e.flow(ccell, cl & DEEP_LABELS, cell, self.span(n),
                        "element", self.span(n))
            self.receiver_containment(ccell, cl, cell, self.span(n))

    def eval_object_literal(self, n: AstNode, cell: Cell) -> None:
        for prop in n.children:
            kind = prop.attrs.get("property_kind")
            if kind == "spread":
                ccell, cl = self.eval(prop.children[0])
            elif kind == "init":
                if prop.attrs.get("computed") and len(prop.children) > 1:
                    self.eval(prop.children[0])
                ccell, cl = self.eval(prop.children[-1])
            else:
                continue  # methods and accessors hold no value flow here
            self.e.flow(ccell, cl & DEEP_LABELS, cell, self.span(n),
                        "element", self.span(n))
            self.receiver_containment(ccell, cl, cell, self.span(n))

    def receiver_containment(self, src: Cell, labels: frozenset[str],
                             dst: Cell, site: Span) -> None:
        if not self.e.polluted_receiver:
            return
        hit = labels & frozenset({POLLUTED, RECEIVER})
        if hit:
            witness = sorted(hit)[0]
            self.e.store(dst, self.e.state.spans[dst],
                         {RECEIVER: (src, witness, "receiver-literal")}, site)

    def eval_member_read(self, n: AstNode, cell: Cell) -> None:
        self.member_load(n, cell)

    def eval_member_write(self, n: AstNode, cell: Cell) -> None:
        # reached via compound reads (`obj.a += x` and friends)
        if n.attrs.get("also_reads"):
            self.member_load(n, cell)
        else:
            self.eval(n.children[0])
            if n.attrs.get("computed"):
                self.eval(n.children[1])

    def member_load(self, n: AstNode, cell: Cell) -> None:
        base = n.children[0]
        bcell, bl = self.eval(base)
        prop = n.children[1]
        prop_name = n.attrs.get("prop_name")
        pl: frozenset[str] = EMPTY
        pcell: Cell | None = None
        if n.attrs.get("computed"):
            pcell, pl = self.eval(prop)
        self.e.flow(bcell, bl & DEEP_LABELS, cell, self.span(n), "deep-read", self.span(n))
        binding = None
        if base.kind == "identifier":
            binding = self.unit.scopes.binding_for(base)
        if binding is not None:
            key = (self.path, binding.binding_id)
            if prop_name is not None:
                names = [prop_name, "*"]
            else:
                self.e.dynamic_readers.setdefault(key, set()).add(self.act)
                names = sorted(self.e.fields_by_binding.get(key, set()))
            for fname in names:
                fcell = self.e.field_read_cell(self.unit, binding, fname)
                self.e.flow(fcell, self.e.read_cell(fcell, self.act), cell,
                            self.span(n), "field-load", self.span(n))
        if (self.e.input_to_proto and pcell is not None and INPUT in pl):
            self.e.store(cell, self.span(n),
                         {PROTO: (pcell, INPUT, "input-to-proto")}, self.span(n))

    def eval_assignment(self, n: AstNode, cell: Cell) -> None:
        target, value = n.children
        vcell, vl = self.eval(value)
        op = n.attrs.get("op", "=")
        if target.kind == "identifier":
            binding = self.unit.scopes.binding_for(target)
            if binding is not None:
                bcell = self.e.binding_cell(self.unit, binding, self.ctx)
                if op != "=":
                    prior = self.e.read_cell(bcell, self.act)
                    self.e.flow(bcell, prior & STRINGY_LABELS, cell,
                                self.span(n), "binary", self.span(n))
                self.e.flow(vcell, vl, bcell, self.e.state.spans[bcell],
                            "assign", self.span(n))
                if value.kind == "object-literal":
                    self.bind_object_fields(binding, value)
        elif target.kind == "member-write":
            sources: list[tuple[Cell, frozenset[str], str]] = [(vcell, vl, "assign")]
            if op != "=" and target.attrs.get("also_reads"):
                mcell, ml = self.eval(target)
                sources.append((mcell, ml & STRINGY_LABELS, "binary"))
                self.member_store(target, sources, self.span(n))
            else:
                self.member_store(target, sources, self.span(n))
        elif target.kind in ("object-pattern", "array-pattern"):
            self.distribute(target, value, [(vcell, vl, "assign")], self.span(n))
        self.e.flow(vcell, vl, cell, self.span(n), "assign", self.span(n))

    # -- calls ---------------------------------------------------------

    def eval_new(self, n: AstNode, cell: Cell) -> None:
        callee = n.children[0]
        if callee.kind in ("member-read",):
            self.eval(callee)
        elif callee.kind == "identifier":
            self.read_binding(callee)
        args = [(a, *self.eval(a)) for a in n.children[1:]]
        self.dispatch_edges(n, args, arg_offset=0)

    def eval_call(self, n: AstNode, cell: Cell) -> None:
        callee = n.children[0]
        receiver: tuple[Cell, frozenset[str]] | None = None
        if callee.kind == "member-read":
            rcell, rl = self.eval(callee.children[0])
            receiver = (rcell, rl)
            if callee.attrs.get("computed"):
                self.eval(callee.children[1])
        elif callee.kind == "identifier":
            self.read_binding(callee)
        else:
            self.eval(callee)
        args: list[Actual] = [(a, *self.eval(a)) for a in n.children[1:]]

        summary = self.e.catalog.match(n)
        if summary is not None:
            self.apply_summary(summary, n, cell, receiver, args)
            return
        if self.e.catalog.matches_any(n):
            return  # modeled builtin shape with its summary disabled

        prop_name = callee.attrs.get("prop_name") if callee.kind == "member-read" else None
        if prop_name == "bind":
            return
        if prop_name == "call":
            self.dispatch_edges(n, args, arg_offset=1, result_cell=cell)
            return
        if prop_name == "apply":
            spread: list[Actual] = []
            if len(n.children) > 2 and n.children[2].kind == "array-literal":
                arr = n.children[2]
                for elem in arr.children:
                    if elem.kind == "hole":
                        spread.append((None, self.expr_cell(elem), EMPTY))
                    else:
                        ecell = ("expr", self.path, elem.node_id, self.ctx)
                        spread.append((elem, ecell, self.e.read_cell(ecell, self.act)))
            elif len(args) > 1:
                anode, acell, al = args[1]
                spread = [(anode, acell, al & DEEP_LABELS)]
            self.dispatch_edges(n, spread, arg_offset=0, result_cell=cell,
                                broadcast=len(spread) == 1 and len(n.children) > 2
                                and n.children[2].kind != "array-literal")
            return
        if prop_name in CALLBACK_BUILTINS:
            # unmodeled iteration helper: activate the callback with the
            # receiver's deep labels on every parameter
            deep = receiver[1] & DEEP_LABELS if receiver else EMPTY
            self.dispatch_callback_edges(n, receiver[0] if receiver else None, deep)
            return
        self.dispatch_edges(n, args, arg_offset=0, result_cell=cell)

    def dispatch_edges(self, n: AstNode, args: list["Actual"],
                       arg_offset: int, result_cell: Cell | None = None,
                       broadcast: bool = False) -> None:
        callees = self.e.edges_at.get((self.path, n.start, n.end), ())
        actuals = args[arg_offset:] if arg_offset else args
        for fid in callees:
            entry = self.e.graph.functions.get(fid)
            if entry is None:
                continue
            unit2, fn2 = entry
            if fn2.kind != "function":
                continue
            ctx2 = _push_ctx(self.ctx, (self.path, n.node_id), self.e.depth)
            bind_call = self._bind_call_for(n)
            passed = list(actuals)
            if bind_call is not None:
                bound: list[Actual] = []
                for barg in bind_call.children[2:]:
                    bc = ("expr", self.path, barg.node_id, ())
                    bound.append((barg, bc, self.e.read_cell(bc, self.act)))
                passed = bound + passed
            self.pass_arguments(unit2, fn2, ctx2, passed, n, broadcast)
            self.e.activate((unit2.path, fn2.node_id, ctx2))
            if result_cell is not None and self._return_allowed(fid):
                ret = self.e.ret_cell(unit2.path, fn2, ctx2)
                labels = self.e.read_cell(ret, self.act)
                self.e.flow(ret, labels, result_cell,
                            self.e.state.spans[result_cell], "return", self.span(n))

    def _bind_call_for(self, call: AstNode) -> AstNode | None:
        callee = call.children[0]
        if callee.kind != "identifier":
            return None
        binding = self.unit.scopes.binding_for(callee)
        if binding is None:
            return None
        index = self.e.indexes.get(self.path)
        if index is None:
            return None
        return index.bound_call.get(binding.binding_id)

    def _return_allowed(self, fid: str) -> bool:
        allowed = self.e.return_allowed
        return allowed is None or fid in allowed

    def pass_arguments(self, unit2: SourceUnit, fn2: AstNode, ctx2: Ctx,
                       actuals: list["Actual"], site_node: AstNode,
                       broadcast: bool = False) -> None:
        site = self.span(site_node)
        params = function_params(fn2)
        helper = _Pass(self.e, unit2, fn2, ctx2, self.act)
        for i, param in enumerate(params):
            target = param
            if target.kind == "default-pattern":
                target = target.children[0]
            if target.kind == "rest-element":
                rest: list[tuple[Cell, frozenset[str], str]] = []
                for _anode, acell, al in actuals[i:]:
                    rest.append((acell, al & DEEP_LABELS, "call-arg"))
                helper.distribute(target.children[0], None, rest, site)
                self._store_rest_fields(unit2, target.children[0], actuals[i:], site)
                break
            if broadcast:
                sources = [(acell, al, "call-arg") for _anode, acell, al in actuals]
                matched = actuals
            else:
                matched = actuals[i:i + 1]
                sources = [(acell, al, "call-arg") for _anode, acell, al in matched]
            helper.distribute(target, None, sources, site)
            self._reflect_mutation(unit2, target, ctx2, matched, site)
        if not fn2.attrs.get("is_arrow"):
            for binding in unit2.scopes.owned_bindings.get(fn2.node_id, ()):
                if binding.kind != "arguments":
                    continue
                bcell = self.e.binding_cell(unit2, binding, ctx2)
                for j, (_anode, acell, al) in enumerate(actuals):
                    fcell = self.e.field_cell(unit2, binding, canonical_number(j))
                    self.e.flow(acell, al, fcell, self.e.state.spans[fcell],
                                "field-store", site)
                    self.e.flow(acell, al & DEEP_LABELS, bcell,
                                self.e.state.spans[bcell], "element", site)

    def _reflect_mutation(self, unit2: SourceUnit, target: AstNode, ctx2: Ctx,
                          actuals: list["Actual"], site: Span) -> None:
        """Receiver marks acquired by a parameter mutate the caller's argument."""
        if target.kind != "identifier" or not actuals:
            return
        binding = unit2.scopes.binding_for(target)
        if binding is None:
            return
        pcell = self.e.binding_cell(unit2, binding, ctx2)
        marks = self.e.read_cell(pcell, self.act) & frozenset({RECEIVER})
        if not marks:
            return
        for anode, acell, _al in actuals:
            self.e.flow(pcell, marks, acell, self.e.state.spans[acell],
                        "mutated-arg", site)
            if anode is not None and anode.kind == "identifier":
                abind = self.unit.scopes.binding_for(anode)
                if abind is not None:
                    tcell = self.e.binding_cell(self.unit, abind, self.ctx)
                    self.e.flow(pcell, marks, tcell, self.e.state.spans[tcell],
                                "mutated-arg", site)

    def _store_rest_fields(self, unit2: SourceUnit, pattern: AstNode,
                           actuals: list["Actual"], site: Span) -> None:
        if pattern.kind != "identifier":
            return
        binding = unit2.scopes.binding_for(pattern)
        if binding is None:
            return
        for j, (_anode, acell, al) in enumerate(actuals):
            fcell = self.e.field_cell(unit2, binding, canonical_number(j))
            self.e.flow(acell, al, fcell, self.e.state.spans[fcell], "field-store", site)

    def dispatch_callback_edges(self, n: AstNode, receiver_cell: Cell | None,
                                deep: frozenset[str]) -> None:
        callees = self.e.edges_at.get((self.path, n.start, n.end), ())
        for fid in callees:
            entry = self.e.graph.functions.get(fid)
            if entry is None:
                continue
            unit2, fn2 = entry
            if fn2.kind != "function":
                continue
            ctx2 = _push_ctx(self.ctx, (self.path, n.node_id), self.e.depth)
            if receiver_cell is not None and deep:
                helper = _Pass(self.e, unit2, fn2, ctx2, self.act)
                for param in function_params(fn2):
                    target = param.children[0] if param.kind == "default-pattern" else param
                    if target.kind == "rest-element":
                        target = target.children[0]
                    helper.distribute(target, None,
                                      [(receiver_cell, deep, "call-arg")], self.span(n))
            self.e.activate((unit2.path, fn2.node_id, ctx2))

    # -- builtin summaries ---------------------------------------------------

    def apply_summary(self, summary: BuiltinSummary, n: AstNode, cell: Cell,
                      receiver: tuple[Cell, frozenset[str]] | None,
                      args: list[Actual]) -> None:
        rule = f"summary:{summary.summary_id}"
        site = self.span(n)
        ctx2 = _push_ctx(self.ctx, (self.path, n.node_id), self.e.depth)
        callbacks: dict[int, AstNode | None] = {}
        for arg_index, _params in summary.callbacks:
            callbacks[arg_index] = self._resolve_callback(n, arg_index)
            fn = callbacks[arg_index]
            if fn is not None:
                self.e.activate((self.path, fn.node_id, ctx2))

        def read_role(role: str) -> list[tuple[Cell, frozenset[str]]]:
            if role == "receiver":
                return [receiver] if receiver is not None else []
            if role == "args":
                return [(acell, al) for _n, acell, al in args]
            if role.startswith("arg"):
                k = int(role[3:])
                return [args[k][1:]] if k < len(args) else []
            if role.startswith("callback") and role.endswith(".return"):
                k = int(role[len("callback"):role.index(".")])
                fn = callbacks.get(k)
                if fn is None:
                    return []
                ret = self.e.ret_cell(self.path, fn, ctx2)
                return [(ret, self.e.read_cell(ret, self.act))]
            return []

        def write_role(role: str, sources: list[tuple[Cell, frozenset[str]]]) -> None:
            if role == "return":
                for scell, sl in sources:
                    self.e.flow(scell, sl, cell, self.span(n), rule, site)
                return
            if role == "receiver":
                if receiver is None:
                    return
                targets = [receiver[0]]
                base = n.children[0].children[0]
                if base.kind == "identifier":
                    binding = self.unit.scopes.binding_for(base)
                    if binding is not None:
                        targets.append(self.e.binding_cell(self.unit, binding, self.ctx))
                for t in targets:
                    for scell, sl in sources:
                        self.e.flow(scell, sl, t, self.e.state.spans[t], rule, site)
                return
            if role == "args" or (role.startswith("arg") and role[3:].isdigit()):
                indices = (range(len(args)) if role == "args" else [int(role[3:])])
                for k in indices:
                    if k >= len(args):
                        continue
                    arg_node, arg_cell, _al = args[k]
                    targets = [arg_cell]
                    if arg_node is not None and arg_node.kind == "identifier":
                        binding = self.unit.scopes.binding_for(arg_node)
                        if binding is not None:
                            targets.append(self.e.binding_cell(self.unit, binding, self.ctx))
                    for t in targets:
                        for scell, sl in sources:
                            self.e.flow(scell, sl, t, self.e.state.spans[t], rule, site)
                return
            if role.startswith("callback"):
                k = int(role[len("callback"):role.index(".")])
                part = role[role.index(".") + 1:]
                fn = callbacks.get(k)
                if fn is None or not part.startswith("param"):
                    return
                j = int(part[len("param"):])
                params = function_params(fn)
                if j >= len(params):
                    return
                target = params[j]
                if target.kind == "default-pattern":
                    target = target.children[0]
                if target.kind == "rest-element":
                    target = target.children[0]
                helper = _Pass(self.e, self.unit, fn, ctx2, self.act)
                helper.distribute(target, None,
                                  [(scell, sl, rule) for scell, sl in sources], site)

        for flow in summary.flows:
            write_role(flow.dst, read_role(flow.src))

    def _resolve_callback(self, call: AstNode, arg_index: int) -> AstNode | None:
        args = call.children[1:]
        if arg_index >= len(args):
            return None
        node = args[arg_index]
        if node.kind == "function":
            return node
        index = self.e.indexes.get(self.path)
        if index is None:
            return None
        return index.resolve_expr_function(node)


_STMT_KINDS = frozenset({
    "var-decl", "expr-stmt", "block", "if", "for", "for-in", "for-of", "while",
    "do-while", "return", "throw", "try", "switch", "case", "labeled", "break",
    "continue", "empty", "debugger", "import-decl", "export-named",
    "export-default", "export-all", "class",
})


def run_taint(model: ProgramModel, graph: CallGraph, spec: TaintSpec) -> TaintState:
    """Propagate the spec's sources to a least fixpoint over the program."""
    return _Engine(model, graph, spec).run()
