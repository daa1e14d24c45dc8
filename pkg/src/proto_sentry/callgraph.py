"""Whole-program call graph over a frozen ProgramModel.

Nodes are FunctionId strings: `path:start:end` for functions, `path:toplevel`
for each file's synthetic top-level, and the distinguished `unknown-callee`.
String ids keep reports and path ordering deterministic across runs.

Resolution is deliberately shallow: direct calls, one level of aliasing
through local bindings, method calls on locally visible object literals,
`bind`/`call`/`apply` targets, relative-path `require`/`import` bindings,
and callback arguments of the modeled array built-ins.  Anything else
degrades to an edge into `unknown-callee` carrying the call-site span; the
graph never fails to build.

`this.m()` resolves only inside a superclass-free class that declares `m`;
with inheritance the local method table is incomplete, so the call goes to
`unknown-callee`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import PurePosixPath
from typing import Iterator

from .frontend.ast import AstNode
from .frontend.model import ProgramModel, SourceUnit
from .frontend.scopes import Binding

UNKNOWN_CALLEE = "unknown-callee"

# Built-ins whose first argument is invoked on elements of the receiver.
CALLBACK_BUILTINS = frozenset({
    "map", "filter", "forEach", "reduce", "reduceRight",
    "some", "every", "find", "findIndex", "flatMap", "sort",
})


def function_id(path: str, fn: AstNode) -> str:
    return f"{path}:{fn.start}:{fn.end}"


def toplevel_id(path: str) -> str:
    return f"{path}:toplevel"


@dataclass(frozen=True, order=True)
class CallEdge:
    caller: str
    site: tuple[int, int]
    callee: str

    def to_dict(self) -> dict:
        return {"caller": self.caller, "site": list(self.site), "callee": self.callee}


@dataclass
class NodeInfo:
    function_id: str
    path: str | None
    span: tuple[int, int] | None
    name: str
    kind: str  # function | toplevel | unknown


@dataclass
class EntryPointPath:
    entry: str
    steps: list[CallEdge]
    target: str

    def to_dict(self) -> dict:
        return {
            "entry": self.entry,
            "steps": [s.to_dict() for s in self.steps],
            "target": self.target,
        }


@dataclass
class CallGraph:
    nodes: dict[str, NodeInfo]
    edges: list[CallEdge]
    exports: set[str]
    # FunctionId -> (unit, function node); toplevel maps to the program node
    functions: dict[str, tuple[SourceUnit, AstNode]] = field(default_factory=dict)
    # path -> per-unit resolution index, kept for downstream analyses
    unit_indexes: dict[str, "_UnitIndex"] = field(default_factory=dict)
    # path -> {exported name -> FunctionId}
    export_names: dict[str, dict[str, str]] = field(default_factory=dict)

    def in_degree(self) -> dict[str, int]:
        degrees = {fid: 0 for fid in self.nodes}
        for edge in self.edges:
            if edge.callee in degrees:
                degrees[edge.callee] += 1
        return degrees

    @property
    def roots(self) -> list[str]:
        degrees = self.in_degree()
        return sorted(
            fid for fid, d in degrees.items()
            if d == 0 and self.nodes[fid].kind != "unknown"
        )

    def edges_from(self, caller: str) -> list[CallEdge]:
        return sorted(e for e in self.edges if e.caller == caller)

    def function_at(self, path: str, offset: int) -> str | None:
        """Innermost function id covering a byte offset, else the file's
        top-level node."""
        best: tuple[int, str] | None = None
        for fid, info in self.nodes.items():
            if info.path != path or info.kind != "function":
                continue
            start, end = info.span
            if start <= offset <= end:
                size = end - start
                if best is None or size < best[0]:
                    best = (size, fid)
        if best is not None:
            return best[1]
        tid = toplevel_id(path)
        return tid if tid in self.nodes else None


# -- construction ---------------------------------------------------------------


class _UnitIndex:
    """Per-unit lookup tables used while resolving call sites."""

    def __init__(self, unit: SourceUnit):
        self.unit = unit
        self.enclosing: dict[int, AstNode] = {}  # node_id -> enclosing fn/program
        self.fn_for_binding: dict[int, AstNode] = {}  # binding_id -> function node
        self.alias: dict[int, int] = {}  # binding_id -> binding_id
        self.literal_for_binding: dict[int, AstNode] = {}  # binding_id -> object-literal
        self.bound_target: dict[int, AstNode] = {}  # binding_id -> fn node via .bind
        self.bound_call: dict[int, AstNode] = {}  # binding_id -> the bind() call
        self.module_ref: dict[int, str] = {}  # binding_id -> module source text
        self.imported_name: dict[int, tuple[str, str]] = {}  # binding -> (source, name)
        self.enclosing_class: dict[int, AstNode] = {}  # fn node_id -> class node
        self._build()

    def _build(self) -> None:
        unit = self.unit
        scopes = unit.scopes

        stack: list[AstNode] = [unit.ast]
        class_stack: list[AstNode] = []

        def walk(node: AstNode) -> None:
            self.enclosing[node.node_id] = stack[-1]
            if node.kind == "function":
                if class_stack:
                    self.enclosing_class[node.node_id] = class_stack[-1]
                stack.append(node)
                for child in node.children:
                    walk(child)
                stack.pop()
                return
            if node.kind == "class":
                class_stack.append(node)
                for child in node.children:
                    walk(child)
                class_stack.pop()
                return
            for child in node.children:
                walk(child)

        for child in unit.ast.children:
            walk(child)
        self.enclosing[unit.ast.node_id] = unit.ast

        # function declarations bind their own name
        for fn in unit.ast.find("function"):
            binding = scopes.decl_to_binding.get(fn.node_id)
            if binding is not None:
                self.fn_for_binding[binding.binding_id] = fn

        # declarator/assignment value bindings, one level
        for node in unit.ast.walk():
            if node.kind == "declarator" and node.attrs["has_init"]:
                self._record_value(node.children[0], node.children[1])
            elif node.kind == "assignment" and node.attrs["op"] == "=":
                self._record_value(node.children[0], node.children[1])

    def _record_value(self, target: AstNode, value: AstNode) -> None:
        if target.kind != "identifier":
            if target.kind == "object-pattern":
                self._record_destructured(target, value)
            return
        binding = self.unit.scopes.binding_for(target)
        if binding is None or binding.is_global:
            return
        bid = binding.binding_id
        if value.kind == "function":
            self.fn_for_binding.setdefault(bid, value)
        elif value.kind == "identifier":
            src = self.unit.scopes.binding_for(value)
            if src is not None and not src.is_global:
                self.alias.setdefault(bid, src.binding_id)
        elif value.kind == "object-literal":
            self.literal_for_binding.setdefault(bid, value)
        elif value.kind == "call":
            callee = value.children[0]
            if (callee.kind == "member-read" and callee.attrs.get("prop_name") == "bind"
                    and not callee.attrs["computed"]):
                fn = self.resolve_expr_function(callee.children[0])
                if fn is not None:
                    self.bound_target.setdefault(bid, fn)
                    self.bound_call.setdefault(bid, value)
            elif (callee.kind == "identifier" and callee.attrs["name"] == "require"
                    and len(value.children) == 2
                    and value.children[1].kind == "literal"
                    and value.children[1].attrs["literal_kind"] == "string"):
                self.module_ref.setdefault(bid, str(value.children[1].attrs["value"]))

    def _record_destructured(self, pattern: AstNode, value: AstNode) -> None:
        """`const { helper } = require('./util')` pins each name to a module."""
        if not (value.kind == "call" and value.children
                and value.children[0].kind == "identifier"
                and value.children[0].attrs["name"] == "require"
                and len(value.children) == 2
                and value.children[1].kind == "literal"
                and value.children[1].attrs["literal_kind"] == "string"):
            return
        source = str(value.children[1].attrs["value"])
        for prop in pattern.children:
            if prop.kind != "pattern-property":
                continue
            name = prop.attrs.get("key_name")
            inner = prop.children[-1]
            if inner.kind == "default-pattern":
                inner = inner.children[0]
            if name is None or inner.kind != "identifier":
                continue
            binding = self.unit.scopes.binding_for(inner)
            if binding is not None:
                self.imported_name[binding.binding_id] = (source, name)

    # -- resolution helpers -----------------------------------------------

    def resolve_binding_function(self, binding: Binding, depth: int = 0) -> AstNode | None:
        if depth > 2:
            return None
        fn = self.fn_for_binding.get(binding.binding_id)
        if fn is not None:
            return fn
        fn = self.bound_target.get(binding.binding_id)
        if fn is not None:
            return fn
        nxt = self.alias.get(binding.binding_id)
        if nxt is not None:
            for b in self.unit.scopes.bindings:
                if b.binding_id == nxt:
                    return self.resolve_binding_function(b, depth + 1)
        return None

    def resolve_expr_function(self, expr: AstNode) -> AstNode | None:
        """Resolve an expression to a local function node, if visible."""
        if expr.kind == "function":
            return expr
        if expr.kind == "identifier":
            binding = self.unit.scopes.binding_for(expr)
            if binding is None:
                return None
            return self.resolve_binding_function(binding)
        if expr.kind == "member-read" and not expr.attrs["computed"]:
            base = expr.children[0]
            name = expr.attrs["prop_name"]
            if base.kind == "identifier":
                binding = self.unit.scopes.binding_for(base)
                if binding is not None:
                    literal = self.literal_for_binding.get(binding.binding_id)
                    if literal is not None:
                        return _literal_method(literal, name)
        return None


def _literal_method(literal: AstNode, name: str | None) -> AstNode | None:
    if name is None:
        return None
    for prop in literal.children:
        if prop.kind != "property" or prop.attrs.get("key_name") != name:
            continue
        value = prop.children[-1]
        if value.kind == "function":
            return value
    return None


def _class_method(cls: AstNode, name: str | None) -> AstNode | None:
    if name is None:
        return None
    for member in cls.children:
        if member.kind == "method-definition" and member.attrs.get("key_name") == name:
            return member.children[-1]
    return None


def _resolve_module_path(model: ProgramModel, importer: str, source: str) -> str | None:
    if not source.startswith("."):
        return None  # bare specifiers are external packages
    base = PurePosixPath(importer).parent / source
    candidates = [str(base)]
    if not source.endswith((".js", ".mjs", ".cjs")):
        candidates += [f"{base}.js", f"{base}.mjs", f"{base}.cjs",
                       str(base / "index.js")]
    # normalize ./ and ../ segments
    normalized = []
    for cand in candidates:
        parts: list[str] = []
        for seg in PurePosixPath(cand).parts:
            if seg == ".":
                continue
            if seg == ".." and parts and parts[-1] != "..":
                parts.pop()
            else:
                parts.append(seg)
        normalized.append(str(PurePosixPath(*parts)) if parts else cand)
    for cand in normalized:
        if model.unit_for(cand) is not None:
            return cand
    return None


class _Builder:
    def __init__(self, model: ProgramModel):
        self.model = model
        self.indexes: dict[str, _UnitIndex] = {}
        self.nodes: dict[str, NodeInfo] = {}
        self.functions: dict[str, tuple[SourceUnit, AstNode]] = {}
        self.edges: set[CallEdge] = set()
        self.exports: set[str] = set()
        # per unit: exported name -> FunctionId ("default" for default export)
        self.export_names: dict[str, dict[str, str]] = {}

    def build(self) -> CallGraph:
        for unit in self.model.units:
            self.indexes[unit.path] = _UnitIndex(unit)
            self._collect_nodes(unit)
        for unit in self.model.units:
            self._collect_exports(unit)
        for unit in self.model.units:
            self._resolve_calls(unit)
        graph = CallGraph(
            nodes=self.nodes,
            edges=sorted(self.edges),
            exports=self.exports,
            functions=self.functions,
            unit_indexes=self.indexes,
            export_names=self.export_names,
        )
        return graph

    # -- nodes ---------------------------------------------------------------

    def _collect_nodes(self, unit: SourceUnit) -> None:
        tid = toplevel_id(unit.path)
        self.nodes[tid] = NodeInfo(tid, unit.path, (0, len(unit.text)), "<toplevel>",
                                   "toplevel")
        self.functions[tid] = (unit, unit.ast)
        for fn in unit.ast.find("function"):
            fid = function_id(unit.path, fn)
            name = fn.attrs.get("name") or "<anonymous>"
            self.nodes[fid] = NodeInfo(fid, unit.path, fn.span, name, "function")
            self.functions[fid] = (unit, fn)

    def _ensure_unknown(self) -> str:
        if UNKNOWN_CALLEE not in self.nodes:
            self.nodes[UNKNOWN_CALLEE] = NodeInfo(UNKNOWN_CALLEE, None, None,
                                                  "<unknown>", "unknown")
        return UNKNOWN_CALLEE

    # -- exports ---------------------------------------------------------------

    def _export_function(self, unit: SourceUnit, fn: AstNode, name: str | None) -> None:
        fid = function_id(unit.path, fn)
        self.exports.add(fid)
        if name:
            self.export_names.setdefault(unit.path, {})[name] = fid

    def _export_value(self, unit: SourceUnit, value: AstNode, name: str | None) -> None:
        index = self.indexes[unit.path]
        if value.kind == "function":
            self._export_function(unit, value, name)
        elif value.kind == "identifier":
            fn = index.resolve_expr_function(value)
            if fn is not None:
                self._export_function(unit, fn, name)
            else:
                binding = unit.scopes.binding_for(value)
                if binding is not None:
                    literal = index.literal_for_binding.get(binding.binding_id)
                    if literal is not None:
                        self._export_object_literal(unit, literal)
                    elif not binding.is_global:
                        cls = _local_class(unit, binding)
                        if cls is not None:
                            self._export_class(unit, cls)
        elif value.kind == "object-literal":
            self._export_object_literal(unit, value, under=name)
        elif value.kind == "class":
            self._export_class(unit, value)

    def _export_object_literal(self, unit: SourceUnit, literal: AstNode,
                               under: str | None = None) -> None:
        index = self.indexes[unit.path]
        for prop in literal.children:
            if prop.kind != "property":
                continue
            pk = prop.attrs.get("property_kind")
            key = prop.attrs.get("key_name")
            if pk == "spread":
                continue
            value = prop.children[-1]
            if value.kind == "function":
                self._export_function(unit, value, key if under is None else None)
            elif value.kind == "identifier":
                fn = index.resolve_expr_function(value)
                if fn is not None:
                    self._export_function(unit, fn, key if under is None else None)
            elif value.kind == "object-literal":
                self._export_object_literal(unit, value, under=key)

    def _export_class(self, unit: SourceUnit, cls: AstNode) -> None:
        for member in cls.children:
            if member.kind == "method-definition":
                fn = member.children[-1]
                self._export_function(unit, fn, member.attrs.get("key_name"))

    def _collect_exports(self, unit: SourceUnit) -> None:
        for node in unit.ast.walk():
            if node.kind == "assignment" and node.attrs["op"] == "=":
                target = node.children[0]
                value = node.children[1]
                if target.kind != "member-write":
                    continue
                base = target.children[0]
                prop = target.attrs.get("prop_name")
                # module.exports = V  |  module.exports.name = V
                if (base.kind == "identifier" and base.attrs["name"] == "module"
                        and prop == "exports"):
                    self._export_value(unit, value, None)
                elif (base.kind == "member-write" or base.kind == "member-read") \
                        and base.children[0].kind == "identifier" \
                        and base.children[0].attrs["name"] == "module" \
                        and base.attrs.get("prop_name") == "exports":
                    self._export_value(unit, value, prop)
                elif base.kind == "identifier" and base.attrs["name"] == "exports":
                    binding = unit.scopes.binding_for(base)
                    if binding is None or binding.is_global:
                        self._export_value(unit, value, prop)
            elif node.kind == "export-named":
                if node.children:
                    decl = node.children[0]
                    if decl.kind == "function":
                        self._export_function(unit, decl, decl.attrs.get("name"))
                    elif decl.kind == "class":
                        self._export_class(unit, decl)
                    elif decl.kind == "var-decl":
                        for d in decl.children:
                            if d.attrs["has_init"] and d.children[0].kind == "identifier":
                                self._export_value(unit, d.children[1],
                                                   d.children[0].attrs["name"])
                else:
                    index = self.indexes[unit.path]
                    for local, exported in node.attrs["specifiers"]:
                        binding = None
                        for b in unit.scopes.owned_bindings.get(unit.ast.node_id, []):
                            if b.name == local:
                                binding = b
                                break
                        if binding is None:
                            continue
                        fn = index.resolve_binding_function(binding)
                        if fn is not None:
                            self._export_function(unit, fn, exported)
            elif node.kind == "export-default":
                self._export_value(unit, node.children[0], "default")

    # -- call resolution -----------------------------------------------------

    def _caller_id(self, unit: SourceUnit, index: _UnitIndex, node: AstNode) -> str:
        enclosing = index.enclosing.get(node.node_id, unit.ast)
        if enclosing.kind == "program":
            return toplevel_id(unit.path)
        return function_id(unit.path, enclosing)

    def _add_edge(self, caller: str, site: AstNode, callee: str) -> None:
        self.edges.add(CallEdge(caller, (site.start, site.end), callee))

    def _resolve_calls(self, unit: SourceUnit) -> None:
        index = self.indexes[unit.path]
        for node in unit.ast.walk():
            if node.kind == "call":
                self._resolve_call(unit, index, node)
            elif node.kind == "new":
                self._resolve_new(unit, index, node)

    def _resolve_call(self, unit: SourceUnit, index: _UnitIndex, call: AstNode) -> None:
        caller = self._caller_id(unit, index, call)
        callee_expr = call.children[0]
        args = call.children[1:]

        target = index.resolve_expr_function(callee_expr)
        if target is not None:
            self._add_edge(caller, call, function_id(unit.path, target))
            return

        if callee_expr.kind == "identifier":
            binding = unit.scopes.binding_for(callee_expr)
            name = callee_expr.attrs["name"]
            if name == "require":
                return  # module load, not a function-to-function edge
            if binding is not None and not binding.is_global:
                imported = index.imported_name.get(binding.binding_id)
                if imported is not None:
                    fid = self._imported_function(unit, *imported)
                    if fid is not None:
                        self._add_edge(caller, call, fid)
                        return
            if binding is not None and binding.kind == "import":
                fid = self._es_import_target(unit, name)
                if fid is not None:
                    self._add_edge(caller, call, fid)
                    return
            self._add_edge(caller, call, self._ensure_unknown())
            return

        if callee_expr.kind in ("member-read", "member-write"):
            self._resolve_member_call(unit, index, call, caller, callee_expr, args)
            return

        # IIFE and other immediate function values
        if callee_expr.kind == "function":
            self._add_edge(caller, call, function_id(unit.path, callee_expr))
            return
        self._add_edge(caller, call, self._ensure_unknown())

    def _resolve_member_call(self, unit: SourceUnit, index: _UnitIndex, call: AstNode,
                             caller: str, callee_expr: AstNode, args: list[AstNode]) -> None:
        base = callee_expr.children[0]
        prop = callee_expr.attrs.get("prop_name")

        # f.call(...) / f.apply(...) invoke f
        if prop in ("call", "apply") and not callee_expr.attrs["computed"]:
            fn = index.resolve_expr_function(base)
            if fn is not None:
                self._add_edge(caller, call, function_id(unit.path, fn))
                return

        # this.m() within a locally complete (superclass-free) class
        if base.kind == "this":
            cls = None
            enclosing = index.enclosing.get(call.node_id)
            while enclosing is not None and enclosing.kind == "function":
                cls = index.enclosing_class.get(enclosing.node_id)
                if cls is not None:
                    break
                enclosing = index.enclosing.get(enclosing.node_id)
            if cls is not None and not cls.attrs["has_superclass"]:
                method = _class_method(cls, prop)
                if method is not None:
                    self._add_edge(caller, call, function_id(unit.path, method))
                    return
            self._add_edge(caller, call, self._ensure_unknown())
            return

        # module member call through require() binding
        if base.kind == "identifier":
            binding = unit.scopes.binding_for(base)
            if binding is not None:
                source = index.module_ref.get(binding.binding_id)
                if source is not None:
                    fid = self._imported_function(unit, source, prop)
                    if fid is not None:
                        self._add_edge(caller, call, fid)
                        return
                    self._add_edge(caller, call, self._ensure_unknown())
                    return

        # locally visible literal / class methods
        fn = index.resolve_expr_function(callee_expr)
        if fn is not None:
            self._add_edge(caller, call, function_id(unit.path, fn))
            return

        # callback positions of modeled built-ins
        if prop in CALLBACK_BUILTINS and args:
            cb = index.resolve_expr_function(args[0])
            if cb is not None:
                self._add_edge(caller, call, function_id(unit.path, cb))
                return
        self._add_edge(caller, call, self._ensure_unknown())

    def _resolve_new(self, unit: SourceUnit, index: _UnitIndex, new: AstNode) -> None:
        caller = self._caller_id(unit, index, new)
        callee_expr = new.children[0]
        fn = index.resolve_expr_function(callee_expr)
        if fn is not None:
            self._add_edge(caller, new, function_id(unit.path, fn))
            return
        if callee_expr.kind == "identifier":
            binding = unit.scopes.binding_for(callee_expr)
            if binding is not None and not binding.is_global:
                # local class: edge to its constructor when declared
                cls = _local_class(unit, binding)
                if cls is not None:
                    ctor = _class_method(cls, "constructor")
                    if ctor is not None:
                        self._add_edge(caller, new, function_id(unit.path, ctor))
                        return
                    return  # implicit constructor: no function body to enter
        self._add_edge(caller, new, self._ensure_unknown())

    def _imported_function(self, unit: SourceUnit, source: str,
                           name: str | None) -> str | None:
        resolved = _resolve_module_path(self.model, unit.path, source)
        if resolved is None or name is None:
            return None
        return self.export_names.get(resolved, {}).get(name)

    def _es_import_target(self, unit: SourceUnit, local: str) -> str | None:
        for node in unit.ast.children:
            if node.kind != "import-decl":
                continue
            for imported, local_name in node.attrs["specifiers"]:
                if local_name != local:
                    continue
                return self._imported_function(unit, node.attrs["source"], imported)
        return None


def _local_class(unit: SourceUnit, binding: Binding) -> AstNode | None:
    for cls in unit.ast.find("class"):
        if cls.attrs.get("name") and unit.scopes.binding_for(cls) is binding:
            return cls
    # class declarations register via name lookup when decl binding is absent
    for cls in unit.ast.find("class"):
        if cls.attrs.get("name") == binding.name:
            return cls
    return None


def build_call_graph(model: ProgramModel) -> CallGraph:
    return _Builder(model).build()


def exported_functions(model: ProgramModel, graph: CallGraph) -> set[str]:
    return set(graph.exports)


def entry_point_paths(graph: CallGraph, target: str, limit: int = 10) -> list[EntryPointPath]:
    """Up to `limit` shortest simple root→target paths, discovered in
    (length, entry id, edge sequence) order."""
    if target not in graph.nodes:
        return []
    roots = graph.roots
    results: list[EntryPointPath] = []
    if target in roots:
        results.append(EntryPointPath(entry=target, steps=[], target=target))
        if len(results) >= limit:
            return results

    outgoing: dict[str, list[CallEdge]] = {}
    for edge in sorted(graph.edges):
        outgoing.setdefault(edge.caller, []).append(edge)

    # breadth-first over partial paths; FIFO + sorted expansion order makes
    # discovery order (length, entry id, edge sequence)
    queue: list[tuple[str, list[CallEdge], frozenset[str]]] = [
        (root, [], frozenset({root})) for root in roots
    ]
    budget = 50000
    while queue and len(results) < limit and budget > 0:
        next_queue: list[tuple[str, list[CallEdge], frozenset[str]]] = []
        for node, steps, seen in queue:
            for edge in outgoing.get(node, []):
                budget -= 1
                if edge.callee in seen or edge.callee == UNKNOWN_CALLEE:
                    continue
                new_steps = steps + [edge]
                if edge.callee == target:
                    entry = new_steps[0].caller
                    results.append(EntryPointPath(entry=entry, steps=new_steps,
                                                  target=target))
                    if len(results) >= limit:
                        return results
                next_queue.append((edge.callee, new_steps, seen | {edge.callee}))
        queue = next_queue
    return results


__all__ = [
    "UNKNOWN_CALLEE",
    "CallEdge",
    "NodeInfo",
    "EntryPointPath",
    "CallGraph",
    "function_id",
    "toplevel_id",
    "build_call_graph",
    "exported_functions",
    "entry_point_paths",
]
