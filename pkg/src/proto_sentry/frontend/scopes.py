"""Binding resolution over the normalized AST.

Maps every identifier use to the binding it refers to, following lexical
scoping with `var`/function-declaration hoisting to function scope and
`let`/`const`/`class` scoped to their enclosing block.  Names that resolve
to no declaration become implicit global bindings keyed by name.

The program node itself acts as the owner of module-level bindings, so a
binding's owner is always a `program` or `function` node.  A binding
referenced from a function nested below its owner is marked captured;
captured bindings lose calling-context precision downstream.

Not modeled: the temporal dead zone, `with`-injected scopes (the `with`
statement is opaque to the analyses anyway), and duplicate-declaration
errors (later declarations of the same name in one scope reuse the first
binding).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import AstNode

_FUNCTION_KINDS = frozenset({"function"})
_SCOPE_OWNER_KINDS = frozenset({"program", "function"})

# Statement kinds whose sub-statements are scanned when hoisting `var`
# declarations (anything except nested function bodies).
_HOIST_RECURSE = {
    "block": lambda n: n.children,
    "if": lambda n: n.children[1:],
    "for": lambda n: n.children,
    "for-in": lambda n: n.children[2:],
    "for-of": lambda n: n.children[2:],
    "while": lambda n: n.children[1:],
    "do-while": lambda n: n.children[:1],
    "try": lambda n: n.children,
    "catch": lambda n: n.children[-1:],
    "switch": lambda n: n.children[1:],
    "case": lambda n: n.children,
    "labeled": lambda n: n.children,
    "with": lambda n: n.children[1:],
    "export-named": lambda n: n.children,
    "export-default": lambda n: n.children,
}


@dataclass(eq=False)
class Binding:
    binding_id: int
    name: str
    kind: str  # param | var | let | const | function | class | import | catch | arguments | global
    owner: AstNode | None  # program/function node; None only for globals
    declared_at: int
    captured: bool = False

    @property
    def is_global(self) -> bool:
        return self.kind == "global"

    def __repr__(self) -> str:
        return f"Binding({self.binding_id}, {self.name!r}, {self.kind})"


@dataclass
class ScopeResult:
    bindings: list[Binding]
    use_to_binding: dict[int, Binding]
    decl_to_binding: dict[int, Binding]
    globals_by_name: dict[str, Binding]
    owned_bindings: dict[int, list[Binding]]  # program/function node_id -> bindings

    def binding_for(self, node: AstNode) -> Binding | None:
        hit = self.use_to_binding.get(node.node_id)
        if hit is not None:
            return hit
        return self.decl_to_binding.get(node.node_id)


class _Scope:
    __slots__ = ("names", "owner", "is_function_scope")

    def __init__(self, owner: AstNode, is_function_scope: bool):
        self.names: dict[str, Binding] = {}
        self.owner = owner
        self.is_function_scope = is_function_scope


class Resolver:
    def __init__(self, program: AstNode):
        self.program = program
        self.result = ScopeResult([], {}, {}, {}, {})
        self.chain: list[_Scope] = []
        self.function_stack: list[AstNode] = []
        self._next_id = 0

    # -- bookkeeping -------------------------------------------------------

    def _new_binding(self, name: str, kind: str, owner: AstNode | None, at: int) -> Binding:
        b = Binding(self._next_id, name, kind, owner, at)
        self._next_id += 1
        self.result.bindings.append(b)
        if owner is not None:
            self.result.owned_bindings.setdefault(owner.node_id, []).append(b)
        return b

    def _declare(self, name: str, kind: str, at: int, function_scope: bool) -> Binding:
        scope = None
        if function_scope:
            for s in reversed(self.chain):
                if s.is_function_scope:
                    scope = s
                    break
        else:
            scope = self.chain[-1]
        assert scope is not None
        existing = scope.names.get(name)
        if existing is not None:
            return existing
        binding = self._new_binding(name, kind, scope.owner, at)
        scope.names[name] = binding
        return binding

    def _lookup(self, name: str) -> Binding | None:
        for scope in reversed(self.chain):
            hit = scope.names.get(name)
            if hit is not None:
                return hit
        return None

    def _use(self, node: AstNode) -> None:
        name = node.attrs["name"]
        binding = self._lookup(name)
        if binding is None:
            binding = self.result.globals_by_name.get(name)
            if binding is None:
                binding = self._new_binding(name, "global", None, node.start)
                self.result.globals_by_name[name] = binding
        elif binding.owner is not self.function_stack[-1]:
            binding.captured = True
        self.result.use_to_binding[node.node_id] = binding

    def _bind_decl_ident(self, node: AstNode, binding: Binding) -> None:
        self.result.decl_to_binding[node.node_id] = binding

    # -- pattern declaration -----------------------------------------------

    def _declare_pattern(self, pattern: AstNode, kind: str, function_scope: bool) -> None:
        """Declare every identifier a binding pattern introduces; resolve
        computed keys and default expressions as ordinary uses."""
        if pattern.kind == "identifier":
            b = self._declare(pattern.attrs["name"], kind, pattern.start, function_scope)
            self._bind_decl_ident(pattern, b)
        elif pattern.kind == "default-pattern":
            self._declare_pattern(pattern.children[0], kind, function_scope)
            self._visit_expr(pattern.children[1])
        elif pattern.kind == "object-pattern":
            for prop in pattern.children:
                if prop.kind == "pattern-property":
                    if prop.attrs["computed"]:
                        self._visit_expr(prop.children[0])
                    self._declare_pattern(prop.children[-1], kind, function_scope)
                elif prop.kind == "rest-element":
                    self._declare_pattern(prop.children[0], kind, function_scope)
        elif pattern.kind == "array-pattern":
            for el in pattern.children:
                if el.kind == "hole":
                    continue
                if el.kind == "rest-element":
                    self._declare_pattern(el.children[0], kind, function_scope)
                else:
                    self._declare_pattern(el, kind, function_scope)

    # -- assignment-target resolution (targets are uses, not declarations) --

    def _resolve_target(self, target: AstNode) -> None:
        if target.kind == "identifier":
            self._use(target)
        elif target.kind in ("member-read", "member-write"):
            self._visit_expr(target)
        elif target.kind == "default-pattern":
            self._resolve_target(target.children[0])
            self._visit_expr(target.children[1])
        elif target.kind == "object-pattern":
            for prop in target.children:
                if prop.kind == "pattern-property":
                    if prop.attrs["computed"]:
                        self._visit_expr(prop.children[0])
                    self._resolve_target(prop.children[-1])
                elif prop.kind == "rest-element":
                    self._resolve_target(prop.children[0])
        elif target.kind == "array-pattern":
            for el in target.children:
                if el.kind == "hole":
                    continue
                if el.kind == "rest-element":
                    self._resolve_target(el.children[0])
                else:
                    self._resolve_target(el)
        else:
            self._visit_expr(target)

    # -- hoisting ------------------------------------------------------------

    def _hoist(self, stmts: list[AstNode]) -> None:
        """Declare `var` declarators and function declarations up front."""
        for stmt in stmts:
            self._hoist_stmt(stmt)

    def _hoist_stmt(self, stmt: AstNode) -> None:
        if stmt.kind == "var-decl":
            if stmt.attrs["decl_kind"] == "var":
                for d in stmt.children:
                    self._declare_pattern_names_only(d.children[0], "var")
        elif stmt.kind == "function" and stmt.attrs["function_kind"] == "declaration":
            name = stmt.attrs["name"]
            if name:
                self._declare(name, "function", stmt.start, function_scope=True)
        elif stmt.kind in _HOIST_RECURSE:
            for child in _HOIST_RECURSE[stmt.kind](stmt):
                if child.kind in ("var-decl", "function") or child.kind in _HOIST_RECURSE:
                    self._hoist_stmt(child)

    def _declare_pattern_names_only(self, pattern: AstNode, kind: str) -> None:
        """Hoisting pass: create bindings without touching expressions."""
        if pattern.kind == "identifier":
            self._declare(pattern.attrs["name"], kind, pattern.start, function_scope=True)
        elif pattern.kind == "default-pattern":
            self._declare_pattern_names_only(pattern.children[0], kind)
        elif pattern.kind == "object-pattern":
            for prop in pattern.children:
                if prop.kind == "pattern-property":
                    self._declare_pattern_names_only(prop.children[-1], kind)
                elif prop.kind == "rest-element":
                    self._declare_pattern_names_only(prop.children[0], kind)
        elif pattern.kind == "array-pattern":
            for el in pattern.children:
                if el.kind == "rest-element":
                    self._declare_pattern_names_only(el.children[0], kind)
                elif el.kind != "hole":
                    self._declare_pattern_names_only(el, kind)

    def _collect_lexical(self, stmts: list[AstNode]) -> None:
        """Declare this block's own let/const/class names before execution."""
        for stmt in stmts:
            inner = stmt
            if stmt.kind in ("export-named", "export-default") and stmt.children:
                inner = stmt.children[0]
            if inner.kind == "var-decl" and inner.attrs["decl_kind"] in ("let", "const"):
                for d in inner.children:
                    self._declare_pattern_names_only_lexical(d.children[0],
                                                            inner.attrs["decl_kind"])
            elif inner.kind == "class" and inner.attrs.get("name"):
                self._declare(inner.attrs["name"], "class", inner.start, function_scope=False)

    def _declare_pattern_names_only_lexical(self, pattern: AstNode, kind: str) -> None:
        if pattern.kind == "identifier":
            self._declare(pattern.attrs["name"], kind, pattern.start, function_scope=False)
        elif pattern.kind == "default-pattern":
            self._declare_pattern_names_only_lexical(pattern.children[0], kind)
        elif pattern.kind == "object-pattern":
            for prop in pattern.children:
                if prop.kind == "pattern-property":
                    self._declare_pattern_names_only_lexical(prop.children[-1], kind)
                elif prop.kind == "rest-element":
                    self._declare_pattern_names_only_lexical(prop.children[0], kind)
        elif pattern.kind == "array-pattern":
            for el in pattern.children:
                if el.kind == "rest-element":
                    self._declare_pattern_names_only_lexical(el.children[0], kind)
                elif el.kind != "hole":
                    self._declare_pattern_names_only_lexical(el, kind)

    # -- traversal -------------------------------------------------------------

    def run(self) -> ScopeResult:
        self.function_stack.append(self.program)
        self.chain.append(_Scope(self.program, is_function_scope=True))
        self._hoist(self.program.children)
        self._collect_lexical(self.program.children)
        for stmt in self.program.children:
            self._visit_stmt(stmt)
        self.chain.pop()
        self.function_stack.pop()
        return self.result

    def _enter_function(self, fn: AstNode) -> None:
        self.function_stack.append(fn)
        self.chain.append(_Scope(fn, is_function_scope=True))
        if fn.attrs.get("function_kind") == "expression" and fn.attrs.get("name"):
            self._declare(fn.attrs["name"], "function", fn.start, function_scope=True)
        if not fn.attrs["is_arrow"]:
            self._declare("arguments", "arguments", fn.start, function_scope=True)
        params = fn.children[:-1]
        for param in params:
            if param.kind == "rest-element":
                self._declare_pattern(param.children[0], "param", function_scope=True)
            else:
                self._declare_pattern(param, "param", function_scope=True)
        body = fn.children[-1]
        if fn.attrs["is_expression_body"]:
            self._visit_expr(body)
        else:
            self._hoist(body.children)
            self._collect_lexical(body.children)
            for stmt in body.children:
                self._visit_stmt(stmt)
        self.chain.pop()
        self.function_stack.pop()

    def _enter_block(self, block: AstNode) -> None:
        self.chain.append(_Scope(self.function_stack[-1], is_function_scope=False))
        self._collect_lexical(block.children)
        for stmt in block.children:
            self._visit_stmt(stmt)
        self.chain.pop()

    def _visit_stmt(self, stmt: AstNode) -> None:
        kind = stmt.kind
        if kind == "var-decl":
            decl_kind = stmt.attrs["decl_kind"]
            for d in stmt.children:
                pattern = d.children[0]
                if d.attrs["has_init"]:
                    self._visit_expr(d.children[1])
                # names exist already via hoist/lexical collection; bind decl
                # idents and resolve computed keys / defaults
                self._declare_pattern(pattern, decl_kind, decl_kind == "var")
        elif kind == "function":
            name = stmt.attrs["name"]
            if name:
                binding = self._lookup(name)
                if binding is not None:
                    self.result.decl_to_binding[stmt.node_id] = binding
            self._enter_function(stmt)
        elif kind == "class":
            self._visit_class(stmt)
        elif kind == "block":
            self._enter_block(stmt)
        elif kind == "expr-stmt":
            self._visit_expr(stmt.children[0])
        elif kind == "if":
            self._visit_expr(stmt.children[0])
            self._visit_stmt(stmt.children[1])
            if stmt.attrs["has_alternate"]:
                self._visit_stmt(stmt.children[2])
        elif kind == "for":
            self.chain.append(_Scope(self.function_stack[-1], is_function_scope=False))
            idx = 0
            if stmt.attrs["has_init"]:
                init = stmt.children[idx]
                idx += 1
                if init.kind == "var-decl":
                    if init.attrs["decl_kind"] in ("let", "const"):
                        for d in init.children:
                            self._declare_pattern_names_only_lexical(
                                d.children[0], init.attrs["decl_kind"])
                    self._visit_stmt(init)
                else:
                    self._visit_expr(init)
            if stmt.attrs["has_test"]:
                self._visit_expr(stmt.children[idx])
                idx += 1
            if stmt.attrs["has_update"]:
                self._visit_expr(stmt.children[idx])
                idx += 1
            self._visit_stmt(stmt.children[idx])
            self.chain.pop()
        elif kind in ("for-in", "for-of"):
            self.chain.append(_Scope(self.function_stack[-1], is_function_scope=False))
            left, right, body = stmt.children
            self._visit_expr(right)
            if stmt.attrs["left_is_decl"]:
                decl_kind = left.attrs["decl_kind"]
                pattern = left.children[0].children[0]
                if decl_kind in ("let", "const"):
                    self._declare_pattern_names_only_lexical(pattern, decl_kind)
                self._declare_pattern(pattern, decl_kind, decl_kind == "var")
            else:
                self._resolve_target(left)
            self._visit_stmt(body)
            self.chain.pop()
        elif kind == "while":
            self._visit_expr(stmt.children[0])
            self._visit_stmt(stmt.children[1])
        elif kind == "do-while":
            self._visit_stmt(stmt.children[0])
            self._visit_expr(stmt.children[1])
        elif kind == "return":
            if stmt.attrs["has_argument"]:
                self._visit_expr(stmt.children[0])
        elif kind == "throw":
            self._visit_expr(stmt.children[0])
        elif kind == "try":
            for child in stmt.children:
                if child.kind == "block":
                    self._enter_block(child)
                elif child.kind == "catch":
                    self.chain.append(_Scope(self.function_stack[-1], is_function_scope=False))
                    if child.attrs["has_param"]:
                        self._declare_pattern(child.children[0], "catch", function_scope=False)
                    self._enter_block(child.children[-1])
                    self.chain.pop()
        elif kind == "switch":
            self._visit_expr(stmt.children[0])
            self.chain.append(_Scope(self.function_stack[-1], is_function_scope=False))
            for case in stmt.children[1:]:
                body = case.children
                if case.attrs["has_test"]:
                    self._visit_expr(case.children[0])
                    body = case.children[1:]
                self._collect_lexical(list(body))
                for s in body:
                    self._visit_stmt(s)
            self.chain.pop()
        elif kind == "labeled":
            self._visit_stmt(stmt.children[0])
        elif kind == "with":
            self._visit_expr(stmt.children[0])
            self._visit_stmt(stmt.children[1])
        elif kind == "import-decl":
            for _, local in stmt.attrs["specifiers"]:
                self._declare(local, "import", stmt.start, function_scope=True)
        elif kind in ("export-named", "export-default", "export-all"):
            for child in stmt.children:
                if child.kind in ("var-decl", "function", "class"):
                    self._visit_stmt(child)
                else:
                    self._visit_expr(child)
        elif kind in ("empty", "debugger", "break", "continue"):
            pass
        else:
            self._visit_expr(stmt)

    def _visit_class(self, cls: AstNode) -> None:
        if cls.attrs.get("name") and self._lookup(cls.attrs["name"]) is None:
            self._declare(cls.attrs["name"], "class", cls.start, function_scope=False)
        start = 0
        if cls.attrs["has_superclass"]:
            self._visit_expr(cls.children[0])
            start = 1
        for member in cls.children[start:]:
            if member.kind == "method-definition":
                if member.attrs["computed"]:
                    self._visit_expr(member.children[0])
                self._enter_function(member.children[-1])
            elif member.kind == "class-field":
                if member.attrs["computed"]:
                    self._visit_expr(member.children[0])
                if member.attrs["has_value"]:
                    self._visit_expr(member.children[-1])

    def _visit_expr(self, expr: AstNode) -> None:
        kind = expr.kind
        if kind == "identifier":
            name = expr.attrs["name"]
            if name != "new.target":
                self._use(expr)
        elif kind == "function":
            self._enter_function(expr)
        elif kind == "class":
            self._visit_class(expr)
        elif kind in ("member-read", "member-write"):
            self._visit_expr(expr.children[0])
            if expr.attrs["computed"]:
                self._visit_expr(expr.children[1])
        elif kind == "assignment":
            self._resolve_target(expr.children[0])
            self._visit_expr(expr.children[1])
        elif kind == "update":
            self._resolve_target(expr.children[0])
        elif kind == "object-literal":
            for prop in expr.children:
                pk = prop.attrs.get("property_kind")
                if pk == "spread":
                    self._visit_expr(prop.children[0])
                    continue
                if prop.attrs.get("computed"):
                    self._visit_expr(prop.children[0])
                self._visit_expr(prop.children[-1])
        elif kind == "template-literal":
            for child in expr.children:
                self._visit_expr(child)
        elif kind in ("literal", "this", "super", "hole"):
            pass
        else:
            for child in expr.children:
                self._visit_expr(child)


def resolve_scopes(program: AstNode) -> ScopeResult:
    """Resolve bindings for a parsed program whose node ids are assigned."""
    return Resolver(program).run()


__all__ = ["Binding", "ScopeResult", "resolve_scopes"]
