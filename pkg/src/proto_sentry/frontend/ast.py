"""Normalized syntax tree.

Every construct is an :class:`AstNode` with a ``kind`` string, a byte span
into the original source, an ordered ``children`` list and a flat ``attrs``
dict of JSON-able scalars.  The per-kind child layout is fixed:

Statements
----------
``program``            children: statements.  attrs: ``source_type`` ("module"|"script").
``var-decl``           children: declarators.  attrs: ``decl_kind`` ("var"|"let"|"const").
``declarator``         children: [pattern, init?].  attrs: ``has_init``.
``expr-stmt``          children: [expression].
``block``              children: statements.
``if``                 children: [test, consequent, alternate?].  attrs: ``has_alternate``.
``for``                children: [init?, test?, update?, body].  attrs: ``has_init``/``has_test``/``has_update``.
``for-in``             children: [left, right, body].  attrs: ``left_is_decl``.
``for-of``             children: [left, right, body].  attrs: ``left_is_decl``, ``is_await``.
``while``              children: [test, body].
``do-while``           children: [body, test].
``return``             children: [argument?].  attrs: ``has_argument``.
``throw``              children: [argument].
``try``                children: [block, handler?, finalizer?].  attrs: ``has_handler``/``has_finalizer``.
``catch``              children: [param?, body].  attrs: ``has_param``.
``switch``             children: [discriminant, cases...].
``case``               children: [test?, statements...].  attrs: ``has_test``.
``break`` / ``continue``   attrs: ``label`` (may be None).
``labeled``            children: [body].  attrs: ``label``.
``empty`` / ``debugger``
``import-decl``        children: [].  attrs: ``source``, ``specifiers`` as
                       list of ``[imported, local]`` (``"*"`` for namespace,
                       ``"default"`` for the default binding).
``export-named``       children: [declaration?].  attrs: ``specifiers`` as
                       list of ``[local, exported]``, ``source`` (re-export) or None.
``export-default``     children: [declaration].
``export-all``         children: [].  attrs: ``source``.

Expressions
-----------
``identifier``         attrs: ``name``.
``literal``            attrs: ``value``, ``raw``, ``literal_kind``
                       ("string"|"number"|"boolean"|"null"|"regexp"|"bigint").
``this`` / ``super``
``array-literal``      children: elements (``hole`` nodes mark elisions).
``object-literal``     children: property nodes.
``property``           children: [key?, value].  attrs: ``key_name`` (constant
                       name or None), ``computed``, ``shorthand``,
                       ``property_kind`` ("init"|"get"|"set"|"method"|"spread").
                       Spread properties have children [argument].
``member-read`` / ``member-write``
                       children: [object, property].  attrs: ``computed``,
                       ``prop_name`` (constant property name or None),
                       ``optional``, and for writes ``also_reads`` (compound
                       assignment / update reads before writing).  Every
                       member access is exactly one of the two kinds.
``call``               children: [callee, arguments...].  attrs: ``optional``,
                       ``spread_args`` (argument indices that are spreads).
``new``                children: [callee, arguments...].  attrs: ``spread_args``.
``assignment``         children: [target, value].  attrs: ``op``.
``update``             children: [argument].  attrs: ``op``, ``prefix``.
``unary``              children: [argument].  attrs: ``op``.
``binary`` / ``logical``   children: [left, right].  attrs: ``op``.
``conditional``        children: [test, consequent, alternate].
``sequence``           children: expressions.
``template-literal``   children: substitution expressions.  attrs: ``quasis``
                       (cooked string parts; ``len(quasis) == len(children)+1``).
``tagged-template``    children: [tag, template-literal].
``function``           children: params... then body.  attrs: ``name`` (or
                       None), ``param_count``, ``is_arrow``, ``is_async``,
                       ``is_generator``, ``is_expression_body``,
                       ``function_kind`` ("declaration"|"expression"|"arrow"|
                       "method"|"getter"|"setter"|"constructor"), ``opaque``.
``class``              children: [superclass?, members...].  attrs: ``name``,
                       ``has_superclass``.
``method-definition``  children: [key?, function].  attrs: ``key_name``,
                       ``computed``, ``static``, ``method_kind``.
``class-field``        children: [key?, value?].  attrs: ``key_name``,
                       ``computed``, ``static``, ``has_value``.
``spread``             children: [argument].
``await`` / ``yield``  children: [argument?].  attrs (yield): ``delegate``.
``hole``               array elision placeholder.

Patterns
--------
``object-pattern``     children: pattern-property / rest-element nodes.
``pattern-property``   children: [key?, value-pattern].  attrs: ``key_name``,
                       ``computed``, ``shorthand``.
``array-pattern``      children: elements (``hole`` for elisions).
``default-pattern``    children: [pattern, default-expression].
``rest-element``       children: [argument-pattern].

Member accesses record whether the property expression is constant:
``attrs["prop_name"]`` is the exact property name for static accesses
(``a.b``), constant string bracket accesses (``a["b"]``) and constant numeric
bracket accesses (``a[1]``, canonicalized to its decimal string), and None
for dynamic accesses.  Object-literal and pattern keys follow the same rule
through ``key_name``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator

FUNCTION_KINDS = ("declaration", "expression", "arrow", "method", "getter", "setter", "constructor")

# Kinds whose nodes open a new variable scope for `var` and hoisted functions.
SCOPE_KINDS = frozenset({"program", "function"})


def canonical_number(value: float) -> str:
    """Decimal string for a numeric property key (1 -> "1", 1.5 -> "1.5")."""
    if value == int(value) and abs(value) < 2**53:
        return str(int(value))
    return repr(value)


@dataclass
class AstNode:
    kind: str
    start: int
    end: int
    children: list["AstNode"] = field(default_factory=list)
    attrs: dict[str, Any] = field(default_factory=dict)
    node_id: int = -1

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    def child(self, index: int) -> "AstNode":
        return self.children[index]

    def walk(self) -> Iterator["AstNode"]:
        """Pre-order traversal of this subtree (self included)."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def find(self, kind: str) -> Iterator["AstNode"]:
        return (n for n in self.walk() if n.kind == kind)

    def __repr__(self) -> str:  # keep reprs short; trees get deep
        return f"AstNode({self.kind!r}, {self.start}:{self.end}, children={len(self.children)})"


def is_member(node: AstNode) -> bool:
    return node.kind in ("member-read", "member-write")


def member_object(node: AstNode) -> AstNode:
    return node.children[0]


def member_property(node: AstNode) -> AstNode:
    return node.children[1]


def is_constant_member(node: AstNode) -> bool:
    return node.attrs.get("prop_name") is not None


def call_callee(node: AstNode) -> AstNode:
    return node.children[0]


def call_args(node: AstNode) -> list[AstNode]:
    return node.children[1:]


def function_params(node: AstNode) -> list[AstNode]:
    return node.children[: node.attrs["param_count"]]


def function_body(node: AstNode) -> AstNode:
    return node.children[node.attrs["param_count"]]


def assign_nesting_ids(root: AstNode, start: int = 0) -> int:
    """Number nodes in deterministic pre-order; returns the next free id."""
    next_id = start
    for node in root.walk():
        node.node_id = next_id
        next_id += 1
    return next_id


def structural_equal(a: AstNode, b: AstNode) -> bool:
    """Same kinds, spans, attrs and child structure (ids ignored)."""
    if a.kind != b.kind or a.span != b.span or a.attrs != b.attrs:
        return False
    if len(a.children) != len(b.children):
        return False
    return all(structural_equal(x, y) for x, y in zip(a.children, b.children))
