"""Recursive-descent parser producing the normalized AST.

Covers the supported ECMAScript subset: ES modules and CommonJS scripts,
functions/arrows/classes/methods, object/array literals, template literals,
destructuring with defaults, spread/rest, `for`/`for..in`/`for..of`,
try/catch, optional chaining and nullish coalescing.  `eval`, `new Function`
and `with` parse but are flagged opaque for the analyses.

Automatic semicolon insertion follows the usual practical rules: a virtual
semicolon is accepted before `}`, at end of input, or when the offending
token sits on a new line; `return`/`throw`/`break`/`continue` are
newline-restricted.
"""

from __future__ import annotations

from .ast import AstNode, canonical_number
from .lexer import LexError, Token, tokenize


class ParseError(Exception):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


_ASSIGN_OPS = frozenset({
    "=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=",
    "&=", "|=", "^=", "&&=", "||=", "??=",
})

_BINARY_PRECEDENCE = {
    "??": 1, "||": 1, "&&": 2,
    "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6, "===": 6, "!==": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7, "instanceof": 7, "in": 7,
    "<<": 8, ">>": 8, ">>>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
    "**": 11,
}

_LOGICAL_OPS = frozenset({"&&", "||", "??"})

_UNARY_OPS = frozenset({"!", "~", "+", "-", "typeof", "void", "delete"})

_DECL_WORDS = frozenset({"var", "let", "const"})


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.no_in = False

    # -- token helpers -------------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        j = min(self.i + offset, len(self.tokens) - 1)
        return self.tokens[j]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.type != "eof":
            self.i += 1
        return tok

    def at(self, *punct: str) -> bool:
        return self.peek().is_punct(*punct)

    def at_word(self, *words: str) -> bool:
        return self.peek().is_word(*words)

    def eat(self, punct: str) -> bool:
        if self.at(punct):
            self.advance()
            return True
        return False

    def eat_word(self, word: str) -> bool:
        if self.at_word(word):
            self.advance()
            return True
        return False

    def expect(self, punct: str) -> Token:
        if not self.at(punct):
            tok = self.peek()
            raise ParseError(f"expected {punct!r}, found {tok.raw or tok.type!r}", tok.start)
        return self.advance()

    def expect_word(self, word: str) -> Token:
        if not self.at_word(word):
            tok = self.peek()
            raise ParseError(f"expected {word!r}, found {tok.raw or tok.type!r}", tok.start)
        return self.advance()

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok.type != "ident":
            raise ParseError(f"expected identifier, found {tok.raw or tok.type!r}", tok.start)
        return self.advance()

    def semicolon(self) -> int:
        """Consume a real or ASI-virtual semicolon; returns end offset."""
        tok = self.peek()
        if tok.is_punct(";"):
            self.advance()
            return tok.end
        if tok.type == "eof" or tok.is_punct("}") or tok.nl_before:
            return self.tokens[self.i - 1].end
        raise ParseError(f"expected ';', found {tok.raw or tok.type!r}", tok.start)

    # -- program ---------------------------------------------------------------

    def parse_program(self) -> AstNode:
        body: list[AstNode] = []
        is_module = False
        while self.peek().type != "eof":
            stmt = self.parse_statement()
            if stmt.kind in ("import-decl", "export-named", "export-default", "export-all"):
                is_module = True
            body.append(stmt)
        end = body[-1].end if body else 0
        node = AstNode("program", 0, end, body, {"source_type": "module" if is_module else "script"})
        _mark_write_targets(node)
        _flag_opaque_calls(node)
        return node

    # -- statements --------------------------------------------------------------

    def parse_statement(self) -> AstNode:
        tok = self.peek()
        if tok.is_punct("{"):
            return self.parse_block()
        if tok.is_punct(";"):
            self.advance()
            return AstNode("empty", tok.start, tok.end)
        if tok.type == "ident":
            word = tok.value
            if word in ("var", "const") or (word == "let" and self._let_is_decl()):
                decl = self.parse_var_decl()
                end = self.semicolon()
                decl.end = max(decl.end, end)
                return decl
            if word == "function":
                return self.parse_function(kind="declaration")
            if word == "async" and self.peek(1).is_word("function") and not self.peek(1).nl_before:
                return self.parse_function(kind="declaration")
            if word == "class":
                return self.parse_class(declaration=True)
            if word == "if":
                return self.parse_if()
            if word == "for":
                return self.parse_for()
            if word == "while":
                return self.parse_while()
            if word == "do":
                return self.parse_do_while()
            if word == "return":
                return self.parse_return()
            if word == "throw":
                return self.parse_throw()
            if word == "try":
                return self.parse_try()
            if word == "switch":
                return self.parse_switch()
            if word in ("break", "continue"):
                return self.parse_break_continue()
            if word == "debugger":
                self.advance()
                end = self.semicolon()
                return AstNode("debugger", tok.start, max(tok.end, end))
            if word == "with":
                return self.parse_with()
            if word == "import" and not self.peek(1).is_punct("(", "."):
                return self.parse_import()
            if word == "export":
                return self.parse_export()
            if self.peek(1).is_punct(":") and word not in ("true", "false", "null", "this"):
                self.advance()
                self.advance()
                body = self.parse_statement()
                return AstNode("labeled", tok.start, body.end, [body], {"label": word})
        expr = self.parse_expression()
        end = self.semicolon()
        return AstNode("expr-stmt", expr.start, max(expr.end, end), [expr])

    def _let_is_decl(self) -> bool:
        nxt = self.peek(1)
        return nxt.type == "ident" or nxt.is_punct("[", "{")

    def parse_block(self) -> AstNode:
        start = self.expect("{").start
        body: list[AstNode] = []
        while not self.at("}"):
            if self.peek().type == "eof":
                raise ParseError("unterminated block", start)
            body.append(self.parse_statement())
        end = self.expect("}").end
        return AstNode("block", start, end, body)

    def parse_var_decl(self) -> AstNode:
        kw = self.advance()
        declarators: list[AstNode] = []
        while True:
            pattern = self.parse_binding_target(no_default=True)
            init = None
            if self.eat("="):
                init = self.parse_assignment()
            children = [pattern] + ([init] if init else [])
            end = init.end if init else pattern.end
            declarators.append(
                AstNode("declarator", pattern.start, end, children, {"has_init": init is not None})
            )
            if not self.eat(","):
                break
        return AstNode(
            "var-decl", kw.start, declarators[-1].end, declarators, {"decl_kind": kw.value}
        )

    def parse_if(self) -> AstNode:
        start = self.expect_word("if").start
        self.expect("(")
        test = self.parse_expression()
        self.expect(")")
        consequent = self.parse_statement()
        children = [test, consequent]
        has_alt = False
        end = consequent.end
        if self.eat_word("else"):
            alternate = self.parse_statement()
            children.append(alternate)
            end = alternate.end
            has_alt = True
        return AstNode("if", start, end, children, {"has_alternate": has_alt})

    def parse_for(self) -> AstNode:
        start = self.expect_word("for").start
        is_await = self.eat_word("await")
        self.expect("(")
        init: AstNode | None = None
        left_is_decl = False
        if not self.at(";"):
            if self.at_word("var", "const") or (self.at_word("let") and self._let_is_decl()):
                kw = self.advance()
                pattern = self.parse_binding_target(no_default=True)
                if self.at_word("in", "of"):
                    kind = "for-in" if self.peek().value == "in" else "for-of"
                    self.advance()
                    decl = AstNode(
                        "var-decl", kw.start, pattern.end,
                        [AstNode("declarator", pattern.start, pattern.end, [pattern], {"has_init": False})],
                        {"decl_kind": kw.value},
                    )
                    return self._finish_for_each(kind, start, decl, True, is_await)
                declarators = []
                init_expr = None
                if self.eat("="):
                    init_expr = self.parse_assignment_no_in()
                children = [pattern] + ([init_expr] if init_expr else [])
                end = init_expr.end if init_expr else pattern.end
                declarators.append(
                    AstNode("declarator", pattern.start, end, children, {"has_init": init_expr is not None})
                )
                while self.eat(","):
                    p = self.parse_binding_target(no_default=True)
                    e = self.parse_assignment_no_in() if self.eat("=") else None
                    declarators.append(
                        AstNode("declarator", p.start, e.end if e else p.end,
                                [p] + ([e] if e else []), {"has_init": e is not None})
                    )
                init = AstNode("var-decl", kw.start, declarators[-1].end, declarators,
                               {"decl_kind": kw.value})
            else:
                init = self.parse_expression_no_in()
                if self.at_word("in", "of"):
                    kind = "for-in" if self.peek().value == "in" else "for-of"
                    self.advance()
                    target = _expr_to_pattern(init, assignment_target=True)
                    return self._finish_for_each(kind, start, target, False, is_await)
                left_is_decl = False
        self.expect(";")
        test = None if self.at(";") else self.parse_expression()
        self.expect(";")
        update = None if self.at(")") else self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        children = [c for c in (init, test, update) if c is not None] + [body]
        return AstNode("for", start, body.end, children, {
            "has_init": init is not None,
            "has_test": test is not None,
            "has_update": update is not None,
        })

    def _finish_for_each(
        self, kind: str, start: int, left: AstNode, left_is_decl: bool, is_await: bool
    ) -> AstNode:
        right = self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        attrs: dict = {"left_is_decl": left_is_decl}
        if kind == "for-of":
            attrs["is_await"] = is_await
        return AstNode(kind, start, body.end, [left, right, body], attrs)

    def parse_while(self) -> AstNode:
        start = self.expect_word("while").start
        self.expect("(")
        test = self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        return AstNode("while", start, body.end, [test, body])

    def parse_do_while(self) -> AstNode:
        start = self.expect_word("do").start
        body = self.parse_statement()
        self.expect_word("while")
        self.expect("(")
        test = self.parse_expression()
        end = self.expect(")").end
        self.eat(";")
        return AstNode("do-while", start, end, [body, test])

    def parse_return(self) -> AstNode:
        kw = self.expect_word("return")
        if self.at(";") or self.at("}") or self.peek().type == "eof" or self.peek().nl_before:
            end = self.semicolon()
            return AstNode("return", kw.start, max(kw.end, end), [], {"has_argument": False})
        arg = self.parse_expression()
        end = self.semicolon()
        return AstNode("return", kw.start, max(arg.end, end), [arg], {"has_argument": True})

    def parse_throw(self) -> AstNode:
        kw = self.expect_word("throw")
        if self.peek().nl_before:
            raise ParseError("newline after throw", kw.end)
        arg = self.parse_expression()
        end = self.semicolon()
        return AstNode("throw", kw.start, max(arg.end, end), [arg])

    def parse_try(self) -> AstNode:
        start = self.expect_word("try").start
        block = self.parse_block()
        children = [block]
        has_handler = has_finalizer = False
        end = block.end
        if self.at_word("catch"):
            cstart = self.advance().start
            param = None
            if self.eat("("):
                param = self.parse_binding_target()
                self.expect(")")
            cbody = self.parse_block()
            children.append(AstNode(
                "catch", cstart, cbody.end,
                ([param] if param else []) + [cbody], {"has_param": param is not None},
            ))
            has_handler = True
            end = cbody.end
        if self.eat_word("finally"):
            fin = self.parse_block()
            children.append(fin)
            has_finalizer = True
            end = fin.end
        if not has_handler and not has_finalizer:
            raise ParseError("try without catch or finally", start)
        return AstNode("try", start, end, children,
                       {"has_handler": has_handler, "has_finalizer": has_finalizer})

    def parse_switch(self) -> AstNode:
        start = self.expect_word("switch").start
        self.expect("(")
        disc = self.parse_expression()
        self.expect(")")
        self.expect("{")
        cases: list[AstNode] = []
        while not self.at("}"):
            if self.at_word("case"):
                cstart = self.advance().start
                test = self.parse_expression()
                self.expect(":")
                stmts = self._case_body()
                end = stmts[-1].end if stmts else test.end
                cases.append(AstNode("case", cstart, end, [test] + stmts, {"has_test": True}))
            elif self.at_word("default"):
                cstart = self.advance().start
                colon = self.expect(":")
                stmts = self._case_body()
                end = stmts[-1].end if stmts else colon.end
                cases.append(AstNode("case", cstart, end, stmts, {"has_test": False}))
            else:
                raise ParseError("expected case or default", self.peek().start)
        end = self.expect("}").end
        return AstNode("switch", start, end, [disc] + cases)

    def _case_body(self) -> list[AstNode]:
        stmts = []
        while not (self.at("}") or self.at_word("case") or self.at_word("default")):
            stmts.append(self.parse_statement())
        return stmts

    def parse_break_continue(self) -> AstNode:
        kw = self.advance()
        label = None
        if self.peek().type == "ident" and not self.peek().nl_before \
                and not self.at_word("case", "default"):
            if not self.at(";") and not self.at("}"):
                label = self.advance().value
        end = self.semicolon()
        return AstNode(str(kw.value), kw.start, max(kw.end, end), [], {"label": label})

    def parse_with(self) -> AstNode:
        start = self.expect_word("with").start
        self.expect("(")
        obj = self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        return AstNode("with", start, body.end, [obj, body], {"opaque": True})

    # -- modules -----------------------------------------------------------------

    def parse_import(self) -> AstNode:
        start = self.expect_word("import").start
        specifiers: list[list[str]] = []
        if self.peek().type == "string":
            source = self.advance().value
            end = self.semicolon()
            return AstNode("import-decl", start, end, [], {"source": source, "specifiers": []})
        if self.peek().type == "ident" and not self.at_word("from"):
            if not self.at("{") and not self.at("*"):
                local = self.expect_ident().value
                specifiers.append(["default", local])
                self.eat(",")
        if self.eat("*"):
            self.expect_word("as")
            specifiers.append(["*", self.expect_ident().value])
        elif self.eat("{"):
            while not self.at("}"):
                imported = self.advance()
                name = imported.value if imported.type == "ident" else str(imported.value)
                local = name
                if self.eat_word("as"):
                    local = self.expect_ident().value
                specifiers.append([name, local])
                if not self.eat(","):
                    break
            self.expect("}")
        self.expect_word("from")
        source = self.advance().value
        end = self.semicolon()
        return AstNode("import-decl", start, end, [], {"source": source, "specifiers": specifiers})

    def parse_export(self) -> AstNode:
        start = self.expect_word("export").start
        if self.eat_word("default"):
            if self.at_word("function", "async") or self.at_word("class"):
                decl = (self.parse_class(declaration=False) if self.at_word("class")
                        else self.parse_function(kind="declaration", allow_anonymous=True))
            else:
                decl = self.parse_assignment()
                self.semicolon()
            return AstNode("export-default", start, decl.end, [decl])
        if self.eat("*"):
            ns = None
            if self.eat_word("as"):
                ns = self.expect_ident().value
            self.expect_word("from")
            source = self.advance().value
            end = self.semicolon()
            return AstNode("export-all", start, end, [], {"source": source, "namespace": ns})
        if self.at("{"):
            self.advance()
            specifiers = []
            while not self.at("}"):
                local = self.expect_ident().value
                exported = local
                if self.eat_word("as"):
                    exported = self.expect_ident().value
                specifiers.append([local, exported])
                if not self.eat(","):
                    break
            self.expect("}")
            source = None
            if self.eat_word("from"):
                source = self.advance().value
            end = self.semicolon()
            return AstNode("export-named", start, end, [],
                           {"specifiers": specifiers, "source": source})
        if self.at_word("var", "let", "const"):
            decl = self.parse_var_decl()
            end = self.semicolon()
            decl.end = max(decl.end, end)
            names = [_pattern_names(d.children[0]) for d in decl.children]
            specifiers = [[n, n] for group in names for n in group]
        elif self.at_word("function", "async"):
            decl = self.parse_function(kind="declaration")
            specifiers = [[decl.attrs["name"], decl.attrs["name"]]]
        elif self.at_word("class"):
            decl = self.parse_class(declaration=True)
            specifiers = [[decl.attrs["name"], decl.attrs["name"]]]
        else:
            raise ParseError("unsupported export form", self.peek().start)
        return AstNode("export-named", start, decl.end, [decl],
                       {"specifiers": specifiers, "source": None})

    # -- functions & classes ----------------------------------------------------

    def parse_function(self, kind: str, allow_anonymous: bool = False) -> AstNode:
        start = self.peek().start
        is_async = self.eat_word("async")
        self.expect_word("function")
        is_generator = self.eat("*")
        name = None
        if self.peek().type == "ident" and not self.at("("):
            name = self.expect_ident().value
        elif kind == "declaration" and not allow_anonymous:
            raise ParseError("function declaration requires a name", self.peek().start)
        params = self.parse_params()
        body = self.parse_block()
        children = params + [body]
        return AstNode("function", start, body.end, children, {
            "name": name,
            "param_count": len(params),
            "is_arrow": False,
            "is_async": is_async,
            "is_generator": is_generator,
            "is_expression_body": False,
            "function_kind": kind,
            "opaque": False,
        })

    def parse_params(self) -> list[AstNode]:
        self.expect("(")
        params: list[AstNode] = []
        while not self.at(")"):
            if self.at("..."):
                rstart = self.advance().start
                target = self.parse_binding_target(no_default=True)
                params.append(AstNode("rest-element", rstart, target.end, [target]))
            else:
                params.append(self.parse_binding_target())
            if not self.eat(","):
                break
        self.expect(")")
        return params

    def parse_binding_target(self, no_default: bool = False) -> AstNode:
        tok = self.peek()
        if tok.is_punct("{"):
            target = self.parse_object_pattern()
        elif tok.is_punct("["):
            target = self.parse_array_pattern()
        elif tok.type == "ident":
            self.advance()
            target = AstNode("identifier", tok.start, tok.end, [], {"name": tok.value})
        else:
            raise ParseError("expected binding target", tok.start)
        if not no_default and self.eat("="):
            default = self.parse_assignment()
            return AstNode("default-pattern", target.start, default.end, [target, default])
        return target

    def parse_object_pattern(self) -> AstNode:
        start = self.expect("{").start
        props: list[AstNode] = []
        while not self.at("}"):
            if self.at("..."):
                rstart = self.advance().start
                target = self.parse_binding_target(no_default=True)
                props.append(AstNode("rest-element", rstart, target.end, [target]))
            else:
                props.append(self._parse_pattern_property())
            if not self.eat(","):
                break
        end = self.expect("}").end
        return AstNode("object-pattern", start, end, props)

    def _parse_pattern_property(self) -> AstNode:
        key_tok = self.peek()
        computed = False
        key_node = None
        if key_tok.is_punct("["):
            self.advance()
            key_node = self.parse_assignment()
            self.expect("]")
            key_name = _constant_property_name(key_node)
            computed = True
            kstart, kend = key_tok.start, key_node.end
        else:
            self.advance()
            if key_tok.type == "string":
                key_name = str(key_tok.value)
            elif key_tok.type == "num":
                key_name = canonical_number(float(key_tok.value))
            else:
                key_name = str(key_tok.value)
            kstart, kend = key_tok.start, key_tok.end
        shorthand = not self.at(":")
        if shorthand:
            if key_tok.type != "ident":
                raise ParseError("invalid shorthand pattern key", key_tok.start)
            value = AstNode("identifier", key_tok.start, key_tok.end, [], {"name": key_tok.value})
            if self.eat("="):
                default = self.parse_assignment()
                value = AstNode("default-pattern", value.start, default.end, [value, default])
        else:
            self.expect(":")
            value = self.parse_binding_target()
        children = ([key_node] if key_node else []) + [value]
        return AstNode("pattern-property", kstart, value.end, children, {
            "key_name": key_name, "computed": computed, "shorthand": shorthand,
        })

    def parse_array_pattern(self) -> AstNode:
        start = self.expect("[").start
        elements: list[AstNode] = []
        while not self.at("]"):
            if self.at(","):
                hole = self.advance()
                elements.append(AstNode("hole", hole.start, hole.start))
                continue
            if self.at("..."):
                rstart = self.advance().start
                target = self.parse_binding_target(no_default=True)
                elements.append(AstNode("rest-element", rstart, target.end, [target]))
            else:
                elements.append(self.parse_binding_target())
            if not self.eat(","):
                break
        end = self.expect("]").end
        return AstNode("array-pattern", start, end, elements)

    def parse_class(self, declaration: bool) -> AstNode:
        start = self.expect_word("class").start
        name = None
        if self.peek().type == "ident" and not self.at_word("extends") and not self.at("{"):
            name = self.expect_ident().value
        elif declaration:
            raise ParseError("class declaration requires a name", self.peek().start)
        superclass = None
        if self.eat_word("extends"):
            superclass = self.parse_unary_chain()
        self.expect("{")
        members: list[AstNode] = []
        while not self.at("}"):
            if self.eat(";"):
                continue
            members.append(self.parse_class_member())
        end = self.expect("}").end
        children = ([superclass] if superclass else []) + members
        return AstNode("class", start, end, children,
                       {"name": name, "has_superclass": superclass is not None})

    def parse_class_member(self) -> AstNode:
        start = self.peek().start
        is_static = False
        if self.at_word("static") and not self.peek(1).is_punct("(", "="):
            self.advance()
            is_static = True
        method_kind = "method"
        is_async = is_generator = False
        if self.at_word("async") and not self.peek(1).is_punct("(", "=", ";", "}"):
            self.advance()
            is_async = True
        if self.at("*"):
            self.advance()
            is_generator = True
        if self.at_word("get", "set") and not self.peek(1).is_punct("(", "=", ";", "}"):
            method_kind = "getter" if self.peek().value == "get" else "setter"
            self.advance()
        key_node, key_name, computed, kend = self._parse_member_key()
        if self.at("("):
            if method_kind == "method" and key_name == "constructor":
                method_kind = "constructor"
            fn = self._finish_method(start, key_name, method_kind, is_async, is_generator)
            children = ([key_node] if key_node else []) + [fn]
            return AstNode("method-definition", start, fn.end, children, {
                "key_name": key_name, "computed": computed,
                "static": is_static, "method_kind": method_kind,
            })
        value = None
        end = kend
        if self.eat("="):
            value = self.parse_assignment()
            end = value.end
        send = self.semicolon()
        children = ([key_node] if key_node else []) + ([value] if value else [])
        return AstNode("class-field", start, max(end, send), children, {
            "key_name": key_name, "computed": computed,
            "static": is_static, "has_value": value is not None,
        })

    def _parse_member_key(self) -> tuple[AstNode | None, str | None, bool, int]:
        tok = self.peek()
        if tok.is_punct("["):
            self.advance()
            key = self.parse_assignment()
            end = self.expect("]").end
            return key, _constant_property_name(key), True, end
        self.advance()
        if tok.type == "string":
            return None, str(tok.value), False, tok.end
        if tok.type == "num":
            return None, canonical_number(float(tok.value)), False, tok.end
        return None, str(tok.value), False, tok.end

    def _finish_method(
        self, start: int, name: str | None, method_kind: str,
        is_async: bool, is_generator: bool,
    ) -> AstNode:
        params = self.parse_params()
        body = self.parse_block()
        return AstNode("function", start, body.end, params + [body], {
            "name": name,
            "param_count": len(params),
            "is_arrow": False,
            "is_async": is_async,
            "is_generator": is_generator,
            "is_expression_body": False,
            "function_kind": method_kind,
            "opaque": False,
        })

    # -- expressions --------------------------------------------------------------

    def parse_expression(self) -> AstNode:
        first = self.parse_assignment()
        if not self.at(","):
            return first
        exprs = [first]
        while self.eat(","):
            exprs.append(self.parse_assignment())
        return AstNode("sequence", first.start, exprs[-1].end, exprs)

    def parse_expression_no_in(self) -> AstNode:
        saved, self.no_in = self.no_in, True
        try:
            return self.parse_expression()
        finally:
            self.no_in = saved

    def parse_assignment_no_in(self) -> AstNode:
        saved, self.no_in = self.no_in, True
        try:
            return self.parse_assignment()
        finally:
            self.no_in = saved

    def parse_assignment(self) -> AstNode:
        arrow = self._try_parse_arrow()
        if arrow is not None:
            return arrow
        if self.at_word("yield"):
            return self.parse_yield()
        left = self.parse_conditional()
        tok = self.peek()
        if tok.type == "punct" and tok.value in _ASSIGN_OPS:
            op = str(tok.value)
            self.advance()
            target = _expr_to_pattern(left, assignment_target=True) if op == "=" else left
            value = self.parse_assignment()
            return AstNode("assignment", left.start, value.end, [target, value], {"op": op})
        return left

    def parse_yield(self) -> AstNode:
        kw = self.expect_word("yield")
        delegate = self.eat("*")
        if (self.at(")") or self.at("]") or self.at("}") or self.at(";") or self.at(",")
                or self.peek().type == "eof" or self.peek().nl_before):
            return AstNode("yield", kw.start, kw.end, [], {"delegate": delegate})
        arg = self.parse_assignment()
        return AstNode("yield", kw.start, arg.end, [arg], {"delegate": delegate})

    def _try_parse_arrow(self) -> AstNode | None:
        tok = self.peek()
        is_async = False
        j = self.i
        if tok.is_word("async") and not self.peek(1).nl_before \
                and (self.peek(1).type == "ident" or self.peek(1).is_punct("(")) \
                and not self.peek(1).is_word("function"):
            is_async = True
            j += 1
        head = self.tokens[j]
        if head.type == "ident" and self.tokens[min(j + 1, len(self.tokens) - 1)].is_punct("=>"):
            self.i = j
            start = tok.start
            pstart = self.advance()
            param = AstNode("identifier", pstart.start, pstart.end, [], {"name": pstart.value})
            self.expect("=>")
            return self._finish_arrow(start, [param], is_async)
        if head.is_punct("(") and self._paren_closes_into_arrow(j):
            self.i = j
            start = tok.start
            params = self.parse_params()
            self.expect("=>")
            return self._finish_arrow(start, params, is_async)
        return None

    def _paren_closes_into_arrow(self, open_index: int) -> bool:
        depth = 0
        k = open_index
        while k < len(self.tokens):
            t = self.tokens[k]
            if t.is_punct("(", "[", "{"):
                depth += 1
            elif t.is_punct(")", "]", "}"):
                depth -= 1
                if depth == 0:
                    nxt = self.tokens[min(k + 1, len(self.tokens) - 1)]
                    return nxt.is_punct("=>")
            elif t.type == "eof":
                return False
            k += 1
        return False

    def _finish_arrow(self, start: int, params: list[AstNode], is_async: bool) -> AstNode:
        saved, self.no_in = self.no_in, False
        try:
            if self.at("{"):
                body = self.parse_block()
                expr_body = False
            else:
                body = self.parse_assignment()
                expr_body = True
        finally:
            self.no_in = saved
        return AstNode("function", start, body.end, params + [body], {
            "name": None,
            "param_count": len(params),
            "is_arrow": True,
            "is_async": is_async,
            "is_generator": False,
            "is_expression_body": expr_body,
            "function_kind": "arrow",
            "opaque": False,
        })

    def parse_conditional(self) -> AstNode:
        test = self.parse_binary(0)
        if not self.at("?"):
            return test
        self.advance()
        saved, self.no_in = self.no_in, False
        try:
            consequent = self.parse_assignment()
            self.expect(":")
        finally:
            self.no_in = saved
        alternate = self.parse_assignment()
        return AstNode("conditional", test.start, alternate.end, [test, consequent, alternate])

    def parse_binary(self, min_prec: int) -> AstNode:
        left = self.parse_unary_chain()
        while True:
            tok = self.peek()
            op = None
            if tok.type == "punct" and tok.value in _BINARY_PRECEDENCE:
                op = str(tok.value)
            elif tok.is_word("instanceof"):
                op = "instanceof"
            elif tok.is_word("in") and not self.no_in:
                op = "in"
            if op is None:
                return left
            prec = _BINARY_PRECEDENCE[op]
            if prec < min_prec:
                return left
            self.advance()
            right = self.parse_binary(prec if op == "**" else prec + 1)
            kind = "logical" if op in _LOGICAL_OPS else "binary"
            left = AstNode(kind, left.start, right.end, [left, right], {"op": op})

    def parse_unary_chain(self) -> AstNode:
        tok = self.peek()
        if tok.type == "punct" and tok.value in ("!", "~", "+", "-"):
            self.advance()
            arg = self.parse_unary_chain()
            return AstNode("unary", tok.start, arg.end, [arg], {"op": tok.value})
        if tok.is_word("typeof", "void", "delete"):
            self.advance()
            arg = self.parse_unary_chain()
            return AstNode("unary", tok.start, arg.end, [arg], {"op": tok.value})
        if tok.is_word("await"):
            self.advance()
            arg = self.parse_unary_chain()
            return AstNode("await", tok.start, arg.end, [arg])
        if tok.is_punct("++", "--"):
            self.advance()
            arg = self.parse_unary_chain()
            return AstNode("update", tok.start, arg.end, [arg], {"op": tok.value, "prefix": True})
        expr = self.parse_postfix()
        nxt = self.peek()
        if nxt.is_punct("++", "--") and not nxt.nl_before:
            self.advance()
            return AstNode("update", expr.start, nxt.end, [expr], {"op": nxt.value, "prefix": False})
        return expr

    def parse_postfix(self) -> AstNode:
        if self.at_word("new"):
            expr = self.parse_new()
        else:
            expr = self.parse_primary()
        return self._member_call_chain(expr, allow_calls=True)

    def parse_new(self) -> AstNode:
        kw = self.expect_word("new")
        if self.at("."):
            self.advance()
            target = self.expect_ident()
            return AstNode("identifier", kw.start, target.end, [], {"name": "new.target"})
        if self.at_word("new"):
            callee: AstNode = self.parse_new()
        else:
            callee = self._member_call_chain(self.parse_primary(), allow_calls=False)
        args: list[AstNode] = []
        spread_args: list[int] = []
        end = callee.end
        if self.at("("):
            args, spread_args, end = self._parse_arguments()
        return AstNode("new", kw.start, end, [callee] + args, {"spread_args": spread_args})

    def _member_call_chain(self, expr: AstNode, allow_calls: bool) -> AstNode:
        while True:
            tok = self.peek()
            if tok.is_punct("."):
                self.advance()
                prop = self.advance()
                if prop.type not in ("ident", "num"):
                    raise ParseError("expected property name", prop.start)
                pname = (canonical_number(float(prop.value)) if prop.type == "num"
                         else str(prop.value))
                prop_node = AstNode("identifier", prop.start, prop.end, [], {"name": pname})
                expr = AstNode("member-read", expr.start, prop.end, [expr, prop_node], {
                    "computed": False, "prop_name": pname, "optional": False,
                })
            elif tok.is_punct("?."):
                self.advance()
                if self.at("("):
                    if not allow_calls:
                        return expr
                    args, spread_args, end = self._parse_arguments()
                    expr = AstNode("call", expr.start, end, [expr] + args,
                                   {"optional": True, "spread_args": spread_args})
                elif self.at("["):
                    expr = self._finish_computed_member(expr, optional=True)
                else:
                    prop = self.expect_ident()
                    prop_node = AstNode("identifier", prop.start, prop.end, [],
                                        {"name": prop.value})
                    expr = AstNode("member-read", expr.start, prop.end, [expr, prop_node], {
                        "computed": False, "prop_name": prop.value, "optional": True,
                    })
            elif tok.is_punct("["):
                expr = self._finish_computed_member(expr, optional=False)
            elif tok.is_punct("(") and allow_calls:
                args, spread_args, end = self._parse_arguments()
                expr = AstNode("call", expr.start, end, [expr] + args,
                               {"optional": False, "spread_args": spread_args})
            elif tok.type == "template" and tok.template_kind in ("full", "head"):
                template = self.parse_template()
                expr = AstNode("tagged-template", expr.start, template.end, [expr, template])
            else:
                return expr

    def _finish_computed_member(self, obj: AstNode, optional: bool) -> AstNode:
        saved, self.no_in = self.no_in, False
        self.expect("[")
        try:
            prop = self.parse_expression()
        finally:
            self.no_in = saved
        end = self.expect("]").end
        prop_name = _constant_property_name(prop)
        return AstNode("member-read", obj.start, end, [obj, prop], {
            "computed": True, "prop_name": prop_name, "optional": optional,
        })

    def _parse_arguments(self) -> tuple[list[AstNode], list[int], int]:
        self.expect("(")
        saved, self.no_in = self.no_in, False
        args: list[AstNode] = []
        spread_args: list[int] = []
        try:
            while not self.at(")"):
                if self.at("..."):
                    sstart = self.advance().start
                    arg = self.parse_assignment()
                    spread_args.append(len(args))
                    args.append(AstNode("spread", sstart, arg.end, [arg]))
                else:
                    args.append(self.parse_assignment())
                if not self.eat(","):
                    break
            end = self.expect(")").end
        finally:
            self.no_in = saved
        return args, spread_args, end

    def parse_template(self) -> AstNode:
        head = self.advance()
        quasis = [str(head.value)]
        exprs: list[AstNode] = []
        if head.template_kind == "full":
            return AstNode("template-literal", head.start, head.end, [], {"quasis": quasis})
        saved, self.no_in = self.no_in, False
        try:
            while True:
                exprs.append(self.parse_expression())
                chunk = self.advance()
                if chunk.type != "template":
                    raise ParseError("malformed template literal", chunk.start)
                quasis.append(str(chunk.value))
                if chunk.template_kind == "tail":
                    return AstNode("template-literal", head.start, chunk.end, exprs,
                                   {"quasis": quasis})
        finally:
            self.no_in = saved

    def parse_primary(self) -> AstNode:
        tok = self.peek()
        if tok.type == "num":
            self.advance()
            return AstNode("literal", tok.start, tok.end, [], {
                "value": tok.value, "raw": tok.raw, "literal_kind": "number",
            })
        if tok.type == "string":
            self.advance()
            return AstNode("literal", tok.start, tok.end, [], {
                "value": tok.value, "raw": tok.raw, "literal_kind": "string",
            })
        if tok.type == "regex":
            self.advance()
            return AstNode("literal", tok.start, tok.end, [], {
                "value": tok.raw, "raw": tok.raw, "literal_kind": "regexp",
            })
        if tok.type == "template":
            return self.parse_template()
        if tok.is_punct("("):
            self.advance()
            saved, self.no_in = self.no_in, False
            try:
                expr = self.parse_expression()
            finally:
                self.no_in = saved
            self.expect(")")
            return expr
        if tok.is_punct("["):
            return self.parse_array_literal()
        if tok.is_punct("{"):
            return self.parse_object_literal()
        if tok.type == "ident":
            word = tok.value
            if word == "function" or (word == "async" and self.peek(1).is_word("function")):
                return self.parse_function(kind="expression", allow_anonymous=True)
            if word == "class":
                return self.parse_class(declaration=False)
            if word == "this":
                self.advance()
                return AstNode("this", tok.start, tok.end)
            if word == "super":
                self.advance()
                return AstNode("super", tok.start, tok.end)
            if word in ("true", "false"):
                self.advance()
                return AstNode("literal", tok.start, tok.end, [], {
                    "value": word == "true", "raw": tok.raw, "literal_kind": "boolean",
                })
            if word == "null":
                self.advance()
                return AstNode("literal", tok.start, tok.end, [], {
                    "value": None, "raw": tok.raw, "literal_kind": "null",
                })
            if word == "import":
                self.advance()
                return AstNode("identifier", tok.start, tok.end, [], {"name": "import"})
            self.advance()
            return AstNode("identifier", tok.start, tok.end, [], {"name": word})
        raise ParseError(f"unexpected token {tok.raw or tok.type!r}", tok.start)

    def parse_array_literal(self) -> AstNode:
        start = self.expect("[").start
        saved, self.no_in = self.no_in, False
        elements: list[AstNode] = []
        try:
            while not self.at("]"):
                if self.at(","):
                    hole = self.advance()
                    elements.append(AstNode("hole", hole.start, hole.start))
                    continue
                if self.at("..."):
                    sstart = self.advance().start
                    arg = self.parse_assignment()
                    elements.append(AstNode("spread", sstart, arg.end, [arg]))
                else:
                    elements.append(self.parse_assignment())
                if not self.eat(","):
                    break
            end = self.expect("]").end
        finally:
            self.no_in = saved
        return AstNode("array-literal", start, end, elements)

    def parse_object_literal(self) -> AstNode:
        start = self.expect("{").start
        saved, self.no_in = self.no_in, False
        props: list[AstNode] = []
        try:
            while not self.at("}"):
                props.append(self._parse_object_property())
                if not self.eat(","):
                    break
            end = self.expect("}").end
        finally:
            self.no_in = saved
        return AstNode("object-literal", start, end, props)

    def _parse_object_property(self) -> AstNode:
        tok = self.peek()
        if tok.is_punct("..."):
            self.advance()
            arg = self.parse_assignment()
            return AstNode("property", tok.start, arg.end, [arg], {
                "key_name": None, "computed": False, "shorthand": False,
                "property_kind": "spread",
            })
        is_async = is_generator = False
        property_kind = "init"
        start = tok.start
        if tok.is_word("async") and not self.peek(1).is_punct(":", "(", ",", "}", "="):
            self.advance()
            is_async = True
        if self.at("*"):
            self.advance()
            is_generator = True
        if self.at_word("get", "set") and not self.peek(1).is_punct(":", "(", ",", "}", "="):
            property_kind = "getter" if self.peek().value == "get" else "setter"
            self.advance()
        key_node, key_name, computed, kend = self._parse_member_key()
        if self.at("("):
            fn = self._finish_method(start, key_name,
                                     property_kind if property_kind != "init" else "method",
                                     is_async, is_generator)
            children = ([key_node] if key_node else []) + [fn]
            return AstNode("property", start, fn.end, children, {
                "key_name": key_name, "computed": computed, "shorthand": False,
                "property_kind": property_kind if property_kind != "init" else "method",
            })
        if property_kind != "init":
            raise ParseError("accessor property requires a body", self.peek().start)
        if self.at(":"):
            self.advance()
            value = self.parse_assignment()
            children = ([key_node] if key_node else []) + [value]
            return AstNode("property", start, value.end, children, {
                "key_name": key_name, "computed": computed, "shorthand": False,
                "property_kind": "init",
            })
        # shorthand `{a}` or shorthand-with-default `{a = 1}` (pattern position)
        value = AstNode("identifier", tok.start, tok.end, [], {"name": str(tok.value)})
        end = value.end
        if self.eat("="):
            default = self.parse_assignment()
            value = AstNode("default-pattern", value.start, default.end, [value, default])
            end = default.end
        return AstNode("property", start, end, [value], {
            "key_name": key_name, "computed": False, "shorthand": True,
            "property_kind": "init",
        })


# -- pattern conversion & finalize passes -------------------------------------


def _pattern_names(pattern: AstNode) -> list[str]:
    """Collect the binding identifiers a pattern introduces, in source order."""
    names: list[str] = []

    def visit(node: AstNode) -> None:
        if node.kind == "identifier":
            names.append(node.attrs["name"])
        elif node.kind == "pattern-property":
            visit(node.children[-1])
        elif node.kind in ("object-pattern", "array-pattern"):
            for child in node.children:
                visit(child)
        elif node.kind in ("rest-element", "default-pattern"):
            visit(node.children[0])

    visit(pattern)
    return names


def _constant_property_name(expr: AstNode) -> str | None:
    if expr.kind == "literal":
        lk = expr.attrs["literal_kind"]
        if lk == "string":
            return str(expr.attrs["value"])
        if lk == "number":
            return canonical_number(float(expr.attrs["value"]))
    if expr.kind == "template-literal" and not expr.children:
        return expr.attrs["quasis"][0]
    if expr.kind == "unary" and expr.attrs["op"] == "-" \
            and expr.children[0].kind == "literal" \
            and expr.children[0].attrs["literal_kind"] == "number":
        return canonical_number(-float(expr.children[0].attrs["value"]))
    return None


def _expr_to_pattern(expr: AstNode, assignment_target: bool) -> AstNode:
    """Reinterpret an already-parsed expression as an assignment target."""
    if expr.kind in ("identifier", "member-read", "member-write", "object-pattern",
                     "array-pattern", "default-pattern", "rest-element", "hole"):
        return expr
    if expr.kind == "assignment" and expr.attrs["op"] == "=":
        inner = _expr_to_pattern(expr.children[0], assignment_target)
        return AstNode("default-pattern", expr.start, expr.end, [inner, expr.children[1]])
    if expr.kind == "object-literal":
        props = []
        for p in expr.children:
            if p.attrs.get("property_kind") == "spread":
                props.append(AstNode("rest-element", p.start, p.end,
                                     [_expr_to_pattern(p.children[0], assignment_target)]))
                continue
            key_children = p.children[:-1]
            value = _expr_to_pattern(p.children[-1], assignment_target)
            props.append(AstNode("pattern-property", p.start, p.end, key_children + [value], {
                "key_name": p.attrs["key_name"], "computed": p.attrs["computed"],
                "shorthand": p.attrs["shorthand"],
            }))
        return AstNode("object-pattern", expr.start, expr.end, props)
    if expr.kind == "array-literal":
        elements = []
        for el in expr.children:
            if el.kind == "spread":
                elements.append(AstNode("rest-element", el.start, el.end,
                                        [_expr_to_pattern(el.children[0], assignment_target)]))
            else:
                elements.append(_expr_to_pattern(el, assignment_target))
        return AstNode("array-pattern", expr.start, expr.end, elements)
    if assignment_target:
        return expr  # calls etc. appear in sloppy-mode code; leave as-is
    raise ParseError(f"invalid binding pattern ({expr.kind})", expr.start)


def _mark_write_targets(root: AstNode) -> None:
    """Flip member accesses in write position to `member-write`."""

    def mark(node: AstNode, also_reads: bool) -> None:
        if node.kind == "member-read":
            node.kind = "member-write"
            node.attrs["also_reads"] = also_reads
        elif node.kind in ("object-pattern", "array-pattern"):
            for child in node.children:
                mark(child, also_reads)
        elif node.kind == "pattern-property":
            mark(node.children[-1], also_reads)
        elif node.kind in ("rest-element", "spread"):
            mark(node.children[0], also_reads)
        elif node.kind == "default-pattern":
            mark(node.children[0], also_reads)

    for node in root.walk():
        if node.kind == "assignment":
            mark(node.children[0], also_reads=node.attrs["op"] != "=")
        elif node.kind == "update":
            mark(node.children[0], also_reads=True)
        elif node.kind in ("for-in", "for-of") and not node.attrs["left_is_decl"]:
            mark(node.children[0], also_reads=False)


def _flag_opaque_calls(root: AstNode) -> None:
    for node in root.walk():
        if node.kind == "call":
            callee = node.children[0]
            if callee.kind == "identifier" and callee.attrs["name"] == "eval":
                node.attrs["opaque"] = True
        elif node.kind == "new":
            callee = node.children[0]
            if callee.kind == "identifier" and callee.attrs["name"] == "Function":
                node.attrs["opaque"] = True


def parse(text: str) -> AstNode:
    """Parse a source text into a normalized `program` node."""
    return Parser(text).parse_program()


__all__ = ["parse", "Parser", "ParseError", "LexError"]
