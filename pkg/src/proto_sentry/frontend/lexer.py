"""ECMAScript tokenizer.

Produces a flat token list with byte spans and newline flags (the parser's
automatic-semicolon-insertion needs the latter).  Template literals are
split into head/middle/tail chunks around their substitutions, tracked with
a brace-depth stack so ``}`` correctly resumes template scanning.

The regex-vs-division ambiguity is resolved with the usual previous-token
heuristic; ``(a)/re/i`` style inputs where a regex directly follows ``)``
are lexed as division, which is the one known deviation from the grammar.
"""

from __future__ import annotations

from dataclasses import dataclass


class LexError(Exception):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


@dataclass
class Token:
    type: str  # "ident" | "num" | "string" | "regex" | "template" | "punct" | "eof"
    value: str | float
    start: int
    end: int
    nl_before: bool = False
    template_kind: str | None = None  # "full" | "head" | "middle" | "tail"
    raw: str = ""

    def is_punct(self, *values: str) -> bool:
        return self.type == "punct" and self.value in values

    def is_word(self, *values: str) -> bool:
        return self.type == "ident" and self.value in values


PUNCTUATORS = [
    ">>>=",
    "...", "===", "!==", "**=", "<<=", ">>=", "&&=", "||=", "??=", ">>>",
    "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "?.", "++", "--", "**",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
    "{", "}", "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*", "/",
    "%", "&", "|", "^", "!", "~", "?", ":", "=", ".", "@",
]

# After these words a `/` starts a regular expression, not division.
_REGEX_AFTER_WORDS = frozenset({
    "return", "typeof", "instanceof", "in", "of", "new", "delete", "void",
    "throw", "do", "else", "case", "yield", "await",
})

_ESCAPES = {"b": "\b", "f": "\f", "n": "\n", "r": "\r", "t": "\t", "v": "\v", "0": "\0"}

_LINE_TERMINATORS = "\n\r  "


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$#"


def _is_ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


class Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[Token] = []
        self.nl_pending = False
        # Brace bookkeeping for template substitutions: each entry is the
        # count of `{` opened since the enclosing `${`.
        self.template_stack: list[int] = []

    def tokenize(self) -> list[Token]:
        text = self.text
        if text.startswith("#!"):
            eol = text.find("\n")
            self.pos = len(text) if eol < 0 else eol
        while True:
            self._skip_trivia()
            if self.pos >= len(text):
                self._emit(Token("eof", "", self.pos, self.pos))
                return self.tokens
            self._scan_token()

    # -- trivia ------------------------------------------------------------

    def _skip_trivia(self) -> None:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch in _LINE_TERMINATORS:
                self.nl_pending = True
                self.pos += 1
            elif ch.isspace():
                self.pos += 1
            elif ch == "/" and text.startswith("//", self.pos):
                nl = self._find_line_end(self.pos)
                self.pos = nl
            elif ch == "/" and text.startswith("/*", self.pos):
                end = text.find("*/", self.pos + 2)
                if end < 0:
                    raise LexError("unterminated block comment", self.pos)
                if any(t in text[self.pos:end] for t in _LINE_TERMINATORS):
                    self.nl_pending = True
                self.pos = end + 2
            else:
                return

    def _find_line_end(self, start: int) -> int:
        text = self.text
        i = start
        while i < len(text) and text[i] not in _LINE_TERMINATORS:
            i += 1
        return i

    # -- dispatch ----------------------------------------------------------

    def _scan_token(self) -> None:
        ch = self.text[self.pos]
        if _is_ident_start(ch):
            self._scan_ident()
        elif ch.isdigit() or (ch == "." and self._peek_is_digit(self.pos + 1)):
            self._scan_number()
        elif ch in "'\"":
            self._scan_string(ch)
        elif ch == "`":
            self._scan_template(self.pos)
        elif ch == "}" and self.template_stack and self.template_stack[-1] == 0:
            self.template_stack.pop()
            self._scan_template(self.pos)  # resumes as middle/tail chunk
        elif ch == "/" and self._regex_allowed():
            self._scan_regex()
        else:
            self._scan_punct()

    def _peek_is_digit(self, i: int) -> bool:
        return i < len(self.text) and self.text[i].isdigit()

    def _emit(self, token: Token) -> None:
        token.nl_before = self.nl_pending
        token.raw = self.text[token.start:token.end]
        self.nl_pending = False
        self.tokens.append(token)

    # -- scanners ----------------------------------------------------------

    def _scan_ident(self) -> None:
        start = self.pos
        text = self.text
        self.pos += 1
        while self.pos < len(text) and _is_ident_part(text[self.pos]):
            self.pos += 1
        self._emit(Token("ident", text[start:self.pos], start, self.pos))

    def _scan_number(self) -> None:
        start = self.pos
        text = self.text
        n = len(text)
        i = self.pos
        if text[i] == "0" and i + 1 < n and text[i + 1] in "xXoObB":
            base = {"x": 16, "o": 8, "b": 2}[text[i + 1].lower()]
            i += 2
            digits_start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            raw_digits = text[digits_start:i].replace("_", "")
            is_bigint = raw_digits.endswith("n")
            if is_bigint:
                raw_digits = raw_digits[:-1]
            try:
                value = float(int(raw_digits, base))
            except ValueError:
                raise LexError("malformed numeric literal", start) from None
        else:
            while i < n and (text[i].isdigit() or text[i] == "_"):
                i += 1
            if i < n and text[i] == ".":
                i += 1
                while i < n and (text[i].isdigit() or text[i] == "_"):
                    i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    i = j
                    while i < n and text[i].isdigit():
                        i += 1
            is_bigint = i < n and text[i] == "n"
            raw = text[start:i].replace("_", "")
            try:
                value = float(raw)
            except ValueError:
                raise LexError("malformed numeric literal", start) from None
            if is_bigint:
                i += 1
        self.pos = i
        tok = Token("num", value, start, self.pos)
        self._emit(tok)

    def _scan_string(self, quote: str) -> None:
        start = self.pos
        text = self.text
        i = self.pos + 1
        out: list[str] = []
        while True:
            if i >= len(text):
                raise LexError("unterminated string literal", start)
            ch = text[i]
            if ch == quote:
                i += 1
                break
            if ch in _LINE_TERMINATORS:
                raise LexError("newline in string literal", i)
            if ch == "\\":
                i, piece = self._scan_escape(i)
                out.append(piece)
            else:
                out.append(ch)
                i += 1
        self.pos = i
        self._emit(Token("string", "".join(out), start, self.pos))

    def _scan_escape(self, i: int) -> tuple[int, str]:
        text = self.text
        if i + 1 >= len(text):
            raise LexError("bad escape", i)
        esc = text[i + 1]
        if esc in _ESCAPES:
            return i + 2, _ESCAPES[esc]
        if esc == "x" and i + 3 < len(text):
            try:
                return i + 4, chr(int(text[i + 2:i + 4], 16))
            except ValueError:
                raise LexError("bad hex escape", i) from None
        if esc == "u":
            if i + 2 < len(text) and text[i + 2] == "{":
                close = text.find("}", i + 3)
                if close < 0:
                    raise LexError("bad unicode escape", i)
                try:
                    return close + 1, chr(int(text[i + 3:close], 16))
                except ValueError:
                    raise LexError("bad unicode escape", i) from None
            try:
                return i + 6, chr(int(text[i + 2:i + 6], 16))
            except ValueError:
                raise LexError("bad unicode escape", i) from None
        if esc in _LINE_TERMINATORS:
            return i + 2, ""  # line continuation
        return i + 2, esc

    def _scan_template(self, start: int) -> None:
        """Scan a template chunk starting at ` or at a substitution-closing }."""
        text = self.text
        opener = text[start]
        i = start + 1
        out: list[str] = []
        while True:
            if i >= len(text):
                raise LexError("unterminated template literal", start)
            ch = text[i]
            if ch == "`":
                i += 1
                kind = "full" if opener == "`" else "tail"
                break
            if ch == "$" and i + 1 < len(text) and text[i + 1] == "{":
                i += 2
                kind = "head" if opener == "`" else "middle"
                self.template_stack.append(0)
                break
            if ch == "\\":
                i, piece = self._scan_escape(i)
                out.append(piece)
            else:
                out.append(ch)  # newlines inside templates are content, not trivia
                i += 1
        self.pos = i
        self._emit(Token("template", "".join(out), start, self.pos, template_kind=kind))

    def _scan_regex(self) -> None:
        start = self.pos
        text = self.text
        i = self.pos + 1
        in_class = False
        while True:
            if i >= len(text) or text[i] in _LINE_TERMINATORS:
                raise LexError("unterminated regular expression", start)
            ch = text[i]
            if ch == "\\":
                i += 2
                continue
            if ch == "[":
                in_class = True
            elif ch == "]":
                in_class = False
            elif ch == "/" and not in_class:
                i += 1
                break
            i += 1
        while i < len(text) and _is_ident_part(text[i]):
            i += 1
        self.pos = i
        self._emit(Token("regex", text[start:self.pos], start, self.pos))

    def _scan_punct(self) -> None:
        text = self.text
        for p in PUNCTUATORS:
            if text.startswith(p, self.pos):
                if p == "?." and self._peek_is_digit(self.pos + 2):
                    continue  # `a?.3:b` is conditional, not optional chaining
                start = self.pos
                self.pos += len(p)
                if p == "{" and self.template_stack:
                    self.template_stack[-1] += 1
                elif p == "}" and self.template_stack and self.template_stack[-1] > 0:
                    self.template_stack[-1] -= 1
                self._emit(Token("punct", p, start, self.pos))
                return
        raise LexError(f"unexpected character {text[self.pos]!r}", self.pos)

    def _regex_allowed(self) -> bool:
        prev = self.tokens[-1] if self.tokens else None
        if prev is None:
            return True
        if prev.type == "ident":
            return prev.value in _REGEX_AFTER_WORDS
        if prev.type == "punct":
            return prev.value not in (")", "]")
        return False  # num / string / regex / template


def tokenize(text: str) -> list[Token]:
    return Lexer(text).tokenize()
