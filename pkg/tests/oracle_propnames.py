"""Token-scan ground truth for property-name extraction.

Deliberately independent of the AST: walks raw token streams and applies
purely local pattern rules.  Extraction must agree with this scan exactly
on the fixture corpus.

Rules:
  - `.name` / `?.name`: static member access (numeric after dot canonicalized)
  - `["name"]`, `[42]`, `[-1]`, [`name`]: constant bracket access (template
    only when it has no substitutions)
  - `name:` with `{` or `,` immediately before the name: object-literal or
    destructuring-pattern key

Shorthand properties, literal method names, and class member names are out
of scope on both sides.
"""

from __future__ import annotations

from typing import Iterable

from proto_sentry.frontend.ast import canonical_number
from proto_sentry.frontend.lexer import tokenize


def _token_name(tok) -> str | None:
    if tok.type == "ident":
        return str(tok.value)
    if tok.type == "string":
        return str(tok.value)
    if tok.type == "num":
        return canonical_number(float(tok.value))
    return None


def oracle_property_names(texts: Iterable[str], include_object_keys: bool = True) -> set[str]:
    names: set[str] = set()
    for text in texts:
        toks = [t for t in tokenize(text) if t.type != "eof"]
        n = len(toks)
        for i, tok in enumerate(toks):
            if tok.is_punct(".", "?.") and i + 1 < n:
                nxt = toks[i + 1]
                if nxt.type == "ident":
                    names.add(str(nxt.value))
                elif nxt.type == "num":
                    names.add(canonical_number(float(nxt.value)))
            elif tok.is_punct("["):
                if i + 2 < n and toks[i + 2].is_punct("]"):
                    mid = toks[i + 1]
                    if mid.type == "template":
                        if mid.template_kind == "full":
                            names.add(str(mid.value))
                    else:
                        name = _token_name(mid)
                        if name is not None and mid.type != "ident":
                            names.add(name)
                elif (i + 3 < n and toks[i + 1].is_punct("-")
                      and toks[i + 2].type == "num" and toks[i + 3].is_punct("]")):
                    names.add(canonical_number(-float(toks[i + 2].value)))
            elif include_object_keys and tok.is_punct(":") and i >= 2:
                key, before = toks[i - 1], toks[i - 2]
                if before.is_punct("{", ","):
                    name = _token_name(key)
                    if name is not None:
                        names.add(name)
    return names
