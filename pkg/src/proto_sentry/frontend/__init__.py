"""ECMAScript frontend: lexer, parser, scopes, and program model."""

from .ast import AstNode, canonical_number
from .lexer import LexError, Token, tokenize
from .parser import ParseError, parse

__all__ = [
    "AstNode",
    "canonical_number",
    "LexError",
    "Token",
    "tokenize",
    "ParseError",
    "parse",
]
