"""Program model: parsed source units plus their resolved scopes.

A `ProgramModel` is the frozen input every downstream phase works from.
Files that fail to parse become diagnostics instead of aborting the run;
an empty input list is an error because no analysis could mean anything.
"""

from __future__ import annotations

import fnmatch
import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .ast import AstNode, assign_nesting_ids
from .lexer import LexError
from .parser import ParseError, parse
from .scopes import ScopeResult, resolve_scopes

_JS_SUFFIXES = (".js", ".mjs", ".cjs")


@dataclass
class Diagnostic:
    path: str
    message: str
    offset: int

    def to_dict(self) -> dict:
        return {"path": self.path, "message": self.message, "offset": self.offset}


@dataclass
class SourceUnit:
    path: str
    text: str
    ast: AstNode
    hash: str
    scopes: ScopeResult

    def line_col(self, offset: int) -> tuple[int, int]:
        """1-based line and column for a byte offset."""
        line = self.text.count("\n", 0, offset) + 1
        last_nl = self.text.rfind("\n", 0, offset)
        col = offset - last_nl
        return line, col

    def offset_of_line(self, line: int) -> int:
        """Byte offset where a 1-based line starts."""
        if line <= 1:
            return 0
        pos = 0
        for _ in range(line - 1):
            nxt = self.text.find("\n", pos)
            if nxt < 0:
                return len(self.text)
            pos = nxt + 1
        return pos

    def function_nodes(self) -> Iterator[AstNode]:
        return self.ast.find("function")


@dataclass
class ProgramModel:
    units: list[SourceUnit]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def unit_for(self, path: str) -> SourceUnit | None:
        for unit in self.units:
            if unit.path == path:
                return unit
        return None

    def functions(self) -> Iterator[tuple[SourceUnit, AstNode]]:
        """All function nodes, preceded per unit by its program node (the
        synthetic top-level)."""
        for unit in self.units:
            yield unit, unit.ast
            for fn in unit.function_nodes():
                yield unit, fn


def _parse_unit(path: str, text: str) -> SourceUnit:
    ast = parse(text)
    assign_nesting_ids(ast)
    scopes = resolve_scopes(ast)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return SourceUnit(path=path, text=text, ast=ast, hash=digest, scopes=scopes)


def parse_program(sources: list[tuple[str, str]]) -> ProgramModel:
    """Parse (path, text) pairs; parse failures become diagnostics."""
    if not sources:
        raise ValueError("no sources to analyze")
    units: list[SourceUnit] = []
    diagnostics: list[Diagnostic] = []
    for path, text in sources:
        try:
            units.append(_parse_unit(path, text))
        except (ParseError, LexError) as exc:
            offset = getattr(exc, "pos", 0)
            diagnostics.append(Diagnostic(path, str(exc), offset))
    return ProgramModel(units=units, diagnostics=diagnostics)


def collect_source_files(
    inputs: Iterable[str], ignore_globs: Iterable[str] = ()
) -> list[str]:
    """Expand files and directory roots into a sorted list of JS files."""
    ignore = list(ignore_globs)
    found: set[str] = set()
    for raw in inputs:
        p = Path(raw)
        if p.is_dir():
            for child in sorted(p.rglob("*")):
                if child.is_file() and child.suffix in _JS_SUFFIXES:
                    found.add(str(child))
        elif p.is_file():
            found.add(str(p))
        else:
            raise FileNotFoundError(f"input path does not exist: {raw}")
    kept = []
    for path in sorted(found):
        if any(fnmatch.fnmatch(path, g) or fnmatch.fnmatch(Path(path).name, g)
               for g in ignore):
            continue
        kept.append(path)
    return kept


def load_program(
    inputs: Iterable[str], ignore_globs: Iterable[str] = ()
) -> ProgramModel:
    files = collect_source_files(inputs, ignore_globs)
    sources = [(path, Path(path).read_text(encoding="utf-8")) for path in files]
    return parse_program(sources)


__all__ = [
    "Diagnostic",
    "SourceUnit",
    "ProgramModel",
    "parse_program",
    "collect_source_files",
    "load_program",
]
