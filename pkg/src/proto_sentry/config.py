"""Run configuration loaded from a small key = value file.

The format, chosen so a scan can be configured without extra parser
dependencies:

  # comment lines start with a hash
  context_depth = 1
  budget = 1000000
  entries_limit = 5
  return_pruning = true
  test_globs = [test/**, **/*.test.js]
  client_globs = [client/**, public/**]
  summaries_path = ./summaries.json
  sinks = [exec, execSync, spawn]

One `key = value` pair per line. Values are integers, booleans
(true/false), bare or double-quoted strings, or comma-separated lists in
square brackets. Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

from .gadgets import DEFAULT_SINK_NAMES
from .pollution import DEFAULT_CLIENT_GLOBS, DEFAULT_TEST_GLOBS


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    context_depth: int = 1
    budget: int = 1_000_000
    entries_limit: int = 5
    return_pruning: bool = True
    test_globs: tuple[str, ...] = DEFAULT_TEST_GLOBS
    client_globs: tuple[str, ...] = DEFAULT_CLIENT_GLOBS
    summaries_path: str | None = None
    sinks: tuple[str, ...] = tuple(sorted(DEFAULT_SINK_NAMES))


_INT_KEYS = {"context_depth", "budget", "entries_limit"}
_BOOL_KEYS = {"return_pruning"}
_LIST_KEYS = {"test_globs", "client_globs", "sinks"}
_STR_KEYS = {"summaries_path"}


def _parse_scalar(raw: str, lineno: int) -> str:
    raw = raw.strip()
    if raw.startswith('"') and raw.endswith('"') and len(raw) >= 2:
        return raw[1:-1]
    if '"' in raw:
        raise ConfigError(f"line {lineno}: unbalanced quotes in {raw!r}")
    return raw


def parse_config(text: str) -> Config:
    values: dict[str, object] = {}
    known = {f.name for f in fields(Config)}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in _INT_KEYS:
            try:
                values[key] = int(raw)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} needs an integer") from None
        elif key in _BOOL_KEYS:
            if raw not in ("true", "false"):
                raise ConfigError(f"line {lineno}: {key} needs true or false")
            values[key] = raw == "true"
        elif key in _LIST_KEYS:
            if not (raw.startswith("[") and raw.endswith("]")):
                raise ConfigError(f"line {lineno}: {key} needs a [list]")
            inner = raw[1:-1].strip()
            items = tuple(
                _parse_scalar(part, lineno)
                for part in inner.split(",") if part.strip()
            ) if inner else ()
            values[key] = items
        else:
            values[key] = _parse_scalar(raw, lineno) or None
    return replace(Config(), **values)


def load_config(path: str) -> Config:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
