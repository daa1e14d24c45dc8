"""Built-in function summaries: declarative flow models for library calls.

Summaries are data, not code: each entry matches call sites by shape
(`x.shift(...)` by method name, `Object.keys(...)` by object + name) and
lists label flows between positional roles.  Role grammar:

    receiver | return | arg<k> | args | callback<k>.param<j> | callback<k>.return

`args` means every argument position.  A call that matches a summary is
modeled, which also exempts it from unresolved-callee sink treatment in the
gadget analysis.

The catalog ships as a versioned JSON document; `load_catalog` accepts an
override path.  Individual summaries toggle off by bare name ("slice"
disables every summary matching that method name, whatever the receiver
type) or by full id ("Array.prototype.slice").
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

from ..frontend.ast import AstNode

SUPPORTED_VERSION = 1


class SummaryError(ValueError):
    pass


@dataclass(frozen=True)
class Flow:
    src: str
    dst: str


@dataclass
class BuiltinSummary:
    summary_id: str
    match_kind: str  # "method" | "static"
    name: str
    object_name: str | None
    flows: tuple[Flow, ...]
    callbacks: tuple[tuple[int, tuple[str, ...]], ...]  # (arg index, param names)

    def matches(self, call: AstNode) -> bool:
        callee = call.children[0]
        if callee.kind not in ("member-read", "member-write"):
            return False
        if callee.attrs.get("prop_name") != self.name:
            return False
        if self.match_kind == "static":
            base = callee.children[0]
            return base.kind == "identifier" and base.attrs["name"] == self.object_name
        # method summaries must not swallow static namespaces modeled separately
        base = callee.children[0]
        if base.kind == "identifier" and base.attrs["name"] in ("Object", "JSON", "Reflect"):
            return False
        return True


@dataclass
class SummaryCatalog:
    version: int
    summaries: list[BuiltinSummary]
    disabled: set[str] = field(default_factory=set)

    def active(self) -> list[BuiltinSummary]:
        return [s for s in self.summaries
                if s.name not in self.disabled and s.summary_id not in self.disabled]

    def disable(self, names: Iterable[str]) -> "SummaryCatalog":
        return SummaryCatalog(self.version, self.summaries,
                              self.disabled | set(names))

    def match(self, call: AstNode) -> BuiltinSummary | None:
        if call.kind != "call":
            return None
        for summary in self.active():
            if summary.matches(call):
                return summary
        return None

    def matches_any(self, call: AstNode) -> bool:
        """Whether any summary (active or disabled) models this call shape."""
        if call.kind != "call":
            return False
        return any(s.matches(call) for s in self.summaries)


_ROLE_PREFIXES = ("receiver", "return", "arg", "args", "callback")


def _validate_role(role: str) -> None:
    if role in ("receiver", "return", "args"):
        return
    if role.startswith("arg") and role[3:].isdigit():
        return
    if role.startswith("callback"):
        head, _, tail = role.partition(".")
        if head[8:].isdigit() and (tail == "return"
                                   or (tail.startswith("param") and tail[5:].isdigit())):
            return
    raise SummaryError(f"unknown role {role!r}")


def parse_catalog(doc: dict) -> SummaryCatalog:
    version = doc.get("version")
    if version != SUPPORTED_VERSION:
        raise SummaryError(f"unsupported summary catalog version: {version!r}")
    summaries = []
    for raw in doc.get("summaries", []):
        match = raw.get("match", {})
        kind = match.get("kind")
        if kind not in ("method", "static"):
            raise SummaryError(f"bad match kind in {raw.get('id')!r}")
        flows = []
        for f in raw.get("flows", []):
            _validate_role(f["from"])
            _validate_role(f["to"])
            flows.append(Flow(f["from"], f["to"]))
        if not flows:
            raise SummaryError(f"summary {raw.get('id')!r} has no flows")
        callbacks = tuple(
            (cb["arg"], tuple(cb.get("params", ())))
            for cb in raw.get("callbacks", ())
        )
        summaries.append(BuiltinSummary(
            summary_id=raw["id"],
            match_kind=kind,
            name=match["name"],
            object_name=match.get("object"),
            flows=tuple(flows),
            callbacks=callbacks,
        ))
    return SummaryCatalog(version=version, summaries=summaries)


def load_catalog(path: str | None = None) -> SummaryCatalog:
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_catalog(json.load(fh))
    data = resources.files("proto_sentry.data").joinpath("builtin_summaries.json")
    return parse_catalog(json.loads(data.read_text(encoding="utf-8")))


__all__ = ["Flow", "BuiltinSummary", "SummaryCatalog", "SummaryError",
           "parse_catalog", "load_catalog"]
