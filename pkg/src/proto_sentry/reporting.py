"""Report serialization: canonical JSON documents and terse text lines.

Every JSON document carries a version field and is emitted with sorted keys
and a trailing newline, so identical inputs serialize byte-identically.
Document builders produce plain dicts; the text renderers consume those same
dicts, which lets a client render a document it received over the wire
without the analyzer objects in hand.
"""

from __future__ import annotations

import json

from .callgraph import EntryPointPath
from .frontend.model import Diagnostic
from .gadgets import GadgetFinding
from .pollution import Finding, ProtoWriteLint
from .scoring import ScoreReport

REPORT_VERSION = 1

FORMATS = ("json", "text")


def canonical_json(document: dict) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def _sorted_findings(findings: list[Finding]) -> list[Finding]:
    return sorted(findings, key=lambda f: (f.path, f.line, f.col, f.kind))


# -- document builders -------------------------------------------------------------


def build_findings_document(findings: list[Finding], *, query: str, mode: str,
                            lints: list[ProtoWriteLint] | None = None,
                            incomplete: bool = False,
                            diagnostics: list[Diagnostic] | None = None) -> dict:
    return {
        "version": REPORT_VERSION,
        "query": query,
        "mode": mode,
        "incomplete": incomplete,
        "findings": [f.to_dict() for f in _sorted_findings(findings)],
        "lints": [l.to_dict() for l in (lints or [])],
        "diagnostics": [d.to_dict() for d in (diagnostics or [])],
    }


def build_entrypoints_document(pairs: list[tuple[Finding, list[EntryPointPath]]],
                               *, query: str, incomplete: bool = False,
                               diagnostics: list[Diagnostic] | None = None) -> dict:
    ordered = sorted(pairs, key=lambda p: (p[0].path, p[0].line, p[0].col, p[0].kind))
    return {
        "version": REPORT_VERSION,
        "query": query,
        "mode": "any",
        "incomplete": incomplete,
        "diagnostics": [d.to_dict() for d in (diagnostics or [])],
        "findings": [
            {**finding.to_dict(),
             "entry_paths": [p.to_dict() for p in paths]}
            for finding, paths in ordered
        ],
    }


def build_gadget_document(findings: list[GadgetFinding], *,
                          properties: list[str],
                          affected: dict[str, set[str]] | None = None,
                          incomplete: bool = False,
                          diagnostics: list[Diagnostic] | None = None) -> dict:
    return {
        "version": REPORT_VERSION,
        "properties": sorted(properties),
        "incomplete": incomplete,
        "diagnostics": [d.to_dict() for d in (diagnostics or [])],
        "findings": [f.to_dict() for f in findings],
        "affected_exports": {
            prop: sorted(fids) for prop, fids in (affected or {}).items()
        },
    }


def build_props_document(names: set[str], *, metadata: dict | None = None) -> dict:
    """Property-name document; the shape doubles as the gadget query input."""
    return {
        "version": REPORT_VERSION,
        "properties": sorted(names),
        "metadata": metadata or {},
    }


def build_score_document(score: ScoreReport) -> dict:
    return {"version": REPORT_VERSION, **score.to_dict()}


# -- text renderers (consume the document dicts) ------------------------------------


def finding_text_line(finding: dict) -> str:
    controlled = finding.get("controlled", {})
    flags = "".join(
        key[0] for key in ("base", "propertyName", "value")
        if controlled.get(key)
    )
    tags = finding.get("tags", [])
    extra = f" {{{','.join(tags)}}}" if tags else ""
    flows = finding.get("alternates", 0) + 1
    return (f"{finding['kind'].upper()} {finding['location']} "
            f"[{flags}] ({flows} flows){extra}")


def _diagnostic_lines(document: dict) -> list[str]:
    return [f"DIAGNOSTIC {d['path']}: {d['message']}"
            for d in document.get("diagnostics", [])]


def findings_text(document: dict) -> str:
    lines = [finding_text_line(f) for f in document.get("findings", [])]
    lines.extend(f"LINT proto-write {l['location']} {l['snippet']}"
                 for l in document.get("lints", []))
    lines.extend(_diagnostic_lines(document))
    if document.get("incomplete"):
        lines.append("WARNING analysis budget exceeded; findings may be partial")
    return "".join(line + "\n" for line in lines)


def entrypoints_text(document: dict) -> str:
    lines = []
    for finding in document.get("findings", []):
        lines.append(finding_text_line(finding))
        for path in finding.get("entry_paths", []):
            lines.append(f"  entry {path['entry']} ({len(path['steps'])} calls)")
    lines.extend(_diagnostic_lines(document))
    if document.get("incomplete"):
        lines.append("WARNING analysis budget exceeded; findings may be partial")
    return "".join(line + "\n" for line in lines)


def gadgets_text(document: dict) -> str:
    lines = []
    for f in document.get("findings", []):
        sink = f["sink"]
        lines.append(
            f"GADGET {f['property']} {f['read_site']['location']} -> "
            f"{sink['location']} {sink['callee']}({','.join(sink['labels'])}) "
            f"entry {f['entry']}")
    lines.extend(_diagnostic_lines(document))
    if document.get("incomplete"):
        lines.append("WARNING analysis budget exceeded; findings may be partial")
    return "".join(line + "\n" for line in lines)


def props_text(document: dict) -> str:
    return "".join(name + "\n" for name in document.get("properties", []))


def score_text(document: dict) -> str:
    lines = [
        f"precision {document['precision']:.3f} recall {document['recall']:.3f} "
        f"tp {document['tp']} fp {document['fp']} fn {document['fn']}"
    ]
    per_fixture = document.get("per_fixture", {})
    for name in sorted(per_fixture):
        row = per_fixture[name]
        lines.append(f"  {name}: tp {row['tp']} fp {row['fp']} fn {row['fn']}")
    return "".join(line + "\n" for line in lines)


TEXT_RENDERERS = {
    "findings": findings_text,
    "entrypoints": entrypoints_text,
    "gadgets": gadgets_text,
    "props": props_text,
    "score": score_text,
}


def render_document(document: dict, fmt: str, kind: str) -> str:
    _check_format(fmt)
    if fmt == "json":
        return canonical_json(document)
    return TEXT_RENDERERS[kind](document)


# -- object-level emitters -----------------------------------------------------------


def emit_findings_report(findings: list[Finding], fmt: str, *,
                         query: str, mode: str,
                         lints: list[ProtoWriteLint] | None = None,
                         incomplete: bool = False,
                         diagnostics: list[Diagnostic] | None = None) -> str:
    doc = build_findings_document(findings, query=query, mode=mode, lints=lints,
                                  incomplete=incomplete, diagnostics=diagnostics)
    return render_document(doc, fmt, "findings")


def emit_entrypoints_report(pairs: list[tuple[Finding, list[EntryPointPath]]],
                            fmt: str, *, query: str,
                            incomplete: bool = False) -> str:
    doc = build_entrypoints_document(pairs, query=query, incomplete=incomplete)
    return render_document(doc, fmt, "entrypoints")


def emit_gadget_report(findings: list[GadgetFinding], fmt: str, *,
                       properties: list[str],
                       affected: dict[str, set[str]] | None = None,
                       incomplete: bool = False) -> str:
    doc = build_gadget_document(findings, properties=properties,
                                affected=affected, incomplete=incomplete)
    return render_document(doc, fmt, "gadgets")


def emit_props_report(names: set[str], fmt: str, *,
                      metadata: dict | None = None) -> str:
    doc = build_props_document(names, metadata=metadata)
    return render_document(doc, fmt, "props")


def emit_score_report(score: ScoreReport, fmt: str) -> str:
    doc = build_score_document(score)
    return render_document(doc, fmt, "score")
