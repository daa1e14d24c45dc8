"""End-to-end analysis runs: source files in, report documents out.

Each function takes the program as (path, text) pairs with paths already
relative to the scan root, so the same inputs produce the same documents
no matter where the tree lives on disk.
"""

from __future__ import annotations

from .callgraph import build_call_graph
from .frontend.model import parse_program
from .frontend.propnames import extract_property_names
from .gadgets import (
    DEFAULT_SINK_NAMES,
    GadgetQueryInput,
    SinkPolicy,
    affected_exports,
    analyze_gadgets,
)
from .pollution import (
    detect_pollution,
    detect_pollution_with_entries,
    lint_literal_proto_writes,
)
from .reporting import (
    build_entrypoints_document,
    build_findings_document,
    build_gadget_document,
    build_props_document,
    build_score_document,
)
from .scoring import score_corpus
from .taint.summaries import SummaryCatalog, load_catalog, parse_catalog

FilePair = tuple[str, str]


def resolve_catalog(document: dict | None = None,
                    disable: list[str] | None = None) -> SummaryCatalog | None:
    """None means "engine default"; a custom document or a disable list
    forces an explicit catalog."""
    if document is None and not disable:
        return None
    catalog = parse_catalog(document) if document is not None else load_catalog()
    if disable:
        catalog = catalog.disable(disable)
    return catalog


def _detector_kwargs(summaries: SummaryCatalog | None,
                     context_depth: int,
                     budget: int | None) -> dict:
    kwargs: dict = {"context_depth": context_depth}
    if summaries is not None:
        kwargs["summaries"] = summaries
    if budget is not None:
        kwargs["budget"] = budget
    return kwargs


def run_scan(files: list[FilePair], *,
             query: str = "priority",
             mode: str = "exported",
             context_depth: int = 1,
             budget: int | None = None,
             return_pruning: bool = True,
             test_globs: list[str] | None = None,
             client_globs: list[str] | None = None,
             summaries_doc: dict | None = None,
             disable_summaries: list[str] | None = None,
             lint: bool = True) -> dict:
    model = parse_program(files)
    graph = build_call_graph(model)
    catalog = resolve_catalog(summaries_doc, disable_summaries)
    kwargs = _detector_kwargs(catalog, context_depth, budget)
    if test_globs is not None:
        kwargs["test_globs"] = tuple(test_globs)
    if client_globs is not None:
        kwargs["client_globs"] = tuple(client_globs)
    diagnostics: dict = {}
    findings = detect_pollution(model, graph, mode, query,
                                return_pruning=return_pruning,
                                diagnostics=diagnostics, **kwargs)
    lints = lint_literal_proto_writes(model) if lint else []
    return build_findings_document(findings, query=query, mode=mode, lints=lints,
                                   incomplete=diagnostics.get("incomplete", False),
                                   diagnostics=model.diagnostics)


def run_entrypoints(files: list[FilePair], *,
                    query: str = "priority",
                    limit: int = 5,
                    context_depth: int = 1,
                    budget: int | None = None,
                    test_globs: list[str] | None = None,
                    client_globs: list[str] | None = None,
                    summaries_doc: dict | None = None,
                    disable_summaries: list[str] | None = None) -> dict:
    model = parse_program(files)
    graph = build_call_graph(model)
    catalog = resolve_catalog(summaries_doc, disable_summaries)
    kwargs = _detector_kwargs(catalog, context_depth, budget)
    if test_globs is not None:
        kwargs["test_globs"] = tuple(test_globs)
    if client_globs is not None:
        kwargs["client_globs"] = tuple(client_globs)
    diagnostics: dict = {}
    pairs = detect_pollution_with_entries(model, graph, query, limit=limit,
                                          diagnostics=diagnostics, **kwargs)
    return build_entrypoints_document(
        pairs, query=query, incomplete=diagnostics.get("incomplete", False),
        diagnostics=model.diagnostics)


def run_gadgets(files: list[FilePair], *,
                properties: list[str],
                entry_set: list[str] | None = None,
                explicit_sinks: list[str] | None = None,
                unresolved_callees: bool = True,
                context_depth: int = 1,
                budget: int | None = None,
                summaries_doc: dict | None = None,
                disable_summaries: list[str] | None = None) -> dict:
    model = parse_program(files)
    graph = build_call_graph(model)
    catalog = resolve_catalog(summaries_doc, disable_summaries)
    policy = SinkPolicy(
        unresolved_callees=unresolved_callees,
        explicit=(frozenset(explicit_sinks) if explicit_sinks is not None
                  else DEFAULT_SINK_NAMES),
    )
    query = GadgetQueryInput(
        properties=frozenset(properties),
        entry_set=frozenset(entry_set) if entry_set is not None else None,
        sink_policy=policy,
    )
    diagnostics: dict = {}
    kwargs = _detector_kwargs(catalog, context_depth, budget)
    findings = analyze_gadgets(model, graph, query,
                               diagnostics=diagnostics, **kwargs)
    return build_gadget_document(
        findings,
        properties=sorted(properties),
        affected=affected_exports(graph, findings),
        incomplete=diagnostics.get("incomplete", False),
        diagnostics=model.diagnostics,
    )


def run_props(files: list[FilePair], *,
              include_object_keys: bool = True) -> dict:
    model = parse_program(files)
    names = extract_property_names(model, include_object_keys=include_object_keys)
    metadata = {"source": "static-extraction", "files": len(files)}
    if model.diagnostics:
        metadata["diagnostics"] = [d.to_dict() for d in model.diagnostics]
    return build_props_document(names, metadata=metadata)


def run_score(reports: dict[str, list[dict]], manifest: dict) -> dict:
    return build_score_document(score_corpus(reports, manifest))
