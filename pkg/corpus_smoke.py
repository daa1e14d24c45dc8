"""Corpus smoke: run the analyzers over every fixture and diff against manifest."""
import json
import os
import sys

sys.path.insert(0, "src")

from proto_sentry.frontend.model import collect_source_files, parse_program
from proto_sentry.callgraph import build_call_graph
from proto_sentry.pollution import (
    detect_pollution, lint_literal_proto_writes, PRIORITY, ANY_FUNCTIONS,
)
from proto_sentry.gadgets import analyze_gadgets, GadgetQueryInput, affected_exports

ROOT = "corpus/fixtures"
manifest = json.load(open("corpus/manifest.json"))

fail = 0
for name, spec in sorted(manifest["fixtures"].items()):
    fdir = os.path.join(ROOT, name)
    files = collect_source_files([fdir], ())
    pairs = []
    for p in files:
        rel = os.path.relpath(p, fdir)
        pairs.append((rel, open(p).read()))
    model = parse_program(pairs)
    graph = build_call_graph(model)

    findings = detect_pollution(model, graph, ANY_FUNCTIONS, PRIORITY)
    got = sorted((f.path, f.line, f.kind) for f in findings)
    want = sorted((e["file"], e["line"], e["kind"])
                  for e in (spec.get("expected_findings", [])
                            + spec.get("planted_findings", [])))
    ok = got == want
    if not ok:
        fail += 1
    print(f"{'ok ' if ok else 'FAIL'} {name}: findings got={got} want={want}")
    if findings:
        tags = sorted({t for f in findings for t in f.tags})
        if tags:
            print(f"      tags={tags}")

    lints = lint_literal_proto_writes(model)
    got_l = sorted((l.path, l.line) for l in lints)
    want_l = sorted((e["file"], e["line"]) for e in spec.get("expected_lints", []))
    if got_l != want_l:
        fail += 1
        print(f"FAIL {name}: lints got={got_l} want={want_l}")

    props = spec.get("gadget_properties")
    if props:
        gfs = analyze_gadgets(model, graph,
                              GadgetQueryInput(properties=frozenset(props)))
        got_g = sorted((g.property, g.sink_call[0],
                        int(g.sink_location.rsplit(":", 2)[1]), g.callee)
                       for g in gfs)
        want_g = sorted((e["property"], e["file"], e["line"], e["callee"])
                        for e in spec.get("expected_gadgets", []))
        okg = got_g == want_g
        if not okg:
            fail += 1
        print(f"{'ok ' if okg else 'FAIL'} {name}: gadgets got={got_g} want={want_g}")
        if gfs:
            aff = affected_exports(graph, gfs)
            named = {p: sorted(graph.functions[f][1].attrs.get("name", f)
                               for f in fids)
                     for p, fids in aff.items()}
            print(f"      affected={named}")

print()
print("FAILURES:", fail)
