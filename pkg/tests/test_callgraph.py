"""Call graph construction, exports, and entry-point path enumeration."""

from __future__ import annotations

from proto_sentry.callgraph import (
    UNKNOWN_CALLEE,
    build_call_graph,
    entry_point_paths,
    exported_functions,
    function_id,
    toplevel_id,
)
from proto_sentry.frontend.model import parse_program


def _graph(*sources: tuple[str, str]):
    model = parse_program(list(sources))
    return model, build_call_graph(model)


def _fn_id(model, path: str, name: str) -> str:
    unit = model.unit_for(path)
    for fn in unit.ast.find("function"):
        if fn.attrs.get("name") == name:
            return function_id(path, fn)
    raise AssertionError(f"no function {name} in {path}")


SPAWN_STYLE = """
function normalizeSpawnArgs(file, args, options) {
  const opts = options || {};
  return opts;
}
function spawn(file, args, options) {
  const opts = normalizeSpawnArgs(file, args, options);
  return handle.spawn(opts);
}
module.exports = { spawn };
"""


def test_direct_call_and_unknown_edge():
    model, graph = _graph(("spawn.js", SPAWN_STYLE))
    spawn = _fn_id(model, "spawn.js", "spawn")
    normalize = _fn_id(model, "spawn.js", "normalizeSpawnArgs")
    callees = {e.callee for e in graph.edges if e.caller == spawn}
    assert normalize in callees
    assert UNKNOWN_CALLEE in callees
    unknown_edges = [e for e in graph.edges
                     if e.caller == spawn and e.callee == UNKNOWN_CALLEE]
    body = graph.nodes[spawn].span
    assert all(body[0] <= e.site[0] and e.site[1] <= body[1] for e in unknown_edges)


def test_isolated_function_is_root():
    model, graph = _graph(("lone.js", "function solo(x) { return x + 1; }"))
    solo = _fn_id(model, "lone.js", "solo")
    assert solo in graph.roots
    assert graph.in_degree()[solo] == 0


def test_bind_alias_resolves():
    src = """
const obj = {
  run: function () { return 1; }
};
const h = obj.run.bind(obj);
h();
"""
    model, graph = _graph(("b.js", src))
    unit = model.unit_for("b.js")
    run = next(fn for fn in unit.ast.find("function"))
    callees = {e.callee for e in graph.edges if e.caller == toplevel_id("b.js")}
    assert function_id("b.js", run) in callees


def test_local_alias_one_level():
    src = "function g() {} const f = g; f();"
    model, graph = _graph(("a.js", src))
    g = _fn_id(model, "a.js", "g")
    assert any(e.callee == g for e in graph.edges)


def test_literal_method_call():
    src = "const api = { run() { return 2; } }; api.run();"
    model, graph = _graph(("m.js", src))
    unit = model.unit_for("m.js")
    run = next(unit.ast.find("function"))
    assert any(e.callee == function_id("m.js", run) for e in graph.edges)


def test_call_apply_targets():
    src = "function f() {} f.call(null); f.apply(null, []);"
    model, graph = _graph(("c.js", src))
    f = _fn_id(model, "c.js", "f")
    hits = [e for e in graph.edges if e.callee == f]
    assert len(hits) == 2


def test_callback_positions_of_builtins():
    src = "function each(x) { return x; } [1, 2].map(each); [3].forEach(v => v);"
    model, graph = _graph(("cb.js", src))
    each = _fn_id(model, "cb.js", "each")
    unit = model.unit_for("cb.js")
    arrow = next(fn for fn in unit.ast.find("function") if fn.attrs["is_arrow"])
    callees = {e.callee for e in graph.edges}
    assert each in callees
    assert function_id("cb.js", arrow) in callees


def test_this_method_resolution_rules():
    local_complete = """
class Worker {
  step() { return 1; }
  runAll() { return this.step(); }
}
"""
    model, graph = _graph(("w.js", local_complete))
    step = _fn_id(model, "w.js", "step")
    run_all = _fn_id(model, "w.js", "runAll")
    assert any(e.caller == run_all and e.callee == step for e in graph.edges)

    with_super = """
class Base { step() { return 0; } }
class Child extends Base {
  runAll() { return this.step(); }
}
"""
    model2, graph2 = _graph(("s.js", with_super))
    run_all2 = _fn_id(model2, "s.js", "runAll")
    callees = {e.callee for e in graph2.edges if e.caller == run_all2}
    assert callees == {UNKNOWN_CALLEE}


# -- exports ----------------------------------------------------------------------


def test_single_named_export():
    src = "function diffApply(obj, diff) { return obj; } module.exports = { diffApply };"
    model, graph = _graph(("d.js", src))
    assert exported_functions(model, graph) == {_fn_id(model, "d.js", "diffApply")}


def test_no_exports():
    model, graph = _graph(("n.js", "function inner() {}"))
    assert exported_functions(model, graph) == set()


def test_export_property_assignment():
    src = "const copyPath = (to, from) => { to.a = from.a; }; module.exports.copyPath = copyPath;"
    model, graph = _graph(("cp.js", src))
    unit = model.unit_for("cp.js")
    arrow = next(unit.ast.find("function"))
    assert function_id("cp.js", arrow) in exported_functions(model, graph)


def test_exports_dot_name():
    src = "exports.helper = function helper() { return 1; };"
    model, graph = _graph(("e.js", src))
    assert len(exported_functions(model, graph)) == 1


def test_exported_class_public_methods():
    src = """
class Runner {
  start() {}
  stop() {}
}
module.exports = Runner;
"""
    model, graph = _graph(("r.js", src))
    exported = exported_functions(model, graph)
    assert {_fn_id(model, "r.js", "start"), _fn_id(model, "r.js", "stop")} <= exported


def test_es_module_exports():
    src = "export function visible() {} function hidden() {} export default function main() {}"
    model, graph = _graph(("es.mjs", src))
    exported = exported_functions(model, graph)
    assert _fn_id(model, "es.mjs", "visible") in exported
    assert _fn_id(model, "es.mjs", "main") in exported
    assert _fn_id(model, "es.mjs", "hidden") not in exported


def test_functions_in_exported_nested_literal():
    src = "module.exports = { api: { deep: function deep() {} } };"
    model, graph = _graph(("nest.js", src))
    assert _fn_id(model, "nest.js", "deep") in exported_functions(model, graph)


def test_cross_file_require_resolution():
    util = "function helper() { return 7; } module.exports = { helper };"
    main = "const util = require('./util.js'); function go() { return util.helper(); } go();"
    model, graph = _graph(("lib/util.js", util), ("lib/main.js", main))
    helper = _fn_id(model, "lib/util.js", "helper")
    go = _fn_id(model, "lib/main.js", "go")
    assert any(e.caller == go and e.callee == helper for e in graph.edges)


def test_cross_file_destructured_require():
    util = "function helper() {} module.exports = { helper };"
    main = "const { helper } = require('./util'); helper();"
    model, graph = _graph(("p/util.js", util), ("p/main.js", main))
    helper = _fn_id(model, "p/util.js", "helper")
    assert any(e.callee == helper for e in graph.edges)


def test_cross_file_es_import():
    util = "export function helper() {}"
    main = "import { helper } from './util.mjs'; helper();"
    model, graph = _graph(("q/util.mjs", util), ("q/main.mjs", main))
    helper = _fn_id(model, "q/util.mjs", "helper")
    assert any(e.callee == helper for e in graph.edges)


# -- entry point paths ---------------------------------------------------------------


CHAIN = """
function c() { return 1; }
function b() { return c(); }
function a() { return b(); }
a();
"""


def test_linear_chain_path():
    model, graph = _graph(("chain.js", CHAIN))
    c = _fn_id(model, "chain.js", "c")
    paths = entry_point_paths(graph, c, limit=5)
    assert len(paths) == 1
    path = paths[0]
    assert path.entry == toplevel_id("chain.js")
    assert [graph.nodes[s.callee].name for s in path.steps] == ["a", "b", "c"]


def test_target_is_root():
    model, graph = _graph(("root.js", "function alone() {}"))
    alone = _fn_id(model, "root.js", "alone")
    paths = entry_point_paths(graph, alone, limit=3)
    assert len(paths) == 1
    assert paths[0].steps == [] and paths[0].entry == alone


DIAMOND = """
function d() { return 1; }
function b() { return d(); }
function c() { return d(); }
function a(x) { return x ? b() : c(); }
"""


def test_diamond_two_paths_deterministic():
    model, graph = _graph(("dia.js", DIAMOND))
    d = _fn_id(model, "dia.js", "d")
    paths = entry_point_paths(graph, d, limit=2)
    assert len(paths) == 2
    assert all(len(p.steps) == 2 for p in paths)
    assert all(p.entry == _fn_id(model, "dia.js", "a") for p in paths)
    first_mid = graph.nodes[paths[0].steps[0].callee].name
    second_mid = graph.nodes[paths[1].steps[0].callee].name
    assert [first_mid, second_mid] == ["b", "c"]
    again = entry_point_paths(graph, d, limit=2)
    assert [p.to_dict() for p in again] == [p.to_dict() for p in paths]


def test_unreachable_target_empty():
    src = "function called() {} function caller() { called(); } caller(); function island() { islandHelper(); } function islandHelper() {}"
    model, graph = _graph(("u.js", src))
    helper = _fn_id(model, "u.js", "islandHelper")
    paths = entry_point_paths(graph, helper, limit=5)
    # island is a root calling islandHelper: exactly one path, from island
    assert len(paths) == 1
    assert paths[0].entry == _fn_id(model, "u.js", "island")


def test_paths_replay_in_graph():
    model, graph = _graph(("dia.js", DIAMOND))
    d = _fn_id(model, "dia.js", "d")
    edge_set = set(graph.edges)
    for path in entry_point_paths(graph, d, limit=10):
        assert path.entry in graph.roots
        prev = path.entry
        for step in path.steps:
            assert step in edge_set
            assert step.caller == prev
            prev = step.callee
        assert prev == d


# -- invariants --------------------------------------------------------------------


def test_roots_equal_zero_indegree():
    model, graph = _graph(("chain.js", CHAIN))
    degrees = graph.in_degree()
    expected = {fid for fid, deg in degrees.items()
                if deg == 0 and graph.nodes[fid].kind != "unknown"}
    assert set(graph.roots) == expected


def test_monotone_under_file_addition():
    base = [("one.js", "function f() {} module.exports = { f };")]
    extra = base + [("two.js", "const m = require('./one.js'); m.f();")]
    model1 = parse_program(base)
    graph1 = build_call_graph(model1)
    model2 = parse_program(extra)
    graph2 = build_call_graph(model2)
    assert set(graph1.nodes) <= set(graph2.nodes)
    assert graph1.exports <= graph2.exports


def test_edge_sites_inside_caller_span():
    model, graph = _graph(("spawn.js", SPAWN_STYLE))
    for edge in graph.edges:
        info = graph.nodes[edge.caller]
        start, end = info.span
        assert start <= edge.site[0] and edge.site[1] <= end


def test_function_at_lookup():
    model, graph = _graph(("spawn.js", SPAWN_STYLE))
    unit = model.unit_for("spawn.js")
    spawn = _fn_id(model, "spawn.js", "spawn")
    inner_offset = unit.text.rindex("normalizeSpawnArgs(file")
    assert graph.function_at("spawn.js", inner_offset) == spawn
    assert graph.function_at("spawn.js", len(unit.text) - 1) == toplevel_id("spawn.js")
