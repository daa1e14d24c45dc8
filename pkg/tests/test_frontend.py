"""Frontend tests: lexer, parser, scopes, model, property extraction."""

from __future__ import annotations

import string

import pytest
from hypothesis import given, settings, strategies as st

from oracle_propnames import oracle_property_names
from proto_sentry.frontend import parse, tokenize
from proto_sentry.frontend.ast import AstNode, canonical_number, structural_equal
from proto_sentry.frontend.model import load_program, parse_program
from proto_sentry.frontend.parser import ParseError
from proto_sentry.frontend.propnames import extract_property_names

LISTING_ENTRY_POINT = """
function entryPoint(arg1, arg2, arg3) {
  const obj = {};
  const p = obj[arg1];
  p[arg2] = arg3;
  return p;
}
"""

FIG_DESTRUCTURE = 'const { 1: name, 2: expansion = "" } = StringPrototypeMatch(s, re) || [];'

SPAWN_FRAGMENT = """
function buildEnv(opts) {
  const env = opts.env || process.env;
  const envPairs = [];
  for (const key in env) {
    envPairs.push(`${key}=${env[key]}`);
  }
  opts.envPairs = envPairs;
  return opts;
}
function spawn(file, args, options) {
  const opts = buildEnv(options);
  return handle.spawn(opts);
}
"""

SNIPPET_BATTERY = [
    LISTING_ENTRY_POINT,
    FIG_DESTRUCTURE,
    SPAWN_FRAGMENT,
    "var a = 1, b = [2,,3], {c, d: {e = 5}} = obj;",
    "for (const k in obj) { out[k] = obj[k]; }",
    "for (let i = 0; i < n; i++) total += xs[i];",
    "async function f(a, ...rest) { return await g(...rest); }",
    "const f = async (x) => x ** 2;",
    "const g = x => ({ value: x });",
    "class Point { static origin() { return new Point(); } get x() { return 1; } }",
    "a?.b?.[c]?.(d);",
    "label: for (;;) { break label; }",
    "switch (v) { case 1: case 2: f(); break; default: g(); }",
    "try { risky(); } catch { recover(); } finally { done(); }",
    "const re = /ab+c/gi; const q = a / b / 2;",
    "x = y ?? z || w;",
    "tag`head ${a + b} tail`;",
    "import def, { named as other } from './mod.js'; export { other };",
    "const {a, ...rest} = obj; const [x, , ...ys] = arr;",
    "obj.k++; --obj[m]; delete obj.gone;",
    "new Foo; new Bar(1); new ns.Klass(a)(b);",
    "function* gen() { yield 1; yield* inner(); }",
    "({ a, b = 2, [k]: c } = source);",
    "[p.q, r[s]] = pair;",
    "module.exports = { run, helper: () => 1 };",
    "let big = 0x1f + 0b101 + 0o17 + 1_000_000 + 1e3 + .5;",
    "obj = { async m() {}, *gen() {}, get v() { return 1; }, ['dyn']: 2, 3: 'three' };",
    "for await (const chunk of stream) consume(chunk);",
    "a = b\n++c",
]


# -- spec'd parse examples ------------------------------------------------------


def test_entry_point_listing_shape():
    model = parse_program([("listing.js", LISTING_ENTRY_POINT)])
    unit = model.units[0]
    fns = list(unit.ast.find("function"))
    assert len(fns) == 1
    assert fns[0].attrs["param_count"] == 3
    reads = [n for n in unit.ast.find("member-read") if n.attrs["computed"]]
    writes = [n for n in unit.ast.find("member-write") if n.attrs["computed"]]
    assert len(reads) == 1
    assert len(writes) == 1
    assert reads[0].attrs["prop_name"] is None, "dynamic access has no constant name"
    assert writes[0].attrs["prop_name"] is None


def test_empty_source_unit():
    model = parse_program([("empty.js", "")])
    unit = model.units[0]
    assert unit.ast.kind == "program"
    assert unit.ast.children == []
    assert list(unit.function_nodes()) == []


def test_numeric_destructuring_keys_with_default():
    ast = parse(FIG_DESTRUCTURE)
    props = list(ast.find("pattern-property"))
    assert [p.attrs["key_name"] for p in props] == ["1", "2"]
    defaults = list(ast.find("default-pattern"))
    assert len(defaults) == 1


# -- invariants -----------------------------------------------------------------


def _check_spans(node: AstNode, text_len: int, parent: AstNode | None = None):
    assert 0 <= node.start <= node.end <= text_len
    if parent is not None:
        assert parent.start <= node.start and node.end <= parent.end
    for child in node.children:
        _check_spans(child, text_len, node)


@pytest.mark.parametrize("src", SNIPPET_BATTERY)
def test_spans_nest_properly(src):
    _check_spans(parse(src), len(src))


@pytest.mark.parametrize("src", SNIPPET_BATTERY)
def test_parse_determinism(src):
    assert structural_equal(parse(src), parse(src))


@pytest.mark.parametrize("src", SNIPPET_BATTERY)
def test_member_constant_xor_dynamic(src):
    for node in parse(src).walk():
        if node.kind in ("member-read", "member-write"):
            if not node.attrs["computed"]:
                assert node.attrs["prop_name"] is not None
            # computed access has a name only when the index is constant


def test_write_targets_marked():
    ast = parse("a.b = 1; c[d] += 2; e.f++; for (g.h in i) {}")
    writes = list(ast.find("member-write"))
    assert len(writes) == 4
    flags = [w.attrs["also_reads"] for w in writes]
    assert flags == [False, True, True, False]


def test_nested_member_write_marks_outer_only():
    ast = parse("a.b.c = 1;")
    writes = list(ast.find("member-write"))
    reads = list(ast.find("member-read"))
    assert len(writes) == 1 and writes[0].attrs["prop_name"] == "c"
    assert len(reads) == 1 and reads[0].attrs["prop_name"] == "b"


def test_opaque_constructs_flagged():
    ast = parse("eval(code); const f = new Function('x', 'return x'); with (o) { g(); }")
    calls = [n for n in ast.find("call") if n.attrs.get("opaque")]
    news = [n for n in ast.find("new") if n.attrs.get("opaque")]
    withs = list(ast.find("with"))
    assert len(calls) == 1 and len(news) == 1
    assert len(withs) == 1 and withs[0].attrs["opaque"]


def test_numeric_key_canonicalization():
    assert canonical_number(1.0) == "1"
    assert canonical_number(0.5) == "0.5"
    ast = parse("x[1]; y['1']; ({1: v} = z); obj.w = {1: 'one'};")
    names = set()
    for node in ast.walk():
        name = node.attrs.get("prop_name") or node.attrs.get("key_name")
        if name:
            names.add(name)
    assert names == {"1", "w"}


# -- automatic semicolon insertion ------------------------------------------------


def test_asi_return_newline():
    ast = parse("function f() { return\n1; }")
    ret = next(ast.find("return"))
    assert not ret.attrs["has_argument"]


def test_asi_postfix_restriction():
    ast = parse("a = b\n++c")
    assert len(list(ast.find("update"))) == 1
    assign = next(ast.find("assignment"))
    assert assign.children[1].kind == "identifier"


def test_missing_semicolon_without_newline_is_error():
    with pytest.raises(ParseError):
        parse("let a = 1 let b = 2")


# -- lexer corners ---------------------------------------------------------------


def test_template_tokenization():
    toks = [t for t in tokenize("`a${x}b${y}c`") if t.type == "template"]
    assert [t.template_kind for t in toks] == ["head", "middle", "tail"]
    assert [t.value for t in toks] == ["a", "b", "c"]


def test_regex_vs_divide():
    toks = tokenize("a / b; /ab/g.test(s);")
    assert sum(1 for t in toks if t.type == "regex") == 1


def test_nested_template_braces():
    ast = parse("`outer ${ {inner: `deep ${x}`} } done`")
    outer = ast.children[0].children[0]
    assert outer.kind == "template-literal"
    assert len(outer.children) == 1


# -- scopes ------------------------------------------------------------------------


def _unit(src: str):
    return parse_program([("t.js", src)]).units[0]


def test_shadowing_resolves_to_inner():
    unit = _unit("let x = 1; function f() { let x = 2; return x; }")
    idents = [n for n in unit.ast.walk()
              if n.kind == "identifier" and n.attrs.get("name") == "x"]
    ret_x = idents[-1]
    binding = unit.scopes.use_to_binding[ret_x.node_id]
    fn = next(unit.ast.find("function"))
    assert binding.owner is fn


def test_capture_is_flagged():
    unit = _unit("function outer() { let v = 1; return function inner() { return v; }; }")
    captured = [b for b in unit.scopes.bindings if b.name == "v"]
    assert len(captured) == 1 and captured[0].captured


def test_unresolved_names_are_globals():
    unit = _unit("reachOut(window.top);")
    assert "reachOut" in unit.scopes.globals_by_name
    assert "window" in unit.scopes.globals_by_name


def test_var_hoisting_across_blocks():
    unit = _unit("function f() { { var x = 1; } return x; }")
    uses = [n for n in unit.ast.walk()
            if n.kind == "identifier" and n.attrs.get("name") == "x"]
    bindings = {unit.scopes.binding_for(n) for n in uses}
    assert len(bindings) == 1
    assert "x" not in unit.scopes.globals_by_name


def test_params_bound_per_function():
    unit = _unit("function f(a) { return a; } function g(a) { return a; }")
    fns = list(unit.ast.find("function"))
    a_bindings = {b.owner.node_id for b in unit.scopes.bindings if b.name == "a"}
    assert a_bindings == {fns[0].node_id, fns[1].node_id}


# -- model plumbing ----------------------------------------------------------------


def test_hash_is_content_digest():
    m1 = parse_program([("a.js", "let x = 1;")])
    m2 = parse_program([("b.js", "let x = 1;")])
    assert m1.units[0].hash == m2.units[0].hash


def test_parse_failure_is_diagnostic_not_fatal():
    model = parse_program([("bad.js", "function ("), ("ok.js", "let a = 1;")])
    assert len(model.units) == 1
    assert model.units[0].path == "ok.js"
    assert len(model.diagnostics) == 1
    assert model.diagnostics[0].path == "bad.js"


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        parse_program([])


def test_load_program_ignores_globs(tmp_path):
    (tmp_path / "keep.js").write_text("let a = 1;")
    (tmp_path / "skip.test.js").write_text("let b = 2;")
    sub = tmp_path / "nested"
    sub.mkdir()
    (sub / "deep.mjs").write_text("export const c = 3;")
    (tmp_path / "notes.txt").write_text("not js")
    model = load_program([str(tmp_path)], ignore_globs=["*.test.js"])
    assert sorted(u.path.rsplit("/", 1)[-1] for u in model.units) == ["deep.mjs", "keep.js"]


def test_line_col():
    unit = _unit("let a = 1;\nlet b = 2;")
    assert unit.line_col(0) == (1, 1)
    assert unit.line_col(11) == (2, 1)
    assert unit.offset_of_line(2) == 11


# -- property extraction -----------------------------------------------------------


def test_extraction_examples():
    model = parse_program([("spawn.js", SPAWN_FRAGMENT)])
    names = extract_property_names(model)
    assert {"env", "envPairs", "spawn", "push"} <= names


def test_dynamic_access_contributes_nothing():
    model = parse_program([("t.js", "a[b];")])
    assert extract_property_names(model) == set()


def test_extraction_object_key_flag():
    model = parse_program([("t.js", "const o = { alpha: 1 }; const { beta: b } = o; o.gamma;")])
    full = extract_property_names(model)
    assert {"alpha", "beta", "gamma"} <= full
    no_keys = extract_property_names(model, include_object_keys=False)
    assert "alpha" not in no_keys
    assert {"beta", "gamma"} <= no_keys


@pytest.mark.parametrize("src", SNIPPET_BATTERY)
def test_extraction_matches_token_oracle(src):
    model = parse_program([("t.js", src)])
    assert extract_property_names(model) == oracle_property_names([src])


# -- randomized determinism ---------------------------------------------------------

_names = st.sampled_from(["a", "b", "obj", "key", "env", "opts", "x1"])
_numbers = st.integers(min_value=0, max_value=99).map(str)
_strings = st.text(alphabet=string.ascii_lowercase, min_size=0, max_size=5).map(
    lambda s: f"'{s}'"
)


@st.composite
def _expr(draw, depth=0):
    if depth > 2:
        return draw(st.one_of(_names, _numbers, _strings))
    choice = draw(st.integers(min_value=0, max_value=6))
    if choice == 0:
        return draw(st.one_of(_names, _numbers, _strings))
    if choice == 1:
        return f"{draw(_expr(depth + 1))} + {draw(_expr(depth + 1))}"
    if choice == 2:
        return f"{draw(_names)}.{draw(_names)}"
    if choice == 3:
        return f"{draw(_names)}[{draw(_expr(depth + 1))}]"
    if choice == 4:
        return f"{draw(_names)}({draw(_expr(depth + 1))})"
    if choice == 5:
        return f"{{ {draw(_names)}: {draw(_expr(depth + 1))} }}"
    return f"`t${{{draw(_expr(depth + 1))}}}`"


@st.composite
def _program(draw):
    stmts = draw(st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=5))
    out = []
    for kind in stmts:
        if kind == 0:
            out.append(f"let {draw(_names)} = {draw(_expr())};")
        elif kind == 1:
            out.append(f"{draw(_names)}.{draw(_names)} = {draw(_expr())};")
        elif kind == 2:
            out.append(
                f"function {draw(_names)}({draw(_names)}) {{ return {draw(_expr())}; }}"
            )
        else:
            out.append(f"if ({draw(_expr())}) {{ {draw(_names)}({draw(_expr())}); }}")
    return "\n".join(out)


@settings(max_examples=60, deadline=None)
@given(_program())
def test_random_programs_parse_deterministically(src):
    first = parse(src)
    second = parse(src)
    assert structural_equal(first, second)
    _check_spans(first, len(src))
