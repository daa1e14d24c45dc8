"""Extraction of directly-accessed property names from a program model.

Counts static member reads/writes, constant bracket accesses, destructuring
pattern keys, and (by default) explicit `key: value` object-literal keys.
Dynamic accesses contribute nothing.  Shorthand properties, literal method
names, and class member names do not count as directly-accessed names;
shorthand destructuring still participates in gadget seeding, which works
from the AST rather than from this set.

Numeric keys canonicalize to their decimal string, so `x[1]`, `{1: v}` and
`x["1"]` all contribute "1".
"""

from __future__ import annotations

from .model import ProgramModel


def extract_property_names(
    model: ProgramModel, include_object_keys: bool = True
) -> set[str]:
    names: set[str] = set()
    for unit in model.units:
        for node in unit.ast.walk():
            kind = node.kind
            if kind in ("member-read", "member-write"):
                name = node.attrs.get("prop_name")
                if name is not None:
                    names.add(name)
            elif kind == "pattern-property":
                if not node.attrs["shorthand"]:
                    key = node.attrs.get("key_name")
                    if key is not None:
                        names.add(key)
            elif kind == "property" and include_object_keys:
                if (node.attrs["property_kind"] == "init"
                        and not node.attrs["shorthand"]):
                    key = node.attrs.get("key_name")
                    if key is not None:
                        names.add(key)
    return names


__all__ = ["extract_property_names"]
