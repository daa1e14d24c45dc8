"""Taint labels and their propagation classes.

Four labels, two per query family.  Pollution queries track attacker input
(`input`) and control of a prototype object (`proto`); gadget queries track
values read from polluted properties (`polluted`) and objects that contain
such values (`receiver`).  Per dataflow node the label set is a powerset
lattice; join is set union.

Propagation classes:
  - DEEP: survives reading a property off a labeled base object, and survives
    element membership in literals (the attacker controls the whole object,
    so anything inside it is attacker-reachable).
  - STRINGY: survives string/arithmetic operators and template literals
    (concatenating attacker text keeps it attacker text).
  - Everything flows through value-preserving edges: assignment, parameter
    and return passing, conditional/logical/sequence results, field
    store/load pairs, and built-in summary flows.

`proto` is intentionally in neither class: control of a prototype object is
destroyed by string operations and is not implied by being stored inside a
controlled object.
"""

from __future__ import annotations

INPUT = "input"
PROTO = "proto"
POLLUTED = "polluted"
RECEIVER = "receiver"

ALL_LABELS = frozenset({INPUT, PROTO, POLLUTED, RECEIVER})
POLLUTION_LABELS = frozenset({INPUT, PROTO})
GADGET_LABELS = frozenset({POLLUTED, RECEIVER})

DEEP_LABELS = frozenset({INPUT, POLLUTED})
STRINGY_LABELS = frozenset({INPUT, POLLUTED})

EMPTY: frozenset[str] = frozenset()


def join(a: frozenset[str], b: frozenset[str]) -> frozenset[str]:
    if not b:
        return a
    if not a:
        return b
    return a | b


__all__ = [
    "INPUT", "PROTO", "POLLUTED", "RECEIVER",
    "ALL_LABELS", "POLLUTION_LABELS", "GADGET_LABELS",
    "DEEP_LABELS", "STRINGY_LABELS", "EMPTY", "join",
]
