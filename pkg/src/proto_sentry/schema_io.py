"""Access to the JSON schemas shipped with the package.

The same documents are mirrored at the repository root under schemas/ for
consumers that never install the package; the two trees are kept identical.
"""

from __future__ import annotations

import json
from importlib import resources

SCHEMA_NAMES = (
    "findings-report",
    "entrypoints-report",
    "gadget-report",
    "props-report",
    "score-report",
    "summaries",
    "probe-config",
    "probe-result",
    "manifest",
)


def load_schema(name: str) -> dict:
    if name not in SCHEMA_NAMES:
        raise ValueError(f"unknown schema {name!r}; expected one of {SCHEMA_NAMES}")
    ref = resources.files("proto_sentry.schemas") / f"{name}.schema.json"
    return json.loads(ref.read_text(encoding="utf-8"))
