"""Canonical JSON serialization and state hashing.

All persisted artifacts (world saves, session logs, scorecards) go through
canonical_dumps so that byte-identical output is a meaningful determinism
check: keys sorted, no whitespace, floats via repr (shortest round-trip).
"""

from __future__ import annotations

import hashlib
import json
from typing import Any


def canonical_dumps(doc: Any) -> str:
    """Serialize with sorted keys and compact separators.

    json.dumps already emits shortest round-trip float repr on CPython 3;
    NaN/Infinity are rejected because they are not valid JSON.
    """
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False)


def canonical_loads(text: str) -> Any:
    return json.loads(text)


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def doc_hash(doc: Any) -> str:
    return sha256_hex(canonical_dumps(doc))


def state_hash(world_doc: dict) -> str:
    """Hash of a serialized world, excluding volatile bookkeeping.

    tick and action_history are excluded: the hash identifies the physical
    state so that a failed action (which still advances the clock and log)
    can be checked for atomicity by comparing hashes before and after.
    """
    trimmed = {
        k: v for k, v in world_doc.items() if k not in ("tick", "action_history")
    }
    return doc_hash(trimmed)
