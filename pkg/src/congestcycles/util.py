"""Small shared helpers: seed derivation and canonical JSON."""

from __future__ import annotations

import hashlib
import json

SCHEMA_VERSION = 1


def derive_seed(*parts) -> int:
    """Stable 63-bit seed derived from a root seed and a tag path.

    Used everywhere a trial, phase, or stage needs its own RNG stream so that
    any single trial can be replayed from the (root seed, tag) pair alone.
    """
    text = "/".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def canonical_json(obj) -> str:
    """Deterministic JSON rendering (sorted keys, minimal separators)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
