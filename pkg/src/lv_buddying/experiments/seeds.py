"""Per-cell seeds derived from a master seed and the cell's coordinates."""

from __future__ import annotations

import hashlib
from datetime import date


def _token(value: object) -> str:
    if isinstance(value, date):
        return value.isoformat()
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):  # enums
        return str(value.value)
    return str(value)


def derive_seed(master_seed: int, *coordinates: object) -> int:
    """Stable 63-bit seed; adding cells elsewhere never changes an existing cell's seed."""

    text = "\x1f".join([str(master_seed), *(_token(c) for c in coordinates)])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
