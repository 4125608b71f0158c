"""Deterministic seed splitting.

All randomness in the package flows through `rng_for`, so a run is
reproducible bit-for-bit from a single 64-bit master seed.  Child seeds are
derived by hashing the master seed together with a name path, which keeps
independent subsystems decorrelated without any shared-state generator.
"""

from __future__ import annotations

import hashlib
import random


def split(seed: int, *tokens: object) -> int:
    """Derive a 64-bit child seed from `seed` and a path of tokens."""
    h = hashlib.sha256()
    h.update(str(int(seed)).encode())
    for tok in tokens:
        h.update(b"/")
        h.update(repr(tok).encode())
    return int.from_bytes(h.digest()[:8], "big")


def rng_for(seed: int, *tokens: object) -> random.Random:
    """A `random.Random` seeded from `split(seed, *tokens)`."""
    return random.Random(split(seed, *tokens))
