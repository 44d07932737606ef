"""Deterministic seed derivation and Poisson draws.

Every random decision in the pipeline runs on a `random.Random` seeded
from a stable hash of (run seed, document, slice, draw, purpose), so
output never depends on worker count or iteration order.
"""

from __future__ import annotations

import hashlib
import math
import random


def derive_seed(*parts) -> int:
    """63-bit seed derived from the given parts (stable across runs/platforms)."""
    key = "\x1f".join(str(p) for p in parts).encode("utf-8")
    digest = hashlib.sha256(key).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def poisson(rng: random.Random, lam: float) -> int:
    """Knuth's Poisson sampler; exact for the small lambdas used here."""
    threshold = math.exp(-lam)
    k, p = 0, 1.0
    while True:
        p *= rng.random()
        if p <= threshold:
            return k
        k += 1
