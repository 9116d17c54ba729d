"""Derive independent 64-bit seeds from a root seed and a key path."""

from __future__ import annotations

import hashlib
import random


def derive_seed(root: int, *keys: object) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(root)).encode())
    for k in keys:
        h.update(b"\x1f")
        h.update(str(k).encode())
    return int.from_bytes(h.digest(), "big")


def rng_for(root: int, *keys: object) -> random.Random:
    return random.Random(derive_seed(root, *keys))
