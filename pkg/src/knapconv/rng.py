"""Seeded, splittable random streams.

Every randomized step asks for ``stream(seed, *path)``, where ``path`` names the
step (say ``("bucket", rep)``).  Streams for different paths are independent
and a fixed ``(seed, path)`` always yields the same numbers.
"""

from __future__ import annotations

import os
import zlib

import numpy as np

DEFAULT_SEED = 0x5EED


def _key(part) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode())
    return int(part) & 0xFFFFFFFFFFFFFFFF


def stream(seed: int, *path) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF,
                                spawn_key=tuple(_key(p) for p in path))
    return np.random.Generator(np.random.PCG64(ss))


def env_seed(default: int = DEFAULT_SEED) -> int:
    """``KNAP_SEED`` from the environment, else ``default``."""
    raw = os.environ.get("KNAP_SEED")
    if raw is None or raw.strip() == "":
        return default
    return int(raw, 0)
