"""Seed derivation: every random stream is a pure function of (seed, purpose, index)."""
from __future__ import annotations

import zlib

import numpy as np


def stream(seed: int, purpose: str, index: int = 0) -> np.random.Generator:
    """Independent generator for one replica/instance; insensitive to execution order."""
    if seed < 0 or index < 0:
        raise ValueError("seed and index must be non-negative")
    tag = zlib.crc32(purpose.encode())
    return np.random.default_rng(np.random.SeedSequence([int(seed), tag, int(index)]))
