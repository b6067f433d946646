"""Seed handling.

Every stochastic component takes a plain integer seed and builds a
numpy PCG64 generator from it, so results are reproducible across runs
and platforms.  A single run seed fans out to named sub-seeds (split,
folds, smote, per-model streams) via SHA-256 of the label, which keeps
the streams independent and insensitive to evaluation order.
"""

from __future__ import annotations

import hashlib

import numpy as np

_SEED_MASK = (1 << 63) - 1


def generator(seed: int) -> np.random.Generator:
    """PCG64 generator for ``seed``; the package never uses the global numpy RNG."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def sub_seed(seed: int, label: str) -> int:
    """Derive the named child seed of ``seed`` for stream ``label``."""
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    entropy = int.from_bytes(digest[:8], "big")
    ss = np.random.SeedSequence([int(seed) & _SEED_MASK, entropy])
    return int(ss.generate_state(1, np.uint64)[0]) & _SEED_MASK
