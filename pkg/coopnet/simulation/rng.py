"""Counter-based random streams keyed by (seed, stream kind, index).

Every realization or block owns a Philox stream derived only from the master
seed and its own index, so estimates do not depend on how work is split
between workers.
"""
from __future__ import annotations

import numpy as np

_REALIZATION_STREAM = 0
_BLOCK_STREAM = 1


def _philox(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def realization_generator(seed: int, index: int) -> np.random.Generator:
    return _philox(seed, _REALIZATION_STREAM, index)


def block_generator(seed: int, block: int) -> np.random.Generator:
    return _philox(seed, _BLOCK_STREAM, block)


def block_ranges(total: int, block_size: int) -> list[tuple[int, int, int]]:
    """``(block index, start, stop)`` triples covering ``range(total)``."""
    return [(index, start, min(total, start + block_size)) for index, start in enumerate(range(0, total, block_size))]
