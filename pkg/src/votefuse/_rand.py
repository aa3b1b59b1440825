"""Deterministic chunked sampling shared by every Monte Carlo estimator.

Trials are always processed in fixed-size chunks, and each chunk gets its own
generator seeded by (seed, chunk_index). The stream a trial sees therefore
depends only on the seed and the trial's position in the budget, never on
scheduling: serial runs, restarts, and any parallel split of the chunks
produce bit-identical estimates.
"""

from __future__ import annotations

import numpy as np

CHUNK = 1 << 16


def chunk_sizes(trials: int) -> list[int]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    full, rest = divmod(trials, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.default_rng([seed, chunk_index])
