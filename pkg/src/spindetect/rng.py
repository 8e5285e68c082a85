"""Deterministic random-number plumbing.

Monte Carlo trials draw from counter-keyed Philox streams: the 128-bit key
is ``master_seed * 2**64 + stream * 2**32 + trial``, so every
(seed, stream, trial) triple owns a disjoint stream and parallel or serial
execution orders produce identical results.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

MAX_SEED = 2**64
MAX_STREAM = 2**32
MAX_TRIAL = 2**32

Seed = "int | np.random.Generator"


def check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)):
        raise DomainError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= seed < MAX_SEED:
        raise DomainError(f"seed must lie in [0, 2**64), got {seed}")
    return int(seed)


def as_generator(seed) -> np.random.Generator:
    """Accept an integer seed or a ready Generator and return a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(check_seed(seed))


def trial_rng(master_seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    """Generator for one Monte Carlo trial, disjoint from all other trials.

    `stream` separates independent experiment cells (e.g. grid points of a
    sweep) running under the same master seed.
    """
    master_seed = check_seed(master_seed)
    if not 0 <= trial < MAX_TRIAL:
        raise DomainError(f"trial index must lie in [0, 2**32), got {trial}")
    if not 0 <= stream < MAX_STREAM:
        raise DomainError(f"stream index must lie in [0, 2**32), got {stream}")
    key = (master_seed << 64) | (stream << 32) | trial
    return np.random.Generator(np.random.Philox(key=key))
