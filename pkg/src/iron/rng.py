"""Counter-based random streams keyed by (master seed, particle block, step).

Every draw comes from a fresh Philox generator whose key is derived from
the triple, so results do not depend on thread scheduling or on the order
in which particles are processed.
"""
from __future__ import annotations

import numpy as np


def step_generator(seed: int, block: int, step: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(block), int(step)))
    return np.random.Generator(np.random.Philox(seq))


def block_ranges(n_particles: int, block_size: int) -> list[tuple[int, int, int]]:
    """Split particles into (block index, start, stop) ranges of at most block_size."""
    return [
        (i, start, min(start + block_size, n_particles))
        for i, start in enumerate(range(0, n_particles, block_size))
    ]


def init_generator(seed: int, block: int) -> np.random.Generator:
    """Stream for initial particle positions, disjoint from every step stream."""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(block), 0, 1))
    return np.random.Generator(np.random.Philox(seq))
