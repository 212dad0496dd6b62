# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# random_streams.py - 재현 가능한 난수 블록
# ==============================================================================

"""
Seeded random streams for robustport v1.0

Paths are grouped into blocks of fixed size.  Block i draws from a generator
seeded by SeedSequence(seed, spawn_key=(i,)), so every path sees the same
numbers whatever the number of worker threads.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import MC_BLOCK_SIZE

logger = logging.getLogger(__name__)


def block_sizes(n_paths, block_size=MC_BLOCK_SIZE):
    """Sizes of the fixed path blocks covering n_paths."""
    full, rest = divmod(n_paths, block_size)
    return [block_size] * full + ([rest] if rest else [])


def block_rng(seed, block_index):
    """Generator of one block, derived from (seed, block_index) only."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block_index,))))


def map_blocks(worker, n_paths, seed, n_workers=1, block_size=MC_BLOCK_SIZE):
    """
    Run worker(rng, n) over all blocks and return the results in block order.

    Args:
        worker: Callable (numpy Generator, block path count) -> result
        n_paths: Total number of paths
        seed: Master seed
        n_workers: Thread count; does not change the results
    """
    sizes = block_sizes(n_paths, block_size)
    tasks = [(block_rng(seed, i), n) for i, n in enumerate(sizes)]
    logger.debug("running %d paths in %d blocks on %d workers", n_paths, len(sizes), n_workers)
    if n_workers == 1 or len(tasks) == 1:
        return [worker(rng, n) for rng, n in tasks]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(lambda task: worker(*task), tasks))
