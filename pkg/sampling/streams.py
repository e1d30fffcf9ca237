"""
Counter-based uniform streams.

Replication r of a Monte Carlo run always reads its uniforms from block
r // block_size of the (seed, block) keyed Philox stream, so a replication's
data depends only on (seed, r) and never on the thread count or total reps.
"""

import sys
from pathlib import Path
from typing import Iterator, Tuple, Union

import numpy as np

# Add parent directory to path for config import
sys.path.append(str(Path(__file__).parent.parent))
from config import SIMULATION_CONFIG

SEED_MASK = (1 << 64) - 1
_RESOLUTION = float(1 << 52)


def block_stream(seed: int, block: int) -> np.random.Generator:
    """Independent Philox generator for one block of replications."""
    seq = np.random.SeedSequence([int(seed) & SEED_MASK, int(block)])
    return np.random.Generator(np.random.Philox(seq))


def make_stream(seed: int) -> np.random.Generator:
    """Single stream for ad-hoc draws (tests, goodness-of-fit checks)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed) & SEED_MASK)))


def uniform_open(rng: np.random.Generator, size: Union[int, Tuple[int, ...], None] = None) -> np.ndarray:
    """Uniforms on the open interval (0, 1) with 52-bit resolution."""
    bits = rng.integers(0, 1 << 52, size=size, dtype=np.uint64)
    return (bits.astype(np.float64) + 0.5) / _RESOLUTION


def iter_blocks(reps: int, block_size: int = None) -> Iterator[Tuple[int, int, int]]:
    """Yield (block index, first replication, block length) covering 0..reps-1."""
    block_size = block_size or SIMULATION_CONFIG['block_size']
    for block, start in enumerate(range(0, reps, block_size)):
        yield block, start, min(block_size, reps - start)
