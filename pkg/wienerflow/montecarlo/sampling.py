"""Counter-based standard Gaussian sampling.

Sample ``i`` of stream ``seed`` is row ``i % BLOCK_SIZE`` of block
``i // BLOCK_SIZE``; each block is drawn from a Philox generator keyed by
``(block << 64) | seed``. Any sample can be regenerated from its index alone,
and a batch is the same array whatever the number of workers.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, TypeVar

import numpy as np

BLOCK_SIZE = 4096
_SEED_LIMIT = 1 << 64

T = TypeVar("T")


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < _SEED_LIMIT:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def block_generator(seed: int, block: int) -> np.random.Generator:
    key = (int(block) << 64) | _check_seed(seed)
    return np.random.Generator(np.random.Philox(key=key))


def gaussian_block(seed: int, block: int, dim: int) -> np.ndarray:
    """The full (BLOCK_SIZE, dim) block of standard normals."""
    return block_generator(seed, block).standard_normal((BLOCK_SIZE, dim))


def block_spans(start: int, n: int) -> Iterator[tuple[int, int, int]]:
    """(block, first row, last row + 1) covering samples start..start+n-1."""
    index = start
    stop = start + n
    while index < stop:
        block = index // BLOCK_SIZE
        lo = index - block * BLOCK_SIZE
        hi = min(BLOCK_SIZE, stop - block * BLOCK_SIZE)
        yield block, lo, hi
        index = block * BLOCK_SIZE + hi


def map_blocks(fn: Callable[[int, int, int], T], start: int, n: int, workers: int = 1) -> list[T]:
    """Apply fn(block, lo, hi) to every span, results in span order."""
    spans = list(block_spans(start, n))
    if workers <= 1 or len(spans) == 1:
        return [fn(*span) for span in spans]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda span: fn(*span), spans))


def sample_gaussian(dim: int, n: int, seed: int, start: int = 0, workers: int = 1) -> np.ndarray:
    """n i.i.d. N(0, I_dim) vectors: samples start..start+n-1 of the stream."""
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")
    parts = map_blocks(
        lambda block, lo, hi: gaussian_block(seed, block, dim)[lo:hi], start, n, workers
    )
    return np.concatenate(parts, axis=0)


def sample_at(dim: int, index: int, seed: int) -> np.ndarray:
    """The single sample with the given index."""
    return sample_gaussian(dim, 1, seed, start=index)[0]
