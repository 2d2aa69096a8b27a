"""
Deterministic Block Parallelism

Runs a function over a fixed list of work blocks on a thread pool and
returns the results in block order, so reductions never depend on the
number of workers.
"""

import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional, Sequence, TypeVar

from tqdm import tqdm

sys.path.insert(0, str(Path(__file__).parent.parent.parent))
from config import DISTILLATION_CONFIG

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: Optional[int] = None) -> int:
    """Worker count: explicit value, else the configured default."""
    if threads is None:
        threads = DISTILLATION_CONFIG["default_threads"]
    return max(1, int(threads))


def block_map(fn: Callable[[T], R],
              blocks: Sequence[T],
              threads: Optional[int] = None,
              desc: Optional[str] = None) -> List[R]:
    """
    Apply fn to every block.

    Args:
        fn: Pure function of one block
        blocks: Work items, in reduction order
        threads: Worker count (config default if None)
        desc: Progress bar label; no bar when None

    Returns:
        Results in the same order as blocks
    """
    threads = resolve_threads(threads)
    show = desc is not None and len(blocks) > 1

    if threads == 1 or len(blocks) <= 1:
        return [fn(block) for block in tqdm(blocks, desc=desc, disable=not show)]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(tqdm(pool.map(fn, blocks), total=len(blocks), desc=desc, disable=not show))
