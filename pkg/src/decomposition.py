"""Longest chains, Mirsky antichain levels and monotone subsequences."""

import logging
import operator
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from src.errors import EmptyError
from src.poset import Poset, Subset

# Configure logging
logger = logging.getLogger(__name__)

Comparator = Callable[[Any, Any], bool]


@dataclass(frozen=True)
class MirskyDecomposition:
    """
    Partition of a poset into antichain levels.

    Attributes:
        levels: levels[i] holds the elements whose longest chain ending at
            them has i + 1 elements
        height: Length of the longest chain
        rank: rank[x] is the 1-based level of x
    """

    levels: tuple[Subset, ...]
    height: int
    rank: tuple[int, ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.levels)


def _ranks(poset: Poset) -> np.ndarray:
    ranks = np.zeros(poset.n, dtype=np.int64)
    down = poset.down_matrix
    for x in poset.linear_extension():
        below = ranks[down[x]]
        ranks[x] = 1 + (int(below.max()) if below.size else 0)
    return ranks


def mirsky(poset: Poset) -> MirskyDecomposition:
    """
    Split the poset into levels by longest-chain length.

    Levels come from one dynamic program over the linear extension, so
    x < y always puts x on a strictly lower level than y.

    Args:
        poset: The order

    Returns:
        MirskyDecomposition: Levels, height and per-element rank
    """
    ranks = _ranks(poset)
    height = int(ranks.max()) if poset.n else 0
    levels = tuple(
        tuple(np.flatnonzero(ranks == level).tolist()) for level in range(1, height + 1)
    )
    return MirskyDecomposition(levels=levels, height=height, rank=tuple(ranks.tolist()))


def height(poset: Poset) -> int:
    return int(_ranks(poset).max()) if poset.n else 0


def largest_level(poset: Poset) -> Subset:
    """
    Largest Mirsky level, the earliest one on ties.

    Raises:
        EmptyError: If the poset has no elements
    """
    if poset.n == 0:
        raise EmptyError("largest_level needs at least one element")
    decomposition = mirsky(poset)
    return decomposition.levels[int(np.argmax(decomposition.sizes))]


def longest_chain(poset: Poset) -> Subset:
    """
    A longest chain, listed bottom to top.

    Starts from the smallest id on the top level and repeatedly steps to the
    smallest id one level down that lies below the current element.
    """
    if poset.n == 0:
        return ()
    ranks = _ranks(poset)
    top = int(ranks.max())
    current = int(np.flatnonzero(ranks == top)[0])
    chain = [current]
    down = poset.down_matrix
    for level in range(top - 1, 0, -1):
        current = int(np.flatnonzero(down[current] & (ranks == level))[0])
        chain.append(current)
    return tuple(reversed(chain))


@dataclass(frozen=True)
class MonotoneRun:
    """A monotone subsequence, by position in the input list."""

    indices: tuple[int, ...]
    values: tuple[Any, ...]
    increasing: bool

    def __len__(self) -> int:
        return len(self.indices)


def _longest_increasing(values: Sequence[Any], less: Comparator) -> tuple[int, ...]:
    # starts[i]: length of the longest increasing run that begins at i
    starts = [0] * len(values)
    heads: list[Any] = []
    for i in range(len(values) - 1, -1, -1):
        x = values[i]
        lo, hi = 0, len(heads)
        while lo < hi:
            mid = (lo + hi) // 2
            if less(x, heads[mid]):
                lo = mid + 1
            else:
                hi = mid
        starts[i] = lo + 1
        if lo == len(heads):
            heads.append(x)
        else:
            heads[lo] = x

    need = len(heads)
    picked: list[int] = []
    for i, x in enumerate(values):
        if need == 0:
            break
        if starts[i] == need and (not picked or less(values[picked[-1]], x)):
            picked.append(i)
            need -= 1
    return tuple(picked)


def erdos_szekeres(items: Sequence[Any], less: Comparator = operator.lt) -> MonotoneRun:
    """
    Longest monotone subsequence of a list under a strict total order.

    The result has at least ceil(sqrt(m)) items for m items with distinct
    labels. An increasing run wins over a decreasing one of equal length,
    and among runs of the winning kind the lexicographically first index
    tuple is returned.

    Args:
        items: Labels in list order
        less: Strict total order on the labels

    Returns:
        MonotoneRun: Indices and values of the run, and its direction
    """
    values = list(items)
    rising = _longest_increasing(values, less)
    falling = _longest_increasing(values, lambda a, b: less(b, a))
    increasing = len(rising) >= len(falling)
    indices = rising if increasing else falling
    logger.debug(
        f"Monotone run over {len(values)} items: "
        f"increasing={len(rising)}, decreasing={len(falling)}"
    )
    return MonotoneRun(
        indices=indices,
        values=tuple(values[i] for i in indices),
        increasing=increasing,
    )
