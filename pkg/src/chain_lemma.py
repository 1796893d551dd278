"""Shifted orders and the chain-of-sets or sparse-core dichotomy."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from src.decomposition import largest_level, longest_chain
from src.errors import InvariantError, PreconditionError, RangeError
from src.poset import Poset, Subset, SubsetFamily, count_between

# Configure logging
logger = logging.getLogger(__name__)


class Lemma6Variant(str, Enum):
    SET_CHAIN = "set-chain"
    SPARSE_DOWN = "sparse-down"
    SPARSE_UP = "sparse-up"


@dataclass(frozen=True)
class Lemma6Outcome:
    """
    Result of the chain-or-sparse-core dichotomy.

    Attributes:
        variant: Which side of the dichotomy was reached
        ell: The shift used
        family: For SET_CHAIN, k ascending sets of exactly ell elements
        chain: For SET_CHAIN, the certificate x_1 <_ell ... <_ell x_{k+1}
        core: For the sparse variants, the set Q in the input's ids
        degree_bound: For the sparse variants, 4 * sqrt(|Q| * ell)
    """

    variant: Lemma6Variant
    ell: int
    family: Optional[SubsetFamily] = None
    chain: Subset = ()
    core: Subset = ()
    degree_bound: Optional[float] = None


def between_counts(poset: Poset) -> np.ndarray:
    return count_between(poset.up_matrix)


def between_count(poset: Poset, x: int, y: int) -> int:
    """Number of elements strictly between x and y (zero unless x < y)."""
    x, y = poset.check(x), poset.check(y)
    if not poset.up_matrix[x, y]:
        return 0
    return int(np.count_nonzero(poset.up_matrix[x] & poset.down_matrix[y]))


def ell_order(poset: Poset, ell: int, between: Optional[np.ndarray] = None) -> Poset:
    """
    Shifted order: x <_ell y iff at least ell elements lie strictly between.

    Args:
        poset: The order
        ell: Shift, at least 1
        between: Precomputed between-counts of poset, if the caller has them

    Raises:
        RangeError: If ell < 1
        InvariantError: If the shifted relation is not transitive
    """
    if ell < 1:
        raise RangeError(f"shift must be at least 1, got {ell}")
    counts = between_counts(poset) if between is None else between
    relation = counts >= ell
    weights = relation.astype(np.float64)
    if (((weights @ weights) > 0) & ~relation).any():
        logger.error(f"Shifted order with ell={ell} is not transitive")
        raise InvariantError(f"<_{ell} is not transitive")
    return Poset(relation)


def _set_chain(poset: Poset, chain: Subset, k: int, ell: int) -> Lemma6Outcome:
    chain = chain[: k + 1]
    up, down = poset.up_matrix, poset.down_matrix
    sets = []
    for x, y in zip(chain, chain[1:]):
        witnesses = np.flatnonzero(up[x] & down[y])[:ell]
        if len(witnesses) != ell:
            raise InvariantError(f"only {len(witnesses)} elements between {x} and {y}")
        sets.append(tuple(witnesses.tolist()))
    family = SubsetFamily(tuple(sets), poset.n)
    shared = family.first_overlap()
    if shared is not None:
        logger.error(f"Set chain reuses element {shared}")
        raise InvariantError(f"set chain sets share element {shared}")
    logger.info(f"Set chain of {k} sets of size {ell} found")
    return Lemma6Outcome(
        variant=Lemma6Variant.SET_CHAIN, ell=ell, family=family, chain=chain
    )


def _sparse_core(poset: Poset, order: Poset, k: int, ell: int) -> Lemma6Outcome:
    n = poset.n
    level = np.asarray(largest_level(order), dtype=np.int64)
    size = len(level)
    inner = poset.up_matrix[np.ix_(level, level)]
    down_degree = inner.sum(axis=0)
    up_degree = inner.sum(axis=1)

    triples = int((down_degree * up_degree).sum())
    if 2 * triples >= size * size * ell:
        logger.error(f"Triple count {triples} too large on an antichain of <_{ell}")
        raise InvariantError("triple bound on the shifted antichain failed")

    low_down = down_degree * down_degree < 4 * size * ell
    low_up = up_degree * up_degree < 4 * size * ell
    if low_down.sum() >= low_up.sum():
        variant, chosen = Lemma6Variant.SPARSE_DOWN, low_down
    else:
        variant, chosen = Lemma6Variant.SPARSE_UP, low_up
    core = level[chosen]

    needed = -(-7 * n // (16 * k))
    if len(core) < needed:
        logger.error(f"Sparse core has {len(core)} elements, needed {needed}")
        raise InvariantError(f"sparse core smaller than ceil(7n/(16k)) = {needed}")

    block = poset.up_matrix[np.ix_(core, core)]
    degrees = block.sum(axis=0 if variant is Lemma6Variant.SPARSE_DOWN else 1)
    worst = int(degrees.max()) if len(core) else 0
    if worst * worst >= 16 * len(core) * ell:
        logger.error(f"Core degree {worst} breaks the 4*sqrt(|Q|*ell) bound")
        raise InvariantError("sparse core degree bound failed")

    logger.info(
        f"No {k + 1}-chain in <_{ell}; {variant.value} core of {len(core)} "
        f"from a level of {size}"
    )
    return Lemma6Outcome(
        variant=variant,
        ell=ell,
        core=tuple(core.tolist()),
        degree_bound=4 * math.sqrt(len(core) * ell),
    )


def lemma6(
    poset: Poset, k: int, ell: int, between: Optional[np.ndarray] = None
) -> Lemma6Outcome:
    """
    Find k ascending sets of size ell, or a large core of small degree.

    Follows the constructive proof: a (k+1)-chain in <_ell yields the sets
    from the ell smallest ids strictly between consecutive chain elements.
    Otherwise the largest antichain level P' of <_ell is taken and the
    elements of P' with down-degree (or up-degree) in P' below
    2 * sqrt(|P'| * ell) form the core, the down side winning ties.

    Args:
        poset: The order
        k: Number of sets, at least 1
        ell: Set size, at least 1, with ell * k < n
        between: Precomputed between-counts of poset, if available

    Returns:
        Lemma6Outcome: The variant reached and its certificate

    Raises:
        PreconditionError: If ell * k >= n
        InvariantError: If a proven bound fails on the output
    """
    if k < 1:
        raise RangeError(f"k must be at least 1, got {k}")
    if ell < 1:
        raise RangeError(f"ell must be at least 1, got {ell}")
    if ell * k >= poset.n:
        raise PreconditionError([f"ℓ < |P|/k (ℓ={ell}, k={k}, |P|={poset.n})"])

    counts = between_counts(poset) if between is None else between
    order = ell_order(poset, ell, counts)
    chain = longest_chain(order)
    if len(chain) >= k + 1:
        return _set_chain(poset, chain, k, ell)
    return _sparse_core(poset, order, k, ell)
