"""Seeded poset generators and exhaustive oracles for tiny instances."""

import logging
from enum import Enum
from itertools import combinations
from typing import Any, Union

import numpy as np
from pydantic import ValidationError

from src.errors import SpecError, TooLargeError
from src.poset import Poset, build_poset, closure_poset
from src.schemas import GenSpec

# Configure logging
logger = logging.getLogger(__name__)

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_1 = 0xBF58476D1CE4E5B9
MIX_2 = 0x94D049BB133111EB

TINY_ORACLE_LIMIT = 12
ELL_ORACLE_LIMIT = 200
ENUMERATION_LIMIT = 5


class Target(str, Enum):
    SET_CHAIN = "set-chain"
    INCOMPARABLE = "incomparable"


def splitmix64(seed: int, count: int) -> np.ndarray:
    """
    First count outputs of the splitmix64 stream started at seed.

    state_i = seed + (i + 1) * 0x9E3779B97F4A7C15 (mod 2^64);
    z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
    output z ^ (z >> 31). All arithmetic wraps at 64 bits.
    """
    steps = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        state = np.uint64(seed % 2**64) + steps * np.uint64(GOLDEN_GAMMA)
        z = (state ^ (state >> np.uint64(30))) * np.uint64(MIX_1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_2)
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, count: int) -> np.ndarray:
    """Doubles in [0, 1): the top 53 bits of each output times 2^-53."""
    return (splitmix64(seed, count) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def parse_spec(data: Union[str, dict[str, Any]]) -> GenSpec:
    """
    Validate a generator spec given as JSON text or a dict.

    Raises:
        SpecError: If the spec is malformed
    """
    try:
        if isinstance(data, str):
            return GenSpec.model_validate_json(data)
        return GenSpec.model_validate(data)
    except ValidationError as exc:
        raise SpecError(f"invalid generator spec: {exc}") from exc


def _random_dag(n: int, p: float, seed: int) -> Poset:
    rows, cols = np.triu_indices(n, k=1)
    adjacency = np.zeros((n, n), dtype=bool)
    adjacency[rows, cols] = uniforms(seed, len(rows)) < p
    return closure_poset(adjacency)


def _layered(widths: list[int], p: float, seed: int) -> Poset:
    n = sum(widths)
    starts = np.concatenate([[0], np.cumsum(widths)]).astype(np.int64)
    draws = uniforms(seed, sum(a * b for a, b in zip(widths, widths[1:])))
    adjacency = np.zeros((n, n), dtype=bool)
    used = 0
    for layer, (lower, upper) in enumerate(zip(widths, widths[1:])):
        block = draws[used:used + lower * upper].reshape(lower, upper) < p
        used += lower * upper
        adjacency[starts[layer]:starts[layer + 1], starts[layer + 1]:starts[layer + 2]] = block
    return closure_poset(adjacency)


def _grid(d1: int, d2: int) -> Poset:
    ids = np.arange(d1 * d2)
    rows, cols = ids // d2, ids % d2
    up = (rows[:, None] <= rows[None, :]) & (cols[:, None] <= cols[None, :])
    np.fill_diagonal(up, False)
    return Poset(up)


def _stacked(base: Poset, copies: int) -> Poset:
    size = base.n
    within = np.kron(np.eye(copies, dtype=np.int64), base.up_matrix.astype(np.int64))
    across = np.kron(np.triu(np.ones((copies, copies), dtype=np.int64), 1), np.ones((size, size), dtype=np.int64))
    return Poset((within + across) > 0)


def generate(spec: Union[GenSpec, dict[str, Any], str]) -> Poset:
    """
    Build the poset a spec describes.

    Models:
        chain: 0 < 1 < ... < n-1
        antichain: n pairwise incomparable elements
        random-dag: each pair u < v (ids) kept with probability p, drawn in
            row-major order from the seeded stream, then closed
        layered: consecutive layers joined pairwise with probability p, then closed
        grid: product order on [d1] x [d2], element (i, j) has id i * d2 + j
        stacked: copies of base, every element of copy i below every element
            of copy j for i < j

    Raises:
        SpecError: If the spec is invalid
    """
    if not isinstance(spec, GenSpec):
        spec = parse_spec(spec)
    if spec.model == "chain":
        poset = build_poset(spec.n, [(i, i + 1) for i in range(spec.n - 1)])
    elif spec.model == "antichain":
        poset = Poset(np.zeros((spec.n, spec.n), dtype=bool))
    elif spec.model == "random-dag":
        poset = _random_dag(spec.n, spec.p, spec.seed)
    elif spec.model == "layered":
        poset = _layered(spec.widths, spec.p, spec.seed)
    elif spec.model == "grid":
        poset = _grid(spec.d1, spec.d2)
    else:
        poset = _stacked(generate(spec.base), spec.copies)
    logger.debug(f"Generated {spec.model} poset: {poset!r}")
    return poset


def _masks(poset: Poset) -> tuple[list[int], list[int]]:
    up, down = poset.up_matrix.tolist(), poset.down_matrix.tolist()
    up_masks = [sum(1 << y for y, flag in enumerate(row) if flag) for row in up]
    down_masks = [sum(1 << y for y, flag in enumerate(row) if flag) for row in down]
    return up_masks, down_masks


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _chain_exists(up_masks: list[int], allowed: int, k: int, size: int) -> bool:
    if k == 0:
        return True
    if bin(allowed).count("1") < k * size:
        return False
    for members in combinations(_bits(allowed), size):
        above = allowed
        for x in members:
            above &= up_masks[x]
        if _chain_exists(up_masks, above, k - 1, size):
            return True
    return False


def _incomparable_exists(free_masks: list[int], allowed: int, k: int, size: int, floor: int) -> bool:
    if k == 0:
        return True
    if bin(allowed).count("1") < k * size:
        return False
    for members in combinations(_bits(allowed), size):
        # families are built in increasing order of their smallest element
        if members[0] <= floor:
            continue
        rest = allowed
        for x in members:
            rest &= free_masks[x]
        if _incomparable_exists(free_masks, rest, k - 1, size, members[0]):
            return True
    return False


def oracle_tiny_best(poset: Poset, k: int, target: Union[Target, str]) -> int:
    """
    Largest s such that k disjoint size-s sets with the target structure exist.

    Exhaustive search with pruning; 0 when not even singletons work.

    Raises:
        TooLargeError: If the poset has more than 12 elements
    """
    target = Target(target)
    n = poset.n
    if n > TINY_ORACLE_LIMIT:
        raise TooLargeError(f"exhaustive oracle limited to n ≤ {TINY_ORACLE_LIMIT}, got {n}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    up_masks, down_masks = _masks(poset)
    everything = (1 << n) - 1
    free_masks = [everything & ~(up_masks[x] | down_masks[x] | 1 << x) for x in range(n)]
    for size in range(n // k, 0, -1):
        if target is Target.SET_CHAIN:
            found = _chain_exists(up_masks, everything, k, size)
        else:
            found = _incomparable_exists(free_masks, everything, k, size, -1)
        if found:
            return size
    return 0


def oracle_ell_order(poset: Poset, ell: int) -> set[tuple[int, int]]:
    """
    Pairs (x, y) with at least ell elements strictly between, by triple loop.

    Raises:
        TooLargeError: If the poset has more than 200 elements
    """
    n = poset.n
    if n > ELL_ORACLE_LIMIT:
        raise TooLargeError(f"ell-order oracle limited to n ≤ {ELL_ORACLE_LIMIT}, got {n}")
    less = poset.up_matrix.tolist()
    pairs = set()
    for x in range(n):
        for y in range(n):
            if not less[x][y]:
                continue
            between = 0
            for z in range(n):
                if less[x][z] and less[z][y]:
                    between += 1
            if between >= ell:
                pairs.add((x, y))
    return pairs


def enumerate_posets(n: int) -> list[Poset]:
    """
    Every labeled strict partial order on n elements (1, 1, 3, 19, 219, 4231).

    Orders on n elements are grown from those on n - 1 by choosing, for the
    new element, a down-closed set below it and an up-closed set above it
    with everything below it also below everything above it.

    Raises:
        TooLargeError: If n > 5
    """
    if n > ENUMERATION_LIMIT:
        raise TooLargeError(f"enumeration limited to n ≤ {ENUMERATION_LIMIT}, got {n}")
    # each order is a tuple of up-set bitmasks
    orders: list[tuple[int, ...]] = [()]
    for size in range(n):
        grown = []
        for up in orders:
            down = [sum(1 << x for x in range(size) if up[x] >> y & 1) for y in range(size)]
            for below in range(1 << size):
                if any(below >> y & 1 and down[y] & ~below for y in range(size)):
                    continue
                for above in range(1 << size):
                    if above & below:
                        continue
                    if any(above >> y & 1 and up[y] & ~above for y in range(size)):
                        continue
                    if any(below >> x & 1 and above & ~up[x] for x in range(size)):
                        continue
                    new_up = tuple(
                        up[x] | (1 << size if below >> x & 1 else 0) for x in range(size)
                    ) + (above,)
                    grown.append(new_up)
        orders = grown
    posets = []
    for up in orders:
        matrix = np.array([[bool(row >> y & 1) for y in range(n)] for row in up], dtype=bool)
        posets.append(Poset(matrix.reshape(n, n)))
    return posets
