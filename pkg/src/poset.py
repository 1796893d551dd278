"""Strict partial orders on the ground set [0, n), stored as dense closure matrices."""

import heapq
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Union

import numpy as np

from src.errors import CycleError, OverlapError, RangeError, UsageError

# Configure logging
logger = logging.getLogger(__name__)

Subset = tuple[int, ...]


class Neighborhood(str, Enum):
    """Neighborhood query kinds."""

    DOWN_ELEMENT = "down-element"
    UP_ELEMENT = "up-element"
    DOWN_SET = "down-set"


class Claim(str, Enum):
    """Structures a family of sets can be checked against."""

    ASCENDING_CHAIN = "ascending-chain"
    DESCENDING_CHAIN = "descending-chain"
    TOTALLY_INCOMPARABLE = "totally-incomparable"


def count_between(up: np.ndarray) -> np.ndarray:
    """
    Count the elements strictly between every ordered pair.

    The (x, y) entry of up @ up is |{z : x < z < y}|. The product runs in
    float64 so BLAS does the work; counts are exact below 2**53.

    Args:
        up: Closure matrix with up[x, y] true iff x < y

    Returns:
        np.ndarray: int64 matrix of between-counts (zero unless x < y)
    """
    weights = up.astype(np.float64)
    return np.rint(weights @ weights).astype(np.int64)


def _transitive_closure(adjacency: np.ndarray) -> np.ndarray:
    closure = adjacency.copy()
    while True:
        weights = closure.astype(np.float64)
        grown = closure | ((weights @ weights) > 0)
        if np.array_equal(grown, closure):
            return closure
        closure = grown


class Poset:
    """
    Immutable strict partial order on the elements 0..n-1.

    Row x of the up matrix is the up-set U(x); row x of the down matrix
    (the transpose) is the down-set D(x). Both arrays are read-only.
    The constructor trusts its input to be a closed strict order; use
    build_poset or closure_poset to build one from arbitrary relations.
    """

    def __init__(self, up: np.ndarray):
        up = np.array(up, dtype=bool, copy=True)
        if up.ndim != 2 or up.shape[0] != up.shape[1]:
            raise ValueError(f"closure matrix must be square, got shape {up.shape}")
        up.setflags(write=False)
        down = np.ascontiguousarray(up.T)
        down.setflags(write=False)
        self._up = up
        self._down = down

    @property
    def n(self) -> int:
        return self._up.shape[0]

    @property
    def up_matrix(self) -> np.ndarray:
        return self._up

    @property
    def down_matrix(self) -> np.ndarray:
        return self._down

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._up, other._up)

    def __hash__(self) -> int:
        return hash((self.n, np.packbits(self._up).tobytes()))

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, comparable_pairs={int(self._up.sum())})"

    def check(self, x: int) -> int:
        """Return x as an int, raising RangeError when it is not an element."""
        if not 0 <= x < self.n:
            raise RangeError(f"element {x} outside [0, {self.n})")
        return int(x)

    def check_subset(self, subset: Iterable[int]) -> Subset:
        """Return the subset sorted and deduplicated, validating every id."""
        return tuple(sorted({self.check(x) for x in subset}))

    def less(self, x: int, y: int) -> bool:
        return bool(self._up[self.check(x), self.check(y)])

    def comparable(self, x: int, y: int) -> bool:
        x, y = self.check(x), self.check(y)
        return bool(self._up[x, y] or self._up[y, x])

    def down(self, x: int) -> Subset:
        return tuple(np.flatnonzero(self._down[self.check(x)]).tolist())

    def up(self, x: int) -> Subset:
        return tuple(np.flatnonzero(self._up[self.check(x)]).tolist())

    def incomparable_to(self, x: int) -> Subset:
        x = self.check(x)
        mask = ~(self._up[x] | self._down[x])
        mask[x] = False
        return tuple(np.flatnonzero(mask).tolist())

    def down_set_mask(self, members: Sequence[int]) -> np.ndarray:
        """Boolean mask of D(S): elements outside S strictly below some member."""
        index = np.asarray(members, dtype=np.int64)
        mask = self._down[index].any(axis=0)
        mask[index] = False
        return mask

    def down_set(self, subset: Iterable[int]) -> Subset:
        members = self.check_subset(subset)
        return tuple(np.flatnonzero(self.down_set_mask(members)).tolist())

    def down_degrees(self) -> np.ndarray:
        return self._down.sum(axis=1)

    def up_degrees(self) -> np.ndarray:
        return self._up.sum(axis=1)

    def restrict(self, members: Sequence[int]) -> "Poset":
        """Order restricted to members, renumbered by position in members."""
        index = np.asarray(members, dtype=np.int64)
        return Poset(self._up[np.ix_(index, index)])

    def dual(self) -> "Poset":
        return Poset(self._down)

    def linear_extension(self) -> Subset:
        """Topological order that always emits the smallest available id."""
        remaining = self._down.sum(axis=1)
        ready = np.flatnonzero(remaining == 0).tolist()
        heapq.heapify(ready)
        order = []
        while ready:
            x = heapq.heappop(ready)
            order.append(x)
            above = self._up[x]
            remaining[above] -= 1
            for y in np.flatnonzero(above & (remaining == 0)).tolist():
                heapq.heappush(ready, y)
        return tuple(order)

    @cached_property
    def cover_pairs(self) -> tuple[tuple[int, int], ...]:
        """Hasse edges, computed on first use."""
        covers = self._up & (count_between(self._up) == 0)
        return tuple((int(x), int(y)) for x, y in np.argwhere(covers))


@dataclass(frozen=True)
class SubsetFamily:
    """
    Ordered list of subsets of [0, n).

    Each member set is stored sorted and deduplicated. Disjointness is not
    enforced here; verify_structure checks it.
    """

    sets: tuple[Subset, ...]
    n: int

    def __post_init__(self):
        normalized = tuple(tuple(sorted({int(x) for x in s})) for s in self.sets)
        for members in normalized:
            for x in members:
                if not 0 <= x < self.n:
                    raise RangeError(f"family member {x} outside [0, {self.n})")
        object.__setattr__(self, "sets", normalized)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[Subset]:
        return iter(self.sets)

    def __getitem__(self, index: int) -> Subset:
        return self.sets[index]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.sets)

    @property
    def min_size(self) -> int:
        return min(self.sizes, default=0)

    def union(self) -> Subset:
        return tuple(sorted({x for s in self.sets for x in s}))

    def reversed(self) -> "SubsetFamily":
        return SubsetFamily(tuple(reversed(self.sets)), self.n)

    def first_overlap(self) -> Optional[int]:
        """Smallest element that belongs to two member sets, if any."""
        seen = np.zeros(self.n, dtype=np.int64)
        for members in self.sets:
            if members:
                seen[list(members)] += 1
        shared = np.flatnonzero(seen > 1)
        return int(shared[0]) if shared.size else None


class Verification(NamedTuple):
    """Outcome of an exhaustive structure check."""

    ok: bool
    counterexample: Optional[tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.ok


def closure_poset(adjacency: np.ndarray) -> Poset:
    """
    Close a boolean relation matrix transitively and wrap it as a Poset.

    Raises:
        CycleError: If the closure puts some element below itself
    """
    closure = _transitive_closure(np.asarray(adjacency, dtype=bool))
    looped = np.flatnonzero(np.diagonal(closure))
    if looped.size:
        x = int(looped[0])
        raise CycleError(f"relations force {x} < {x}")
    return Poset(closure)


def build_poset(n: int, relations: Iterable[Sequence[int]]) -> Poset:
    """
    Build the transitive closure of the given strict relations.

    Args:
        n: Number of elements
        relations: Pairs (u, v) meaning u < v

    Returns:
        Poset: The closed order

    Raises:
        RangeError: If n is negative or a pair has an id outside [0, n)
        CycleError: If a pair is (u, u) or the closure contains a cycle
    """
    if n < 0:
        raise RangeError(f"element count must be nonnegative, got {n}")
    if not isinstance(relations, np.ndarray):
        relations = list(relations)
    pairs = np.asarray(relations, dtype=np.int64).reshape(-1, 2)

    outside = ((pairs < 0) | (pairs >= n)).any(axis=1)
    if outside.any():
        u, v = pairs[np.flatnonzero(outside)[0]].tolist()
        raise RangeError(f"relation ({u}, {v}) has an id outside [0, {n})")

    loops = pairs[:, 0] == pairs[:, 1]
    if loops.any():
        u = int(pairs[np.flatnonzero(loops)[0], 0])
        raise CycleError(f"relation ({u}, {u}) puts an element below itself")

    adjacency = np.zeros((n, n), dtype=bool)
    adjacency[pairs[:, 0], pairs[:, 1]] = True
    poset = closure_poset(adjacency)
    logger.debug(f"Built poset from {len(pairs)} relations: {poset!r}")
    return poset


def neighborhood(
    poset: Poset, mode: Union[Neighborhood, str], arg: Union[int, Iterable[int]]
) -> Subset:
    """
    Answer a down-element, up-element or down-set query.

    Args:
        poset: The order
        mode: Query kind
        arg: An element for the element queries, a subset for down-set

    Returns:
        Subset: D(x), U(x) or D(S) = {x not in S : x < s for some s in S}

    Raises:
        UsageError: If mode is not a known query kind
        RangeError: If an element id is out of range
    """
    try:
        mode = Neighborhood(mode)
    except ValueError as exc:
        raise UsageError(f"unknown neighborhood mode {mode!r}") from exc
    if mode is Neighborhood.DOWN_ELEMENT:
        return poset.down(arg)
    if mode is Neighborhood.UP_ELEMENT:
        return poset.up(arg)
    return poset.down_set(arg)


def induced(poset: Poset, subset: Iterable[int]) -> tuple[Poset, dict[int, int]]:
    """
    Restrict the order to a subset.

    Returns:
        tuple: The induced poset and the map from old ids to new ids; new ids
        follow the ascending order of the old ones
    """
    members = poset.check_subset(subset)
    return poset.restrict(members), {old: new for new, old in enumerate(members)}


def dual(poset: Poset) -> Poset:
    return poset.dual()


def linear_extension(poset: Poset) -> Subset:
    return poset.linear_extension()


def covers(poset: Poset) -> tuple[tuple[int, int], ...]:
    return poset.cover_pairs


def to_dot(poset: Poset, name: str = "P") -> str:
    """Hasse diagram in DOT syntax: one node line per element, one edge per cover."""
    lines = [f"digraph {name} {{"]
    lines.extend(f"  {x};" for x in range(poset.n))
    lines.extend(f"  {x} -> {y};" for x, y in poset.cover_pairs)
    lines.append("}")
    return "\n".join(lines) + "\n"


def verify_structure(
    poset: Poset, family: SubsetFamily, claim: Union[Claim, str]
) -> Verification:
    """
    Check a family exhaustively against a claimed structure.

    Every pair of sets (i < j) is compared elementwise. The first failing
    pair of sets, then the first failing element pair in row-major order,
    is reported.

    Args:
        poset: The order
        family: Sets to check, ids in the poset's ground set
        claim: ascending-chain (A_1 < ... < A_k), descending-chain
            (A_1 > ... > A_k) or totally-incomparable

    Returns:
        Verification: ok flag and the first counterexample pair (a, b) with
        a in the earlier set

    Raises:
        RangeError: If a member id is not an element of the poset
        OverlapError: If two sets share an element
    """
    claim = Claim(claim)
    for members in family:
        for x in members:
            poset.check(x)
    shared = family.first_overlap()
    if shared is not None:
        raise OverlapError(f"element {shared} belongs to more than one set")

    up, down = poset.up_matrix, poset.down_matrix
    arrays = [np.asarray(members, dtype=np.int64) for members in family]
    for i, left in enumerate(arrays):
        if not left.size:
            continue
        for right in arrays[i + 1:]:
            if not right.size:
                continue
            grid = np.ix_(left, right)
            if claim is Claim.ASCENDING_CHAIN:
                bad = ~up[grid]
            elif claim is Claim.DESCENDING_CHAIN:
                bad = ~down[grid]
            else:
                bad = up[grid] | down[grid]
            if bad.any():
                row, col = np.argwhere(bad)[0]
                return Verification(False, (int(left[row]), int(right[col])))
    return Verification(True)
