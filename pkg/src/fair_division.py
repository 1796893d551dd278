"""Exact cake cutting and the block-selection lemmas built on it."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from src.errors import InvariantError, PartitionError, PreconditionError, RangeError
from src.poset import Subset

# Configure logging
logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class PLMeasure:
    """
    Piecewise-linear cumulative measure on [0, k].

    values[i] is mu([0, i]) at the integer breakpoints; values[0] is 0 and
    the sequence is nondecreasing. Between breakpoints the cumulative value
    is interpolated linearly.
    """

    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        if not values or values[0] != 0:
            raise ValueError("a measure needs values starting at 0")
        if any(b < a for a, b in zip(values, values[1:])):
            raise ValueError("measure values must be nondecreasing")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_masses(cls, masses: Sequence[Rational]) -> "PLMeasure":
        """Build from the mass of each unit piece [i, i+1]."""
        running, values = Fraction(0), [Fraction(0)]
        for mass in masses:
            running += Fraction(mass)
            values.append(running)
        return cls(tuple(values))

    @property
    def k(self) -> int:
        return len(self.values) - 1

    @property
    def total(self) -> Fraction:
        return self.values[-1]

    def cdf(self, r: Rational) -> Fraction:
        r = min(max(Fraction(r), Fraction(0)), Fraction(self.k))
        i = math.floor(r)
        if i == self.k:
            return self.values[-1]
        return self.values[i] + (r - i) * (self.values[i + 1] - self.values[i])

    def measure(self, left: Rational, right: Rational) -> Fraction:
        """Mass of the interval (left, right]."""
        return self.cdf(right) - self.cdf(left)

    def last_point_at_most(self, level: Fraction, limit: Rational) -> Fraction:
        """Largest r in [0, limit] with cdf(r) <= level, for level >= 0."""
        limit = Fraction(limit)
        if self.cdf(limit) <= level:
            return limit
        i = math.ceil(limit) - 1
        while self.values[i] > level:
            i -= 1
        slope = self.values[i + 1] - self.values[i]
        return i + (level - self.values[i]) / slope


@dataclass(frozen=True)
class CakeCut:
    """
    Consecutive intervals (cuts[i], cuts[i+1]] with interval i going to
    measure pi[i].
    """

    cuts: tuple[Fraction, ...]
    pi: tuple[int, ...]

    def interval(self, i: int) -> tuple[Fraction, Fraction]:
        return self.cuts[i], self.cuts[i + 1]


def cake_cut(measures: Sequence[PLMeasure]) -> CakeCut:
    """
    Cut [0, k] into s consecutive intervals, each worth at least 1/s of its
    owner's total.

    The scan runs from the right. With t measures still unserved, each one
    proposes the largest r at which (r, right] holds exactly 1/t of its
    remaining mass; the largest proposal wins (smallest index on ties) and
    its owner takes (r, right]. The last unserved measure takes what is
    left. Measures of total 0 take empty intervals at the left end. When
    every total is 0 the cuts are uniform.

    Args:
        measures: s >= 1 measures on the same [0, k]

    Returns:
        CakeCut: Cut points 0 = r_0 <= ... <= r_s = k and the owner permutation

    Raises:
        RangeError: If no measures are given or their ranges differ
        InvariantError: If an owner ends up below its share
    """
    if not measures:
        raise RangeError("cake cutting needs at least one measure")
    k = measures[0].k
    if any(m.k != k for m in measures):
        raise RangeError("all measures must live on the same [0, k]")
    s = len(measures)

    live = [j for j, m in enumerate(measures) if m.total > 0]
    idle = [j for j, m in enumerate(measures) if m.total == 0]
    if not live:
        if s > 1:
            logger.warning(f"All {s} measures are zero; returning uniform cuts")
        return CakeCut(tuple(Fraction(i * k, s) for i in range(s + 1)), tuple(range(s)))

    cuts: list[Fraction] = [Fraction(0)] * (s + 1)
    pi: list[int] = [0] * s
    cuts[s] = Fraction(k)
    right = Fraction(k)
    position = s - 1
    while live:
        t = len(live)
        if t == 1:
            winner, point = live[0], Fraction(0)
        else:
            winner, point = None, None
            for j in live:
                m = measures[j]
                share = m.cdf(right) / t
                proposal = m.last_point_at_most(m.cdf(right) - share, right)
                if point is None or proposal > point:
                    winner, point = j, proposal
        logger.debug(f"Cake cut: measure {winner} takes ({point}, {right}]")
        pi[position] = winner
        cuts[position] = point
        right = point
        live.remove(winner)
        position -= 1
    for j in reversed(idle):
        pi[position] = j
        cuts[position] = Fraction(0)
        position -= 1

    result = CakeCut(tuple(cuts), tuple(pi))
    for i, j in enumerate(result.pi):
        if measures[j].measure(*result.interval(i)) * s < measures[j].total:
            logger.error(f"Measure {j} got less than 1/{s} of its total")
            raise InvariantError(f"cake cut share violated for measure {j}")
    return result


@dataclass(frozen=True)
class BlockAssignment:
    """
    Consecutive block ranges for the B sets.

    Range i covers the 0-based blocks cuts[i] .. cuts[i+1]-1 and goes to
    B_{pi[i]}; intersections[i] is |B_{pi[i]}| restricted to that range.
    """

    cuts: tuple[int, ...]
    pi: tuple[int, ...]
    intersections: tuple[int, ...]


def _block_index(a_blocks: Sequence[Subset], ground: Optional[Subset]) -> dict[int, int]:
    owner: dict[int, int] = {}
    for i, block in enumerate(a_blocks):
        for x in block:
            if x in owner:
                raise PartitionError(f"element {x} lies in blocks {owner[x]} and {i}")
            owner[x] = i
    if ground is not None and set(owner) != set(ground):
        raise PartitionError("the blocks do not cover the ground set exactly")
    return owner


def discrete_blocks(
    a_blocks: Sequence[Subset],
    b_sets: Sequence[Subset],
    ground: Optional[Subset] = None,
) -> BlockAssignment:
    """
    Give each B_j a consecutive run of A-blocks holding a fair share of it.

    Each B_j becomes the measure whose mass on block i is |B_j ∩ A_i|; the
    cake cut is rounded up to whole blocks. Every B_{pi(i)} keeps at least
    ceil(|B_{pi(i)}| / s) - max_i |A_i| of its elements in its range.

    Args:
        a_blocks: Partition A_1..A_k of Q
        b_sets: Subsets B_1..B_s of Q
        ground: Q itself, when the caller wants the cover checked too

    Raises:
        PartitionError: If the blocks overlap, miss part of ground, or a
            B set leaves their union
    """
    if not b_sets:
        raise RangeError("discrete_blocks needs at least one B set")
    owner = _block_index(a_blocks, ground)
    k, s = len(a_blocks), len(b_sets)
    counts = []
    for j, members in enumerate(b_sets):
        row = [0] * k
        for x in members:
            if x not in owner:
                raise PartitionError(f"B_{j} element {x} is outside the blocks")
            row[owner[x]] += 1
        counts.append(row)

    cut = cake_cut([PLMeasure.from_masses(row) for row in counts])
    cuts = tuple(math.ceil(r) for r in cut.cuts)
    largest = max((len(block) for block in a_blocks), default=0)
    intersections = []
    for i, j in enumerate(cut.pi):
        got = sum(counts[j][cuts[i]:cuts[i + 1]])
        if got < -(-len(b_sets[j]) // s) - largest:
            logger.error(f"B_{j} keeps only {got} elements in blocks {cuts[i]}..{cuts[i + 1]}")
            raise InvariantError(f"discrete block bound violated for B_{j}")
        intersections.append(got)
    return BlockAssignment(cuts=cuts, pi=cut.pi, intersections=tuple(intersections))


@dataclass(frozen=True)
class PartitionSelection:
    """
    Selected (t_j, h_j) pairs.

    pairs[j] = (t, h): B_t is matched to the 0-based blocks h_{j-1} .. h-1;
    pieces[j] is B_t restricted to those blocks; losses[j] is how much the
    remaining union shrank at step j.
    """

    pairs: tuple[tuple[int, int], ...]
    pieces: tuple[Subset, ...]
    losses: tuple[int, ...]
    bound: Fraction

    def __len__(self) -> int:
        return len(self.pairs)


def _selection_violations(a_blocks: Sequence[Subset], b_sets: Sequence[Subset]) -> list[str]:
    k, k_prime = len(a_blocks), len(b_sets)
    violations = []
    if not k > k_prime >= 1:
        violations.append(f"k > k' ≥ 1 (k={k}, k'={k_prime})")
    if len({len(block) for block in a_blocks}) > 1:
        violations.append("A blocks of equal size")
    if len({len(members) for members in b_sets}) > 1:
        violations.append("B sets of equal size")
    if violations:
        return violations
    a = len(a_blocks[0]) if a_blocks else 0
    b = len(b_sets[0])
    if b < a:
        violations.append(f"b ≥ a (a={a}, b={b})")
    union_a = [x for block in a_blocks for x in block]
    union_b = [x for members in b_sets for x in members]
    if len(set(union_a)) != len(union_a):
        violations.append("A blocks disjoint")
    if len(set(union_b)) != len(union_b):
        violations.append("B sets disjoint")
    if not set(union_b) <= set(union_a):
        violations.append("B sets inside the union of the blocks")
    return violations


def partition_select(a_blocks: Sequence[Subset], b_sets: Sequence[Subset]) -> PartitionSelection:
    """
    Match disjoint B sets to consecutive block ranges.

    Iterates with r = b: take the shortest prefix of the remaining blocks
    holding r elements of the unused B sets, match the unused B with the
    largest share of that prefix (smallest index on ties), then drop that B
    and the prefix. Stops once fewer than r elements remain.

    Args:
        a_blocks: Disjoint blocks A_1..A_k of equal size a
        b_sets: Disjoint sets B_1..B_k' of equal size b >= a inside the blocks, k > k'

    Returns:
        PartitionSelection: At least floor(k'/3) pairs, each piece of size >= b/k'

    Raises:
        PreconditionError: On any shape violation
    """
    violations = _selection_violations(a_blocks, b_sets)
    if violations:
        raise PreconditionError(violations)
    k, k_prime = len(a_blocks), len(b_sets)
    a, b = len(a_blocks[0]), len(b_sets[0])
    r = b
    covered = {x for members in b_sets for x in members}
    remaining = [set(block) & covered for block in a_blocks]
    b_members = [set(members) for members in b_sets]
    used: set[int] = set()

    pairs, pieces, losses = [], [], []
    previous = 0
    while sum(len(block) for block in remaining) >= r:
        total, h = 0, 0
        while total < r:
            total += len(remaining[h])
            h += 1
        prefix = set().union(*remaining[:h])
        t = max(
            (j for j in range(k_prime) if j not in used),
            key=lambda j: (len(b_members[j] & prefix), -j),
        )
        piece = tuple(sorted(x for block in a_blocks[previous:h] for x in block if x in b_members[t]))
        before = sum(len(block) for block in remaining)
        remaining = [block - b_members[t] - prefix for block in remaining]
        loss = before - sum(len(block) for block in remaining)
        if loss > r + a + b:
            logger.error(f"Partition step lost {loss} > r + a + b = {r + a + b}")
            raise InvariantError("partition step loss exceeds r + a + b")
        logger.debug(f"Partition step {len(pairs)}: B_{t} matched to blocks {previous}..{h - 1}")
        used.add(t)
        pairs.append((t, h))
        pieces.append(piece)
        losses.append(loss)
        previous = h

    bound = Fraction(b, k_prime)
    if len(pairs) < k_prime // 3 or any(len(piece) < bound for piece in pieces):
        logger.error(f"Partition selection gave {len(pairs)} pairs, sizes {[len(p) for p in pieces]}")
        raise InvariantError("partition selection guarantee failed")
    return PartitionSelection(
        pairs=tuple(pairs), pieces=tuple(pieces), losses=tuple(losses), bound=bound
    )
