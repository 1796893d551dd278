"""Homogeneous set families for several partial orders on one ground set."""

import logging
import math
from dataclasses import dataclass
from decimal import MAX_EMAX, MIN_EMIN, Context, Decimal, localcontext
from enum import Enum
from typing import Any, Optional, Sequence, Union

import numpy as np

from src.decomposition import erdos_szekeres
from src.driver import Branch, EllPolicy, Mode, theorem1
from src.errors import DegenerateError, GroundMismatch, InstanceTooSmall, InvariantError, RangeError
from src.fair_division import partition_select
from src.poset import Claim, Poset, Subset, SubsetFamily, induced, verify_structure

# Configure logging
logger = logging.getLogger(__name__)

PAPER_PRECISION = 60


class ScheduleMode(str, Enum):
    PAPER = "paper"
    PRACTICAL = "practical"


class Relation(str, Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"
    INCOMPARABLE = "incomparable"


RELATION_CLAIMS = {
    Relation.ASCENDING: Claim.ASCENDING_CHAIN,
    Relation.DESCENDING: Claim.DESCENDING_CHAIN,
    Relation.INCOMPARABLE: Claim.TOTALLY_INCOMPARABLE,
}


def _paper_context() -> Context:
    return Context(prec=PAPER_PRECISION, Emax=MAX_EMAX, Emin=MIN_EMIN)


def _plain(value: Any) -> Any:
    if isinstance(value, Decimal):
        return str(value)
    if isinstance(value, int) and abs(value) > 2**53:
        return str(value)
    return value


@dataclass(frozen=True)
class Schedule:
    """
    Per-level targets for the level-by-level induction.

    Attributes:
        h: Number of orders
        k: Final number of sets
        n: Ground size
        mode: paper or practical
        targets: k_1..k_h (targets[0] is level 1; targets[-1] == k)
        floors: Paper mode only, the size floors n_1..n_h
        guarantee: Paper mode only, n / (10 k ln n)^(12^(h+1))
        guarantee_log10: Paper mode only, log10 of the guarantee
    """

    h: int
    k: int
    n: int
    mode: ScheduleMode
    targets: tuple[Union[int, Decimal], ...]
    floors: tuple[Decimal, ...] = ()
    guarantee: Optional[Decimal] = None
    guarantee_log10: Optional[Decimal] = None

    def target(self, level: int) -> int:
        """k_level as a whole number of sets."""
        value = self.targets[level - 1]
        return value if isinstance(value, int) else math.ceil(value)

    def split_target(self, level: int) -> int:
        """k'_level = 3 k_level^2."""
        return 3 * self.target(level) ** 2

    def as_dict(self) -> dict[str, Any]:
        return {
            "h": self.h,
            "k": self.k,
            "n": _plain(self.n),
            "mode": self.mode.value,
            "targets": [_plain(v) for v in self.targets],
            "floors": [_plain(v) for v in self.floors],
            "guarantee": _plain(self.guarantee),
            "guarantee_log10": _plain(self.guarantee_log10),
        }


def build_schedule(h: int, k: int, n: int, mode: Union[ScheduleMode, str] = ScheduleMode.PRACTICAL) -> Schedule:
    """
    Compute per-level targets.

    Practical mode uses k_{l-1} = 3 k_l^2 + 1, the smallest value that lets
    the block selection run with k' = 3 k_l^2. Paper mode uses
    k_{l-1} = (10 k_l)^12 ln n with size floors n_1 = n / (10^4 k_1^2 ln n)
    and n_{l+1} = k_l n_l / ((10 k_{l+1})^12 ln n), in 60-digit decimals.

    Raises:
        RangeError: Unless h >= 1, k >= 2 and n >= 3
    """
    mode = ScheduleMode(mode)
    if h < 1 or k < 2 or n < 3:
        raise RangeError(f"schedule needs h ≥ 1, k ≥ 2, n ≥ 3; got h={h}, k={k}, n={n}")

    if mode is ScheduleMode.PRACTICAL:
        targets = [k]
        for _ in range(h - 1):
            targets.append(3 * targets[-1] ** 2 + 1)
        return Schedule(h=h, k=k, n=n, mode=mode, targets=tuple(reversed(targets)))

    with localcontext(_paper_context()):
        ln_n = Decimal(n).ln()
        targets = [Decimal(k)]
        for _ in range(h - 1):
            targets.append((10 * targets[-1]) ** 12 * ln_n)
        targets.reverse()
        floors = [Decimal(n) / (10**4 * targets[0] ** 2 * ln_n)]
        for level in range(1, h):
            floors.append(targets[level - 1] * floors[-1] / ((10 * targets[level]) ** 12 * ln_n))
        exponent = 12 ** (h + 1)
        base = 10 * Decimal(k) * ln_n
        guarantee = Decimal(n) / base**exponent
        guarantee_log10 = Decimal(n).log10() - exponent * base.log10()
    return Schedule(
        h=h,
        k=k,
        n=n,
        mode=mode,
        targets=tuple(targets),
        floors=tuple(floors),
        guarantee=guarantee,
        guarantee_log10=guarantee_log10,
    )


@dataclass(frozen=True)
class HomogeneityCheck:
    """
    Per-order relation of a family.

    relations[i] is the relation the family satisfies in order i, or None;
    counterexample is (order, a, b) for the first order that satisfies none.
    """

    relations: tuple[Optional[Relation], ...]
    counterexample: Optional[tuple[int, int, int]] = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def _hinted_relation(poset: Poset, family: SubsetFamily) -> Relation:
    nonempty = [members for members in family if members]
    if len(nonempty) < 2:
        return Relation.ASCENDING
    a, b = nonempty[0][0], nonempty[1][0]
    if poset.less(a, b):
        return Relation.ASCENDING
    if poset.less(b, a):
        return Relation.DESCENDING
    return Relation.INCOMPARABLE


def verify_homogeneous(orders: Sequence[Poset], family: SubsetFamily) -> HomogeneityCheck:
    """
    Find, for every order, the relation the family satisfies.

    Relations are tried ascending, descending, then incomparable. For an
    order satisfying none, the counterexample comes from the relation the
    first pair of nonempty sets suggests.

    Raises:
        OverlapError: If two sets share an element
    """
    relations: list[Optional[Relation]] = []
    counterexample = None
    for index, order in enumerate(orders):
        found = None
        for relation, claim in RELATION_CLAIMS.items():
            if verify_structure(order, family, claim):
                found = relation
                break
        relations.append(found)
        if found is None and counterexample is None:
            hinted = _hinted_relation(order, family)
            a, b = verify_structure(order, family, RELATION_CLAIMS[hinted]).counterexample
            counterexample = (index, a, b)
    return HomogeneityCheck(relations=tuple(relations), counterexample=counterexample)


@dataclass(frozen=True)
class LevelReport:
    level: int
    sets_found: int
    common_size: int
    relation: Relation


@dataclass(frozen=True)
class HomogeneousResult:
    """k sets homogeneous in every order, with each order's relation."""

    sets: SubsetFamily
    relations: tuple[Relation, ...]
    levels: tuple[LevelReport, ...] = ()


def ground_size(orders: Sequence[Poset]) -> int:
    """Common element count of the orders; GroundMismatch when they differ."""
    if not orders:
        raise RangeError("at least one order is needed")
    n = orders[0].n
    for index, order in enumerate(orders):
        if order.n != n:
            raise GroundMismatch(f"order {index} has {order.n} elements, order 0 has {n}")
    return n


def _trim(sets: Sequence[Subset], size: int) -> list[Subset]:
    return [tuple(sorted(members)[:size]) for members in sets]


def _branch_relation(branch: Branch) -> Relation:
    if branch is Branch.DESCENDING_SET_CHAIN:
        return Relation.DESCENDING
    return Relation.INCOMPARABLE


def _run_level(order: Poset, k: int, level: int, policy: EllPolicy):
    try:
        return theorem1(order, k, Mode.RELAXED, policy)
    except InstanceTooSmall as exc:
        logger.warning(f"Level {level}: {exc}")
        raise InstanceTooSmall(str(exc), level=level, required=exc.required, available=exc.available) from exc
    except DegenerateError as exc:
        logger.warning(f"Level {level}: {exc}")
        raise InstanceTooSmall(str(exc), level=level, required=2, available=order.n) from exc


def refine_blocks(
    order: Poset,
    blocks: Sequence[Subset],
    wanted: int,
    level: int,
    policy: Union[EllPolicy, str] = EllPolicy.LARGEST_CHAIN,
) -> tuple[list[Subset], Relation]:
    """
    Carry equal-size blocks through one more order.

    Extracts 3 * wanted^2 sets B from the union of the blocks in this order,
    trims them to a common size b >= a, matches B sets to consecutive block
    ranges and keeps wanted of the resulting pieces: the first ones when the
    B sets are incomparable, a monotone run of them when they form a chain.
    Each piece lies inside one B set and one block range, so relations the
    blocks already satisfy in earlier orders carry over.

    Args:
        order: The order to refine by
        blocks: Disjoint blocks of equal size a, homogeneous in earlier orders
        wanted: Number of blocks to return
        level: Position of this order, for error reports
        policy: Relaxed-mode choice of ell for the extraction

    Returns:
        tuple: The new blocks, trimmed to a common size, and their relation in this order

    Raises:
        InstanceTooSmall: If the extraction fails, b < a, or too few pieces match
    """
    policy = EllPolicy(policy)
    size = min(len(block) for block in blocks)
    split = 3 * wanted**2
    ground = sorted(x for block in blocks for x in block)
    sub, _ = induced(order, ground)
    ids = np.asarray(ground, dtype=np.int64)
    found = _run_level(sub, split, level, policy)

    b_sets = [tuple(ids[list(members)].tolist()) for members in found.sets]
    b = min(len(members) for members in b_sets)
    if b == 0 or b < size:
        logger.warning(f"Level {level}: sets of size {b} cannot cover blocks of size {size}")
        raise InstanceTooSmall("split sets smaller than the blocks", level=level, required=size, available=b)
    b_sets = _trim(b_sets, b)

    selection = partition_select(_trim(blocks, size), b_sets)
    pieces = list(selection.pieces)
    if found.branch is Branch.TOTALLY_INCOMPARABLE:
        chosen = pieces[:wanted]
        relation = Relation.INCOMPARABLE
    else:
        labels = [t for t, _ in selection.pairs]
        # B sets come out descending, so a larger label sits lower
        run = erdos_szekeres(labels, lambda s, t: s > t)
        chosen = [pieces[i] for i in run.indices[:wanted]]
        relation = Relation.ASCENDING if run.increasing else Relation.DESCENDING
    if len(chosen) < wanted:
        raise InstanceTooSmall(
            "too few matched pieces", level=level, required=wanted, available=len(chosen)
        )

    size = min(len(piece) for piece in chosen)
    logger.info(f"Level {level}: {len(chosen)} blocks of size {size}, {relation.value}")
    return _trim(chosen, size), relation


def theorem_multiple(orders: Sequence[Poset], k: int, schedule: Schedule) -> HomogeneousResult:
    """
    Find k sets that are homogeneous with respect to every order.

    Level 1 runs the single-order extraction on the first order for k_1 sets
    and trims them to a common size a. Each later level l refines the blocks
    by order l down to k_l of them (see refine_blocks) and checks that the
    family is still homogeneous in orders 1..l.

    Args:
        orders: h orders on the same ground set
        k: Number of sets
        schedule: Per-level targets for (h, k, n)

    Returns:
        HomogeneousResult: Sets and per-order relations, verified

    Raises:
        GroundMismatch: If the orders have different sizes
        RangeError: If the schedule was built for another (h, k)
        InstanceTooSmall: If some level cannot be carried out; names the level
        InvariantError: If a level's output is not homogeneous
    """
    n = ground_size(orders)
    h = len(orders)
    if schedule.h != h or schedule.k != k:
        raise RangeError(f"schedule is for h={schedule.h}, k={schedule.k}; got h={h}, k={k}")
    policy = EllPolicy.LARGEST_CHAIN if schedule.mode is ScheduleMode.PRACTICAL else EllPolicy.FORMULA

    first = _run_level(orders[0], schedule.target(1), 1, policy)
    relations = [_branch_relation(first.branch)]
    blocks = list(first.sets)
    if h == 1:
        return HomogeneousResult(sets=first.sets, relations=tuple(relations))

    size = min(len(block) for block in blocks)
    if size == 0:
        logger.warning("Level 1: an extracted set is empty")
        raise InstanceTooSmall("empty set at the first level", level=1, required=1, available=0)
    blocks = _trim(blocks, size)
    levels = [LevelReport(1, len(blocks), size, relations[0])]
    logger.info(f"Level 1: {len(blocks)} blocks of size {size}, {relations[0].value}")

    for level in range(2, h + 1):
        blocks, relation = refine_blocks(orders[level - 1], blocks, schedule.target(level), level, policy)
        relations.append(relation)
        check = verify_homogeneous(orders[:level], SubsetFamily(tuple(blocks), n))
        if tuple(check.relations) != tuple(relations):
            logger.error(f"Level {level}: expected {relations}, verified {check.relations}")
            raise InvariantError(f"level {level} family lost homogeneity: {check.counterexample}")
        levels.append(LevelReport(level, len(blocks), len(blocks[0]), relation))

    return HomogeneousResult(sets=SubsetFamily(tuple(blocks), n), relations=tuple(relations), levels=tuple(levels))
