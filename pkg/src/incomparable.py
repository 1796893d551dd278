"""Pairwise totally incomparable families: Condense, Select and bound profiles."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union

import numpy as np

from src.errors import DegenerateError, InvariantError, PreconditionError, RangeError
from src.poset import Claim, Poset, Subset, SubsetFamily, verify_structure

# Configure logging
logger = logging.getLogger(__name__)

# Relative slack for floating point logarithm thresholds
LOG_SLACK = 1e-12

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class BoundProfile:
    """
    Function pair (f, g) trading chain-branch size against incomparable size.

    Attributes:
        name: Short identifier used on the command line
        f: Size divisor for the incomparable branch, defined for k >= 1
        g: Degree ratio, defined for k >= 1
        kmax: Largest k the profile is checked and used for
    """

    name: str
    f: Callable[[int], Number]
    g: Callable[[int], Number]
    kmax: int = 64

    def f_exact(self, k: int) -> Fraction:
        return Fraction(self.f(k))

    def g_exact(self, k: int) -> Fraction:
        return Fraction(self.g(k))


def _thm2_f(k: int) -> float:
    return 8 * k * math.log2(k)


profile_thm1 = BoundProfile(name="thm1", f=lambda k: 16 * (k - 1), g=lambda k: Fraction(1, k))
profile_thm2 = BoundProfile(name="thm2", f=_thm2_f, g=lambda k: Fraction(1, 2))

PROFILES = {profile.name: profile for profile in (profile_thm1, profile_thm2)}


def get_profile(name: str) -> BoundProfile:
    """Look up a named profile, raising ValueError for unknown names."""
    if name not in PROFILES:
        raise ValueError(f"unknown profile {name!r}; expected one of {sorted(PROFILES)}")
    return PROFILES[name]


def validate_profile(profile: BoundProfile) -> list[str]:
    """
    Check every condition a profile must satisfy up to its kmax.

    Comparisons are exact on the values f and g return.

    Args:
        profile: The profile to check

    Returns:
        list[str]: Violated conditions in check order; empty when valid
    """
    f, g = profile.f_exact, profile.g_exact
    violations = []
    for k in range(1, profile.kmax):
        if not f(k + 1) > f(k):
            violations.append(f"f increasing at k={k + 1}")
        if not g(k + 1) <= g(k):
            violations.append(f"g decreasing at k={k + 1}")
    if profile.kmax >= 2:
        if not f(2) >= 16:
            violations.append("f(2) ≥ 16")
        if not g(2) <= Fraction(1, 2):
            violations.append("g(2) ≤ 1/2")
    for k in range(2, profile.kmax + 1):
        half_down, half_up = k // 2, (k + 1) // 2
        if not f(k) > 2 * f(half_down) + 6:
            violations.append(f"f(k) > 2f(⌊k/2⌋)+6 at k={k}")
        if not f(k) >= 2 * f(half_up):
            violations.append(f"f(k) ≥ 2f(⌈k/2⌉) at k={k}")
        if not g(k) <= (f(k) / 2 - f(half_down) - 3) / (2 * k):
            violations.append(f"g(k) ≤ (f(k)/2 − f(⌊k/2⌋) − 3)/(2k) at k={k}")
        if not f(k) >= 8 * k:
            violations.append(f"f(k) ≥ 8k at k={k}")
    return violations


def log_threshold(gamma: Number, k: int, ground: int) -> float:
    """The size bound gamma / (k ln |Q|)."""
    if ground < 2:
        raise DegenerateError(f"ln|Q| is not positive for |Q| = {ground}")
    return float(gamma) / (k * math.log(ground))


def meets_threshold(size: int, threshold: float, slack: float = LOG_SLACK) -> bool:
    return size >= threshold * (1 - slack)


@dataclass(frozen=True)
class CondenseTrace:
    """
    Per-step record of a Condense run.

    working_sets[j] is B^(j); removed[j] is the part index dropped to get
    B^(j+1); candidate_sizes[j] are the |C_i| seen at step j (including the
    final, successful step when there is one).
    """

    working_sets: tuple[Subset, ...]
    removed: tuple[int, ...]
    candidate_sizes: tuple[tuple[int, ...], ...]

    @property
    def working_sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.working_sets)

    @property
    def steps(self) -> int:
        return len(self.removed)


@dataclass(frozen=True)
class CondenseResult:
    sets: tuple[Subset, ...]
    trace: CondenseTrace


def equitable_partition(members: Subset, k: int) -> list[Subset]:
    """Contiguous blocks of the sorted members, the first len % k one larger."""
    base, extra = divmod(len(members), k)
    blocks, start = [], 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        blocks.append(tuple(members[start:start + size]))
        start += size
    return blocks


def condense(poset: Poset, working: Iterable[int], k: int, gamma: Number) -> CondenseResult:
    """
    Shrink B until every candidate set below a single part is large.

    With B split equitably into B_1..B_k, the candidates are
    C_i = D(B_i) minus (D(B \\ B_i) union B). When some |C_i| falls below
    gamma / (k ln|Q|) the smallest such part is dropped and the step
    repeats; once |B| < k, k empty sets are returned.

    Args:
        poset: The ground order Q
        working: Initial B, ids of Q
        k: Number of output sets
        gamma: Size budget, at least 1

    Returns:
        CondenseResult: k pairwise disjoint, totally incomparable sets and the trace

    Raises:
        RangeError: If an id of B is outside Q, k < 1 or gamma < 1
        DegenerateError: If |Q| < 2
    """
    if k < 1:
        raise RangeError(f"k must be at least 1, got {k}")
    if gamma < 1:
        raise RangeError(f"gamma must be at least 1, got {gamma}")
    members = poset.check_subset(working)
    threshold = log_threshold(gamma, k, poset.n)
    down = poset.down_matrix

    working_sets, removed, candidate_sizes = [], [], []
    while True:
        working_sets.append(members)
        if len(members) < k:
            logger.debug(f"Condense: |B|={len(members)} < k={k}, returning empty sets")
            sets = tuple(() for _ in range(k))
            break

        parts = equitable_partition(members, k)
        below = np.stack([down[list(part)].any(axis=0) for part in parts])
        free = below.sum(axis=0) == 1
        free[list(members)] = False
        candidates = [np.flatnonzero(below[i] & free) for i in range(k)]
        sizes = tuple(len(c) for c in candidates)
        candidate_sizes.append(sizes)

        failing = next((i for i, size in enumerate(sizes) if not meets_threshold(size, threshold)), None)
        if failing is None:
            sets = tuple(tuple(c.tolist()) for c in candidates)
            break
        logger.debug(
            f"Condense: |B|={len(members)}, sizes={sizes}, threshold={threshold:.4g}, "
            f"dropping part {failing}"
        )
        removed.append(failing)
        dropped = set(parts[failing])
        members = tuple(x for x in members if x not in dropped)

    trace = CondenseTrace(tuple(working_sets), tuple(removed), tuple(candidate_sizes))
    return CondenseResult(sets=sets, trace=trace)


def select(poset: Poset, k: int, gamma: Number, lam: Number) -> tuple[Subset, ...]:
    """
    Split Q into k pairwise totally incomparable sets.

    T is the top ceil(|Q|/2) elements of the linear extension. When
    |D(T)| >= 2(k*lam + gamma) the sets come from condense(Q, T, k, gamma);
    otherwise T gets ceil(k/2) of the sets and Q minus (T union D(T)) gets
    the rest. Work items are processed from an explicit stack.

    Args:
        poset: The order Q
        k: Number of sets, at least 1
        gamma: Size budget, at least 1
        lam: Down-degree bound, at least 0

    Returns:
        tuple[Subset, ...]: k sets in Q's ids, T-branch sets first

    Raises:
        RangeError: On k < 1, gamma < 1 or lam < 0
        DegenerateError: If k >= 2 and |Q| < 2
    """
    if k < 1:
        raise RangeError(f"k must be at least 1, got {k}")
    if gamma < 1:
        raise RangeError(f"gamma must be at least 1, got {gamma}")
    if lam < 0:
        raise RangeError(f"lambda must be nonnegative, got {lam}")
    if k >= 2 and poset.n < 2:
        raise DegenerateError(f"select needs |Q| >= 2 for k >= 2, got {poset.n}")

    gamma_exact, lam_exact = Fraction(gamma), Fraction(lam)
    output: list[Subset] = [()] * k
    stack = [(np.arange(poset.n, dtype=np.int64), k, 0)]
    while stack:
        ids, parts, offset = stack.pop()
        if parts == 1:
            output[offset] = tuple(ids.tolist())
            continue

        sub = poset.restrict(ids)
        size = len(ids)
        order = sub.linear_extension()
        top = np.sort(np.asarray(order[size - (size + 1) // 2:], dtype=np.int64))
        below = sub.down_set_mask(top)
        needed = 2 * (parts * lam_exact + gamma_exact)
        if int(below.sum()) >= needed:
            logger.debug(f"Select: |Q|={size}, k={parts}, |D(T)|={int(below.sum())}, condensing")
            condensed = condense(sub, top.tolist(), parts, gamma)
            for i, found in enumerate(condensed.sets):
                output[offset + i] = tuple(ids[list(found)].tolist())
            continue

        rest = np.ones(size, dtype=bool)
        rest[top] = False
        rest &= ~below
        upper = (parts + 1) // 2
        logger.debug(f"Select: |Q|={size}, k={parts}, splitting {len(top)}/{int(rest.sum())}")
        stack.append((ids[np.flatnonzero(rest)], parts - upper, offset + upper))
        stack.append((ids[top], upper, offset))
    return tuple(output)


def incomparable_violations(
    poset: Poset, k: int, gamma: Number, lam: Number, profile: BoundProfile
) -> list[str]:
    """Hypotheses of the incomparable extraction that fail on this instance."""
    gamma, lam = Fraction(gamma), Fraction(lam)
    violations = []
    if poset.n and int(poset.down_degrees().max()) > lam:
        violations.append("max |D_Q(x)| ≤ λ")
    if gamma * profile.f_exact(k) > poset.n:
        violations.append("γ ≤ |Q|/f(k)")
    if lam > profile.g_exact(k) * gamma:
        violations.append("λ ≤ g(k)γ")
    if gamma < 1:
        violations.append("γ ≥ 1")
    if poset.n < 2:
        violations.append("|Q| ≥ 2")
    return violations


def extract_incomparable(
    poset: Poset,
    k: int,
    gamma: Number,
    lam: Number,
    profile: BoundProfile,
    strict: bool = True,
) -> SubsetFamily:
    """
    Find k pairwise totally incomparable sets of size at least gamma / (k ln|Q|).

    Strict mode checks the hypotheses first and fails listing every one
    that does not hold; relaxed mode clamps gamma to at least 1 and lam to
    at least 0 and returns whatever Select produces.

    Args:
        poset: The order Q
        k: Number of sets, at least 2
        gamma: Size budget
        lam: Down-degree bound
        profile: Bound profile (f, g)
        strict: Whether to enforce the hypotheses

    Returns:
        SubsetFamily: The k sets, in Q's ids

    Raises:
        PreconditionError: In strict mode, when a hypothesis fails
        InvariantError: If the output is not totally incomparable, or in
            strict mode a set is smaller than the guarantee
    """
    if k < 2:
        raise RangeError(f"k must be at least 2, got {k}")
    gamma, lam = Fraction(gamma), Fraction(lam)
    if strict:
        violations = incomparable_violations(poset, k, gamma, lam, profile)
        if violations:
            raise PreconditionError(violations)
    else:
        gamma, lam = max(gamma, Fraction(1)), max(lam, Fraction(0))

    family = SubsetFamily(select(poset, k, gamma, lam), poset.n)
    check = verify_structure(poset, family, Claim.TOTALLY_INCOMPARABLE)
    if not check:
        logger.error(f"Select output comparable at {check.counterexample}")
        raise InvariantError(f"select output not totally incomparable at {check.counterexample}")

    if strict:
        threshold = log_threshold(gamma, k, poset.n)
        if not meets_threshold(family.min_size, threshold):
            logger.error(f"Smallest set {family.min_size} below guarantee {threshold:.4g}")
            raise InvariantError("incomparable sets smaller than gamma/(k ln|Q|)")
    logger.info(f"Extracted {k} incomparable sets of sizes {family.sizes} from |Q|={poset.n}")
    return family


def coarsen_to_pair(family: SubsetFamily) -> tuple[Subset, Subset]:
    """Merge the first floor(k/2) sets and the remaining sets into two sets."""
    half = len(family) // 2
    left = tuple(sorted(x for s in family.sets[:half] for x in s))
    right = tuple(sorted(x for s in family.sets[half:] for x in s))
    return left, right
