"""Multipartite Dilworth extraction: chain of sets or totally incomparable family."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from src.chain_lemma import Lemma6Variant, between_counts, ell_order, lemma6
from src.decomposition import height
from src.errors import InstanceTooSmall, InvariantError, PreconditionError, RangeError
from src.incomparable import (
    BoundProfile,
    extract_incomparable,
    incomparable_violations,
    log_threshold,
    meets_threshold,
    profile_thm1,
    profile_thm2,
)
from src.poset import Claim, Poset, SubsetFamily, induced, verify_structure

# Configure logging
logger = logging.getLogger(__name__)

# Tolerance on logarithmic guarantees checked after the fact
GUARANTEE_SLACK = 1e-9


class Mode(str, Enum):
    STRICT = "strict"
    RELAXED = "relaxed"


class Branch(str, Enum):
    DESCENDING_SET_CHAIN = "descending-set-chain"
    TOTALLY_INCOMPARABLE = "totally-incomparable"


class EllPolicy(str, Enum):
    """How the relaxed driver picks the shift ell."""

    FORMULA = "formula"
    LARGEST_CHAIN = "largest-chain"


class CoreSide(str, Enum):
    DOWN = "down"
    UP = "up"


class Theorem(str, Enum):
    GENERAL = "general"
    THM1 = "thm1"
    THM2 = "thm2"


@dataclass(frozen=True)
class CoreExtraction:
    """
    Incomparable family found inside a sparse core.

    Attributes:
        family: The k sets, in the ids of the full poset
        gamma: Size budget used
        lam: Degree bound used
        preconditions_held: Whether every extraction hypothesis held on the core
        lemma_bound: gamma / (k ln|Q|), or None when |Q| < 2
    """

    family: SubsetFamily
    gamma: Fraction
    lam: Fraction
    preconditions_held: bool
    lemma_bound: Optional[float]


@dataclass(frozen=True)
class ExtractionResult:
    """
    Outcome of the general extraction.

    Attributes:
        branch: Which structure was found
        sets: The k disjoint sets; descending (A_1 > ... > A_k) in the chain branch
        ell: Shift used for the chain-or-core step
        gamma: Size budget (incomparable branch only)
        lam: Degree bound (incomparable branch only)
        guaranteed_size: Formula guarantee, present only in strict mode
        achieved_size: Smallest set size
        core_size: |Q| of the sparse core (incomparable branch only)
        preconditions_held: Whether the incomparable extraction's hypotheses
            held at delegation (incomparable branch only)
        lemma_bound: gamma / (k ln|Q|) (incomparable branch only)
    """

    branch: Branch
    sets: SubsetFamily
    ell: int
    profile: str
    mode: Mode
    gamma: Optional[Fraction] = None
    lam: Optional[Fraction] = None
    guaranteed_size: Optional[float] = None
    achieved_size: int = 0
    core_size: Optional[int] = None
    preconditions_held: Optional[bool] = None
    lemma_bound: Optional[float] = None


@dataclass(frozen=True)
class BoundsReport:
    """Lower and upper estimates of m_k(n)."""

    n: int
    k: int
    lower: float
    upper: float
    valid: bool

    @property
    def note(self) -> str:
        return "within stated validity" if self.valid else "outside stated validity"


@dataclass(frozen=True)
class StatementBounds:
    theorem: Theorem
    n: int
    k: int
    chain_size: float
    incomparable_size: float
    valid: bool


def formula_ell(n: int, k: int, profile: BoundProfile) -> int:
    """ceil(g(k)^2 n / (37 k f(k)^2)), evaluated exactly."""
    f, g = profile.f_exact(k), profile.g_exact(k)
    return math.ceil(g * g * n / (37 * k * f * f))


def general_violations(n: int, k: int, profile: BoundProfile) -> list[str]:
    f, g = profile.f_exact(k), profile.g_exact(k)
    violations = []
    if k > profile.kmax:
        violations.append(f"k ≤ kmax ({profile.kmax})")
    if g * g * n < 10**5 * k * f * f:
        violations.append("g(k)² n ≥ 10⁵ k f(k)²")
    return violations


def largest_chain_ell(poset: Poset, k: int, between: np.ndarray, fallback: int) -> int:
    """
    Largest ell with ell * k < n for which <_ell contains a (k+1)-chain.

    The property is monotone in ell, so a binary search suffices. When even
    <_1 has no (k+1)-chain the fallback is returned.
    """
    def has_chain(ell: int) -> bool:
        return height(ell_order(poset, ell, between)) >= k + 1

    hi = (poset.n - 1) // k
    if hi < 1 or not has_chain(1):
        return fallback
    lo = 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if has_chain(mid):
            lo = mid
        else:
            hi = mid - 1
    logger.debug(f"Largest-chain policy picked ell={lo}")
    return lo


def extract_from_core(
    poset: Poset,
    core: Iterable[int],
    k: int,
    profile: BoundProfile,
    side: Union[CoreSide, str] = CoreSide.DOWN,
    mode: Union[Mode, str] = Mode.RELAXED,
) -> CoreExtraction:
    """
    Run the incomparable extraction on a sparse core.

    The core is induced from the poset and, for the up side, dualized so its
    small up-degrees become small down-degrees. Total incomparability is
    self-dual, so the sets need no translation beyond the id map.

    Args:
        poset: The full order
        core: Q, in the poset's ids
        k: Number of sets
        profile: Bound profile
        side: Which degree is small on the core
        mode: strict enforces the extraction hypotheses

    Returns:
        CoreExtraction: The family in the poset's ids and the parameters used
    """
    side, mode = CoreSide(side), Mode(mode)
    sub, id_map = induced(poset, core)
    ids = np.asarray(sorted(id_map), dtype=np.int64)
    if side is CoreSide.UP:
        sub = sub.dual()

    gamma = Fraction(sub.n) / profile.f_exact(k)
    if mode is Mode.RELAXED:
        gamma = max(gamma, Fraction(1))
    lam = profile.g_exact(k) * gamma

    violations = incomparable_violations(sub, k, gamma, lam, profile)
    if violations and mode is Mode.RELAXED:
        logger.warning(f"Extracting from a core of {sub.n} with unmet hypotheses: {violations}")
    found = extract_incomparable(sub, k, gamma, lam, profile, strict=mode is Mode.STRICT)

    family = SubsetFamily(tuple(tuple(ids[list(s)].tolist()) for s in found), poset.n)
    return CoreExtraction(
        family=family,
        gamma=gamma,
        lam=lam,
        preconditions_held=not violations,
        lemma_bound=log_threshold(gamma, k, sub.n) if sub.n >= 2 else None,
    )


def theorem_general(
    poset: Poset,
    k: int,
    profile: BoundProfile,
    mode: Union[Mode, str] = Mode.RELAXED,
    ell_policy: Union[EllPolicy, str] = EllPolicy.FORMULA,
) -> ExtractionResult:
    """
    Find k disjoint sets forming a descending chain of sets or a totally
    incomparable family.

    Args:
        poset: The order
        k: Number of sets, at least 2
        profile: Bound profile (f, g)
        mode: strict checks g(k)^2 n >= 10^5 k f(k)^2 and the size guarantees;
            relaxed only needs ell * k < n
        ell_policy: Relaxed-mode choice of ell; ignored in strict mode

    Returns:
        ExtractionResult: Verified result

    Raises:
        RangeError: If k < 2
        PreconditionError: In strict mode, when an entry condition fails
        InstanceTooSmall: If ell * k >= n
        InvariantError: If the result fails its own verification
    """
    mode, ell_policy = Mode(mode), EllPolicy(ell_policy)
    if k < 2:
        raise RangeError(f"k must be at least 2, got {k}")
    n = poset.n
    if mode is Mode.STRICT:
        violations = general_violations(n, k, profile)
        if violations:
            raise PreconditionError(violations)

    counts = between_counts(poset)
    ell = formula_ell(n, k, profile)
    if mode is Mode.RELAXED:
        ell = max(1, ell)
        if ell_policy is EllPolicy.LARGEST_CHAIN:
            ell = largest_chain_ell(poset, k, counts, fallback=ell)
    if ell * k >= n:
        raise InstanceTooSmall(
            f"need ℓ·k < n, got ℓ={ell}, k={k}, n={n}", required=ell * k + 1, available=n
        )

    outcome = lemma6(poset, k, ell, counts)
    if outcome.variant is Lemma6Variant.SET_CHAIN:
        family = outcome.family.reversed()
        result = ExtractionResult(
            branch=Branch.DESCENDING_SET_CHAIN,
            sets=family,
            ell=ell,
            profile=profile.name,
            mode=mode,
            guaranteed_size=float(ell) if mode is Mode.STRICT else None,
            achieved_size=family.min_size,
        )
        if result.achieved_size < ell:
            raise InvariantError(f"chain sets smaller than ℓ={ell}")
        claim = Claim.DESCENDING_CHAIN
    else:
        side = CoreSide.DOWN if outcome.variant is Lemma6Variant.SPARSE_DOWN else CoreSide.UP
        logger.info(f"Delegating to incomparable extraction on a {side.value} core of {len(outcome.core)}")
        extraction = extract_from_core(poset, outcome.core, k, profile, side, mode)
        guarantee = None
        if mode is Mode.STRICT:
            guarantee = 7 * n / (16 * k * float(profile.f_exact(k)) * math.log(n))
        result = ExtractionResult(
            branch=Branch.TOTALLY_INCOMPARABLE,
            sets=extraction.family,
            ell=ell,
            profile=profile.name,
            mode=mode,
            gamma=extraction.gamma,
            lam=extraction.lam,
            guaranteed_size=guarantee,
            achieved_size=extraction.family.min_size,
            core_size=len(outcome.core),
            preconditions_held=extraction.preconditions_held,
            lemma_bound=extraction.lemma_bound,
        )
        if guarantee is not None and not meets_threshold(
            result.achieved_size, guarantee, GUARANTEE_SLACK
        ):
            logger.error(f"Achieved {result.achieved_size} below guarantee {guarantee:.4g}")
            raise InvariantError("incomparable sets smaller than 7n/(16 k f(k) ln n)")
        claim = Claim.TOTALLY_INCOMPARABLE

    check = verify_structure(poset, result.sets, claim)
    if not check:
        logger.error(f"Result fails {claim.value} at {check.counterexample}")
        raise InvariantError(f"result is not a {claim.value} family: {check.counterexample}")
    logger.info(f"{result.branch.value}: {k} sets, sizes {result.sets.sizes}, ℓ={ell}")
    return result


def theorem1(
    poset: Poset,
    k: int,
    mode: Union[Mode, str] = Mode.RELAXED,
    ell_policy: Union[EllPolicy, str] = EllPolicy.FORMULA,
) -> ExtractionResult:
    """General extraction with f(k) = 16(k-1), g(k) = 1/k; strict needs n >= (100k)^5."""
    if Mode(mode) is Mode.STRICT:
        violations = [] if poset.n >= (100 * k) ** 5 else ["n ≥ (100k)⁵"]
        violations += general_violations(poset.n, k, profile_thm1)
        if violations:
            raise PreconditionError(violations)
    return theorem_general(poset, k, profile_thm1, mode, ell_policy)


def theorem2(
    poset: Poset,
    k: int,
    mode: Union[Mode, str] = Mode.RELAXED,
    ell_policy: Union[EllPolicy, str] = EllPolicy.FORMULA,
) -> ExtractionResult:
    """General extraction with f(k) = 8k log2 k, g(k) = 1/2; strict needs n >= 10^10 k^3 ln(k)^2."""
    if Mode(mode) is Mode.STRICT:
        entry = 1e10 * k**3 * math.log(k) ** 2
        violations = [] if poset.n >= entry else ["n ≥ 10¹⁰ k³ (ln k)²"]
        violations += general_violations(poset.n, k, profile_thm2)
        if violations:
            raise PreconditionError(violations)
    return theorem_general(poset, k, profile_thm2, mode, ell_policy)


def run_theorem(
    poset: Poset,
    k: int,
    profile: str,
    mode: Union[Mode, str] = Mode.RELAXED,
    ell_policy: Union[EllPolicy, str] = EllPolicy.FORMULA,
) -> ExtractionResult:
    """Dispatch to theorem1 or theorem2 by profile name."""
    if profile == profile_thm1.name:
        return theorem1(poset, k, mode, ell_policy)
    if profile == profile_thm2.name:
        return theorem2(poset, k, mode, ell_policy)
    raise ValueError(f"unknown profile {profile!r}")


def _check_nk(n: int, k: int) -> None:
    if n < 3 or k < 2:
        raise RangeError(f"bounds need n ≥ 3 and k ≥ 2, got n={n}, k={k}")


def mk_bounds(n: int, k: int) -> BoundsReport:
    """
    Bounds on m_k(n).

    lower = n / (40 k^2 ln n), proven for n >= (100k)^5;
    upper = 200 n / (k^2 log2 n), from stacked copies of a sparse base.

    Raises:
        RangeError: Unless n >= 3 and k >= 2
    """
    _check_nk(n, k)
    return BoundsReport(
        n=n,
        k=k,
        lower=n / (40 * k * k * math.log(n)),
        upper=200 * n / (k * k * math.log2(n)),
        valid=n >= (100 * k) ** 5,
    )


def statement_bounds(
    theorem: Union[Theorem, str], n: int, k: int, profile: Optional[BoundProfile] = None
) -> StatementBounds:
    """
    Headline set sizes promised by each theorem and whether n is in range.

    Args:
        theorem: general, thm1 or thm2
        n: Ground size, at least 3
        k: Number of sets, at least 2
        profile: Profile for the general theorem (thm1's by default)
    """
    theorem = Theorem(theorem)
    _check_nk(n, k)
    if theorem is Theorem.THM1:
        chain = 1e-4 * n / k**5
        incomparable = n / (40 * k * k * math.log(n))
        valid = n >= (100 * k) ** 5
    elif theorem is Theorem.THM2:
        ln_k = math.log(k)
        chain = 1e-4 * n / (k**3 * ln_k**2)
        incomparable = n / (20 * k * k * ln_k * math.log(n))
        valid = n >= 1e10 * k**3 * ln_k**2
    else:
        profile = profile or profile_thm1
        f, g = float(profile.f_exact(k)), float(profile.g_exact(k))
        chain = g * g * n / (37 * k * f * f)
        incomparable = 7 * n / (16 * k * f * math.log(n))
        valid = not general_violations(n, k, profile)
    return StatementBounds(
        theorem=theorem, n=n, k=k, chain_size=chain, incomparable_size=incomparable, valid=valid
    )
