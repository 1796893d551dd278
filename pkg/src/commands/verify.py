"""verify: re-check a result file against its poset files."""

import logging

from src.driver import GUARANTEE_SLACK
from src.errors import ClaimRejected, OverlapError, UsageError
from src.multiorder import ground_size
from src.poset import Claim, SubsetFamily, verify_structure
from src.poset_io import read_poset, read_result

# Configure logging
logger = logging.getLogger(__name__)

CLAIMS = {
    ("set_chain", "ascending"): Claim.ASCENDING_CHAIN,
    ("set_chain", "descending"): Claim.DESCENDING_CHAIN,
    ("incomparable", None): Claim.TOTALLY_INCOMPARABLE,
}
RELATION_CLAIMS = {
    "ascending": Claim.ASCENDING_CHAIN,
    "descending": Claim.DESCENDING_CHAIN,
    "incomparable": Claim.TOTALLY_INCOMPARABLE,
}


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Check a result file exhaustively")
    parser.add_argument("--input", nargs="+", required=True, help="Poset file(s), one per order")
    parser.add_argument("--result", required=True, help="Result file written by find or multi")
    parser.set_defaults(handler=run)


def _check(poset, family, claim, label):
    try:
        verdict = verify_structure(poset, family, claim)
    except OverlapError as exc:
        raise ClaimRejected(f"{label}: {exc}") from exc
    if not verdict:
        a, b = verdict.counterexample
        raise ClaimRejected(f"{label}: {claim.value} fails at elements ({a}, {b})")


def run(args) -> int:
    """
    Verify every claim a result file makes.

    Raises:
        ClaimRejected: If a structure, the achieved size or the guarantee does not hold
        UsageError: If the number of poset files does not fit the result
        GroundMismatch: If the poset files have different element counts
    """
    result = read_result(args.result)
    posets = [read_poset(path) for path in args.input]
    n = ground_size(posets)
    family = SubsetFamily(tuple(tuple(members) for members in result.sets), n)

    if result.orders is not None:
        if len(posets) != len(result.orders):
            raise UsageError(f"result covers {len(result.orders)} orders, got {len(posets)} poset files")
        indices = sorted(entry.index for entry in result.orders)
        if indices != list(range(len(posets))):
            raise ClaimRejected(f"order indices must be 0..{len(posets) - 1} once each, got {indices}")
        for entry in result.orders:
            _check(posets[entry.index], family, RELATION_CLAIMS[entry.relation], f"order {entry.index}")
    else:
        if len(posets) != 1:
            raise UsageError("single-order results take exactly one poset file")
        _check(posets[0], family, CLAIMS[(result.kind, result.direction)], "result")

    if family.min_size != result.achieved:
        raise ClaimRejected(f"achieved size {result.achieved} but the smallest set has {family.min_size}")
    if result.guarantee is not None and result.achieved < result.guarantee * (1 - GUARANTEE_SLACK):
        raise ClaimRejected(f"achieved size {result.achieved} is below the guarantee {result.guarantee}")
    logger.info(f"verify: {args.result} holds")
    print("ok")
    return 0
