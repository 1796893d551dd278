"""find: extract k sets from one partial order."""

import logging
import sys

from src.driver import EllPolicy, Mode, run_theorem
from src.errors import UsageError
from src.incomparable import PROFILES
from src.poset_io import dump_result, read_poset, result_from_extraction, write_output

# Configure logging
logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("find", help="Find a chain of sets or a totally incomparable family")
    parser.add_argument("--input", required=True, help="Poset file (JSON or edge list)")
    parser.add_argument("--k", type=int, required=True, help="Number of sets, at least 2")
    parser.add_argument("--profile", choices=sorted(PROFILES), default="thm1")
    parser.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.RELAXED.value)
    parser.add_argument(
        "--ell-policy",
        choices=[p.value for p in EllPolicy],
        default=EllPolicy.FORMULA.value,
        help="How relaxed mode picks the set size of the chain branch",
    )
    parser.add_argument("--out", help="Result file; standard output when omitted")
    parser.set_defaults(handler=run)


def run(args) -> int:
    """
    Run the extraction and write the result file.

    The one-line summary goes to standard output when the result is written
    to a file, and to standard error otherwise.
    """
    if args.k < 2:
        raise UsageError(f"--k must be at least 2, got {args.k}")
    poset = read_poset(args.input)
    result = run_theorem(poset, args.k, args.profile, args.mode, args.ell_policy)
    logger.info(f"find: {result.branch.value} with sizes {result.sets.sizes}")

    summary = (
        f"branch={result.branch.value} k={args.k} sizes={list(result.sets.sizes)} "
        f"achieved={result.achieved_size} guarantee={result.guaranteed_size}"
    )
    write_output(dump_result(result_from_extraction(result)), args.out)
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return 0
