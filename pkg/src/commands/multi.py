"""multi: homogeneous sets for several orders on one ground set."""

import logging
import sys

from src.errors import UsageError
from src.multiorder import ScheduleMode, build_schedule, ground_size, theorem_multiple
from src.poset_io import dump_result, read_poset, result_from_homogeneous, write_output

# Configure logging
logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("multi", help="Find sets homogeneous in every given order")
    parser.add_argument("--inputs", nargs="+", required=True, help="One poset file per order")
    parser.add_argument("--k", type=int, required=True, help="Number of sets, at least 2")
    parser.add_argument(
        "--schedule", choices=[m.value for m in ScheduleMode], default=ScheduleMode.PRACTICAL.value
    )
    parser.add_argument("--out", help="Result file; standard output when omitted")
    parser.set_defaults(handler=run)


def run(args) -> int:
    if args.k < 2:
        raise UsageError(f"--k must be at least 2, got {args.k}")
    orders = [read_poset(path) for path in args.inputs]
    n = ground_size(orders)
    schedule = build_schedule(len(orders), args.k, n, args.schedule)
    logger.info(f"multi: schedule targets {schedule.as_dict()['targets']}")
    result = theorem_multiple(orders, args.k, schedule)

    relations = ",".join(relation.value for relation in result.relations)
    summary = f"k={args.k} sizes={list(result.sets.sizes)} relations={relations}"
    write_output(dump_result(result_from_homogeneous(result)), args.out)
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return 0
