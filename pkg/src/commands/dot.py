"""dot: Hasse diagram export."""

from src.poset import to_dot
from src.poset_io import read_poset, write_output


def register(subparsers) -> None:
    parser = subparsers.add_parser("dot", help="Write the Hasse diagram in DOT syntax")
    parser.add_argument("--input", required=True)
    parser.add_argument("--name", default="P", help="Graph name")
    parser.add_argument("--out", help="DOT file; standard output when omitted")
    parser.set_defaults(handler=run)


def run(args) -> int:
    write_output(to_dot(read_poset(args.input), args.name), args.out)
    return 0
