"""bounds: print estimates of m_k(n)."""

from src.driver import Theorem, mk_bounds, statement_bounds


def register(subparsers) -> None:
    parser = subparsers.add_parser("bounds", help="Print lower and upper bounds on m_k(n)")
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--k", type=int, required=True)
    parser.add_argument(
        "--theorem",
        choices=[t.value for t in Theorem],
        help="Also print the set sizes this theorem promises",
    )
    parser.set_defaults(handler=run)


def run(args) -> int:
    report = mk_bounds(args.n, args.k)
    print(f"n: {report.n}")
    print(f"k: {report.k}")
    print(f"lower: {report.lower:.6g} ({report.note})")
    print(f"upper: {report.upper:.6g}")
    if args.theorem:
        promised = statement_bounds(args.theorem, args.n, args.k)
        validity = "valid" if promised.valid else "not valid"
        print(f"{promised.theorem.value} chain size: {promised.chain_size:.6g}")
        print(f"{promised.theorem.value} incomparable size: {promised.incomparable_size:.6g}")
        print(f"{promised.theorem.value} range: {validity} at this n")
    return 0
