"""gen: write a generated poset file."""

import json
import logging

from src.errors import SpecError
from src.genlab import generate, parse_spec
from src.poset_io import dump_poset, write_output

# Configure logging
logger = logging.getLogger(__name__)

MODELS = ("chain", "antichain", "random-dag", "layered", "grid", "stacked")


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen", help="Generate a poset from a model and a seed")
    parser.add_argument("--model", choices=MODELS, required=True)
    parser.add_argument("--n", type=int, help="Element count (chain, antichain, random-dag)")
    parser.add_argument("--widths", help="Comma separated layer widths (layered)")
    parser.add_argument("--p", type=float, help="Edge probability (random-dag, layered)")
    parser.add_argument("--d1", type=int, help="First grid dimension")
    parser.add_argument("--d2", type=int, help="Second grid dimension")
    parser.add_argument("--base", help="Base generator spec as JSON (stacked)")
    parser.add_argument("--copies", type=int, help="Number of stacked copies")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=("json", "edges"), default="json")
    parser.add_argument("--out", help="Poset file; standard output when omitted")
    parser.set_defaults(handler=run)


def spec_from_args(args) -> dict:
    """Collect the generator fields that were given on the command line."""
    data = {"model": args.model, "seed": args.seed}
    for field in ("n", "p", "d1", "d2", "copies"):
        value = getattr(args, field)
        if value is not None:
            data[field] = value
    if args.widths is not None:
        try:
            data["widths"] = [int(w) for w in args.widths.split(",")]
        except ValueError as exc:
            raise SpecError(f"--widths must be comma separated integers: {args.widths!r}") from exc
    if args.base is not None:
        try:
            data["base"] = json.loads(args.base)
        except json.JSONDecodeError as exc:
            raise SpecError(f"--base is not valid JSON: {exc}") from exc
    return data


def run(args) -> int:
    spec = parse_spec(spec_from_args(args))
    poset = generate(spec)
    logger.info(f"gen: {spec.model} seed={spec.seed} gave {poset!r}")
    write_output(dump_poset(poset, args.format), args.out)
    return 0
