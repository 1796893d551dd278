"""profile: check a bound profile's conditions."""

import dataclasses

from src.errors import PreconditionError, UsageError
from src.incomparable import PROFILES, get_profile, validate_profile


def register(subparsers) -> None:
    parser = subparsers.add_parser("profile", help="Check the conditions a bound profile must meet")
    parser.add_argument("--profile", choices=sorted(PROFILES), default="thm1")
    parser.add_argument("--kmax", type=int, default=64)
    parser.set_defaults(handler=run)


def run(args) -> int:
    if args.kmax < 1:
        raise UsageError(f"--kmax must be at least 1, got {args.kmax}")
    profile = dataclasses.replace(get_profile(args.profile), kmax=args.kmax)
    violations = validate_profile(profile)
    if violations:
        for violation in violations:
            print(violation)
        raise PreconditionError(violations)
    print(f"{profile.name}: ok up to k={profile.kmax}")
    return 0
