"""Reading and writing poset files and result files."""

import json
import logging
import sys
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from src.driver import Branch, ExtractionResult
from src.errors import FormatError
from src.multiorder import HomogeneousResult, Relation
from src.poset import Poset, build_poset, covers
from src.schemas import OrderRelationEntry, PosetFile, ResultFile, ResultParams, rational_to_json

# Configure logging
logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def parse_edge_list(text: str) -> PosetFile:
    """Parse "n m" followed by m lines "u v"."""
    lines = [line.split() for line in text.splitlines() if line.strip()]
    try:
        n, m = (int(token) for token in lines[0])
        relations = [(int(u), int(v)) for u, v in lines[1:]]
    except (IndexError, ValueError) as exc:
        raise FormatError(f"malformed edge list: {exc}") from exc
    if len(relations) != m:
        raise FormatError(f"edge list header announces {m} relations, found {len(relations)}")
    try:
        return PosetFile(n=n, relations=relations)
    except ValidationError as exc:
        raise FormatError(f"invalid poset file: {exc}") from exc


def parse_poset_text(text: str) -> PosetFile:
    """Parse either the JSON layout or the edge-list layout."""
    if text.lstrip().startswith("{"):
        try:
            return PosetFile.model_validate_json(text)
        except ValidationError as exc:
            raise FormatError(f"invalid poset file: {exc}") from exc
    return parse_edge_list(text)


def read_poset(path: PathLike) -> Poset:
    """
    Load a poset file and close its relations.

    Raises:
        FormatError: If the file is unreadable or malformed
        RangeError: If a relation names an element outside [0, n)
        CycleError: If the relations contain a cycle
    """
    data = parse_poset_text(_read_text(path))
    poset = build_poset(data.n, data.relations)
    logger.info(f"Loaded {path}: {poset!r}")
    return poset


def poset_to_file(poset: Poset) -> PosetFile:
    """Poset file listing only the cover relations."""
    return PosetFile(n=poset.n, relations=list(covers(poset)))


def dump_poset(poset: Poset, fmt: str = "json") -> str:
    data = poset_to_file(poset)
    if fmt == "edges":
        lines = [f"{data.n} {len(data.relations)}"]
        lines.extend(f"{u} {v}" for u, v in data.relations)
        return "\n".join(lines) + "\n"
    return json.dumps({"n": data.n, "relations": [list(pair) for pair in data.relations]}) + "\n"


def read_result(path: PathLike) -> ResultFile:
    try:
        return ResultFile.model_validate_json(_read_text(path))
    except ValidationError as exc:
        raise FormatError(f"invalid result file: {exc}") from exc


def dump_result(result: ResultFile) -> str:
    return json.dumps(result.to_json_dict(), indent=2) + "\n"


def write_output(text: str, path: Optional[PathLike] = None) -> None:
    """Write to path, or to standard output when no path is given."""
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text)
    logger.info(f"Wrote {path}")


def result_from_extraction(result: ExtractionResult) -> ResultFile:
    chain = result.branch is Branch.DESCENDING_SET_CHAIN
    return ResultFile(
        kind="set_chain" if chain else "incomparable",
        direction="descending" if chain else None,
        sets=[list(members) for members in result.sets],
        params=ResultParams(
            l=result.ell,
            gamma=rational_to_json(result.gamma),
            lambda_=rational_to_json(result.lam),
        ),
        guarantee=result.guaranteed_size,
        achieved=result.achieved_size,
    )


def result_from_homogeneous(result: HomogeneousResult) -> ResultFile:
    """Multi-order result; kind and direction describe the first order."""
    first = result.relations[0]
    return ResultFile(
        kind="incomparable" if first is Relation.INCOMPARABLE else "set_chain",
        direction=None if first is Relation.INCOMPARABLE else first.value,
        sets=[list(members) for members in result.sets],
        achieved=result.sets.min_size,
        orders=[
            OrderRelationEntry(index=index, relation=relation.value)
            for index, relation in enumerate(result.relations)
        ],
    )
