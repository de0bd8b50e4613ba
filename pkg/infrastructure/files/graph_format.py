"""Line-oriented text formats for graphs, matchings and outcomes.

Graph files hold `n <count>` followed by `e <i> <j> <w>` lines; outcome
files hold `m <i> <j>` lines and one `a <α_1> ... <α_n>` line. Blank lines
and `#` comments are ignored everywhere, vertices are 1-based.
"""
import logging
from collections.abc import Iterator
from fractions import Fraction
from pathlib import Path

from pydantic import ValidationError

from domain.core.errors import GraphFormatError
from domain.schemas import Matching, Outcome, WeightedGraph, normalize_edge

logger = logging.getLogger(__name__)


def _records(text: str) -> Iterator[tuple[int, list[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {token!r}", line) from None


def _number(token: str, line: int) -> float:
    try:
        return float(Fraction(token))
    except (ValueError, ZeroDivisionError):
        raise GraphFormatError(f"expected a number, got {token!r}", line) from None


def _arity(fields: list[str], count: int, line: int) -> None:
    if len(fields) != count:
        raise GraphFormatError(f"'{fields[0]}' takes {count - 1} values, got {len(fields) - 1}", line)


def parse_graph(text: str) -> WeightedGraph:
    n = None
    weights: dict[tuple[int, int], float] = {}

    for line, fields in _records(text):
        tag = fields[0]
        if tag == "n":
            _arity(fields, 2, line)
            if n is not None:
                raise GraphFormatError("duplicate 'n' header", line)
            n = _int(fields[1], line)
            if n < 0:
                raise GraphFormatError("agent count must be nonnegative", line)
        elif tag == "e":
            _arity(fields, 4, line)
            if n is None:
                raise GraphFormatError("edge before the 'n' header", line)
            i, j = _int(fields[1], line), _int(fields[2], line)
            w = _number(fields[3], line)
            if i == j:
                raise GraphFormatError(f"self-loop at vertex {i}", line)
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphFormatError(f"edge ({i}, {j}) outside vertices 1..{n}", line)
            if w < 0:
                raise GraphFormatError(f"negative weight {fields[3]}", line)
            key = normalize_edge(i, j)
            if key in weights:
                raise GraphFormatError(f"duplicate edge {key}", line)
            weights[key] = w
        else:
            raise GraphFormatError(f"unknown record {tag!r}", line)

    if n is None:
        raise GraphFormatError("missing 'n' header")
    return WeightedGraph(n=n, weights=weights)


def dump_graph(g: WeightedGraph) -> str:
    lines = [f"n {g.n}"]
    lines += [f"e {i} {j} {repr(g.weight(i, j))}" for i, j in g.edges]
    return "\n".join(lines) + "\n"


def parse_outcome(text: str, n: int) -> Outcome:
    pairs: list[tuple[int, int]] = []
    alloc: list[float] | None = None

    for line, fields in _records(text):
        tag = fields[0]
        if tag == "m":
            _arity(fields, 3, line)
            pairs.append((_int(fields[1], line), _int(fields[2], line)))
        elif tag == "a":
            if alloc is not None:
                raise GraphFormatError("duplicate allocation line", line)
            alloc = [_number(token, line) for token in fields[1:]]
            if len(alloc) != n:
                raise GraphFormatError(f"allocation has {len(alloc)} entries, expected {n}", line)
        else:
            raise GraphFormatError(f"unknown record {tag!r}", line)

    if alloc is None:
        raise GraphFormatError("missing allocation line")
    try:
        return Outcome(matching=Matching(pairs=pairs), alloc=alloc)
    except ValidationError as exc:
        raise GraphFormatError(f"invalid matching: {exc.errors()[0]['msg']}") from exc


def parse_matching(text: str) -> Matching:
    pairs = []
    for line, fields in _records(text):
        if fields[0] != "m":
            raise GraphFormatError(f"unknown record {fields[0]!r}", line)
        _arity(fields, 3, line)
        pairs.append((_int(fields[1], line), _int(fields[2], line)))
    try:
        return Matching(pairs=pairs)
    except ValidationError as exc:
        raise GraphFormatError(f"invalid matching: {exc.errors()[0]['msg']}") from exc


def dump_outcome(o: Outcome) -> str:
    lines = [f"m {i} {j}" for i, j in o.matching.sorted_pairs()]
    lines.append("a " + " ".join(repr(a) for a in o.alloc))
    return "\n".join(lines) + "\n"


def _read(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc.strerror}") from exc


def load_graph(path: Path) -> WeightedGraph:
    g = parse_graph(_read(path))
    logger.debug(f"Graph_loaded path={path} n={g.n} edges={g.n_edges}")
    return g


def load_outcome(path: Path, n: int) -> Outcome:
    return parse_outcome(_read(path), n)


def load_matching(path: Path) -> Matching:
    return parse_matching(_read(path))


def save_graph(g: WeightedGraph, path: Path) -> None:
    Path(path).write_text(dump_graph(g), encoding="utf-8")
