"""Line-oriented text formats for graphs, policies and cost vectors.

Graph file::

    rsp 1
    nodes 2
    control 1 go
    arc 1 go 2 3/2
    arc 1 go t -1
    ...

Control declaration order is the tie-break order. Lengths are decimals or
``p/q`` rationals and are read exactly. ``#`` starts a comment.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .bellman import format_value
from .errors import RspError
from .graph import DEST, INF, Control, RspGraph, node_label, validate_graph

MAGIC = "rsp"
VERSION = "1"


class ParseError(RspError):
    """Syntax the reader cannot make sense of."""

    def __init__(self, msg: str, line: int | None = None):
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


class GraphValidationError(RspError):
    """The file parsed but describes an ill-formed graph."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


def _lines(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield i, body.split()


def parse_number(tok: str, line: int | None = None, floating: bool = False):
    try:
        v = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad number {tok!r}", line) from None
    return float(v) if floating else v


def _parse_int(tok: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", line) from None


def _parse_node(tok: str, line: int) -> int:
    return DEST if tok == "t" else _parse_int(tok, line)


def parse_graph(text: str, floating: bool = False) -> RspGraph:
    """Parse and validate. Raises ParseError on syntax, GraphValidationError on structure."""
    lines = list(_lines(text))
    if not lines or lines[0][1] != [MAGIC, VERSION]:
        raise ParseError(f"first line must be '{MAGIC} {VERSION}'", lines[0][0] if lines else None)
    n = None
    table: dict[int, dict[str, list]] = {}
    problems = []
    for ln, toks in lines[1:]:
        kw = toks[0]
        if kw == "nodes":
            if len(toks) != 2:
                raise ParseError("usage: nodes N", ln)
            if n is not None:
                raise ParseError("repeated nodes line", ln)
            n = _parse_int(toks[1], ln)
            continue
        if n is None:
            raise ParseError("'nodes' must precede controls and arcs", ln)
        if kw == "control":
            if len(toks) != 3:
                raise ParseError("usage: control X NAME", ln)
            x, name = _parse_int(toks[1], ln), toks[2]
            if not 1 <= x <= n:
                problems.append(f"line {ln}: control at node {x} outside 1..{n}")
                continue
            row = table.setdefault(x, {})
            if name in row:
                problems.append(f"line {ln}: duplicate control {name!r} at node {x}")
                continue
            row[name] = []
        elif kw == "arc":
            if len(toks) != 5:
                raise ParseError("usage: arc X NAME Y G", ln)
            x, name = _parse_int(toks[1], ln), toks[2]
            y, w = _parse_node(toks[3], ln), parse_number(toks[4], ln, floating)
            if name not in table.get(x, {}):
                problems.append(f"line {ln}: arc references undeclared control {name!r} at node {x}")
                continue
            table[x][name].append((y, w))
        else:
            raise ParseError(f"unknown keyword {kw!r}", ln)
    if n is None:
        raise ParseError("missing 'nodes' line")
    rows = tuple(
        tuple(Control(name, tuple(arcs)) for name, arcs in table.get(x, {}).items())
        for x in range(1, n + 1)
    )
    g = RspGraph(n, rows)
    problems += validate_graph(g)
    if problems:
        raise GraphValidationError(problems)
    return g


def format_graph(g: RspGraph) -> str:
    out = [f"{MAGIC} {VERSION}", f"nodes {g.n}"]
    for x in g.nodes:
        for c in g.U(x):
            out.append(f"control {x} {c.name}")
            for y, w in c.arcs:
                out.append(f"arc {x} {c.name} {node_label(y)} {format_value(w)}")
    return "\n".join(out) + "\n"


def read_graph(path, floating: bool = False) -> RspGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"), floating)


def write_graph(g: RspGraph, path) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8")


def format_policy(g: RspGraph, mu) -> str:
    return "".join(f"{x} {name}\n" for x, name in zip(g.nodes, g.policy_names(mu)))


def parse_policy(g: RspGraph, text: str) -> tuple:
    mu = [None] * g.n
    for ln, toks in _lines(text):
        if len(toks) != 2:
            raise ParseError("usage: X NAME", ln)
        x = _parse_int(toks[0], ln)
        if not 1 <= x <= g.n:
            raise ParseError(f"node {x} outside 1..{g.n}", ln)
        try:
            mu[x - 1] = g.control_index(x, toks[1])
        except KeyError as e:
            raise ParseError(str(e.args[0]), ln) from None
    missing = [x for x in g.nodes if mu[x - 1] is None]
    if missing:
        raise ParseError(f"policy file misses nodes {missing}")
    return tuple(mu)


def format_costs(J) -> str:
    return "".join(f"{x} {format_value(v)}\n" for x, v in enumerate(J, start=1))


def parse_costs(n: int, text: str, floating: bool = False) -> tuple:
    J = [None] * n
    for ln, toks in _lines(text):
        if len(toks) != 2:
            raise ParseError("usage: X VALUE", ln)
        x = _parse_int(toks[0], ln)
        if not 1 <= x <= n:
            raise ParseError(f"node {x} outside 1..{n}", ln)
        tok = toks[1]
        J[x - 1] = INF if tok == "inf" else -INF if tok == "-inf" else parse_number(tok, ln, floating)
    missing = [x for x in range(1, n + 1) if J[x - 1] is None]
    if missing:
        raise ParseError(f"cost file misses nodes {missing}")
    return tuple(J)


def is_floating(g: RspGraph) -> bool:
    return any(isinstance(w, float) for w in g.lengths())
