"""Knot notation: PD literals, the expression language and the knot table.

Expression grammar (whitespace-insensitive)::

    expr := term ('#' term)*
    term := atom '!'?
    atom := NAME | 'K[' INT ']' | 'U' | 'hopf' | 'hopf-' | 'PD[' ... ']'
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .diagram import (
    DiagramError,
    PlanarDiagram,
    component_count,
    default_orientation,
    mirror,
    render_pd,
    standardize,
    unknot,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class TableError(ValueError):
    """Schema or consistency problem in a knot-table file."""


# ---------------------------------------------------------------------------
# PD literals

_WS = re.compile(r"\s*")
_INT = re.compile(r"\d+")


class _Scanner:
    def __init__(self, text: str, pos: int = 0):
        self.text = text
        self.pos = pos

    def skip(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        self.skip()
        if not self.text.startswith(s, self.pos):
            found = self.text[self.pos:self.pos + 1] or "end of input"
            raise ParseError(f"expected {s!r}, found {found!r}", self.pos)
        self.pos += len(s)

    def integer(self, signed: bool = False) -> int:
        self.skip()
        start = self.pos
        if signed and self.text.startswith(("-", "+"), self.pos):
            self.pos += 1
        m = _INT.match(self.text, self.pos)
        if not m:
            raise ParseError("expected an integer", start)
        self.pos = m.end()
        return int(self.text[start:self.pos])

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)


def _parse_pd_at(sc: _Scanner) -> PlanarDiagram:
    start = sc.pos
    sc.expect("PD[")
    crossings = []
    loops = 0
    if not sc.peek("]"):
        while True:
            if sc.peek("O"):
                sc.expect("O")
                loops += 1
            else:
                sc.expect("X(")
                labels = []
                for k in range(4):
                    if k:
                        sc.expect(",")
                    pos = sc.pos
                    v = sc.integer()
                    if v <= 0:
                        raise ParseError("arc labels must be positive", pos)
                    labels.append(v)
                sc.expect(")")
                crossings.append(tuple(labels))
            if sc.peek(","):
                sc.expect(",")
                continue
            break
    sc.expect("]")
    if not crossings and not loops:
        loops = 1
    try:
        return PlanarDiagram(tuple(crossings), loops)
    except DiagramError as exc:
        raise ParseError(str(exc), start) from None


def parse_pd(text: str) -> PlanarDiagram:
    """Parse ``PD[X(a,b,c,d), ...]``; ``PD[]`` is the crossingless unknot."""
    sc = _Scanner(text)
    d = _parse_pd_at(sc)
    if not sc.at_end():
        raise ParseError("trailing input after PD literal", sc.pos)
    return d


# ---------------------------------------------------------------------------
# expression AST


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Family:
    m: int


@dataclass(frozen=True)
class Literal:
    kind: str  # "U", "hopf", "hopf-"


@dataclass(frozen=True)
class PDLiteral:
    diagram: PlanarDiagram


@dataclass(frozen=True)
class Mirror:
    operand: "KnotExpr"


@dataclass(frozen=True)
class Sum:
    summands: tuple["KnotExpr", ...]


KnotExpr = Name | Family | Literal | PDLiteral | Mirror | Sum

_NAME = re.compile(r"[A-Za-z0-9_]+")


def parse_expr(text: str) -> KnotExpr:
    sc = _Scanner(text)
    terms = [_parse_term(sc)]
    while sc.peek("#"):
        sc.expect("#")
        terms.append(_parse_term(sc))
    if not sc.at_end():
        raise ParseError(f"unexpected {sc.text[sc.pos]!r}", sc.pos)
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def _parse_term(sc: _Scanner) -> KnotExpr:
    sc.skip()
    pos = sc.pos
    if sc.peek("PD["):
        atom: KnotExpr = PDLiteral(_parse_pd_at(sc))
    elif sc.peek("K["):
        sc.expect("K[")
        ipos = sc.pos
        try:
            m = sc.integer(signed=True)
        except ParseError:
            raise ParseError("malformed integer in K[m]", ipos) from None
        sc.expect("]")
        atom = Family(m)
    else:
        match = _NAME.match(sc.text, pos)
        if not match:
            found = sc.text[pos:pos + 1] or "end of input"
            raise ParseError(f"expected a knot term, found {found!r}", pos)
        word = match.group(0)
        sc.pos = match.end()
        if word == "hopf" and sc.text.startswith("-", sc.pos):
            sc.pos += 1
            atom = Literal("hopf-")
        elif word in ("U", "hopf"):
            atom = Literal(word)
        else:
            atom = Name(word)
    if sc.peek("!"):
        sc.expect("!")
        atom = Mirror(atom)
    return atom


def render_expr(e: KnotExpr) -> str:
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Family):
        return f"K[{e.m}]"
    if isinstance(e, Literal):
        return e.kind
    if isinstance(e, PDLiteral):
        return render_pd(e.diagram)
    if isinstance(e, Mirror):
        return render_expr(e.operand) + "!"
    return "#".join(render_expr(s) for s in e.summands)


def summands(e: KnotExpr) -> list[KnotExpr]:
    """Connected summands with mirrors pushed inside sums."""
    if isinstance(e, Sum):
        return [s for t in e.summands for s in summands(t)]
    if isinstance(e, Mirror) and isinstance(e.operand, Sum):
        return [s for t in e.operand.summands for s in summands(Mirror(t))]
    if isinstance(e, Mirror) and isinstance(e.operand, Mirror):
        return summands(e.operand.operand)
    return [e]


# ---------------------------------------------------------------------------
# knot table


@dataclass(frozen=True)
class KnotRecord:
    name: str
    pd: PlanarDiagram
    components: int
    u: tuple[int, int]
    u2: int | None = None
    bu: int | None = None
    note: str = ""

    @property
    def ambiguous(self) -> bool:
        return "ambiguity" in self.note

    @property
    def crossings(self) -> int:
        return self.pd.n


@dataclass
class KnotTable:
    records: dict[str, KnotRecord] = field(default_factory=dict)

    def __contains__(self, name: str) -> bool:
        return name in self.records

    def __getitem__(self, name: str) -> KnotRecord:
        return self.records[name]

    def __len__(self) -> int:
        return len(self.records)

    def names(self) -> list[str]:
        return sorted(self.records, key=knot_sort_key)


def knot_sort_key(name: str):
    """Order names like 3_1 < 3_1! < 10_1 < composites."""
    parts = []
    for piece in name.split("#"):
        m = re.fullmatch(r"(\d+)_(\d+)(!?)", piece)
        parts.append((int(m.group(1)), int(m.group(2)), m.group(3)) if m else (10**6, 0, piece))
    return (len(parts), parts)


_FIELDS = {"name", "pd", "components", "u", "u2", "bu", "note"}


def _record_from_json(obj, lineno: int) -> KnotRecord:
    def fail(msg):
        raise TableError(f"line {lineno}: {msg}")

    if not isinstance(obj, dict):
        fail("record must be a JSON object")
    extra = set(obj) - _FIELDS
    if extra:
        fail(f"unknown field(s) {sorted(extra)}")
    for key in ("name", "pd", "components", "u"):
        if key not in obj:
            fail(f"missing field {key!r}")
    name = obj["name"]
    if not isinstance(name, str) or not name:
        fail("field 'name' must be a nonempty string")
    pd = obj["pd"]
    if not isinstance(pd, list) or not all(
        isinstance(c, list) and len(c) == 4 and all(isinstance(a, int) and a > 0 for a in c) for c in pd
    ):
        fail("field 'pd' must be a list of four positive integers per crossing")
    try:
        diagram = PlanarDiagram(tuple(tuple(c) for c in pd), 0 if pd else 1)
    except DiagramError as exc:
        fail(f"field 'pd': {exc}")
    comps = obj["components"]
    if not isinstance(comps, int) or comps < 1:
        fail("field 'components' must be a positive integer")
    if component_count(diagram) != comps:
        fail(f"field 'components' is {comps} but the PD code has {component_count(diagram)}")
    u = obj["u"]
    if not (isinstance(u, list) and len(u) == 2 and all(isinstance(v, int) and v >= 0 for v in u) and u[0] <= u[1]):
        fail("field 'u' must be [lo, hi] with 0 <= lo <= hi")
    opt = {}
    for key in ("u2", "bu"):
        v = obj.get(key)
        if v is not None and (not isinstance(v, int) or v < 0):
            fail(f"field {key!r} must be a nonnegative integer")
        opt[key] = v
    note = obj.get("note", "")
    if not isinstance(note, str):
        fail("field 'note' must be a string")
    return KnotRecord(name, diagram, comps, (u[0], u[1]), opt["u2"], opt["bu"], note)


def load_knot_table(path: str | Path) -> KnotTable:
    table = KnotTable()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TableError(f"line {lineno}: invalid JSON ({exc.msg})") from None
            rec = _record_from_json(obj, lineno)
            if rec.name in table.records:
                raise TableError(f"line {lineno}: duplicate name {rec.name!r}")
            table.records[rec.name] = rec
    return table


def record_to_json(rec: KnotRecord) -> str:
    obj = {"name": rec.name, "pd": [list(c) for c in rec.pd.crossings], "components": rec.components,
           "u": list(rec.u)}
    if rec.u2 is not None:
        obj["u2"] = rec.u2
    if rec.bu is not None:
        obj["bu"] = rec.bu
    obj["note"] = rec.note
    return json.dumps(obj, separators=(", ", ": "))


DEFAULT_DATA = Path(__file__).with_name("data") / "knots.jsonl"


def default_table_path() -> Path:
    import os

    env = os.environ.get("KNOTBAND_DATA")
    return Path(env) if env else DEFAULT_DATA


# ---------------------------------------------------------------------------
# diagram constructions

HOPF_POSITIVE = PlanarDiagram(((4, 1, 3, 2), (2, 3, 1, 4)))
HOPF_NEGATIVE = PlanarDiagram(((1, 4, 2, 3), (3, 2, 4, 1)))


def hopf(sign: int = 1) -> PlanarDiagram:
    """Hopf link whose crossings have the given sign under the default orientation."""
    return HOPF_POSITIVE if sign > 0 else HOPF_NEGATIVE


def connected_sum(d1: PlanarDiagram, d2: PlanarDiagram) -> PlanarDiagram:
    """Splice the lowest-numbered arcs of two knot diagrams."""
    for k, d in enumerate((d1, d2), 1):
        if component_count(d) != 1:
            raise DiagramError(f"connected-sum operand {k} has {component_count(d)} components")
    if not d1.n:
        return d2
    if not d2.n:
        return d1
    offset = max(d1.arcs())
    shifted = [tuple(a + offset for a in c) for c in d2.crossings]
    a1 = min(d1.arcs())
    a2 = min(d2.arcs()) + offset
    o1 = default_orientation(d1)
    o2 = default_orientation(d2)
    y1 = o1.heads[a1]
    y2 = o2.heads[a2 - offset]
    cs1 = [list(c) for c in d1.crossings]
    cs2 = [list(c) for c in shifted]
    # tail of a1 now runs into the head of a2, tail of a2 into the head of a1
    cs2[y2[0]][y2[1]] = a1
    cs1[y1[0]][y1[1]] = a2
    return standardize(PlanarDiagram(tuple(map(tuple, cs1 + cs2)), 0))


# K_m: a fixed template with one crossing replaced by a row of twists.
# ``KM_TEMPLATE`` is a diagram of K_1 = 8_21; crossing ``KM_TWIST`` is the
# single twist and ``KM_DIRECTION`` selects the axis along which further
# twists are stacked (0: the row whose empty tangle is the A-smoothing).
# ``KM_STAR`` indexes, in every km_diagram(m), the crossing whose change
# unknots the knot.
KM_TEMPLATE = PlanarDiagram((
    (6, 1, 7, 2), (13, 5, 14, 4), (8, 5, 9, 6), (2, 7, 3, 8),
    (12, 9, 13, 10), (16, 11, 1, 12), (3, 15, 4, 14), (10, 15, 11, 16),
))
KM_TWIST = 2
KM_DIRECTION = 0
KM_STAR = 0


def twist_row(d: PlanarDiagram, c: int, direction: int, count: int) -> PlanarDiagram:
    """Replace crossing ``c`` by ``|count|`` twists along one axis.

    Positive ``count`` repeats crossing ``c`` itself; negative uses its
    mirror picture; zero inserts the smoothing that empties the row.
    """
    p = d.crossings[c]
    frame = p if direction == 0 else (p[1], p[2], p[3], p[0])
    bl, br, tr, tl = frame
    same_under_bl = direction == 0
    n = abs(count)
    rest = [x for k, x in enumerate(d.crossings) if k != c]
    if n == 0:
        from .diagram import _rewire

        return _rewire(d, {c}, [(bl, br), (tr, tl)])
    nxt = max(d.arcs()) + 1
    bottom = [bl] + [nxt + k for k in range(n - 1)] + [br]
    top = [tl] + [nxt + n - 1 + k for k in range(n - 1)] + [tr]
    under_bl = same_under_bl == (count > 0)
    row = []
    for k in range(n):
        BL, BR, TR, TL = bottom[k], bottom[k + 1], top[k + 1], top[k]
        row.append((BL, BR, TR, TL) if under_bl else (BR, TR, TL, BL))
    return PlanarDiagram(tuple(rest + row), d.free_loops)


def km_diagram(m: int) -> PlanarDiagram:
    """Diagram of the twist-family member K_m."""
    return standardize(twist_row(KM_TEMPLATE, KM_TWIST, KM_DIRECTION, m))


# ---------------------------------------------------------------------------
# expression evaluation


def expr_diagram(e: KnotExpr, table: KnotTable) -> PlanarDiagram:
    if isinstance(e, Name):
        if e.name not in table:
            raise ParseError(f"unknown knot name {e.name!r}")
        return table[e.name].pd
    if isinstance(e, Family):
        return km_diagram(e.m)
    if isinstance(e, Literal):
        return {"U": unknot(), "hopf": hopf(1), "hopf-": hopf(-1)}[e.kind]
    if isinstance(e, PDLiteral):
        return e.diagram
    if isinstance(e, Mirror):
        return mirror(expr_diagram(e.operand, table))
    parts = [expr_diagram(s, table) for s in e.summands]
    for s, d in zip(e.summands, parts):
        if component_count(d) != 1:
            raise ParseError(f"'#' operand {render_expr(s)!r} is a {component_count(d)}-component link")
    out = parts[0]
    for d in parts[1:]:
        out = connected_sum(out, d)
    return out


def parse_knot_expr(text: str, table: KnotTable) -> PlanarDiagram:
    return expr_diagram(parse_expr(text), table)


__all__ = [
    "KnotExpr", "KnotRecord", "KnotTable", "ParseError", "TableError", "connected_sum", "expr_diagram",
    "hopf", "km_diagram", "load_knot_table", "mirror", "parse_expr", "parse_knot_expr", "parse_pd",
    "render_expr", "summands", "twist_row",
]
