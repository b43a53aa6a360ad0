"""Interval deduction for band-unknotting numbers and band-Gordian distances.

A problem is either a single knot or link compared with the unknot (bounds
on bu and u2) or a pair of knots or links (bounds on bd and d2).  Each rule
reads exact invariants and known unknotting data and can only narrow the
two intervals.  After every rule a parity closure enforces

    bd in {d2 - 1, d2}, and bd = d2 unless d2 is odd and at least 3,

so the pair (bd, d2) always stays jointly feasible.  Rules run in a fixed
order until a full round changes nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Literal

from .algebra import Cyclo12
from .diagram import PlanarDiagram, canonical_code, simplify
from .invariants.engine import InvariantSet, invariants
from .invariants.qpoly import QEvaluator
from .notation import (
    Family, KnotExpr, KnotRecord, KnotTable, Mirror, Name, expr_diagram, parse_expr, render_expr, summands,
)

Mode = Literal["derived", "asserted"]


class Contradiction(RuntimeError):
    def __init__(self, message: str, trace: list[dict]):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class Interval:
    lo: int = 0
    hi: int | None = None  # None: unbounded

    def __post_init__(self):
        if self.lo < 0:
            object.__setattr__(self, "lo", 0)

    @property
    def empty(self) -> bool:
        return self.hi is not None and self.hi < self.lo

    def raise_lo(self, v: int) -> "Interval":
        return Interval(max(self.lo, v), self.hi)

    def lower_hi(self, v: int) -> "Interval":
        return Interval(self.lo, v if self.hi is None else min(self.hi, v))

    def pinned(self) -> int | None:
        return self.lo if self.hi == self.lo else None

    def to_json(self):
        return [self.lo, self.hi]

    def __str__(self):
        return f"[{self.lo},inf)" if self.hi is None else f"[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class BoundState:
    """``db`` bounds bu or bd; ``d2`` bounds u2 or d2 (None when undefined, i.e. for links)."""

    db: Interval = Interval()
    d2: Interval | None = Interval()
    trace: tuple[dict, ...] = field(default=(), compare=False)

    def key(self):
        return (self.db, self.d2)

    def snapshot(self) -> dict:
        return {"db": self.db.to_json(), "d2": self.d2.to_json() if self.d2 else None}


# ---------------------------------------------------------------------------
# facts


@dataclass(frozen=True)
class Operand:
    label: str
    inv: InvariantSet
    u: tuple[int, int] | None = None
    summand_u: tuple[tuple[int, int] | None, ...] = ()
    asserted_bu: int | None = None
    asserted_u2: int | None = None
    provenance: str = ""
    summands: tuple["Operand", ...] = ()

    @property
    def is_knot(self) -> bool:
        return self.inv.components == 1


@dataclass(frozen=True)
class Facts:
    left: Operand
    right: Operand | None = None  # None: compare with the unknot
    gordian: tuple[int, int] | None = None
    mode: Mode = "derived"
    # per-operand results against the unknot, used by the triangle rule
    left_state: BoundState | None = None
    right_state: BoundState | None = None
    summand_states: tuple[BoundState, ...] = ()

    @property
    def single(self) -> bool:
        return self.right is None

    @property
    def knots(self) -> bool:
        return self.left.is_knot and (self.right is None or self.right.is_knot)


def _pair_invariants(f: Facts):
    other = f.right.inv if f.right else _unknot_invariants()
    return f.left.inv, other


_UNKNOT_INV: InvariantSet | None = None


def _unknot_invariants() -> InvariantSet:
    global _UNKNOT_INV
    if _UNKNOT_INV is None:
        from .diagram import unknot

        _UNKNOT_INV = invariants(unknot())
    return _UNKNOT_INV


# ---------------------------------------------------------------------------
# rules: each returns the new state (without trace bookkeeping)


RuleFn = Callable[[Facts, BoundState], BoundState]


def rule_e2(f: Facts, s: BoundState) -> BoundState:
    a, b = _pair_invariants(f)
    return replace(s, db=s.db.raise_lo(abs(a.e2 - b.e2)))


def rule_delta(f: Facts, s: BoundState) -> BoundState:
    a, b = _pair_invariants(f)
    # |V(L;w)/V(M;w)| = sqrt3^n with n = delta(L) - delta(M)
    return replace(s, db=s.db.raise_lo(abs(a.omega_class.delta - b.omega_class.delta)))


def rule_lambda(f: Facts, s: BoundState) -> BoundState:
    a, b = _pair_invariants(f)
    if a.lambda_class is None or b.lambda_class is None:
        return s
    sign = a.lambda_class[0] * b.lambda_class[0]
    n = abs(a.lambda_class[1] - b.lambda_class[1])
    return replace(s, db=s.db.raise_lo(n if sign > 0 else n + 1))


def rule_moebius(f: Facts, s: BoundState) -> BoundState:
    if not f.single or not f.left.is_knot:
        return s
    inv = f.left.inv
    if (inv.signature - 4 * inv.arf) % 8 in (0, 2, 6):
        return s
    return replace(s, db=s.db.raise_lo(2))


def rule_linking_form(f: Facts, s: BoundState) -> BoundState:
    if not f.single or not f.left.is_knot or s.d2 is None:
        return s
    lk = f.left.inv.linking_form
    if lk is None or lk.represents_unit():
        return s
    # one band move from the unknot is integral surgery on a knot in S^3
    return replace(s, d2=s.d2.raise_lo(2))


def rule_distance_two(f: Facts, s: BoundState) -> BoundState:
    if not f.knots or s.d2 is None:
        return s
    a, b = _pair_invariants(f)
    for j, k in ((a, b), (b, a)):
        if j.v_omega != k.v_omega * Cyclo12.from_int(3):
            continue
        ds = (j.signature - k.signature) % 8
        if (ds == 0 and j.arf != k.arf) or (ds == 4 and j.arf == k.arf):
            return replace(s, d2=s.d2.raise_lo(3))
    return s


def _band_from_crossings(d: int) -> int:
    return d if d % 2 == 0 else d + 1


def _all_unknotting_one(ops) -> bool:
    return len(ops) == 2 and all(u == (1, 1) for u in ops)


def rule_upper_from_u(f: Facts, s: BoundState) -> BoundState:
    if not f.knots:
        return s
    dist = f.left.u if f.single else f.gordian
    db, d2 = s.db, s.d2
    if dist is not None:
        hi = dist[1]
        db = db.lower_hi(_band_from_crossings(hi))
        d2 = d2.lower_hi(hi + 1)
    if f.single and _all_unknotting_one(f.left.summand_u):
        db = db.lower_hi(2)
    if not f.single and f.left.u == (1, 1) and f.right.u == (1, 1):
        db = db.lower_hi(2)
    return replace(s, db=db, d2=d2)


def rule_triangle(f: Facts, s: BoundState) -> BoundState:
    """Distances to the unknot bound the distance between two operands."""
    if f.single or f.left_state is None or f.right_state is None:
        return s
    a, b = f.left_state, f.right_state
    db, d2 = s.db, s.d2
    if a.db.hi is not None and b.db.hi is not None:
        db = db.lower_hi(a.db.hi + b.db.hi)
    if b.db.hi is not None:
        db = db.raise_lo(a.db.lo - b.db.hi)
    if a.db.hi is not None:
        db = db.raise_lo(b.db.lo - a.db.hi)
    if d2 is not None and a.d2 is not None and b.d2 is not None:
        if a.d2.hi is not None and b.d2.hi is not None:
            d2 = d2.lower_hi(a.d2.hi + b.d2.hi)
        if b.d2.hi is not None:
            d2 = d2.raise_lo(a.d2.lo - b.d2.hi)
        if a.d2.hi is not None:
            d2 = d2.raise_lo(b.d2.lo - a.d2.hi)
    return replace(s, db=db, d2=d2)


def rule_summand_sum(f: Facts, s: BoundState) -> BoundState:
    """Unknotting each summand separately unknots the sum."""
    if not f.single or len(f.summand_states) < 2:
        return s
    db, d2 = s.db, s.d2
    if all(x.db.hi is not None for x in f.summand_states):
        db = db.lower_hi(sum(x.db.hi for x in f.summand_states))
    if d2 is not None and all(x.d2 is not None and x.d2.hi is not None for x in f.summand_states):
        d2 = d2.lower_hi(sum(x.d2.hi for x in f.summand_states))
    return replace(s, db=db, d2=d2)


def rule_asserted(f: Facts, s: BoundState) -> BoundState:
    if f.mode != "asserted" or not f.single:
        return s
    db, d2 = s.db, s.d2
    if f.left.asserted_bu is not None:
        db = db.lower_hi(f.left.asserted_bu)
    if f.left.asserted_u2 is not None and d2 is not None:
        d2 = d2.lower_hi(f.left.asserted_u2)
    return replace(s, db=db, d2=d2)


def rule_signature_gap(f: Facts, s: BoundState) -> BoundState:
    if not f.knots or s.d2 is None or s.d2.pinned() != 3:
        return s
    a, b = _pair_invariants(f)
    if abs(a.signature - b.signature) >= 4:
        return replace(s, db=s.db.raise_lo(3))
    return s


@dataclass(frozen=True)
class Rule:
    id: str
    ref: str
    fn: RuleFn
    asserted: bool = False


RULES: tuple[Rule, ...] = (
    Rule("e2", "double-cover homology: bd(L,M) >= |e2(L) - e2(M)|", rule_e2),
    Rule("delta", "Jones value at omega: |V(L;w)/V(M;w)| = sqrt3^n implies bd >= |n|", rule_delta),
    Rule("lambda", "Q value lambda: ratio +sqrt5^n gives bd >= |n|, -sqrt5^n gives bd >= |n|+1", rule_lambda),
    Rule("moebius", "Moebius band in B4: sigma - 4 Arf = 0 or +-2 mod 8 when bu <= 1", rule_moebius),
    Rule("linking_form", "one twisted band from the unknot forces a cyclic double-cover linking form "
                         "with a generator of self-linking +-1/det", rule_linking_form),
    Rule("distance_two", "V(J;w)/V(K;w) = 3 with signature/Arf condition implies d2 >= 3", rule_distance_two),
    Rule("upper_from_u", "crossing changes: bd <= d (d even) or d+1 (d odd); d2 <= d+1; "
                         "unknotting-number-one knots give bd(J,K) <= 2 and bu(J#K) <= 2", rule_upper_from_u),
    Rule("triangle", "metric triangle inequality through the unknot", rule_triangle),
    Rule("summand_sum", "subadditivity under connected sum", rule_summand_sum),
    Rule("asserted", "published band certificates (upper bounds)", rule_asserted, asserted=True),
    Rule("signature_gap", "d2 = 3 and bd = 2 force |sigma(J) - sigma(K)| <= 2", rule_signature_gap),
)
RULE_BY_ID = {r.id: r for r in RULES}
PARITY = Rule("parity", "bd = d2 - 1 or d2; bd odd implies bd = d2", lambda f, s: parity_closure(s))


def _feasible_h(b: int) -> list[int]:
    return [b, b + 1] if b >= 2 and b % 2 == 0 else [b]


def parity_closure(s: BoundState) -> BoundState:
    """Shrink both intervals to values with a jointly feasible partner."""
    if s.d2 is None:
        return s
    B, H = s.db, s.d2
    if B.empty or H.empty:
        raise ValueError("empty interval")
    finite = [x for x in (B.lo, B.hi, H.lo, H.hi) if x is not None]
    window = max(finite) + 2
    b_top = B.hi if B.hi is not None else window
    h_top = H.hi if H.hi is not None else window
    ok_b, ok_h = [], []
    for b in range(B.lo, b_top + 1):
        hs = [h for h in _feasible_h(b) if h >= H.lo and h <= h_top]
        if hs:
            ok_b.append(b)
            ok_h.extend(hs)
    if not ok_b:
        raise ValueError(f"no jointly feasible values in bd {B} and d2 {H}")
    unbounded = B.hi is None and H.hi is None
    nb = Interval(min(ok_b), None if unbounded else max(ok_b))
    nh = Interval(min(ok_h), None if unbounded else max(ok_h))
    return replace(s, db=nb, d2=nh)


# ---------------------------------------------------------------------------
# orchestration


def initial_state(f: Facts) -> BoundState:
    return BoundState(Interval(), Interval() if f.knots else None)


def _apply(rule: Rule, f: Facts, s: BoundState, trace: list[dict]) -> BoundState:
    before = s
    try:
        after = rule.fn(f, s)
        if after.db.empty or (after.d2 is not None and after.d2.empty):
            raise ValueError(f"rule produced an empty interval: bd {after.db}, d2 {after.d2}")
    except ValueError as exc:
        raise Contradiction(f"{rule.id}: {exc}", trace) from None
    if after.key() != before.key():
        trace.append({
            "rule": rule.id,
            "paper_ref": rule.ref,
            "before": before.snapshot(),
            "after": after.snapshot(),
            "asserted": rule.asserted,
        })
    return after


def deduce(f: Facts, max_rounds: int = 64) -> BoundState:
    trace: list[dict] = []
    s = _apply(PARITY, f, initial_state(f), trace)
    for _ in range(max_rounds):
        start = s.key()
        for rule in RULES:
            if rule.asserted and f.mode != "asserted":
                continue
            s = _apply(rule, f, s, trace)
            s = _apply(PARITY, f, s, trace)
        if s.key() == start:
            break
    return replace(s, trace=tuple(trace))


def replay(f: Facts, trace) -> BoundState:
    """Re-apply the recorded rules from the initial state, checking every step."""
    s = initial_state(f)
    for entry in trace:
        rule = PARITY if entry["rule"] == "parity" else RULE_BY_ID[entry["rule"]]
        if s.snapshot() != entry["before"]:
            raise AssertionError(f"replay diverged before {entry['rule']}")
        s = rule.fn(f, s)
        if s.snapshot() != entry["after"]:
            raise AssertionError(f"replay diverged after {entry['rule']}")
    return replace(s, trace=tuple(trace))


SliceVerdict = Literal["NotSlice", "Inconclusive"]


def slice_obstruction(inv: InvariantSet) -> SliceVerdict:
    if inv.components != 1:
        raise ValueError("slice obstruction applies to knots")
    return "NotSlice" if inv.v_omega == Cyclo12.from_int(-1) else "Inconclusive"


# ---------------------------------------------------------------------------
# building facts from expressions


def _flip(name: str) -> str:
    return name[:-1] if name.endswith("!") else name + "!"


def _table_index(table: KnotTable) -> dict[tuple[str, ...], KnotRecord]:
    index = {}
    for rec in table.records.values():
        index[tuple(sorted(rec.name.split("#")))] = rec
    return index


def _lookup(table: KnotTable, parts: list[KnotExpr]) -> KnotRecord | None:
    """Table record for a sum of named knots, up to order and global mirror."""
    if not all(isinstance(p, Name) or (isinstance(p, Mirror) and isinstance(p.operand, Name)) for p in parts):
        return None
    names = [render_expr(p) for p in parts]
    index = _table_index(table)
    for key in (tuple(sorted(names)), tuple(sorted(_flip(n) for n in names))):
        if key in index:
            return index[key]
    return None


def _summand_u(e: KnotExpr, d: PlanarDiagram, table: KnotTable) -> tuple[int, int] | None:
    if simplify(d).n == 0:
        return (0, 0)
    rec = _lookup(table, [e])
    if rec is not None:
        return rec.u
    base = e.operand if isinstance(e, Mirror) else e
    if isinstance(base, Family):
        # every nontrivial member of the family is one crossing change from the unknot
        return (1, 1)
    return None


def _operand_inv(d: PlanarDiagram, evaluator: QEvaluator | None) -> InvariantSet:
    return invariants(d, q_evaluator=evaluator)


def build_operand(text_or_expr, table: KnotTable, evaluator: QEvaluator | None = None,
                  _inv_cache: dict | None = None) -> Operand:
    e = parse_expr(text_or_expr) if isinstance(text_or_expr, str) else text_or_expr
    cache = {} if _inv_cache is None else _inv_cache

    def inv_of(d):
        key = canonical_code(d)
        if key not in cache:
            cache[key] = _operand_inv(d, evaluator)
        return cache[key]

    d = expr_diagram(e, table)
    inv = inv_of(d)
    parts = summands(e)
    part_diagrams = [expr_diagram(p, table) for p in parts]
    part_u = tuple(_summand_u(p, pd, table) for p, pd in zip(parts, part_diagrams))
    rec = _lookup(table, parts)
    asserted_bu = asserted_u2 = None
    provenance = ""
    if simplify(d).n == 0 and d.free_loops <= 1 and inv.components == 1:
        u: tuple[int, int] | None = (0, 0)
    elif rec is not None:
        u = rec.u
        provenance = rec.note
        if not rec.ambiguous:
            asserted_bu, asserted_u2 = rec.bu, rec.u2
    elif len(parts) == 1:
        u = part_u[0]
    elif all(x is not None for x in part_u):
        # crossing changes on separate summands unknot the sum
        u = (0, sum(x[1] for x in part_u))
    else:
        u = None
    subs: tuple[Operand, ...] = ()
    if len(parts) > 1 and inv.components == 1:
        subs = tuple(build_operand(p, table, evaluator, cache) for p in parts)
    return Operand(
        label=render_expr(e), inv=inv, u=u if inv.components == 1 else None,
        summand_u=part_u if len(parts) > 1 else (), asserted_bu=asserted_bu, asserted_u2=asserted_u2,
        provenance=provenance, summands=subs,
    )


def solve_single(op: Operand, mode: Mode = "derived") -> BoundState:
    sub_states = tuple(solve_single(s, mode) for s in op.summands)
    return deduce(single_facts(op, mode, sub_states))


def single_facts(op: Operand, mode: Mode = "derived", sub_states: tuple[BoundState, ...] = ()) -> Facts:
    return Facts(left=op, mode=mode, summand_states=sub_states)


def pair_facts(a: Operand, b: Operand, mode: Mode = "derived",
               gordian: tuple[int, int] | None = None) -> Facts:
    return Facts(left=a, right=b, gordian=gordian, mode=mode,
                 left_state=solve_single(a, mode), right_state=solve_single(b, mode))


def solve_pair(a: Operand, b: Operand, mode: Mode = "derived",
               gordian: tuple[int, int] | None = None) -> BoundState:
    return deduce(pair_facts(a, b, mode, gordian))
