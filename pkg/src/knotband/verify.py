"""Verification suites comparing computed values with the published family formulas and tables.

Each suite returns a :class:`SuiteResult` holding one :class:`Check` per
comparison.  Expected values below are transcribed from the published
statements; nothing here is fitted to the computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .algebra import Cyclo12, LaurentPoly, classify_golden, determinant, smith_normal_form
from .bounds import Operand, build_operand, slice_obstruction, solve_pair, solve_single
from .diagram import switch
from .invariants import InvariantSet, QEvaluator, goeritz, invariants, jones
from .invariants.jones import jones_in_t
from .notation import KM_STAR, KnotTable, km_diagram, parse_knot_expr


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteResult:
    name: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "total": len(self.checks),
            "failed": sum(1 for c in self.checks if not c.passed),
            "checks": [c.to_json() for c in self.checks],
        }


def t_poly(terms: dict[int, int]) -> LaurentPoly:
    return LaurentPoly(terms, var="t")


T = t_poly({1: 1})
T_INV = t_poly({-1: 1})

# Jones polynomials of K_{-1} = 6_2 and K_0 = 6_3
V_K_MINUS1 = t_poly({-5: 1, -4: -2, -3: 2, -2: -2, -1: 2, 0: -1, 1: 1})
V_K0 = t_poly({-3: -1, -2: 2, -1: -2, 0: 3, 1: -2, 2: 2, 3: -1})
# t^-1 V(K_{m-2}) - t V(K_m), by parity of m
KM_SKEIN_EVEN = t_poly({0: 1, 1: -1, 2: 1, 3: -1})
KM_SKEIN_ODD = t_poly({-3: 1, -2: -1, -1: 1, 0: -1})

I_SQRT3 = Cyclo12.i() * Cyclo12.sqrt3()
ONE = Cyclo12.from_int(1)
MINUS_ONE = Cyclo12.from_int(-1)


def expected_km_arf(m: int) -> int:
    n = m // 2 if m % 2 == 0 else (m + 1) // 2
    return (n + 1) % 2


def expected_km_signature(m: int) -> int:
    if m % 2 == 0:
        return 0 if m // 2 >= -3 else -2
    return 0 if (m + 1) // 2 <= -3 else 2


def expected_km_omega(m: int) -> Cyclo12:
    if m % 2 == 0:
        return (ONE, MINUS_ONE, I_SQRT3)[(m // 2) % 3]
    return (ONE, -I_SQRT3, MINUS_ONE)[((m + 1) // 2) % 3]


# (sigma, Arf, V(omega)) per published column
FAMILY_TABLE_NAMED = {
    "3_1": (2, 1, -I_SQRT3),
    "3_1!": (-2, 1, I_SQRT3),
    "6_1": (0, 0, I_SQRT3),
    "6_1!": (0, 0, -I_SQRT3),
}
FAMILY_TABLE_COLUMNS = (
    # (label, m(l), l values within the column's range, expected)
    ("K[12l+1]", lambda l: 12 * l + 1, (0, 1, 2), (2, 0, -I_SQRT3)),
    ("K[12l+4]", lambda l: 12 * l + 4, (0, 1, 2), (0, 1, I_SQRT3)),
    ("K[12l+7]", lambda l: 12 * l + 7, (-2, -1), (0, 1, -I_SQRT3)),
    ("K[12l-2]", lambda l: 12 * l - 2, (-2, -1), (-2, 0, I_SQRT3)),
)


def jl_expr(l: int) -> str:
    return f"K[{12 * l + 1}]#3_1!" if l >= 0 else f"K[{12 * l - 2}]#3_1"


@dataclass
class Context:
    table: KnotTable
    evaluator: QEvaluator = field(default_factory=QEvaluator)

    def __post_init__(self):
        self._km = lru_cache(maxsize=None)(self._km_uncached)

    def _km_uncached(self, m: int) -> InvariantSet:
        return invariants(km_diagram(m), with_q=False)

    def km(self, m: int) -> InvariantSet:
        return self._km(m)

    def inv(self, expr: str) -> InvariantSet:
        return invariants(parse_knot_expr(expr, self.table), q_evaluator=self.evaluator)

    def operand(self, expr: str) -> Operand:
        return build_operand(expr, self.table, self.evaluator)


def _render(v) -> str:
    return v.render() if hasattr(v, "render") else str(v)


def suite_jones_exact(ctx: Context, rng=None) -> SuiteResult:
    res = SuiteResult("jones-exact")
    for label, diagram, expected in (
        ("V(6_2)", ctx.table["6_2"].pd, V_K_MINUS1),
        ("V(6_3)", ctx.table["6_3"].pd, V_K0),
        ("V(K[-1])", km_diagram(-1), V_K_MINUS1),
        ("V(K[0])", km_diagram(0), V_K0),
    ):
        got = jones_in_t(jones(diagram))
        res.add(label, got == expected, f"got {got.render('t')}, expected {expected.render('t')}")
    return res


def suite_km_recurrence(ctx: Context, rng=(-10, 10)) -> SuiteResult:
    res = SuiteResult("km-recurrence")
    for m in range(rng[0], rng[1] + 1):
        lhs = T_INV * jones_in_t(ctx.km(m - 2).jones) - T * jones_in_t(ctx.km(m).jones)
        rhs = KM_SKEIN_EVEN if m % 2 == 0 else KM_SKEIN_ODD
        res.add(f"m={m}", lhs == rhs, f"lhs {lhs.render('t')}, expected {rhs.render('t')}")
    return res


def suite_km_closed_forms(ctx: Context, rng=(-12, 12)) -> SuiteResult:
    res = SuiteResult("km-closed-forms")
    for m in range(rng[0], rng[1] + 1):
        inv = ctx.km(m)
        res.add(f"Arf(K[{m}])", inv.arf == expected_km_arf(m), f"got {inv.arf}, expected {expected_km_arf(m)}")
        res.add(f"sigma(K[{m}])", inv.signature == expected_km_signature(m),
                f"got {inv.signature}, expected {expected_km_signature(m)}")
        want = expected_km_omega(m)
        res.add(f"V(K[{m}];w)", inv.v_omega == want, f"got {inv.v_omega.render()}, expected {want.render()}")
        # one crossing change at the marked crossing unknots K_m
        flipped = jones(switch(km_diagram(m), KM_STAR))
        res.add(f"star switch of K[{m}]", flipped == LaurentPoly.const(1, "q"), f"V = {flipped.render('q')}")
    return res


def _family_table_cell(res: SuiteResult, label: str, inv: InvariantSet, expected) -> None:
    sig, arf, omega = expected
    res.add(f"sigma({label})", inv.signature == sig, f"got {inv.signature}, published {sig}")
    res.add(f"Arf({label})", inv.arf == arf, f"got {inv.arf}, published {arf}")
    res.add(f"V({label};w)", inv.v_omega == omega, f"got {inv.v_omega.render()}, published {omega.render()}")


def suite_family_table(ctx: Context, rng=None) -> SuiteResult:
    res = SuiteResult("family-table")
    for name, expected in FAMILY_TABLE_NAMED.items():
        _family_table_cell(res, name, invariants(parse_knot_expr(name, ctx.table), with_q=False), expected)
    for label, fm, ls, expected in FAMILY_TABLE_COLUMNS:
        for l in ls:
            m = fm(l)
            _family_table_cell(res, f"{label} l={l} (K[{m}])", ctx.km(m), expected)
    return res


def suite_jl_family(ctx: Context, rng=(-3, 3)) -> SuiteResult:
    res = SuiteResult("jl-family")
    for l in range(rng[0], rng[1] + 1):
        expr = jl_expr(l)
        op = ctx.operand(expr)
        inv = op.inv
        res.add(f"J_{l} = {expr}: sigma, Arf, V(w)",
                (inv.signature, inv.arf, inv.v_omega) == (0, 1, Cyclo12.from_int(3)),
                f"sigma {inv.signature}, Arf {inv.arf}, V(w) {inv.v_omega.render()}")
        st = solve_single(op, "derived")
        res.add(f"J_{l}: bu = [2,2], u2 = [3,3] (derived)",
                st.db.to_json() == [2, 2] and st.d2.to_json() == [3, 3], f"bu {st.db}, u2 {st.d2}")
    return res


def table_diagrams(ctx: Context, max_crossings: int = 9):
    for name in ctx.table.names():
        rec = ctx.table[name]
        if rec.crossings <= max_crossings:
            yield name, rec


def suite_identities(ctx: Context, rng=None) -> SuiteResult:
    res = SuiteResult("identities")
    for name, rec in table_diagrams(ctx):
        inv = invariants(rec.pd, q_evaluator=ctx.evaluator)
        g = goeritz(rec.pd)
        factors = smith_normal_form(g.matrix).nontrivial() if g.matrix else []
        delta = sum(1 for f in factors if f % 3 == 0)
        r = sum(1 for f in factors if f % 5 == 0)
        det = abs(determinant(g.matrix)) if g.matrix else 1
        re, im = inv.v_minus1
        res.add(f"{name}: |V(w)|^2 = 3^delta", inv.v_omega.norm_squared() == 3 ** delta,
                f"|V(w)|^2 = {inv.v_omega.norm_squared()}, delta = {delta}")
        res.add(f"{name}: |V(-1)| = |det G|", im == 0 and abs(re) == det, f"V(-1) = {re}, det = {det}")
        res.add(f"{name}: (-1)^(sigma/2) = sign V(-1)", (-1) ** ((inv.signature // 2) % 2) == (1 if re > 0 else -1),
                f"sigma {inv.signature}, V(-1) = {re}")
        lam = classify_golden(inv.lam) if inv.lam is not None else None
        res.add(f"{name}: lambda = +-sqrt5^r", lam is not None and lam[1] == r,
                f"lambda {_render(inv.lam)}, r = {r}")
    return res


def published_rows(table: KnotTable):
    for name in table.names():
        rec = table[name]
        if rec.note.startswith("published table") or rec.ambiguous:
            yield name, rec


def suite_bounds_table(ctx: Context, rng=None) -> SuiteResult:
    res = SuiteResult("bounds-table")
    for name, rec in published_rows(ctx.table):
        if rec.ambiguous:
            continue
        bu, u2 = rec.bu, rec.u2
        res.add(f"{name}: published (bu, u2) = ({bu}, {u2}) satisfies parity",
                bu in (u2 - 1, u2) and (bu % 2 == 0 or bu == u2))
        op = ctx.operand(name)
        a = solve_single(op, "asserted")
        res.add(f"{name}: asserted intervals collapse",
                a.db.to_json() == [bu, bu] and a.d2.to_json() == [u2, u2], f"bu {a.db}, u2 {a.d2}")
        d = solve_single(op, "derived")
        inside = d.db.lo <= bu and (d.db.hi is None or bu <= d.db.hi) \
            and d.d2.lo <= u2 and (d.d2.hi is None or u2 <= d.d2.hi)
        res.add(f"{name}: derived intervals contain published values", inside, f"bu {d.db}, u2 {d.d2}")
    return res


def _fired(state, rule: str) -> bool:
    return any(e["rule"] == rule for e in state.trace)


def suite_named_bounds(ctx: Context, rng=None) -> SuiteResult:
    res = SuiteResult("named-bounds")
    st = solve_single(ctx.operand("9_49"), "derived")
    res.add("bu(9_49) >= 3 from lambda = -5", st.db.lo >= 3 and _fired(st, "lambda"), f"bu {st.db}")
    st = solve_single(ctx.operand("8_18"), "derived")
    res.add("u2(8_18) >= 3 from V(w) = 3", st.d2.lo >= 3 and _fired(st, "distance_two"), f"u2 {st.d2}")
    st = solve_single(ctx.operand("6_2#9_35"), "asserted")
    res.add("bu(6_2#9_35) = 3 from the signature gap", st.db.to_json() == [3, 3] and _fired(st, "signature_gap"),
            f"bu {st.db}")
    st = solve_pair(ctx.operand("5_1!"), ctx.operand("3_1#3_1"), "asserted")
    res.add("bd(5_1!, 3_1#3_1) = 3", st.db.to_json() == [3, 3] and _fired(st, "signature_gap"), f"bd {st.db}")
    st = solve_pair(ctx.operand("5_1"), ctx.operand("3_1#3_1"), "derived", gordian=(2, 2))
    res.add("bd(5_1, 3_1#3_1) <= 2 given d = 2", st.db.hi is not None and st.db.hi <= 2, f"bd {st.db}")
    st = solve_pair(ctx.operand("6_1!"), ctx.operand("7_7"), "derived")
    res.add("bd(6_1!, 7_7) <= 2", st.db.hi is not None and st.db.hi <= 2, f"bd {st.db}")
    for n in (1, 2, 3):
        expr = "#".join(["4_1"] + ["5_1"] * n)
        st = solve_single(ctx.operand(expr), "derived")
        res.add(f"bu({expr}) >= {n + 2} from lambda", st.db.lo >= n + 2, f"bu {st.db}")
    return res


def suite_slice(ctx: Context, rng=None) -> SuiteResult:
    res = SuiteResult("slice")
    res.add("9_44 is not slice", slice_obstruction(ctx.inv("9_44")) == "NotSlice")
    res.add("K[2] is not slice", slice_obstruction(ctx.inv("K[2]")) == "NotSlice")
    res.add("unknot inconclusive", slice_obstruction(ctx.inv("U")) == "Inconclusive")
    for name, rec in table_diagrams(ctx):
        inv = invariants(rec.pd, with_q=False)
        want = "NotSlice" if inv.v_omega == MINUS_ONE else "Inconclusive"
        res.add(f"{name}: {want}", slice_obstruction(inv) == want, f"V(w) = {inv.v_omega.render()}")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "jones-exact": suite_jones_exact,
    "km-recurrence": suite_km_recurrence,
    "km-closed-forms": suite_km_closed_forms,
    "family-table": suite_family_table,
    "jl-family": suite_jl_family,
    "identities": suite_identities,
    "bounds-table": suite_bounds_table,
    "named-bounds": suite_named_bounds,
    "slice": suite_slice,
}
RANGED = {"km-recurrence", "km-closed-forms", "jl-family"}


def run_suites(table: KnotTable, names=None, rng: tuple[int, int] | None = None) -> list[SuiteResult]:
    ctx = Context(table)
    out = []
    for name in names or SUITES:
        fn = SUITES[name]
        out.append(fn(ctx, rng) if rng is not None and name in RANGED else fn(ctx))
    return out
