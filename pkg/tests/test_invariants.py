import itertools
import random

import pytest

from knotband.algebra import Cyclo12, LaurentPoly
from knotband.diagram import (
    PlanarDiagram,
    component_count,
    crossing_sign,
    default_orientation,
    mirror,
    orientation_from_components,
    smooth,
    switch,
    unknot,
    unlink,
)
from knotband.invariants import QEvaluator, identity_checks, invariants, jones, link_determinant, q_polynomial, signature
from knotband.notation import HOPF_POSITIVE, connected_sum, km_diagram, parse_knot_expr

# Reference PD codes as listed by KnotInfo (their chirality, not the bundled table's).
KNOTINFO_10_132 = PlanarDiagram(((1, 8, 2, 9), (3, 18, 4, 19), (5, 12, 6, 13), (7, 10, 8, 11), (9, 2, 10, 3),
                                 (11, 6, 12, 7), (14, 20, 15, 19), (16, 14, 17, 13), (17, 4, 18, 5), (20, 16, 1, 15)))
KNOTINFO_10_133 = PlanarDiagram(((2, 16, 3, 15), (4, 2, 5, 1), (7, 13, 8, 12), (9, 7, 10, 6), (11, 18, 12, 19),
                                 (13, 9, 14, 8), (14, 20, 15, 19), (16, 4, 17, 3), (17, 10, 18, 11), (20, 6, 1, 5)))

Q = LaurentPoly({1: 1}, var="q")
Z = LaurentPoly({1: 1}, var="z")


def tq(terms: dict[int, int]) -> LaurentPoly:
    """Jones polynomial given in powers of t, returned in q = t^(1/2)."""
    return LaurentPoly({2 * e: c for e, c in terms.items()}, var="q")


def zp(terms: dict[int, int]) -> LaurentPoly:
    return LaurentPoly(terms, var="z")


@pytest.fixture(scope="module")
def qeval():
    return QEvaluator()


# -- known values ------------------------------------------------------------------


def test_unknot_and_unlink(qeval):
    assert jones(unknot()) == LaurentPoly.const(1, "q")
    assert jones(unlink(2)) == -(Q + Q ** -1)
    assert q_polynomial(unknot(), qeval) == zp({0: 1})
    assert q_polynomial(unlink(2), qeval) == zp({-1: 2, 0: -1})
    assert link_determinant(unlink(2)) == 0


def test_trefoil_and_figure_eight(table, qeval):
    t = invariants(table["3_1"].pd, q_evaluator=qeval)
    assert t.jones == tq({-4: -1, -3: 1, -1: 1})
    assert (t.signature, t.det, t.arf, t.h1_factors) == (2, 3, 1, (3,))
    assert t.q_poly == zp({0: -3, 1: 2, 2: 2})
    f = invariants(table["4_1"].pd, q_evaluator=qeval)
    assert f.jones == tq({-2: 1, -1: -1, 0: 1, 1: -1, 2: 1})
    assert (f.signature, f.det, f.arf) == (0, 5, 1)
    assert f.q_poly == zp({0: -3, 1: -2, 2: 4, 3: 2})


def test_hopf_link():
    inv = invariants(HOPF_POSITIVE, with_q=False)
    assert inv.components == 2
    assert inv.jones == -(Q + Q ** 5)
    assert inv.det == 2
    assert inv.signature == -1
    assert inv.arf is None


@pytest.mark.parametrize("m, name", [(0, "6_3"), (-1, "6_2"), (1, "8_21"), (2, "9_44"), (-2, "8_20!"), (-3, "9_42!")])
def test_km_matches_named_knot(table, m, name):
    k = invariants(km_diagram(m), with_q=False)
    n = invariants(parse_knot_expr(name, table), with_q=False)
    assert (k.jones, k.signature, k.det) == (n.jones, n.signature, n.det)


def test_knotinfo_reference_codes(table):
    # 10_132 shares its Jones polynomial with a (5,2) torus knot
    v = jones(KNOTINFO_10_132)
    assert v in (jones(table["5_1"].pd), jones(mirror(table["5_1"].pd)))
    assert link_determinant(KNOTINFO_10_132) == 5
    assert jones(km_diagram(3)) == jones(mirror(KNOTINFO_10_133))
    assert jones(km_diagram(-4)) == jones(mirror(KNOTINFO_10_132))


# -- skein relations -------------------------------------------------------------------


def _signs(d: PlanarDiagram, o) -> list[int]:
    return [crossing_sign(d, o, i) for i in range(d.n)]


def consistent_orientation(d: PlanarDiagram, want: list[int]):
    """An orientation of ``d`` realising the given crossing signs.

    Reversing a set of components flips exactly the crossings between that set
    and its complement, so matching every sign pins the orientation down to
    what matters for the Jones polynomial.
    """
    k = component_count(d) - d.free_loops
    for rev in itertools.product((False, True), repeat=max(k - 1, 0)):
        o = orientation_from_components(d, (False,) + rev)
        if _signs(d, o) == want:
            return o
    raise AssertionError("no orientation matches the inherited crossing signs")


def oriented_smoothing(d: PlanarDiagram, o, c: int):
    x = d.crossings[c]
    under_in = 0 if o.heads[x[0]] == (c, 0) else 2
    over_in = 1 if o.heads[x[1]] == (c, 1) else 3
    # the oriented resolution joins the incoming under strand to the outgoing over strand
    pair = {under_in, (over_in + 2) % 4}
    mode = "A" if pair in ({0, 1}, {2, 3}) else "B"
    rest = [s for i, s in enumerate(_signs(d, o)) if i != c]
    d0 = smooth(d, c, mode)
    return d0, consistent_orientation(d0, rest) if d0.n else None


def jones_skein_holds(d: PlanarDiagram, c: int) -> bool:
    o = default_orientation(d)
    signs = _signs(d, o)
    other = switch(d, c)
    flipped = list(signs)
    flipped[c] = -signs[c]
    v_this = jones(d, o)
    v_other = jones(other, consistent_orientation(other, flipped))
    v_plus, v_minus = (v_this, v_other) if signs[c] > 0 else (v_other, v_this)
    d0, o0 = oriented_smoothing(d, o, c)
    v0 = jones(d0, o0)
    # t^-1 V(L+) - t V(L-) = (t^(1/2) - t^(-1/2)) V(L0)
    return Q ** -2 * v_plus - Q ** 2 * v_minus == (Q - Q ** -1) * v0


def q_skein_holds(d: PlanarDiagram, c: int, qeval: QEvaluator) -> bool:
    lhs = q_polynomial(d, qeval) + q_polynomial(switch(d, c), qeval)
    rhs = Z * (q_polynomial(smooth(d, c, "A"), qeval) + q_polynomial(smooth(d, c, "B"), qeval))
    return lhs == rhs


def skein_failures(table, qeval) -> list[str]:
    bad = []
    for name in table.names():
        d = table[name].pd
        for c in range(d.n):
            if not jones_skein_holds(d, c):
                bad.append(f"V {name} crossing {c}")
            if not q_skein_holds(d, c, qeval):
                bad.append(f"Q {name} crossing {c}")
    return bad


def test_skein_on_links():
    for d in (HOPF_POSITIVE, parse_knot_expr("hopf-", None)):
        for c in range(d.n):
            assert jones_skein_holds(d, c)


def test_skein_relations_on_table(table, qeval):
    assert skein_failures(table, qeval) == []


# -- mirror and connected sum -----------------------------------------------------------


def mirror_failures(table, qeval) -> list[str]:
    bad = []
    for name in table.names():
        a = invariants(table[name].pd, q_evaluator=qeval)
        b = invariants(mirror(table[name].pd), q_evaluator=qeval)
        same = (
            b.jones == a.jones.invert_variable()
            and b.signature == -a.signature
            and b.arf == a.arf
            and b.det == a.det
            and b.q_poly == a.q_poly
            and b.lam == a.lam
            and b.v_omega == a.v_omega.conjugate()
        )
        if not same:
            bad.append(name)
    return bad


def random_pairs(table, count: int = 50, seed: int = 7):
    rng = random.Random(seed)
    names = [n for n in table.names() if "#" not in n]
    for _ in range(count):
        a, b = rng.sample(names, 2)
        yield a + ("!" if rng.random() < 0.5 else ""), b + ("!" if rng.random() < 0.5 else "")


def sum_failures(table, qeval) -> list[str]:
    bad = []
    for a, b in random_pairs(table):
        x = invariants(parse_knot_expr(a, table), q_evaluator=qeval)
        y = invariants(parse_knot_expr(b, table), q_evaluator=qeval)
        s = invariants(parse_knot_expr(f"{a}#{b}", table), q_evaluator=qeval)
        ok = (
            s.jones == x.jones * y.jones
            and s.q_poly == x.q_poly * y.q_poly
            and s.signature == x.signature + y.signature
            and s.det == x.det * y.det
            and s.arf == (x.arf + y.arf) % 2
            and s.v_omega == x.v_omega * y.v_omega
            and s.delta == x.delta + y.delta
            and s.r == x.r + y.r
            and all(v is not False for v in identity_checks(s).values())
        )
        if not ok:
            bad.append(f"{a}#{b}")
    return bad


def test_mirror_behaviour(table, qeval):
    assert mirror_failures(table, qeval) == []


def test_connected_sum_behaviour(table, qeval):
    assert sum_failures(table, qeval) == []


def test_sum_with_unknot_preserves_invariants(table, qeval):
    d = table["7_7"].pd
    a = invariants(d, q_evaluator=qeval)
    b = invariants(connected_sum(d, unknot()), q_evaluator=qeval)
    assert a == b


def test_identity_checks_on_small_table(table, qeval):
    for name in table.names():
        if table[name].crossings <= 9:
            checks = identity_checks(invariants(table[name].pd, q_evaluator=qeval))
            assert all(v is not False for v in checks.values()), (name, checks)


def test_signature_bounded_by_crossings(table):
    for name in table.names():
        d = table[name].pd
        s = signature(d)
        assert s % 2 == 0 and abs(s) <= d.n


def test_v_omega_of_slice_obstructed_knot(table):
    assert invariants(table["9_44"].pd, with_q=False).v_omega == Cyclo12.from_int(-1)
