"""Kauffman bracket and Jones polynomial.

The bracket is computed by a frontier sweep: crossings are absorbed one at a
time and the state records, for every partially built set of smoothing
curves, how the currently open arc ends are paired.  Only the pairing matters
for the rest of the sweep, so states with equal pairings are merged.  Memory
is governed by the frontier width rather than by 2^n.
"""

from __future__ import annotations

from ..algebra import LaurentPoly
from ..diagram import Orientation, PlanarDiagram, default_orientation, writhe

# d = -A^2 - A^-2, as exponent -> coefficient
_LOOP = {2: -1, -2: -1}


def _sweep_order(d: PlanarDiagram) -> list[int]:
    """Greedy order keeping the set of open arcs small."""
    remaining = set(range(d.n))
    open_count: dict[int, int] = {}
    order = []
    while remaining:
        def score(i):
            x = d.crossings[i]
            closes = sum(1 for a in x if open_count.get(a, 0) == 1)
            return (-closes, i)

        best = min(remaining, key=score)
        remaining.remove(best)
        order.append(best)
        for a in d.crossings[best]:
            open_count[a] = open_count.get(a, 0) + 1
    return order


def _connect(m: dict[int, int], x: int, y: int) -> int:
    """Add a curve segment x-y to pairing ``m``; return number of loops closed."""
    if x == y:
        return 1
    ex = m.pop(x) if x in m else x
    ey = m.pop(y) if y in m else y
    if ex == y:
        return 1
    m[ex] = ey
    m[ey] = ex
    return 0


def _mul_loops(poly: dict[int, int], k: int) -> dict[int, int]:
    for _ in range(k):
        out: dict[int, int] = {}
        for e, c in poly.items():
            for de, dc in _LOOP.items():
                out[e + de] = out.get(e + de, 0) + c * dc
        poly = {e: c for e, c in out.items() if c}
    return poly


def _add_into(acc: dict, key, poly: dict[int, int]):
    cur = acc.get(key)
    if cur is None:
        acc[key] = dict(poly)
        return
    for e, c in poly.items():
        v = cur.get(e, 0) + c
        if v:
            cur[e] = v
        else:
            cur.pop(e, None)


def kauffman_bracket(d: PlanarDiagram) -> LaurentPoly:
    """Bracket in the variable A, normalised so a single loop has bracket 1."""
    loop = LaurentPoly(_LOOP, var="A")
    if d.n == 0:
        return loop ** (d.free_loops - 1)
    states: dict[frozenset, dict[int, int]] = {frozenset(): {0: 1}}
    for i in _sweep_order(d):
        a, b, c, e = d.crossings[i]
        nxt: dict[frozenset, dict[int, int]] = {}
        for key, poly in states.items():
            for shift, pairs in ((1, ((a, b), (c, e))), (-1, ((a, e), (b, c)))):
                m = dict(key)
                loops = 0
                for x, y in pairs:
                    loops += _connect(m, x, y)
                p = {ex + shift: co for ex, co in poly.items()}
                if loops:
                    p = _mul_loops(p, loops)
                if p:
                    _add_into(nxt, frozenset(m.items()), p)
        states = {k: v for k, v in nxt.items() if v}
    total = states.get(frozenset(), {})
    raw = LaurentPoly(total, var="A")
    return raw.divide_exact(loop) * loop ** d.free_loops


def jones(d: PlanarDiagram, o: Orientation | None = None) -> LaurentPoly:
    """Jones polynomial in q = t^(1/2).

    V = (-A^3)^(-w) <D> with A = q^(-1/2); exponents of q are integral for
    every link, and even for knots.
    """
    br = kauffman_bracket(d)
    w = writhe(d, o or default_orientation(d)) if d.n else 0
    f = br * LaurentPoly.monomial(-3 * w, -1 if w % 2 else 1, var="A")
    out = {}
    for e, c in f.terms().items():
        if e % 2:
            raise ArithmeticError("odd A-exponent in normalised bracket")
        out[-e // 2] = c
    return LaurentPoly(out, var="q")


def jones_in_t(v: LaurentPoly) -> LaurentPoly:
    """Re-express a knot's Jones polynomial (in q) in t = q^2."""
    out = {}
    for e, c in v.terms().items():
        if e % 2:
            raise ValueError("half-integral power of t; not a knot polynomial")
        out[e // 2] = c
    return LaurentPoly(out, var="t")


def t_poly_to_q(v: LaurentPoly) -> LaurentPoly:
    return v.scale_exponents(2).with_var("q")
